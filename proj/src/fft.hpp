#pragma once

#include <complex>
#include <vector>

namespace dfw::detail {

using ComplexVector = std::vector<std::complex<double>>;

// Unnormalized n-dimensional DFTs of row-major data.
ComplexVector fft_forward(const std::vector<int>& shape, const std::vector<double>& values);
ComplexVector fft_backward(const std::vector<int>& shape, ComplexVector spectrum);

}  // namespace dfw::detail
