#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "dfw/errors.hpp"

namespace dfw::detail {

namespace {

// Planner calls are not thread-safe in FFTW; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void transform(const std::vector<int>& shape, ComplexVector& data, int sign) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), ptr, ptr, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericalError("FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

ComplexVector fft_forward(const std::vector<int>& shape, const std::vector<double>& values) {
  ComplexVector data(values.begin(), values.end());
  transform(shape, data, FFTW_FORWARD);
  return data;
}

ComplexVector fft_backward(const std::vector<int>& shape, ComplexVector spectrum) {
  transform(shape, spectrum, FFTW_BACKWARD);
  return spectrum;
}

}  // namespace dfw::detail
