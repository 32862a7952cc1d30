#include "dfw/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>

#include "dfw/errors.hpp"
#include "dfw/kernels.hpp"
#include "dfw/quadrature.hpp"
#include "fft.hpp"

namespace dfw {

GridFunction::GridFunction(std::vector<int> shape, std::vector<double> period, std::vector<double> values)
    : shape_(std::move(shape)), period_(std::move(period)), values_(std::move(values)) {
  if (shape_.empty()) throw InvalidArgument("grid needs at least one axis");
  if (period_.size() != shape_.size()) throw InvalidArgument("grid period and shape differ in length");
  std::size_t total = 1;
  for (std::size_t a = 0; a < shape_.size(); ++a) {
    if (shape_[a] < 1) throw InvalidArgument("grid shape entries must be >= 1");
    if (!std::isfinite(period_[a]) || !(period_[a] > 0.0)) throw InvalidArgument("grid period entries must be positive");
    spacing_.push_back(period_[a] / shape_[a]);
    total *= static_cast<std::size_t>(shape_[a]);
  }
  if (values_.size() != total) throw InvalidArgument("grid value count does not match its shape");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("grid values must be finite");
  }
}

GridFunction GridFunction::sample(std::vector<int> shape, std::vector<double> period,
                                  const std::function<double(PointRef)>& f) {
  std::size_t total = 1;
  for (int s : shape) total *= static_cast<std::size_t>(std::max(s, 0));
  GridFunction g(shape, period, std::vector<double>(total, 0.0));
  std::vector<double> values(total);
  for (std::size_t p = 0; p < total; ++p) values[p] = f(g.point(p));
  return g.with_values(std::move(values));
}

std::vector<int> GridFunction::index(std::size_t p) const {
  std::vector<int> idx(shape_.size());
  for (std::size_t a = shape_.size(); a-- > 0;) {
    idx[a] = static_cast<int>(p % static_cast<std::size_t>(shape_[a]));
    p /= static_cast<std::size_t>(shape_[a]);
  }
  return idx;
}

Point GridFunction::point(std::size_t p) const {
  const std::vector<int> idx = index(p);
  Point x(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) x[static_cast<Eigen::Index>(a)] = idx[a] * spacing_[a];
  return x;
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
  return GridFunction(shape_, period_, std::move(values));
}

double GridFunction::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Multiplies every Fourier mode by symbol(|kappa|) and transforms back.
GridFunction apply_symbol(const GridFunction& f, const std::function<double(double)>& symbol) {
  detail::ComplexVector spec = detail::fft_forward(f.shape(), f.values());
  for (std::size_t p = 0; p < spec.size(); ++p) {
    const std::vector<int> idx = f.index(p);
    double k2 = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const int n = f.shape()[a];
      const int k = idx[a] <= n / 2 ? idx[a] : idx[a] - n;
      const double kappa = 2.0 * M_PI * k / f.period()[a];
      k2 += kappa * kappa;
    }
    spec[p] *= k2 == 0.0 ? 0.0 : symbol(std::sqrt(k2));
  }
  const detail::ComplexVector back = detail::fft_backward(f.shape(), std::move(spec));
  const double inv = 1.0 / static_cast<double>(back.size());
  std::vector<double> out(back.size());
  double residue = 0.0;
  double scale = f.max_abs();
  for (std::size_t p = 0; p < back.size(); ++p) {
    out[p] = back[p].real() * inv;
    residue = std::max(residue, std::abs(back[p].imag() * inv));
    scale = std::max(scale, std::abs(out[p]));
  }
  if (residue > 1e-12 * std::max(scale, 1.0)) {
    throw NumericalError("spectral transform left an imaginary residue of " + std::to_string(residue));
  }
  return f.with_values(std::move(out));
}

void require_compact(const GridFunction& f) {
  // Every sample on the outer faces of the grid must vanish.
  const double tol = 1e-8 * f.max_abs();
  for (std::size_t p = 0; p < f.size(); ++p) {
    const std::vector<int> idx = f.index(p);
    bool face = false;
    for (std::size_t a = 0; a < idx.size(); ++a) face = face || idx[a] == 0 || idx[a] == f.shape()[a] - 1;
    if (face && std::abs(f.values()[p]) > tol) {
      throw InvalidArgument("direct Riesz potential needs f to vanish on the grid boundary");
    }
  }
}

// int_{u0}^{u1} |u|^{s-1} du and int_{u0}^{u1} u |u|^{s-1} du for an interval not containing 0 in its interior.
std::pair<double, double> signed_moments(double u0, double u1, double s) {
  if (u0 >= 0.0) {
    return {(std::pow(u1, s) - std::pow(u0, s)) / s, (std::pow(u1, s + 1.0) - std::pow(u0, s + 1.0)) / (s + 1.0)};
  }
  const double a = -u1;
  const double b = -u0;
  return {(std::pow(b, s) - std::pow(a, s)) / s, -(std::pow(b, s + 1.0) - std::pow(a, s + 1.0)) / (s + 1.0)};
}

GridFunction riesz_direct_1d(const GridFunction& f, double s) {
  const int n = f.shape()[0];
  const double h = f.spacing()[0];
  const std::vector<double>& v = f.values();
  // Weight of node j as seen from node i depends only on j - i.
  std::vector<double> weight(static_cast<std::size_t>(2 * n - 1), 0.0);
  auto w = [&](int offset) -> double& { return weight[static_cast<std::size_t>(offset + n - 1)]; };
  for (int c = -(n - 1); c < n - 1; ++c) {
    // Cell [c h, (c+1) h] relative to the evaluation node; f = f_c (1 - t) + f_{c+1} t.
    const double u0 = c * h;
    const double u1 = (c + 1) * h;
    const auto [m0, m1] = signed_moments(u0, u1, s);
    const double right = (m1 - u0 * m0) / h;
    w(c) += m0 - right;
    w(c + 1) += right;
  }
  const double pre = riesz_prefactor(1, s);
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += v[static_cast<std::size_t>(j)] * w(j - i);
    out[static_cast<std::size_t>(i)] = pre * sum;
  }
  return f.with_values(std::move(out));
}

// Integrals of the four bilinear corner functions of a cell against |xi|^{s-2};
// the evaluation point is the origin. Corner order: (x0,y0), (x1,y0), (x0,y1), (x1,y1).
using CornerWeights = std::array<double, 4>;

CornerWeights regular_cell(double x0, double x1, double y0, double y1, double s, const QuadratureRule& rule) {
  CornerWeights w{0.0, 0.0, 0.0, 0.0};
  const double hx = x1 - x0;
  const double hy = y1 - y0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double tx = 0.5 * (rule.nodes[i] + 1.0);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double ty = 0.5 * (rule.nodes[j] + 1.0);
      const double x = x0 + tx * hx;
      const double y = y0 + ty * hy;
      const double k = std::pow(x * x + y * y, 0.5 * (s - 2.0)) * rule.weights[i] * rule.weights[j] * 0.25 * hx * hy;
      w[0] += k * (1 - tx) * (1 - ty);
      w[1] += k * tx * (1 - ty);
      w[2] += k * (1 - tx) * ty;
      w[3] += k * tx * ty;
    }
  }
  return w;
}

// Cell with the origin at one corner: two triangles from the origin, exact
// radial moments along each ray, Gauss-Legendre in the angle.
CornerWeights singular_cell(double x0, double x1, double y0, double y1, double s, const QuadratureRule& angular) {
  CornerWeights w{0.0, 0.0, 0.0, 0.0};
  const double cx[4] = {x0, x1, x0, x1};
  const double cy[4] = {y0, y0, y1, y1};
  // Opposite corner and the two adjacent ones.
  int origin = -1;
  for (int c = 0; c < 4; ++c) {
    if (cx[c] == 0.0 && cy[c] == 0.0) origin = c;
  }
  const int opposite = 3 - origin;
  const int adj[2] = {origin ^ 1, origin ^ 2};
  for (int t = 0; t < 2; ++t) {
    const double ax = cx[adj[t]];
    const double ay = cy[adj[t]];
    const double qx = cx[opposite];
    const double qy = cy[opposite];
    double th0 = std::atan2(ay, ax);
    double th1 = std::atan2(qy, qx);
    if (th1 - th0 > M_PI) th1 -= 2.0 * M_PI;
    if (th0 - th1 > M_PI) th1 += 2.0 * M_PI;
    // Outer edge A-Q: nx x + ny y = c.
    const double nx = qy - ay;
    const double ny = ax - qx;
    const double cn = nx * ax + ny * ay;
    const QuadratureRule rule = gauss_legendre(static_cast<int>(angular.nodes.size()), std::min(th0, th1),
                                               std::max(th0, th1));
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double c = std::cos(rule.nodes[k]);
      const double sn = std::sin(rule.nodes[k]);
      const double rho = cn / (nx * c + ny * sn);
      for (int corner = 0; corner < 4; ++corner) {
        // phi = (x - xo)(y - yo) / ((xc - xo)(yc - yo)) along the ray x = rho c, y = rho sn.
        const double xo = corner & 1 ? x0 : x1;
        const double yo = corner & 2 ? y0 : y1;
        const double denom = (cx[corner] - xo) * (cy[corner] - yo);
        const double a0 = xo * yo;
        const double a1 = -(c * yo + sn * xo);
        const double a2 = c * sn;
        const double radial = a0 * std::pow(rho, s) / s + a1 * std::pow(rho, s + 1.0) / (s + 1.0) +
                              a2 * std::pow(rho, s + 2.0) / (s + 2.0);
        w[static_cast<std::size_t>(corner)] += rule.weights[k] * radial / denom;
      }
    }
  }
  return w;
}

GridFunction riesz_direct_2d(const GridFunction& f, double s) {
  const int n0 = f.shape()[0];
  const int n1 = f.shape()[1];
  const double h0 = f.spacing()[0];
  const double h1 = f.spacing()[1];
  const QuadratureRule far_rule = gauss_legendre(4);
  const QuadratureRule near_rule = gauss_legendre(8);
  const QuadratureRule angular = gauss_legendre(32);

  // Node weights by offset (node - evaluation point), accumulated from cells.
  const int w0 = 2 * n0 - 1;
  const int w1 = 2 * n1 - 1;
  std::vector<double> weight(static_cast<std::size_t>(w0) * static_cast<std::size_t>(w1), 0.0);
  auto w = [&](int di, int dj) -> double& {
    return weight[static_cast<std::size_t>(di + n0 - 1) * static_cast<std::size_t>(w1) +
                  static_cast<std::size_t>(dj + n1 - 1)];
  };
  for (int ci = -(n0 - 1); ci < n0 - 1; ++ci) {
    for (int cj = -(n1 - 1); cj < n1 - 1; ++cj) {
      const double x0 = ci * h0;
      const double x1 = (ci + 1) * h0;
      const double y0 = cj * h1;
      const double y1 = (cj + 1) * h1;
      CornerWeights cw;
      if ((ci == 0 || ci == -1) && (cj == 0 || cj == -1)) {
        cw = singular_cell(x0, x1, y0, y1, s, angular);
      } else {
        const bool near = std::max(std::abs(ci + 0.5), std::abs(cj + 0.5)) < 3.0;
        cw = regular_cell(x0, x1, y0, y1, s, near ? near_rule : far_rule);
      }
      w(ci, cj) += cw[0];
      w(ci + 1, cj) += cw[1];
      w(ci, cj + 1) += cw[2];
      w(ci + 1, cj + 1) += cw[3];
    }
  }

  const double pre = riesz_prefactor(2, s);
  const std::vector<double>& v = f.values();
  std::vector<double> out(v.size(), 0.0);
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      double sum = 0.0;
      for (int a = 0; a < n0; ++a) {
        for (int b = 0; b < n1; ++b) {
          const double fv = v[static_cast<std::size_t>(a) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(b)];
          if (fv != 0.0) sum += fv * w(a - i, b - j);
        }
      }
      out[static_cast<std::size_t>(i) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(j)] = pre * sum;
    }
  }
  return f.with_values(std::move(out));
}

}  // namespace

GridFunction fractional_laplacian(const GridFunction& f, double y) {
  if (!(y > 0.0) || !(y <= 2.0)) throw InvalidArgument("fractional Laplacian order must lie in (0, 2]");
  return apply_symbol(f, [y](double k) { return std::pow(k, y); });
}

double riesz_prefactor(int n, double s) {
  if (n < 1 || !(s > 0.0) || !(s < n)) throw InvalidArgument("Riesz prefactor needs 0 < s < n");
  return std::tgamma(0.5 * (n - s)) / (std::pow(M_PI, 0.5 * n) * std::pow(2.0, s) * std::tgamma(0.5 * s));
}

GridFunction riesz_potential(const GridFunction& f, double s, RieszMethod method) {
  if (method == RieszMethod::Spectral) {
    if (!(s > 0.0) || !(s < 2.0)) throw InvalidArgument("spectral Riesz potential needs 0 < s < 2");
    if (std::abs(f.mean()) > 1e-10 * f.max_abs()) {
      throw InvalidArgument("spectral Riesz potential needs a zero-mean field");
    }
    return apply_symbol(f, [s](double k) { return std::pow(k, -s); });
  }
  const int n = f.dims();
  if (n != 1 && n != 2) throw InvalidArgument("direct Riesz potential supports n = 1 and n = 2 only");
  if (!(s > 0.0) || !(s < n)) throw InvalidArgument("direct Riesz potential needs 0 < s < n");
  for (int extent : f.shape()) {
    if (extent < 2) throw InvalidArgument("direct Riesz potential needs at least two samples per axis");
  }
  require_compact(f);
  return n == 1 ? riesz_direct_1d(f, s) : riesz_direct_2d(f, s);
}

void RadialSamples::validate() const {
  if (abscissae.size() != values.size()) throw InvalidArgument("radial abscissae and values differ in length");
  if (abscissae.size() < 2) throw InvalidArgument("radial samples need at least two points");
  if (abscissae[0] != 0.0) throw InvalidArgument("radial abscissae must start at 0");
  for (std::size_t i = 1; i < abscissae.size(); ++i) {
    if (!(abscissae[i] > abscissae[i - 1]) || !std::isfinite(abscissae[i])) {
      throw InvalidArgument("radial abscissae must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("radial values must be finite");
  }
}

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0) || !(beta < 1.0)) throw InvalidArgument("Abel exponent must lie in (0, 1)");
}

// int_0^{x_i} g(t) (x_i - t)^{beta - 1} dt for piecewise linear g.
std::vector<double> product_integral(const RadialSamples& g, double beta) {
  const std::vector<double>& t = g.abscissae;
  const std::vector<double>& v = g.values;
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    double sum = 0.0;
    for (std::size_t a = 0; a < i; ++a) {
      const double ua = t[i] - t[a];
      const double ub = t[i] - t[a + 1];
      const double slope = (v[a + 1] - v[a]) / (t[a + 1] - t[a]);
      sum += (v[a] + slope * ua) * (std::pow(ua, beta) - std::pow(ub, beta)) / beta -
             slope * (std::pow(ua, beta + 1.0) - std::pow(ub, beta + 1.0)) / (beta + 1.0);
    }
    out[i] = sum;
  }
  return out;
}

}  // namespace

RadialSamples abel_forward(const RadialSamples& g, double beta) {
  require_beta(beta);
  g.validate();
  return RadialSamples{g.abscissae, product_integral(g, beta)};
}

RadialSamples abel_backward(const RadialSamples& f, double beta) {
  require_beta(beta);
  f.validate();
  if (f.abscissae.size() < 5) throw InvalidArgument("backward Abel transform needs at least five samples");
  double scale = 1.0;
  for (double v : f.values) scale = std::max(scale, std::abs(v));
  if (std::abs(f.values[0]) > 1e-8 * scale) throw InvalidArgument("backward Abel transform needs f(0) = 0");

  const std::vector<double> inner = product_integral(f, 1.0 - beta);
  const std::vector<double>& t = f.abscissae;
  const std::size_t n = t.size();
  const double pre = std::sin(M_PI * beta) / M_PI;
  RadialSamples g{t, std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = std::min(i >= 2 ? i - 2 : 0, n - 5);
    const std::vector<double> xs(t.begin() + static_cast<std::ptrdiff_t>(start),
                                 t.begin() + static_cast<std::ptrdiff_t>(start + 5));
    const std::vector<double> w = derivative_weights(t[i], xs);
    double d = 0.0;
    for (std::size_t k = 0; k < 5; ++k) d += w[k] * inner[start + k];
    g.values[i] = pre * d;
  }
  return g;
}

double weyl_prefactor(int n) {
  if (n < 2) throw InvalidArgument("Weyl transform needs n >= 2");
  return 2.0 * std::tgamma(0.5 * n) / (std::sqrt(M_PI) * std::tgamma(0.5 * (n - 1)));
}

double radon_weyl_ratio(int n) {
  if (n < 1) throw InvalidArgument("dimension must be >= 1");
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace {

void require_supported(const SupportedFunction& f, PointRef xi, int n) {
  if (n != 2 && n != 3) throw InvalidArgument("radial transforms support n = 2 and n = 3 only");
  if (!f.f) throw InvalidArgument("radial transform needs a function");
  if (!std::isfinite(f.radius) || !(f.radius > 0.0)) throw InvalidArgument("support radius must be declared and positive");
  if (f.center.size() != n || xi.size() != n) throw InvalidArgument("function support and xi must have dimension n");
  require_valid_point(xi);
  require_valid_point(f.center);
}

void require_quadrature(const RadialQuadratureSpec& q) {
  if (q.annuli < 1 || q.radial_points < 1 || q.angular_points < 1 || q.polar_points < 1) {
    throw InvalidArgument("quadrature sizes must be positive");
  }
}

// Integral of f over the sphere of radius r around xi (surface measure of the unit sphere).
double sphere_integral(const SupportedFunction& f, PointRef xi, double r, int n, const RadialQuadratureSpec& q,
                       const QuadratureRule& polar) {
  Point x(n);
  double sum = 0.0;
  const double dphi = 2.0 * M_PI / q.angular_points;
  if (n == 2) {
    for (int k = 0; k < q.angular_points; ++k) {
      x[0] = xi[0] + r * std::cos(k * dphi);
      x[1] = xi[1] + r * std::sin(k * dphi);
      sum += f.f(x);
    }
    return sum * dphi;
  }
  for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
    const double ct = polar.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    double ring = 0.0;
    for (int k = 0; k < q.angular_points; ++k) {
      x[0] = xi[0] + r * st * std::cos(k * dphi);
      x[1] = xi[1] + r * st * std::sin(k * dphi);
      x[2] = xi[2] + r * ct;
      ring += f.f(x);
    }
    sum += polar.weights[i] * ring;
  }
  return sum * dphi;
}

// int f(x) weight(|xi - x|) dx over |xi - x| >= r_min.
double radial_integral(const SupportedFunction& f, PointRef xi, int n, double r_min,
                       const std::function<double(double)>& weight, const RadialQuadratureSpec& q) {
  const double dist = (xi - f.center).norm();
  const double lo = std::max({r_min, dist - f.radius, 0.0});
  const double hi = dist + f.radius;
  if (!(hi > lo)) return 0.0;
  const QuadratureRule polar = gauss_legendre(q.polar_points);
  const QuadratureRule base = gauss_legendre(q.radial_points);
  const double panel = (hi - lo) / q.annuli;
  double total = 0.0;
  for (int a = 0; a < q.annuli; ++a) {
    const double r0 = lo + a * panel;
    for (std::size_t k = 0; k < base.nodes.size(); ++k) {
      const double r = r0 + 0.5 * (base.nodes[k] + 1.0) * panel;
      const double jac = 0.5 * panel * base.weights[k];
      total += jac * weight(r) * std::pow(r, n - 1) * sphere_integral(f, xi, r, n, q, polar);
    }
  }
  return total;
}

// The Weyl integral without its prefactor.
double weyl_integral(const SupportedFunction& f, PointRef xi, double gamma, int n, const RadialQuadratureSpec& q) {
  if (!std::isfinite(gamma) || gamma < 0.0) throw InvalidArgument("shift gamma must be >= 0");
  require_supported(f, xi, n);
  require_quadrature(q);
  if (n == 3) return radial_integral(f, xi, n, gamma, [](double r) { return r; }, q);
  if (gamma == 0.0) return radial_integral(f, xi, n, 0.0, [](double) { return 1.0; }, q);

  // n = 2, gamma > 0: r = gamma cosh(u) removes the inverse square root at r = gamma.
  const double dist = (xi - f.center).norm();
  const double lo = std::max({gamma, dist - f.radius});
  const double hi = dist + f.radius;
  if (!(hi > lo)) return 0.0;
  const double u_lo = std::acosh(lo / gamma);
  const double u_hi = std::acosh(hi / gamma);
  const QuadratureRule polar = gauss_legendre(q.polar_points);
  const QuadratureRule base = gauss_legendre(q.radial_points);
  const double panel = (u_hi - u_lo) / q.annuli;
  double total = 0.0;
  for (int a = 0; a < q.annuli; ++a) {
    const double u0 = u_lo + a * panel;
    for (std::size_t k = 0; k < base.nodes.size(); ++k) {
      const double u = u0 + 0.5 * (base.nodes[k] + 1.0) * panel;
      const double r = gamma * std::cosh(u);
      total += 0.5 * panel * base.weights[k] * r * r * sphere_integral(f, xi, r, n, q, polar);
    }
  }
  return total;
}

}  // namespace

double weyl_transform(const SupportedFunction& f, PointRef xi, double gamma, int n, const RadialQuadratureSpec& quad) {
  const double integral = weyl_integral(f, xi, gamma, n, quad);
  return weyl_prefactor(n) * integral;
}

double radon_dfw(const SupportedFunction& f, PointRef xi, double gamma, int n, const RadialQuadratureSpec& quad) {
  return radon_weyl_ratio(n) * weyl_transform(f, xi, gamma, n, quad);
}

double radon_dfw_surface_form(const SupportedFunction& f, PointRef xi, double gamma, int n,
                              const RadialQuadratureSpec& quad) {
  return unit_sphere_area(n) * weyl_integral(f, xi, gamma, n, quad);
}

double laplace_potential_dfw(const SupportedFunction& f, PointRef xi, int n, const RadialQuadratureSpec& quad) {
  if (n == 2) throw InvalidArgument("Laplace potential transform is undefined for n = 2");
  if (n != 3) throw InvalidArgument("Laplace potential transform supports n = 3 only");
  return radon_dfw(f, xi, 0.0, n, quad);
}

double laplace_potential_second_form(const SupportedFunction& f, PointRef xi, int n, const RadialQuadratureSpec& quad) {
  if (n == 2) throw InvalidArgument("Laplace potential transform is undefined for n = 2");
  if (n != 3) throw InvalidArgument("Laplace potential transform supports n = 3 only");
  require_supported(f, xi, n);
  require_quadrature(quad);
  const double area = unit_sphere_area(n);
  auto u_star = [n, area](double r) { return 1.0 / ((n - 2) * area * std::pow(r, n - 2)); };
  return radial_integral(f, xi, n, 0.0, [&](double r) { return 1.0 / ((n - 2) * u_star(r)); }, quad);
}

GridFunction poisson_extension(const GridFunction& f, double q) {
  if (!std::isfinite(q) || !(q > 0.0)) throw InvalidArgument("Poisson height q must be positive");
  const int n = f.dims();
  std::vector<double> kernel(f.size());
  double mass = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) {
    const std::vector<int> idx = f.index(p);
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const int extent = f.shape()[static_cast<std::size_t>(a)];
      const int i = idx[static_cast<std::size_t>(a)];
      const double d = (i <= extent / 2 ? i : i - extent) * f.spacing()[static_cast<std::size_t>(a)];
      r2 += d * d;
    }
    kernel[p] = poisson_kernel_profile(std::sqrt(r2), q, n);
    mass += kernel[p];
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) throw NumericalError("Poisson kernel has no usable discrete mass");
  for (double& k : kernel) k /= mass;

  const detail::ComplexVector kf = detail::fft_forward(f.shape(), kernel);
  detail::ComplexVector ff = detail::fft_forward(f.shape(), f.values());
  for (std::size_t p = 0; p < ff.size(); ++p) ff[p] *= kf[p];
  const detail::ComplexVector back = detail::fft_backward(f.shape(), std::move(ff));
  const double inv = 1.0 / static_cast<double>(back.size());
  std::vector<double> out(back.size());
  for (std::size_t p = 0; p < back.size(); ++p) out[p] = back[p].real() * inv;
  return f.with_values(std::move(out));
}

}  // namespace dfw
