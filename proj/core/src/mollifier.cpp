#include "karamata/mollifier.hpp"

#include <cmath>
#include <sstream>

#include "karamata/errors.hpp"
#include "karamata/quadrature.hpp"

namespace karamata {

namespace {

std::vector<double> poly_derivative(const std::vector<double>& p) {
  std::vector<double> out;
  for (size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * i);
  if (out.empty()) out.push_back(0.0);
  return out;
}

std::vector<double> poly_mul(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> poly_add(std::vector<double> a,
                             const std::vector<double>& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

double poly_eval(const std::vector<double>& p, double x) {
  double acc = 0.0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

}  // namespace

double MollifierKernel::derivative(int n, double x) const {
  if (n < 0 || n > max_order()) {
    throw PreconditionFailed("MollifierKernel: derivative order out of range");
  }
  const double q = 1.0 - x * x;
  if (q <= 0.0) return 0.0;
  // exponent = -1/q - 2n ln q stays far below overflow for any n here.
  const double exponent = -1.0 / q - 2.0 * n * std::log(q);
  return normalization_ * poly_eval(polys_[n], x) * std::exp(exponent);
}

MollifierKernel kernel_build(int n_max, const CheckConfig& cfg) {
  if (n_max < 0) {
    throw PreconditionFailed("kernel_build: n_max must be non-negative");
  }
  cfg.validate();

  MollifierKernel kernel;

  CheckConfig tight = cfg;
  tight.rel_tol = std::min(cfg.rel_tol, 1e-12);
  kernel.base_integral_ =
      integrate(
          [](double x) {
            const double q = 1.0 - x * x;
            return q <= 0.0 ? 0.0 : std::exp(-1.0 / q);
          },
          -1.0, 1.0, {}, tight)
          .value;
  kernel.normalization_ = 1.0 / kernel.base_integral_;

  // q^2 = 1 - 2x^2 + x^4.
  const std::vector<double> q2 = {1.0, 0.0, -2.0, 0.0, 1.0};
  kernel.polys_.push_back({1.0});
  for (int n = 0; n < n_max; ++n) {
    const std::vector<double>& p = kernel.polys_.back();
    // (4 n x (1 - x^2) - 2x) = (4n - 2) x - 4n x^3
    const std::vector<double> factor = {0.0, 4.0 * n - 2.0, 0.0, -4.0 * n};
    std::vector<double> next =
        poly_add(poly_mul(q2, poly_derivative(p)), poly_mul(factor, p));
    while (next.size() > 1 && next.back() == 0.0) next.pop_back();
    for (double c : next) {
      if (std::abs(c) > 9.007199254740992e15) {  // 2^53
        std::ostringstream os;
        os << "kernel_build: coefficient table leaves the exact integer "
              "range at order "
           << (n + 1);
        throw CoefficientOverflow(os.str());
      }
    }
    kernel.polys_.push_back(std::move(next));
  }

  // Cross-check the recurrence against fourth-order central differences;
  // the plain three-point stencil is truncation-limited here because the
  // next derivative up is orders of magnitude larger.
  const double h = 1e-4;
  for (int n = 1; n <= std::min(n_max, 4); ++n) {
    for (double x : {0.0, 0.4, -0.6}) {
      auto f = [&](double y) { return kernel.derivative(n - 1, y); };
      const double fd =
          (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) /
          (12.0 * h);
      const double exact = kernel.derivative(n, x);
      const double scale = std::max({std::abs(exact), std::abs(fd), 1e-3});
      if (std::abs(fd - exact) > 1e-6 * scale) {
        std::ostringstream os;
        os << "kernel_build: derivative recurrence disagrees with finite "
              "differences at order "
           << n << ", x = " << x;
        throw Error(os.str());
      }
    }
  }
  return kernel;
}

}  // namespace karamata
