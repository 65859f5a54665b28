#include "karamata/config.hpp"

#include <algorithm>
#include <stdexcept>

namespace karamata {

void GridSpec::validate() const {
  if (!(u_min < u_max)) {
    throw std::invalid_argument("GridSpec: u_min must be below u_max");
  }
  if (points_per_decade <= 0) {
    throw std::invalid_argument("GridSpec: points_per_decade must be positive");
  }
}

std::vector<double> GridSpec::points() const {
  validate();
  const double step = std::log(10.0) / points_per_decade;
  std::vector<double> out;
  const long count = static_cast<long>(std::floor((u_max - u_min) / step));
  out.reserve(count + 2);
  for (long k = 0; k <= count; ++k) {
    const double u = u_min + k * step;
    if (u < u_max) out.push_back(u);
  }
  out.push_back(u_max);
  // Drop a penultimate point that rounding placed on top of u_max.
  if (out.size() >= 2 && u_max - out[out.size() - 2] < step * 1e-9) {
    out.erase(out.end() - 2);
  }
  return out;
}

void CheckConfig::validate() const {
  auto positive = [](double x) { return x > 0.0; };
  if (!positive(rel_tol) || !positive(abs_tol) || !positive(limit_tol) ||
      !positive(tail_block_width)) {
    throw std::invalid_argument("CheckConfig: tolerances must be positive");
  }
  if (max_subdivisions <= 0) {
    throw std::invalid_argument("CheckConfig: max_subdivisions must be positive");
  }
  if (!(ceiling > 1.0)) {
    throw std::invalid_argument("CheckConfig: ceiling must exceed 1");
  }
  if (max_deriv_order < 0 || max_deriv_order > 8) {
    throw std::invalid_argument("CheckConfig: max_deriv_order out of range");
  }
  for (double e : eps_list) {
    if (!positive(e)) {
      throw std::invalid_argument("CheckConfig: eps values must be positive");
    }
  }
}

}  // namespace karamata
