#pragma once

#include <cmath>
#include <vector>

namespace karamata {

/// Log-uniform evaluation grid. Endpoints are natural logs of the argument,
/// so the default spans t in [1e-8, 1e8].
struct GridSpec {
  double u_min = std::log(1e-8);
  double u_max = std::log(1e8);
  int points_per_decade = 16;

  /// Sorted, deduplicated grid of u values, endpoints included.
  std::vector<double> points() const;

  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// Tolerances and budgets governing every numerical claim the library makes.
struct CheckConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double limit_tol = 1e-9;
  double tail_block_width = 5.0;  // in u = ln t
  int max_subdivisions = 2000;

  /// Sanity bound on sandwich constants; a verdict threshold, not a claim.
  double ceiling = 1e6;
  std::vector<double> eps_list = {0.25, 0.5, 1.0, 2.0};
  int max_deriv_order = 4;

  void validate() const;

  bool operator==(const CheckConfig&) const = default;
};

}  // namespace karamata
