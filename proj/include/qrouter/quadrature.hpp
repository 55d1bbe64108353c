#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

namespace qrouter {

using VectorIntegrand = std::function<Eigen::VectorXd(double)>;

struct QuadratureResult {
  Eigen::VectorXd value;
  double error = 0.0;   // summed per-interval max-component error estimate
  int intervals = 0;
  int evaluations = 0;
  bool converged = false;
};

// Globally adaptive 7/15-point Gauss-Kronrod on the partition given by breakpoints
// (sorted, first and last are the integration limits). All components share nodes.
QuadratureResult integrate_adaptive(const VectorIntegrand& f, std::span<const double> breakpoints,
                                    double abs_tol, int max_intervals = 4000);

}  // namespace qrouter
