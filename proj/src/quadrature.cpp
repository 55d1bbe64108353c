#include "qrouter/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "qrouter/error.hpp"

namespace qrouter {

namespace {

constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                          0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                          0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                          0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                          0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a;
  double b;
  Eigen::VectorXd value;
  double error;
  bool operator<(const Piece& o) const {
    if (error != o.error) return error < o.error;
    return a > o.a;
  }
};

Piece rule(const VectorIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const Eigen::VectorXd fc = f(c);
  Eigen::VectorXd kron = wk[7] * fc;
  Eigen::VectorXd gauss = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const Eigen::VectorXd lo = f(c - h * xk[j]);
    const Eigen::VectorXd hi = f(c + h * xk[j]);
    kron += wk[j] * (lo + hi);
    if (j % 2 == 1) gauss += wg[j / 2] * (lo + hi);
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, (kron - gauss).cwiseAbs().maxCoeff()};
}

}  // namespace

QuadratureResult integrate_adaptive(const VectorIntegrand& f, std::span<const double> breakpoints,
                                    double abs_tol, int max_intervals) {
  if (breakpoints.size() < 2) throw ValidationError("breakpoints", "need at least two breakpoints");
  std::priority_queue<Piece> queue;
  QuadratureResult r;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    queue.push(rule(f, breakpoints[i], breakpoints[i + 1]));
    r.evaluations += 15;
  }
  if (queue.empty()) throw ValidationError("breakpoints", "empty integration range");

  double total_error = 0.0;
  {
    auto copy = queue;
    while (!copy.empty()) {
      total_error += copy.top().error;
      copy.pop();
    }
  }
  while (total_error > abs_tol && static_cast<int>(queue.size()) < max_intervals) {
    Piece worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    queue.pop();
    Piece left = rule(f, worst.a, mid);
    Piece right = rule(f, mid, worst.b);
    r.evaluations += 30;
    total_error += left.error + right.error - worst.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
  }

  std::vector<Piece> pieces;
  pieces.reserve(queue.size());
  while (!queue.empty()) {
    pieces.push_back(queue.top());
    queue.pop();
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  r.value = Eigen::VectorXd::Zero(pieces.front().value.size());
  r.error = 0.0;
  for (const Piece& p : pieces) {
    r.value += p.value;
    r.error += p.error;
  }
  r.intervals = static_cast<int>(pieces.size());
  r.converged = r.error <= abs_tol;
  return r;
}

}  // namespace qrouter
