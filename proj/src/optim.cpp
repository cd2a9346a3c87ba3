#include "qpnn/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpnn {

namespace {

// Quadratic interpolation model in trust-region coordinates. The Hessian
// stays implicit as a combination of sample outer products, which is all
// the CG solver below needs.
struct Model {
  Eigen::VectorXd g;       // gradient at the center
  Eigen::MatrixXd z;       // sample offsets, one row per point
  Eigen::VectorXd lambda;  // outer-product weights defining the Hessian

  Eigen::VectorXd hess_apply(const Eigen::VectorXd& v) const {
    return z.transpose() * (lambda.cwiseProduct(z * v));
  }

  double value(const Eigen::VectorXd& s) const {
    return g.dot(s) + 0.5 * s.dot(hess_apply(s));
  }
};

// Fit the minimum-Frobenius-norm quadratic through the sample set, scaled
// so offsets are O(1). Returns false when the sample geometry has
// degenerated and the linear system is no longer trustworthy.
bool fit_model(const Eigen::MatrixXd& points, const Eigen::VectorXd& fvals,
               const Eigen::VectorXd& center, double radius, Model& model) {
  const int p = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  model.z = (points.rowwise() - center.transpose()) / radius;

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(p + d + 1, p + d + 1);
  const Eigen::MatrixXd gram = model.z * model.z.transpose();
  kkt.topLeftCorner(p, p) = 0.5 * gram.array().square().matrix();
  kkt.block(0, p, p, 1).setOnes();
  kkt.block(0, p + 1, p, d) = model.z;
  kkt.block(p, 0, 1, p).setOnes();
  kkt.block(p + 1, 0, d, p) = model.z.transpose();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + d + 1);
  rhs.head(p) = fvals;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt);
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite()) return false;
  const double resid = (kkt * sol - rhs).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  if (resid > 1e-7 * scale) return false;

  model.lambda = sol.head(p);
  model.g = sol.tail(d);
  return true;
}

// Steihaug truncated CG: approximately minimize g's + s'Hs/2 inside the
// unit ball, stopping early at the boundary or on negative curvature.
Eigen::VectorXd steihaug(const Model& model) {
  const int d = static_cast<int>(model.g.size());
  Eigen::VectorXd s = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd r = model.g;
  const double gnorm = r.norm();
  if (gnorm < 1e-14) return s;
  Eigen::VectorXd dir = -r;
  const double rtol = std::min(0.1, std::sqrt(gnorm)) * gnorm;

  const auto to_boundary = [&](const Eigen::VectorXd& base,
                               const Eigen::VectorXd& step) {
    // positive root of ||base + tau*step|| = 1
    const double a = step.squaredNorm();
    const double b = 2.0 * base.dot(step);
    const double c = base.squaredNorm() - 1.0;
    const double disc = std::max(0.0, b * b - 4.0 * a * c);
    return (-b + std::sqrt(disc)) / (2.0 * a);
  };

  for (int it = 0; it < 2 * d; ++it) {
    const Eigen::VectorXd hd = model.hess_apply(dir);
    const double curv = dir.dot(hd);
    if (curv <= 0.0) return s + to_boundary(s, dir) * dir;
    const double alpha = r.squaredNorm() / curv;
    if ((s + alpha * dir).norm() >= 1.0)
      return s + to_boundary(s, dir) * dir;
    s += alpha * dir;
    const Eigen::VectorXd r_next = r + alpha * hd;
    if (r_next.norm() <= rtol) return s;
    const double beta = r_next.squaredNorm() / r.squaredNorm();
    dir = -r_next + beta * dir;
    r = r_next;
  }
  return s;
}

}  // namespace

MinimizeResult minimize(const ObjectiveFn& objective,
                        const Eigen::VectorXd& start,
                        const OptimizerConfig& config) {
  const int d = static_cast<int>(start.size());
  if (d < 1) throw std::invalid_argument("empty start point");
  if (config.max_evals < 2 * d + 2)
    throw std::invalid_argument("evaluation budget below one sample set");
  const double lo = config.lower;
  const double hi = config.upper;
  const int window =
      config.stall_window > 0 ? config.stall_window : 2 * d + 1;

  MinimizeResult result;
  result.best_value = std::numeric_limits<double>::infinity();
  result.reason = StopReason::budget_exhausted;

  const auto clamp_point = [&](Eigen::VectorXd x) {
    for (int i = 0; i < d; ++i) x(i) = std::clamp(x(i), lo, hi);
    return x;
  };

  const int p = 2 * d + 1;
  Eigen::MatrixXd points(p, d);
  Eigen::VectorXd fvals(p);
  int best = 0;

  const auto evaluate = [&](const Eigen::VectorXd& x) {
    const double f = objective(x);
    ++result.evaluations;
    if (f < result.best_value) {
      result.best_value = f;
      result.best_point = x;
    }
    result.trace.push_back(result.best_value);
    return f;
  };

  const auto stalled = [&] {
    const auto& tr = result.trace;
    const int k = static_cast<int>(tr.size());
    return k > window && tr[k - window - 1] - tr[k - 1] < config.ftol_abs;
  };

  // coordinate stencil around x0; shifted inward when x0 sits on a bound
  const auto build_stencil = [&](const Eigen::VectorXd& x0, double radius) {
    points.row(0) = x0;
    fvals(0) = evaluate(x0);
    for (int i = 0; i < d; ++i) {
      Eigen::VectorXd up = x0;
      up(i) = x0(i) + radius <= hi ? x0(i) + radius : x0(i) - 0.5 * radius;
      Eigen::VectorXd down = x0;
      down(i) = x0(i) - radius >= lo ? x0(i) - radius : x0(i) + 0.5 * radius;
      points.row(1 + 2 * i) = up;
      fvals(1 + 2 * i) = evaluate(up);
      points.row(2 + 2 * i) = down;
      fvals(2 + 2 * i) = evaluate(down);
    }
    best = 0;
    for (int i = 1; i < p; ++i)
      if (fvals(i) < fvals(best)) best = i;
  };

  double radius = config.initial_radius;
  build_stencil(clamp_point(start), radius);

  Model model;
  while (result.evaluations < config.max_evals) {
    if (stalled() || radius < config.min_radius) {
      result.reason = StopReason::converged;
      break;
    }

    const Eigen::VectorXd center = points.row(best);
    if (!fit_model(points, fvals, center, radius, model)) {
      // sample set degenerated; rebuild the stencil where we stand
      if (result.evaluations + p > config.max_evals) break;
      build_stencil(center, radius);
      continue;
    }

    const Eigen::VectorXd step = steihaug(model);
    const double predicted = -model.value(step);
    if (step.norm() < 1e-14 || predicted <= 0.0) {
      radius *= 0.5;
      continue;
    }

    const Eigen::VectorXd candidate = clamp_point(center + radius * step);
    double nearest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p; ++i)
      nearest = std::min(nearest, (points.row(i).transpose() - candidate).norm());
    if (nearest < 1e-12) {
      radius *= 0.5;
      continue;
    }

    const double f_new = evaluate(candidate);
    const double rho = (fvals(best) - f_new) / predicted;

    // swap the candidate in for the point farthest from the center
    int farthest = best == 0 ? 1 : 0;
    double dist = -1.0;
    for (int i = 0; i < p; ++i) {
      if (i == best) continue;
      const double di = (points.row(i).transpose() - center).norm();
      if (di > dist) {
        dist = di;
        farthest = i;
      }
    }
    points.row(farthest) = candidate;
    fvals(farthest) = f_new;
    if (f_new < fvals(best)) best = farthest;

    if (rho >= 0.75 && step.norm() >= 0.8)
      radius = std::min(radius * 2.0, 0.25 * (hi - lo));
    else if (rho < 0.25)
      radius *= 0.5;
  }

  if (result.reason == StopReason::budget_exhausted && stalled())
    result.reason = StopReason::converged;
  return result;
}

}  // namespace qpnn
