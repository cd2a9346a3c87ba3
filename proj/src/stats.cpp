#include "qpnn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qpnn::stats {

namespace {
constexpr double kZ975 = 1.959963984540054;  // 97.5% normal quantile
}

Moments moments(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("no values");
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double var = 0.0;
  for (const double x : xs) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / n)};
}

double success_threshold(const std::vector<double>& offline_fidelities) {
  if (offline_fidelities.size() < 2)
    throw std::invalid_argument("threshold needs at least two offline values");
  const Moments m = moments(offline_fidelities);
  return m.mean - m.stddev;
}

std::vector<std::size_t> max_plateau_indices(
    const std::vector<double>& infidelities, double gap_decades,
    double refine_decades) {
  if (infidelities.empty()) throw std::invalid_argument("no values");
  std::vector<std::size_t> order(infidelities.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto log_c = [&](std::size_t i) {
    return std::log10(std::max(infidelities[i], 1e-16));
  };
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return log_c(a) < log_c(b); });

  std::vector<std::size_t> plateau{order[0]};
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (log_c(order[k]) - log_c(order[k - 1]) > gap_decades) break;
    plateau.push_back(order[k]);
  }

  // When neighbouring optima sit closer than gap_decades the cluster is a
  // continuum of local minima, not a plateau; in that case keep only the
  // trials within refine_decades of the best one.
  const double spread = log_c(plateau.back()) - log_c(plateau.front());
  if (spread > refine_decades) {
    const double cutoff = log_c(plateau.front()) + refine_decades;
    std::vector<std::size_t> refined;
    for (const std::size_t i : plateau)
      if (log_c(i) <= cutoff) refined.push_back(i);
    plateau.swap(refined);
  }

  std::sort(plateau.begin(), plateau.end());
  return plateau;
}

FitResult fit_lognormal(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("no values");
  std::vector<double> logs;
  logs.reserve(values.size());
  for (const double v : values) {
    if (v <= 0.0)
      throw std::invalid_argument("lognormal fit needs positive values");
    logs.push_back(std::log(v));
  }
  const Moments lm = moments(logs);
  FitResult fit;
  fit.family = "lognormal";
  fit.params = {lm.mean, lm.stddev};
  if (lm.stddev < 1e-12) {
    fit.degenerate = true;
    fit.mean = std::exp(lm.mean);
    fit.ci_low = fit.ci_high = fit.mean;
    return fit;
  }
  fit.mean = std::exp(lm.mean + 0.5 * lm.stddev * lm.stddev);
  fit.ci_low = std::exp(lm.mean - kZ975 * lm.stddev);
  fit.ci_high = std::exp(lm.mean + kZ975 * lm.stddev);
  return fit;
}

FitResult fit_beta(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("no values");
  for (double& v : values) v = std::clamp(v, 1e-9, 1.0 - 1e-9);

  FitResult fit;
  fit.family = "beta";
  const Moments m = moments(values);
  if (m.stddev < 1e-12) {
    fit.degenerate = true;
    fit.params = {0.0, 0.0};
    fit.mean = m.mean;
    fit.ci_low = fit.ci_high = m.mean;
    return fit;
  }

  // moment-matched starting point
  const double var = m.stddev * m.stddev;
  double common = m.mean * (1.0 - m.mean) / var - 1.0;
  if (common < 1e-3) common = 1e-3;
  double a = std::max(m.mean * common, 1e-3);
  double b = std::max((1.0 - m.mean) * common, 1e-3);

  // Newton iteration on the likelihood conditions
  //   psi(a) - psi(a+b) = mean log x,  psi(b) - psi(a+b) = mean log(1-x)
  double s1 = 0.0, s2 = 0.0;
  for (const double v : values) {
    s1 += std::log(v);
    s2 += std::log1p(-v);
  }
  s1 /= static_cast<double>(values.size());
  s2 /= static_cast<double>(values.size());

  for (int it = 0; it < 100; ++it) {
    const double psi_ab = digamma(a + b);
    const double f1 = digamma(a) - psi_ab - s1;
    const double f2 = digamma(b) - psi_ab - s2;
    const double t_ab = trigamma(a + b);
    const double j11 = trigamma(a) - t_ab;
    const double j22 = trigamma(b) - t_ab;
    const double det = j11 * j22 - t_ab * t_ab;
    if (std::abs(det) < 1e-300) break;
    double da = (-f1 * j22 - f2 * t_ab) / det;
    double db = (-f2 * j11 - f1 * t_ab) / det;
    double scale = 1.0;
    while ((a + scale * da <= 0.0 || b + scale * db <= 0.0) && scale > 1e-8)
      scale *= 0.5;
    a += scale * da;
    b += scale * db;
    if (std::abs(f1) < 1e-12 && std::abs(f2) < 1e-12) break;
  }

  fit.params = {a, b};
  fit.mean = a / (a + b);
  fit.ci_low = inv_reg_inc_beta(a, b, 0.025);
  fit.ci_high = inv_reg_inc_beta(a, b, 0.975);
  return fit;
}

double welch_p_greater(const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  if (xs.size() < 2 || ys.size() < 2)
    throw std::invalid_argument("welch test needs two values per sample");
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  const Moments mx = moments(xs);
  const Moments my = moments(ys);
  // unbiased variances
  const double vx = mx.stddev * mx.stddev * nx / (nx - 1.0);
  const double vy = my.stddev * my.stddev * ny / (ny - 1.0);
  const double se2 = vx / nx + vy / ny;
  if (se2 <= 0.0) return mx.mean > my.mean ? 0.0 : 1.0;
  const double t = (mx.mean - my.mean) / std::sqrt(se2);
  const double df = se2 * se2 / (vx * vx / (nx * nx * (nx - 1.0)) +
                                 vy * vy / (ny * ny * (ny - 1.0)));
  // survival function of Student's t via the incomplete beta
  const double ib = reg_inc_beta(0.5 * df, 0.5, df / (df + t * t));
  return t > 0.0 ? 0.5 * ib : 1.0 - 0.5 * ib;
}

double log_gamma(double x) {
  // Lanczos approximation, g = 7, double precision
  static const double coeff[9] = {0.99999999999980993,
                                  676.5203681218851,
                                  -1259.1392167224028,
                                  771.32342877765313,
                                  -176.61502916214059,
                                  12.507343278686905,
                                  -0.13857109526572012,
                                  9.9843695780195716e-6,
                                  1.5056327351493116e-7};
  if (x <= 0.0) throw std::invalid_argument("log_gamma needs x > 0");
  if (x < 0.5) {
    // reflection keeps the series accurate near zero
    return std::log(3.14159265358979323846 /
                    std::sin(3.14159265358979323846 * x)) -
           log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double sum = coeff[0];
  for (int i = 1; i < 9; ++i) sum += coeff[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * 3.14159265358979323846) +
         (z + 0.5) * std::log(t) - t + std::log(sum);
}

double digamma(double x) {
  if (x <= 0.0) throw std::invalid_argument("digamma needs x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return acc + std::log(x) - 0.5 * inv -
         inv2 * (1.0 / 12.0 -
                 inv2 * (1.0 / 120.0 -
                         inv2 * (1.0 / 252.0 -
                                 inv2 * (1.0 / 240.0 -
                                         inv2 * (1.0 / 132.0 -
                                                 inv2 * 691.0 / 32760.0)))));
}

double trigamma(double x) {
  if (x <= 0.0) throw std::invalid_argument("trigamma needs x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return acc +
         inv * (1.0 +
                inv * (0.5 +
                       inv * (1.0 / 6.0 -
                              inv2 * (1.0 / 30.0 -
                                      inv2 * (1.0 / 42.0 -
                                              inv2 * (1.0 / 30.0 -
                                                      inv2 * 5.0 / 66.0))))));
}

namespace {
// continued fraction for the incomplete beta, modified Lentz scheme
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 5000;  // large concentrations converge slowly
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}
}  // namespace

double reg_inc_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0)
    throw std::invalid_argument("beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) -
                                (log_gamma(a) + log_gamma(b) -
                                 log_gamma(a + b)));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double inv_reg_inc_beta(double a, double b, double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (reg_inc_beta(a, b, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qpnn::stats
