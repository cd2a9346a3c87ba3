#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace qpnn::stats {

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;  // population
};
Moments moments(const std::vector<double>& xs);

// Success cut for in-situ trials: the mean fidelity reached by offline
// training of the same network minus one standard deviation. Needs at
// least two offline values.
double success_threshold(const std::vector<double>& offline_fidelities);

// Indices of the trials on the best plateau: cluster log10 infidelities,
// splitting wherever neighbours are more than gap_decades apart, and keep
// the lowest cluster. A finite refine_decades additionally treats a lowest
// cluster spanning more than that width as a continuum of local optima
// rather than a plateau, and keeps only the trials within refine_decades
// of the minimum. Values are floored at 1e-16 before taking logs.
std::vector<std::size_t> max_plateau_indices(
    const std::vector<double>& infidelities, double gap_decades = 0.5,
    double refine_decades = std::numeric_limits<double>::infinity());

struct FitResult {
  std::string family;          // "lognormal" or "beta"
  std::vector<double> params;  // {mu, sigma} or {a, b}
  double mean = 0.0;
  double ci_low = 0.0;   // central 95% interval of the fitted distribution
  double ci_high = 0.0;
  bool degenerate = false;  // zero-variance input collapsed to a point mass
};

// maximum likelihood lognormal fit; all values must be positive
FitResult fit_lognormal(const std::vector<double>& values);

// Maximum likelihood beta fit: moment-matched start, then Newton on the
// digamma conditions. Values are clipped into [1e-9, 1 - 1e-9] first since
// fidelities can sit exactly on 0 or 1.
FitResult fit_beta(std::vector<double> values);

// One-sided Welch test: p-value against the hypothesis that the mean of
// xs exceeds the mean of ys. Small p means xs is credibly larger.
double welch_p_greater(const std::vector<double>& xs,
                       const std::vector<double>& ys);

// special functions backing the fits
double log_gamma(double x);
double digamma(double x);
double trigamma(double x);
double reg_inc_beta(double a, double b, double x);
double inv_reg_inc_beta(double a, double b, double p);

}  // namespace qpnn::stats
