#ifndef SKEMBED_STATS_HPP
#define SKEMBED_STATS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace skembed {

/// One-sample Kolmogorov-Smirnov statistic:
/// sup over the sorted sample of max(|i/N - F(x_i)|, |(i-1)/N - F(x_i)|).
double ks_one_sample(std::span<const double> samples,
                     const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic (sup difference of the ECDFs).
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic critical values at the fixed working level (alpha ~ 0.001,
/// Kolmogorov quantile 1.95).
double ks_threshold_one_sample(std::size_t n);
double ks_threshold_two_sample(std::size_t n, std::size_t m);

struct MomentSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double raw2 = 0.0;      // mean of x^2
  double raw4 = 0.0;      // mean of x^4
  double central2 = 0.0;  // plug-in central moments about the sample mean
  double central4 = 0.0;
  double se_mean = 0.0;
  double se_raw2 = 0.0;
  double se_raw4 = 0.0;
  double se_central2 = 0.0;
  double se_central4 = 0.0;
};

/// Unbiased mean, plug-in higher moments; each standard error is
/// sqrt(sample variance of the relevant power / n). Requires n >= 2.
MomentSummary moment_summary(std::span<const double> samples);

struct TailEstimate {
  double estimate = 0.0;     // exceed_count / trials
  double upper_bound = 1.0;  // one-sided exact binomial bound, level 0.999
};

/// Point estimate and Clopper-Pearson upper confidence bound for a tail
/// probability from `exceed_count` exceedances in `trials` trials.
TailEstimate tail_estimate(std::size_t exceed_count, std::size_t trials);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x).
double incomplete_gamma_p(double a, double x);

/// Chi-square CDF and quantile with (possibly fractional) df degrees.
double chi_square_cdf(double x, double df);
double chi_square_quantile(double p, double df);

/// Pearson chi-square statistic for observed cell counts against cell
/// probabilities (which must sum to ~1).
double chi_square_stat(std::span<const std::size_t> observed,
                       std::span<const double> probabilities);

}  // namespace skembed

#endif  // SKEMBED_STATS_HPP
