#ifndef SKEMBED_BOUNDS_HPP
#define SKEMBED_BOUNDS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace skembed {

/// Parameters of the maximal-deviation tail bound for a Poisson grid of
/// intensity 2n^2: threshold multiplier beta_star = e^{2q+2} and grid rate
/// delta_star = floor(log n)/n. Natural logarithms throughout.
struct RateParams {
  long n = 3;
  double q = 0.5;
  int m = 1;  // floor(log n)
  double beta_star = 0.0;
  double delta_star = 0.0;
};

/// Requires n >= 3 (so that floor(log n) >= 1) and q > 0.
RateParams rate_params(long n, double q);

/// Exact central moment E[(T - 1)^m] for T ~ Erlang(shape k, rate k),
/// computed cancellation-free from the cumulants of T - 1
/// (kappa_1 = 0, kappa_r = (r-1)!/k^{r-1} for r >= 2) via the complete Bell
/// polynomial recursion, carried out in log space. m must be even, <= 200.
double erlang_central_moment(long k, int m);

/// Natural log of the same quantity; safe where the value itself would
/// overflow a double.
double erlang_central_moment_log(long k, int m);

/// Right-hand side of the maximal-inequality chain,
/// c1 * n^2 * beta_star(q)^{-2(log n - 1)}. Evaluates both this direct form
/// and the simplified power law c1 * e^{4q+4} * n^{-4q-2} and verifies they
/// agree to 1e-12 relative before returning the direct form.
double doob_chain_rhs(double n, double q, double c1);

struct DoobReport {
  long n = 0;
  double q = 0.0;
  int m = 0;
  double c1 = 0.0;
  double log_numerator = 0.0;     // log E[(tau_{2n^2} - 1)^{2m}], exact
  double log_denominator = 0.0;   // log (beta_star * delta_star)^{2m}
  double log_quotient = 0.0;      // numerator / denominator, in logs
  double log_intermediate = 0.0;  // log of c1 n^2 (m/n)^{2m} / denominator
  bool exact_le_intermediate = false;
};

/// Exact numerator (Erlang central moment), the threshold denominator, and
/// the intermediate bound c1 * n^2 * (m/n)^{2m} / (beta* delta*)^{2m};
/// reports whether the exact numerator stays below the intermediate bound
/// for the supplied c1. Requires 2*floor(log n) <= 200.
DoobReport doob_lhs_over_rhs(long n, double q, double c1);

/// Smallest constant c1 with E[(tau_{2n^2}-1)^{2m}] <= c1 n^2 (m/n)^{2m}
/// over the given n values (the max of the exact-to-bound ratios).
double calibrate_c1(std::span<const long> ns);

/// Log-spaced distinct integers in [lo, hi], ascending.
std::vector<long> log_spaced_integers(long lo, long hi, int count);

struct DeltaPair {
  double delta_star = 0.0;       // floor(log n) / n
  double delta_classic = 0.0;   // (log n)^{4 + 3/(4 log n)} / n
};

DeltaPair delta_compare(long n);

struct RateExperimentReport {
  long n = 0;
  double q = 0.0;
  double threshold = 0.0;  // beta_star * delta_star
  std::size_t replications = 0;
  std::size_t exceed_count = 0;
  double estimate = 0.0;     // exceedance frequency
  double upper_bound = 1.0;  // Clopper-Pearson bound, level 0.999
  double q99 = 0.0;          // empirical 0.99-quantile of the max deviation
};

/// Per replication: 2n^2 arrivals of a Poisson(2n^2) process, maximal
/// deviation max_i |tau_i - i/(2n^2)|, compared against beta_star*delta_star.
/// Replication j draws from the stream (master_seed, phase 0, j), so results
/// do not depend on the worker count.
RateExperimentReport rate_experiment(long n, double q, std::size_t replications,
                                     std::uint64_t master_seed, int workers);

}  // namespace skembed

#endif  // SKEMBED_BOUNDS_HPP
