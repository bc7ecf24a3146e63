#include "skembed/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skembed/parallel.hpp"
#include "skembed/stats.hpp"

namespace skembed {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

RateParams rate_params(long n, double q) {
  if (n < 3) throw std::invalid_argument("rate_params: n must be >= 3");
  if (!(q > 0.0)) throw std::invalid_argument("rate_params: q must be positive");
  RateParams p;
  p.n = n;
  p.q = q;
  p.m = static_cast<int>(std::floor(std::log(static_cast<double>(n))));
  p.beta_star = std::exp(2.0 * q + 2.0);
  p.delta_star = static_cast<double>(p.m) / static_cast<double>(n);
  return p;
}

double erlang_central_moment_log(long k, int m) {
  if (k < 1) throw std::invalid_argument("erlang_central_moment: k >= 1");
  if (m < 2 || m % 2 != 0)
    throw std::invalid_argument("erlang_central_moment: m must be even, >= 2");
  if (m > 200) throw std::invalid_argument("erlang_central_moment: m <= 200");

  const double log_k = std::log(static_cast<double>(k));
  // log kappa_r for the centered variable: kappa_1 = 0 (excluded),
  // kappa_r = (r-1)! / k^{r-1} > 0 for r >= 2. With kappa_1 gone, every term
  // of the moment recursion m_j = sum_r C(j-1, r-1) kappa_r m_{j-r} is
  // nonnegative, so log-space accumulation is cancellation-free.
  std::vector<double> log_moment(static_cast<std::size_t>(m) + 1, kNegInf);
  log_moment[0] = 0.0;  // m_0 = 1
  // log_moment[1] stays -inf: the centered first moment is zero.
  for (int j = 2; j <= m; ++j) {
    double acc = kNegInf;
    for (int r = 2; r <= j; ++r) {
      if (j - r == 1) continue;  // multiplies m_1 = 0
      const double log_kappa = std::lgamma(r) - (r - 1) * log_k;
      const double term = log_binomial(j - 1, r - 1) + log_kappa +
                          log_moment[static_cast<std::size_t>(j - r)];
      acc = log_add(acc, term);
    }
    log_moment[static_cast<std::size_t>(j)] = acc;
  }
  return log_moment[static_cast<std::size_t>(m)];
}

double erlang_central_moment(long k, int m) {
  return std::exp(erlang_central_moment_log(k, m));
}

double doob_chain_rhs(double n, double q, double c1) {
  if (!(n > 0.0) || !(q > 0.0) || !(c1 > 0.0))
    throw std::invalid_argument("doob_chain_rhs: positive arguments required");
  const double log_n = std::log(n);
  const double log_beta = 2.0 * q + 2.0;
  const double log_direct = std::log(c1) + 2.0 * log_n -
                            2.0 * (log_n - 1.0) * log_beta;
  const double log_simplified =
      std::log(c1) + (4.0 * q + 4.0) - (4.0 * q + 2.0) * log_n;
  if (std::fabs(log_direct - log_simplified) > 1e-12)
    throw std::logic_error("doob_chain_rhs: algebraic forms disagree");
  return std::exp(log_direct);
}

namespace {

/// log of the c1-free intermediate bound n^2 (m/n)^{2m}.
double log_intermediate_base(long n, int m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return 2.0 * std::log(dn) + 2.0 * dm * (std::log(dm) - std::log(dn));
}

}  // namespace

DoobReport doob_lhs_over_rhs(long n, double q, double c1) {
  const RateParams p = rate_params(n, q);
  if (2 * p.m > 200)
    throw std::invalid_argument("doob_lhs_over_rhs: 2*floor(log n) <= 200");
  DoobReport r;
  r.n = n;
  r.q = q;
  r.m = p.m;
  r.c1 = c1;
  const long k = 2 * n * n;
  r.log_numerator = erlang_central_moment_log(k, 2 * p.m);
  // log beta_star is exactly 2q+2; no exp/log round trip.
  r.log_denominator =
      2.0 * p.m * ((2.0 * q + 2.0) + std::log(p.delta_star));
  r.log_quotient = r.log_numerator - r.log_denominator;
  const double log_inter_num = std::log(c1) + log_intermediate_base(n, p.m);
  r.log_intermediate = log_inter_num - r.log_denominator;
  r.exact_le_intermediate = r.log_numerator <= log_inter_num + 1e-9;
  return r;
}

double calibrate_c1(std::span<const long> ns) {
  if (ns.empty()) throw std::invalid_argument("calibrate_c1: empty sweep");
  double best = kNegInf;
  for (const long n : ns) {
    const RateParams p = rate_params(n, 1.0);
    const long k = 2 * n * n;
    const double ratio =
        erlang_central_moment_log(k, 2 * p.m) - log_intermediate_base(n, p.m);
    best = std::max(best, ratio);
  }
  return std::exp(best);
}

std::vector<long> log_spaced_integers(long lo, long hi, int count) {
  if (lo < 1 || hi < lo || count < 1)
    throw std::invalid_argument("log_spaced_integers: bad range");
  std::vector<long> out;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (int i = 0; i < count; ++i) {
    const double f = (count == 1) ? 0.0
                                  : static_cast<double>(i) /
                                        static_cast<double>(count - 1);
    const long v = std::lround(std::exp(llo + f * (lhi - llo)));
    if (out.empty() || v > out.back()) out.push_back(std::clamp(v, lo, hi));
  }
  return out;
}

DeltaPair delta_compare(long n) {
  if (n < 3) throw std::invalid_argument("delta_compare: n must be >= 3");
  const double dn = static_cast<double>(n);
  const double log_n = std::log(dn);
  DeltaPair d;
  d.delta_star = std::floor(log_n) / dn;
  d.delta_classic = std::pow(log_n, 4.0 + 3.0 / (4.0 * log_n)) / dn;
  return d;
}

RateExperimentReport rate_experiment(long n, double q, std::size_t replications,
                                     std::uint64_t master_seed, int workers) {
  const RateParams p = rate_params(n, q);
  if (replications == 0)
    throw std::invalid_argument("rate_experiment: replications must be >= 1");
  RateExperimentReport report;
  report.n = n;
  report.q = q;
  report.threshold = p.beta_star * p.delta_star;
  report.replications = replications;

  const long k = 2 * n * n;
  const double intensity = static_cast<double>(k);
  std::vector<double> max_dev(replications);
  for_each_replication(
      replications, master_seed, /*phase=*/0, workers,
      [&](std::size_t j, Rng& rng) {
        double t = 0.0;
        double worst = 0.0;
        for (long i = 1; i <= k; ++i) {
          t += rng.exponential(intensity);
          const double dev =
              std::fabs(t - static_cast<double>(i) / intensity);
          worst = std::max(worst, dev);
        }
        max_dev[j] = worst;
      });

  std::size_t exceed = 0;
  for (const double d : max_dev)
    if (d > report.threshold) ++exceed;
  report.exceed_count = exceed;
  const TailEstimate te = tail_estimate(exceed, replications);
  report.estimate = te.estimate;
  report.upper_bound = te.upper_bound;

  std::vector<double> sorted(max_dev);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t idx = static_cast<std::size_t>(
      std::ceil(0.99 * static_cast<double>(replications))) - 1;
  report.q99 = sorted[std::min(idx, replications - 1)];
  return report;
}

}  // namespace skembed
