#include <cmath>
#include <vector>

#include "doctest.h"
#include "skembed/distributions.hpp"
#include "skembed/parallel.hpp"
#include "skembed/rng.hpp"
#include "skembed/stats.hpp"

using namespace skembed;

namespace {

/// Laplace quantile used to place samples at exact plotting positions.
double laplace_quantile(double lambda, double p) {
  const double rate = 2.0 * std::sqrt(lambda);
  if (p < 0.5) return std::log(2.0 * p) / rate;
  return -std::log(2.0 * (1.0 - p)) / rate;
}

/// Brute-force binomial CDF in log space; the independent oracle for the
/// Clopper-Pearson inversion.
double binom_cdf_by_summation(std::size_t k, std::size_t t, double p) {
  double acc = 0.0;
  for (std::size_t j = 0; j <= k; ++j) {
    const double lg = std::lgamma(static_cast<double>(t) + 1.0) -
                      std::lgamma(static_cast<double>(j) + 1.0) -
                      std::lgamma(static_cast<double>(t - j) + 1.0);
    acc += std::exp(lg + static_cast<double>(j) * std::log(p) +
                    static_cast<double>(t - j) * std::log1p(-p));
  }
  return acc;
}

double clopper_pearson_by_summation(std::size_t k, std::size_t t) {
  double lo = static_cast<double>(k) / static_cast<double>(t);
  double hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (binom_cdf_by_summation(k, t, mid) > 0.001)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("one-sample ks on elementary inputs") {
  const std::vector<double> one = {0.0};
  CHECK(ks_one_sample(one, [](double) { return 0.5; }) == 0.5);
  CHECK_THROWS_AS(ks_one_sample(std::vector<double>{},
                                [](double) { return 0.5; }),
                  std::invalid_argument);

  // Samples at the exact quantiles i/(N+1) keep the statistic near 1/N.
  const std::size_t n = 1000;
  std::vector<double> samples;
  for (std::size_t i = 1; i <= n; ++i)
    samples.push_back(laplace_quantile(
        1.0, static_cast<double>(i) / static_cast<double>(n + 1)));
  const double stat =
      ks_one_sample(samples, [](double x) { return laplace_cdf(1.0, x); });
  CHECK(stat <= 1.0 / static_cast<double>(n + 1) + 1.0 / static_cast<double>(n));
}

TEST_CASE("ks statistics are invariant under consistent monotone maps") {
  Rng rng(808);
  std::vector<double> a(3000), b(3000);
  for (auto& x : a) x = rng.normal();
  for (auto& x : b) x = rng.normal() * 1.3 + 0.2;

  // Two-sample: any strictly increasing map applied to both samples.
  const double base = ks_two_sample(a, b);
  auto cubic = [](double x) { return x * x * x + 2.0 * x; };
  std::vector<double> ta(a), tb(b);
  for (auto& x : ta) x = cubic(x);
  for (auto& x : tb) x = cubic(x);
  CHECK(ks_two_sample(ta, tb) == base);

  // One-sample: halving is exactly invertible in binary floating point.
  const double ks_raw = ks_one_sample(a, [](double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
  });
  std::vector<double> halved(a);
  for (auto& x : halved) x *= 0.5;
  const double ks_halved = ks_one_sample(halved, [](double y) {
    return 0.5 * std::erfc(-(2.0 * y) / std::sqrt(2.0));
  });
  CHECK(ks_halved == ks_raw);
  CHECK(base >= 0.0);
  CHECK(base <= 1.0);
}

TEST_CASE("two-sample ks on elementary inputs") {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  CHECK(ks_two_sample(a, a) == 0.0);
  const std::vector<double> low = {-5.0, -4.0};
  const std::vector<double> high = {1.0, 2.0, 3.0};
  CHECK(ks_two_sample(low, high) == 1.0);
  CHECK_THROWS_AS(ks_two_sample(a, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("moment summary on constants and known laws") {
  const std::vector<double> constant(10, 3.25);
  const MomentSummary c = moment_summary(constant);
  CHECK(c.mean == 3.25);
  CHECK(c.central2 == 0.0);
  CHECK(c.se_mean == 0.0);
  CHECK(c.se_raw2 == 0.0);
  CHECK_THROWS_AS(moment_summary(std::vector<double>{1.0}),
                  std::invalid_argument);

  // Exp(2) spacings: mean 1/2 and raw second moment 2/4 = 1/2.
  const std::size_t n = 1000000;
  const auto exp_draws = sample_parallel(
      n, 717, 0, 0, [](Rng& rng) { return rng.exponential(2.0); });
  const MomentSummary e = moment_summary(exp_draws);
  CHECK(std::fabs(e.mean - 0.5) < 4.0 * e.se_mean);
  CHECK(std::fabs(e.raw2 - 0.5) < 4.0 * e.se_raw2);
  CHECK(e.raw2 >= e.mean * e.mean);
}

TEST_CASE("chunked means merge to the full mean") {
  Rng rng(404);
  std::vector<double> all(100001);
  for (auto& x : all) x = rng.normal() * 3.0 + 1.0;
  const MomentSummary full = moment_summary(all);

  double weighted = 0.0;
  std::size_t start = 0;
  for (const std::size_t size : {std::size_t{30000}, std::size_t{50000},
                                 std::size_t{20001}}) {
    const MomentSummary part = moment_summary(
        std::span<const double>(all.data() + start, size));
    weighted += part.mean * static_cast<double>(size);
    start += size;
  }
  weighted /= static_cast<double>(all.size());
  CHECK(std::fabs(weighted - full.mean) <= 1e-12 * std::fabs(full.mean));
}

TEST_CASE("tail estimate closed forms and oracle agreement") {
  // Zero exceedances: p_u = 1 - 0.001^{1/T}.
  const TailEstimate zero = tail_estimate(0, 10000);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.upper_bound ==
        doctest::Approx(1.0 - std::exp(std::log(0.001) / 10000.0))
            .epsilon(1e-12));
  CHECK(zero.upper_bound == doctest::Approx(6.9054e-4).epsilon(1e-4));

  const TailEstimate full = tail_estimate(10000, 10000);
  CHECK(full.estimate == 1.0);
  CHECK(full.upper_bound == 1.0);

  // Five exceedances in ten thousand trials, against the summation oracle.
  const TailEstimate five = tail_estimate(5, 10000);
  CHECK(five.estimate == 5e-4);
  CHECK(five.upper_bound ==
        doctest::Approx(clopper_pearson_by_summation(5, 10000)).epsilon(1e-9));
  // Direct coverage statement at the returned bound.
  CHECK(binom_cdf_by_summation(5, 10000, five.upper_bound) ==
        doctest::Approx(0.001).epsilon(1e-6));

  CHECK_THROWS_AS(tail_estimate(5, 4), std::invalid_argument);
  CHECK_THROWS_AS(tail_estimate(0, 0), std::invalid_argument);
}

TEST_CASE("tail estimate monotonicity") {
  double prev = 0.0;
  for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{4},
                        std::size_t{20}, std::size_t{100}}) {
    const TailEstimate te = tail_estimate(k, 2000);
    CHECK(te.upper_bound >= prev);
    prev = te.upper_bound;
  }
  double prev_trials = 1.0;
  for (std::size_t t : {std::size_t{100}, std::size_t{1000}, std::size_t{10000},
                        std::size_t{100000}}) {
    const TailEstimate te = tail_estimate(3, t);
    CHECK(te.upper_bound <= prev_trials);
    prev_trials = te.upper_bound;
  }
}

TEST_CASE("incomplete beta and gamma against classical checkpoints") {
  // Symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
  for (double a : {0.5, 2.0, 7.0}) {
    for (double b : {1.0, 3.5, 20.0}) {
      for (double x : {0.05, 0.3, 0.5, 0.9}) {
        CHECK(incomplete_beta(a, b, x) ==
              doctest::Approx(1.0 - incomplete_beta(b, a, 1.0 - x))
                  .epsilon(1e-12));
      }
    }
  }
  // Binomial CDF through the beta function matches direct summation.
  for (double p : {0.1, 0.4, 0.75}) {
    for (std::size_t k : {std::size_t{0}, std::size_t{3}, std::size_t{7}}) {
      const std::size_t t = 12;
      const double via_beta = incomplete_beta(static_cast<double>(t - k),
                                              static_cast<double>(k) + 1.0,
                                              1.0 - p);
      CHECK(via_beta ==
            doctest::Approx(binom_cdf_by_summation(k, t, p)).epsilon(1e-12));
    }
  }

  // Chi-square table values.
  CHECK(chi_square_cdf(3.841458820694124, 1.0) ==
        doctest::Approx(0.95).epsilon(1e-10));
  CHECK(chi_square_quantile(0.999, 10.0) ==
        doctest::Approx(29.588).epsilon(1e-4));
  for (double df : {1.0, 4.0, 12.0}) {
    for (double p : {0.01, 0.5, 0.975, 0.999}) {
      CHECK(chi_square_cdf(chi_square_quantile(p, df), df) ==
            doctest::Approx(p).epsilon(1e-10));
    }
  }
}

TEST_CASE("chi-square statistic on a fair split") {
  const std::vector<std::size_t> observed = {50, 50};
  const std::vector<double> probs = {0.5, 0.5};
  CHECK(chi_square_stat(observed, probs) == 0.0);
  const std::vector<std::size_t> skew = {75, 25};
  CHECK(chi_square_stat(skew, probs) == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("property: ks statistics are symmetric and bounded") {
  Rng seeds(41414);
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng(seeds.next_u64());
    const std::size_t na = 1 + static_cast<std::size_t>(rng.uniform01() * 200);
    const std::size_t nb = 1 + static_cast<std::size_t>(rng.uniform01() * 200);
    std::vector<double> a(na), b(nb);
    for (auto& x : a) x = rng.normal();
    // Occasionally inject ties across and within samples.
    for (std::size_t i = 0; i < nb; ++i)
      b[i] = (rng.uniform01() < 0.3 && i < na) ? a[i] : rng.normal();
    const double d = ks_two_sample(a, b);
    CHECK(d == ks_two_sample(b, a));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    const double d1 = ks_one_sample(a, [](double x) {
      return 0.5 * std::erfc(-x / std::sqrt(2.0));
    });
    CHECK(d1 >= 0.0);
    CHECK(d1 <= 1.0);
  }
}

TEST_CASE("property: tail bound dominates the point estimate") {
  Rng rng(262626);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t t = 1 + static_cast<std::size_t>(rng.uniform01() * 5000);
    const std::size_t k = static_cast<std::size_t>(rng.uniform01() *
                                                   static_cast<double>(t + 1));
    const TailEstimate te = tail_estimate(std::min(k, t), t);
    CHECK(te.upper_bound >= te.estimate);
    CHECK(te.upper_bound <= 1.0);
  }
}
