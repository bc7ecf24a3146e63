#include "skembed/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace skembed {

double ks_one_sample(std::span<const double> samples,
                     const std::function<double(double)>& cdf) {
  if (samples.empty())
    throw std::invalid_argument("ks_one_sample: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double hi = std::fabs(static_cast<double>(i + 1) / n - f);
    const double lo = std::fabs(static_cast<double>(i) / n - f);
    stat = std::max(stat, std::max(hi, lo));
  }
  return stat;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double stat = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double v;
    if (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j]))
      v = sa[i];
    else
      v = sb[j];
    // Consume every copy of v from both samples before comparing the ECDFs.
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    stat = std::max(stat, std::fabs(static_cast<double>(i) / na -
                                    static_cast<double>(j) / nb));
  }
  return stat;
}

double ks_threshold_one_sample(std::size_t n) {
  return 1.95 / std::sqrt(static_cast<double>(n));
}

double ks_threshold_two_sample(std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return 1.95 * std::sqrt((dn + dm) / (dn * dm));
}

MomentSummary moment_summary(std::span<const double> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("moment_summary: need at least 2 samples");
  MomentSummary s;
  s.count = samples.size();
  const double n = static_cast<double>(s.count);

  double sum = 0.0;
  for (const double x : samples) sum += x;
  s.mean = sum / n;

  double r2 = 0.0, r4 = 0.0, r8 = 0.0;
  double c2 = 0.0, c4 = 0.0, c8 = 0.0;
  for (const double x : samples) {
    const double x2 = x * x;
    const double x4 = x2 * x2;
    r2 += x2;
    r4 += x4;
    r8 += x4 * x4;
    const double d = x - s.mean;
    const double d2 = d * d;
    const double d4 = d2 * d2;
    c2 += d2;
    c4 += d4;
    c8 += d4 * d4;
  }
  s.raw2 = r2 / n;
  s.raw4 = r4 / n;
  s.central2 = c2 / n;
  s.central4 = c4 / n;
  const double r8m = r8 / n;
  const double c8m = c8 / n;

  auto se_of_mean_of = [n](double second, double first) {
    const double var = std::max(0.0, second - first * first);
    return std::sqrt(var / n);
  };
  s.se_mean = se_of_mean_of(s.raw2, s.mean);
  s.se_raw2 = se_of_mean_of(s.raw4, s.raw2);
  s.se_raw4 = se_of_mean_of(r8m, s.raw4);
  s.se_central2 = se_of_mean_of(s.central4, s.central2);
  s.se_central4 = se_of_mean_of(c8m, s.central4);
  return s;
}

namespace {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("incomplete_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double incomplete_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("incomplete_gamma_p: a > 0");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) {
    // Series representation.
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // Continued fraction for Q(a, x), modified Lentz.
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  const double q = h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  return 1.0 - q;
}

double chi_square_cdf(double x, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("chi_square_cdf: df > 0");
  if (x <= 0.0) return 0.0;
  return incomplete_gamma_p(df / 2.0, x / 2.0);
}

double chi_square_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("chi_square_quantile: p must lie in (0,1)");
  double lo = 0.0;
  double hi = df + 10.0;
  while (chi_square_cdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi_square_cdf(mid, df) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double chi_square_stat(std::span<const std::size_t> observed,
                       std::span<const double> probabilities) {
  if (observed.size() != probabilities.size() || observed.empty())
    throw std::invalid_argument("chi_square_stat: size mismatch");
  std::size_t total = 0;
  for (const std::size_t o : observed) total += o;
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probabilities[i] * static_cast<double>(total);
    if (!(expected > 0.0))
      throw std::invalid_argument("chi_square_stat: zero expected count");
    const double diff = static_cast<double>(observed[i]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

TailEstimate tail_estimate(std::size_t exceed_count, std::size_t trials) {
  if (trials == 0)
    throw std::invalid_argument("tail_estimate: trials must be positive");
  if (exceed_count > trials)
    throw std::invalid_argument("tail_estimate: exceed_count > trials");
  constexpr double kAlpha = 0.001;  // one-sided level 0.999
  TailEstimate te;
  const double t = static_cast<double>(trials);
  te.estimate = static_cast<double>(exceed_count) / t;
  if (exceed_count == trials) {
    te.upper_bound = 1.0;
    return te;
  }
  if (exceed_count == 0) {
    // P(X = 0 | p) = (1-p)^T = alpha  =>  p = 1 - alpha^(1/T).
    te.upper_bound = 1.0 - std::exp(std::log(kAlpha) / t);
    return te;
  }
  // Smallest p with P(Bin(T, p) <= k) <= alpha, via the incomplete beta:
  // P(X <= k | p) = I_{1-p}(T-k, k+1). Bisection on p.
  const double k = static_cast<double>(exceed_count);
  auto cdf_at = [&](double p) {
    return incomplete_beta(t - k, k + 1.0, 1.0 - p);
  };
  double lo = te.estimate;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf_at(mid) > kAlpha)
      lo = mid;
    else
      hi = mid;
  }
  te.upper_bound = 0.5 * (lo + hi);
  return te;
}

}  // namespace skembed
