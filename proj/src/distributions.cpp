#include "skembed/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace skembed {

DriftParams rates_from_drift(double lambda, double mu, double sigma) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("rates_from_drift: lambda must be positive");
  if (!(sigma > 0.0))
    throw std::invalid_argument("rates_from_drift: sigma must be positive");
  const double s2 = sigma * sigma;
  const double drift_rate = mu / s2;
  const double root = std::sqrt(drift_rate * drift_rate + 4.0 * lambda / s2);
  DriftParams p;
  p.lambda = lambda;
  p.mu = mu;
  p.sigma = sigma;
  p.eta = root - drift_rate;
  p.omega = root + drift_rate;
  return p;
}

double sample_laplace(double lambda, Rng& rng) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("sample_laplace: lambda must be positive");
  const double u_sign = rng.uniform01();
  const double magnitude = rng.exponential(2.0 * std::sqrt(lambda));
  return u_sign < 0.5 ? magnitude : -magnitude;
}

double sample_asym(const DriftParams& params, Rng& rng) {
  const double p_plus = params.omega / (params.omega + params.eta);
  const double u_branch = rng.uniform01();
  if (u_branch < p_plus) return rng.exponential(params.eta);
  return -rng.exponential(params.omega);
}

double laplace_cdf(double lambda, double x) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("laplace_cdf: lambda must be positive");
  const double rate = 2.0 * std::sqrt(lambda);
  if (x < 0.0) return 0.5 * std::exp(rate * x);
  return 1.0 - 0.5 * std::exp(-rate * x);
}

double laplace_pdf(double lambda, double x) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("laplace_pdf: lambda must be positive");
  return std::sqrt(lambda) * std::exp(-2.0 * std::sqrt(lambda) * std::fabs(x));
}

double asym_cdf(const DriftParams& params, double x) {
  const double eta = params.eta;
  const double omega = params.omega;
  if (x < 0.0) return eta / (omega + eta) * std::exp(omega * x);
  return 1.0 - omega / (omega + eta) * std::exp(-eta * x);
}

double asym_pdf(const DriftParams& params, double x) {
  const double eta = params.eta;
  const double omega = params.omega;
  const double norm = eta * omega / (omega + eta);
  if (x < 0.0) return norm * std::exp(omega * x);
  return norm * std::exp(-eta * x);
}

}  // namespace skembed
