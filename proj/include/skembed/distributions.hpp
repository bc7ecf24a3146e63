#ifndef SKEMBED_DISTRIBUTIONS_HPP
#define SKEMBED_DISTRIBUTIONS_HPP

#include "skembed/rng.hpp"

namespace skembed {

/// Drift/volatility configuration together with the exponential rates of the
/// positive and negative parts of the first-step law.
///
/// For a Brownian motion with drift mu and volatility sigma observed at the
/// first arrival of an independent Poisson process of intensity 2*lambda,
/// the observed value is the difference of independent Exp(eta) and
/// Exp(omega) variables, where
///
///   eta   = sqrt(mu^2/sigma^4 + 4*lambda/sigma^2) - mu/sigma^2
///   omega = sqrt(mu^2/sigma^4 + 4*lambda/sigma^2) + mu/sigma^2
///
/// These satisfy eta*omega = 4*lambda/sigma^2 and omega - eta = 2*mu/sigma^2.
/// With mu = 0, sigma = 1 both rates reduce to 2*sqrt(lambda).
struct DriftParams {
  double lambda = 1.0;
  double mu = 0.0;
  double sigma = 1.0;
  double eta = 2.0;
  double omega = 2.0;

  bool symmetric() const { return mu == 0.0 && sigma == 1.0; }
};

/// Derives (eta, omega) from (lambda, mu, sigma). Throws std::invalid_argument
/// unless lambda > 0 and sigma > 0.
DriftParams rates_from_drift(double lambda, double mu, double sigma);

/// One draw from the centered two-sided exponential density
/// sqrt(lambda) * exp(-2*sqrt(lambda)*|x|), i.e. exponential of rate
/// 2*sqrt(lambda) with a fair random sign. Consumes two uniforms: the sign
/// branch first, then the magnitude.
double sample_laplace(double lambda, Rng& rng);

/// One draw from the asymmetric two-sided exponential law of DriftParams:
/// with probability omega/(omega+eta) an Exp(eta) value, otherwise the
/// negative of an Exp(omega) value. Consumes two uniforms in the same order
/// as sample_laplace (branch, then magnitude).
double sample_asym(const DriftParams& params, Rng& rng);

/// CDF of the centered law: (1/2)e^{2 sqrt(lambda) x} for x < 0, else
/// 1 - (1/2)e^{-2 sqrt(lambda) x}.
double laplace_cdf(double lambda, double x);

/// Density of the centered law.
double laplace_pdf(double lambda, double x);

/// CDF of the asymmetric law: (eta/(omega+eta))e^{omega x} for x < 0, else
/// 1 - (omega/(omega+eta))e^{-eta x}.
double asym_cdf(const DriftParams& params, double x);

/// Density of the asymmetric law.
double asym_pdf(const DriftParams& params, double x);

}  // namespace skembed

#endif  // SKEMBED_DISTRIBUTIONS_HPP
