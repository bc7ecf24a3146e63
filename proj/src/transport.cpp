#include "skembed/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skembed {

std::vector<std::size_t> inflection_epochs(const SkeletonPath& skeleton) {
  const auto& v = skeleton.values;
  if (v.size() < 3)
    throw std::invalid_argument("inflection_epochs: need at least 3 values");
  std::vector<std::size_t> indices;
  bool prev_up = false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double inc = v[i] - v[i - 1];
    if (inc == 0.0)
      throw std::runtime_error(
          "inflection_epochs: zero walk increment (probability-zero event)");
    const bool up = inc > 0.0;
    if (i > 1 && up != prev_up) indices.push_back(i - 1);
    prev_up = up;
  }
  return indices;
}

TransportPath transport_from_skeleton(const SkeletonPath& skeleton,
                                      double lambda, double min_horizon) {
  if (!(lambda > 0.0))
    throw std::invalid_argument(
        "transport_from_skeleton: lambda must be positive");
  if (!skeleton.params.symmetric())
    throw std::invalid_argument(
        "transport_from_skeleton: skeleton must have mu = 0, sigma = 1");
  const double intensity = skeleton.arrivals.intensity;
  if (std::fabs(intensity - 2.0 * lambda) > 1e-12 * (2.0 * lambda))
    throw std::invalid_argument(
        "transport_from_skeleton: skeleton intensity must equal 2*lambda");

  const std::vector<std::size_t> inflections = inflection_epochs(skeleton);
  const double speed = std::sqrt(lambda);

  TransportPath path;
  path.epochs.reserve(inflections.size());
  path.values.reserve(inflections.size());
  path.slopes.reserve(inflections.size() + 1);

  double chi = 0.0;
  double prev_value = 0.0;
  double sign = skeleton.values[1] > 0.0 ? 1.0 : -1.0;
  path.slopes.push_back(sign * speed);
  for (const std::size_t idx : inflections) {
    const double value = skeleton.values[idx];
    chi += std::fabs(value - prev_value) / speed;
    path.epochs.push_back(chi);
    path.values.push_back(value);  // copied, never recomputed
    sign = -sign;
    path.slopes.push_back(sign * speed);
    prev_value = value;
  }
  path.horizon = std::max(chi, min_horizon);
  return path;
}

namespace {

/// Shared integrator for the direct constructions: alternate between two
/// signed slopes, holding Exp(rate of the current state) before each flip.
TransportPath integrate_two_state(double slope_plus, double slope_minus,
                                  double rate_plus, double rate_minus,
                                  bool start_plus, double horizon, Rng& rng) {
  TransportPath path;
  path.horizon = horizon;
  bool plus = start_plus;
  path.slopes.push_back(plus ? slope_plus : slope_minus);
  double t = 0.0;
  double v = 0.0;
  for (;;) {
    const double hold = rng.exponential(plus ? rate_plus : rate_minus);
    if (t + hold > horizon) break;
    const double slope = plus ? slope_plus : slope_minus;
    const double prev_t = t;
    t += hold;
    // Advance by the epoch difference so the piecewise-linear recursion
    // value[k] = value[k-1] + slope[k] * (epoch[k] - epoch[k-1]) holds
    // bit-exactly on the stored fields.
    v += slope * (t - prev_t);
    path.epochs.push_back(t);
    path.values.push_back(v);
    plus = !plus;
    path.slopes.push_back(plus ? slope_plus : slope_minus);
  }
  return path;
}

}  // namespace

TransportPath transport_direct(double lambda, double horizon, Rng& rng) {
  if (!(lambda > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument(
        "transport_direct: lambda and horizon must be positive");
  const double speed = std::sqrt(lambda);
  const bool start_plus = rng.uniform01() < 0.5;
  return integrate_two_state(speed, -speed, lambda, lambda, start_plus, horizon,
                             rng);
}

TransportPath transport_drifted(const DriftParams& params, double horizon,
                                Rng& rng) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("transport_drifted: horizon must be positive");
  const double eta = params.eta;
  const double omega = params.omega;
  const double lambda = params.lambda;
  const double p_plus = omega / (omega + eta);
  const bool start_plus = rng.uniform01() < p_plus;
  return integrate_two_state(2.0 * lambda / eta, -2.0 * lambda / omega,
                             2.0 * lambda * eta / (omega + eta),
                             2.0 * lambda * omega / (omega + eta), start_plus,
                             horizon, rng);
}

double eval_transport(const TransportPath& path, double t) {
  if (!(t >= 0.0) || t > path.horizon)
    throw std::out_of_range("eval_transport: t outside [0, horizon]");
  const auto it = std::lower_bound(path.epochs.begin(), path.epochs.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - path.epochs.begin());
  if (it != path.epochs.end() && *it == t) return path.values[j];
  const double base_t = (j == 0) ? 0.0 : path.epochs[j - 1];
  const double base_v = (j == 0) ? 0.0 : path.values[j - 1];
  return base_v + path.slopes[j] * (t - base_t);
}

SupDistance sup_distance(const TransportPath& path, const FineGridPath& fine) {
  if (fine.times.empty())
    throw std::invalid_argument("sup_distance: empty grid");
  if (fine.times.back() > path.horizon)
    throw std::out_of_range(
        "sup_distance: transport path does not cover the grid span");

  SupDistance result;
  double max_dt = 0.0;
  double lipschitz_proxy = 0.0;

  // Linear sweep: both the grid times and the inflection epochs are sorted.
  std::size_t j = 0;  // active transport segment
  for (std::size_t i = 0; i < fine.times.size(); ++i) {
    const double t = fine.times[i];
    while (j < path.epochs.size() && path.epochs[j] < t) ++j;
    double ft;
    if (j < path.epochs.size() && path.epochs[j] == t) {
      ft = path.values[j];
    } else {
      const double base_t = (j == 0) ? 0.0 : path.epochs[j - 1];
      const double base_v = (j == 0) ? 0.0 : path.values[j - 1];
      ft = base_v + path.slopes[j] * (t - base_t);
    }
    result.mesh_max = std::max(result.mesh_max, std::fabs(ft - fine.values[i]));
    if (i > 0) {
      const double dt = fine.times[i] - fine.times[i - 1];
      max_dt = std::max(max_dt, dt);
      if (dt > 0.0)
        lipschitz_proxy = std::max(
            lipschitz_proxy, std::fabs(fine.values[i] - fine.values[i - 1]) / dt);
    }
  }

  double max_slope = 0.0;
  for (const double s : path.slopes) max_slope = std::max(max_slope, std::fabs(s));
  result.slack = max_dt * (max_slope + lipschitz_proxy);
  return result;
}

}  // namespace skembed
