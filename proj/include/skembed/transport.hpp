#ifndef SKEMBED_TRANSPORT_HPP
#define SKEMBED_TRANSPORT_HPP

#include <cstddef>
#include <vector>

#include "skembed/embedding.hpp"

namespace skembed {

/// Continuous piecewise-linear path. Segment j (0-based) runs at slope
/// slopes[j]: segment 0 covers [0, epochs[0]), segment j covers
/// [epochs[j-1], epochs[j]) and the final segment continues at its slope up
/// to `horizon`. The path starts at 0; values[k] is the value at epochs[k].
struct TransportPath {
  std::vector<double> epochs;  // inflection epochs, strictly increasing, > 0
  std::vector<double> values;  // path values at the inflection epochs
  std::vector<double> slopes;  // signed slopes, size epochs.size() + 1
  double horizon = 0.0;

  double initial_sign() const { return slopes.front() > 0.0 ? 1.0 : -1.0; }
};

/// Indices i with (values[i] - values[i-1]) * (values[i+1] - values[i]) < 0,
/// i.e. where the observed walk changes direction. A zero increment is a
/// probability-zero event and raises std::runtime_error rather than being
/// tie-broken: it would mask an RNG defect.
std::vector<std::size_t> inflection_epochs(const SkeletonPath& skeleton);

/// Couples a transport path to a symmetric skeleton (mu = 0, sigma = 1,
/// arrival intensity 2*lambda): inflection epochs are spaced by
/// |dB|/sqrt(lambda), values at them are the skeleton values at its
/// inflection indices copied bit-for-bit, and slopes are +-sqrt(lambda)
/// alternating from the sign of the first skeleton run. The path extends at
/// its final slope to at least `min_horizon`.
TransportPath transport_from_skeleton(const SkeletonPath& skeleton,
                                      double lambda, double min_horizon = 0.0);

/// Direct simulation: a two-state jump process with flip rate lambda and a
/// fair initial sign, integrated at speed sqrt(lambda).
TransportPath transport_direct(double lambda, double horizon, Rng& rng);

/// Drifted variant: holding rate 2*lambda*eta/(omega+eta) in the + state and
/// 2*lambda*omega/(omega+eta) in the - state, slopes +2*lambda/eta and
/// -2*lambda/omega, initial state + with probability omega/(omega+eta).
TransportPath transport_drifted(const DriftParams& params, double horizon,
                                Rng& rng);

/// Value at time t: exact at inflection epochs, linear in between, and the
/// final slope extends to the horizon. Throws std::out_of_range outside
/// [0, horizon].
double eval_transport(const TransportPath& path, double t);

/// Sup-distance estimate between a transport path and a fine-grid Brownian
/// path over the grid's time span.
struct SupDistance {
  /// Maximum of |transport(t) - B_t| over the grid times.
  double mesh_max = 0.0;
  /// Analytic slack for the gaps between grid points:
  /// max_dt * (max |slope| + max |dB|/dt over grid cells).
  double slack = 0.0;
};

SupDistance sup_distance(const TransportPath& path, const FineGridPath& fine);

}  // namespace skembed

#endif  // SKEMBED_TRANSPORT_HPP
