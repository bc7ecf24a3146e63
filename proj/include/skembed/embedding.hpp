#ifndef SKEMBED_EMBEDDING_HPP
#define SKEMBED_EMBEDDING_HPP

#include <cstddef>
#include <vector>

#include "skembed/distributions.hpp"
#include "skembed/rng.hpp"

namespace skembed {

/// Poisson arrival epochs. epochs[0] == 0 always; strictly increasing after.
struct ArrivalStream {
  double intensity = 1.0;
  std::vector<double> epochs;

  std::size_t arrival_count() const { return epochs.size() - 1; }
};

/// A (possibly drifted) Brownian motion observed at Poisson arrival epochs.
/// values[0] == 0; conditional on the spacings, increments are independent
/// Gaussian(mu*dt, sigma^2*dt).
struct SkeletonPath {
  ArrivalStream arrivals;
  std::vector<double> values;
  DriftParams params;
};

/// Brownian path on a merged grid: a uniform mesh plus all Poisson arrivals,
/// with the positions of the arrivals recorded. Every arrival appears exactly
/// once in `times` (coincident points are fused).
struct FineGridPath {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<std::size_t> arrival_indices;
  DriftParams params;
  double arrival_intensity = 0.0;
};

/// Stream with `count` arrivals (count+1 epochs including time 0) built from
/// i.i.d. Exp(intensity) spacings.
ArrivalStream poisson_arrivals(double intensity, std::size_t count, Rng& rng);

/// Stream with every arrival in (0, horizon]. Shares the spacing sampler
/// with the by-count constructor.
ArrivalStream poisson_arrivals_horizon(double intensity, double horizon,
                                       Rng& rng);

/// Exact simulation of the observed path: one Gaussian(mu*dt, sigma^2*dt)
/// increment per spacing.
SkeletonPath brownian_skeleton(const ArrivalStream& arrivals,
                               const DriftParams& params, Rng& rng);

/// Appends `extra` arrivals (and matching Gaussian increments) to an existing
/// skeleton, continuing both the clock and the path.
void extend_skeleton(SkeletonPath& skeleton, std::size_t extra, Rng& rng);

enum class StepLaw { laplace, asym };

/// Partial sums S_0 = 0, S_i = X_1 + ... + X_i of n i.i.d. steps drawn from
/// the chosen two-sided exponential law.
std::vector<double> direct_walk(StepLaw law, const DriftParams& params,
                                std::size_t n, Rng& rng);

/// Simulates Poisson arrivals of intensity 2*lambda on [0, horizon], merges
/// them with a uniform mesh of the given width, and draws Gaussian increments
/// over the merged grid. Arrivals that land within 1e-15 of a mesh point are
/// fused into a single grid node.
FineGridPath joint_fine_grid(const DriftParams& params, double mesh_width,
                             double horizon, Rng& rng);

/// The skeleton induced by a fine-grid path: values at the arrival indices,
/// copied bit-for-bit.
SkeletonPath skeleton_from_grid(const FineGridPath& fine);

}  // namespace skembed

#endif  // SKEMBED_EMBEDDING_HPP
