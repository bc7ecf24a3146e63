#include "skembed/embedding.hpp"

#include <cmath>
#include <stdexcept>

namespace skembed {

namespace {
constexpr double kFuseTolerance = 1e-15;
}

ArrivalStream poisson_arrivals(double intensity, std::size_t count, Rng& rng) {
  if (!(intensity > 0.0))
    throw std::invalid_argument("poisson_arrivals: intensity must be positive");
  if (count == 0)
    throw std::invalid_argument("poisson_arrivals: count must be at least 1");
  ArrivalStream stream;
  stream.intensity = intensity;
  stream.epochs.reserve(count + 1);
  stream.epochs.push_back(0.0);
  double t = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    t += rng.exponential(intensity);
    stream.epochs.push_back(t);
  }
  return stream;
}

ArrivalStream poisson_arrivals_horizon(double intensity, double horizon,
                                       Rng& rng) {
  if (!(intensity > 0.0))
    throw std::invalid_argument(
        "poisson_arrivals_horizon: intensity must be positive");
  if (!(horizon > 0.0))
    throw std::invalid_argument(
        "poisson_arrivals_horizon: horizon must be positive");
  ArrivalStream stream;
  stream.intensity = intensity;
  stream.epochs.push_back(0.0);
  double t = rng.exponential(intensity);
  while (t <= horizon) {
    stream.epochs.push_back(t);
    t += rng.exponential(intensity);
  }
  return stream;
}

SkeletonPath brownian_skeleton(const ArrivalStream& arrivals,
                               const DriftParams& params, Rng& rng) {
  if (arrivals.epochs.empty() || arrivals.epochs.front() != 0.0)
    throw std::invalid_argument("brownian_skeleton: invalid arrival stream");
  SkeletonPath path;
  path.arrivals = arrivals;
  path.params = params;
  path.values.reserve(arrivals.epochs.size());
  path.values.push_back(0.0);
  double v = 0.0;
  for (std::size_t i = 1; i < arrivals.epochs.size(); ++i) {
    const double dt = arrivals.epochs[i] - arrivals.epochs[i - 1];
    v += params.mu * dt + params.sigma * std::sqrt(dt) * rng.normal();
    path.values.push_back(v);
  }
  return path;
}

void extend_skeleton(SkeletonPath& skeleton, std::size_t extra, Rng& rng) {
  double t = skeleton.arrivals.epochs.back();
  double v = skeleton.values.back();
  const double intensity = skeleton.arrivals.intensity;
  for (std::size_t i = 0; i < extra; ++i) {
    const double dt = rng.exponential(intensity);
    t += dt;
    v += skeleton.params.mu * dt +
         skeleton.params.sigma * std::sqrt(dt) * rng.normal();
    skeleton.arrivals.epochs.push_back(t);
    skeleton.values.push_back(v);
  }
}

std::vector<double> direct_walk(StepLaw law, const DriftParams& params,
                                std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("direct_walk: n must be at least 1");
  std::vector<double> sums;
  sums.reserve(n + 1);
  sums.push_back(0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += (law == StepLaw::laplace) ? sample_laplace(params.lambda, rng)
                                   : sample_asym(params, rng);
    sums.push_back(s);
  }
  return sums;
}

FineGridPath joint_fine_grid(const DriftParams& params, double mesh_width,
                             double horizon, Rng& rng) {
  if (!(mesh_width > 0.0) || !(mesh_width < horizon))
    throw std::invalid_argument(
        "joint_fine_grid: need 0 < mesh_width < horizon");

  const double intensity = 2.0 * params.lambda;
  const ArrivalStream arrivals = poisson_arrivals_horizon(intensity, horizon, rng);

  // Uniform mesh 0, w, 2w, ..., ending exactly at the horizon.
  std::vector<double> mesh;
  mesh.push_back(0.0);
  for (std::size_t j = 1;; ++j) {
    const double t = static_cast<double>(j) * mesh_width;
    if (t >= horizon * (1.0 - 1e-12)) break;
    mesh.push_back(t);
  }
  mesh.push_back(horizon);

  FineGridPath fine;
  fine.params = params;
  fine.arrival_intensity = intensity;
  fine.times.reserve(mesh.size() + arrivals.epochs.size());
  fine.arrival_indices.reserve(arrivals.epochs.size());

  // Merge, fusing an arrival with a mesh point when they coincide within
  // the absolute tolerance. Epoch 0 is both the first mesh point and tau_0.
  std::size_t mi = 1;
  std::size_t ai = 1;
  fine.times.push_back(0.0);
  fine.arrival_indices.push_back(0);
  while (mi < mesh.size() || ai < arrivals.epochs.size()) {
    const bool mesh_left = mi < mesh.size();
    const bool arr_left = ai < arrivals.epochs.size();
    if (mesh_left && arr_left &&
        std::fabs(mesh[mi] - arrivals.epochs[ai]) <= kFuseTolerance) {
      fine.times.push_back(mesh[mi]);
      fine.arrival_indices.push_back(fine.times.size() - 1);
      ++mi;
      ++ai;
    } else if (!arr_left || (mesh_left && mesh[mi] < arrivals.epochs[ai])) {
      fine.times.push_back(mesh[mi]);
      ++mi;
    } else {
      fine.times.push_back(arrivals.epochs[ai]);
      fine.arrival_indices.push_back(fine.times.size() - 1);
      ++ai;
    }
  }

  fine.values.reserve(fine.times.size());
  fine.values.push_back(0.0);
  double v = 0.0;
  for (std::size_t i = 1; i < fine.times.size(); ++i) {
    const double dt = fine.times[i] - fine.times[i - 1];
    v += params.mu * dt + params.sigma * std::sqrt(dt) * rng.normal();
    fine.values.push_back(v);
  }
  return fine;
}

SkeletonPath skeleton_from_grid(const FineGridPath& fine) {
  SkeletonPath skeleton;
  skeleton.params = fine.params;
  skeleton.arrivals.intensity = fine.arrival_intensity;
  skeleton.arrivals.epochs.reserve(fine.arrival_indices.size());
  skeleton.values.reserve(fine.arrival_indices.size());
  for (const std::size_t idx : fine.arrival_indices) {
    skeleton.arrivals.epochs.push_back(fine.times[idx]);
    skeleton.values.push_back(fine.values[idx]);
  }
  return skeleton;
}

}  // namespace skembed
