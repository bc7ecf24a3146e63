#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "skembed/parallel.hpp"
#include "skembed/stats.hpp"
#include "skembed/transport.hpp"
#include "test_util.hpp"

using namespace skembed;

namespace {

/// Symmetric skeleton with prescribed values; epochs are equally spaced,
/// which the inflection logic never inspects.
SkeletonPath synthetic_skeleton(std::vector<double> values, double intensity) {
  SkeletonPath s;
  s.params = rates_from_drift(intensity / 2.0, 0.0, 1.0);
  s.arrivals.intensity = intensity;
  for (std::size_t i = 0; i < values.size(); ++i)
    s.arrivals.epochs.push_back(static_cast<double>(i) / intensity);
  s.values = std::move(values);
  return s;
}

}  // namespace

TEST_CASE("inflection epochs from prescribed increment signs") {
  // Increment signs (+, +, -, +) turn at indices 2 and 3.
  const auto turns =
      inflection_epochs(synthetic_skeleton({0.0, 1.0, 2.0, 1.5, 2.5}, 2.0));
  REQUIRE(turns.size() == 2);
  CHECK(turns[0] == 2);
  CHECK(turns[1] == 3);

  // A monotone stretch has no inflection.
  CHECK(inflection_epochs(synthetic_skeleton({0.0, 1.0, 2.0, 3.0}, 2.0))
            .empty());

  // Runs between indices share a single direction.
  Rng rng(12);
  const auto stream = poisson_arrivals(2.0, 5000, rng);
  const auto skel =
      brownian_skeleton(stream, rates_from_drift(1.0, 0.0, 1.0), rng);
  const auto idx = inflection_epochs(skel);
  std::size_t prev = 0;
  for (const std::size_t i : idx) {
    CHECK(i > prev);
    const bool up = skel.values[prev + 1] > skel.values[prev];
    for (std::size_t j = prev + 1; j <= i; ++j)
      CHECK((skel.values[j] > skel.values[j - 1]) == up);
    prev = i;
  }
}

TEST_CASE("inflection preconditions") {
  CHECK_THROWS_AS(inflection_epochs(synthetic_skeleton({0.0, 1.0}, 2.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      inflection_epochs(synthetic_skeleton({0.0, 1.0, 1.0, 2.0}, 2.0)),
      std::runtime_error);
}

TEST_CASE("direction-run lengths are geometric with ratio one half") {
  Rng rng(2023);
  const auto stream = poisson_arrivals(2.0, 1000000, rng);
  const auto skel =
      brownian_skeleton(stream, rates_from_drift(1.0, 0.0, 1.0), rng);
  const auto turns = inflection_epochs(skel);

  constexpr std::size_t kCells = 13;
  std::vector<std::size_t> observed(kCells, 0);
  std::size_t prev = 0;
  for (const std::size_t i : turns) {
    const std::size_t gap = i - prev;
    ++observed[std::min(gap, kCells) - 1];
    prev = i;
  }
  std::vector<double> probs(kCells);
  double tail = 1.0;
  for (std::size_t c = 0; c + 1 < kCells; ++c) {
    probs[c] = std::pow(0.5, static_cast<double>(c + 1));
    tail -= probs[c];
  }
  probs[kCells - 1] = tail;
  const double stat = chi_square_stat(observed, probs);
  CHECK(stat < chi_square_quantile(0.999, kCells - 1));
}

TEST_CASE("transport from a hand-built skeleton") {
  // Walk 0 -> 0.5 -> -0.3 -> 0.1 turns at values 0.5 and -0.3; with
  // lambda = 4 the transport clock advances by |dv|/2.
  const auto skel = synthetic_skeleton({0.0, 0.5, -0.3, 0.1}, 8.0);
  const auto path = transport_from_skeleton(skel, 4.0);
  REQUIRE(path.epochs.size() == 2);
  CHECK(path.epochs[0] == 0.25);
  CHECK(path.epochs[1] == doctest::Approx(0.65).epsilon(1e-15));
  CHECK(path.values[0] == 0.5);
  CHECK(path.values[1] == -0.3);
  REQUIRE(path.slopes.size() == 3);
  CHECK(path.slopes[0] == 2.0);
  CHECK(path.slopes[1] == -2.0);
  CHECK(path.slopes[2] == 2.0);
  CHECK(path.initial_sign() == 1.0);

  CHECK(eval_transport(path, 0.0) == 0.0);
  CHECK(eval_transport(path, 0.25) == 0.5);
  CHECK(eval_transport(path, 0.65) == -0.3);
  // 0.5 - 2 * 0.2 inside the falling segment.
  CHECK(eval_transport(path, 0.45) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("transport construction preconditions") {
  const auto drifted = [] {
    SkeletonPath s;
    s.params = rates_from_drift(1.0, 1.0, 1.0);
    s.arrivals.intensity = 2.0;
    s.arrivals.epochs = {0.0, 0.5, 1.0, 1.5};
    s.values = {0.0, 1.0, -0.5, 0.25};
    return s;
  }();
  CHECK_THROWS_AS(transport_from_skeleton(drifted, 1.0), std::invalid_argument);

  const auto wrong_intensity = synthetic_skeleton({0.0, 1.0, -0.5, 0.25}, 2.0);
  CHECK_THROWS_AS(transport_from_skeleton(wrong_intensity, 4.0),
                  std::invalid_argument);
}

TEST_CASE("coupled transport invariants at scale") {
  const double lambda = 1.0;
  Rng rng(31337);
  const auto stream = poisson_arrivals(2.0 * lambda, 400000, rng);
  const auto skel =
      brownian_skeleton(stream, rates_from_drift(lambda, 0.0, 1.0), rng);
  const auto turns = inflection_epochs(skel);
  const auto path = transport_from_skeleton(skel, lambda);
  REQUIRE(path.epochs.size() == turns.size());

  // Values at inflection epochs are copies of the skeleton values.
  double max_err = 0.0;
  for (std::size_t k = 0; k < turns.size(); ++k)
    max_err = std::max(max_err,
                       std::fabs(path.values[k] - skel.values[turns[k]]));
  CHECK(max_err == 0.0);

  // Slopes alternate strictly and have magnitude sqrt(lambda).
  for (std::size_t k = 0; k < path.slopes.size(); ++k) {
    CHECK(std::fabs(path.slopes[k]) == std::sqrt(lambda));
    if (k > 0) CHECK(path.slopes[k] * path.slopes[k - 1] < 0.0);
  }

  const std::size_t n = turns.size();
  std::vector<double> theta_spacing(n), jump_abs(n), chi_spacing(n);
  double prev_theta = 0.0, prev_value = 0.0, prev_chi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    theta_spacing[k] = skel.arrivals.epochs[turns[k]] - prev_theta;
    jump_abs[k] = std::fabs(skel.values[turns[k]] - prev_value);
    chi_spacing[k] = path.epochs[k] - prev_chi;
    prev_theta = skel.arrivals.epochs[turns[k]];
    prev_value = skel.values[turns[k]];
    prev_chi = path.epochs[k];
  }
  auto exp_cdf = [](double rate) {
    return [rate](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); };
  };
  const double threshold = ks_threshold_one_sample(n);
  CHECK(ks_one_sample(theta_spacing, exp_cdf(lambda)) < threshold);
  CHECK(ks_one_sample(jump_abs, exp_cdf(std::sqrt(lambda))) < threshold);
  CHECK(ks_one_sample(chi_spacing, exp_cdf(lambda)) < threshold);
}

TEST_CASE("direct transport slopes, continuity, and initial sign") {
  const double lambda = 3.0;
  Rng rng(99);
  const auto path = transport_direct(lambda, 50.0, rng);
  for (const double s : path.slopes)
    CHECK(std::fabs(s) == std::sqrt(lambda));
  // Continuity holds exactly: the values are built by the slope recursion.
  double v = 0.0, t = 0.0;
  for (std::size_t k = 0; k < path.epochs.size(); ++k) {
    v += path.slopes[k] * (path.epochs[k] - t);
    t = path.epochs[k];
    CHECK(path.values[k] == v);
  }

  std::size_t positive = 0;
  const std::size_t reps = 100000;
  for_each_replication(reps, 11, 0, 0, [&](std::size_t, Rng& r) {
    // Initial signs are independent fair coin flips.
    const auto p = transport_direct(2.0, 0.01, r);
    if (p.initial_sign() > 0.0) ++positive;
  });
  const double frac = static_cast<double>(positive) / static_cast<double>(reps);
  const double se = 0.5 / std::sqrt(static_cast<double>(reps));
  CHECK(std::fabs(frac - 0.5) < 4.0 * se);
}

TEST_CASE("direct and skeleton-coupled transports agree in law at time one") {
  const double lambda = 1.0;
  const std::size_t n = 10000;
  std::vector<double> direct(n), coupled(n);
  for_each_replication(n, 505, 0, 0, [&](std::size_t j, Rng& rng) {
    direct[j] = eval_transport(transport_direct(lambda, 1.0, rng), 1.0);
  });
  for_each_replication(n, 506, 0, 0, [&](std::size_t j, Rng& rng) {
    const auto stream = poisson_arrivals_horizon(2.0 * lambda, 8.0, rng);
    auto skel = brownian_skeleton(stream, rates_from_drift(lambda, 0.0, 1.0),
                                  rng);
    for (;;) {
      if (skel.values.size() >= 3) {
        const auto path = transport_from_skeleton(skel, lambda, 1.0);
        if (!path.epochs.empty() && path.epochs.back() >= 1.0) {
          coupled[j] = eval_transport(path, 1.0);
          return;
        }
      }
      extend_skeleton(skel, 16, rng);
    }
  });
  CHECK(ks_two_sample(direct, coupled) < ks_threshold_two_sample(n, n));
}

TEST_CASE("drifted transport: slopes, initial state, and long-run velocity") {
  {
    // mu = 0 reduces to the symmetric process: slopes +-sqrt(lambda).
    const auto p = rates_from_drift(8.0, 0.0, 1.0);
    Rng rng(1212);
    const auto path = transport_drifted(p, 10.0, rng);
    for (const double s : path.slopes)
      CHECK(std::fabs(std::fabs(s) - std::sqrt(8.0)) < 1e-12);
  }
  {
    const auto p = rates_from_drift(2.0, 1.0, 1.0);  // eta = 2, omega = 4
    std::size_t plus = 0;
    const std::size_t reps = 100000;
    for_each_replication(reps, 13, 0, 0, [&](std::size_t, Rng& r) {
      const auto path = transport_drifted(p, 0.01, r);
      if (path.initial_sign() > 0.0) ++plus;
    });
    const double frac = static_cast<double>(plus) / static_cast<double>(reps);
    const double w = 2.0 / 3.0;  // omega/(omega+eta)
    const double se = std::sqrt(w * (1.0 - w) / static_cast<double>(reps));
    CHECK(std::fabs(frac - w) < 4.0 * se);

    // Stationary velocity 2 lambda (omega - eta)/(eta omega) = mu.
    const std::size_t vreps = 100;
    std::vector<double> velocity(vreps);
    for_each_replication(vreps, 14, 0, 0, [&](std::size_t j, Rng& r) {
      velocity[j] = eval_transport(transport_drifted(p, 1000.0, r), 1000.0) /
                    1000.0;
    });
    const MomentSummary ms = moment_summary(velocity);
    CHECK(std::fabs(ms.mean - 1.0) < 4.0 * ms.se_mean);
  }
}

TEST_CASE("eval_transport range checks") {
  Rng rng(5);
  const auto path = transport_direct(1.0, 2.0, rng);
  CHECK_THROWS_AS((void)eval_transport(path, -0.1), std::out_of_range);
  CHECK_THROWS_AS((void)eval_transport(path, 2.5), std::out_of_range);
  CHECK(eval_transport(path, 2.0) == eval_transport(path, 2.0));
}

TEST_CASE("sup distance: exact interpolation gives zero") {
  const auto skel = synthetic_skeleton({0.0, 0.5, -0.3, 0.1}, 8.0);
  const auto path = transport_from_skeleton(skel, 4.0, 1.0);

  FineGridPath fine;
  fine.params = skel.params;
  fine.arrival_intensity = 8.0;
  for (int i = 0; i <= 100; ++i) {
    const double t = static_cast<double>(i) / 100.0;
    fine.times.push_back(t);
    fine.values.push_back(eval_transport(path, t));
  }
  const auto d = sup_distance(path, fine);
  CHECK(d.mesh_max == 0.0);
  CHECK(d.slack > 0.0);

  // Symmetric under flipping the sign of both paths.
  auto flipped_path = path;
  for (auto& v : flipped_path.values) v = -v;
  for (auto& s : flipped_path.slopes) s = -s;
  auto flipped_fine = fine;
  for (auto& v : flipped_fine.values) v = -v;
  const auto d2 = sup_distance(flipped_path, flipped_fine);
  CHECK(d2.mesh_max == d.mesh_max);

  // Shifting the grid values by a constant shifts the distance.
  auto shifted = fine;
  for (auto& v : shifted.values) v += 0.125;
  CHECK(sup_distance(path, shifted).mesh_max ==
        doctest::Approx(0.125).epsilon(1e-14));

  // Coverage gap is an error.
  auto beyond = fine;
  beyond.times.push_back(1.5);
  beyond.values.push_back(0.0);
  CHECK_THROWS_AS(sup_distance(path, beyond), std::out_of_range);
}

TEST_CASE("coupled sup distance shrinks from n = 4 to n = 64") {
  auto median_sup = [](long n, std::uint64_t seed) {
    const double lambda = static_cast<double>(n) * static_cast<double>(n);
    const std::size_t reps = 60;
    std::vector<double> sups(reps);
    for_each_replication(reps, seed, 0, 0, [&](std::size_t j, Rng& rng) {
      const auto params = rates_from_drift(lambda, 0.0, 1.0);
      const auto fine = joint_fine_grid(params, 2e-3, 1.0, rng);
      auto skel = skeleton_from_grid(fine);
      for (;;) {
        if (skel.values.size() >= 3) {
          const auto path = transport_from_skeleton(skel, lambda, 1.0);
          if (!path.epochs.empty() && path.epochs.back() >= 1.0) {
            sups[j] = sup_distance(path, fine).mesh_max;
            return;
          }
        }
        extend_skeleton(skel, std::max<std::size_t>(64, skel.values.size() / 2),
                        rng);
      }
    });
    std::sort(sups.begin(), sups.end());
    return sups[reps / 2];
  };
  const double coarse = median_sup(4, 321);
  const double fine = median_sup(64, 322);
  CHECK(fine < coarse);
}

TEST_CASE("property: piecewise recursion and epoch evaluation are exact") {
  Rng seeds(777000);
  for (int trial = 0; trial < 50; ++trial) {
    const double lambda = 0.25 + 8.0 * seeds.uniform01();
    const double mu = 4.0 * (seeds.uniform01() - 0.5);
    const double sigma = 0.5 + 1.5 * seeds.uniform01();
    const double horizon = 1.0 + 20.0 * seeds.uniform01();
    Rng rng(seeds.next_u64());
    const auto params = rates_from_drift(lambda, mu, sigma);
    const TransportPath path = (trial % 2 == 0)
                                   ? transport_direct(lambda, horizon, rng)
                                   : transport_drifted(params, horizon, rng);
    REQUIRE(path.slopes.size() == path.epochs.size() + 1);
    double v = 0.0, t = 0.0;
    for (std::size_t k = 0; k < path.epochs.size(); ++k) {
      CHECK(path.epochs[k] > t);
      v += path.slopes[k] * (path.epochs[k] - t);
      t = path.epochs[k];
      CHECK(path.values[k] == v);
      CHECK(eval_transport(path, path.epochs[k]) == path.values[k]);
      CHECK(path.slopes[k] * path.slopes[k + 1] < 0.0);
    }
    CHECK(eval_transport(path, 0.0) == 0.0);
  }
}
