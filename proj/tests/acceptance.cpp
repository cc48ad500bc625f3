// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line. Run via ctest or directly (tests/acceptance).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "mixpos/geometry.hpp"
#include "mixpos/io.hpp"
#include "mixpos/mixed.hpp"
#include "mixpos/simulator.hpp"
#include "mixpos/solver.hpp"
#include "support.hpp"

using namespace mixpos;

namespace {

const Modulus kMs = Modulus::one_millisecond();

void report(int criterion, bool ok, const char* label) {
  std::printf("[acceptance] criterion %d %s: %s\n", criterion, ok ? "PASS" : "FAIL",
              label);
  std::fflush(stdout);
}

double stddev(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_CASE("criterion 1: chop direction reproduces the fractional column") {
  bool ok = true;
  for (const auto& row : test::reference_rows()) {
    ok = ok && std::abs(wrap_to_fraction(row.full_m, kMs) - row.fractional_m) <=
                   test::kPrintTol;
  }
  report(1, ok, "published full -> fractional wrap within print precision");
  CHECK(ok);
}

TEST_CASE("criterion 2: recovery direction reproduces the full column") {
  const auto fx = test::make_reference_epoch(/*seed=*/20150519, /*geo_noise_sigma=*/1.3);
  const MixedResult result = mixed_solve(fx.epoch);
  bool ok = result.gate.passed &&
            result.recoveries.size() == test::reference_rows().size();
  for (std::size_t i = 0; ok && i < result.recoveries.size(); ++i) {
    ok = std::abs(result.recoveries[i].recovered_full_m -
                  test::reference_rows()[i].full_m) <= test::kPrintTol;
  }
  report(2, ok, "published fractional -> recovered full within print precision");
  CHECK(ok);
}

TEST_CASE("criterion 3: beta example value") {
  const bool ok = compute_beta({150000.0, 330.0, 50.0}) == 2993.4;
  report(3, ok, "compute_beta(150000, 330, 50) == 2993.4 exactly");
  CHECK(ok);
}

TEST_CASE("criterion 4: mixed and conventional solutions are identical") {
  SimScenario scenario = make_nominal_scenario();
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> lat(-50.0, 50.0), lon(60.0, 160.0);

  double max_diff = 0.0;
  std::vector<double> err_mixed[3], err_conv[3];
  int collected = 0;
  for (std::uint64_t seed = 0; collected < 1000 && seed < 5000; ++seed) {
    scenario.rng_seed = seed;
    const Eigen::Vector3d truth = geodetic_to_ecef({lat(rng), lon(rng), 0.0});
    const auto sim = synthesize_epoch(scenario, truth, 0.0, default_frac_policy());

    MixedResult mixed;
    try {
      mixed = mixed_solve(sim.epoch);
    } catch (const Error&) {
      continue;  // off GEO coverage or gate failed; not part of the population
    }

    std::vector<SatelliteObservation> fulls;
    for (const auto& obs : sim.epoch.observations) {
      auto full = obs;
      full.pseudorange_m = sim.truth.true_full_m.at(obs.sat_id);
      full.kind = ObservationKind::Full;
      fulls.push_back(full);
    }
    const PositionSolution conventional =
        solve_full(fulls, UnknownLayout::DualConstellation);

    max_diff = std::max(
        max_diff,
        (mixed.solution.position - conventional.position).cwiseAbs().maxCoeff());
    for (int k = 0; k < 3; ++k) {
      err_mixed[k].push_back(mixed.solution.position(k) - truth(k));
      err_conv[k].push_back(conventional.position(k) - truth(k));
    }
    ++collected;
  }

  bool ok = collected >= 1000 && max_diff < 1e-6;
  for (int k = 0; ok && k < 3; ++k) {
    const double a = stddev(err_mixed[k]), b = stddev(err_conv[k]);
    ok = std::abs(a - b) <= 0.01 * std::max(a, b);
  }
  std::printf("[acceptance]   criterion 4 detail: epochs=%d max_component_diff=%.3e\n",
              collected, max_diff);
  report(4, ok, "1000 Monte Carlo epochs: identical positions, error stds within 1%");
  CHECK(ok);
}

TEST_CASE("criterion 5: gate classification equals mixed_solve outcome on the 1-deg grid") {
  SimScenario scenario = make_nominal_scenario();
  scenario.rng_seed = 20150519;
  const GateConfig gate{};
  const GridReport grid = grid_scan(scenario, 0.0, 1.0, gate);

  enum class Outcome { Success, GateFailed, Insufficient, Other };
  std::vector<Outcome> outcomes(grid.points.size(), Outcome::Other);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < grid.points.size();) {
      const auto& pt = grid.points[i];
      const Eigen::Vector3d truth =
          geodetic_to_ecef({pt.lat_deg, pt.lon_deg, 0.0});
      const auto sim = synthesize_epoch(scenario, truth, 0.0, default_frac_policy());
      try {
        (void)mixed_solve(sim.epoch, gate);
        outcomes[i] = Outcome::Success;
      } catch (const GateFailedError&) {
        outcomes[i] = Outcome::GateFailed;
      } catch (const Error& e) {
        outcomes[i] = e.code() == ErrorCode::InsufficientMeasurements
                          ? Outcome::Insufficient
                          : Outcome::Other;
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned i = 0; i < std::max(1u, std::thread::hardware_concurrency()); ++i) {
    threads.emplace_back(worker);
  }
  for (auto& t : threads) t.join();

  int mismatches = 0;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const PointClass cls = grid.points[i].cls;
    const Outcome out = outcomes[i];
    const bool match = (cls == PointClass::GatePass && out == Outcome::Success) ||
                       (cls == PointClass::GateFail && out == Outcome::GateFailed) ||
                       (cls == PointClass::FewerThan4Visible &&
                        out == Outcome::Insufficient);
    if (!match) {
      if (++mismatches <= 5) {
        std::printf("[acceptance]   criterion 5 mismatch at lat=%g lon=%g: "
                    "class=%s outcome=%d gdop=%g\n",
                    grid.points[i].lat_deg, grid.points[i].lon_deg, to_string(cls),
                    static_cast<int>(out),
                    grid.points[i].gdop.value_or(-1.0));
      }
    }
  }
  std::printf(
      "[acceptance]   criterion 5 detail: points=%zu gate_pass=%d visible4=%d "
      "ratio=%.4f mismatches=%d\n",
      grid.points.size(), grid.n_gate_pass, grid.n_visible4, grid.pass_ratio,
      mismatches);
  const bool ok = mismatches == 0;
  report(5, ok, "success/gate-fail regions equal the grid classification exactly");
  CHECK(ok);
}

TEST_CASE("criterion 6: recovery robustness under injected prediction errors") {
  const double alpha = kMs.c_t_m / 2.0;
  std::mt19937_64 rng(606);
  const Eigen::Vector3d est_pos = geodetic_to_ecef({30.0, 110.0, 0.0});
  std::uniform_real_distribution<double> range(2.0e7, 4.4e7);

  auto one_trial = [&](double injected_error) {
    // satellite at distance d, true full pseudorange d; the estimate's
    // prediction is off by exactly injected_error (absorbed into the clock)
    const double d = range(rng);
    const auto obs =
        test::fractional_obs("F", ConstellationId::B,
                             est_pos + test::random_sky_direction(rng, est_pos) * d,
                             wrap_to_fraction(d, kMs));
    const auto rep = recover_ambiguities({&obs, 1}, est_pos, injected_error);
    return rep[0].recovered_full_m - d;  // 0 when correct
  };

  std::uniform_real_distribution<double> small_err(-(alpha - 330.0 - 1.0),
                                                   alpha - 330.0 - 1.0);
  int wrong_small = 0;
  for (int i = 0; i < 10000; ++i) {
    if (std::abs(one_trial(small_err(rng))) > 1e-6) ++wrong_small;
  }

  std::uniform_real_distribution<double> big_mag(alpha * 1.0001, 1.5 * alpha);
  std::bernoulli_distribution sign;
  int not_off_by_one = 0;
  for (int i = 0; i < 10000; ++i) {
    const double e = (sign(rng) ? 1.0 : -1.0) * big_mag(rng);
    const double off = one_trial(e);
    if (std::abs(off - std::copysign(kMs.c_t_m, e)) > 1e-6) ++not_off_by_one;
  }

  const bool ok = wrong_small == 0 && not_off_by_one == 0;
  std::printf("[acceptance]   criterion 6 detail: wrong_small=%d not_off_by_one=%d\n",
              wrong_small, not_off_by_one);
  report(6, ok, "0/10000 wrong below threshold; off by exactly one modulus above");
  CHECK(ok);
}

TEST_CASE("criterion 7: GDOP trace and eigenvalue forms agree") {
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> n_dist(4, 12);
  int checked = 0;
  bool ok = true;
  while (checked < 1000) {
    std::vector<Eigen::Vector3d> los;
    for (int i = 0, n = n_dist(rng); i < n; ++i) los.push_back(test::random_unit(rng));
    GdopResult r;
    try {
      r = gdop(LosSet(los));
    } catch (const SingularGeometryError&) {
      continue;
    }
    ok = ok && std::abs(r.gdop_trace - r.gdop_eigen) <= 1e-9 * r.gdop_trace;
    ++checked;
  }
  report(7, ok, "trace and eigenvalue GDOP agree to 1e-9 relative, 1000 geometries");
  CHECK(ok);
}

TEST_CASE("criterion 8: noiseless solves recover truth from a zero start") {
  SimScenario scenario = make_nominal_scenario();
  scenario.noise_sigma_m = 0.0;
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> lat(-85.0, 85.0), lon(-180.0, 180.0);

  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector3d truth = geodetic_to_ecef({lat(rng), lon(rng), 0.0});
    const auto sim = synthesize_epoch(scenario, truth, 0.0, all_full_policy());
    bool has_a = false, has_b = false;
    for (const auto& obs : sim.epoch.observations) {
      (obs.constellation == ConstellationId::A ? has_a : has_b) = true;
    }
    const PositionSolution sol =
        solve_full(sim.epoch.observations,
                   has_a && has_b ? UnknownLayout::DualConstellation
                                  : UnknownLayout::SingleConstellation);
    ok = ok && (sol.position - truth).norm() < 1e-4;
  }
  report(8, ok, "100 random locations recovered within 1e-4 m, all-zero start");
  CHECK(ok);
}
