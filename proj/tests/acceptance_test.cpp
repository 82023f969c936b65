// Copyright 2026 The PixelVeil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// End-to-end acceptance checks of the toolkit's privacy and utility
// claims: exhaustive mechanism-distribution bounds, analytic density
// bounds, budget accounting, sampling fidelity, metric correctness,
// solver optimality, qualitative utility trends, the intersection-attack
// demonstration and determinism. One test per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "pixelveil/pixelveil.hpp"

namespace pv = pixelveil;

namespace {

const std::string kSample = std::string(PIXELVEIL_TEST_DATA_DIR) + "/sample64.pgm";
constexpr std::uint64_t kAcceptanceSeed = 20260809;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CriterionTimer {
 public:
  explicit CriterionTimer(double limit_seconds) : limit_(limit_seconds) {}
  ~CriterionTimer() {
    const double elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start_).count();
    EXPECT_LT(elapsed, limit_) << "criterion exceeded its runtime budget";
  }

 private:
  double limit_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Criterion 1: exponential-mechanism privacy bound, exhaustively. For
// p = 2 and k' = 2, every ordered pair of binary-level original windows
// must keep every output state within a probability ratio of
// exp(2 eps') of the other window's distribution.
TEST(Acceptance, Criterion1ExponentialDpBound) {
  const CriterionTimer timer(10.0);
  std::vector<std::vector<double>> windows;
  for (int s = 0; s < 16; ++s) {
    std::vector<double> w(4);
    for (int i = 0; i < 4; ++i) w[i] = ((s >> i) & 1) ? 255.0 : 0.0;
    windows.push_back(std::move(w));
  }
  for (const double eps_prime : {0.1, 1.0, 5.0}) {
    std::vector<pv::WindowDistribution> dists;
    dists.reserve(windows.size());
    for (const auto& w : windows)
      dists.push_back(pv::exponential_window_distribution(w, eps_prime, 2));
    const double bound = std::exp(2.0 * eps_prime) + 1e-9;
    double worst = 0.0;
    for (const auto& d1 : dists)
      for (const auto& d2 : dists)
        for (std::size_t s = 0; s < 16; ++s)
          worst = std::max(worst, d1.probabilities[s] / d2.probabilities[s]);
    EXPECT_LE(worst, bound) << "eps_prime = " << eps_prime;
  }
}

// Criterion 2: vector Laplace privacy bound. Closed-form pre-clamp
// density ratios between two candidate inputs at random output points
// stay within exp(epsilon * distance).
TEST(Acceptance, Criterion2VectorLaplaceDpBound) {
  const CriterionTimer timer(5.0);
  std::mt19937_64 rng(kAcceptanceSeed);
  for (const std::size_t n : {2u, 8u, 64u}) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<pv::ValueRange> ranges(n);
      std::vector<double> v1(n), v2(n), r(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::uniform_real_distribution<double> lo(-2.0, 1.0);
        std::uniform_real_distribution<double> width(0.25, 3.0);
        ranges[i] = {lo(rng), 0.0};
        ranges[i].max = ranges[i].min + width(rng);
        std::uniform_real_distribution<double> inside(ranges[i].min, ranges[i].max);
        v1[i] = inside(rng);
        v2[i] = inside(rng);
        std::uniform_real_distribution<double> anywhere(ranges[i].min - 2.0, ranges[i].max + 2.0);
        r[i] = anywhere(rng);
      }
      const pv::BoundedVector x1(v1, ranges);
      const pv::BoundedVector x2(v2, ranges);
      std::uniform_real_distribution<double> eps_dist(0.25, 6.0);
      const double epsilon = eps_dist(rng);
      const double ratio = std::exp(pv::vector_log_density(x1, r, epsilon) -
                                    pv::vector_log_density(x2, r, epsilon));
      const double bound = std::exp(epsilon * pv::vector_distance(x1, x2)) + 1e-9;
      ASSERT_LE(ratio, bound) << "n = " << n << " trial " << trial;
    }
  }
}

// Criterion 3: the budget ledger of any configuration sums back to the
// requested epsilon.
TEST(Acceptance, Criterion3BudgetAccountingIdentity) {
  const CriterionTimer timer(1.0);
  std::mt19937_64 rng(kAcceptanceSeed + 3);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 200);
    const int h = 1 + static_cast<int>(rng() % 200);
    const int c = (rng() % 2) ? 3 : 1;
    pv::PixelMechanismConfig cfg;
    cfg.b = 1 + static_cast<int>(rng() % 5);
    cfg.p = 1 + static_cast<int>(rng() % 4);
    cfg.k_prime = cfg.p == 4 ? 2 : 2 + static_cast<int>(rng() % 3);  // keep k'^(p^2) tractable
    std::uniform_real_distribution<double> eps_dist(1e-3, 5e4);
    cfg.epsilon = eps_dist(rng);
    const pv::BudgetLedger ledger = pv::allocate_budget(w, h, c, cfg);
    ASSERT_NEAR(ledger.total(), cfg.epsilon, 1e-9)
        << w << "x" << h << "x" << c << " b=" << cfg.b << " p=" << cfg.p;
  }
}

// Criterion 4: sampling fidelity. Empirical frequencies of 50,000 draws
// match the explicit 16-state distribution (chi-square, 0.001 level),
// and eps' = 0 draws pass the uniformity test.
TEST(Acceptance, Criterion4SamplingFidelity) {
  const CriterionTimer timer(30.0);
  const std::vector<double> orig{40.0, 210.0, 120.0, 66.0};
  const pv::WindowDistribution dist = pv::exponential_window_distribution(orig, 2.5, 2);
  std::vector<std::int64_t> counts(16, 0);
  for (int i = 0; i < 50000; ++i) {
    std::mt19937_64 rng = pv::make_stream(kAcceptanceSeed + 4, pv::StreamKind::kExponentialWindow,
                                          static_cast<std::uint64_t>(i));
    ++counts[pv::sample_state(dist, pv::uniform_unit(rng))];
  }
  EXPECT_LT(oracles::chi_square(counts, dist.probabilities), oracles::kChiSquare15Df999);

  const pv::WindowDistribution uniform = pv::exponential_window_distribution(orig, 0.0, 2);
  std::vector<std::int64_t> uniform_counts(16, 0);
  for (int i = 0; i < 50000; ++i) {
    std::mt19937_64 rng = pv::make_stream(kAcceptanceSeed + 5, pv::StreamKind::kExponentialWindow,
                                          static_cast<std::uint64_t>(i));
    ++uniform_counts[pv::sample_state(uniform, pv::uniform_unit(rng))];
  }
  EXPECT_LT(oracles::chi_square(uniform_counts, std::vector<double>(16, 1.0 / 16.0)),
            oracles::kChiSquare15Df999);
}

// Criterion 5: SSIM and MSE agree with independent naive references.
TEST(Acceptance, Criterion5MetricCorrectness) {
  const CriterionTimer timer(10.0);
  std::mt19937 rng(55);
  for (int pair = 0; pair < 50; ++pair) {
    const int channels = (pair % 3 == 0) ? 3 : 1;
    const pv::Image a = oracles::random_image(16, 16, channels, rng());
    const pv::Image b = oracles::random_image(16, 16, channels, rng());
    ASSERT_NEAR(pv::ssim_full(a, b), oracles::naive_ssim_full(a, b), 1e-9) << "pair " << pair;
    ASSERT_NEAR(pv::mse(a, b), oracles::naive_mse(a, b), 1e-9) << "pair " << pair;
    ASSERT_NEAR(pv::ssim_full(a, a), 1.0, 1e-12);
  }
}

// Criterion 6: LAD optimality. The simplex objective never exceeds the
// coordinate-descent upper bound, and exactly representable targets
// solve to zero.
TEST(Acceptance, Criterion6LadOptimality) {
  const CriterionTimer timer(60.0);
  std::mt19937_64 rng(kAcceptanceSeed + 6);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + trial % 5;
    const std::size_t n = 2 + trial % 7;
    std::vector<std::vector<double>> gallery(m, std::vector<double>(n));
    std::vector<double> target(n);
    for (auto& v : gallery)
      for (double& x : v) x = dist(rng);
    for (double& y : target) y = dist(rng);
    const pv::LadSolution solution = pv::solve_lad({gallery, target});
    ASSERT_EQ(solution.status, pv::SolveStatus::kOptimal);
    const double oracle = oracles::coordinate_descent_objective(gallery, target);
    ASSERT_LE(solution.objective, oracle + 1e-3) << "trial " << trial;
  }
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + trial % 4;
    const std::size_t n = 2 + trial % 6;
    std::vector<std::vector<double>> gallery(m, std::vector<double>(n));
    for (auto& v : gallery)
      for (double& x : v) x = dist(rng);
    std::vector<double> target(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double w = dist(rng);
      for (std::size_t i = 0; i < n; ++i) target[i] += w * gallery[j][i];
    }
    ASSERT_LT(pv::solve_lad({gallery, target}).objective, 1e-6) << "exact trial " << trial;
  }
}

// Criterion 7: qualitative utility trends on the bundled image, 20
// repetitions over six log-spaced budgets: (a) mean SSIM rises with
// epsilon for every mechanism variant, (b) blurring helps at the
// smallest budget, (c) stronger pixelization helps at the smallest
// budget.
TEST(Acceptance, Criterion7UtilityTrends) {
  const CriterionTimer timer(900.0);
  pv::SweepSpec spec;
  spec.images = {kSample};
  spec.epsilons = {1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  spec.pixelizations = {1, 8};
  spec.blur_flags = {false, true};
  spec.repetitions = 20;
  spec.seed = kAcceptanceSeed;
  const std::vector<pv::SweepRecord> records = pv::run_sweep(spec);

  std::map<std::tuple<int, int, int, double>, std::pair<double, int>> cells;
  for (const pv::SweepRecord& r : records) {
    ASSERT_TRUE(r.ok);
    auto& cell = cells[{static_cast<int>(r.mechanism), r.b, r.blur ? 1 : 0, r.epsilon}];
    cell.first += r.ssim;
    cell.second += 1;
  }
  const auto mean_ssim = [&](int mech, int b, int blur, double eps) {
    const auto& cell = cells.at({mech, b, blur, eps});
    return cell.first / cell.second;
  };

  // (a) Spearman rho > 0.9 between epsilon and mean SSIM per curve.
  for (int mech : {0, 1})
    for (int b : {1, 8})
      for (int blur : {0, 1}) {
        std::vector<double> means;
        for (double eps : spec.epsilons) means.push_back(mean_ssim(mech, b, blur, eps));
        const double rho = oracles::spearman_rho(spec.epsilons, means);
        EXPECT_GT(rho, 0.9) << "mechanism " << mech << " b=" << b << " blur=" << blur;
      }

  // (b) blur beats non-blur at the smallest epsilon.
  const double smallest = spec.epsilons.front();
  for (int mech : {0, 1})
    EXPECT_GT(mean_ssim(mech, 1, 1, smallest), mean_ssim(mech, 1, 0, smallest))
        << "mechanism " << mech;

  // (c) stronger pixelization beats b = 1 at the smallest epsilon.
  for (int mech : {0, 1})
    EXPECT_GT(mean_ssim(mech, 8, 0, smallest), mean_ssim(mech, 1, 0, smallest))
        << "mechanism " << mech;
}

// Criterion 8: the k-same guarantee collapses under an intersection
// attack across two uncoordinated releases, while the DP vector bound
// composes additively.
TEST(Acceptance, Criterion8IntersectionAttackAndComposition) {
  const CriterionTimer timer(10.0);
  std::mt19937_64 rng(kAcceptanceSeed + 8);
  const std::vector<pv::ValueRange> ranges(16, pv::ValueRange{0.0, 1.0});
  const int k = 5;
  int violated_trials = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> shared;
    std::vector<std::string> ids_a, ids_b;
    std::vector<pv::BoundedVector> gallery_a, gallery_b;
    const auto random_vector = [&]() {
      std::vector<double> values(16);
      std::uniform_real_distribution<double> dist(0.0, 1.0);
      for (double& v : values) v = dist(rng);
      return pv::BoundedVector(values, ranges);
    };
    for (int i = 0; i < 10; ++i) {
      shared.push_back("s" + std::to_string(i));
      const pv::BoundedVector v = random_vector();
      ids_a.push_back(shared.back());
      gallery_a.push_back(v);
      ids_b.push_back(shared.back());
      gallery_b.push_back(v);
    }
    for (int i = 0; i < 10; ++i) {
      ids_a.push_back("a" + std::to_string(i));
      gallery_a.push_back(random_vector());
      ids_b.push_back("b" + std::to_string(i));
      gallery_b.push_back(random_vector());
    }
    const pv::IntersectionReport report = pv::intersection_attack(
        pv::ksame_cluster(gallery_a, k), ids_a, pv::ksame_cluster(gallery_b, k), ids_b, shared);
    if (report.min < k) ++violated_trials;
  }
  EXPECT_GE(violated_trials, 18);

  // Running the DP mechanism twice composes: the joint density ratio is
  // bounded by exp((eps1 + eps2) * d).
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v1(8), v2(8), r1(8), r2(8);
    std::vector<pv::ValueRange> vranges(8, pv::ValueRange{0.0, 1.0});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> wide(-1.0, 2.0);
    for (int i = 0; i < 8; ++i) {
      v1[i] = unit(rng);
      v2[i] = unit(rng);
      r1[i] = wide(rng);
      r2[i] = wide(rng);
    }
    const pv::BoundedVector x1(v1, vranges);
    const pv::BoundedVector x2(v2, vranges);
    std::uniform_real_distribution<double> eps_dist(0.25, 4.0);
    const double eps1 = eps_dist(rng);
    const double eps2 = eps_dist(rng);
    const double joint_log_ratio =
        pv::vector_log_density(x1, r1, eps1) + pv::vector_log_density(x1, r2, eps2) -
        pv::vector_log_density(x2, r1, eps1) - pv::vector_log_density(x2, r2, eps2);
    const double bound = std::exp((eps1 + eps2) * pv::vector_distance(x1, x2)) + 1e-9;
    ASSERT_LE(std::exp(joint_log_ratio), bound) << "composition trial " << trial;
  }
}

// Criterion 9: fixed seeds give byte-identical outputs regardless of the
// thread count, for a single obfuscation and for a sweep. The wall-time
// column of the sweep CSV is measurement output, not computation, and is
// excluded from the comparison.
TEST(Acceptance, Criterion9Determinism) {
  const CriterionTimer timer(120.0);
  const pv::Image original = pv::load_image(kSample);
  pv::PixelMechanismConfig cfg;
  cfg.epsilon = 750.0;
  cfg.b = 1;
  cfg.seed = kAcceptanceSeed;

  std::vector<std::string> obfuscation_bytes;
  for (int threads : {1, 4, 8}) {
    const pv::ObfuscationResult result = pv::exponential_obfuscate(original, cfg, threads);
    const std::string path =
        (std::filesystem::temp_directory_path() / "pixelveil_acceptance_det.png").string();
    pv::save_image(result.image, path);
    obfuscation_bytes.push_back(slurp(path));
    std::remove(path.c_str());
  }
  EXPECT_EQ(obfuscation_bytes[0], obfuscation_bytes[1]);
  EXPECT_EQ(obfuscation_bytes[0], obfuscation_bytes[2]);

  const auto csv_without_ms = [](const std::vector<pv::SweepRecord>& records) {
    std::ostringstream out;
    pv::write_sweep_csv(records, out);
    std::istringstream in(out.str());
    std::ostringstream stripped;
    std::string line;
    while (std::getline(in, line)) stripped << line.substr(0, line.rfind(',')) << "\n";
    return stripped.str();
  };
  pv::SweepSpec spec;
  spec.images = {kSample};
  spec.epsilons = {50.0, 5000.0};
  spec.pixelizations = {4};
  spec.blur_flags = {false, true};
  spec.repetitions = 2;
  spec.seed = kAcceptanceSeed;
  std::vector<std::string> sweep_csvs;
  for (int threads : {1, 4, 8}) {
    spec.threads = threads;
    sweep_csvs.push_back(csv_without_ms(pv::run_sweep(spec)));
  }
  EXPECT_EQ(sweep_csvs[0], sweep_csvs[1]);
  EXPECT_EQ(sweep_csvs[0], sweep_csvs[2]);
}

}  // namespace
