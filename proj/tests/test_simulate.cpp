#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qats/simulate.hpp"

using qats::gaussian_log_densities;
using qats::simulate_hmm;
using qats::SimConfig;
using qats::SimRng;

namespace {

SimConfig config(std::int64_t n, int m, std::int64_t s, double sigma, std::uint64_t seed,
                 std::int64_t rep = 0) {
  SimConfig c;
  c.n = n;
  c.m = m;
  c.s = s;
  c.sigma = sigma;
  c.seed = seed;
  c.replication_id = rep;
  return c;
}

}  // namespace

TEST_CASE("expected segment count of one freezes the chain") {
  const auto sim = simulate_hmm(config(500, 3, 1, 0.5, 3));
  CHECK(sim.true_segments == 1);
  for (const auto x : sim.x_true) CHECK(x == sim.x_true[0]);
}

TEST_CASE("fixed seeds reproduce bit-identical output") {
  const auto a = simulate_hmm(config(1000, 2, 6, 1.0, 42));
  const auto b = simulate_hmm(config(1000, 2, 6, 1.0, 42));
  CHECK(a.x_true == b.x_true);
  CHECK(a.y == b.y);
  CHECK(a.true_segments == b.true_segments);
}

TEST_CASE("replication streams are distinct") {
  const auto a = simulate_hmm(config(100, 2, 6, 1.0, 42, 0));
  const auto b = simulate_hmm(config(100, 2, 6, 1.0, 42, 1));
  CHECK(a.y != b.y);

  int differing_draws = 0;
  SimRng s0(42, 0), s1(42, 1);
  for (int i = 0; i < 100; ++i) differing_draws += s0.next_u64() != s1.next_u64() ? 1 : 0;
  CHECK(differing_draws == 100);
}

TEST_CASE("mean segment count matches 1 + (n-1)p") {
  const std::int64_t reps = 3000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    const auto sim = simulate_hmm(config(1001, 2, 6, 1.0, 77, rep));
    const auto v = static_cast<double>(sim.true_segments);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(reps);
  const double var = (sum_sq - sum * sum / static_cast<double>(reps)) / static_cast<double>(reps - 1);
  const double se = std::sqrt(var / static_cast<double>(reps));
  CHECK(std::abs(mean - 6.0) <= 3.0 * se);
}

TEST_CASE("marginal state frequencies are near uniform") {
  const int m = 3;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(m), 0);
  std::int64_t total = 0;
  for (std::int64_t rep = 0; rep < 200; ++rep) {
    const auto sim = simulate_hmm(config(1001, m, 6, 1.0, 99, rep));
    for (const auto x : sim.x_true) ++counts[static_cast<std::size_t>(x - 1)];
    total += 1001;
  }
  for (int i = 0; i < m; ++i) {
    const double freq = static_cast<double>(counts[static_cast<std::size_t>(i)]) /
                        static_cast<double>(total);
    CHECK(std::abs(freq - 1.0 / 3.0) < 0.05);
  }
}

TEST_CASE("per-state log densities match the closed form") {
  const double theta_g = -0.5 * std::log(8.0 * std::numbers::pi);
  const std::vector<double> means{1.0, 2.0};

  const auto g1 = gaussian_log_densities(std::vector<double>{1.0}, means, 2.0);
  CHECK(g1(1, 1) == doctest::Approx(theta_g).epsilon(1e-12));

  const auto g4 = gaussian_log_densities(std::vector<double>{4.0}, means, 2.0);
  CHECK(g4(1, 1) == doctest::Approx(theta_g - 9.0 / 8.0).epsilon(1e-12));

  const auto sym =
      gaussian_log_densities(std::vector<double>{1.7, 0.3}, std::vector<double>{1.0}, 0.8);
  CHECK(sym(1, 1) == doctest::Approx(sym(1, 2)).epsilon(1e-14));

  CHECK_THROWS_AS(gaussian_log_densities(std::vector<double>{1.0}, means, 0.0),
                  std::invalid_argument);
}

TEST_CASE("simulated observations center on the hidden state") {
  const auto sim = simulate_hmm(config(20000, 2, 2, 0.5, 5));
  double sum_dev = 0.0;
  for (std::size_t k = 0; k < sim.y.size(); ++k)
    sum_dev += sim.y[k] - static_cast<double>(sim.x_true[k]);
  const double mean_dev = sum_dev / static_cast<double>(sim.y.size());
  CHECK(std::abs(mean_dev) < 0.02);  // 0.5 / sqrt(20000) ~ 0.0035, wide margin
}

TEST_CASE("categorical draws never select zero-probability entries") {
  SimRng rng(7, 0);
  const std::vector<double> point{0.0, 1.0, 0.0};
  for (int i = 0; i < 200; ++i) CHECK(rng.categorical(point) == 2);
  const std::vector<double> gap{0.5, 0.0, 0.5};
  for (int i = 0; i < 2000; ++i) CHECK(rng.categorical(gap) != 2);
}

TEST_CASE("uniforms live in the half-open unit interval") {
  SimRng rng(9, 3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("normal draws have the requested moments") {
  SimRng rng(13, 0);
  const int n = 50000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal(2.0, 1.5);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean - 2.0) < 0.03);
  CHECK(std::abs(var - 2.25) < 0.08);
}

TEST_CASE("config validation") {
  CHECK_THROWS_WITH_AS(config(100, 2, 200, 1.0, 0).validate(), "SimConfig: s exceeds n",
                       std::invalid_argument);
  CHECK_THROWS_AS(config(1, 2, 1, 1.0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(100, 1, 2, 1.0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(100, 2, 0, 1.0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(100, 2, 2, 0.0, 0).validate(), std::invalid_argument);
  CHECK_NOTHROW(config(100, 2, 2, 1.0, 0).validate());
}

TEST_CASE("the matching model mirrors the simulation parameters") {
  const auto model = qats::model_for_config(config(1001, 3, 6, 0.7, 0));
  CHECK(model.m() == 3);
  for (int i = 1; i <= 3; ++i)
    CHECK(std::exp(model.log_pi(i)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  REQUIRE(model.gaussian().has_value());
  CHECK(model.gaussian()->means() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(model.gaussian()->sigma() == 0.7);
  const double p = 5.0 / 1000.0;
  CHECK(std::exp(model.q(1, 1)) == doctest::Approx(1.0 - p).epsilon(1e-12));
  CHECK(std::exp(model.q(1, 2)) == doctest::Approx(p / 2.0).epsilon(1e-12));
}
