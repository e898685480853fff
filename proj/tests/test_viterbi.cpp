#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qats/qats.hpp"
#include "qats/viterbi.hpp"

using qats::brute_force_map;
using qats::build_log_densities;
using qats::build_model;
using qats::complete_log_lik;
using qats::GaussianEmission;
using qats::kNegInf;
using qats::LogDensityMatrix;
using qats::Matrix;
using qats::viterbi_decode;

namespace {

const double kThetaPi = -std::log(2.0);
const double kThetaQ = -std::log(3.0);
const double kThetaG = -0.5 * std::log(8.0 * std::numbers::pi);
const double kTheta = kThetaPi + 3.0 * kThetaQ + 4.0 * kThetaG;

qats::HmmModel example_model() {
  Matrix<double> trans(2, 2, 1.0 / 3.0);
  trans(0, 0) = trans(1, 1) = 2.0 / 3.0;
  return build_model(std::vector<double>{0.5, 0.5}, trans, GaussianEmission({1.0, 2.0}, 2.0));
}

}  // namespace

TEST_CASE("complete log likelihood reproduces the worked-example constants") {
  const auto model = example_model();
  const std::vector<double> y{1.0, 4.0, -1.0, 1.0};
  const auto g = build_log_densities(model, y);
  const double log2 = std::log(2.0);
  CHECK(complete_log_lik(model, g, std::vector<std::int32_t>{1, 1, 1, 1}) ==
        doctest::Approx(kTheta - 13.0 / 8.0 + 3.0 * log2).epsilon(1e-12));
  CHECK(complete_log_lik(model, g, std::vector<std::int32_t>{2, 2, 1, 1}) ==
        doctest::Approx(kTheta - 9.0 / 8.0 + 2.0 * log2).epsilon(1e-12));
  CHECK(complete_log_lik(model, g, std::vector<std::int32_t>{1, 2, 1, 1}) ==
        doctest::Approx(kTheta - 1.0 + log2).epsilon(1e-12));
}

TEST_CASE("a zero-probability transition drives the likelihood to minus infinity") {
  const std::vector<double> pi{1.0, 0.0};
  Matrix<double> trans(2, 2);
  trans(0, 0) = 1.0;
  trans(0, 1) = 0.0;
  trans(1, 0) = 0.5;
  trans(1, 1) = 0.5;
  const auto model = build_model(pi, trans, GaussianEmission({1.0, 2.0}, 1.0));
  const std::vector<double> y{1.0, 2.0};
  const auto g = build_log_densities(model, y);
  CHECK(complete_log_lik(model, g, std::vector<std::int32_t>{1, 2}) == kNegInf);
  CHECK(complete_log_lik(model, g, std::vector<std::int32_t>{2, 2}) == kNegInf);
  CHECK(std::isfinite(complete_log_lik(model, g, std::vector<std::int32_t>{1, 1})));
}

TEST_CASE("worked example: decoder attains the exhaustive maximum") {
  const auto model = example_model();
  const std::vector<double> y{1.0, 4.0, -1.0, 1.0};
  const auto g = build_log_densities(model, y);
  const auto res = viterbi_decode(model, g);
  const auto [best_path, best_score] = brute_force_map(model, g);
  CHECK(res.log_lik == doctest::Approx(best_score).epsilon(1e-12));
  CHECK(complete_log_lik(model, g, res.path) == doctest::Approx(best_score).epsilon(1e-12));
  CHECK(!res.all_impossible);
}

TEST_CASE("single observation reduces to one argmax") {
  const auto model = example_model();
  const std::vector<double> y{1.9};
  const auto g = build_log_densities(model, y);
  const auto res = viterbi_decode(model, g);
  CHECK(res.path == std::vector<std::int32_t>{2});
  CHECK(res.log_lik ==
        doctest::Approx(model.log_pi(2) + model.emission_log_density(2, 1.9)).epsilon(1e-12));
}

TEST_CASE("random small instances match the brute force exactly") {
  qats::SimRng rng(111, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 2);
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.next_u64() % 8);
    const auto model = oracle::random_gaussian_model(rng, m);
    const auto y = oracle::random_observations(rng, n, 0.0, static_cast<double>(m) + 1.0);
    const auto g = build_log_densities(model, y);
    const auto res = viterbi_decode(model, g);
    const auto [bf_path, bf_score] = brute_force_map(model, g);
    CHECK(std::abs(res.log_lik - bf_score) <= 1e-9);
    CHECK(std::abs(complete_log_lik(model, g, res.path) - bf_score) <= 1e-9);
  }
}

TEST_CASE("brute force tie-breaking is lexicographic") {
  SUBCASE("degenerate initial distribution") {
    const std::vector<double> pi{1.0, 0.0};
    Matrix<double> trans(2, 2, 0.5);
    const auto model = build_model(pi, trans, GaussianEmission({1.0, 1.0}, 1.0));
    const std::vector<double> y{0.0};
    const auto g = build_log_densities(model, y);
    CHECK(brute_force_map(model, g).first == std::vector<std::int32_t>{1});
  }
  SUBCASE("fully symmetric instance") {
    Matrix<double> trans(2, 2, 0.5);
    const auto model =
        build_model(std::vector<double>{0.5, 0.5}, trans, GaussianEmission({1.0, 2.0}, 1.0));
    const std::vector<double> y{1.5, 1.5, 1.5};
    const auto g = build_log_densities(model, y);
    const auto [path, score] = brute_force_map(model, g);
    CHECK(path == std::vector<std::int32_t>{1, 1, 1});
    // viterbi shares the smallest-index rule
    CHECK(viterbi_decode(model, g).path == std::vector<std::int32_t>{1, 1, 1});
  }
}

TEST_CASE("all-impossible landscape is flagged and still returns a path") {
  const auto model = example_model();
  LogDensityMatrix g;
  g.values.resize(2, 3, kNegInf);
  const auto res = viterbi_decode(model, g);
  CHECK(res.all_impossible);
  CHECK(res.log_lik == kNegInf);
  CHECK(res.path == std::vector<std::int32_t>{1, 1, 1});
}

TEST_CASE("the exact decoder dominates the segmentation decoder") {
  qats::SimRng rng(113, 0);
  for (int rep = 0; rep < 20; ++rep) {
    qats::SimConfig config;
    config.n = 301;
    config.m = 2;
    config.s = 4;
    config.sigma = 1.0;
    config.seed = 500 + static_cast<std::uint64_t>(rep);
    const auto sim = qats::simulate_hmm(config);
    const auto model = qats::model_for_config(config);
    const auto g = build_log_densities(model, sim.y);
    const auto scores = qats::build_cum_scores(model, sim.y);
    const auto vres = viterbi_decode(model, g);
    const auto qres = qats::qats_decode(model, scores, qats::SearchParams{});
    CHECK(complete_log_lik(model, g, qres.path) <= vres.log_lik + 1e-9);
  }
}

TEST_CASE("brute force rejects oversized instances") {
  const auto model = example_model();
  LogDensityMatrix g;
  g.values.resize(2, 40, -1.0);
  CHECK_THROWS_AS(brute_force_map(model, g), std::invalid_argument);
}

TEST_CASE("path validation in the likelihood evaluator") {
  const auto model = example_model();
  const std::vector<double> y{1.0, 2.0};
  const auto g = build_log_densities(model, y);
  CHECK_THROWS_AS(complete_log_lik(model, g, std::vector<std::int32_t>{1}), std::invalid_argument);
  CHECK_THROWS_AS(complete_log_lik(model, g, std::vector<std::int32_t>{1, 3}),
                  std::invalid_argument);
}
