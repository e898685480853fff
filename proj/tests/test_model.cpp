#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qats/model.hpp"

using qats::build_model;
using qats::GaussianEmission;
using qats::kNegInf;
using qats::Matrix;

namespace {

Matrix<double> matrix2(double a, double b, double c, double d) {
  Matrix<double> out(2, 2);
  out(0, 0) = a;
  out(0, 1) = b;
  out(1, 0) = c;
  out(1, 1) = d;
  return out;
}

}  // namespace

TEST_CASE("build_model stores exact logs of the worked-example parameters") {
  const std::vector<double> pi{0.5, 0.5};
  const auto model =
      build_model(pi, matrix2(2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0),
                  GaussianEmission({1.0, 2.0}, 2.0));
  CHECK(model.m() == 2);
  CHECK(model.log_pi(1) == -std::log(2.0));
  CHECK(model.log_pi(2) == -std::log(2.0));
  CHECK(model.q(1, 1) == std::log(2.0 / 3.0));
  CHECK(model.q(2, 2) == std::log(2.0 / 3.0));
  CHECK(model.q(1, 2) == std::log(1.0 / 3.0));
  CHECK(model.q(2, 1) == std::log(1.0 / 3.0));
}

TEST_CASE("zero probabilities become minus infinity, not a finite sentinel") {
  const std::vector<double> pi{1.0, 0.0};
  const auto model = build_model(pi, matrix2(1.0, 0.0, 0.0, 1.0),
                                 GaussianEmission({0.0, 1.0}, 1.0));
  CHECK(model.log_pi(1) == 0.0);
  CHECK(model.log_pi(2) == kNegInf);
  CHECK(model.q(1, 1) == 0.0);
  CHECK(model.q(1, 2) == kNegInf);
  CHECK(model.q(2, 1) == kNegInf);
  CHECK(model.q(2, 2) == 0.0);
}

TEST_CASE("build_model rejects malformed inputs") {
  const GaussianEmission em({1.0, 2.0}, 1.0);
  const auto good = matrix2(0.5, 0.5, 0.5, 0.5);
  CHECK_THROWS_AS(build_model(std::vector<double>{0.4, 0.5}, good, em), std::invalid_argument);
  CHECK_THROWS_AS(build_model(std::vector<double>{0.5, 0.5}, matrix2(0.5, 0.4, 0.5, 0.5), em),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_model(std::vector<double>{1.0}, Matrix<double>(1, 1, 1.0),
                              GaussianEmission({1.0}, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_model(std::vector<double>{1.5, -0.5}, good, em), std::invalid_argument);
  Matrix<double> rect(2, 3, 1.0 / 3.0);
  CHECK_THROWS_AS(build_model(std::vector<double>{0.5, 0.5}, rect, em), std::invalid_argument);
  CHECK_THROWS_AS(GaussianEmission({1.0, 2.0}, 0.0), std::invalid_argument);
}

TEST_CASE("exp of the stored logs reproduces the inputs") {
  qats::SimRng rng(11, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 4);
    const auto pi = oracle::random_probs(rng, m, 0.0, 1);
    const auto trans = oracle::random_stochastic(rng, m, 0.0);
    std::vector<double> means(static_cast<std::size_t>(m), 0.0);
    const auto model = build_model(pi, trans, GaussianEmission(means, 1.0));
    for (int i = 1; i <= m; ++i) {
      CHECK(std::exp(model.log_pi(i)) ==
            doctest::Approx(pi[static_cast<std::size_t>(i - 1)]).epsilon(1e-12));
      for (int j = 1; j <= m; ++j)
        CHECK(std::exp(model.q(i, j)) == doctest::Approx(trans(i - 1, j - 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("uniform_transition reproduces the exit-probability construction") {
  SUBCASE("headline setting") {
    const auto t = qats::uniform_transition(2, 1000001, 11);
    CHECK(t(0, 1) == 1e-5);
    CHECK(t(1, 0) == 1e-5);
    CHECK(t(0, 0) == 1.0 - 1e-5);
    CHECK(t(1, 1) == 1.0 - 1e-5);
  }
  SUBCASE("s=1 gives the identity") {
    const auto t = qats::uniform_transition(3, 100, 1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(t(i, j) == (i == j ? 1.0 : 0.0));
  }
  SUBCASE("five states") {
    const auto t = qats::uniform_transition(5, 51, 6);
    CHECK(t(0, 0) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(t(0, 1) == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(t(3, 2) == doctest::Approx(0.025).epsilon(1e-15));
  }
  SUBCASE("rows sum to one") {
    for (const int m : {2, 3, 5, 10}) {
      const auto t = qats::uniform_transition(m, 1001, 7);
      for (int i = 0; i < m; ++i) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) sum += t(i, j);
        CHECK(std::abs(sum - 1.0) <= 1e-15);
      }
    }
  }
  SUBCASE("validation") {
    CHECK_THROWS_WITH_AS(qats::uniform_transition(2, 1001, 2000),
                         "uniform_transition: s exceeds n", std::invalid_argument);
    CHECK_THROWS_AS(qats::uniform_transition(1, 100, 2), std::invalid_argument);
    CHECK_THROWS_AS(qats::uniform_transition(2, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(qats::uniform_transition(2, 100, 0), std::invalid_argument);
  }
}

TEST_CASE("expected_segments evaluates 1 + (n-1)p") {
  CHECK(qats::expected_segments(1000001, 1e-5) == doctest::Approx(11.0).epsilon(1e-12));
  CHECK(qats::expected_segments(12345, 0.0) == 1.0);
  CHECK(qats::expected_segments(101, 0.05) == doctest::Approx(6.0).epsilon(1e-12));
}
