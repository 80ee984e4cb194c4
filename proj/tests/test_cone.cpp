#include <doctest.h>

#include <cmath>

#include "cyclic/catalan.hpp"
#include "cyclic/cone.hpp"
#include "cyclic/error.hpp"
#include "oracles.hpp"

using namespace cyclic;

namespace {

// The defining inequality lists, written out independently of build_cone.
std::vector<oracle::PrefixInequality> k_rows(unsigned i, unsigned q) {
  std::vector<oracle::PrefixInequality> rows;
  for (unsigned j = 1; j <= i; ++j) rows.push_back({j, j, false});
  rows.push_back({i + 1, i + 1, true});
  if (q > 0) {
    for (unsigned j = 1; j + q <= i + 2; ++j) rows.push_back({j, j + q - 2, true});
  }
  return rows;
}

std::vector<oracle::PrefixInequality> s_rows(unsigned i, unsigned q) {
  std::vector<oracle::PrefixInequality> rows;
  for (unsigned j = 1; j <= i + q - 1; ++j) rows.push_back({j, j, false});
  for (unsigned j = 1; j <= i; ++j) rows.push_back({j, j + q - 2, true});
  rows.push_back({i + 1, i + q - 1, false});
  return rows;
}

}  // namespace

TEST_CASE("cone shapes") {
  const auto k = build_cone(ConeFamily::K, 2);
  CHECK(k.dim() == 6);
  CHECK(k.inequalities == std::vector<Inequality>{{1, 1, false}, {2, 2, false}, {3, 3, true}});
  CHECK(build_cone(ConeFamily::Kq, 1, 3).inequalities == build_cone(ConeFamily::K, 1).inequalities);
  CHECK(build_cone(ConeFamily::S, 2, 3).dim() == 8);
  CHECK(parse_family("Kq") == ConeFamily::Kq);
  CHECK_THROWS_AS(parse_family("Q"), Error);
  try {
    (void)build_cone(ConeFamily::S, 1);
    FAIL("missing q accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_q);
  }
  const std::vector<double> wrong(5, 1.0);
  try {
    (void)contains(k, wrong);
    FAIL("wrong length accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
}

TEST_CASE("exact integrals match brute-force orderings") {
  for (unsigned i = 0; i <= 3; ++i) {
    CAPTURE(i);
    CHECK(exact_integral(build_cone(ConeFamily::K, i)) == oracle::cone_integral(i + 1, k_rows(i, 0)));
    for (unsigned q = 2; q <= 5; ++q) {
      CAPTURE(q);
      CHECK(exact_integral(build_cone(ConeFamily::Kq, i, q)) == oracle::cone_integral(i + 1, k_rows(i, q)));
      if (i + q - 1 <= 5) {
        CHECK(exact_integral(build_cone(ConeFamily::S, i, q)) == oracle::cone_integral(i + q - 1, s_rows(i, q)));
      }
    }
  }
}

TEST_CASE("linear extensions of the ladder count Catalan numbers") {
  for (unsigned i = 0; i <= 7; ++i) {
    // The two chain tops come last in one fixed order, so the count is C_i.
    CHECK(count_linear_extensions(build_cone(ConeFamily::K, i)) == catalan(i));
    for (unsigned q = 2; q <= 5; ++q) {
      CHECK(count_linear_extensions(build_cone(ConeFamily::Kq, i, q)) == catalan_bounded(i, static_cast<int>(q) - 2));
    }
  }
  CHECK_THROWS_AS(exact_integral(build_cone(ConeFamily::K, kMaxExactHalfZ)), Error);
}

TEST_CASE("exponential sampler") {
  auto rng = make_stream(3, 0);
  double sum = 0.0, sumsq = 0.0;
  const int m = 200000;
  for (int k = 0; k < m; ++k) {
    const double e = standard_exponential(rng);
    REQUIRE(e >= 0.0);
    REQUIRE(std::isfinite(e));
    sum += e;
    sumsq += e * e;
  }
  const double mean = sum / m;
  // Mean 1, variance 1: the mean of m draws has standard error 1/sqrt(m).
  CHECK(std::abs(mean - 1.0) < 4.0 / std::sqrt(double(m)));
  CHECK(std::abs(sumsq / m - 2.0) < 0.05);
}

TEST_CASE("gap integral over an ordered simplex") {
  // Integral of exp(-v_a - v_k) over 0 <= v_1 <= ... <= v_k is 2^{-a}.
  // Sample v through exponential gaps g_j (density exp(-sum g)) and weight by
  // exp(-(v_a + v_k) + sum g) = exp(-sum_{j <= a} g_j).
  auto rng = make_stream(4, 0);
  for (unsigned k = 2; k <= 6; ++k) {
    for (unsigned a = 1; a < k; ++a) {
      const int m = 100000;
      double sum = 0.0, sumsq = 0.0;
      for (int s = 0; s < m; ++s) {
        double head = 0.0;
        for (unsigned j = 1; j <= k; ++j) {
          const double g = standard_exponential(rng);
          if (j <= a) head += g;
        }
        const double weight = std::exp(-head);
        sum += weight;
        sumsq += weight * weight;
      }
      const double mean = sum / m;
      const double se = std::sqrt((sumsq / m - mean * mean) / m);
      CAPTURE(k);
      CAPTURE(a);
      CHECK(std::abs(mean - std::ldexp(1.0, -static_cast<int>(a))) < 4.0 * se);
    }
  }
}

TEST_CASE("Monte Carlo integrals agree with exact values") {
  const std::vector<ConeSpec> cones{build_cone(ConeFamily::K, 0), build_cone(ConeFamily::K, 2),
                                    build_cone(ConeFamily::Kq, 3, 3), build_cone(ConeFamily::S, 0, 3),
                                    build_cone(ConeFamily::S, 1, 4)};
  for (const auto& spec : cones) {
    const auto exact = exact_integral(spec).convert_to<double>();
    const auto est = mc_integral(spec, 400000, 99, 2);
    CHECK(est.samples == 400000);
    CHECK(std::abs(est.estimate - exact) < 4.0 * est.standard_error);
  }
}

TEST_CASE("Monte Carlo is independent of the worker count") {
  const auto spec = build_cone(ConeFamily::K, 1);
  const auto a = mc_integral(spec, 200000, 5, 1);
  const auto b = mc_integral(spec, 200000, 5, 3);
  CHECK(a.hits == b.hits);
  CHECK(a.estimate == b.estimate);
}

TEST_CASE("cones are invariant under positive scaling") {
  auto rng = make_stream(6, 0);
  for (const auto& spec : {build_cone(ConeFamily::K, 3), build_cone(ConeFamily::Kq, 4, 3), build_cone(ConeFamily::S, 2, 3)}) {
    for (int trial = 0; trial < 2000; ++trial) {
      std::vector<double> u(spec.dim());
      for (auto& x : u) x = standard_exponential(rng);
      // Powers of two keep the scaled sums exact, so no rounding moves a boundary.
      const double lambda = std::ldexp(1.0, static_cast<int>(rng() % 40) - 20);
      std::vector<double> v(u);
      for (auto& x : v) x *= lambda;
      CHECK(contains(spec, u) == contains(spec, v));
    }
  }
}
