#include "hvp/hvp.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

using hvp::EnergySeries;
using hvp::ModelSpec;
using hvp::Rational;

namespace {

ModelSpec make_spec(int state, int max_order = 8) {
  ModelSpec spec;
  spec.state = state;
  spec.max_order = max_order;
  return spec;
}

EnergySeries<Rational> series_from(std::vector<Rational> coefficients) {
  ModelSpec spec;
  spec.max_order = static_cast<int>(coefficients.size()) - 1;
  return {spec, std::move(coefficients)};
}

EnergySeries<Rational> geometric_series(int order, Rational leading = Rational(1)) {
  std::vector<Rational> c(order + 1, leading);
  return series_from(std::move(c));
}

// Taylor coefficients of (1 + sum p_i x^i) / (1 + sum q_j x^j) through `order`,
// by the division recurrence e_k = p_k - sum_{j>=1} q_j e_{k-j}.
std::vector<Rational> expand_rational_function(const std::vector<Rational>& p,
                                               const std::vector<Rational>& q, int order) {
  std::vector<Rational> e(order + 1, Rational(0));
  for (int k = 0; k <= order; ++k) {
    Rational acc = k == 0 ? Rational(1)
                          : (k <= static_cast<int>(p.size()) ? p[k - 1] : Rational(0));
    for (int j = 1; j <= std::min<int>(k, static_cast<int>(q.size())); ++j)
      acc -= q[j - 1] * e[k - j];
    e[k] = acc;
  }
  return e;
}

Rational eval_poly_one(const std::vector<Rational>& tail, const Rational& x) {
  Rational acc(0);
  for (int i = static_cast<int>(tail.size()); i >= 1; --i) acc = (acc + tail[i - 1]) * x;
  return acc + 1;
}

}  // namespace

TEST_CASE("geometric series collapses to the exact [1,0] form") {
  const auto series = geometric_series(6);
  const auto approx = hvp::build_pade(series, 1, 0);
  REQUIRE(approx.denominator == std::vector<Rational>{Rational(-1)});
  REQUIRE(approx.numerator.empty());

  // leading/(1 - lambda) exactly, at exact points
  REQUIRE(hvp::evaluate_pade_exact(approx, Rational(1, 3)) == Rational(3, 2));
  REQUIRE(hvp::evaluate_pade_exact(approx, Rational(3, 5)) == Rational(5, 2));

  const auto eval = hvp::evaluate_pade(approx, 0.25);
  REQUIRE(eval.value == Catch::Approx(4.0 / 3.0).epsilon(1e-15));
  REQUIRE(eval.denominator_magnitude == Catch::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("zero-tail series yields the constant approximant for any orders") {
  std::vector<Rational> c{Rational(7, 3)};
  c.resize(9, Rational(0));
  const auto series = series_from(std::move(c));
  for (int den = 0; den <= 3; ++den) {
    for (int num = 0; num <= 3; ++num) {
      const auto approx = hvp::build_pade(series, den, num);
      for (const Rational& p : approx.numerator) REQUIRE(p == Rational(0));
      for (const Rational& q : approx.denominator) REQUIRE(q == Rational(0));
      REQUIRE(hvp::evaluate_pade_exact(approx, Rational(5, 7)) == Rational(7, 3));
    }
  }
}

TEST_CASE("degenerate geometric [2,2] falls back to the embedded [1,0] answer") {
  // The matching system is singular but consistent; the canonical solution
  // zeroes the free unknown and still represents 1/(1 - lambda) exactly.
  const auto approx = hvp::build_pade(geometric_series(8), 2, 2);
  REQUIRE(hvp::evaluate_pade_exact(approx, Rational(1, 3)) == Rational(3, 2));
  REQUIRE(hvp::evaluate_pade_exact(approx, Rational(-2, 3)) == Rational(3, 5));
}

TEST_CASE("inconsistent matching conditions are a hard error") {
  // e = (1, 1, 1, 2): the [2,1] rows demand q1 + q2 = -1 and q1 + q2 = -2.
  const auto series =
      series_from({Rational(1), Rational(1), Rational(1), Rational(2)});
  REQUIRE_THROWS_AS(hvp::build_pade(series, 2, 1), hvp::DefectiveApproximant);
}

TEST_CASE("[0,M] equals the order-M partial sum") {
  const auto result = hvp::compute_series<Rational>(make_spec(1));
  for (int m : {1, 3, 4}) {
    const auto approx = hvp::build_pade(result.energy, 0, m);
    REQUIRE(approx.den_order() == 0);
    const Rational lambda(1, 20);
    REQUIRE(hvp::evaluate_pade_exact(approx, lambda) ==
            hvp::evaluate_series(result.energy, lambda, m));
  }
}

TEST_CASE("build preconditions") {
  const auto result = hvp::compute_series<Rational>(make_spec(0, 4));
  REQUIRE_THROWS_AS(hvp::build_pade(result.energy, 3, 3), std::domain_error);
  REQUIRE_THROWS_AS(hvp::build_pade(result.energy, -1, 0), std::domain_error);
  const auto zero_leading =
      series_from({Rational(0), Rational(1), Rational(1)});
  REQUIRE_THROWS_AS(hvp::build_pade(zero_leading, 1, 1), std::domain_error);
}

TEST_CASE("physical approximants reproduce frozen table values") {
  SECTION("ground state") {
    const auto result = hvp::compute_series<Rational>(make_spec(0));
    const auto e33 = hvp::build_pade(result.energy, 3, 3);
    const auto eval = hvp::evaluate_pade(e33, 0.005);
    REQUIRE(eval.value == Catch::Approx(0.5012484405432408).epsilon(1e-13));
    REQUIRE(eval.denominator_magnitude > 1.0);  // far from any pole
    REQUIRE(hvp::evaluate_pade(e33, 0.0).value == 0.5);

    // exact rational evaluation frozen from the independent exact oracle
    REQUIRE(hvp::evaluate_pade_exact(e33, Rational(1, 20)) ==
            Rational(hvp::BigInt("70430866169"), hvp::BigInt("137469064958")));
  }

  SECTION("first excited state, pinned at six decimals") {
    const auto result = hvp::compute_series<Rational>(make_spec(1));
    const auto e33 = hvp::build_pade(result.energy, 3, 3);
    REQUIRE(hvp::evaluate_pade(e33, 0.01).value ==
            Catch::Approx(1.507481).margin(3e-6));
  }
}

TEST_CASE("taylor residuals vanish exactly and catch tampering") {
  const auto result = hvp::compute_series<Rational>(make_spec(2));
  for (auto orders : {std::pair{3, 3}, std::pair{3, 4}}) {
    auto approx = hvp::build_pade(result.energy, orders.first, orders.second);
    const auto residuals = hvp::taylor_residuals(approx, result.energy);
    REQUIRE(static_cast<int>(residuals.size()) == orders.first + orders.second + 1);
    for (const Rational& r : residuals) REQUIRE(r == Rational(0));

    approx.denominator[0] += Rational(1, 7);
    const auto damaged = hvp::taylor_residuals(approx, result.energy);
    REQUIRE(damaged[orders.second + 1] != Rational(0));
  }

  SECTION("short series is rejected") {
    const auto short_result = hvp::compute_series<Rational>(make_spec(2, 5));
    const auto approx = hvp::build_pade(short_result.energy, 3, 2);
    const auto longer = hvp::compute_series<Rational>(make_spec(2, 4));
    REQUIRE_THROWS_AS(hvp::taylor_residuals(approx, longer.energy), std::domain_error);
  }
}

TEST_CASE("random rational functions are recovered exactly") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> numer(-3, 3);
  std::uniform_int_distribution<int> denom(1, 2);
  int recovered = 0;
  for (int attempt = 0; attempt < 40 && recovered < 12; ++attempt) {
    const int den_order = 1 + attempt % 3;
    const int num_order = 1 + (attempt / 3) % 3;
    std::vector<Rational> p(num_order), q(den_order);
    for (auto& x : p) x = Rational(numer(rng), denom(rng));
    for (auto& x : q) x = Rational(numer(rng), denom(rng));

    const auto coefficients = expand_rational_function(p, q, den_order + num_order + 2);
    const auto series = series_from(coefficients);
    hvp::PadeApproximant<Rational> approx{Rational(0), {}, {}};
    try {
      approx = hvp::build_pade(series, den_order, num_order);
    } catch (const hvp::DefectiveApproximant&) {
      continue;  // the random function was degenerate for these orders
    }
    for (const Rational& lambda : {Rational(1, 10), Rational(1, 7), Rational(-2, 5)}) {
      if (eval_poly_one(q, lambda) == 0 || eval_poly_one(approx.denominator, lambda) == 0)
        continue;
      REQUIRE(hvp::evaluate_pade_exact(approx, lambda) ==
              eval_poly_one(p, lambda) / eval_poly_one(q, lambda));
    }
    ++recovered;
  }
  REQUIRE(recovered >= 12);
}

TEST_CASE("evaluation at an exact pole raises") {
  const auto approx = hvp::build_pade(geometric_series(4), 1, 0);
  REQUIRE_THROWS_AS(hvp::evaluate_pade(approx, 1.0), hvp::PoleAtEvaluationPoint);
  REQUIRE_THROWS_AS(hvp::evaluate_pade_exact(approx, Rational(1)),
                    hvp::PoleAtEvaluationPoint);
}

TEST_CASE("real pole scan") {
  SECTION("denominator 1 - lambda has the root, 1 + lambda does not") {
    const auto pole = hvp::build_pade(geometric_series(4), 1, 0);
    const auto roots = hvp::real_poles_in(pole, 0.0, 2.0);
    REQUIRE(roots.size() == 1);
    REQUIRE(roots[0] == Catch::Approx(1.0).margin(1e-9));

    std::vector<Rational> alternating{Rational(1), Rational(-1), Rational(1), Rational(-1),
                                      Rational(1)};
    const auto smooth = hvp::build_pade(series_from(std::move(alternating)), 1, 0);
    REQUIRE(smooth.denominator == std::vector<Rational>{Rational(1)});
    REQUIRE(hvp::real_poles_in(smooth, 0.0, 2.0).empty());
    const auto negative_side = hvp::real_poles_in(smooth, -2.0, 0.0);
    REQUIRE(negative_side.size() == 1);
    REQUIRE(negative_side[0] == Catch::Approx(-1.0).margin(1e-9));
  }

  SECTION("interval must be ordered") {
    const auto approx = hvp::build_pade(geometric_series(4), 1, 0);
    REQUIRE_THROWS_AS(hvp::real_poles_in(approx, 1.0, 1.0), std::domain_error);
  }
}

TEST_CASE("physical [1,0] entry carries a real pole at lambda = 2") {
  const auto result = hvp::compute_series<Rational>(make_spec(0));
  const auto approx = hvp::build_pade(result.energy, 1, 0);
  REQUIRE(approx.denominator == std::vector<Rational>{Rational(-1, 2)});

  const auto roots = hvp::real_poles_in(approx, 0.0, 3.0);
  REQUIRE(roots.size() == 1);
  REQUIRE(roots[0] == Catch::Approx(2.0).margin(1e-9));

  const auto near = hvp::evaluate_pade(approx, 1.999);
  REQUIRE(near.denominator_magnitude == Catch::Approx(5.0e-4).epsilon(1e-10));
  REQUIRE(near.value == Catch::Approx(1000.0).epsilon(1e-10));
  REQUIRE(hvp::evaluate_pade(approx, 1.0).denominator_magnitude == Catch::Approx(0.5));
}

TEST_CASE("highest default-grid state has a healthy [3,4] denominator") {
  const auto result = hvp::compute_series<Rational>(make_spec(5));
  const auto e34 = hvp::build_pade(result.energy, 3, 4);
  REQUIRE(hvp::real_poles_in(e34, 0.0, 0.15).empty());
  const auto eval = hvp::evaluate_pade(e34, 0.1);
  REQUIRE(eval.denominator_magnitude ==
          Catch::Approx(1.2100658135342828).epsilon(1e-12));
  REQUIRE(eval.value == Catch::Approx(5.7590375079607234).epsilon(1e-12));
}

TEST_CASE("float-mode build tracks the exact build") {
  ModelSpec spec = make_spec(3);
  spec.mode = hvp::Arithmetic::extended_float;
  const auto exact = hvp::compute_series<Rational>(make_spec(3));
  const auto quad = hvp::compute_series<hvp::QuadFloat>(spec);
  const auto exact_pade = hvp::build_pade(exact.energy, 3, 4);
  const auto quad_pade = hvp::build_pade(quad.energy, 3, 4);
  for (double lambda : {0.01, 0.1}) {
    REQUIRE(hvp::evaluate_pade(quad_pade, lambda).value ==
            Catch::Approx(hvp::evaluate_pade(exact_pade, lambda).value).epsilon(1e-13));
  }
}
