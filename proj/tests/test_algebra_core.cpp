#include "test_util.hpp"

#include "pdq/linsolve.hpp"

#include <catch_amalgamated.hpp>

using namespace pdq;
using pdq::testing::series;

TEST_CASE("monomial_derivative", "[poly]") {
  TSeries xy = series("x*y", 1, 0);
  CHECK(xy[0].derivative(1) == series("x", 1, 0)[0]);
}

TEST_CASE("difference_of_squares", "[poly]") {
  Poly a = series("x + y", 1, 0)[0], b = series("x - y", 1, 0)[0];
  CHECK(a * b == series("x^2 - y^2", 1, 0)[0]);
}

TEST_CASE("mixed_partials_commute", "[poly]") {
  Poly f = series("x^2*y^3", 1, 0)[0];
  CHECK(f.derivative(0).derivative(1) == f.derivative(1).derivative(0));
  CHECK(f.derivative(0).derivative(1) == series("6*x*y^2", 1, 0)[0]);
}

TEST_CASE("leibniz_rule_random", "[poly]") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Poly a = pdq::testing::random_poly(rng, 4, 4, 5, true);
    Poly b = pdq::testing::random_poly(rng, 4, 4, 5, true);
    for (int v = 0; v < 4; ++v)
      CHECK((a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v));
  }
}

TEST_CASE("dimension_mismatch_throws", "[poly]") {
  CHECK_THROWS_AS(Poly::variable(2, 0) + Poly::variable(4, 0), std::invalid_argument);
}

TEST_CASE("zero_coefficients_not_stored", "[poly]") {
  Poly p = series("x - x", 1, 0)[0];
  CHECK(p.terms().empty());
}

TEST_CASE("geometric_series_inverse", "[series]") {
  TSeries a = series("1 + t", 1, 3);
  CHECK(a.invert() == series("1 - t + t^2 - t^3", 1, 3));
}

TEST_CASE("series_product_truncates", "[series]") {
  CHECK(series("1 + t*x", 1, 2) * series("1 - t*x", 1, 2) == series("1 - t^2*x^2", 1, 2));
}

TEST_CASE("compose_first_order", "[series]") {
  TSeries f = series("x^2", 1, 1);
  TSeries r = f.compose({series("x + t*y", 1, 1), series("y", 1, 1)});
  CHECK(r == series("x^2 + 2*t*x*y", 1, 1));
}

TEST_CASE("inverse_of_inverse_random", "[series]") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    TSeries a = pdq::testing::random_series(rng, 2, 3, 3, 3);
    a[0] = Poly::constant(2, Scalar(1) + Scalar::ratio(trial, 3));
    TSeries inv = a.invert();
    CHECK(inv * a == TSeries::constant(2, 3, Scalar(1)));
    CHECK(inv.invert() == a);
  }
}

TEST_CASE("non_invertible_series_throws", "[series]") {
  CHECK_THROWS(series("x + t", 1, 2).invert());
  CHECK_THROWS(series("t", 1, 2).invert());
}

TEST_CASE("order_mismatch_throws", "[series]") {
  CHECK_THROWS_AS(series("x", 1, 1) + series("x", 1, 2), std::invalid_argument);
}

TEST_CASE("exterior_examples", "[form]") {
  BaseForm ydx(1, 0, 1);
  ydx.add_term(1, series("y", 1, 0));
  BaseForm omega = BaseForm::standard_symplectic(1, 0);
  CHECK(ydx.d() == omega);
  CHECK(omega.d().is_zero());
  std::vector<TSeries> dy_field{TSeries(2, 0), series("1", 1, 0)};
  CHECK(omega.contract(dy_field) == BaseForm::basis(1, 0, 0));
}

TEST_CASE("d_squared_and_graded_commutativity", "[form]") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2;
    BaseForm a = pdq::testing::random_form(rng, n, 1, 1, 3);
    BaseForm b = pdq::testing::random_form(rng, n, 1, 2, 3);
    CHECK(a.d().d().is_zero());
    CHECK(b.d().d().is_zero());
    CHECK(a.wedge(b) == b.wedge(a));
    CHECK(a.wedge(a).is_zero());
    // Leibniz: d(a^b) = da^b - a^db
    CHECK(a.wedge(b).d() == a.d().wedge(b) - a.wedge(b.d()));
  }
}

TEST_CASE("contraction_is_antiderivation", "[form]") {
  std::mt19937 rng(9);
  int n = 2;
  std::vector<TSeries> X;
  for (int v = 0; v < 2 * n; ++v)
    X.push_back(pdq::testing::random_series(rng, 2 * n, 0, 2, 2));
  for (int trial = 0; trial < 5; ++trial) {
    BaseForm a = pdq::testing::random_form(rng, n, 0, 1, 2);
    BaseForm b = pdq::testing::random_form(rng, n, 0, 2, 2);
    CHECK(a.wedge(b).contract(X) == a.contract(X).wedge(b) - a.wedge(b.contract(X)));
    CHECK(b.contract(X).contract(X).is_zero());
  }
}

TEST_CASE("degree_overflow_throws", "[form]") {
  BaseForm omega = BaseForm::standard_symplectic(1, 0);
  CHECK_THROWS_AS(omega.wedge(BaseForm::basis(1, 0, 0)), std::invalid_argument);
}

TEST_CASE("homotopy_of_symplectic_form", "[homotopy]") {
  BaseForm omega = BaseForm::standard_symplectic(1, 2);
  CHECK(poincare_homotopy(omega).d() == omega);
}

TEST_CASE("homotopy_of_exact_one_form", "[homotopy]") {
  TSeries f = series("x^2*y", 1, 0);
  BaseForm df = BaseForm::function(1, f).d();
  TSeries g = function_primitive(df);
  CHECK(g == f);
}

TEST_CASE("homotopy_rejects_non_closed", "[homotopy]") {
  BaseForm ydx(1, 0, 1);
  ydx.add_term(1, series("y", 1, 0));
  CHECK_THROWS_AS(poincare_homotopy(ydx), std::invalid_argument);
}

TEST_CASE("homotopy_inverts_d_on_random_closed_forms", "[homotopy]") {
  std::mt19937 rng(21);
  for (int n = 1; n <= 2; ++n)
    for (int k = 1; k <= 2 * n; ++k)
      for (int trial = 0; trial < 5; ++trial) {
        BaseForm alpha = pdq::testing::random_form(rng, n, 1, k - 1, 4).d();
        if (alpha.is_zero())
          continue;
        CHECK(poincare_homotopy(alpha).d() == alpha);
      }
}

TEST_CASE("primitive_of_basic_form_is_basic", "[homotopy]") {
  // closed dx-only 1-form whose coefficients do not depend on y
  TSeries f = series("x1^3*x2 + t*x2^2", 2, 1);
  BaseForm alpha = BaseForm::function(2, f).d();
  REQUIRE(alpha.only_dx());
  TSeries g = function_primitive(alpha);
  CHECK_FALSE(g.depends_on(2));
  CHECK_FALSE(g.depends_on(3));
  CHECK(BaseForm::function(2, g).d() == alpha);
}

TEST_CASE("dx_primitive_has_only_dx", "[homotopy]") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 2;
    BaseForm theta(n, 1, 1);
    for (int i = 0; i < n; ++i)
      theta.add_term(Wedge{1} << i, pdq::testing::random_series(rng, 2 * n, 1, 3, 3));
    BaseForm alpha = theta.d();
    BaseForm beta = dx_primitive(alpha);
    CHECK(beta.only_dx());
    CHECK(beta.d() == alpha);
  }
}

TEST_CASE("operations_are_deterministic", "[series]") {
  std::mt19937 r1(8), r2(8);
  TSeries a = pdq::testing::random_series(r1, 2, 2, 3, 4);
  TSeries b = pdq::testing::random_series(r2, 2, 2, 3, 4);
  CHECK(format_series(a * a, 1) == format_series(b * b, 1));
}

TEST_CASE("literal_round_trip", "[literal]") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    TSeries a(4, 2);
    for (int k = 0; k <= 2; ++k)
      a[k] = pdq::testing::random_poly(rng, 4, 3, 4, true);
    CHECK(parse_series(format_series(a, 2), 2, 2) == a);
  }
  CHECK(format_series(series("y + t*x^2*y", 1, 1), 1) == "y + t*x^2*y");
}

TEST_CASE("literal_errors_report_position", "[literal]") {
  try {
    parse_series("x + z", 1, 0);
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(parse_series("x / y", 1, 0), ParseError);
  CHECK_THROWS_AS(parse_series("x3", 2, 0), ParseError);
}

TEST_CASE("sparse_system_solves_consistent_rows", "[linsolve]") {
  SparseSystem sys(3);
  REQUIRE(sys.add_row({{0, Scalar(1)}, {1, Scalar(1)}}, Scalar(3)));
  REQUIRE(sys.add_row({{1, Scalar(2)}, {2, Scalar(-1)}}, Scalar(1)));
  REQUIRE(sys.add_row({{0, Scalar(2)}, {1, Scalar(4)}, {2, Scalar(-1)}}, Scalar(7)));
  auto x = sys.solve();
  REQUIRE(x);
  CHECK((*x)[0] + (*x)[1] == Scalar(3));
  CHECK(Scalar(2) * (*x)[1] - (*x)[2] == Scalar(1));
  CHECK_FALSE(sys.add_row({{0, Scalar(1)}, {1, Scalar(1)}}, Scalar(4)));
  CHECK_FALSE(sys.solve());
}
