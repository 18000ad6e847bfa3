#include "test_util.hpp"

#include "pdq/darboux.hpp"
#include "pdq/engine.hpp"
#include "pdq/hochschild.hpp"

#include <catch_amalgamated.hpp>

using namespace pdq;
using pdq::testing::n1_connection;
using pdq::testing::random_poly;
using pdq::testing::series;

namespace {

MultiDiffOp op1(int nvars, Mono g, const Poly &c) {
  MultiDiffOp op(nvars, 1);
  op.add_term({g}, c);
  return op;
}

Poly poly(const char *text, int n) { return parse_series(text, n, 0)[0]; }

// Polarized gauge 1 + t D_1 + t^2 D_2 with variable coefficients.
DiffOpSeries sample_gauge_on_O(int n, int N) {
  int nv = 2 * n;
  DiffOpSeries D = DiffOpSeries::identity(nv, N);
  Mono dx = Mono::unit(0), dy = Mono::unit(n);
  D[1] = op1(nv, dx + dy, poly(n == 1 ? "y^2" : "y1*x2", n)) +
         op1(nv, dy + dy, poly(n == 1 ? "x" : "x1 + y2", n)) +
         op1(nv, dy, poly(n == 1 ? "y^2" : "y1*y2", n));
  if (N >= 2)
    D[2] = op1(nv, dy + dy + dy, poly(n == 1 ? "x*y" : "x2*y1", n));
  return D;
}

DarbouxCoordinates apply_to_chart(const DiffOpSeries &op, int n, int N) {
  DarbouxCoordinates c = chart_coordinates(n, N);
  for (auto &v : c.x)
    v = op.apply(v);
  for (auto &v : c.y)
    v = op.apply(v);
  return c;
}

StarProduct fedosov_over(const BaseForm &omega_t, const StarProduct &mu_w) {
  return transport_star_product(mu_w, darboux_map(omega_t), 2);
}

} // namespace

TEST_CASE("bracket_validation", "[darboux]") {
  CHECK(validate_bracket(DeformedBracket::standard(1, 3), 3).ok());
  CHECK(validate_bracket(DeformedBracket::of_star_product(moyal_wick(1, 4)), 3).ok());
  CHECK(validate_bracket(DeformedBracket::of_star_product(moyal_weyl(2, 3)), 2).ok());
  DeformedBracket broken = DeformedBracket::standard(1, 2);
  broken[1].add_term({Mono::unit(0), Mono::unit(0, 2)}, Poly::constant(2, Scalar(1)));
  auto rep = validate_bracket(broken, 2);
  CHECK_FALSE(rep.antisymmetric);
  CHECK_FALSE(rep.witness.empty());
  DeformedBracket jac = DeformedBracket::standard(1, 2);
  Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
  jac[1].add_term({Mono::unit(1), Mono::unit(0)}, x * y);
  jac[1].add_term({Mono::unit(0), Mono::unit(1)}, -(x * y));
  jac[1].add_term({Mono::unit(1), Mono::unit(0, 2)}, x);
  jac[1].add_term({Mono::unit(0, 2), Mono::unit(1)}, -x);
  CHECK_FALSE(validate_bracket(jac, 3).jacobi);
}

TEST_CASE("lift_of_unperturbed_brackets", "[darboux]") {
  for (int n = 1; n <= 2; ++n) {
    DeformedBracket std_b = DeformedBracket::standard(n, 4);
    CHECK(lift_darboux(std_b) == chart_coordinates(n, 4));
    DeformedBracket wick = DeformedBracket::of_star_product(moyal_wick(n, 5));
    CHECK(lift_darboux(wick) == chart_coordinates(n, 4));
  }
}

TEST_CASE("lift_of_gauged_wick_brackets", "[darboux]") {
  for (int n = 1; n <= 2; ++n) {
    int N = 5;
    DiffOpSeries D = sample_gauge_on_O(n, N);
    REQUIRE(D.identical_on_O());
    StarProduct gauged = apply_gauge(D, moyal_wick(n, N));
    DeformedBracket b = DeformedBracket::of_star_product(gauged);
    REQUIRE(b.order() == 4);
    DarbouxCoordinates c = lift_darboux(b);
    CHECK(darboux_valid_order(b, c) == 5);
    CHECK(x_lifts_in_O(c));
    CHECK(c != chart_coordinates(n, 4));
    // D^{-1} maps Wick coordinates to Darboux coordinates of the gauged product.
    DiffOpSeries inv = D.inverse();
    DiffOpSeries inv4 = DiffOpSeries::identity(2 * n, 4);
    for (int k = 1; k <= 4; ++k)
      inv4[k] = inv[k];
    CHECK(darboux_valid_order(b, apply_to_chart(inv4, n, 4)) == 5);
  }
  SECTION("gauge moving the x-coordinates leaves O") {
    int n = 2, nv = 4, N = 3;
    DiffOpSeries D = DiffOpSeries::identity(nv, N);
    D[1] = op1(nv, Mono::unit(0), poly("y2", n));
    DeformedBracket b = DeformedBracket::of_star_product(apply_gauge(D, moyal_wick(n, N)));
    DarbouxCoordinates c = lift_darboux(b);
    CHECK(darboux_valid_order(b, c) == N);
    CHECK_FALSE(x_lifts_in_O(c));
  }
}

TEST_CASE("extend_darboux", "[darboux]") {
  int n = 2, N = 4;
  DeformedBracket b = DeformedBracket::of_star_product(apply_gauge(sample_gauge_on_O(n, N + 1), moyal_wick(n, N + 1)));
  DarbouxCoordinates exact = lift_darboux(b);
  CHECK(extend_darboux(b, exact) == exact);
  for (int k = 1; k <= N; ++k) {
    DarbouxCoordinates broken = exact;
    broken.y[0][k] += poly("x1*y2^2 + y1", n);
    broken.y[1][k] += poly("x1^2", n);
    REQUIRE(darboux_valid_order(b, broken) == k);
    DarbouxCoordinates fixed = extend_darboux(b, broken);
    CHECK(darboux_valid_order(b, fixed) == N + 1);
    CHECK(x_lifts_in_O(fixed));
    for (int j = 0; j < n; ++j) {
      CHECK((fixed.x[j] - broken.x[j]).valuation() >= k);
      CHECK((fixed.y[j] - broken.y[j]).valuation() >= k);
    }
  }
  DarbouxCoordinates wrong = exact;
  wrong.y[0][0] += poly("y1^2", n);
  CHECK_THROWS_AS(extend_darboux(b, wrong), std::invalid_argument);
}

TEST_CASE("inner_automorphism_round_trip", "[darboux]") {
  std::mt19937 rng(17);
  for (int n = 1; n <= 2; ++n) {
    int N = 4, nv = 2 * n;
    DeformedBracket b = DeformedBracket::of_star_product(apply_gauge(sample_gauge_on_O(n, N + 1), moyal_wick(n, N + 1)));
    DarbouxCoordinates c1 = lift_darboux(b);
    TSeries zero_b = inner_automorphism(b, c1, c1);
    for (int k = 0; k <= N; ++k)
      CHECK(zero_b[k].is_zero());
    TSeries f = pdq::testing::random_series(rng, nv, N, 2, 2);
    DarbouxCoordinates c2;
    for (int j = 0; j < n; ++j) {
      c2.x.push_back(exp_t_ad(b, f, c1.x[j]));
      c2.y.push_back(exp_t_ad(b, f, c1.y[j]));
    }
    CHECK(darboux_valid_order(b, c2) == N + 1);
    TSeries B = inner_automorphism(b, c1, c2);
    for (int j = 0; j < n; ++j) {
      CHECK(exp_t_ad(b, B, c1.x[j]) == c2.x[j]);
      CHECK(exp_t_ad(b, B, c1.y[j]) == c2.y[j]);
    }
    for (int k = 0; k < N; ++k)
      CHECK((B - f)[k].is_constant());
  }
  SECTION("generating function on the standard bracket") {
    int N = 3;
    DeformedBracket b = DeformedBracket::standard(1, N);
    TSeries f = series("x^3 + 2*x", 1, N);
    DarbouxCoordinates c1 = chart_coordinates(1, N), c2 = c1;
    c2.y[0] += f.derivative(0).shift(1);
    TSeries B = inner_automorphism(b, c1, c2);
    // ad B = [B, .] and [y, x] = 1 make the generator -f.
    CHECK((B + f)[0].is_constant());
    for (int k = 1; k <= N; ++k)
      CHECK(B[k].is_constant());
  }
  SECTION("order-zero mismatch") {
    DeformedBracket b = DeformedBracket::standard(1, 2);
    DarbouxCoordinates c1 = chart_coordinates(1, 2), c2 = c1;
    c2.y[0][0] += Poly::variable(2, 0);
    CHECK_THROWS_AS(inner_automorphism(b, c1, c2), std::invalid_argument);
  }
}

TEST_CASE("characteristic_form_examples", "[darboux]") {
  SECTION("Moyal-Wick") {
    for (int n = 1; n <= 2; ++n)
      CHECK(characteristic_form(moyal_wick(n, 4)) == BaseForm::standard_symplectic(n, 3));
  }
  SECTION("Weyl is not polarized") {
    CHECK_THROWS_AS(characteristic_form(moyal_weyl(1, 3)), std::invalid_argument);
  }
  SECTION("non-flat Fedosov product") {
    int N = 3;
    FedosovConnection F = build_r(n1_connection("x*y", "y^2", N));
    StarProduct mu = extract_star_product(F, 2);
    REQUIRE(is_psp(mu));
    CHECK(characteristic_form(mu) == BaseForm::standard_symplectic(1, N - 1));
  }
  SECTION("deformed omega recovered") {
    int N = 4;
    BaseForm omega = form_from_potential({series("x^2*y + y^3", 1, N)});
    StarProduct mu = fedosov_over(omega, moyal_wick(1, N));
    REQUIRE(is_psp(mu));
    CHECK(characteristic_form(mu) == omega.retruncate(N - 1));
  }
  SECTION("independent of the lift") {
    int N = 4, n = 2;
    BaseForm omega = form_from_potential({series("x1*y2 + y1^2", n, N), series("x2^2*y1", n, N)});
    StarProduct mu = fedosov_over(omega, moyal_wick(n, N));
    DarbouxCoordinates l1, l2;
    BaseForm f1 = characteristic_form(mu, {}, &l1);
    BaseForm f2 = characteristic_form(
        mu, {Poly(4), poly("x1^3 + x2", n), poly("x1*x2", n), poly("x2^2", n)}, &l2);
    CHECK(l1 != l2);
    CHECK(f1 == f2);
    CHECK(f1 == omega.retruncate(N - 1));
  }
}

TEST_CASE("characteristic_form_under_gauge_identical_on_O", "[darboux]") {
  int n = 1, N = 4;
  SECTION("y-lifts fixed by D: form unchanged") {
    // g affine in y, D built from operators of order >= 2 with a y-derivative,
    // so D^{-1} fixes the Darboux lift of the ungauged product.
    BaseForm omega = form_from_potential({series("x*y + x^3", n, N)});
    StarProduct mu = fedosov_over(omega, moyal_wick(n, N));
    DiffOpSeries D = DiffOpSeries::identity(2, N);
    D[1] = op1(2, Mono::unit(1, 2), poly("x*y", n));
    D[2] = op1(2, Mono::unit(1, 3), poly("y^2", n));
    StarProduct gauged = apply_gauge(D, mu);
    REQUIRE(is_psp(gauged));
    BaseForm before = characteristic_form(mu);
    CHECK(characteristic_form(gauged) == before);
    CHECK(before == omega.retruncate(N - 1));
  }
  SECTION("general D: same orbit, shift d(sum (D^{-1}y^ - y^) dx^)") {
    BaseForm omega = form_from_potential({series("x*y^2", n, N)});
    StarProduct mu = fedosov_over(omega, moyal_wick(n, N));
    DiffOpSeries D = DiffOpSeries::identity(2, N);
    D[1] = op1(2, Mono::unit(1), poly("y^2", n));
    StarProduct gauged = apply_gauge(D, mu);
    DarbouxCoordinates lift;
    BaseForm before = characteristic_form(mu, {}, &lift);
    BaseForm after = characteristic_form(gauged);
    CHECK(after != before);
    // D^{-1} carries the lift of mu to a lift of the gauged product.
    DiffOpSeries inv = D.inverse();
    DarbouxCoordinates moved = lift;
    for (auto &v : moved.y) {
      TSeries full(v[0], N);
      for (int k = 0; k < N; ++k)
        full[k] = v[k];
      TSeries img = inv.apply(full);
      v = img.retruncate(N - 1);
    }
    CHECK(darboux_valid_order(DeformedBracket::of_star_product(gauged), moved) == N);
    BaseForm theta(n, N - 1, 1);
    for (int j = 0; j < n; ++j)
      theta += BaseForm::function(n, lift.x[j]).d().scaled(moved.y[j] - lift.y[j]);
    CHECK(theta.only_dx());
    CHECK(after == before + theta.d());
  }
}

TEST_CASE("trivialize_pair", "[darboux]") {
  SECTION("standard form") {
    CHECK(trivialize_pair(BaseForm::standard_symplectic(2, 3)).is_identity());
  }
  SECTION("n = 1, omega_0 + t d(x^2 y dx)") {
    int N = 4;
    BaseForm omega = form_from_potential({series("x^2*y", 1, N)});
    FormalAutomorphism S = trivialize_pair(omega);
    CHECK_FALSE(S.is_identity());
    CHECK(S.pullback(omega) == BaseForm::standard_symplectic(1, N));
    CHECK_FALSE(S.images()[0].depends_on(1));
  }
  SECTION("n = 2 with t-dependent potentials") {
    int N = 3;
    BaseForm omega =
        form_from_potential({series("x1*y2^2 + t*y1", 2, N), series("x2*y1 + t^2*x1*y2", 2, N)});
    FormalAutomorphism S = trivialize_pair(omega);
    CHECK(S.pullback(omega) == BaseForm::standard_symplectic(2, N));
    for (int i = 0; i < 2; ++i)
      CHECK_FALSE((S.images()[i].depends_on(2) || S.images()[i].depends_on(3)));
  }
  SECTION("precondition failures") {
    int N = 2;
    BaseForm bad = BaseForm::standard_symplectic(2, N);
    bad.add_term((Wedge{1} << 2) | (Wedge{1} << 3), series("t", 2, N));
    CHECK_THROWS_AS(trivialize_pair(bad), std::invalid_argument);
    BaseForm not_closed = BaseForm::standard_symplectic(2, N);
    not_closed.add_term((Wedge{1} << 1) | (Wedge{1} << 3), series("t*x1", 2, N));
    CHECK_THROWS_AS(trivialize_pair(not_closed), std::invalid_argument);
  }
}

TEST_CASE("lie_orbit_step", "[darboux]") {
  int N = 3;
  BaseForm omega0 = BaseForm::standard_symplectic(1, N);
  SECTION("zero field") {
    FormalVectorField X{{TSeries(2, N), TSeries(2, N)}};
    OrbitStep s = lie_orbit_step(omega0, X);
    CHECK(s.pulled == omega0);
    REQUIRE(s.theta.has_value());
    CHECK(s.theta->is_zero());
  }
  SECTION("field along P") {
    TSeries f = series("x*y^2 + x^2", 1, N);
    FormalVectorField X{{TSeries(2, N), f}};
    OrbitStep s = lie_orbit_step(omega0, X);
    CHECK(s.cartan_identity);
    CHECK(s.pulled.is_closed());
    REQUIRE(s.theta.has_value());
    CHECK(s.theta->only_dx());
    // first-order change t d(omega_0(X, .)) with omega_0(X, .) = f dx
    BaseForm first = s.pulled - omega0;
    BaseForm expected = BaseForm::basis(1, N, 0).scaled(f).d().shift(1);
    for (const auto &[w, c] : expected.terms())
      CHECK(first.coeff(w)[1] == c[1]);
    CHECK(omega0.contract(X.components) == BaseForm::basis(1, N, 0).scaled(f));
  }
  SECTION("general field on a deformed form") {
    BaseForm omega = form_from_potential({series("x*y", 1, N)});
    FormalVectorField X{{series("y", 1, N), series("x^2", 1, N)}};
    OrbitStep s = lie_orbit_step(omega, X);
    CHECK(s.cartan_identity);
    CHECK(s.pulled.is_closed());
    CHECK_FALSE(s.theta.has_value());
  }
}

TEST_CASE("transformed_connection_is_tensorial", "[darboux]") {
  int N = 3;
  ChristoffelData gw = n1_connection("x*y", "y^2", N);
  BaseForm omega = form_from_potential({series("x^2*y + x*y^2", 1, N)});
  FormalAutomorphism T = darboux_map(omega);
  ChristoffelData gz = transform_connection(gw, T);
  ConnectionReport rep = validate_connection(gz, omega);
  INFO(rep.witness);
  CHECK(rep.ok());
  CHECK(classical_trace_form(gz) == T.pullback(classical_trace_form(gw)));
  CHECK(transform_connection(gw, FormalAutomorphism::identity(1, N)) == gw);
}

TEST_CASE("polarized_functions_are_maximal_commutative", "[darboux]") {
  std::mt19937 rng(3);
  for (int n = 1; n <= 2; ++n) {
    int nv = 2 * n, N = 0;
    DeformedBracket b = DeformedBracket::standard(n, N);
    std::vector<Mono> xs_only, with_y;
    for (Mono m : monomials_up_to(nv, 3))
      (m.degree(n, nv) == 0 ? xs_only : with_y).push_back(m);
    for (int trial = 0; trial < 20; ++trial) {
      Poly a(nv), c(nv);
      for (Mono m : xs_only) {
        a.add_term(m, pdq::testing::random_scalar(rng));
        c.add_term(m, pdq::testing::random_scalar(rng));
      }
      CHECK(b(TSeries(a, N), TSeries(c, N)).is_zero());
      // g = (function of x) + (nonzero y-dependent part) fails to commute with
      // some x_i.
      Poly g = a;
      g.add_term(with_y[trial % with_y.size()], Scalar(trial + 1));
      bool commutes = true;
      for (int i = 0; i < n; ++i)
        if (!b(TSeries(g, N), TSeries::variable(nv, N, i)).is_zero())
          commutes = false;
      CHECK_FALSE(commutes);
    }
    // The kernel of g -> ({g, x_i})_i on polynomials of degree <= 3 is
    // exactly the x-polynomials: the images of y-monomials are independent.
    std::map<std::pair<int, Mono>, int> pivots;
    for (Mono m : with_y) {
      int i = 0;
      while (m[n + i] == 0)
        ++i;
      auto key = std::make_pair(i, m - Mono::unit(n + i));
      CHECK(pivots.emplace(key, 1).second);
    }
  }
}
