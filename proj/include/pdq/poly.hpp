#pragma once

#include "pdq/mono.hpp"
#include "pdq/scalar.hpp"

#include <map>
#include <vector>

namespace pdq {

// Polynomial over Gaussian rationals in a fixed number of variables. On a chart
// of half-dimension n the variables are x_1..x_n, y_1..y_n (indices 0..2n-1).
class Poly {
public:
  using Terms = std::map<Mono, Scalar>;

  Poly() = default;
  explicit Poly(int nvars);
  static Poly constant(int nvars, const Scalar &c);
  static Poly variable(int nvars, int v);
  static Poly monomial(int nvars, Mono m, const Scalar &c = Scalar(1));

  int nvars() const { return nvars_; }
  const Terms &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar coeff(Mono m) const;
  Scalar constant_term() const { return coeff(Mono()); }
  void add_term(Mono m, const Scalar &c);

  int degree() const; // -1 for zero
  bool depends_on(int v) const;

  Poly &operator+=(const Poly &o);
  Poly &operator-=(const Poly &o);
  Poly &operator*=(const Poly &o);
  Poly &operator*=(const Scalar &c);
  Poly operator-() const;

  friend Poly operator+(Poly a, const Poly &b) { return a += b; }
  friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
  friend Poly operator*(const Poly &a, const Poly &b);
  friend Poly operator*(Poly a, const Scalar &c) { return a *= c; }
  friend Poly operator*(const Scalar &c, Poly a) { return a *= c; }
  friend bool operator==(const Poly &a, const Poly &b) = default;

  Poly mul_mono(Mono m, const Scalar &c) const;
  Poly derivative(int v) const;
  Poly derivative(Mono alpha) const;

  // Substitutes variable v := 0.
  Poly at_zero(int v) const;

private:
  void check(const Poly &o) const;
  int nvars_ = 0;
  Terms terms_;
};

// Falling factorial m!/(m-k)! as an integer scalar.
Scalar falling(int m, int k);

// Product over variables of alpha_v!.
Scalar multi_factorial(Mono alpha);

// All monomials in nvars variables with degree <= max_degree, graded order.
std::vector<Mono> monomials_up_to(int nvars, int max_degree);

// Monomials in the given variable subset with degree <= max_degree.
std::vector<Mono> monomials_in(const std::vector<int> &vars, int max_degree);

} // namespace pdq
