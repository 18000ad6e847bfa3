#pragma once

#include "pdq/poly.hpp"

#include <vector>

namespace pdq {

// Truncated power series c_0 + c_1 t + ... + c_N t^N with polynomial
// coefficients. Arithmetic between series of different order is an error.
class TSeries {
public:
  TSeries() = default;
  TSeries(int nvars, int order);
  TSeries(const Poly &p, int order);

  static TSeries constant(int nvars, int order, const Scalar &c);
  static TSeries variable(int nvars, int order, int v);
  static TSeries t_power(int nvars, int order, int k, const Scalar &c = Scalar(1));

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  const Poly &operator[](int k) const { return c_.at(k); }
  Poly &operator[](int k) { return c_.at(k); }
  const std::vector<Poly> &coefficients() const { return c_; }

  bool is_zero() const;
  bool is_constant_in_t() const;
  int valuation() const; // lowest k with c_k != 0, order+1 when zero
  int degree() const;    // max polynomial degree over coefficients
  bool depends_on(int v) const;

  TSeries &operator+=(const TSeries &o);
  TSeries &operator-=(const TSeries &o);
  TSeries &operator*=(const TSeries &o);
  TSeries &operator*=(const Scalar &c);
  TSeries operator-() const;

  friend TSeries operator+(TSeries a, const TSeries &b) { return a += b; }
  friend TSeries operator-(TSeries a, const TSeries &b) { return a -= b; }
  friend TSeries operator*(const TSeries &a, const TSeries &b);
  friend TSeries operator*(TSeries a, const Scalar &c) { return a *= c; }
  friend TSeries operator*(const Scalar &c, TSeries a) { return a *= c; }
  friend bool operator==(const TSeries &a, const TSeries &b) = default;

  TSeries mul_poly(const Poly &p) const;
  // Multiplies by t^k (k may be negative when the low coefficients vanish).
  TSeries shift(int k) const;
  TSeries derivative(int v) const;
  TSeries derivative(Mono alpha) const;

  // Multiplicative inverse; c_0 must be a nonzero constant.
  TSeries invert() const;

  // Substitutes variable v := subs[v] for every variable.
  TSeries compose(const std::vector<TSeries> &subs) const;

  // Explicit change of truncation order (drops or zero-pads).
  TSeries retruncate(int order) const;

private:
  void check(const TSeries &o) const;
  int nvars_ = 0;
  int order_ = 0;
  std::vector<Poly> c_;
};

// Evaluates a polynomial at series arguments.
TSeries substitute(const Poly &p, const std::vector<TSeries> &subs);

} // namespace pdq
