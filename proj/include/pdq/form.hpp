#pragma once

#include "pdq/series.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace pdq {

// Wedge monomial dz^{v1} ^ ... ^ dz^{vk} with v1 < ... < vk, as a bitmask over
// the 2n chart directions (dx_i is bit i-1, dy_i is bit n+i-1).
using Wedge = std::uint32_t;

int wedge_degree(Wedge w);
// Sign of e_a ^ e_b rewritten in increasing order; 0 when they overlap.
int wedge_sign(Wedge a, Wedge b);
// Number of basis elements of w below v.
int wedge_position(Wedge w, int v);

// Homogeneous k-form with truncated-series coefficients on a 2n-chart.
class BaseForm {
public:
  using Terms = std::map<Wedge, TSeries>;

  BaseForm() = default;
  BaseForm(int n, int order, int degree);
  static BaseForm function(int n, const TSeries &f);
  static BaseForm basis(int n, int order, int v); // dz^v
  // Standard symplectic form sum_i dy_i ^ dx_i.
  static BaseForm standard_symplectic(int n, int order);

  int n() const { return n_; }
  int order() const { return order_; }
  int degree() const { return degree_; }
  const Terms &terms() const { return terms_; }
  TSeries coeff(Wedge w) const;
  void add_term(Wedge w, const TSeries &c);
  bool is_zero() const { return terms_.empty(); }

  BaseForm &operator+=(const BaseForm &o);
  BaseForm &operator-=(const BaseForm &o);
  BaseForm operator-() const;
  friend BaseForm operator+(BaseForm a, const BaseForm &b) { return a += b; }
  friend BaseForm operator-(BaseForm a, const BaseForm &b) { return a -= b; }
  friend bool operator==(const BaseForm &a, const BaseForm &b) = default;

  BaseForm scaled(const TSeries &f) const;
  BaseForm scaled(const Scalar &c) const;
  BaseForm shift(int k) const; // multiply by t^k
  BaseForm retruncate(int order) const;

  BaseForm d() const;
  BaseForm wedge(const BaseForm &o) const;
  // Interior product with the vector field sum_v X[v] d/dz^v.
  BaseForm contract(const std::vector<TSeries> &field) const;

  bool is_closed() const { return d().is_zero(); }
  // Every wedge monomial consists of dx factors only.
  bool only_dx() const;
  // No monomial contains two dy factors (the shape of d of a dx-only form).
  bool no_dy_dy() const;

private:
  void check(const BaseForm &o) const;
  int n_ = 0;
  int order_ = 0;
  int degree_ = 0;
  Terms terms_;
};

// Radial homotopy: for closed alpha of degree >= 1 returns h with dh = alpha.
BaseForm poincare_homotopy(const BaseForm &alpha);

// Primitive of a closed 2-form without dy^dy monomials, returned as a 1-form
// with dx factors only. For a closed 1-form whose coefficient of every dy_j
// vanishes this is not needed; see function_primitive.
BaseForm dx_primitive(const BaseForm &alpha);

// For a closed 1-form returns f with df = alpha.
TSeries function_primitive(const BaseForm &alpha);

} // namespace pdq
