#pragma once

#include "pdq/series.hpp"

#include <map>
#include <vector>

namespace pdq {

// One multi-index per argument slot.
using Slots = std::vector<Mono>;

// k-differential operator sum c(z) d^{alpha_1} (x) ... (x) d^{alpha_k} with
// polynomial coefficients, kept in normal form (merged, zeros dropped).
class MultiDiffOp {
public:
  using Terms = std::map<Slots, Poly>;

  MultiDiffOp() = default;
  MultiDiffOp(int nvars, int arity);
  // c * f_1 * ... * f_k
  static MultiDiffOp multiplication(int nvars, int arity, const Poly &c);

  int nvars() const { return nvars_; }
  int arity() const { return arity_; }
  const Terms &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const Slots &slots, const Poly &c);
  Poly coeff(const Slots &slots) const;

  MultiDiffOp &operator+=(const MultiDiffOp &o);
  MultiDiffOp &operator-=(const MultiDiffOp &o);
  MultiDiffOp operator-() const;
  friend MultiDiffOp operator+(MultiDiffOp a, const MultiDiffOp &b) { return a += b; }
  friend MultiDiffOp operator-(MultiDiffOp a, const MultiDiffOp &b) { return a -= b; }
  friend bool operator==(const MultiDiffOp &, const MultiDiffOp &) = default;
  MultiDiffOp scaled(const Scalar &c) const;
  MultiDiffOp mul_poly(const Poly &p) const;

  Poly evaluate(const std::vector<Poly> &args) const;
  // Evaluation on monomial arguments, visiting only multi-indices below them.
  Poly evaluate_monomials(const std::vector<Mono> &args) const;

  int max_slot_order() const; // largest |alpha| over all slots and terms
  int max_coefficient_degree() const;

private:
  void check(const MultiDiffOp &o) const;
  int nvars_ = 0;
  int arity_ = 0;
  Terms terms_;
};

// Order-by-order table mu_0..mu_N of bidifferential operators.
class StarProduct {
public:
  StarProduct() = default;
  StarProduct(int n, int order);

  int n() const { return n_; }
  int order() const { return order_; }
  int nvars() const { return 2 * n_; }
  const MultiDiffOp &operator[](int k) const { return mu_.at(k); }
  MultiDiffOp &operator[](int k) { return mu_.at(k); }
  const std::vector<MultiDiffOp> &table() const { return mu_; }
  friend bool operator==(const StarProduct &, const StarProduct &) = default;

  // sum_k t^k mu_k(f, g) with t-dependent arguments, truncated at N.
  TSeries operator()(const TSeries &f, const TSeries &g) const;
  TSeries apply(const Poly &f, const Poly &g) const;
  TSeries on_monomials(Mono a, Mono b) const;
  // (1/t)(f*g - g*f), valid to order N-1; the top coefficient is left zero.
  TSeries bracket(const TSeries &f, const TSeries &g) const;

private:
  int n_ = 0;
  int order_ = 0;
  std::vector<MultiDiffOp> mu_;
};

// Enumerates every multi-index beta <= alpha componentwise.
template <class Fn> void for_each_below(Mono alpha, int nvars, Fn &&fn) {
  auto rec = [&](auto &&self, int v, Mono cur) -> void {
    if (v == nvars) {
      fn(cur);
      return;
    }
    for (int e = 0; e <= alpha[v]; ++e)
      self(self, v + 1, cur.with(v, e));
  };
  rec(rec, 0, Mono());
}

// prod_v alpha_v! / (alpha_v - beta_v)!; requires beta <= alpha.
Scalar falling(Mono alpha, Mono beta);

} // namespace pdq
