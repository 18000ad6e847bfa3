#pragma once

#include "pdq/diffop.hpp"

#include <stdexcept>
#include <string>

namespace pdq {

// Operator algebra on MultiDiffOp. All three expand by Leibniz, so the result
// is again in normal form with polynomial coefficients.
MultiDiffOp compose(const MultiDiffOp &a, const MultiDiffOp &b); // a o b, both arity 1
MultiDiffOp left_compose(const MultiDiffOp &a, const MultiDiffOp &p); // a(p(f_1..f_k))
MultiDiffOp precompose(const MultiDiffOp &p, int slot, const MultiDiffOp &a); // p(.., a f_slot, ..)

// (d nu)(f_0..f_k) = f_0 nu(f_1..f_k) + sum_i (-1)^i nu(.., f_{i-1} f_i, ..)
//                    + (-1)^{k+1} nu(f_0..f_{k-1}) f_k
MultiDiffOp hochschild_d(const MultiDiffOp &nu);
// (1/k!) sum over permutations of sign * nu(f_s(1)..f_s(k)).
MultiDiffOp alternate(const MultiDiffOp &nu);

// O = functions of x, so a slot kills O exactly when its multi-index has a
// y-derivative. The variables n..2n-1 are the y's.
bool has_y_derivative(Mono alpha, int n);
bool is_polarized(const MultiDiffOp &nu);
bool is_strongly_polarized(const MultiDiffOp &nu);
// Every slot carries at least one derivative (vanishing when any argument is 1).
bool is_normalized(const MultiDiffOp &nu);

// Series D_0 + t D_1 + ... of differential operators, used as gauge operators.
class DiffOpSeries {
public:
  DiffOpSeries() = default;
  DiffOpSeries(int nvars, int order);
  static DiffOpSeries identity(int nvars, int order);
  // exp(t^tpow X) for an arity-1 X, tpow >= 1.
  static DiffOpSeries exp(const MultiDiffOp &X, int tpow, int order);
  // 1 + t^tpow b
  static DiffOpSeries unit_plus(const MultiDiffOp &b, int tpow, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  const MultiDiffOp &operator[](int k) const { return d_.at(k); }
  MultiDiffOp &operator[](int k) { return d_.at(k); }
  friend bool operator==(const DiffOpSeries &, const DiffOpSeries &) = default;

  bool is_unipotent() const; // D_0 = 1
  bool is_identity() const;
  // D_k vanishes on functions of x for every k >= 1.
  bool identical_on_O() const;

  friend DiffOpSeries operator*(const DiffOpSeries &a, const DiffOpSeries &b); // a o b
  DiffOpSeries inverse() const;
  TSeries apply(const TSeries &f) const;

private:
  void check(const DiffOpSeries &o) const;
  int nvars_ = 0;
  int order_ = 0;
  std::vector<MultiDiffOp> d_;
};

// (f, g) -> D^{-1} mu(D f, D g): D is an algebra map from the result to mu,
// so apply_gauge(D2, apply_gauge(D1, mu)) = apply_gauge(D1 * D2, mu).
StarProduct apply_gauge(const DiffOpSeries &D, const StarProduct &mu);

enum class CoboundaryGoal {
  strongly_polarized,    // nu + db strongly polarized
  kill_commutative_part, // nu + db = Alt(nu)
};

struct InfeasibleCoboundary : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arity-1 b with nu + db meeting the goal, searched among operators of total
// order <= that of nu with coefficients of degree <= those of nu. When
// polarized_b is set only operators vanishing on O are used.
MultiDiffOp solve_coboundary(const MultiDiffOp &nu, CoboundaryGoal goal, bool polarized_b);
// b = sum c d^{alpha+beta} over the terms c d^alpha (x) d^beta of nu with
// alpha a nonzero pure x-index and beta a nonzero pure y-index.
MultiDiffOp split_composite(const MultiDiffOp &nu);

struct EquivalenceResult {
  bool found = false;
  DiffOpSeries D;                // apply_gauge(D, mu_tilde) = mu when found
  int obstruction_order = -1;
  MultiDiffOp obstruction;       // residual cocycle at that order
  std::string reason;
  int vector_field_steps = 0;
};
// Searches for D with apply_gauge(D, mu_tilde) = mu up to t^N. At each order
// a non-commutative residual is first removed by exp(t^{k-1} X), X a vector
// field, then the commutative remainder by 1 + t^k b. With identical_on_O
// both X and b are required to vanish on O.
EquivalenceResult equivalence_search(const StarProduct &mu, const StarProduct &mu_tilde,
                                     bool identical_on_O);

struct Normalization {
  DiffOpSeries D;
  StarProduct product; // apply_gauge(D, input), strongly polarized for k >= 1
};
// For a weakly polarized product, gauges order by order with 1 + t^k b, b
// polarized, until every mu_k is strongly polarized.
Normalization normalize_to_psp(const StarProduct &mu);

} // namespace pdq
