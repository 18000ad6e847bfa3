#pragma once

#include "pdq/form.hpp"

#include <compare>
#include <functional>
#include <map>

namespace pdq {

enum class Ordering { wick, weyl };

// Index of a stored monomial t^tpow * zhat^fiber (x) e_wedge. Fiber generators
// share the chart indexing: x^_i is variable i-1, y^_i is variable n+i-1.
struct FiberKey {
  int tpow = 0;
  Mono fiber;
  Wedge wedge = 0;
  friend auto operator<=>(const FiberKey &a, const FiberKey &b) {
    if (a.wedge != b.wedge)
      return a.wedge <=> b.wedge;
    if (a.tpow != b.tpow)
      return a.tpow <=> b.tpow;
    return a.fiber.bits() <=> b.fiber.bits();
  }
  friend bool operator==(const FiberKey &, const FiberKey &) = default;
};

// Element of the Fedosov algebra W (x) Lambda on a chart. Each stored monomial
// is a normal symbol in the ordering named by the tag: under wick every x^
// factor stands to the left of every y^ factor. Monomials with
// fiber degree + 2*tpow above 2N+2 or with tpow above N are never stored.
class FiberElement {
public:
  using Terms = std::map<FiberKey, Poly>;

  FiberElement() = default;
  FiberElement(int n, int order, Ordering tag = Ordering::wick);

  static FiberElement scalar(int n, const TSeries &f, Ordering tag = Ordering::wick);
  static FiberElement from_form(const BaseForm &f, Ordering tag = Ordering::wick);
  // zhat_a, a in [0, 2n).
  static FiberElement generator(int n, int order, int a, Ordering tag = Ordering::wick);
  // sum_i (y^_i dx_i - x^_i dy_i); (1/t) ad of it is delta.
  static FiberElement delta_tilde(int n, int order, Ordering tag = Ordering::wick);

  int n() const { return n_; }
  int order() const { return order_; }
  Ordering tag() const { return tag_; }
  int t_bound() const { return 2 * order_ + 2; }
  const Terms &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const FiberKey &key, const Poly &c);
  Poly coeff(const FiberKey &key) const;

  FiberElement &operator+=(const FiberElement &o);
  FiberElement &operator-=(const FiberElement &o);
  FiberElement operator-() const;
  friend FiberElement operator+(FiberElement a, const FiberElement &b) { return a += b; }
  friend FiberElement operator-(FiberElement a, const FiberElement &b) { return a -= b; }
  friend bool operator==(const FiberElement &, const FiberElement &) = default;

  FiberElement scaled(const Scalar &c) const;
  FiberElement shift(int k) const; // times t^k, k may be negative
  // Multiplies every coefficient by a base function (no fiber contraction).
  FiberElement mul_function(const TSeries &f) const;

  // Algebra product selected by the tag.
  friend FiberElement operator*(const FiberElement &a, const FiberElement &b);
  // (1/t)[a, b] with the graded commutator, computed without dividing.
  friend FiberElement bracket_over_t(const FiberElement &a, const FiberElement &b);

  FiberElement d() const; // exterior derivative along the base
  FiberElement delta() const;
  FiberElement delta_star() const;
  FiberElement delta_inverse() const;
  TSeries sigma() const;
  // Fiber-degree-zero part as a base form of the given degree.
  BaseForm scalar_form(int degree) const;

  FiberElement reorder(Ordering target) const;

  // Minimum over stored monomials; a large sentinel for zero.
  int ft_degree() const;
  int fp_degree() const;
  int max_fiber_degree() const;
  bool has_wedge_degree_only(int k) const;

  FiberElement filtered(const std::function<bool(const FiberKey &)> &keep) const;
  // Drops monomials with T-degree above bound.
  FiberElement t_truncated(int bound) const;

private:
  void check(const FiberElement &o) const;
  bool keeps(const FiberKey &key) const;
  Poly &slot(const FiberKey &key);

  int n_ = 0;
  int order_ = 0;
  Ordering tag_ = Ordering::wick;
  Terms terms_;
};

int t_degree(const FiberKey &key);

// sigma(a * b) without forming the full product.
TSeries sigma_of_product(const FiberElement &a, const FiberElement &b);

} // namespace pdq
