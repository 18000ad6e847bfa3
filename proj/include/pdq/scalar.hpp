#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

namespace pdq {

// Gaussian rational re + im*i, always canonical.
class Scalar {
public:
  Scalar() = default;
  Scalar(long v) : re_(v) {}
  Scalar(mpq_class re, mpq_class im = 0);

  static Scalar ratio(long num, long den);
  static Scalar i();

  const mpq_class &re() const { return re_; }
  const mpq_class &im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  Scalar inverse() const;

  Scalar operator-() const { return Scalar(-re_, -im_); }
  Scalar &operator+=(const Scalar &o);
  Scalar &operator-=(const Scalar &o);
  Scalar &operator*=(const Scalar &o);
  Scalar &operator/=(const Scalar &o);

  friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar &b) { return a /= b; }
  friend bool operator==(const Scalar &a, const Scalar &b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  // Total order used only for deterministic sorting.
  friend std::strong_ordering operator<=>(const Scalar &a, const Scalar &b);

  // "3/2", "-1/2*i", "(1/2+3*i)"; parseable by the literal grammar.
  std::string str() const;

private:
  mpq_class re_{0};
  mpq_class im_{0};
};

Scalar factorial(int k);
Scalar binomial(int n, int k);

} // namespace pdq
