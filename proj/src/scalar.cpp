#include "pdq/scalar.hpp"

#include <stdexcept>

namespace pdq {

Scalar::Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

Scalar Scalar::ratio(long num, long den) {
  if (den == 0)
    throw std::domain_error("zero denominator");
  return Scalar(mpq_class(num, den));
}

Scalar Scalar::i() { return Scalar(0, 1); }

Scalar Scalar::inverse() const {
  if (is_zero())
    throw std::domain_error("division by zero scalar");
  if (is_real())
    return Scalar(1 / re_);
  mpq_class n = re_ * re_ + im_ * im_;
  return Scalar(re_ / n, -im_ / n);
}

Scalar &Scalar::operator+=(const Scalar &o) {
  re_ += o.re_;
  if (sgn(o.im_) != 0)
    im_ += o.im_;
  return *this;
}

Scalar &Scalar::operator-=(const Scalar &o) {
  re_ -= o.re_;
  if (sgn(o.im_) != 0)
    im_ -= o.im_;
  return *this;
}

Scalar &Scalar::operator*=(const Scalar &o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class m = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(m);
  return *this;
}

Scalar &Scalar::operator/=(const Scalar &o) {
  if (o.is_zero())
    throw std::domain_error("division by zero scalar");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    if (sgn(im_) != 0)
      im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

std::strong_ordering operator<=>(const Scalar &a, const Scalar &b) {
  int c = cmp(a.re_, b.re_);
  if (c == 0)
    c = cmp(a.im_, b.im_);
  return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
}

std::string Scalar::str() const {
  if (is_real())
    return re_.get_str();
  if (sgn(re_) == 0) {
    if (im_ == 1)
      return "i";
    if (im_ == -1)
      return "-i";
    return im_.get_str() + "*i";
  }
  std::string s = "(" + re_.get_str();
  if (sgn(im_) > 0)
    s += "+";
  if (im_ == 1)
    s += "i";
  else if (im_ == -1)
    s += "-i";
  else
    s += im_.get_str() + "*i";
  return s + ")";
}

Scalar factorial(int k) {
  mpz_class f = 1;
  for (int j = 2; j <= k; ++j)
    f *= j;
  return Scalar(mpq_class(f));
}

Scalar binomial(int n, int k) {
  if (k < 0 || k > n)
    return Scalar(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Scalar(mpq_class(r));
}

} // namespace pdq
