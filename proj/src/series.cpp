#include "pdq/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace pdq {

TSeries::TSeries(int nvars, int order) : nvars_(nvars), order_(order) {
  if (order < 0)
    throw std::invalid_argument("negative truncation order");
  c_.assign(order + 1, Poly(nvars));
}

TSeries::TSeries(const Poly &p, int order) : TSeries(p.nvars(), order) { c_[0] = p; }

TSeries TSeries::constant(int nvars, int order, const Scalar &c) {
  return TSeries(Poly::constant(nvars, c), order);
}

TSeries TSeries::variable(int nvars, int order, int v) {
  return TSeries(Poly::variable(nvars, v), order);
}

TSeries TSeries::t_power(int nvars, int order, int k, const Scalar &c) {
  TSeries s(nvars, order);
  if (k <= order)
    s.c_[k] = Poly::constant(nvars, c);
  return s;
}

void TSeries::check(const TSeries &o) const {
  if (order_ != o.order_)
    throw std::invalid_argument("truncation order mismatch");
  if (nvars_ != o.nvars_)
    throw std::invalid_argument("series dimension mismatch");
}

bool TSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Poly &p) { return p.is_zero(); });
}

bool TSeries::is_constant_in_t() const {
  for (int k = 1; k <= order_; ++k)
    if (!c_[k].is_zero())
      return false;
  return true;
}

int TSeries::valuation() const {
  for (int k = 0; k <= order_; ++k)
    if (!c_[k].is_zero())
      return k;
  return order_ + 1;
}

int TSeries::degree() const {
  int d = -1;
  for (const auto &p : c_)
    d = std::max(d, p.degree());
  return d;
}

bool TSeries::depends_on(int v) const {
  return std::any_of(c_.begin(), c_.end(), [v](const Poly &p) { return p.depends_on(v); });
}

TSeries &TSeries::operator+=(const TSeries &o) {
  check(o);
  for (int k = 0; k <= order_; ++k)
    c_[k] += o.c_[k];
  return *this;
}

TSeries &TSeries::operator-=(const TSeries &o) {
  check(o);
  for (int k = 0; k <= order_; ++k)
    c_[k] -= o.c_[k];
  return *this;
}

TSeries operator*(const TSeries &a, const TSeries &b) {
  a.check(b);
  TSeries r(a.nvars_, a.order_);
  for (int i = 0; i <= a.order_; ++i) {
    if (a.c_[i].is_zero())
      continue;
    for (int j = 0; i + j <= a.order_; ++j)
      if (!b.c_[j].is_zero())
        r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return r;
}

TSeries &TSeries::operator*=(const TSeries &o) { return *this = *this * o; }

TSeries &TSeries::operator*=(const Scalar &c) {
  for (auto &p : c_)
    p *= c;
  return *this;
}

TSeries TSeries::operator-() const {
  TSeries r = *this;
  for (auto &p : r.c_)
    p = -p;
  return r;
}

TSeries TSeries::mul_poly(const Poly &p) const {
  TSeries r(nvars_, order_);
  for (int k = 0; k <= order_; ++k)
    if (!c_[k].is_zero())
      r.c_[k] = c_[k] * p;
  return r;
}

TSeries TSeries::shift(int k) const {
  TSeries r(nvars_, order_);
  for (int j = 0; j <= order_; ++j) {
    if (c_[j].is_zero())
      continue;
    int dst = j + k;
    if (dst < 0)
      throw std::domain_error("division by t of a series with nonzero low coefficient");
    if (dst <= order_)
      r.c_[dst] = c_[j];
  }
  return r;
}

TSeries TSeries::derivative(int v) const {
  TSeries r(nvars_, order_);
  for (int k = 0; k <= order_; ++k)
    r.c_[k] = c_[k].derivative(v);
  return r;
}

TSeries TSeries::derivative(Mono alpha) const {
  TSeries r(nvars_, order_);
  for (int k = 0; k <= order_; ++k)
    r.c_[k] = c_[k].derivative(alpha);
  return r;
}

TSeries TSeries::invert() const {
  const Poly &a0 = c_[0];
  if (!a0.is_constant() || a0.is_zero())
    throw std::domain_error("series constant term is not invertible");
  Scalar inv0 = a0.constant_term().inverse();
  TSeries r(nvars_, order_);
  r.c_[0] = Poly::constant(nvars_, inv0);
  for (int k = 1; k <= order_; ++k) {
    Poly acc(nvars_);
    for (int j = 1; j <= k; ++j)
      if (!c_[j].is_zero() && !r.c_[k - j].is_zero())
        acc += c_[j] * r.c_[k - j];
    r.c_[k] = acc * (-inv0);
  }
  return r;
}

TSeries TSeries::compose(const std::vector<TSeries> &subs) const {
  if (static_cast<int>(subs.size()) != nvars_)
    throw std::invalid_argument("substitution arity mismatch");
  TSeries r(subs.empty() ? nvars_ : subs[0].nvars(), order_);
  for (int k = 0; k <= order_; ++k) {
    if (c_[k].is_zero())
      continue;
    r += substitute(c_[k], subs).shift(k);
  }
  return r;
}

TSeries TSeries::retruncate(int order) const {
  TSeries r(nvars_, order);
  for (int k = 0; k <= std::min(order, order_); ++k)
    r.c_[k] = c_[k];
  return r;
}

TSeries substitute(const Poly &p, const std::vector<TSeries> &subs) {
  if (static_cast<int>(subs.size()) != p.nvars())
    throw std::invalid_argument("substitution arity mismatch");
  if (subs.empty())
    throw std::invalid_argument("empty substitution");
  int order = subs[0].order();
  int nv = subs[0].nvars();
  // powers[v][e] = subs[v]^e, built lazily
  std::vector<std::vector<TSeries>> powers(subs.size());
  auto power = [&](int v, int e) -> const TSeries & {
    auto &pw = powers[v];
    if (pw.empty())
      pw.push_back(TSeries::constant(nv, order, Scalar(1)));
    while (static_cast<int>(pw.size()) <= e)
      pw.push_back(pw.back() * subs[v]);
    return pw[e];
  };
  TSeries r(nv, order);
  for (const auto &[m, c] : p.terms()) {
    TSeries term = TSeries::constant(nv, order, c);
    for (int v = 0; v < p.nvars(); ++v)
      if (m[v] > 0)
        term = term * power(v, m[v]);
    r += term;
  }
  return r;
}

} // namespace pdq
