#include "pdq/form.hpp"

#include <bit>
#include <stdexcept>

namespace pdq {

int wedge_degree(Wedge w) { return std::popcount(w); }

int wedge_position(Wedge w, int v) { return std::popcount(w & ((Wedge{1} << v) - 1)); }

int wedge_sign(Wedge a, Wedge b) {
  if (a & b)
    return 0;
  int swaps = 0;
  for (Wedge bb = b; bb; bb &= bb - 1) {
    int v = std::countr_zero(bb);
    // elements of a above v must pass over it
    swaps += std::popcount(a >> (v + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

BaseForm::BaseForm(int n, int order, int degree) : n_(n), order_(order), degree_(degree) {
  if (degree < 0 || degree > 2 * n)
    throw std::invalid_argument("form degree out of range");
}

BaseForm BaseForm::function(int n, const TSeries &f) {
  BaseForm r(n, f.order(), 0);
  r.add_term(0, f);
  return r;
}

BaseForm BaseForm::basis(int n, int order, int v) {
  BaseForm r(n, order, 1);
  r.add_term(Wedge{1} << v, TSeries::constant(2 * n, order, Scalar(1)));
  return r;
}

BaseForm BaseForm::standard_symplectic(int n, int order) {
  BaseForm r(n, order, 2);
  for (int i = 0; i < n; ++i) {
    // dy_i ^ dx_i = -(dx_i ^ dy_i)
    r.add_term((Wedge{1} << i) | (Wedge{1} << (n + i)), TSeries::constant(2 * n, order, Scalar(-1)));
  }
  return r;
}

void BaseForm::check(const BaseForm &o) const {
  if (n_ != o.n_)
    throw std::invalid_argument("form chart mismatch");
  if (order_ != o.order_)
    throw std::invalid_argument("truncation order mismatch");
}

TSeries BaseForm::coeff(Wedge w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? TSeries(2 * n_, order_) : it->second;
}

void BaseForm::add_term(Wedge w, const TSeries &c) {
  if (wedge_degree(w) != degree_)
    throw std::invalid_argument("wedge monomial degree mismatch");
  if (c.order() != order_)
    throw std::invalid_argument("truncation order mismatch");
  if (c.is_zero())
    return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

BaseForm &BaseForm::operator+=(const BaseForm &o) {
  check(o);
  if (o.degree_ != degree_ && !o.is_zero())
    throw std::invalid_argument("adding forms of different degree");
  for (const auto &[w, c] : o.terms_)
    add_term(w, c);
  return *this;
}

BaseForm &BaseForm::operator-=(const BaseForm &o) {
  check(o);
  if (o.degree_ != degree_ && !o.is_zero())
    throw std::invalid_argument("adding forms of different degree");
  for (const auto &[w, c] : o.terms_)
    add_term(w, -c);
  return *this;
}

BaseForm BaseForm::operator-() const {
  BaseForm r = *this;
  for (auto &[w, c] : r.terms_)
    c = -c;
  return r;
}

BaseForm BaseForm::scaled(const TSeries &f) const {
  BaseForm r(n_, order_, degree_);
  for (const auto &[w, c] : terms_)
    r.add_term(w, c * f);
  return r;
}

BaseForm BaseForm::scaled(const Scalar &s) const {
  BaseForm r(n_, order_, degree_);
  for (const auto &[w, c] : terms_)
    r.add_term(w, c * s);
  return r;
}

BaseForm BaseForm::shift(int k) const {
  BaseForm r(n_, order_, degree_);
  for (const auto &[w, c] : terms_)
    r.add_term(w, c.shift(k));
  return r;
}

BaseForm BaseForm::retruncate(int order) const {
  BaseForm r(n_, order, degree_);
  for (const auto &[w, c] : terms_)
    r.add_term(w, c.retruncate(order));
  return r;
}

BaseForm BaseForm::d() const {
  if (degree_ + 1 > 2 * n_)
    return BaseForm(n_, order_, degree_ > 2 * n_ ? degree_ : 2 * n_);
  BaseForm r(n_, order_, degree_ + 1);
  for (const auto &[w, c] : terms_) {
    for (int v = 0; v < 2 * n_; ++v) {
      if (w & (Wedge{1} << v))
        continue;
      TSeries dc = c.derivative(v);
      if (dc.is_zero())
        continue;
      if (wedge_position(w, v) & 1)
        dc = -dc;
      r.add_term(w | (Wedge{1} << v), dc);
    }
  }
  return r;
}

BaseForm BaseForm::wedge(const BaseForm &o) const {
  check(o);
  if (degree_ + o.degree_ > 2 * n_)
    throw std::invalid_argument("form degree overflow");
  BaseForm r(n_, order_, degree_ + o.degree_);
  for (const auto &[wa, ca] : terms_)
    for (const auto &[wb, cb] : o.terms_) {
      int s = wedge_sign(wa, wb);
      if (s == 0)
        continue;
      TSeries c = ca * cb;
      r.add_term(wa | wb, s > 0 ? c : -c);
    }
  return r;
}

BaseForm BaseForm::contract(const std::vector<TSeries> &field) const {
  if (static_cast<int>(field.size()) != 2 * n_)
    throw std::invalid_argument("vector field dimension mismatch");
  if (degree_ == 0)
    return BaseForm(n_, order_, 0);
  BaseForm r(n_, order_, degree_ - 1);
  for (const auto &[w, c] : terms_)
    for (int v = 0; v < 2 * n_; ++v) {
      if (!(w & (Wedge{1} << v)) || field[v].is_zero())
        continue;
      TSeries term = c * field[v];
      if (wedge_position(w, v) & 1)
        term = -term;
      r.add_term(w & ~(Wedge{1} << v), term);
    }
  return r;
}

bool BaseForm::only_dx() const {
  Wedge ymask = ((Wedge{1} << n_) - 1) << n_;
  for (const auto &[w, c] : terms_)
    if (w & ymask)
      return false;
  return true;
}

bool BaseForm::no_dy_dy() const {
  Wedge ymask = ((Wedge{1} << n_) - 1) << n_;
  for (const auto &[w, c] : terms_)
    if (std::popcount(w & ymask) > 1)
      return false;
  return true;
}

BaseForm poincare_homotopy(const BaseForm &alpha) {
  if (alpha.degree() < 1)
    throw std::invalid_argument("homotopy needs a form of degree >= 1");
  if (!alpha.is_closed())
    throw std::invalid_argument("homotopy input is not closed");
  int n = alpha.n(), nv = 2 * n, N = alpha.order();
  BaseForm r(n, N, alpha.degree() - 1);
  int k = alpha.degree();
  for (const auto &[w, c] : alpha.terms()) {
    for (int v = 0; v < nv; ++v) {
      if (!(w & (Wedge{1} << v)))
        continue;
      int sign = (wedge_position(w, v) & 1) ? -1 : 1;
      TSeries out(nv, N);
      for (int j = 0; j <= N; ++j)
        for (const auto &[m, s] : c[j].terms()) {
          // contraction with z^v d/dz^v, then the radial integral 1/(deg + k)
          Scalar f = s / Scalar(m.degree() + k);
          if (sign < 0)
            f = -f;
          out[j].add_term(m.with(v, m[v] + 1), f);
        }
      r.add_term(w & ~(Wedge{1} << v), out);
    }
  }
  return r;
}

TSeries function_primitive(const BaseForm &alpha) {
  if (alpha.degree() != 1)
    throw std::invalid_argument("function primitive needs a 1-form");
  BaseForm f = poincare_homotopy(alpha);
  return f.coeff(0);
}

BaseForm dx_primitive(const BaseForm &alpha) {
  if (alpha.degree() != 2)
    throw std::invalid_argument("dx primitive needs a 2-form");
  if (!alpha.no_dy_dy())
    throw std::invalid_argument("2-form has dy^dy components");
  int n = alpha.n(), nv = 2 * n, N = alpha.order();
  BaseForm beta = poincare_homotopy(alpha);
  // The dy-part of beta is closed along the fibres x = const; remove it with
  // the fibrewise radial primitive F so that beta - dF has dx factors only.
  TSeries F(nv, N);
  for (int j = 0; j < n; ++j) {
    TSeries a = beta.coeff(Wedge{1} << (n + j));
    for (int k = 0; k <= N; ++k)
      for (const auto &[m, s] : a[k].terms()) {
        int ydeg = m.degree(n, nv);
        F[k].add_term(m.with(n + j, m[n + j] + 1), s / Scalar(ydeg + 1));
      }
  }
  BaseForm dF(n, N, 1);
  for (int v = 0; v < nv; ++v)
    dF.add_term(Wedge{1} << v, F.derivative(v));
  BaseForm out = beta - dF;
  if (!out.only_dx())
    throw std::logic_error("fibrewise primitive failed; the dy-part was not fibre-closed");
  return out;
}

} // namespace pdq
