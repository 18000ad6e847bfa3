#include "pdq/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace pdq {

Poly::Poly(int nvars) : nvars_(nvars) {
  if (nvars < 0 || nvars > kMaxVars)
    throw std::invalid_argument("unsupported number of variables");
}

Poly Poly::constant(int nvars, const Scalar &c) {
  Poly p(nvars);
  p.add_term(Mono(), c);
  return p;
}

Poly Poly::variable(int nvars, int v) {
  if (v < 0 || v >= nvars)
    throw std::out_of_range("variable index out of range");
  return monomial(nvars, Mono::unit(v));
}

Poly Poly::monomial(int nvars, Mono m, const Scalar &c) {
  Poly p(nvars);
  p.add_term(m, c);
  return p;
}

void Poly::check(const Poly &o) const {
  if (nvars_ != o.nvars_)
    throw std::invalid_argument("polynomial dimension mismatch");
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Scalar Poly::coeff(Mono m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar(0) : it->second;
}

void Poly::add_term(Mono m, const Scalar &c) {
  if (c.is_zero())
    return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

int Poly::degree() const {
  int d = -1;
  for (const auto &[m, c] : terms_)
    d = std::max(d, m.degree());
  return d;
}

bool Poly::depends_on(int v) const {
  return std::any_of(terms_.begin(), terms_.end(), [v](const auto &kv) { return kv.first[v] > 0; });
}

Poly &Poly::operator+=(const Poly &o) {
  check(o);
  for (const auto &[m, c] : o.terms_)
    add_term(m, c);
  return *this;
}

Poly &Poly::operator-=(const Poly &o) {
  check(o);
  for (const auto &[m, c] : o.terms_)
    add_term(m, -c);
  return *this;
}

Poly operator*(const Poly &a, const Poly &b) {
  a.check(b);
  Poly r(a.nvars_);
  for (const auto &[ma, ca] : a.terms_)
    for (const auto &[mb, cb] : b.terms_)
      r.add_term(ma + mb, ca * cb);
  return r;
}

Poly &Poly::operator*=(const Poly &o) { return *this = *this * o; }

Poly &Poly::operator*=(const Scalar &c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto &[m, v] : terms_)
    v *= c;
  return *this;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto &[m, v] : r.terms_)
    v = -v;
  return r;
}

Poly Poly::mul_mono(Mono m, const Scalar &c) const {
  Poly r(nvars_);
  if (c.is_zero())
    return r;
  // packed addition never carries, so the shift preserves key order
  for (const auto &[mm, v] : terms_)
    r.terms_.emplace_hint(r.terms_.end(), mm + m, v * c);
  return r;
}

Poly Poly::derivative(int v) const {
  if (v < 0 || v >= nvars_)
    throw std::out_of_range("derivative index out of range");
  Poly r(nvars_);
  for (const auto &[m, c] : terms_) {
    int e = m[v];
    if (e == 0)
      continue;
    r.add_term(m.with(v, e - 1), c * Scalar(e));
  }
  return r;
}

Poly Poly::derivative(Mono alpha) const {
  Poly r(nvars_);
  for (const auto &[m, c] : terms_) {
    if (!alpha.divides(m))
      continue;
    Scalar f = c;
    for (int v = 0; v < nvars_; ++v)
      if (alpha[v] > 0)
        f *= falling(m[v], alpha[v]);
    r.add_term(m - alpha, f);
  }
  return r;
}

Poly Poly::at_zero(int v) const {
  Poly r(nvars_);
  for (const auto &[m, c] : terms_)
    if (m[v] == 0)
      r.add_term(m, c);
  return r;
}

Scalar falling(int m, int k) {
  long r = 1;
  for (int j = 0; j < k; ++j)
    r *= (m - j);
  return Scalar(r);
}

Scalar multi_factorial(Mono alpha) {
  Scalar r(1);
  for (int v = 0; v < kMaxVars; ++v)
    if (alpha[v] > 1)
      r *= factorial(alpha[v]);
  return r;
}

std::vector<Mono> monomials_in(const std::vector<int> &vars, int max_degree) {
  std::vector<Mono> out;
  std::vector<Mono> layer{Mono()};
  out.push_back(Mono());
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<Mono> next;
    for (Mono m : layer) {
      // extend only at or after the last used variable to avoid duplicates
      int last = -1;
      for (std::size_t k = 0; k < vars.size(); ++k)
        if (m[vars[k]] > 0)
          last = static_cast<int>(k);
      for (std::size_t k = std::max(last, 0); k < vars.size(); ++k)
        next.push_back(m.with(vars[k], m[vars[k]] + 1));
    }
    std::sort(next.begin(), next.end());
    for (Mono m : next)
      out.push_back(m);
    layer = std::move(next);
  }
  return out;
}

std::vector<Mono> monomials_up_to(int nvars, int max_degree) {
  std::vector<int> vars(nvars);
  for (int v = 0; v < nvars; ++v)
    vars[v] = v;
  return monomials_in(vars, max_degree);
}

} // namespace pdq
