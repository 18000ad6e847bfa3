#include "pdq/diffop.hpp"

#include <stdexcept>

namespace pdq {

Scalar falling(Mono alpha, Mono beta) {
  Scalar r(1);
  for (int v = 0; v < kMaxVars; ++v)
    if (beta[v] > 0)
      r *= falling(alpha[v], beta[v]);
  return r;
}

MultiDiffOp::MultiDiffOp(int nvars, int arity) : nvars_(nvars), arity_(arity) {
  if (arity < 0)
    throw std::invalid_argument("negative arity");
}

MultiDiffOp MultiDiffOp::multiplication(int nvars, int arity, const Poly &c) {
  MultiDiffOp op(nvars, arity);
  op.add_term(Slots(arity), c);
  return op;
}

void MultiDiffOp::check(const MultiDiffOp &o) const {
  if (nvars_ != o.nvars_ || arity_ != o.arity_)
    throw std::invalid_argument("operator shape mismatch");
}

void MultiDiffOp::add_term(const Slots &slots, const Poly &c) {
  if (static_cast<int>(slots.size()) != arity_)
    throw std::invalid_argument("slot count differs from arity");
  if (c.nvars() != nvars_)
    throw std::invalid_argument("coefficient has the wrong number of variables");
  if (c.is_zero())
    return;
  auto [it, inserted] = terms_.try_emplace(slots, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

Poly MultiDiffOp::coeff(const Slots &slots) const {
  auto it = terms_.find(slots);
  return it == terms_.end() ? Poly(nvars_) : it->second;
}

MultiDiffOp &MultiDiffOp::operator+=(const MultiDiffOp &o) {
  check(o);
  for (const auto &[s, c] : o.terms_)
    add_term(s, c);
  return *this;
}

MultiDiffOp &MultiDiffOp::operator-=(const MultiDiffOp &o) {
  check(o);
  for (const auto &[s, c] : o.terms_)
    add_term(s, -c);
  return *this;
}

MultiDiffOp MultiDiffOp::operator-() const {
  MultiDiffOp r = *this;
  for (auto &[s, c] : r.terms_)
    c = -c;
  return r;
}

MultiDiffOp MultiDiffOp::scaled(const Scalar &k) const {
  MultiDiffOp r(nvars_, arity_);
  for (const auto &[s, c] : terms_)
    r.add_term(s, c * k);
  return r;
}

MultiDiffOp MultiDiffOp::mul_poly(const Poly &p) const {
  MultiDiffOp r(nvars_, arity_);
  for (const auto &[s, c] : terms_)
    r.add_term(s, c * p);
  return r;
}

Poly MultiDiffOp::evaluate(const std::vector<Poly> &args) const {
  if (static_cast<int>(args.size()) != arity_)
    throw std::invalid_argument("argument count differs from arity");
  std::vector<std::map<Mono, Poly>> cache(arity_);
  Poly out(nvars_);
  for (const auto &[slots, c] : terms_) {
    Poly term = c;
    for (int i = 0; i < arity_ && !term.is_zero(); ++i) {
      auto it = cache[i].find(slots[i]);
      if (it == cache[i].end())
        it = cache[i].emplace(slots[i], args[i].derivative(slots[i])).first;
      term *= it->second;
    }
    out += term;
  }
  return out;
}

Poly MultiDiffOp::evaluate_monomials(const std::vector<Mono> &args) const {
  if (static_cast<int>(args.size()) != arity_)
    throw std::invalid_argument("argument count differs from arity");
  Poly out(nvars_);
  auto contribute = [&](const Slots &slots, const Poly &c) {
    Mono rest;
    Scalar w(1);
    for (int i = 0; i < arity_; ++i) {
      if (!slots[i].divides(args[i]))
        return;
      w *= falling(args[i], slots[i]);
      rest = rest + (args[i] - slots[i]);
    }
    out += c.mul_mono(rest, w);
  };
  std::size_t below = 1;
  for (Mono a : args)
    for (int v = 0; v < nvars_; ++v)
      below *= static_cast<std::size_t>(a[v] + 1);
  if (below >= terms_.size()) {
    for (const auto &[slots, c] : terms_)
      contribute(slots, c);
    return out;
  }
  Slots slots(arity_);
  auto rec = [&](auto &&self, int i) -> void {
    if (i == arity_) {
      auto it = terms_.find(slots);
      if (it != terms_.end())
        contribute(slots, it->second);
      return;
    }
    for_each_below(args[i], nvars_, [&](Mono b) {
      slots[i] = b;
      self(self, i + 1);
    });
  };
  rec(rec, 0);
  return out;
}

int MultiDiffOp::max_slot_order() const {
  int best = 0;
  for (const auto &[slots, c] : terms_)
    for (Mono m : slots)
      best = std::max(best, m.degree());
  return best;
}

int MultiDiffOp::max_coefficient_degree() const {
  int best = -1;
  for (const auto &[slots, c] : terms_)
    best = std::max(best, c.degree());
  return best;
}

StarProduct::StarProduct(int n, int order)
    : n_(n), order_(order), mu_(static_cast<std::size_t>(order + 1), MultiDiffOp(2 * n, 2)) {}

TSeries StarProduct::operator()(const TSeries &f, const TSeries &g) const {
  if (f.order() != order_ || g.order() != order_)
    throw std::invalid_argument("truncation order mismatch");
  TSeries out(nvars(), order_);
  for (int i = 0; i <= order_; ++i) {
    if (f[i].is_zero())
      continue;
    for (int j = 0; i + j <= order_; ++j) {
      if (g[j].is_zero())
        continue;
      for (int k = 0; i + j + k <= order_; ++k)
        out[i + j + k] += mu_[k].evaluate({f[i], g[j]});
    }
  }
  return out;
}

TSeries StarProduct::apply(const Poly &f, const Poly &g) const {
  TSeries out(nvars(), order_);
  for (int k = 0; k <= order_; ++k)
    out[k] = mu_[k].evaluate({f, g});
  return out;
}

TSeries StarProduct::on_monomials(Mono a, Mono b) const {
  TSeries out(nvars(), order_);
  for (int k = 0; k <= order_; ++k)
    out[k] = mu_[k].evaluate_monomials({a, b});
  return out;
}

TSeries StarProduct::bracket(const TSeries &f, const TSeries &g) const {
  TSeries diff = (*this)(f, g) - (*this)(g, f);
  TSeries out(nvars(), order_);
  for (int k = 0; k < order_; ++k)
    out[k] = diff[k + 1];
  return out;
}

} // namespace pdq
