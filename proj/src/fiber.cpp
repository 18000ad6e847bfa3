#include "pdq/fiber.hpp"

#include <limits>
#include <stdexcept>

namespace pdq {

namespace {

constexpr int kNone = std::numeric_limits<int>::max();

void accumulate(Poly &dst, const Poly &src, const Scalar &w) {
  for (const auto &[m, c] : src.terms())
    dst.add_term(m, w * c);
}

// Pairings between a variable of the left symbol and one of the right symbol.
// Wick contracts y^_i (left) with x^_i (right) with weight t. Weyl adds the
// opposite pairing with sign -1 and halves both weights.
struct Pairing {
  int left_var;
  int right_var;
  Scalar unit; // per-contraction factor besides t
};

std::vector<Pairing> pairings(int n, Ordering tag) {
  std::vector<Pairing> out;
  if (tag == Ordering::wick) {
    for (int i = 0; i < n; ++i)
      out.push_back({n + i, i, Scalar(1)});
  } else {
    for (int i = 0; i < n; ++i)
      out.push_back({n + i, i, Scalar::ratio(1, 2)});
    for (int i = 0; i < n; ++i)
      out.push_back({i, n + i, Scalar::ratio(-1, 2)});
  }
  return out;
}

// Calls fn(k, monomial, weight) for every contraction pattern of total order
// k in [kmin, kmax] between symbols a and b.
template <class Fn>
void for_each_contraction(const std::vector<Pairing> &pairs, Mono a, Mono b, int kmin, int kmax,
                          Fn &&fn) {
  std::size_t np = pairs.size();
  auto rec = [&](auto &&self, std::size_t s, int k, Mono ra, Mono rb, Scalar w) -> void {
    if (s == np) {
      if (k >= kmin)
        fn(k, ra + rb, w);
      return;
    }
    const Pairing &p = pairs[s];
    int cap = std::min(a[p.left_var], b[p.right_var]);
    Scalar wc = w;
    for (int c = 0; c <= cap && k + c <= kmax; ++c) {
      if (c > 0) {
        // falling factorials over c!: w_c = w_{c-1} * unit * (A-c+1)(B-c+1)/c
        wc *= p.unit * Scalar(a[p.left_var] - c + 1) * Scalar(b[p.right_var] - c + 1) /
              Scalar(c);
      }
      self(self, s + 1, k + c, ra.with(p.left_var, a[p.left_var] - c),
           rb.with(p.right_var, b[p.right_var] - c), wc);
    }
  };
  rec(rec, 0, 0, a, b, Scalar(1));
}

} // namespace

int t_degree(const FiberKey &key) { return key.fiber.degree() + 2 * key.tpow; }

FiberElement::FiberElement(int n, int order, Ordering tag) : n_(n), order_(order), tag_(tag) {
  if (n < 1 || 2 * n > kMaxVars)
    throw std::invalid_argument("chart half-dimension out of range");
  if (order < 0)
    throw std::invalid_argument("negative truncation order");
}

FiberElement FiberElement::scalar(int n, const TSeries &f, Ordering tag) {
  FiberElement r(n, f.order(), tag);
  for (int k = 0; k <= f.order(); ++k)
    r.add_term({k, Mono(), 0}, f[k]);
  return r;
}

FiberElement FiberElement::from_form(const BaseForm &f, Ordering tag) {
  FiberElement r(f.n(), f.order(), tag);
  for (const auto &[w, c] : f.terms())
    for (int k = 0; k <= f.order(); ++k)
      r.add_term({k, Mono(), w}, c[k]);
  return r;
}

FiberElement FiberElement::generator(int n, int order, int a, Ordering tag) {
  FiberElement r(n, order, tag);
  r.add_term({0, Mono::unit(a), 0}, Poly::constant(2 * n, Scalar(1)));
  return r;
}

FiberElement FiberElement::delta_tilde(int n, int order, Ordering tag) {
  FiberElement r(n, order, tag);
  for (int i = 0; i < n; ++i) {
    r.add_term({0, Mono::unit(n + i), Wedge{1} << i}, Poly::constant(2 * n, Scalar(1)));
    r.add_term({0, Mono::unit(i), Wedge{1} << (n + i)}, Poly::constant(2 * n, Scalar(-1)));
  }
  return r;
}

bool FiberElement::keeps(const FiberKey &key) const {
  return key.tpow >= 0 && key.tpow <= order_ && t_degree(key) <= t_bound();
}

void FiberElement::add_term(const FiberKey &key, const Poly &c) {
  if (c.is_zero() || !keeps(key))
    return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

Poly &FiberElement::slot(const FiberKey &key) {
  return terms_.try_emplace(key, Poly(2 * n_)).first->second;
}

Poly FiberElement::coeff(const FiberKey &key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Poly(2 * n_) : it->second;
}

void FiberElement::check(const FiberElement &o) const {
  if (n_ != o.n_)
    throw std::invalid_argument("fiber chart mismatch");
  if (order_ != o.order_)
    throw std::invalid_argument("truncation order mismatch");
  if (tag_ != o.tag_)
    throw std::invalid_argument("ordering tag mismatch");
}

FiberElement &FiberElement::operator+=(const FiberElement &o) {
  check(o);
  for (const auto &[k, c] : o.terms_)
    add_term(k, c);
  return *this;
}

FiberElement &FiberElement::operator-=(const FiberElement &o) {
  check(o);
  for (const auto &[k, c] : o.terms_)
    add_term(k, -c);
  return *this;
}

FiberElement FiberElement::operator-() const {
  FiberElement r = *this;
  for (auto &[k, c] : r.terms_)
    c = -c;
  return r;
}

FiberElement FiberElement::scaled(const Scalar &s) const {
  FiberElement r(n_, order_, tag_);
  if (s.is_zero())
    return r;
  for (const auto &[k, c] : terms_)
    r.terms_.emplace(k, c * s);
  return r;
}

FiberElement FiberElement::shift(int k) const {
  FiberElement r(n_, order_, tag_);
  for (const auto &[key, c] : terms_) {
    if (key.tpow + k < 0)
      throw std::domain_error("division by t of a term without t");
    r.add_term({key.tpow + k, key.fiber, key.wedge}, c);
  }
  return r;
}

FiberElement FiberElement::mul_function(const TSeries &f) const {
  if (f.order() != order_)
    throw std::invalid_argument("truncation order mismatch");
  FiberElement r(n_, order_, tag_);
  for (const auto &[key, c] : terms_)
    for (int k = 0; key.tpow + k <= order_; ++k)
      if (!f[k].is_zero())
        r.add_term({key.tpow + k, key.fiber, key.wedge}, c * f[k]);
  return r;
}

FiberElement operator*(const FiberElement &a, const FiberElement &b) {
  a.check(b);
  FiberElement r(a.n_, a.order_, a.tag_);
  auto pairs = pairings(a.n_, a.tag_);
  for (const auto &[ka, pa] : a.terms_)
    for (const auto &[kb, pb] : b.terms_) {
      int s = wedge_sign(ka.wedge, kb.wedge);
      if (s == 0)
        continue;
      int k0 = ka.tpow + kb.tpow;
      if (k0 > a.order_ || t_degree(ka) + t_degree(kb) > a.t_bound())
        continue;
      Poly prod = pa * pb;
      if (s < 0)
        prod = -prod;
      Wedge w = ka.wedge | kb.wedge;
      for_each_contraction(pairs, ka.fiber, kb.fiber, 0, a.order_ - k0,
                           [&](int k, Mono m, const Scalar &wt) {
                             FiberKey key{k0 + k, m, w};
                             if (!r.keeps(key))
                               return;
                             accumulate(r.slot(key), prod, wt);
                           });
    }
  std::erase_if(r.terms_, [](const auto &kv) { return kv.second.is_zero(); });
  return r;
}

FiberElement bracket_over_t(const FiberElement &a, const FiberElement &b) {
  a.check(b);
  FiberElement r(a.n_, a.order_, a.tag_);
  auto pairs = pairings(a.n_, a.tag_);
  for (const auto &[ka, pa] : a.terms_)
    for (const auto &[kb, pb] : b.terms_) {
      int s = wedge_sign(ka.wedge, kb.wedge);
      if (s == 0)
        continue;
      // The t^0 parts cancel in the graded commutator; the t^k part (k >= 1)
      // lands at t^(k-1).
      int k0 = ka.tpow + kb.tpow - 1;
      if (k0 + 1 > a.order_ + 1 || t_degree(ka) + t_degree(kb) - 2 > a.t_bound())
        continue;
      Poly prod = pa * pb;
      if (s < 0)
        prod = -prod;
      Wedge w = ka.wedge | kb.wedge;
      auto emit = [&](Scalar sign) {
        return [&, sign](int k, Mono m, const Scalar &wt) {
          FiberKey key{k0 + k, m, w};
          if (!r.keeps(key))
            return;
          accumulate(r.slot(key), prod, sign * wt);
        };
      };
      int kmax = a.order_ - k0;
      for_each_contraction(pairs, ka.fiber, kb.fiber, 1, kmax, emit(Scalar(1)));
      for_each_contraction(pairs, kb.fiber, ka.fiber, 1, kmax, emit(Scalar(-1)));
    }
  std::erase_if(r.terms_, [](const auto &kv) { return kv.second.is_zero(); });
  return r;
}

FiberElement FiberElement::d() const {
  FiberElement r(n_, order_, tag_);
  for (const auto &[key, c] : terms_)
    for (int v = 0; v < 2 * n_; ++v) {
      if (key.wedge & (Wedge{1} << v))
        continue;
      Poly dc = c.derivative(v);
      if (dc.is_zero())
        continue;
      if (wedge_position(key.wedge, v) & 1)
        dc = -dc;
      r.add_term({key.tpow, key.fiber, key.wedge | (Wedge{1} << v)}, dc);
    }
  return r;
}

FiberElement FiberElement::delta() const {
  FiberElement r(n_, order_, tag_);
  for (const auto &[key, c] : terms_)
    for (int v = 0; v < 2 * n_; ++v) {
      int e = key.fiber[v];
      if (e == 0 || (key.wedge & (Wedge{1} << v)))
        continue;
      Scalar w(e);
      if (wedge_position(key.wedge, v) & 1)
        w = -w;
      r.add_term({key.tpow, key.fiber.with(v, e - 1), key.wedge | (Wedge{1} << v)}, c * w);
    }
  return r;
}

FiberElement FiberElement::delta_star() const {
  FiberElement r(n_, order_, tag_);
  for (const auto &[key, c] : terms_)
    for (int v = 0; v < 2 * n_; ++v) {
      if (!(key.wedge & (Wedge{1} << v)))
        continue;
      Poly term = c;
      if (wedge_position(key.wedge, v) & 1)
        term = -term;
      r.add_term({key.tpow, key.fiber.with(v, key.fiber[v] + 1), key.wedge & ~(Wedge{1} << v)},
                 term);
    }
  return r;
}

FiberElement FiberElement::delta_inverse() const {
  FiberElement r = delta_star();
  for (auto &[key, c] : r.terms_)
    c *= Scalar(1) / Scalar(key.fiber.degree() + wedge_degree(key.wedge));
  return r;
}

TSeries FiberElement::sigma() const {
  TSeries s(2 * n_, order_);
  for (const auto &[key, c] : terms_)
    if (key.wedge == 0 && key.fiber.is_one())
      s[key.tpow] += c;
  return s;
}

BaseForm FiberElement::scalar_form(int degree) const {
  BaseForm f(n_, order_, degree);
  for (const auto &[key, c] : terms_)
    if (key.fiber.is_one() && wedge_degree(key.wedge) == degree) {
      TSeries s(2 * n_, order_);
      s[key.tpow] = c;
      f.add_term(key.wedge, s);
    }
  return f;
}

FiberElement FiberElement::reorder(Ordering target) const {
  if (target == tag_)
    return *this;
  // wick -> weyl symbol map is exp(-(t/2) sum d/dx^_i d/dy^_i); the inverse
  // flips the sign.
  Scalar unit = tag_ == Ordering::wick ? Scalar::ratio(-1, 2) : Scalar::ratio(1, 2);
  std::vector<Pairing> diag;
  for (int i = 0; i < n_; ++i)
    diag.push_back({i, n_ + i, unit});
  FiberElement r(n_, order_, target);
  for (const auto &[key, c] : terms_) {
    // the pairing enumerator reduces both sides; feed the symbol as both
    // arguments restricted to the relevant variables
    Mono xs, ys;
    for (int i = 0; i < n_; ++i) {
      xs = xs.with(i, key.fiber[i]);
      ys = ys.with(n_ + i, key.fiber[n_ + i]);
    }
    for_each_contraction(diag, xs, ys, 0, order_ - key.tpow,
                         [&](int k, Mono m, const Scalar &wt) {
                           FiberKey nk{key.tpow + k, m, key.wedge};
                           if (r.keeps(nk))
                             accumulate(r.slot(nk), c, wt);
                         });
  }
  std::erase_if(r.terms_, [](const auto &kv) { return kv.second.is_zero(); });
  return r;
}

int FiberElement::ft_degree() const {
  int best = kNone;
  for (const auto &[key, c] : terms_)
    best = std::min(best, t_degree(key));
  return best;
}

int FiberElement::fp_degree() const {
  int best = kNone;
  for (const auto &[key, c] : terms_)
    best = std::min(best, key.fiber.degree(0, n_));
  return best;
}

int FiberElement::max_fiber_degree() const {
  int best = -1;
  for (const auto &[key, c] : terms_)
    best = std::max(best, key.fiber.degree());
  return best;
}

bool FiberElement::has_wedge_degree_only(int k) const {
  for (const auto &[key, c] : terms_)
    if (wedge_degree(key.wedge) != k)
      return false;
  return true;
}

FiberElement FiberElement::filtered(const std::function<bool(const FiberKey &)> &keep) const {
  FiberElement r(n_, order_, tag_);
  for (const auto &[key, c] : terms_)
    if (keep(key))
      r.terms_.emplace(key, c);
  return r;
}

FiberElement FiberElement::t_truncated(int bound) const {
  return filtered([bound](const FiberKey &k) { return t_degree(k) <= bound; });
}

TSeries sigma_of_product(const FiberElement &a, const FiberElement &b) {
  if (a.n() != b.n() || a.order() != b.order() || a.tag() != b.tag())
    throw std::invalid_argument("fiber operand mismatch");
  int n = a.n(), N = a.order();
  TSeries out(2 * n, N);
  if (a.tag() == Ordering::wick) {
    // only y^-monomials on the left fully contract against equal x^-monomials
    // on the right: sigma = sum_alpha t^|alpha| alpha! a[y^alpha] b[x^alpha]
    std::map<std::pair<int, std::uint64_t>, const Poly *> right;
    for (const auto &[kb, pb] : b.terms())
      if (kb.wedge == 0 && kb.fiber.degree(n, 2 * n) == 0)
        right[{kb.tpow, kb.fiber.bits()}] = &pb;
    for (const auto &[ka, pa] : a.terms()) {
      if (ka.wedge != 0 || ka.fiber.degree(0, n) != 0)
        continue;
      Mono alpha;
      Scalar fact(1);
      for (int i = 0; i < n; ++i) {
        alpha = alpha.with(i, ka.fiber[n + i]);
        fact *= factorial(ka.fiber[n + i]);
      }
      int k0 = ka.tpow + alpha.degree();
      for (int kb = 0; k0 + kb <= N; ++kb) {
        auto it = right.find({kb, alpha.bits()});
        if (it != right.end())
          out[k0 + kb] += (pa * *it->second) * fact;
      }
    }
    return out;
  }
  return (a * b).sigma();
}

} // namespace pdq
