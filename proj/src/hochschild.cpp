#include "pdq/hochschild.hpp"

#include "pdq/linsolve.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pdq {

namespace {

// Visits every decomposition gamma = pieces[0] + ... + pieces[parts-1] with
// the multinomial weight gamma! / prod pieces!.
template <class Fn> void for_each_split(Mono gamma, int parts, int nvars, Fn &&fn) {
  std::vector<Mono> pieces(static_cast<std::size_t>(parts));
  auto rec = [&](auto &&self, int i, Mono rest, const Scalar &w) -> void {
    if (i == parts - 1) {
      pieces[i] = rest;
      fn(pieces, w);
      return;
    }
    for_each_below(rest, nvars, [&](Mono b) {
      pieces[i] = b;
      self(self, i + 1, rest - b, w * falling(rest, b) / multi_factorial(b));
    });
  };
  rec(rec, 0, gamma, Scalar(1));
}

Scalar binom(Mono alpha, Mono beta) { return falling(alpha, beta) / multi_factorial(beta); }

int total_order(const Slots &s) {
  int d = 0;
  for (Mono m : s)
    d += m.degree();
  return d;
}

int max_total_order(const MultiDiffOp &op) {
  int best = 0;
  for (const auto &[s, c] : op.terms())
    best = std::max(best, total_order(s));
  return best;
}

MultiDiffOp derivative_op(int nvars, Mono gamma, const Poly &c) {
  MultiDiffOp op(nvars, 1);
  op.add_term({gamma}, c);
  return op;
}

void require_arity(const MultiDiffOp &op, int arity, const char *what) {
  if (op.arity() != arity)
    throw std::invalid_argument(std::string(what) + " has the wrong arity");
}

// Linear system sum_j u_j L(e_j) = target over the coefficient space of a
// finite family of operators e_j, split by coefficient monomial. L(e_j) must
// have constant coefficients, so rows for distinct monomials never interact.
// Only rows accepted by keep are imposed.
template <class Keep>
std::optional<std::vector<std::pair<Mono, std::vector<Scalar>>>>
solve_by_monomial(const std::vector<MultiDiffOp> &images, const MultiDiffOp &target, Keep keep) {
  std::map<Slots, SparseSystem::Row> rows;
  for (int j = 0; j < static_cast<int>(images.size()); ++j)
    for (const auto &[slots, c] : images[j].terms())
      if (keep(slots))
        rows[slots][j] = c.constant_term();
  std::set<Mono> monos;
  for (const auto &[slots, c] : target.terms())
    if (keep(slots))
      for (const auto &[m, v] : c.terms())
        monos.insert(m);
  std::vector<std::pair<Mono, std::vector<Scalar>>> out;
  int ncols = static_cast<int>(images.size());
  for (Mono m : monos) {
    for (const auto &[slots, c] : target.terms())
      if (keep(slots) && !rows.contains(slots) && !c.coeff(m).is_zero())
        return std::nullopt;
    SparseSystem sys(ncols);
    for (const auto &[slots, row] : rows)
      if (!sys.add_row(row, target.coeff(slots).coeff(m)))
        return std::nullopt;
    auto sol = sys.solve();
    if (!sol)
      return std::nullopt;
    out.emplace_back(m, std::move(*sol));
  }
  return out;
}

} // namespace

MultiDiffOp left_compose(const MultiDiffOp &a, const MultiDiffOp &p) {
  require_arity(a, 1, "outer operator");
  if (a.nvars() != p.nvars())
    throw std::invalid_argument("operator shape mismatch");
  int k = p.arity(), nv = p.nvars();
  MultiDiffOp out(nv, k);
  for (const auto &[ga, e] : a.terms()) {
    Mono gamma = ga[0];
    for (const auto &[slots, c] : p.terms())
      for_each_split(gamma, k + 1, nv, [&](const std::vector<Mono> &pieces, const Scalar &w) {
        Poly coef = c.derivative(pieces[0]);
        if (coef.is_zero())
          return;
        Slots s = slots;
        for (int i = 0; i < k; ++i)
          s[i] = s[i] + pieces[i + 1];
        out.add_term(s, e * coef * w);
      });
  }
  return out;
}

MultiDiffOp compose(const MultiDiffOp &a, const MultiDiffOp &b) {
  require_arity(b, 1, "inner operator");
  return left_compose(a, b);
}

MultiDiffOp precompose(const MultiDiffOp &p, int slot, const MultiDiffOp &a) {
  require_arity(a, 1, "inserted operator");
  if (slot < 0 || slot >= p.arity() || a.nvars() != p.nvars())
    throw std::invalid_argument("bad slot or operator shape");
  int nv = p.nvars();
  MultiDiffOp out(nv, p.arity());
  for (const auto &[slots, c] : p.terms())
    for (const auto &[ga, e] : a.terms())
      for_each_below(slots[slot], nv, [&](Mono beta) {
        Poly de = e.derivative(beta);
        if (de.is_zero())
          return;
        Slots s = slots;
        s[slot] = (slots[slot] - beta) + ga[0];
        out.add_term(s, c * de * binom(slots[slot], beta));
      });
  return out;
}

MultiDiffOp hochschild_d(const MultiDiffOp &nu) {
  int k = nu.arity(), nv = nu.nvars();
  MultiDiffOp out(nv, k + 1);
  Scalar last = (k + 1) % 2 == 0 ? Scalar(1) : Scalar(-1);
  for (const auto &[slots, c] : nu.terms()) {
    Slots first{Mono()};
    first.insert(first.end(), slots.begin(), slots.end());
    out.add_term(first, c);
    for (int i = 1; i <= k; ++i) {
      Scalar sign = i % 2 == 0 ? Scalar(1) : Scalar(-1);
      Mono alpha = slots[i - 1];
      for_each_below(alpha, nv, [&](Mono beta) {
        Slots s;
        s.reserve(static_cast<std::size_t>(k + 1));
        s.insert(s.end(), slots.begin(), slots.begin() + (i - 1));
        s.push_back(beta);
        s.push_back(alpha - beta);
        s.insert(s.end(), slots.begin() + i, slots.end());
        out.add_term(s, c * (sign * binom(alpha, beta)));
      });
    }
    Slots tail = slots;
    tail.push_back(Mono());
    out.add_term(tail, c * last);
  }
  return out;
}

MultiDiffOp alternate(const MultiDiffOp &nu) {
  int k = nu.arity();
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  MultiDiffOp out(nu.nvars(), k);
  Scalar norm = Scalar(1) / factorial(k);
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j])
          ++inversions;
    Scalar w = inversions % 2 == 0 ? norm : -norm;
    for (const auto &[slots, c] : nu.terms()) {
      Slots s(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j)
        s[perm[j]] = slots[j];
      out.add_term(s, c * w);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool has_y_derivative(Mono alpha, int n) { return alpha.degree(n, 2 * n) > 0; }

bool is_polarized(const MultiDiffOp &nu) {
  int n = nu.nvars() / 2;
  for (const auto &[slots, c] : nu.terms())
    if (std::none_of(slots.begin(), slots.end(), [&](Mono m) { return has_y_derivative(m, n); }))
      return false;
  return true;
}

bool is_strongly_polarized(const MultiDiffOp &nu) {
  int n = nu.nvars() / 2;
  for (const auto &[slots, c] : nu.terms())
    if (std::none_of(slots.begin(), slots.end() - (slots.empty() ? 0 : 1),
                     [&](Mono m) { return has_y_derivative(m, n); }))
      return false;
  return true;
}

bool is_normalized(const MultiDiffOp &nu) {
  for (const auto &[slots, c] : nu.terms())
    for (Mono m : slots)
      if (m.is_one())
        return false;
  return true;
}

DiffOpSeries::DiffOpSeries(int nvars, int order)
    : nvars_(nvars), order_(order), d_(static_cast<std::size_t>(order + 1), MultiDiffOp(nvars, 1)) {}

DiffOpSeries DiffOpSeries::identity(int nvars, int order) {
  DiffOpSeries D(nvars, order);
  D.d_[0] = MultiDiffOp::multiplication(nvars, 1, Poly::constant(nvars, Scalar(1)));
  return D;
}

DiffOpSeries DiffOpSeries::exp(const MultiDiffOp &X, int tpow, int order) {
  require_arity(X, 1, "exponent");
  if (tpow < 1)
    throw std::invalid_argument("exponent must carry a positive power of t");
  DiffOpSeries D = identity(X.nvars(), order);
  MultiDiffOp power = D.d_[0];
  for (int j = 1; j * tpow <= order; ++j) {
    power = compose(X, power).scaled(Scalar(1) / Scalar(j));
    D.d_[j * tpow] += power;
  }
  return D;
}

DiffOpSeries DiffOpSeries::unit_plus(const MultiDiffOp &b, int tpow, int order) {
  require_arity(b, 1, "correction");
  DiffOpSeries D = identity(b.nvars(), order);
  if (tpow < 1)
    throw std::invalid_argument("correction must carry a positive power of t");
  if (tpow <= order)
    D.d_[tpow] += b;
  return D;
}

void DiffOpSeries::check(const DiffOpSeries &o) const {
  if (nvars_ != o.nvars_ || order_ != o.order_)
    throw std::invalid_argument("operator series shape mismatch");
}

bool DiffOpSeries::is_unipotent() const {
  return d_.at(0) == MultiDiffOp::multiplication(nvars_, 1, Poly::constant(nvars_, Scalar(1)));
}

bool DiffOpSeries::is_identity() const { return *this == identity(nvars_, order_); }

bool DiffOpSeries::identical_on_O() const {
  for (int k = 1; k <= order_; ++k)
    if (!is_polarized(d_[k]))
      return false;
  return true;
}

DiffOpSeries operator*(const DiffOpSeries &a, const DiffOpSeries &b) {
  a.check(b);
  DiffOpSeries out(a.nvars_, a.order_);
  for (int i = 0; i <= a.order_; ++i)
    for (int j = 0; i + j <= a.order_; ++j)
      if (!a.d_[i].is_zero() && !b.d_[j].is_zero())
        out.d_[i + j] += compose(a.d_[i], b.d_[j]);
  return out;
}

DiffOpSeries DiffOpSeries::inverse() const {
  if (!is_unipotent())
    throw std::invalid_argument("operator series does not start with 1");
  // (1 + U)^{-1} = sum_j (-U)^j, and U^j starts at t^j.
  DiffOpSeries minus_u = *this;
  minus_u.d_[0] = MultiDiffOp(nvars_, 1);
  for (int k = 1; k <= order_; ++k)
    minus_u.d_[k] = -minus_u.d_[k];
  DiffOpSeries sum = identity(nvars_, order_), power = sum;
  for (int j = 1; j <= order_; ++j) {
    power = power * minus_u;
    for (int k = j; k <= order_; ++k)
      sum.d_[k] += power.d_[k];
  }
  return sum;
}

TSeries DiffOpSeries::apply(const TSeries &f) const {
  if (f.order() != order_ || f.nvars() != nvars_)
    throw std::invalid_argument("series shape mismatch");
  TSeries out(nvars_, order_);
  for (int i = 0; i <= order_; ++i)
    for (int j = 0; i + j <= order_; ++j)
      if (!f[j].is_zero())
        out[i + j] += d_[i].evaluate({f[j]});
  return out;
}

StarProduct apply_gauge(const DiffOpSeries &D, const StarProduct &mu) {
  if (!D.is_unipotent())
    throw std::invalid_argument("gauge operator must start with 1");
  if (D.order() != mu.order() || D.nvars() != mu.nvars())
    throw std::invalid_argument("gauge operator and product have different shapes");
  int N = mu.order(), nv = mu.nvars();
  // P_k = sum_{j+l+m=k} mu_j(D_l ., D_m .)
  std::vector<MultiDiffOp> P(static_cast<std::size_t>(N + 1), MultiDiffOp(nv, 2));
  for (int j = 0; j <= N; ++j) {
    if (mu[j].is_zero())
      continue;
    for (int l = 0; j + l <= N; ++l) {
      if (D[l].is_zero())
        continue;
      MultiDiffOp left = l == 0 ? mu[j] : precompose(mu[j], 0, D[l]);
      for (int m = 0; j + l + m <= N; ++m)
        if (!D[m].is_zero())
          P[j + l + m] += m == 0 ? left : precompose(left, 1, D[m]);
    }
  }
  DiffOpSeries inv = D.inverse();
  StarProduct out(mu.n(), N);
  for (int i = 0; i <= N; ++i) {
    if (inv[i].is_zero())
      continue;
    for (int s = 0; i + s <= N; ++s)
      out[i + s] += i == 0 ? P[s] : left_compose(inv[i], P[s]);
  }
  return out;
}

MultiDiffOp split_composite(const MultiDiffOp &nu) {
  require_arity(nu, 2, "cochain");
  int nv = nu.nvars(), n = nv / 2;
  MultiDiffOp b(nv, 1);
  for (const auto &[slots, c] : nu.terms()) {
    Mono a = slots[0], e = slots[1];
    bool a_pure_x = !a.is_one() && !has_y_derivative(a, n);
    bool e_pure_y = !e.is_one() && e.degree(0, n) == 0;
    if (a_pure_x && e_pure_y)
      b.add_term({a + e}, c);
  }
  return b;
}

MultiDiffOp solve_coboundary(const MultiDiffOp &nu, CoboundaryGoal goal, bool polarized_b) {
  require_arity(nu, 2, "cochain");
  int nv = nu.nvars(), n = nv / 2;
  auto meets = [&](const MultiDiffOp &b) {
    MultiDiffOp r = nu + hochschild_d(b);
    return goal == CoboundaryGoal::strongly_polarized ? is_strongly_polarized(r)
                                                      : r == alternate(nu);
  };
  if (goal == CoboundaryGoal::strongly_polarized) {
    if (is_strongly_polarized(nu))
      return MultiDiffOp(nv, 1);
    MultiDiffOp b = split_composite(nu);
    if (meets(b))
      return b;
  } else if (nu == alternate(nu)) {
    return MultiDiffOp(nv, 1);
  }

  std::vector<Mono> columns;
  for (Mono g : monomials_up_to(nv, max_total_order(nu)))
    if (!polarized_b || has_y_derivative(g, n))
      columns.push_back(g);
  std::vector<MultiDiffOp> images;
  images.reserve(columns.size());
  for (Mono g : columns)
    images.push_back(hochschild_d(derivative_op(nv, g, Poly::constant(nv, Scalar(1)))));

  MultiDiffOp target = goal == CoboundaryGoal::strongly_polarized ? -nu : alternate(nu) - nu;
  auto keep = [&](const Slots &s) {
    return goal == CoboundaryGoal::kill_commutative_part || !has_y_derivative(s[0], n);
  };
  auto sol = solve_by_monomial(images, target, keep);
  if (!sol)
    throw InfeasibleCoboundary("no coboundary of the required shape exists");
  MultiDiffOp b(nv, 1);
  for (const auto &[m, u] : *sol)
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (!u[j].is_zero())
        b.add_term({columns[j]}, Poly::monomial(nv, m, u[j]));
  if (!meets(b))
    throw std::logic_error("coboundary solution failed verification");
  return b;
}

namespace {

// Vector field X (components only along `directions`) whose exp(t^{k-1} X)
// cancels the antisymmetric residual pi against mu_1. Coefficients up to
// degree deg(pi) + 1 are tried.
std::optional<MultiDiffOp> solve_vector_field(const MultiDiffOp &mu1, const MultiDiffOp &pi,
                                              const std::vector<int> &directions) {
  int nv = mu1.nvars();
  int deg = std::max(pi.max_coefficient_degree(), 0) + 1 + std::max(mu1.max_coefficient_degree(), 0);
  std::vector<MultiDiffOp> fields;
  for (int v : directions)
    for (Mono m : monomials_up_to(nv, deg))
      fields.push_back(derivative_op(nv, Mono::unit(v), Poly::monomial(nv, m)));
  // Alt(mu1(X., .) + mu1(., X.) - X mu1) is linear in X; assemble it per
  // unknown and solve over (slots, coefficient monomial) rows.
  std::map<std::pair<Slots, Mono>, SparseSystem::Row> rows;
  for (int j = 0; j < static_cast<int>(fields.size()); ++j) {
    const MultiDiffOp &X = fields[j];
    MultiDiffOp change =
        alternate(precompose(mu1, 0, X) + precompose(mu1, 1, X) - left_compose(X, mu1));
    for (const auto &[slots, c] : change.terms())
      for (const auto &[m, v] : c.terms())
        rows[{slots, m}][j] = v;
  }
  SparseSystem sys(static_cast<int>(fields.size()));
  for (const auto &[slots, c] : pi.terms())
    for (const auto &[m, v] : c.terms())
      if (!rows.contains({slots, m}))
        return std::nullopt;
  for (const auto &[key, row] : rows)
    if (!sys.add_row(row, -pi.coeff(key.first).coeff(key.second)))
      return std::nullopt;
  auto sol = sys.solve();
  if (!sol)
    return std::nullopt;
  MultiDiffOp X(nv, 1);
  for (std::size_t j = 0; j < fields.size(); ++j)
    if (!(*sol)[j].is_zero())
      X += fields[j].scaled((*sol)[j]);
  return X;
}

} // namespace

EquivalenceResult equivalence_search(const StarProduct &mu, const StarProduct &mu_tilde,
                                     bool identical_on_O) {
  if (mu.n() != mu_tilde.n() || mu.order() != mu_tilde.order())
    throw std::invalid_argument("products live on different charts or orders");
  int n = mu.n(), N = mu.order(), nv = mu.nvars();
  if (mu[0] != mu_tilde[0])
    throw std::invalid_argument("products differ at order 0");
  if (N >= 1 && alternate(mu[1]) != alternate(mu_tilde[1]))
    throw std::invalid_argument("products have different order-t commutators");

  std::vector<int> directions;
  for (int v = identical_on_O ? n : 0; v < nv; ++v)
    directions.push_back(v);

  EquivalenceResult res;
  res.D = DiffOpSeries::identity(nv, N);
  auto fail = [&](int k, MultiDiffOp residual, std::string why) {
    res.found = false;
    res.obstruction_order = k;
    res.obstruction = std::move(residual);
    res.reason = std::move(why);
    return res;
  };
  for (int k = 1; k <= N; ++k) {
    StarProduct cur = apply_gauge(res.D, mu_tilde);
    MultiDiffOp nu = cur[k] - mu[k];
    if (nu.is_zero())
      continue;
    if (!hochschild_d(nu).is_zero())
      return fail(k, nu, "residual is not a Hochschild cocycle");
    MultiDiffOp pi = alternate(nu);
    if (!pi.is_zero()) {
      if (k == 1)
        return fail(k, nu, "order-t residual is not commutative");
      auto X = solve_vector_field(cur[1], pi, directions);
      if (!X)
        return fail(k, nu,
                    identical_on_O
                        ? "antisymmetric residual is not removable by a vector field along P"
                        : "antisymmetric residual is not removable by a vector field");
      res.D = res.D * DiffOpSeries::exp(*X, k - 1, N);
      ++res.vector_field_steps;
      nu = apply_gauge(res.D, mu_tilde)[k] - mu[k];
      if (!alternate(nu).is_zero())
        return fail(k, nu, "vector-field step left an antisymmetric residual");
      if (nu.is_zero())
        continue;
    }
    MultiDiffOp b;
    try {
      b = solve_coboundary(nu, CoboundaryGoal::kill_commutative_part, identical_on_O);
    } catch (const InfeasibleCoboundary &) {
      return fail(k, nu, "commutative residual is not the coboundary of an admissible operator");
    }
    res.D = res.D * DiffOpSeries::unit_plus(b, k, N);
  }
  if (apply_gauge(res.D, mu_tilde) != mu)
    throw std::logic_error("equivalence search produced a gauge that does not re-verify");
  res.found = true;
  return res;
}

Normalization normalize_to_psp(const StarProduct &mu) {
  int N = mu.order(), nv = mu.nvars();
  for (int k = 1; k <= N; ++k)
    if (!is_polarized(mu[k]))
      throw std::invalid_argument("product is not weakly polarized at order " +
                                  std::to_string(k));
  Normalization out{DiffOpSeries::identity(nv, N), mu};
  for (int k = 1; k <= N; ++k) {
    if (is_strongly_polarized(out.product[k]))
      continue;
    MultiDiffOp b =
        solve_coboundary(out.product[k], CoboundaryGoal::strongly_polarized, true);
    out.D = out.D * DiffOpSeries::unit_plus(b, k, N);
    out.product = apply_gauge(out.D, mu);
  }
  return out;
}

} // namespace pdq
