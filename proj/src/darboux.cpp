#include "pdq/darboux.hpp"

#include "pdq/hochschild.hpp"
#include "pdq/literal.hpp"

#include <stdexcept>

namespace pdq {

namespace {

MultiDiffOp swapped(const MultiDiffOp &op) {
  MultiDiffOp out(op.nvars(), 2);
  for (const auto &[s, c] : op.terms())
    out.add_term({s[1], s[0]}, c);
  return out;
}

Wedge bit(int v) { return Wedge{1} << v; }

TSeries at_t0(const Poly &p, int order) { return TSeries(p, order); }

// Drops the t^0 coefficient and lowers every other power by one; the
// caller guarantees the t^0 coefficient vanishes.
BaseForm divide_by_t(const BaseForm &f) {
  BaseForm out(f.n(), f.order(), f.degree());
  for (const auto &[w, c] : f.terms()) {
    if (!c[0].is_zero())
      throw std::logic_error("form is not divisible by t");
    TSeries s(c.nvars(), c.order());
    for (int k = 1; k <= c.order(); ++k)
      s[k - 1] = c[k];
    out.add_term(w, s);
  }
  return out;
}

using Matrix = std::vector<std::vector<TSeries>>;

Matrix multiply(const Matrix &a, const Matrix &b) {
  std::size_t m = a.size();
  Matrix out(m, std::vector<TSeries>(m, TSeries(a[0][0].nvars(), a[0][0].order())));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (a[i][k].is_zero())
        continue;
      for (std::size_t j = 0; j < m; ++j)
        out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

} // namespace

DeformedBracket::DeformedBracket(int n, int order)
    : n_(n), order_(order), pi_(static_cast<std::size_t>(order + 1), MultiDiffOp(2 * n, 2)) {
  if (order < 0)
    throw std::invalid_argument("negative bracket order");
}

DeformedBracket DeformedBracket::standard(int n, int order) {
  DeformedBracket b(n, order);
  for (int i = 0; i < n; ++i) {
    b.pi_[0].add_term({Mono::unit(n + i), Mono::unit(i)}, Poly::constant(2 * n, Scalar(1)));
    b.pi_[0].add_term({Mono::unit(i), Mono::unit(n + i)}, Poly::constant(2 * n, Scalar(-1)));
  }
  return b;
}

DeformedBracket DeformedBracket::of_star_product(const StarProduct &mu) {
  if (mu.order() < 1)
    throw std::invalid_argument("a product truncated at t^0 carries no bracket");
  DeformedBracket b(mu.n(), mu.order() - 1);
  for (int k = 0; k <= b.order_; ++k)
    b.pi_[k] = mu[k + 1] - swapped(mu[k + 1]);
  return b;
}

TSeries DeformedBracket::operator()(const TSeries &f, const TSeries &g) const {
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
        if (!pi_[k].is_zero())
          out[i + j + k] += pi_[k].evaluate({f[i], g[j]});
    }
  }
  return out;
}

BracketReport validate_bracket(const DeformedBracket &b, int max_degree) {
  BracketReport rep;
  int n = b.n(), N = b.order(), nv = b.nvars();
  for (int k = 0; k <= N; ++k)
    if (b[k] != -swapped(b[k])) {
      rep.antisymmetric = false;
      rep.witness = "pi_" + std::to_string(k) + " is not antisymmetric";
      break;
    }
  if (b[0] != DeformedBracket::standard(n, N)[0]) {
    rep.standard_leading = false;
    if (rep.witness.empty())
      rep.witness = "pi_0 is not the standard Poisson bracket";
  }
  auto monos = monomials_up_to(nv, max_degree);
  auto s = [&](Mono m) { return TSeries(Poly::monomial(nv, m), N); };
  for (Mono a : monos)
    for (Mono c : monos)
      for (Mono e : monos) {
        if (!(a < c) || !(c < e))
          continue;
        TSeries f = s(a), g = s(c), h = s(e);
        TSeries jac = b(f, b(g, h)) + b(g, b(h, f)) + b(h, b(f, g));
        if (!jac.is_zero()) {
          rep.jacobi = false;
          if (rep.witness.empty())
            rep.witness = "Jacobi fails on (" + format_poly(f[0], n) + ", " + format_poly(g[0], n) +
                          ", " + format_poly(h[0], n) + ")";
          return rep;
        }
      }
  return rep;
}

DarbouxCoordinates chart_coordinates(int n, int order) {
  DarbouxCoordinates c;
  for (int i = 0; i < n; ++i) {
    c.x.push_back(TSeries::variable(2 * n, order, i));
    c.y.push_back(TSeries::variable(2 * n, order, n + i));
  }
  return c;
}

int darboux_valid_order(const DeformedBracket &b, const DarbouxCoordinates &c,
                        std::string *witness) {
  int n = b.n(), N = b.order(), nv = b.nvars();
  if (static_cast<int>(c.x.size()) != n || static_cast<int>(c.y.size()) != n)
    throw std::invalid_argument("coordinate system has the wrong size");
  int best = N + 1;
  auto consider = [&](const TSeries &rel, const std::string &what) {
    int v = rel.valuation();
    if (v < best) {
      best = v;
      if (witness)
        *witness = what + " = " + format_series(rel, n);
    }
  };
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      if (j < l) {
        consider(b(c.x[j], c.x[l]), "[x^" + std::to_string(j + 1) + ", x^" + std::to_string(l + 1) + "]");
        consider(b(c.y[j], c.y[l]), "[y^" + std::to_string(j + 1) + ", y^" + std::to_string(l + 1) + "]");
      }
      TSeries rel = b(c.y[j], c.x[l]);
      if (j == l)
        rel -= TSeries::constant(nv, N, Scalar(1));
      consider(rel, "[y^" + std::to_string(j + 1) + ", x^" + std::to_string(l + 1) + "] - delta");
    }
  return best;
}

bool x_lifts_in_O(const DarbouxCoordinates &c) {
  int n = static_cast<int>(c.x.size());
  for (const auto &x : c.x)
    for (int v = n; v < 2 * n; ++v)
      if (x.depends_on(v))
        return false;
  return true;
}

DarbouxCoordinates extend_darboux(const DeformedBracket &b, DarbouxCoordinates c,
                                  const std::vector<Poly> &potentials) {
  int n = b.n(), N = b.order();
  std::string why;
  int start = darboux_valid_order(b, c, &why);
  if (start == 0)
    throw std::invalid_argument("coordinates are not Darboux at order zero: " + why);
  for (int k = start; k <= N; ++k) {
    // Order-k defects X_jl = [x^_j, x^_l], Y_jl = [y^_j, x^_l] - delta_jl,
    // Z_jl = [y^_j, y^_l]; the corrections x^_j += t^k a_j, y^_j += t^k b_j
    // cancel them iff d(sum b_j dx_j - a_j dy_j) = alpha below.
    BaseForm alpha(n, N, 2);
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        Poly Y = b(c.y[j], c.x[l])[k];
        alpha.add_term(bit(j) | bit(n + l), at_t0(Y, N));
        if (l < j) {
          alpha.add_term(bit(l) | bit(j), at_t0(b(c.y[j], c.y[l])[k], N));
          alpha.add_term(bit(n + l) | bit(n + j), at_t0(b(c.x[j], c.x[l])[k], N));
        }
      }
    if (!alpha.is_closed())
      throw std::invalid_argument("defect form at order " + std::to_string(k) +
                                  " is not closed; the bracket violates Jacobi");
    BaseForm beta = alpha.no_dy_dy() ? dx_primitive(alpha) : poincare_homotopy(alpha);
    if (k < static_cast<int>(potentials.size()) && !potentials[k].is_zero())
      beta += BaseForm::function(n, TSeries(potentials[k], N)).d();
    for (int j = 0; j < n; ++j) {
      c.x[j][k] -= beta.coeff(bit(n + j))[0];
      c.y[j][k] += beta.coeff(bit(j))[0];
    }
  }
  if (darboux_valid_order(b, c, &why) != N + 1)
    throw std::logic_error("Darboux correction failed to verify: " + why);
  return c;
}

DarbouxCoordinates lift_darboux(const DeformedBracket &b, const std::vector<Poly> &potentials) {
  return extend_darboux(b, chart_coordinates(b.n(), b.order()), potentials);
}

TSeries exp_t_ad(const DeformedBracket &b, const TSeries &B, const TSeries &a) {
  TSeries sum = a, term = a;
  for (int m = 1; m <= b.order() && !term.is_zero(); ++m) {
    term = b(B, term).shift(1) * (Scalar(1) / Scalar(m));
    sum += term;
  }
  return sum;
}

TSeries inner_automorphism(const DeformedBracket &b, const DarbouxCoordinates &c1,
                           const DarbouxCoordinates &c2) {
  int n = b.n(), N = b.order(), nv = b.nvars();
  for (int j = 0; j < n; ++j)
    if (c1.x[j][0] != c2.x[j][0] || c1.y[j][0] != c2.y[j][0])
      throw std::invalid_argument("coordinate systems differ at order zero");
  TSeries B(nv, N);
  auto images = [&](const TSeries &BB) {
    DarbouxCoordinates out;
    for (int j = 0; j < n; ++j) {
      out.x.push_back(exp_t_ad(b, BB, c1.x[j]));
      out.y.push_back(exp_t_ad(b, BB, c1.y[j]));
    }
    return out;
  };
  for (int k = 1; k <= N; ++k) {
    DarbouxCoordinates cur = images(B);
    // A change t^{k-1} B' of B moves the images by t^k {B', z}, and
    // {B', x_j} = dB'/dy_j, {B', y_j} = -dB'/dx_j.
    BaseForm alpha(n, N, 1);
    for (int j = 0; j < n; ++j) {
      alpha.add_term(bit(n + j), at_t0((c2.x[j] - cur.x[j])[k], N));
      alpha.add_term(bit(j), at_t0(-(c2.y[j] - cur.y[j])[k], N));
    }
    if (!alpha.is_closed())
      throw std::invalid_argument("coordinate systems are not related by an inner automorphism");
    B[k - 1] += function_primitive(alpha)[0];
  }
  if (!(images(B) == c2))
    throw std::logic_error("inner automorphism failed to verify");
  return B;
}

bool is_psp(const StarProduct &mu) {
  for (int k = 1; k <= mu.order(); ++k)
    if (!is_strongly_polarized(mu[k]))
      return false;
  return true;
}

BaseForm form_of_coordinates(const DarbouxCoordinates &c) {
  int n = static_cast<int>(c.x.size());
  int N = c.x.at(0).order();
  BaseForm s(n, N, 1);
  for (int i = 0; i < n; ++i)
    s += BaseForm::function(n, c.x[i]).d().scaled(c.y[i]);
  return s.d();
}

BaseForm characteristic_form(const StarProduct &mu, const std::vector<Poly> &potentials,
                             DarbouxCoordinates *lift) {
  for (int k = 1; k <= mu.order(); ++k)
    if (!is_strongly_polarized(mu[k]))
      throw std::invalid_argument("not a polarized star product: mu_" + std::to_string(k) +
                                  " does not vanish on O in its first argument");
  DarbouxCoordinates c = lift_darboux(DeformedBracket::of_star_product(mu), potentials);
  if (!x_lifts_in_O(c))
    throw std::logic_error("Darboux lift of a polarized product left O");
  if (lift)
    *lift = c;
  return form_of_coordinates(c);
}

BaseForm form_from_potential(const std::vector<TSeries> &g) {
  int n = static_cast<int>(g.size());
  int N = g.at(0).order();
  BaseForm lambda(n, N, 1);
  for (int i = 0; i < n; ++i)
    lambda.add_term(bit(i), TSeries::variable(2 * n, N, n + i) + g[i].shift(1));
  return lambda.d();
}

FormalAutomorphism darboux_map(const BaseForm &omega_t) {
  int n = omega_t.n(), N = omega_t.order();
  if (omega_t.degree() != 2)
    throw std::invalid_argument("expected a 2-form");
  if (!omega_t.is_closed())
    throw std::invalid_argument("form is not closed");
  if (!omega_t.no_dy_dy())
    throw std::invalid_argument("form has dy^dy components, so P is not Lagrangian for it");
  BaseForm diff = omega_t - BaseForm::standard_symplectic(n, N);
  for (const auto &[w, c] : diff.terms())
    if (!c[0].is_zero())
      throw std::invalid_argument("form is not standard at order zero");
  BaseForm lambda = dx_primitive(diff);
  std::vector<TSeries> images;
  for (int i = 0; i < n; ++i)
    images.push_back(TSeries::variable(2 * n, N, i));
  for (int i = 0; i < n; ++i)
    images.push_back(TSeries::variable(2 * n, N, n + i) + lambda.coeff(bit(i)));
  FormalAutomorphism T(images);
  if (T.pullback(BaseForm::standard_symplectic(n, N)) != omega_t)
    throw std::logic_error("Darboux map failed to verify");
  return T;
}

FormalAutomorphism trivialize_pair(const BaseForm &omega_t) {
  int n = omega_t.n(), N = omega_t.order();
  FormalAutomorphism S = darboux_map(omega_t).inverse();
  if (S.pullback(omega_t) != BaseForm::standard_symplectic(n, N))
    throw std::logic_error("trivialization failed to verify");
  for (int i = 0; i < n; ++i)
    for (int v = n; v < 2 * n; ++v)
      if (S.images()[i].depends_on(v))
        throw std::logic_error("trivialization moved an x-coordinate out of O");
  return S;
}

OrbitStep lie_orbit_step(const BaseForm &omega_t, const FormalVectorField &X) {
  int n = omega_t.n();
  if (!omega_t.is_closed())
    throw std::invalid_argument("form is not closed");
  OrbitStep out;
  out.pulled = X.exp_t().pullback(omega_t);
  // Leading change is t L_X omega_t with L_X omega_t = d(i_X omega_t).
  BaseForm lie = omega_t.contract(X.components).d();
  BaseForm diff = out.pulled - omega_t;
  out.cartan_identity = true;
  for (Wedge w = 0; w < bit(2 * n); ++w)
    if (diff.coeff(w)[0] != Poly(2 * n) ||
        (omega_t.order() >= 1 && diff.coeff(w)[1] != lie.coeff(w)[0]))
      out.cartan_identity = false;
  bool along_p = true;
  for (int v = 0; v < n; ++v)
    if (!X.components[v].is_zero())
      along_p = false;
  if (along_p) {
    BaseForm theta = divide_by_t(dx_primitive(diff));
    if (omega_t + theta.d().shift(1) != out.pulled)
      throw std::logic_error("orbit potential failed to verify");
    out.theta = theta;
  }
  return out;
}

ChristoffelData transform_connection(const ChristoffelData &gamma_w, const FormalAutomorphism &T) {
  int n = gamma_w.n(), N = gamma_w.order(), m = 2 * n;
  if (T.n() != n || T.order() != N)
    throw std::invalid_argument("automorphism and connection live on different charts");
  const auto &w = T.images();
  Matrix J(m, std::vector<TSeries>(m)), K(m, std::vector<TSeries>(m));
  for (int d = 0; d < m; ++d)
    for (int b = 0; b < m; ++b) {
      J[d][b] = w[d].derivative(b);
      K[d][b] = -J[d][b];
      if (d == b)
        K[d][b] += TSeries::constant(m, N, Scalar(1));
    }
  // J = 1 - K with K = O(t), so J^{-1} = sum_p K^p.
  Matrix inv(m, std::vector<TSeries>(m, TSeries(m, N))), power = inv;
  for (int d = 0; d < m; ++d)
    inv[d][d] = power[d][d] = TSeries::constant(m, N, Scalar(1));
  for (int p = 1; p <= N; ++p) {
    power = multiply(power, K);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        inv[i][j] += power[i][j];
  }
  std::vector<TSeries> pulled(static_cast<std::size_t>(m * m * m));
  for (int e = 0; e < m; ++e)
    for (int f = 0; f < m; ++f)
      for (int d = 0; d < m; ++d)
        pulled[(e * m + f) * m + d] = T.pullback(gamma_w(e, f, d));
  ChristoffelData out(n, N);
  for (int b = 0; b < m; ++b)
    for (int c = b; c < m; ++c) {
      std::vector<TSeries> inner(m, TSeries(m, N));
      for (int d = 0; d < m; ++d) {
        inner[d] = w[d].derivative(b).derivative(c);
        for (int e = 0; e < m; ++e)
          for (int f = 0; f < m; ++f) {
            const TSeries &g = pulled[(e * m + f) * m + d];
            if (!g.is_zero())
              inner[d] += J[e][b] * J[f][c] * g;
          }
      }
      for (int a = 0; a < m; ++a) {
        TSeries v(m, N);
        for (int d = 0; d < m; ++d)
          v += inv[a][d] * inner[d];
        out.set(b, c, a, v);
      }
    }
  return out;
}

} // namespace pdq
