#include "pdq/geometry.hpp"

#include "pdq/literal.hpp"

#include <stdexcept>

namespace pdq {

namespace {

// Darboux pairing pi_ae = (1/t)[zhat_a, zhat_e]: pi(y_j, x_j) = 1.
int pairing(int n, int a, int e) {
  if (a >= n && e == a - n)
    return 1;
  if (a < n && e == a + n)
    return -1;
  return 0;
}

TSeries omega_entry(const BaseForm &omega, int j, int k) {
  if (j == k)
    return TSeries(2 * omega.n(), omega.order());
  Wedge w = (Wedge{1} << j) | (Wedge{1} << k);
  TSeries c = omega.coeff(w);
  return j < k ? c : -c;
}

} // namespace

ChristoffelData::ChristoffelData(int n, int order)
    : n_(n), order_(order), g_(static_cast<std::size_t>(8 * n * n * n), TSeries(2 * n, order)) {
  if (n < 1 || 2 * n > kMaxVars)
    throw std::invalid_argument("chart half-dimension out of range");
}

void ChristoffelData::set(int i, int j, int k, const TSeries &value) {
  if (value.order() != order_ || value.nvars() != dim())
    throw std::invalid_argument("Christoffel entry has the wrong chart or order");
  g_.at(index(i, j, k)) = value;
  g_.at(index(j, i, k)) = value;
}

bool ChristoffelData::is_zero() const {
  for (const auto &s : g_)
    if (!s.is_zero())
      return false;
  return true;
}

ChristoffelData standard_flat_connection(int n, int order) { return ChristoffelData(n, order); }

CurvatureTensor::CurvatureTensor(const ChristoffelData &g) : dim_(g.dim()) {
  int m = dim_;
  r_.assign(static_cast<std::size_t>(m * m * m * m), TSeries(m, g.order()));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          TSeries v = g(l, b, a).derivative(k) - g(k, b, a).derivative(l);
          for (int c = 0; c < m; ++c)
            v += g(k, c, a) * g(l, b, c) - g(l, c, a) * g(k, b, c);
          r_[((a * m + b) * m + k) * m + l] = std::move(v);
        }
}

const TSeries &CurvatureTensor::operator()(int a, int b, int k, int l) const {
  return r_.at(((a * dim_ + b) * dim_ + k) * dim_ + l);
}

ConnectionReport validate_connection(const ChristoffelData &g, const BaseForm &omega) {
  if (omega.degree() != 2 || omega.n() != g.n() || omega.order() != g.order())
    throw std::invalid_argument("omega does not match the connection's chart");
  int n = g.n(), m = g.dim();
  auto names = coordinate_names(n);
  ConnectionReport rep;
  auto fail = [&](bool &flag, const std::string &what) {
    if (flag && rep.witness.empty())
      rep.witness = what;
    flag = false;
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        if (g(i, j, k) != g(j, i, k))
          fail(rep.torsion_free, "torsion: Gamma^" + names[k] + "_" + names[i] + names[j] +
                                     " != Gamma^" + names[k] + "_" + names[j] + names[i]);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        TSeries v = omega_entry(omega, j, k).derivative(i);
        for (int l = 0; l < m; ++l)
          v -= g(i, j, l) * omega_entry(omega, l, k) + g(i, k, l) * omega_entry(omega, j, l);
        if (!v.is_zero())
          fail(rep.preserves_omega, "(nabla_" + names[i] + " omega)(" + names[j] + "," +
                                        names[k] + ") = " + format_series(v, n));
      }
  for (int i = 0; i < m; ++i)
    for (int j = n; j < m; ++j)
      for (int k = 0; k < n; ++k)
        if (!g(i, j, k).is_zero())
          fail(rep.preserves_p, "nabla_" + names[i] + " d/d" + names[j] + " has d/d" + names[k] +
                                    " component " + format_series(g(i, j, k), n));
  CurvatureTensor R(g);
  for (int a = 0; a < m; ++a)
    for (int b = n; b < m; ++b)
      for (int k = n; k < m; ++k)
        for (int l = k + 1; l < m; ++l)
          if (!R(a, b, k, l).is_zero())
            fail(rep.flat_on_p, "R(d/d" + names[k] + ", d/d" + names[l] + ") d/d" + names[b] +
                                    " has d/d" + names[a] + " component " +
                                    format_series(R(a, b, k, l), n));
  return rep;
}

BaseForm classical_trace_form(const ChristoffelData &g) {
  int n = g.n(), m = g.dim();
  CurvatureTensor R(g);
  BaseForm tr(n, g.order(), 2);
  for (int k = 0; k < m; ++k)
    for (int l = k + 1; l < m; ++l) {
      TSeries c(m, g.order());
      for (int j = n; j < m; ++j)
        c += R(j, j, k, l);
      tr.add_term((Wedge{1} << k) | (Wedge{1} << l), c);
    }
  return tr;
}

LiftedConnection::LiftedConnection(const ChristoffelData &g) : gamma_(g) {
  int n = g.n(), m = g.dim(), N = g.order();
  wick_ = FiberElement(n, N, Ordering::wick);
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c)
      for (int d = c; d < m; ++d) {
        // (1/2) A_cd zc zd summed over ordered pairs = A_cd zc zd for c < d
        TSeries coef(m, N);
        for (int a = 0; a < m; ++a) {
          int p = pairing(n, a, d);
          if (p != 0)
            coef += g(b, c, a) * Scalar(p);
        }
        if (c == d)
          coef *= Scalar::ratio(1, 2);
        else {
          for (int a = 0; a < m; ++a) {
            int p = pairing(n, a, c);
            if (p != 0)
              coef += g(b, d, a) * Scalar(p);
          }
          coef *= Scalar::ratio(1, 2);
        }
        Mono q = Mono::unit(c) + Mono::unit(d);
        for (int k = 0; k <= N; ++k)
          wick_.add_term({k, q, Wedge{1} << b}, coef[k]);
      }
  weyl_ = FiberElement(n, N, Ordering::weyl);
  for (const auto &[key, c] : wick_.terms())
    weyl_.add_term(key, c);
}

FiberElement LiftedConnection::apply(const FiberElement &a) const {
  return a.d() + bracket_over_t(gamma_hat(a.tag()), a);
}

LiftedConnection lift_connection(const ChristoffelData &gamma) {
  ConnectionReport rep =
      validate_connection(gamma, BaseForm::standard_symplectic(gamma.n(), gamma.order()));
  if (!rep.ok())
    throw std::invalid_argument("invalid connection: " + rep.witness);
  return LiftedConnection(gamma);
}

CurvatureRealization curvature(const ChristoffelData &gamma) {
  LiftedConnection nabla = lift_connection(gamma);
  auto realize = [&](Ordering tag) {
    const FiberElement &gh = nabla.gamma_hat(tag);
    // (1/t) Gamma^ Gamma^ = (1/2)(1/t)[Gamma^, Gamma^] for a 1-form
    return gh.d() + bracket_over_t(gh, gh).scaled(Scalar::ratio(1, 2));
  };
  return {realize(Ordering::wick), realize(Ordering::weyl), classical_trace_form(gamma)};
}

} // namespace pdq
