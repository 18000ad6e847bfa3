#include "pdq/engine.hpp"

#include "pdq/literal.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pdq {

namespace {

// Each fixed-point step below settles at least one more T-degree, so
// 2N+2 steps reach the truncation bound; two spare steps detect stability.
int iteration_cap(int order) { return 2 * order + 4; }

FiberElement half_bracket(const FiberElement &a) {
  return bracket_over_t(a, a).scaled(Scalar::ratio(1, 2));
}

BaseForm scalar_curvature(const FiberElement &omega_elem, const char *which) {
  int bound = 2 * omega_elem.order() + 1;
  FiberElement kept = omega_elem.t_truncated(bound);
  for (const auto &[key, c] : kept.terms())
    if (!key.fiber.is_one() || wedge_degree(key.wedge) != 2)
      throw std::logic_error(std::string(which) + " curvature has a non-scalar component");
  return kept.scalar_form(2);
}

} // namespace

struct FedosovConnection::Cache {
  std::mutex mutex;
  std::map<std::string, FiberElement> eta;
};

FedosovConnection::FedosovConnection(const ChristoffelData &gamma, FiberElement r)
    : nabla_(lift_connection(gamma)), r_(std::move(r)), cache_(std::make_shared<Cache>()) {
  if (r_.n() != gamma.n() || r_.order() != gamma.order() || r_.tag() != Ordering::wick)
    throw std::invalid_argument("r does not match the connection");
}

FiberElement FedosovConnection::D(const FiberElement &a) const {
  return nabla_.apply(a) + a.delta() + bracket_over_t(r_, a);
}

const FiberElement &FedosovConnection::eta(const TSeries &f) const {
  std::string key = format_series(f, n());
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->eta.find(key);
    if (it != cache_->eta.end())
      return it->second;
  }
  // a <- f - delta^{-1}(nabla a + (1/t)[r, a]); the sign is the one for which
  // D a = 0 (D = nabla + delta + ...).
  FiberElement f_elem = FiberElement::scalar(n(), f);
  FiberElement a = f_elem;
  bool stable = false;
  for (int iter = 0; iter < iteration_cap(order()); ++iter) {
    FiberElement next = f_elem - (nabla_.apply(a) + bracket_over_t(r_, a)).delta_inverse();
    if (next == a) {
      stable = true;
      break;
    }
    a = std::move(next);
  }
  if (!stable)
    throw std::runtime_error("flat-section iteration did not stabilize within the degree bound");
  std::lock_guard lock(cache_->mutex);
  return cache_->eta.emplace(key, std::move(a)).first->second;
}

FedosovConnection build_r(const ChristoffelData &gamma, std::vector<FiberElement> *iterates) {
  LiftedConnection nabla = lift_connection(gamma);
  FiberElement R = curvature(gamma).r_wick;
  FiberElement r(gamma.n(), gamma.order());
  for (int iter = 0; iter < iteration_cap(gamma.order()); ++iter) {
    FiberElement next = -(R + nabla.apply(r) + half_bracket(r)).delta_inverse();
    if (iterates)
      iterates->push_back(next);
    if (next == r)
      return FedosovConnection(gamma, std::move(r));
    r = std::move(next);
  }
  throw std::runtime_error("r iteration did not stabilize within the degree bound");
}

Curvatures curvatures(const FedosovConnection &F) {
  int n = F.n(), N = F.order();
  CurvatureRealization cr = curvature(F.christoffel());
  FiberElement gamma = FiberElement::delta_tilde(n, N) + F.r();
  FiberElement wick = cr.r_wick + F.nabla().apply(gamma) + half_bracket(gamma);
  FiberElement gamma_w = FiberElement::delta_tilde(n, N, Ordering::weyl) + F.r().reorder(Ordering::weyl);
  FiberElement weyl = cr.r_weyl + F.nabla().apply(gamma_w) + half_bracket(gamma_w);
  return {scalar_curvature(wick, "Wick"), scalar_curvature(weyl, "Weyl")};
}

FedosovReport check_fedosov(const FedosovConnection &F) {
  int n = F.n(), N = F.order();
  FedosovReport rep;
  rep.ft_ok = F.r().ft_degree() >= 3;
  rep.fp_ok = F.r().fp_degree() >= 1;
  rep.flat = true;
  for (int a = 0; a < 2 * n; ++a) {
    FiberElement z = FiberElement::generator(n, N, a);
    if (!F.D(F.D(z)).t_truncated(2 * N).is_zero())
      rep.flat = false;
  }
  rep.wick_is_omega = curvatures(F).wick == BaseForm::standard_symplectic(n, N);
  return rep;
}

StarProduct moyal_wick(int n, int order) {
  StarProduct mu(n, order);
  std::vector<int> xs;
  for (int i = 0; i < n; ++i)
    xs.push_back(i);
  for (Mono g : monomials_in(xs, order)) {
    Mono dy;
    for (int i = 0; i < n; ++i)
      dy = dy.with(n + i, g[i]);
    Scalar c = Scalar(1) / multi_factorial(g);
    mu[g.degree()].add_term({dy, g}, Poly::constant(2 * n, c));
  }
  return mu;
}

StarProduct moyal_weyl(int n, int order) {
  StarProduct mu(n, order);
  std::vector<int> xs;
  for (int i = 0; i < n; ++i)
    xs.push_back(i);
  auto monos = monomials_in(xs, order);
  for (Mono g : monos)
    for (Mono e : monos) {
      int k = g.degree() + e.degree();
      if (k > order)
        continue;
      Mono left, right;
      for (int i = 0; i < n; ++i) {
        left = left.with(n + i, g[i]).with(i, e[i]);
        right = right.with(i, g[i]).with(n + i, e[i]);
      }
      Scalar c = Scalar(1) / (multi_factorial(g) * multi_factorial(e));
      for (int j = 0; j < k; ++j)
        c *= Scalar::ratio(1, 2);
      if (e.degree() % 2 == 1)
        c = -c;
      mu[k].add_term({left, right}, Poly::constant(2 * n, c));
    }
  return mu;
}

StarProduct reconstruct_star_product(int n, int order, const MonomialProduct &eval,
                                     int verify_degree) {
  int nv = 2 * n;
  std::map<std::pair<std::uint64_t, std::uint64_t>, TSeries> memo;
  auto value = [&](Mono a, Mono b) -> const TSeries & {
    auto key = std::make_pair(a.bits(), b.bits());
    auto it = memo.find(key);
    if (it == memo.end())
      it = memo.emplace(key, eval(a, b)).first;
    return it->second;
  };
  StarProduct mu(n, order);
  auto monos = monomials_up_to(nv, order);
  std::vector<std::pair<Mono, Mono>> pairs;
  for (Mono a : monos)
    for (Mono b : monos)
      pairs.emplace_back(a, b);
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto &p, const auto &q) {
    return p.first.degree() + p.second.degree() < q.first.degree() + q.second.degree();
  });
  for (const auto &[a, b] : pairs) {
    const TSeries &E = value(a, b);
    int s = std::max(a.degree(), b.degree());
    Scalar norm = Scalar(1) / (multi_factorial(a) * multi_factorial(b));
    for (int k = s; k <= order; ++k) {
      Poly residual = E[k] - mu[k].evaluate_monomials({a, b});
      if (!residual.is_zero())
        mu[k].add_term({a, b}, residual * norm);
    }
  }
  auto check_monos = monomials_up_to(nv, std::max(verify_degree, 0));
  for (Mono a : check_monos)
    for (Mono b : check_monos)
      if (mu.on_monomials(a, b) != value(a, b))
        throw std::logic_error("reconstructed table disagrees with the product on (" +
                               format_poly(Poly::monomial(nv, a), n) + ", " +
                               format_poly(Poly::monomial(nv, b), n) + ")");
  return mu;
}

StarProduct extract_star_product(const FedosovConnection &F, int max_poly_degree) {
  int n = F.n(), N = F.order(), nv = 2 * n;
  auto eval = [&](Mono a, Mono b) {
    const FiberElement &ea = F.eta(TSeries(Poly::monomial(nv, a), N));
    const FiberElement &eb = F.eta(TSeries(Poly::monomial(nv, b), N));
    return sigma_of_product(ea, eb);
  };
  return reconstruct_star_product(n, N, eval, max_poly_degree);
}

FiberElement exp_ad(const FiberElement &B, const FiberElement &a) {
  FiberElement sum = a, term = a;
  for (int k = 1; !term.is_zero(); ++k) {
    term = bracket_over_t(B, term).scaled(Scalar(1) / Scalar(k));
    sum += term;
  }
  return sum;
}

FiberElement phi_ad(const FiberElement &B, const FiberElement &a) {
  // sum_k (ad_B/t)^k a / (k+1)!
  FiberElement sum = a, power = a;
  Scalar fact(1);
  for (int k = 1;; ++k) {
    power = bracket_over_t(B, power);
    if (power.is_zero())
      break;
    fact *= Scalar(k + 1);
    sum += power.scaled(Scalar(1) / fact);
  }
  return sum;
}

FiberElement conjugated_D(const FedosovConnection &F, const FiberElement &B,
                          const FiberElement &a) {
  return exp_ad(B, F.D(exp_ad(-B, a)));
}

FiberElement gauge_between(const FedosovConnection &F1, const FedosovConnection &F2) {
  if (F1.n() != F2.n() || F1.order() != F2.order())
    throw std::invalid_argument("connections live on different charts");
  if (curvatures(F1).wick != curvatures(F2).wick)
    throw std::invalid_argument("Fedosov connections have different Wick curvature");
  int n = F1.n(), N = F1.order();
  // D2 = D1 - (1/t) ad(Delta') with Delta' = (G1 - G2) + (r1 - r2), and the
  // conjugate of D1 is D1 - (1/t) ad(phi(ad_B/t)(D1 B)); solve
  // phi(ad_B/t)(D1 B) = Delta' for B with delta^{-1} B = 0.
  FiberElement target = (F1.nabla().gamma_hat(Ordering::wick) - F2.nabla().gamma_hat(Ordering::wick)) +
                        (F1.r() - F2.r());
  FiberElement B(n, N);
  bool stable = false;
  for (int iter = 0; iter < iteration_cap(N); ++iter) {
    FiberElement d1b = F1.D(B);
    FiberElement rest = F1.nabla().apply(B) + bracket_over_t(F1.r(), B) + (phi_ad(B, d1b) - d1b);
    FiberElement next = (target - rest).delta_inverse();
    if (next == B) {
      stable = true;
      break;
    }
    B = std::move(next);
  }
  if (!stable)
    throw std::runtime_error("gauge iteration did not stabilize within the degree bound");
  for (int a = 0; a < 2 * n; ++a) {
    FiberElement z = FiberElement::generator(n, N, a);
    if ((conjugated_D(F1, B, z) - F2.D(z)).t_truncated(2 * N).is_zero() == false)
      throw std::logic_error("gauge element does not conjugate D1 into D2");
  }
  return B;
}

StarProduct transport_star_product(const StarProduct &mu_w, const FormalAutomorphism &T,
                                   int verify_degree) {
  int n = mu_w.n(), N = mu_w.order(), nv = 2 * n;
  const FormalAutomorphism &S = T.inverse();
  auto eval = [&](Mono a, Mono b) {
    TSeries f(Poly::monomial(nv, a), N), g(Poly::monomial(nv, b), N);
    return T.pullback(mu_w(S.pullback(f), S.pullback(g)));
  };
  return reconstruct_star_product(n, N, eval, verify_degree);
}

} // namespace pdq
