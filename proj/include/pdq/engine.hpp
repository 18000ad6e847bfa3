#pragma once

#include "pdq/automorphism.hpp"
#include "pdq/diffop.hpp"
#include "pdq/geometry.hpp"

#include <functional>
#include <memory>
#include <string>

namespace pdq {

// D = nabla + delta + (1/t) ad(r) on the Wick-ordered Fedosov algebra.
class FedosovConnection {
public:
  FedosovConnection() = default;
  FedosovConnection(const ChristoffelData &gamma, FiberElement r);

  int n() const { return nabla_.christoffel().n(); }
  int order() const { return nabla_.christoffel().order(); }
  const LiftedConnection &nabla() const { return nabla_; }
  const ChristoffelData &christoffel() const { return nabla_.christoffel(); }
  const FiberElement &r() const { return r_; }

  FiberElement D(const FiberElement &a) const;
  // Flat section with sigma = f, memoized per f.
  const FiberElement &eta(const TSeries &f) const;

private:
  struct Cache;
  LiftedConnection nabla_;
  FiberElement r_;
  std::shared_ptr<Cache> cache_;
};

// Solves delta r = -(R + nabla r + (1/t) r^2) with delta^{-1} r = 0 by the
// fixed-point iteration r <- -delta^{-1}(R + nabla r + (1/t) r^2), starting
// from r = 0. When iterates is non-null every iterate is recorded.
FedosovConnection build_r(const ChristoffelData &gamma,
                          std::vector<FiberElement> *iterates = nullptr);

struct FedosovReport {
  bool ft_ok = false;         // F^T(r) >= 3
  bool fp_ok = false;         // F^P(r) >= 1
  bool flat = false;          // D^2 = 0 on the generators
  bool wick_is_omega = false; // Wick curvature equals omega
  bool ok() const { return ft_ok && fp_ok && flat && wick_is_omega; }
};
FedosovReport check_fedosov(const FedosovConnection &F);

struct Curvatures {
  BaseForm wick;
  BaseForm weyl;
};
// Scalar curvatures R + nabla(gamma) + (1/t) gamma^2 with gamma = delta~ + r in
// both realizations; throws if a non-scalar part survives.
Curvatures curvatures(const FedosovConnection &F);

StarProduct moyal_wick(int n, int order);
StarProduct moyal_weyl(int n, int order);

// Rebuilds a bidifferential table from evaluations on monomial pairs,
// assuming derivative order <= k per slot at t^k, then checks it on every
// pair of monomials of degree <= verify_degree. Throws on mismatch.
using MonomialProduct = std::function<TSeries(Mono, Mono)>;
StarProduct reconstruct_star_product(int n, int order, const MonomialProduct &eval,
                                     int verify_degree);

// mu(f, g) = sigma(eta(f) eta(g)).
StarProduct extract_star_product(const FedosovConnection &F, int max_poly_degree);

// e^{(1/t) ad B} a and phi((1/t) ad B) a with phi(x) = (e^x - 1)/x.
FiberElement exp_ad(const FiberElement &B, const FiberElement &a);
FiberElement phi_ad(const FiberElement &B, const FiberElement &a);

// B with e^{(1/t) ad B} D1 e^{-(1/t) ad B} = D2, normalized by delta^{-1} B = 0.
FiberElement gauge_between(const FedosovConnection &F1, const FedosovConnection &F2);
// e^{(1/t) ad B} D e^{-(1/t) ad B} applied to a.
FiberElement conjugated_D(const FedosovConnection &F, const FiberElement &B,
                          const FiberElement &a);

// Product on the original chart from a product mu' in Darboux coordinates
// w = T(z): mu(f, g) = T*(mu'((T^{-1})* f, (T^{-1})* g)).
StarProduct transport_star_product(const StarProduct &mu_w, const FormalAutomorphism &T,
                                   int verify_degree);

} // namespace pdq
