#pragma once

#include "pdq/fiber.hpp"

#include <string>
#include <vector>

namespace pdq {

// Connection coefficients Gamma^k_ij on the 2n chart directions.
class ChristoffelData {
public:
  ChristoffelData() = default;
  ChristoffelData(int n, int order);

  int n() const { return n_; }
  int order() const { return order_; }
  int dim() const { return 2 * n_; }
  const TSeries &operator()(int i, int j, int k) const { return g_[index(i, j, k)]; }
  // Sets Gamma^k_ij and Gamma^k_ji.
  void set(int i, int j, int k, const TSeries &value);
  bool is_zero() const;
  friend bool operator==(const ChristoffelData &, const ChristoffelData &) = default;

private:
  int index(int i, int j, int k) const { return (i * dim() + j) * dim() + k; }
  int n_ = 0;
  int order_ = 0;
  std::vector<TSeries> g_;
};

struct ConnectionReport {
  bool torsion_free = true;
  bool preserves_omega = true;
  bool preserves_p = true;
  bool flat_on_p = true;
  std::string witness; // first failing identity, empty when valid
  bool ok() const { return torsion_free && preserves_omega && preserves_p && flat_on_p; }
};

// Checks torsion, nabla omega = 0, nabla P in P for P = span{d/dy_i}, and
// R(u, v)w = 0 for u, v, w in P.
ConnectionReport validate_connection(const ChristoffelData &gamma, const BaseForm &omega);
ChristoffelData standard_flat_connection(int n, int order);

// R^a_{b k l}, the components of R(d_k, d_l) d_b = R^a_{bkl} d_a.
class CurvatureTensor {
public:
  explicit CurvatureTensor(const ChristoffelData &gamma);
  const TSeries &operator()(int a, int b, int k, int l) const;
  int dim() const { return dim_; }

private:
  int dim_;
  std::vector<TSeries> r_;
};

// tr(R|P) as a 2-form: sum over k<l of sum_j R^{y_j}_{y_j k l} dz^k ^ dz^l.
BaseForm classical_trace_form(const ChristoffelData &gamma);

// The lift of a connection to the Fedosov algebra, nabla = d + (1/t) ad(Gamma^),
// with Gamma^ = sum_b dz^b (1/2) A^(b)_cd zhat_c zhat_d and
// A^(b)_ce = sum_a Gamma^a_bc pi_ae, pi the Darboux pairing.
class LiftedConnection {
public:
  LiftedConnection() = default;
  explicit LiftedConnection(const ChristoffelData &gamma);

  const ChristoffelData &christoffel() const { return gamma_; }
  // Same symbol under either ordering; the two differ by a central term.
  const FiberElement &gamma_hat(Ordering tag) const {
    return tag == Ordering::wick ? wick_ : weyl_;
  }
  FiberElement apply(const FiberElement &a) const;

private:
  ChristoffelData gamma_;
  FiberElement wick_, weyl_;
};

LiftedConnection lift_connection(const ChristoffelData &gamma);

struct CurvatureRealization {
  FiberElement r_wick;  // d Gamma^ + (1/t) Gamma^ Gamma^ under the Wick product
  FiberElement r_weyl;  // the same expression under the Weyl product
  BaseForm trace_form;  // classical tr(R|P)
};

CurvatureRealization curvature(const ChristoffelData &gamma);

} // namespace pdq
