#pragma once

#include "pdq/automorphism.hpp"
#include "pdq/diffop.hpp"
#include "pdq/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pdq {

// Bracket pi_0 + t pi_1 + ... + t^M pi_M given by bidifferential operators.
class DeformedBracket {
public:
  DeformedBracket() = default;
  DeformedBracket(int n, int order);
  // {f, g} = sum d_y f d_x g - d_x f d_y g
  static DeformedBracket standard(int n, int order);
  // (1/t)(mu(f, g) - mu(g, f)); the result has order N - 1.
  static DeformedBracket of_star_product(const StarProduct &mu);

  int n() const { return n_; }
  int order() const { return order_; }
  int nvars() const { return 2 * n_; }
  const MultiDiffOp &operator[](int k) const { return pi_.at(k); }
  MultiDiffOp &operator[](int k) { return pi_.at(k); }
  friend bool operator==(const DeformedBracket &, const DeformedBracket &) = default;

  TSeries operator()(const TSeries &f, const TSeries &g) const;

private:
  int n_ = 0;
  int order_ = 0;
  std::vector<MultiDiffOp> pi_;
};

struct BracketReport {
  bool antisymmetric = true;
  bool jacobi = true;
  bool standard_leading = true;
  std::string witness;
  bool ok() const { return antisymmetric && jacobi && standard_leading; }
};
// Jacobi is checked on all monomial triples of degree <= max_degree.
BracketReport validate_bracket(const DeformedBracket &b, int max_degree);

struct DarbouxCoordinates {
  std::vector<TSeries> x, y;
  friend bool operator==(const DarbouxCoordinates &, const DarbouxCoordinates &) = default;
};

DarbouxCoordinates chart_coordinates(int n, int order);
// Largest k <= order + 1 such that [x^_j, x^_l] = [y^_j, y^_l] = 0 and
// [y^_j, x^_l] = delta_jl hold mod t^k. On failure, witness names the first
// broken relation.
int darboux_valid_order(const DeformedBracket &b, const DarbouxCoordinates &c,
                        std::string *witness = nullptr);
bool x_lifts_in_O(const DarbouxCoordinates &c);

// Corrects coordinates that are Darboux mod t^k into coordinates that are
// Darboux mod t^{M+1}; all corrections carry t^k or higher. At order j the
// defect 2-form alpha is closed and its primitive beta gives x^ -= t^j (dy
// part of beta), y^ += t^j (dx part). When alpha has no dy^dy part the
// primitive is taken with dx factors only, so x^ is left untouched.
// potentials[j], when present, adds d(potentials[j]) to the order-j primitive
// and so selects a different lift.
DarbouxCoordinates extend_darboux(const DeformedBracket &b, DarbouxCoordinates c,
                                  const std::vector<Poly> &potentials = {});
DarbouxCoordinates lift_darboux(const DeformedBracket &b,
                                const std::vector<Poly> &potentials = {});

// exp(t ad B)(a) with ad B = [B, .] of the given bracket.
TSeries exp_t_ad(const DeformedBracket &b, const TSeries &B, const TSeries &a);
// B with exp(t ad B) carrying system 1 onto system 2, determined up to
// constants; B is exact through order M - 1.
TSeries inner_automorphism(const DeformedBracket &b, const DarbouxCoordinates &c1,
                           const DarbouxCoordinates &c2);

// Every mu_k (k >= 1) is strongly polarized, i.e. mu(a, g) = a g for a in O.
bool is_psp(const StarProduct &mu);
// d(sum y^_i dx^_i) for a Darboux lift of the commutator of a PSP; valid to
// order N - 1. The lift used is returned through lift when non-null.
BaseForm characteristic_form(const StarProduct &mu, const std::vector<Poly> &potentials = {},
                             DarbouxCoordinates *lift = nullptr);
// d(sum y_i dx_i) of given coordinates.
BaseForm form_of_coordinates(const DarbouxCoordinates &c);

// For closed omega_t standard at order zero and without dy^dy monomials:
// Darboux map T with T* omega_0 = omega_t (x -> x, y_i -> y_i + h_i).
FormalAutomorphism darboux_map(const BaseForm &omega_t);
// The inverse of darboux_map: pulls omega_t back to omega_0 and maps x into O.
FormalAutomorphism trivialize_pair(const BaseForm &omega_t);
// omega_t = d(sum (y_i + t g_i) dx_i)
BaseForm form_from_potential(const std::vector<TSeries> &g);

struct OrbitStep {
  BaseForm pulled;                 // exp(tX)* omega_t
  std::optional<BaseForm> theta;   // dx-only 1-form with pulled = omega_t + t d theta (X along P)
  bool cartan_identity = false;    // L_X omega_t = d(i_X omega_t)
};
OrbitStep lie_orbit_step(const BaseForm &omega_t, const FormalVectorField &X);

// Christoffel symbols in the chart z from symbols given in w = T(z).
ChristoffelData transform_connection(const ChristoffelData &gamma_w, const FormalAutomorphism &T);

} // namespace pdq
