#pragma once

#include "pdq/form.hpp"

#include <memory>
#include <vector>

namespace pdq {

// Chart map z -> phi(z) given by the images of the coordinates, each a
// perturbation of the identity: phi_v = z_v + O(t). Pullback is substitution.
class FormalAutomorphism {
public:
  FormalAutomorphism() = default;
  static FormalAutomorphism identity(int n, int order);
  explicit FormalAutomorphism(std::vector<TSeries> images);

  int n() const { return static_cast<int>(images_.size()) / 2; }
  int order() const { return images_.empty() ? 0 : images_[0].order(); }
  const std::vector<TSeries> &images() const { return images_; }
  bool is_identity() const;
  friend bool operator==(const FormalAutomorphism &a, const FormalAutomorphism &b) {
    return a.images_ == b.images_;
  }

  TSeries pullback(const TSeries &f) const { return f.compose(images_); }
  BaseForm pullback(const BaseForm &form) const;
  const FormalAutomorphism &inverse() const;

private:
  std::vector<TSeries> images_;
  mutable std::shared_ptr<const FormalAutomorphism> inverse_;
};

// (outer o inner)(z) = outer(inner(z)); its pullback is inner* o outer*.
FormalAutomorphism compose(const FormalAutomorphism &outer, const FormalAutomorphism &inner);

// Components X^v of a vector field sum X^v d/dz^v.
struct FormalVectorField {
  std::vector<TSeries> components;

  TSeries apply(const TSeries &f) const; // X(f)
  // exp(tX) as the substitution z_v -> sum_k t^k X^k(z_v) / k!.
  FormalAutomorphism exp_t() const;
  // Lie derivative of a form via Cartan's formula.
  BaseForm lie_derivative(const BaseForm &form) const;
};

} // namespace pdq
