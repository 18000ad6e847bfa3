#include "pdq/automorphism.hpp"

#include <stdexcept>

namespace pdq {

FormalAutomorphism FormalAutomorphism::identity(int n, int order) {
  std::vector<TSeries> images;
  for (int v = 0; v < 2 * n; ++v)
    images.push_back(TSeries::variable(2 * n, order, v));
  return FormalAutomorphism(std::move(images));
}

FormalAutomorphism::FormalAutomorphism(std::vector<TSeries> images) : images_(std::move(images)) {
  int nv = static_cast<int>(images_.size());
  if (nv == 0 || nv % 2 != 0)
    throw std::invalid_argument("automorphism needs 2n coordinate images");
  for (int v = 0; v < nv; ++v) {
    if (images_[v].nvars() != nv || images_[v].order() != images_[0].order())
      throw std::invalid_argument("coordinate image has the wrong chart or order");
    if (images_[v][0] != Poly::variable(nv, v))
      throw std::invalid_argument("automorphism is not the identity at order 0");
  }
}

bool FormalAutomorphism::is_identity() const {
  for (std::size_t v = 0; v < images_.size(); ++v)
    for (int k = 1; k <= order(); ++k)
      if (!images_[v][k].is_zero())
        return false;
  return true;
}

BaseForm FormalAutomorphism::pullback(const BaseForm &form) const {
  int n = form.n(), nv = 2 * n;
  if (nv != static_cast<int>(images_.size()) || form.order() != order())
    throw std::invalid_argument("form does not match the automorphism");
  std::vector<BaseForm> dphi;
  for (int v = 0; v < nv; ++v)
    dphi.push_back(BaseForm::function(n, images_[v]).d());
  BaseForm out(n, form.order(), form.degree());
  for (const auto &[w, c] : form.terms()) {
    BaseForm piece = BaseForm::function(n, pullback(c));
    for (int v = 0; v < nv; ++v)
      if (w & (Wedge{1} << v))
        piece = piece.wedge(dphi[v]);
    out += piece;
  }
  return out;
}

const FormalAutomorphism &FormalAutomorphism::inverse() const {
  if (!inverse_) {
    // psi solves phi(psi(z)) = z: psi_v = z_v - (phi_v - z_v)(psi), a
    // contraction in the t-adic sense since phi - id = O(t).
    int nv = static_cast<int>(images_.size()), N = order();
    std::vector<TSeries> psi;
    for (int v = 0; v < nv; ++v)
      psi.push_back(TSeries::variable(nv, N, v));
    for (int iter = 0; iter <= N; ++iter) {
      std::vector<TSeries> next;
      for (int v = 0; v < nv; ++v)
        next.push_back(TSeries::variable(nv, N, v) -
                       (images_[v] - TSeries::variable(nv, N, v)).compose(psi));
      psi = std::move(next);
    }
    auto inv = std::make_shared<FormalAutomorphism>(psi);
    inv->inverse_ = std::make_shared<const FormalAutomorphism>(*this);
    inverse_ = inv;
  }
  return *inverse_;
}

FormalAutomorphism compose(const FormalAutomorphism &outer, const FormalAutomorphism &inner) {
  std::vector<TSeries> images;
  for (const auto &img : outer.images())
    images.push_back(inner.pullback(img));
  return FormalAutomorphism(std::move(images));
}

TSeries FormalVectorField::apply(const TSeries &f) const {
  TSeries out(f.nvars(), f.order());
  for (std::size_t v = 0; v < components.size(); ++v)
    if (!components[v].is_zero())
      out += components[v] * f.derivative(static_cast<int>(v));
  return out;
}

FormalAutomorphism FormalVectorField::exp_t() const {
  int nv = static_cast<int>(components.size());
  int N = components.at(0).order();
  std::vector<TSeries> images;
  for (int v = 0; v < nv; ++v) {
    TSeries term = TSeries::variable(nv, N, v), sum = term;
    for (int k = 1; k <= N; ++k) {
      term = apply(term).shift(1) * (Scalar(1) / Scalar(k));
      if (term.is_zero())
        break;
      sum += term;
    }
    images.push_back(sum);
  }
  return FormalAutomorphism(std::move(images));
}

BaseForm FormalVectorField::lie_derivative(const BaseForm &form) const {
  if (form.degree() == 2 * form.n())
    return form.contract(components).d();
  BaseForm out = form.d().contract(components);
  if (form.degree() > 0)
    out += form.contract(components).d();
  return out;
}

} // namespace pdq
