#include "mongeampere/geometry/affine_map.hpp"

#include <cmath>

namespace ma::geometry {

AffineMap::AffineMap(Mat linear, Vec translation)
    : linear_(std::move(linear)), translation_(std::move(translation)) {
  require(linear_.rows() > 0 && linear_.rows() == linear_.cols(),
          "affine map: linear part must be square");
  require(translation_.size() == linear_.rows(), "affine map: translation size mismatch");
  require(linear_.allFinite() && translation_.allFinite(), "affine map: non-finite entries");
  Eigen::JacobiSVD<Mat> svd(linear_);
  const Vec& sv = svd.singularValues();
  norm_ = sv(0);
  if (!(sv(sv.size() - 1) > 1e-14 * norm_)) throw DegenerateInput("affine map: singular linear part");
  det_ = linear_.determinant();
}

AffineMap AffineMap::identity(int n) { return {Mat::Identity(n, n), Vec::Zero(n)}; }

AffineMap AffineMap::scaling(int n, double s) { return {s * Mat::Identity(n, n), Vec::Zero(n)}; }

AffineMap AffineMap::translation(const Vec& t) {
  return {Mat::Identity(t.size(), t.size()), t};
}

AffineMap AffineMap::inverse() const {
  Mat inv = linear_.inverse();
  Vec t = -(inv * translation_);
  return {std::move(inv), std::move(t)};
}

AffineMap AffineMap::compose(const AffineMap& other) const {
  require(other.dim() == dim(), "affine map: dimension mismatch in compose");
  return {linear_ * other.linear_, linear_ * other.translation_ + translation_};
}

double AffineMap::inverse_defect() const {
  AffineMap id = compose(inverse());
  double lin = (id.linear_ - Mat::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  double tr = id.translation_.cwiseAbs().maxCoeff();
  return std::max(lin, tr);
}

}  // namespace ma::geometry
