#pragma once

#include "mongeampere/types.hpp"

namespace ma::geometry {

/// Invertible affine map x -> A x + t. Determinant and spectral norm refer
/// to the linear part and are cached on construction.
class AffineMap {
 public:
  AffineMap(Mat linear, Vec translation);

  static AffineMap identity(int n);
  static AffineMap scaling(int n, double s);
  static AffineMap translation(const Vec& t);

  int dim() const noexcept { return static_cast<int>(linear_.rows()); }
  const Mat& linear() const noexcept { return linear_; }
  const Vec& offset() const noexcept { return translation_; }
  double det() const noexcept { return det_; }
  double spectral_norm() const noexcept { return norm_; }

  Vec apply(const Vec& x) const { return linear_ * x + translation_; }
  Vec apply_linear(const Vec& x) const { return linear_ * x; }

  AffineMap inverse() const;
  /// (*this)(other(x)).
  AffineMap compose(const AffineMap& other) const;

  /// max |A A^{-1} - I| over entries plus the translation defect.
  double inverse_defect() const;

 private:
  Mat linear_;
  Vec translation_;
  double det_;
  double norm_;
};

}  // namespace ma::geometry
