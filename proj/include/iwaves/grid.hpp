#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "iwaves/geometry.hpp"

namespace iwaves {

/// Samples of a function on an n x n tensor grid over a box, with a mask
/// marking points inside the domain and those within one grid spacing of
/// its boundary.
class GridFunction {
 public:
  using Evaluator = std::function<double(Point2)>;

  /// Grid over the bounding box of `curve`, padded by 2% on each side.
  GridFunction(const BoundaryCurve& curve, int n, Evaluator evaluator);
  /// Grid over the closed box {x1min, x1max, x2min, x2max}, every point
  /// inside; points within one spacing of the box edge are boundary-adjacent.
  static GridFunction on_box(std::array<double, 4> box, int n, Evaluator evaluator);

  int size() const { return n_; }
  const std::array<double, 4>& box() const { return box_; }
  /// Larger of the two grid spacings.
  double spacing() const;
  Point2 point(int i, int j) const;
  double value(int i, int j) const { return values_[index(i, j)]; }
  bool inside(int i, int j) const { return mask_[index(i, j)] != kOutside; }
  bool boundary_adjacent(int i, int j) const { return mask_[index(i, j)] == kNearBoundary; }

  bool has_evaluator() const { return static_cast<bool>(evaluator_); }
  const Evaluator& evaluator() const { return evaluator_; }
  double operator()(Point2 x) const;

  /// max |value| over inside points.
  double max_abs_inside() const;
  /// Same grid and mask, new samples.
  GridFunction resampled(Evaluator evaluator) const;

 private:
  GridFunction() = default;
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
  void sample();

  static constexpr std::uint8_t kOutside = 0;
  static constexpr std::uint8_t kInterior = 1;
  static constexpr std::uint8_t kNearBoundary = 2;

  int n_ = 0;
  std::array<double, 4> box_{};
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
  Evaluator evaluator_;
};

}  // namespace iwaves
