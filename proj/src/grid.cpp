#include "iwaves/grid.hpp"

#include <algorithm>
#include <cmath>

#include "iwaves/errors.hpp"

namespace iwaves {

GridFunction::GridFunction(const BoundaryCurve& curve, int n, Evaluator evaluator)
    : n_(n), evaluator_(std::move(evaluator)) {
  if (n < 3) throw InputError("grid needs at least 3 points per side");
  const auto bb = curve.bounding_box();
  const double pad1 = 0.02 * (bb[1] - bb[0]);
  const double pad2 = 0.02 * (bb[3] - bb[2]);
  box_ = {bb[0] - pad1, bb[1] + pad1, bb[2] - pad2, bb[3] + pad2};
  mask_.assign(static_cast<std::size_t>(n) * n, kOutside);
  const double h = spacing();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2 p = point(i, j);
      if (!curve.contains(p)) continue;
      mask_[index(i, j)] = curve.distance(p) < h ? kNearBoundary : kInterior;
    }
  }
  sample();
}

GridFunction GridFunction::on_box(std::array<double, 4> box, int n, Evaluator evaluator) {
  if (n < 3) throw InputError("grid needs at least 3 points per side");
  if (!(box[1] > box[0] && box[3] > box[2])) throw InputError("empty grid box");
  GridFunction g;
  g.n_ = n;
  g.box_ = box;
  g.evaluator_ = std::move(evaluator);
  g.mask_.assign(static_cast<std::size_t>(n) * n, kInterior);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == 0 || j == 0 || i == n - 1 || j == n - 1) g.mask_[g.index(i, j)] = kNearBoundary;
    }
  }
  g.sample();
  return g;
}

double GridFunction::spacing() const {
  return std::max(box_[1] - box_[0], box_[3] - box_[2]) / (n_ - 1);
}

Point2 GridFunction::point(int i, int j) const {
  return {box_[0] + (box_[1] - box_[0]) * i / (n_ - 1), box_[2] + (box_[3] - box_[2]) * j / (n_ - 1)};
}

double GridFunction::operator()(Point2 x) const {
  if (!evaluator_) throw InputError("grid function has no evaluator");
  return evaluator_(x);
}

double GridFunction::max_abs_inside() const {
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (mask_[k] != kOutside) m = std::max(m, std::abs(values_[k]));
  }
  return m;
}

GridFunction GridFunction::resampled(Evaluator evaluator) const {
  GridFunction g = *this;
  g.evaluator_ = std::move(evaluator);
  g.sample();
  return g;
}

void GridFunction::sample() {
  values_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
  if (!evaluator_) return;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (mask_[index(i, j)] == kOutside) continue;
      const double v = evaluator_(point(i, j));
      if (!std::isfinite(v)) throw InputError("grid function has a non-finite value inside the domain");
      values_[index(i, j)] = v;
    }
  }
}

}  // namespace iwaves
