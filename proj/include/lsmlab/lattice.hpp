#pragma once

// Index arithmetic, meet/join, and the two dense function representations
// (integer lattice and real grid) shared by all checkers. Dimension is
// capped at 4; values are stored dense over a bounding box and are
// implicitly zero outside it.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lsmlab {

inline constexpr int kMaxDim = 4;

using MultiIndex = std::vector<int>;

MultiIndex meet(const MultiIndex& x, const MultiIndex& y);  // componentwise min
MultiIndex join(const MultiIndex& x, const MultiIndex& y);  // componentwise max

// True when x <= y or y <= x componentwise; for such pairs {meet, join} = {x, y}.
bool comparable(const MultiIndex& x, const MultiIndex& y);

// Closed integer box [lower, upper], nonempty per axis.
struct IndexBox {
  MultiIndex lower;
  MultiIndex upper;

  int dim() const { return static_cast<int>(lower.size()); }
  std::size_t point_count() const;
  std::vector<std::size_t> extents() const;  // upper - lower + 1 per axis
  bool contains(const MultiIndex& x) const;
};

// Finitely supported nonnegative function on Z^d, dense over a box.
// Row-major storage, last axis fastest.
class LatticeFunction {
 public:
  LatticeFunction(MultiIndex lower, MultiIndex upper, std::vector<double> values);

  // Dirac mass at the origin of Z^d.
  static LatticeFunction delta(int dim);

  int dim() const { return box_.dim(); }
  const IndexBox& box() const { return box_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  std::size_t size() const { return values_.size(); }

  std::size_t flatten(const MultiIndex& x) const;  // x must lie in the box
  MultiIndex unflatten(std::size_t flat) const;

  double at(const MultiIndex& x) const;  // 0 outside the box

  double integral() const;  // counting measure
  double max_value() const;

 private:
  IndexBox box_;
  std::vector<std::size_t> ext_;
  std::vector<double> values_;
};

// Axis-aligned real box.
struct RealBox {
  std::vector<double> lower;
  std::vector<double> upper;

  int dim() const { return static_cast<int>(lower.size()); }
  double volume() const;
  bool contains(std::span<const double> x) const;
};

// Nonnegative values on a regular box grid discretizing R^d with uniform
// spacing eps across axes; integral semantics sum(values) * eps^d.
class GridFunction {
 public:
  GridFunction(std::vector<double> origin, double spacing,
               std::vector<std::size_t> shape, std::vector<double> values);

  int dim() const { return static_cast<int>(origin_.size()); }
  double spacing() const { return spacing_; }
  const std::vector<double>& origin() const { return origin_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  std::size_t size() const { return values_.size(); }

  std::size_t flatten(const MultiIndex& idx) const;
  MultiIndex unflatten(std::size_t flat) const;
  std::vector<double> point(std::size_t flat) const;       // coordinates of a node
  std::vector<double> point(const MultiIndex& idx) const;

  double integral() const;  // sum * eps^d
  double max_value() const;

  // Multilinear interpolation; 0 outside the grid hull.
  double interpolate(std::span<const double> x) const;

  // Same values, coordinates scaled by a > 0 (spacing and origin scaled).
  GridFunction scaled_coordinates(double a) const;

 private:
  std::vector<double> origin_;
  double spacing_;
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
};

std::string to_string(const MultiIndex& x);

}  // namespace lsmlab
