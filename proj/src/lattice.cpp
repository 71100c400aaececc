#include "lsmlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lsmlab {

namespace {

void require_same_dim(const MultiIndex& x, const MultiIndex& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("dimension mismatch: " + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()));
}

void require_dim_range(std::size_t d) {
  if (d < 1 || d > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("dimension must be in [1, 4], got " + std::to_string(d));
}

}  // namespace

MultiIndex meet(const MultiIndex& x, const MultiIndex& y) {
  require_same_dim(x, y);
  MultiIndex out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::min(x[i], y[i]);
  return out;
}

MultiIndex join(const MultiIndex& x, const MultiIndex& y) {
  require_same_dim(x, y);
  MultiIndex out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i], y[i]);
  return out;
}

bool comparable(const MultiIndex& x, const MultiIndex& y) {
  require_same_dim(x, y);
  bool le = true, ge = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > y[i]) le = false;
    if (x[i] < y[i]) ge = false;
  }
  return le || ge;
}

std::size_t IndexBox::point_count() const {
  std::size_t n = 1;
  for (int i = 0; i < dim(); ++i) {
    if (upper[i] < lower[i]) throw std::invalid_argument("empty index box");
    n *= static_cast<std::size_t>(upper[i] - lower[i] + 1);
  }
  return n;
}

std::vector<std::size_t> IndexBox::extents() const {
  std::vector<std::size_t> e(lower.size());
  for (int i = 0; i < dim(); ++i) e[i] = static_cast<std::size_t>(upper[i] - lower[i] + 1);
  return e;
}

bool IndexBox::contains(const MultiIndex& x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  return true;
}

LatticeFunction::LatticeFunction(MultiIndex lower, MultiIndex upper, std::vector<double> values)
    : box_{std::move(lower), std::move(upper)}, values_(std::move(values)) {
  require_same_dim(box_.lower, box_.upper);
  require_dim_range(box_.lower.size());
  ext_ = box_.extents();
  if (values_.size() != box_.point_count())
    throw std::invalid_argument("value array size does not match box point count");
  for (double v : values_)
    if (!(v >= 0.0)) throw std::invalid_argument("lattice function values must be nonnegative");
}

LatticeFunction LatticeFunction::delta(int dim) {
  require_dim_range(static_cast<std::size_t>(dim));
  return LatticeFunction(MultiIndex(dim, 0), MultiIndex(dim, 0), {1.0});
}

std::size_t LatticeFunction::flatten(const MultiIndex& x) const {
  std::size_t flat = 0;
  for (int i = 0; i < dim(); ++i)
    flat = flat * ext_[i] + static_cast<std::size_t>(x[i] - box_.lower[i]);
  return flat;
}

MultiIndex LatticeFunction::unflatten(std::size_t flat) const {
  MultiIndex x(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    x[i] = box_.lower[i] + static_cast<int>(flat % ext_[i]);
    flat /= ext_[i];
  }
  return x;
}

double LatticeFunction::at(const MultiIndex& x) const {
  require_same_dim(x, box_.lower);
  if (!box_.contains(x)) return 0.0;
  return values_[flatten(x)];
}

double LatticeFunction::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

double LatticeFunction::max_value() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, v);
  return m;
}

double RealBox::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= upper[i] - lower[i];
  return v;
}

bool RealBox::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  return true;
}

GridFunction::GridFunction(std::vector<double> origin, double spacing,
                           std::vector<std::size_t> shape, std::vector<double> values)
    : origin_(std::move(origin)), spacing_(spacing), shape_(std::move(shape)),
      values_(std::move(values)) {
  require_dim_range(origin_.size());
  if (shape_.size() != origin_.size())
    throw std::invalid_argument("grid shape/origin dimension mismatch");
  if (!(spacing_ > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  std::size_t n = 1;
  for (std::size_t s : shape_) {
    if (s == 0) throw std::invalid_argument("grid shape must be positive per axis");
    n *= s;
  }
  if (values_.size() != n)
    throw std::invalid_argument("grid value array size does not match shape");
  for (double v : values_)
    if (!(v >= 0.0)) throw std::invalid_argument("grid function values must be nonnegative");
}

std::size_t GridFunction::flatten(const MultiIndex& idx) const {
  std::size_t flat = 0;
  for (int i = 0; i < dim(); ++i)
    flat = flat * shape_[i] + static_cast<std::size_t>(idx[i]);
  return flat;
}

MultiIndex GridFunction::unflatten(std::size_t flat) const {
  MultiIndex idx(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(flat % shape_[i]);
    flat /= shape_[i];
  }
  return idx;
}

std::vector<double> GridFunction::point(const MultiIndex& idx) const {
  std::vector<double> p(dim());
  for (int i = 0; i < dim(); ++i) p[i] = origin_[i] + spacing_ * idx[i];
  return p;
}

std::vector<double> GridFunction::point(std::size_t flat) const {
  return point(unflatten(flat));
}

double GridFunction::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * std::pow(spacing_, dim());
}

double GridFunction::max_value() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, v);
  return m;
}

double GridFunction::interpolate(std::span<const double> x) const {
  const int d = dim();
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("interpolation point dimension mismatch");
  MultiIndex base(d);
  double frac[kMaxDim];
  for (int i = 0; i < d; ++i) {
    double u = (x[i] - origin_[i]) / spacing_;
    if (u < 0.0 || u > static_cast<double>(shape_[i] - 1)) return 0.0;
    double fl = std::floor(u);
    int b = static_cast<int>(fl);
    if (b >= static_cast<int>(shape_[i]) - 1) b = static_cast<int>(shape_[i]) - 2;
    if (b < 0) b = 0;
    base[i] = b;
    frac[i] = shape_[i] == 1 ? 0.0 : u - b;
  }
  double acc = 0.0;
  const unsigned corners = 1u << d;
  for (unsigned c = 0; c < corners; ++c) {
    double w = 1.0;
    MultiIndex idx = base;
    for (int i = 0; i < d; ++i) {
      if (c & (1u << i)) {
        w *= frac[i];
        if (shape_[i] > 1) idx[i] += 1;
      } else {
        w *= 1.0 - frac[i];
      }
    }
    if (w != 0.0) acc += w * values_[flatten(idx)];
  }
  return acc;
}

GridFunction GridFunction::scaled_coordinates(double a) const {
  if (!(a > 0.0)) throw std::invalid_argument("coordinate scale must be positive");
  std::vector<double> o(origin_);
  for (double& v : o) v *= a;
  return GridFunction(std::move(o), spacing_ * a, shape_, values_);
}

std::string to_string(const MultiIndex& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  s += ")";
  return s;
}

}  // namespace lsmlab
