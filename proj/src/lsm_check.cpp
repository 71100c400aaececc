#include "lsmlab/lsm_check.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "lsmlab/parallel.hpp"

namespace lsmlab {

namespace {

struct PairCandidate {
  double violation = -std::numeric_limits<double>::infinity();
  MultiIndex x, y;
  bool valid = false;
};

void consider(PairCandidate& best, double violation, const MultiIndex& x, const MultiIndex& y) {
  if (!best.valid || violation > best.violation) {
    best.violation = violation;
    best.x = x;
    best.y = y;
    best.valid = true;
  }
}

// Specialized scan for d=2 boxes: pairs (i1,j1),(i2,j2) with i1<i2, j1>j2
// are exactly the incomparable pairs up to swapping; meet=(i1,j2),
// join=(i2,j1). Row-pair structure keeps the inner loop over contiguous
// memory. Threaded over i1 with a deterministic chunk-ordered reduction.
PairCandidate brute_force_2d(std::size_t rows, std::size_t cols, const double* v,
                             std::uint64_t& pairs_out) {
  pairs_out = static_cast<std::uint64_t>(rows) * (rows - 1) / 2 *
              (static_cast<std::uint64_t>(cols) * (cols - 1) / 2);
  if (rows < 2 || cols < 2) return {};

  std::vector<PairCandidate> partial(rows - 1);  // indexed by i1

  parallel_chunks(rows - 1, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i1 = begin; i1 < end; ++i1) {
      PairCandidate local;
      const double* a = v + i1 * cols;
      for (std::size_t i2 = i1 + 1; i2 < rows; ++i2) {
        const double* b = v + i2 * cols;
        for (std::size_t j1 = 1; j1 < cols; ++j1) {
          const double aj1 = a[j1];
          const double bj1 = b[j1];
          double row_max = -std::numeric_limits<double>::infinity();
          for (std::size_t j2 = 0; j2 < j1; ++j2) {
            double cand = aj1 * b[j2] - a[j2] * bj1;
            row_max = std::max(row_max, cand);
          }
          if (row_max > local.violation || !local.valid) {
            for (std::size_t j2 = 0; j2 < j1; ++j2) {
              double cand = aj1 * b[j2] - a[j2] * bj1;
              if (cand == row_max) {
                consider(local, cand,
                         MultiIndex{static_cast<int>(i1), static_cast<int>(j1)},
                         MultiIndex{static_cast<int>(i2), static_cast<int>(j2)});
                break;
              }
            }
          }
        }
      }
      partial[i1] = local;
    }
  });

  PairCandidate best;
  for (const auto& c : partial)
    if (c.valid) consider(best, c.violation, c.x, c.y);
  return best;
}

PairCandidate brute_force_generic(const std::vector<std::size_t>& ext, const double* v,
                                  std::uint64_t& pairs_out) {
  const int d = static_cast<int>(ext.size());
  std::size_t n = 1;
  for (auto e : ext) n *= e;
  std::vector<std::size_t> stride(d);
  stride[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * ext[i + 1];

  // Decode all indices once.
  std::vector<int> digits(n * d);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat;
    for (int i = d - 1; i >= 0; --i) {
      digits[flat * d + i] = static_cast<int>(rem % ext[i]);
      rem /= ext[i];
    }
  }

  std::uint64_t pairs = 0;
  PairCandidate best;
  for (std::size_t x = 0; x < n; ++x) {
    const int* dx = &digits[x * d];
    for (std::size_t y = x + 1; y < n; ++y) {
      const int* dy = &digits[y * d];
      bool le = true, ge = true;
      std::size_t meet_flat = 0, join_flat = 0;
      for (int i = 0; i < d; ++i) {
        int a = dx[i], b = dy[i];
        if (a > b) le = false;
        if (a < b) ge = false;
        meet_flat += stride[i] * static_cast<std::size_t>(std::min(a, b));
        join_flat += stride[i] * static_cast<std::size_t>(std::max(a, b));
      }
      if (le || ge) continue;  // comparable: exact identity
      ++pairs;
      double cand = v[x] * v[y] - v[meet_flat] * v[join_flat];
      if (!best.valid || cand > best.violation)
        consider(best, cand, MultiIndex(dx, dx + d), MultiIndex(dy, dy + d));
    }
  }
  pairs_out = pairs;
  return best;
}

CheckReport brute_force_report(const std::vector<std::size_t>& ext, const double* v,
                               std::size_t n, double tol,
                               const std::function<std::vector<double>(const MultiIndex&)>& to_point) {
  for (std::size_t i = 0; i < n; ++i)
    if (!(v[i] >= 0.0)) throw std::invalid_argument("negative value in function");

  double max_v = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_v = std::max(max_v, v[i]);

  CheckReport report;
  report.scale = max_v > 0.0 ? max_v * max_v : 1.0;
  report.tolerance = tol * report.scale;

  PairCandidate best;
  std::uint64_t pairs = 0;
  if (ext.size() == 2) {
    best = brute_force_2d(ext[0], ext[1], v, pairs);
  } else {
    best = brute_force_generic(ext, v, pairs);
  }
  report.pairs_checked = pairs;
  if (best.valid) {
    report.worst_violation = best.violation;
    report.witness = {to_point(best.x), to_point(best.y)};
  } else {
    report.worst_violation = 0.0;  // chain lattice or singleton: nothing to check
  }
  report.finalize();
  return report;
}

CheckReport topkis_report(const std::vector<std::size_t>& ext, const double* v,
                          std::size_t n, double tol,
                          const std::function<std::vector<double>(const MultiIndex&)>& to_point) {
  const int d = static_cast<int>(ext.size());
  CheckReport report;
  double max_v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(v[i] >= 0.0)) throw std::invalid_argument("negative value in function");
    max_v = std::max(max_v, v[i]);
  }
  report.scale = max_v > 0.0 ? max_v * max_v : 1.0;
  report.tolerance = tol * report.scale;

  std::vector<std::size_t> stride(d);
  stride[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * ext[i + 1];

  // The minor condition reads through log f; a zero anywhere in the box
  // leaves it undefined.
  for (std::size_t flat = 0; flat < n; ++flat) {
    if (v[flat] == 0.0) {
      report.indeterminate = true;
      MultiIndex idx(d);
      std::size_t rem = flat;
      for (int i = d - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(rem % ext[i]);
        rem /= ext[i];
      }
      report.witness = {to_point(idx)};
      report.note = "zero value inside box at " + to_string(idx) + "; log-minor undefined";
      report.worst_violation = std::numeric_limits<double>::infinity();
      report.finalize();
      return report;
    }
  }

  PairCandidate best;
  std::uint64_t cells = 0;
  MultiIndex idx(d, 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat;
    for (int i = d - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % ext[i]);
      rem /= ext[i];
    }
    for (int i = 0; i < d; ++i) {
      if (idx[i] + 1 >= static_cast<int>(ext[i])) continue;
      for (int j = i + 1; j < d; ++j) {
        if (idx[j] + 1 >= static_cast<int>(ext[j])) continue;
        ++cells;
        double f00 = v[flat];
        double f10 = v[flat + stride[i]];
        double f01 = v[flat + stride[j]];
        double f11 = v[flat + stride[i] + stride[j]];
        double cand = f10 * f01 - f00 * f11;
        if (!best.valid || cand > best.violation) {
          MultiIndex corner = idx;
          MultiIndex opposite = idx;
          opposite[i] += 1;
          opposite[j] += 1;
          consider(best, cand, corner, opposite);
        }
      }
    }
  }
  report.pairs_checked = cells;
  if (best.valid) {
    report.worst_violation = best.violation;
    report.witness = {to_point(best.x), to_point(best.y)};
  }
  report.finalize();
  return report;
}

std::function<std::vector<double>(const MultiIndex&)> lattice_point_map(const LatticeFunction& f) {
  return [&f](const MultiIndex& idx) {
    std::vector<double> p(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      p[i] = static_cast<double>(f.box().lower[i] + idx[i]);
    return p;
  };
}

std::function<std::vector<double>(const MultiIndex&)> grid_point_map(const GridFunction& f) {
  return [&f](const MultiIndex& idx) {
    std::vector<double> p(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      p[i] = f.origin()[i] + f.spacing() * idx[i];
    return p;
  };
}

}  // namespace

CheckReport is_log_supermodular(const LatticeFunction& f, double tol) {
  return brute_force_report(f.box().extents(), f.values().data(), f.size(), tol,
                            lattice_point_map(f));
}

CheckReport is_log_supermodular(const GridFunction& f, double tol) {
  return brute_force_report(f.shape(), f.values().data(), f.size(), tol, grid_point_map(f));
}

CheckReport topkis_local_check(const LatticeFunction& f, double tol) {
  return topkis_report(f.box().extents(), f.values().data(), f.size(), tol,
                       lattice_point_map(f));
}

CheckReport topkis_local_check(const GridFunction& f, double tol) {
  return topkis_report(f.shape(), f.values().data(), f.size(), tol, grid_point_map(f));
}

CheckReport log_concavity_check(std::span<const double> g, double tol) {
  CheckReport report;
  double max_v = 0.0;
  for (double v : g) {
    if (!(v >= 0.0)) throw std::invalid_argument("negative value in sequence");
    max_v = std::max(max_v, v);
  }
  report.scale = max_v > 0.0 ? max_v * max_v : 1.0;
  report.tolerance = tol * report.scale;

  std::ptrdiff_t first = -1, last = -1;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] > 0.0) {
      if (first < 0) first = static_cast<std::ptrdiff_t>(i);
      last = static_cast<std::ptrdiff_t>(i);
    }
  if (first < 0) {
    report.note = "empty support";
    report.finalize();
    return report;
  }

  PairCandidate best;
  std::uint64_t checks = 0;

  // Interior triples.
  for (std::ptrdiff_t i = first + 1; i < last; ++i) {
    ++checks;
    double cand = g[i + 1] * g[i - 1] - g[i] * g[i];
    if (!best.valid || cand > best.violation)
      consider(best, cand, MultiIndex{static_cast<int>(i)}, MultiIndex{static_cast<int>(i)});
  }
  // Support gaps: log-concave sequences have contiguous support, so a gap
  // between positive neighbors g[a], g[b] violates with margin g[a]*g[b].
  std::ptrdiff_t prev_pos = first;
  for (std::ptrdiff_t i = first + 1; i <= last; ++i) {
    if (g[i] > 0.0) {
      if (i > prev_pos + 1) {
        ++checks;
        double cand = g[prev_pos] * g[i];
        if (!best.valid || cand > best.violation)
          consider(best, cand, MultiIndex{static_cast<int>(prev_pos)},
                   MultiIndex{static_cast<int>(i)});
        if (report.note.empty())
          report.note = "support gap at [" + std::to_string(prev_pos + 1) + ", " +
                        std::to_string(i - 1) + "]";
      }
      prev_pos = i;
    }
  }

  report.pairs_checked = checks;
  if (best.valid) {
    report.worst_violation = best.violation;
    report.witness = {{static_cast<double>(best.x[0])}, {static_cast<double>(best.y[0])}};
  }
  report.finalize();
  return report;
}

CheckReport is_log_concave_1d(const LatticeFunction& g, double tol) {
  if (g.dim() != 1) throw std::invalid_argument("is_log_concave_1d requires d=1");
  CheckReport report = log_concavity_check(g.values(), tol);
  const int lo = g.box().lower[0];
  for (auto& w : report.witness) w[0] += lo;
  return report;
}

bool equivalence_audit(const LatticeFunction& f, double tol) {
  return is_log_supermodular(f, tol).passed == topkis_local_check(f, tol).passed;
}

bool equivalence_audit(const GridFunction& f, double tol) {
  return is_log_supermodular(f, tol).passed == topkis_local_check(f, tol).passed;
}

}  // namespace lsmlab
