#pragma once

// Uniform rectangular grids, scalar and vector fields, finite differences.
//
// Storage is row-major with x fastest: node (i, j) lives at i + nx * j.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mos/error.hpp"

namespace mos {

using Vec3 = Eigen::Vector3d;

struct Grid2D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  /// Grid with nx * ny nodes spanning [x0, x1] x [y0, y1] inclusive.
  static Grid2D from_domain(double x0, double x1, double y0, double y1,
                            std::size_t nx, std::size_t ny);

  void validate() const;

  std::size_t size() const noexcept { return nx * ny; }
  std::size_t index(std::size_t i, std::size_t j) const noexcept {
    return i + nx * j;
  }
  double x(std::size_t i) const noexcept {
    return x0 + static_cast<double>(i) * dx;
  }
  double y(std::size_t j) const noexcept {
    return y0 + static_cast<double>(j) * dy;
  }
  double x1() const noexcept { return x(nx - 1); }
  double y1() const noexcept { return y(ny - 1); }
  double h() const noexcept { return dx > dy ? dx : dy; }

  /// Same domain with the spacing halved in both directions.
  Grid2D refined() const;

  bool operator==(const Grid2D&) const = default;
};

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(const Grid2D& grid, std::vector<double> values);
  /// Constant field.
  ScalarField(const Grid2D& grid, double value);

  template <class F>
  static ScalarField sample(const Grid2D& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < grid.ny; ++j)
      for (std::size_t i = 0; i < grid.nx; ++i)
        v[grid.index(i, j)] = f(grid.x(i), grid.y(j));
    return ScalarField(grid, std::move(v));
  }

  /// Pointwise map over flattened node index.
  template <class F>
  static ScalarField generate(const Grid2D& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(k);
    return ScalarField(grid, std::move(v));
  }

  const Grid2D& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[grid_.index(i, j)];
  }

  /// Index of the first non-finite entry, or size() if all finite.
  std::size_t first_non_finite() const noexcept;

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

class Vec3Field {
 public:
  Vec3Field() = default;
  Vec3Field(const Grid2D& grid, std::vector<Vec3> values);

  const Grid2D& grid() const noexcept { return grid_; }
  std::span<const Vec3> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const Vec3& operator[](std::size_t k) const noexcept { return values_[k]; }
  const Vec3& operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[grid_.index(i, j)];
  }
  ScalarField component(int c) const;

 private:
  Grid2D grid_;
  std::vector<Vec3> values_;
};

/// Per-node validity. Empty means every node is valid.
class NodeMask {
 public:
  NodeMask() = default;
  explicit NodeMask(std::size_t n) : valid_(n, 1) {}

  bool empty() const noexcept { return valid_.empty(); }
  bool valid(std::size_t k) const noexcept {
    return valid_.empty() || valid_[k] != 0;
  }
  void flag(std::size_t k, std::size_t n);
  std::size_t flagged_count() const noexcept;
  /// Union of flags.
  void merge(const NodeMask& other, std::size_t n);
  /// Flags every node within `radius` (Chebyshev distance) of a flagged node.
  NodeMask dilated(const Grid2D& grid, std::size_t radius) const;

 private:
  std::vector<std::uint8_t> valid_;
};

ScalarField partial_x(const ScalarField& f);
ScalarField partial_y(const ScalarField& f);

struct Norms {
  double linf = 0.0;
  double l2 = 0.0;
};

/// linf = max |f|, l2 = sqrt(sum f^2 dx dy); rows summed sequentially, then
/// accumulated across rows.
Norms norms(const ScalarField& f);

/// Norms over valid non-NaN nodes only; `excluded` receives the number of
/// nodes skipped.
Norms masked_norms(const ScalarField& f, const NodeMask& mask,
                   std::size_t* excluded = nullptr);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

}  // namespace mos
