#include "mos/field.hpp"

#include <cmath>
#include <string>

#include "mos/simd/kernels.hpp"

namespace mos {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GridTooSmall: return "grid-too-small";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::DegenerateSeed: return "degenerate-seed";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

Grid2D Grid2D::from_domain(double x0, double x1, double y0, double y1,
                           std::size_t nx, std::size_t ny) {
  if (nx < 3 || ny < 3)
    fail(ErrorKind::GridTooSmall, "grid needs at least 3 nodes per direction");
  Grid2D g;
  g.nx = nx;
  g.ny = ny;
  g.x0 = x0;
  g.y0 = y0;
  g.dx = (x1 - x0) / static_cast<double>(nx - 1);
  g.dy = (y1 - y0) / static_cast<double>(ny - 1);
  g.validate();
  return g;
}

void Grid2D::validate() const {
  if (nx < 3 || ny < 3)
    fail(ErrorKind::GridTooSmall, "grid needs at least 3 nodes per direction");
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
    fail(ErrorKind::InvalidInput, "grid spacing must be positive and finite");
  if (!std::isfinite(x0) || !std::isfinite(y0))
    fail(ErrorKind::InvalidInput, "grid origin must be finite");
}

Grid2D Grid2D::refined() const {
  Grid2D g = *this;
  g.nx = 2 * (nx - 1) + 1;
  g.ny = 2 * (ny - 1) + 1;
  g.dx = dx / 2.0;
  g.dy = dy / 2.0;
  return g;
}

ScalarField::ScalarField(const Grid2D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size())
    fail(ErrorKind::InvalidInput,
         "field has " + std::to_string(values_.size()) + " values, grid needs " +
             std::to_string(grid_.size()));
}

ScalarField::ScalarField(const Grid2D& grid, double value)
    : ScalarField(grid, std::vector<double>(grid.size(), value)) {}

std::size_t ScalarField::first_non_finite() const noexcept {
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!std::isfinite(values_[k])) return k;
  return values_.size();
}

Vec3Field::Vec3Field(const Grid2D& grid, std::vector<Vec3> values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size())
    fail(ErrorKind::InvalidInput, "vector field size does not match grid");
}

ScalarField Vec3Field::component(int c) const {
  return ScalarField::generate(grid_, [&](std::size_t k) { return values_[k][c]; });
}

void NodeMask::flag(std::size_t k, std::size_t n) {
  if (valid_.empty()) valid_.assign(n, 1);
  valid_[k] = 0;
}

std::size_t NodeMask::flagged_count() const noexcept {
  std::size_t c = 0;
  for (auto v : valid_) c += (v == 0);
  return c;
}

void NodeMask::merge(const NodeMask& other, std::size_t n) {
  if (other.empty()) return;
  for (std::size_t k = 0; k < n; ++k)
    if (!other.valid(k)) flag(k, n);
}

NodeMask NodeMask::dilated(const Grid2D& g, std::size_t radius) const {
  NodeMask out;
  if (empty()) return out;
  const auto r = static_cast<std::ptrdiff_t>(radius);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      if (valid(g.index(i, j))) continue;
      for (std::ptrdiff_t dj = -r; dj <= r; ++dj)
        for (std::ptrdiff_t di = -r; di <= r; ++di) {
          const auto ii = static_cast<std::ptrdiff_t>(i) + di;
          const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(g.nx) ||
              jj >= static_cast<std::ptrdiff_t>(g.ny))
            continue;
          out.flag(g.index(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj)),
                   g.size());
        }
    }
  return out;
}

namespace {

// Five-point second-order closure with the central stencil's error term
// h^2 f'''/6, so composed derivatives stay second order up to the edge.
// Grouped as differences so constants give exactly 0.
constexpr std::size_t kWideClosure = 5;

inline double closure5(double f0, double f1, double f2, double f3, double f4) {
  return (5.0 * (f3 - f0) + 10.0 * (f1 - f2)) + (f1 - f4);
}

}  // namespace

ScalarField partial_x(const ScalarField& f) {
  const Grid2D& g = f.grid();
  if (g.nx < 3) fail(ErrorKind::GridTooSmall, "partial_x needs nx >= 3");
  const auto& k = simd::kernels();
  const double inv2h = 1.0 / (2.0 * g.dx);
  std::vector<double> out(g.size());
  const double* src = f.values().data();
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double* row = src + g.nx * j;
    double* dst = out.data() + g.nx * j;
    k.central_diff_interior(row, dst, g.nx, inv2h);
    const std::size_t n = g.nx;
    if (n >= kWideClosure) {
      dst[0] = closure5(row[0], row[1], row[2], row[3], row[4]) * inv2h;
      dst[n - 1] = closure5(row[n - 1], row[n - 2], row[n - 3], row[n - 4], row[n - 5]) * -inv2h;
    } else {
      dst[0] = (3.0 * (row[0] - row[1]) - (row[1] - row[2])) * -inv2h;
      dst[n - 1] = (3.0 * (row[n - 1] - row[n - 2]) - (row[n - 2] - row[n - 3])) * inv2h;
    }
  }
  return ScalarField(g, std::move(out));
}

ScalarField partial_y(const ScalarField& f) {
  const Grid2D& g = f.grid();
  if (g.ny < 3) fail(ErrorKind::GridTooSmall, "partial_y needs ny >= 3");
  const auto& k = simd::kernels();
  const double inv2h = 1.0 / (2.0 * g.dy);
  const std::size_t n = g.nx;
  std::vector<double> out(g.size());
  const double* src = f.values().data();
  auto row = [&](std::size_t j) { return src + n * j; };
  for (std::size_t j = 1; j + 1 < g.ny; ++j)
    k.row_diff(row(j + 1), row(j - 1), out.data() + n * j, n, inv2h);
  const std::size_t m = g.ny - 1;
  if (g.ny >= kWideClosure) {
    const double* lo[5] = {row(0), row(1), row(2), row(3), row(4)};
    const double* hi[5] = {row(m), row(m - 1), row(m - 2), row(m - 3), row(m - 4)};
    k.row_one_sided5(lo, out.data(), n, inv2h);
    k.row_one_sided5(hi, out.data() + n * m, n, -inv2h);
  } else {
    k.row_one_sided(row(2), row(1), row(0), out.data(), n, -inv2h);
    k.row_one_sided(row(m - 2), row(m - 1), row(m), out.data() + n * m, n, inv2h);
  }
  return ScalarField(g, std::move(out));
}

Norms norms(const ScalarField& f) {
  const Grid2D& g = f.grid();
  const auto& k = simd::kernels();
  const double* v = f.values().data();
  Norms out;
  double total = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double* row = v + g.nx * j;
    const double m = k.max_abs(row, g.nx);
    if (m > out.linf) out.linf = m;
    double s = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) s += row[i] * row[i];
    total += s;
  }
  out.l2 = std::sqrt(total * g.dx * g.dy);
  return out;
}

Norms masked_norms(const ScalarField& f, const NodeMask& mask,
                   std::size_t* excluded) {
  const Grid2D& g = f.grid();
  Norms out;
  double total = 0.0;
  std::size_t skipped = 0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t kk = g.index(i, j);
      const double v = f[kk];
      if (!mask.valid(kk) || std::isnan(v)) {
        ++skipped;
        continue;
      }
      const double a = std::fabs(v);
      if (a > out.linf) out.linf = a;
      s += v * v;
    }
    total += s;
  }
  out.l2 = std::sqrt(total * g.dx * g.dy);
  if (excluded) *excluded = skipped;
  return out;
}

namespace {
template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
  if (!(a.grid() == b.grid()))
    fail(ErrorKind::InvalidInput, "fields live on different grids");
  return ScalarField::generate(a.grid(), [&](std::size_t k) { return op(a[k], b[k]); });
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}
ScalarField operator*(double s, const ScalarField& a) {
  return ScalarField::generate(a.grid(), [&](std::size_t k) { return s * a[k]; });
}

}  // namespace mos
