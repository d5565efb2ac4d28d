#include "mos/frame.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "mos/sweep.hpp"

namespace mos {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMetricGuard = 1e-10;

void require_finite_coefficients(const CoefficientFields& c) {
  for (const ScalarField* f : {&c.p, &c.q, &c.Ho, &c.Ko, &c.A1, &c.A2, &c.Abar1, &c.Abar2}) {
    const std::size_t k = f->first_non_finite();
    if (k != f->size())
      fail(ErrorKind::Numerical,
           "non-finite coefficient at node " + std::to_string(k) +
               "; frame integration needs every node");
  }
}

Mat3 project_to_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

FrameGrid integrate_impl(const CoefficientFields& c, const Mat3& phi0,
                         const FrameOptions& opts) {
  const Grid2D& g = c.grid();
  auto step = [&](const Mat3& phi, std::size_t from, std::size_t to, bool along_x) {
    const Mat3 next = along_x
        ? rk4_right(phi, generator_x(c, from), generator_x(c, to), g.dx)
        : rk4_right(phi, generator_y(c, from), generator_y(c, to), g.dy);
    return opts.reorthonormalize ? project_to_rotation(next) : next;
  };
  FrameGrid out;
  out.grid = g;
  out.frames = sweep(g, phi0, opts.order, step);
  return out;
}

}  // namespace

Mat3 generator_x(const CoefficientFields& c, std::size_t k) {
  const double p = c.p[k], H = c.Ho[k];
  Mat3 u;
  u << 0.0, p, H,
       -p, 0.0, 0.0,
       -H, 0.0, 0.0;
  return u;
}

Mat3 generator_y(const CoefficientFields& c, std::size_t k) {
  const double q = c.q[k], K = c.Ko[k];
  Mat3 v;
  v << 0.0, -q, 0.0,
       q, 0.0, K,
       0.0, -K, 0.0;
  return v;
}

FrameGrid integrate_frame(const CoefficientFields& c, const Mat3& phi0,
                          const FrameOptions& opts) {
  if (!phi0.allFinite() || (phi0.transpose() * phi0 - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-12 ||
      std::fabs(phi0.determinant() - 1.0) > 1e-12)
    fail(ErrorKind::InvalidInput, "initial frame must be a rotation (orthonormal, det = +1)");
  require_finite_coefficients(c);
  return integrate_impl(c, phi0, opts);
}

PathIndependence path_independence(const CoefficientFields& c, const Mat3& phi0) {
  const FrameGrid a = integrate_frame(c, phi0, {SweepOrder::RowThenColumns, false});
  const FrameGrid b = integrate_frame(c, phi0, {SweepOrder::ColumnThenRows, false});
  PathIndependence out;
  for (std::size_t k = 0; k < a.frames.size(); ++k)
    out.max_error = std::fmax(out.max_error, (a.frames[k] - b.frames[k]).norm());

  const Grid2D& g = c.grid();
  const ScalarField py = partial_y(c.p), hy = partial_y(c.Ho);
  const ScalarField qx = partial_x(c.q), kx = partial_x(c.Ko);
  out.zero_curvature = ScalarField::generate(g, [&](std::size_t k) {
    Mat3 uy, vx;
    uy << 0.0, py[k], hy[k], -py[k], 0.0, 0.0, -hy[k], 0.0, 0.0;
    vx << 0.0, -qx[k], 0.0, qx[k], 0.0, kx[k], 0.0, -kx[k], 0.0;
    const Mat3 u = generator_x(c, k), v = generator_y(c, k);
    return (uy - vx + v * u - u * v).norm();
  });
  return out;
}

double path_independence_error(const CoefficientFields& c, const Mat3& phi0) {
  return path_independence(c, phi0).max_error;
}

double orthonormality_drift(const FrameGrid& f) {
  double d = 0.0;
  for (const Mat3& m : f.frames)
    d = std::fmax(d, (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff());
  return d;
}

Reconstruction reconstruct_surfaces(const FrameGrid& f, const CoefficientFields& c,
                                    const std::array<Vec3, 3>& origins) {
  if (!(f.grid == c.grid()))
    fail(ErrorKind::InvalidInput, "frame and coefficients live on different grids");
  require_finite_coefficients(c);
  const Grid2D& g = f.grid;

  // Columns of R are (N, r, rbar); R_x = X (Ho, A1, Abar1).
  auto row_x = [&](std::size_t k) {
    return Eigen::RowVector3d(c.Ho[k], c.A1[k], c.Abar1[k]);
  };
  auto row_y = [&](std::size_t k) {
    return Eigen::RowVector3d(c.Ko[k], c.A2[k], c.Abar2[k]);
  };

  // Re-integrates the frame over each interval from the stored node frame,
  // jointly with R, so the stages see consistent tangent vectors.
  auto step = [&](const Mat3& R, std::size_t from, std::size_t to, bool along_x) {
    const Mat3 g0 = along_x ? generator_x(c, from) : generator_y(c, from);
    const Mat3 g1 = along_x ? generator_x(c, to) : generator_y(c, to);
    const Mat3 gm = 0.5 * (g0 + g1);
    const Eigen::RowVector3d w0 = along_x ? row_x(from) : row_y(from);
    const Eigen::RowVector3d w1 = along_x ? row_x(to) : row_y(to);
    const Eigen::RowVector3d wm = 0.5 * (w0 + w1);
    const int col = along_x ? 0 : 1;
    const double h = along_x ? g.dx : g.dy;
    const Mat3& phi = f.frames[from];

    const Mat3 p1 = phi * g0;
    const Mat3 r1 = phi.col(col) * w0;
    const Mat3 phi2 = phi + 0.5 * h * p1;
    const Mat3 p2 = phi2 * gm;
    const Mat3 r2 = phi2.col(col) * wm;
    const Mat3 phi3 = phi + 0.5 * h * p2;
    const Mat3 p3 = phi3 * gm;
    const Mat3 r3 = phi3.col(col) * wm;
    const Mat3 phi4 = phi + h * p3;
    const Mat3 r4 = phi4.col(col) * w1;
    return Mat3(R + (h / 6.0) * (r1 + 2.0 * r2 + 2.0 * r3 + r4));
  };

  Mat3 R0;
  R0.col(0) = origins[0];
  R0.col(1) = origins[1];
  R0.col(2) = origins[2];
  const std::vector<Mat3> R = sweep(g, R0, SweepOrder::RowThenColumns, step);

  std::vector<Vec3> N(g.size()), r(g.size()), rb(g.size());
  Reconstruction out;
  for (std::size_t k = 0; k < g.size(); ++k) {
    N[k] = R[k].col(0);
    r[k] = R[k].col(1);
    rb[k] = R[k].col(2);
    out.gauss_map_mismatch = std::fmax(out.gauss_map_mismatch, (N[k] - f.N(k)).norm());
    if (std::fabs(c.A1[k] * c.A2[k]) < kMetricGuard) out.degenerate.flag(k, g.size());
  }
  out.surfaces = {Vec3Field(g, std::move(N)), Vec3Field(g, std::move(r)),
                  Vec3Field(g, std::move(rb))};
  return out;
}

MeshCurvatures mesh_curvatures(const Vec3Field& r, double rel_eps,
                               const NodeMask& exclude) {
  const Grid2D& g = r.grid();
  const std::size_t n = g.size();
  std::vector<double> H(n, kNaN), K(n, kNaN), det(n, kNaN);
  const NodeMask excl = exclude.dilated(g, 1);
  double det_max = 0.0;
  for (std::size_t j = 1; j + 1 < g.ny; ++j)
    for (std::size_t i = 1; i + 1 < g.nx; ++i) {
      const Vec3 rx = (r(i + 1, j) - r(i - 1, j)) / (2.0 * g.dx);
      const Vec3 ry = (r(i, j + 1) - r(i, j - 1)) / (2.0 * g.dy);
      const Vec3 rxx = (r(i + 1, j) - 2.0 * r(i, j) + r(i - 1, j)) / (g.dx * g.dx);
      const Vec3 ryy = (r(i, j + 1) - 2.0 * r(i, j) + r(i, j - 1)) / (g.dy * g.dy);
      const Vec3 rxy = (r(i + 1, j + 1) - r(i + 1, j - 1) - r(i - 1, j + 1) + r(i - 1, j - 1)) /
                       (4.0 * g.dx * g.dy);
      const double E = rx.dot(rx), F = rx.dot(ry), G = ry.dot(ry);
      const double d = E * G - F * F;
      const std::size_t k = g.index(i, j);
      det[k] = d;
      det_max = std::fmax(det_max, d);
      const Vec3 cr = rx.cross(ry);
      const double cn = cr.norm();
      if (!(cn > 0.0)) continue;
      const Vec3 nrm = cr / cn;
      const double e = rxx.dot(nrm), ff = rxy.dot(nrm), gg = ryy.dot(nrm);
      H[k] = (e * G - 2.0 * ff * F + gg * E) / (2.0 * d);
      K[k] = (e * gg - ff * ff) / d;
    }
  MeshCurvatures out;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::isnan(det[k]) || det[k] <= rel_eps * det_max || !excl.valid(k) ||
        std::isnan(H[k])) {
      out.flags.flag(k, n);
      H[k] = kNaN;
      K[k] = kNaN;
    }
  }
  out.meanH = ScalarField(g, std::move(H));
  out.gaussK = ScalarField(g, std::move(K));
  return out;
}

}  // namespace mos
