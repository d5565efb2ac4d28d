#pragma once

// Gauss-Weingarten frame integration and reconstruction of the Combescure
// triple (N, r, rbar) from coefficient fields.

#include <array>
#include <vector>

#include <Eigen/Core>

#include "mos/membrane.hpp"
#include "mos/sweep.hpp"

namespace mos {

using Mat3 = Eigen::Matrix3d;

/// Orthonormal frame Phi = (X, Y, N) at every node, stored as columns.
struct FrameGrid {
  Grid2D grid;
  std::vector<Mat3> frames;

  const Mat3& operator()(std::size_t i, std::size_t j) const {
    return frames[grid.index(i, j)];
  }
  Vec3 X(std::size_t k) const { return frames[k].col(0); }
  Vec3 Y(std::size_t k) const { return frames[k].col(1); }
  Vec3 N(std::size_t k) const { return frames[k].col(2); }
};

struct SurfaceTriple {
  Vec3Field N, r, rbar;
};

struct FrameOptions {
  SweepOrder order = SweepOrder::RowThenColumns;
  /// Polar projection back onto SO(3) after every step.
  bool reorthonormalize = false;
};

/// Generators of Phi_x = Phi U, Phi_y = Phi V at node k.
Mat3 generator_x(const CoefficientFields& c, std::size_t k);
Mat3 generator_y(const CoefficientFields& c, std::size_t k);

/// Integrates the frame from phi0 at (x0, y0) with classical RK4, one step
/// per grid interval and linearly interpolated coefficients at the stages.
FrameGrid integrate_frame(const CoefficientFields& c, const Mat3& phi0,
                          const FrameOptions& opts = {});

struct PathIndependence {
  /// max over nodes of || Phi_rows_first - Phi_columns_first ||_F
  double max_error = 0.0;
  /// || U_y - V_x + V U - U V ||_F with finite-difference U_y, V_x.
  ScalarField zero_curvature;
};
PathIndependence path_independence(const CoefficientFields& c, const Mat3& phi0);
double path_independence_error(const CoefficientFields& c, const Mat3& phi0);

/// max over nodes of the largest |entry| of Phi^T Phi - I.
double orthonormality_drift(const FrameGrid& f);

struct Reconstruction {
  SurfaceTriple surfaces;
  /// max |N_integrated - third frame column|
  double gauss_map_mismatch = 0.0;
  /// Nodes where |A1 A2| is below the degeneracy threshold.
  NodeMask degenerate;
};

/// Integrates R_x = X (Ho, A1, Abar1), R_y = Y (Ko, A2, Abar2) with the same
/// sweep and stepping as the frame; origins are (N, r, rbar) at (x0, y0).
Reconstruction reconstruct_surfaces(const FrameGrid& f, const CoefficientFields& c,
                                    const std::array<Vec3, 3>& origins);

struct MeshCurvatures {
  ScalarField meanH;
  ScalarField gaussK;
  NodeMask flags;  // boundary nodes and degenerate metric
};

/// Discrete curvatures from central differences of r at interior nodes, with
/// normal r_x x r_y / |r_x x r_y| and H = (eG - 2fF + gE) / (2(EG - F^2)).
/// Nodes with EG - F^2 <= rel_eps * max(EG - F^2), or touching a node of
/// `exclude`, are flagged.
MeshCurvatures mesh_curvatures(const Vec3Field& r, double rel_eps = 1e-6,
                               const NodeMask& exclude = {});

}  // namespace mos
