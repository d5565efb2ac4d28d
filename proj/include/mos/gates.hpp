#pragma once

// Pass/fail gates for residual reports: derivative-based entries must stay
// below C h^2 and converge at order 2 under grid halving; algebraic entries
// must sit at rounding level.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mos/membrane.hpp"
#include "mos/seeds.hpp"

namespace mos {

struct GatePolicy {
  double C = 100.0;              // derivative residual bound C h^2
  double algebraic_tol = 1e-12;  // pure-algebra bound
  double order_lo = 1.8;
  double order_hi = 2.2;
  /// Fine-grid residuals below this are rounding-dominated; their measured
  /// order carries no information and is not gated.
  double noise_floor = 1e-8;
};

/// Pinned per-family constants C for the h^2 gate.
double residual_constant(Family f);

/// Gate for the residuals of a Backlund-transformed surface. Its error
/// constants come from the seed's FD noise pushed through the Lax solution.
inline constexpr double kPrimedResidualConstant = 400.0;
inline constexpr double kPrimedAlgebraicTol = 1e-8;

struct GatedEntry {
  std::string id;
  std::vector<ResidualEntry> ladder;  // coarse to fine
  std::vector<double> bounds;         // per grid
  std::vector<std::optional<double>> orders;  // between consecutive grids
  bool bound_pass = true;
  bool order_pass = true;
  bool pass() const { return bound_pass && order_pass; }
};

struct GatedReport {
  std::vector<Grid2D> grids;
  std::map<std::string, GatedEntry> entries;
  bool pass() const;
  const GatedEntry& at(const std::string& id) const;
};

/// `ladder` holds the same report on successively halved grids.
GatedReport gate(const std::vector<ResidualReport>& ladder, const GatePolicy& policy);

}  // namespace mos
