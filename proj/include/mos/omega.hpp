#pragma once

// Omega-surface checks: curvature-ratio identities with U = V = 1, and the
// 4-vector orthogonality whose membrane specialization is out-of-plane
// equilibrium.

#include "mos/membrane.hpp"

namespace mos {

/// H = (H1, H2, H3, Ho), K = (K1, K2, K3, Ko), paired by
/// H1 K2 + H2 K1 + H3 Ko + K3 Ho.
struct OmegaQuad {
  ScalarField H1, H2, H3, Hcirc;
  ScalarField K1, K2, K3, Kcirc;
};

/// (H1, K1) = (A1, A2), (H2, K2) = -(qn/2)(A1, A2), (H3, K3) = (Abar1, Abar2).
OmegaQuad membrane_quad(const CoefficientFields& c, double qn);

/// Relative umbilic threshold on |kappa1 - kappa2|.
inline constexpr double kUmbilicRelative = 1e-6;

struct OmegaRatios {
  ScalarField R1, R2;
  NodeMask umbilic;
};

/// R1 = (kappa1)_x / (kappa1 - kappa2) * A1 / A2,
/// R2 = (kappa2)_y / (kappa1 - kappa2) * A2 / A1.
OmegaRatios omega_ratio_fields(const CoefficientFields& c);

/// omega-1 = R1 + alpha_x, omega-2 = R2 - alpha_y (first kind);
/// omega-1 = R1 - alpha_x, omega-2 = R2 - alpha_y (second kind);
/// omega-3 = (R1)_y + eps^2 (R2)_x with eps^2 = +1 / -1.
ResidualReport omega_ratios(const CoefficientFields& c, const GoverningFields& g);

/// "orthogonality-4": H1 K2 + H2 K1 + H3 Ko + K3 Ho, evaluated in the same
/// operation order as orthogonality_field so the two agree bit for bit.
ScalarField omega_general_field(const OmegaQuad& q);
ResidualReport omega_general_check(const OmegaQuad& q);

}  // namespace mos
