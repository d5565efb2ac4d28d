#pragma once

// Lax pair of a membrane O surface, its quadric constraint, and the
// Backlund transformation that maps each kind to itself.

#include <Eigen/Core>

#include "mos/frame.hpp"
#include "mos/membrane.hpp"

namespace mos {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Nodes with |omega|, |nu| or |m omega nu| below this are singular.
inline constexpr double kSingularGuard = 1e-8;

/// (lambda0, 0, omega0, phi0, chi0) with chi0 chosen so that
/// lambda^2 + mu^2 + omega^2 = 2 m omega nu holds at the base node.
Vec5 admissible_initial(double m, double qn, double lambda0, double omega0,
                        double phi0);

/// State (lambda, mu, omega, phi, chi) obeys s_x = Lx s, s_y = Ly s.
Mat5 lax_matrix_x(const CoefficientFields& c, double qn, double m, std::size_t k);
Mat5 lax_matrix_y(const CoefficientFields& c, double qn, double m, std::size_t k);

struct LaxFields {
  double m = 0.0;
  double qn = 1.0;
  ScalarField lambda, mu, omega, phi, chi;
  ScalarField nu;    // chi - qn phi^2 / (2 omega)
  ScalarField bigM;  // m omega nu
  NodeMask singular;
  /// max |lambda^2 + mu^2 + omega^2 - 2 m omega nu| / |2 m omega0 nu0|
  double constraint_drift = 0.0;
  /// max over nodes of the state difference between the two sweep orders
  double path_error = 0.0;

  const Grid2D& grid() const noexcept { return lambda.grid(); }
  Vec5 state(std::size_t k) const {
    Vec5 s;
    s << lambda[k], mu[k], omega[k], phi[k], chi[k];
    return s;
  }
};

/// RK4 over the grid from init at (x0, y0), rows first; the columns-first
/// sweep is run as well to measure path independence.
LaxFields integrate_lax(const CoefficientFields& c, double qn, double m,
                        const Vec5& init);

/// (N', r', rbar') = (N, r, rbar) - (omega, phi, chi) M / (m omega nu), with
/// M = lambda X + mu Y + omega N. Singular nodes hold NaN.
SurfaceTriple backlund_surface(const SurfaceTriple& s, const FrameGrid& f,
                               const LaxFields& lx);

struct CoefficientUpdate {
  ScalarField H, K;
  /// A1', A2', Ho', Ko', Abar1', Abar2' from the raw update; p and q are
  /// left NaN (they are not determined pointwise).
  CoefficientFields primed;
};
CoefficientUpdate backlund_coefficients(const CoefficientFields& c,
                                        const LaxFields& lx, double qn);

/// t = h - (phi / omega) e^xi
ScalarField transform_parameter(const GoverningFields& g, const LaxFields& lx);

/// Primed (xi', alpha', h') of the same kind. The mask collects singular
/// nodes, |t| >= 1 (first kind) and non-positive e^xi' arguments.
GoverningFields backlund_governing(const GoverningFields& g, const LaxFields& lx);

/// Coefficients of primed governing fields in the sign convention of the
/// transform: for the first kind A2, Ko, Abar2 (and p, q) change sign.
CoefficientFields theorem_coefficients(const GoverningFields& primed);

struct BacklundResult {
  LaxFields lax;
  ScalarField t;
  GoverningFields primed_governing;
  /// Raw update with p, q taken from theorem_coefficients.
  CoefficientFields primed_coefficients;
  ScalarField H, K;
  /// max |raw - theorem| over the six coefficients at valid nodes
  double coefficient_crosscheck = 0.0;
  /// max |Ho - H/(m nu) - e^xi' sinh alpha'| (sin for the second kind)
  double ho_crosscheck = 0.0;
  /// governing residuals of the primed fields plus Gauss-Codazzi, first
  /// integrals and orthogonality of the raw primed coefficients
  ResidualReport primed_report;
};

BacklundResult backlund(const GoverningFields& g, double m, const Vec5& init);

struct BianchiDarbouxResult {
  BacklundResult result;
  /// State of the reduced system (lambda, mu, omega, phi, sigma).
  ScalarField sigma;
  /// max |reduced - general| over nodes, including |chi - qn phi|
  double reduced_vs_general = 0.0;
  double e_xi_prime_max_dev = 0.0;   // max |e^xi' - 1|
  double h_prime_max_dev = 0.0;      // max |h' - 1|
  double e_alpha_prime_max_dev = 0.0;  // max |e^alpha' + (phi / sigma) e^-alpha|
};

/// Reduced system in (lambda, mu, omega, phi, sigma = phi - 2 omega) with
/// mbar = m qn / 2, from mu0 = 0, chi0 = qn phi0 and lambda0 >= 0 fixed by the
/// constraint. The seed must be a CMC surface (first kind, xi = 0, h = 1).
BianchiDarbouxResult bianchi_darboux(const GoverningFields& g, double mbar,
                                     double omega0, double phi0);

}  // namespace mos
