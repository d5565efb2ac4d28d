#include "mos/omega.hpp"

#include <cmath>
#include <limits>

namespace mos {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double guarded(double num, double den) {
  return std::fabs(den) < kDivisionGuard ? kNaN : num / den;
}

}  // namespace

OmegaQuad membrane_quad(const CoefficientFields& c, double qn) {
  const double half = -0.5 * qn;
  return {c.A1, half * c.A1, c.Abar1, c.Ho, c.A2, half * c.A2, c.Abar2, c.Ko};
}

OmegaRatios omega_ratio_fields(const CoefficientFields& c) {
  const Grid2D& g = c.grid();
  const std::size_t n = g.size();
  const ScalarField k1 = c.kappa1(), k2 = c.kappa2();
  const ScalarField k1x = partial_x(k1), k2y = partial_y(k2);
  double kmax = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (double v : {k1[k], k2[k]})
      if (std::isfinite(v)) kmax = std::fmax(kmax, std::fabs(v));
  OmegaRatios out;
  std::vector<double> r1(n, kNaN), r2(n, kNaN);
  for (std::size_t k = 0; k < n; ++k) {
    const double d = k1[k] - k2[k];
    if (!(std::fabs(d) >= kUmbilicRelative * kmax)) {
      out.umbilic.flag(k, n);
      continue;
    }
    r1[k] = k1x[k] / d * guarded(c.A1[k], c.A2[k]);
    r2[k] = k2y[k] / d * guarded(c.A2[k], c.A1[k]);
  }
  out.R1 = ScalarField(g, std::move(r1));
  out.R2 = ScalarField(g, std::move(r2));
  return out;
}

ResidualReport omega_ratios(const CoefficientFields& c, const GoverningFields& g0) {
  const GoverningFields g = with_sentinels(g0);
  if (!(c.grid() == g.grid())) fail(ErrorKind::InvalidInput, "coefficients and seed differ in grid");
  const OmegaRatios r = omega_ratio_fields(c);
  const ScalarField ax = partial_x(g.alpha), ay = partial_y(g.alpha);
  const bool first = g.kind == Kind::First;
  const double s1 = first ? 1.0 : -1.0;
  const double eps2 = first ? 1.0 : -1.0;
  const Grid2D& grid = c.grid();
  const ScalarField r1y = partial_y(r.R1), r2x = partial_x(r.R2);
  NodeMask mask = r.umbilic;
  mask.merge(g.mask, grid.size());
  ResidualReport rep;
  rep.add("omega-1", ScalarField::generate(grid, [&](std::size_t k) { return r.R1[k] + s1 * ax[k]; }),
          false, mask);
  rep.add("omega-2", ScalarField::generate(grid, [&](std::size_t k) { return r.R2[k] - ay[k]; }),
          false, mask);
  rep.add("omega-3", ScalarField::generate(grid, [&](std::size_t k) { return r1y[k] + eps2 * r2x[k]; }),
          false, mask);
  return rep;
}

ScalarField omega_general_field(const OmegaQuad& q) {
  return ScalarField::generate(q.H1.grid(), [&](std::size_t k) {
    return ((q.H1[k] * q.K2[k] + q.H2[k] * q.K1[k]) + q.H3[k] * q.Kcirc[k]) +
           q.K3[k] * q.Hcirc[k];
  });
}

ResidualReport omega_general_check(const OmegaQuad& q) {
  ResidualReport rep;
  rep.add("orthogonality-4", omega_general_field(q), true);
  return rep;
}

}  // namespace mos
