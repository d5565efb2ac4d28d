#include "mos/seeds.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace mos {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Cmc: return "cmc";
    case Family::Pseudospherical: return "pseudospherical";
    case Family::Liouville: return "liouville";
  }
  return "unknown";
}

Family parse_family(std::string_view s) {
  if (s == "cmc") return Family::Cmc;
  if (s == "pseudospherical") return Family::Pseudospherical;
  if (s == "liouville") return Family::Liouville;
  fail(ErrorKind::InvalidParameter, "unknown seed family '" + std::string(s) + "'");
}

Kind kind_of(Family f) { return f == Family::Cmc ? Kind::First : Kind::Second; }

void SeedSpec::validate() const {
  grid.validate();
  if (qn == 0.0 || !std::isfinite(qn))
    fail(ErrorKind::InvalidParameter, "q_n must be finite and nonzero");
  switch (family) {
    case Family::Cmc:
      if (alpha0 == 0.0)
        fail(ErrorKind::DegenerateSeed,
             "alpha0 = 0 gives Ho = 0 identically (singular stresses)");
      if (!std::isfinite(alpha0)) fail(ErrorKind::InvalidParameter, "alpha0 must be finite");
      break;
    case Family::Pseudospherical:
      if (!(std::fabs(v) < 1.0))
        fail(ErrorKind::InvalidParameter, "kink velocity must satisfy |v| < 1");
      break;
    case Family::Liouville:
      if (!(a > 0.0) || !std::isfinite(a))
        fail(ErrorKind::InvalidParameter, "liouville parameter a must be positive");
      if (!std::isfinite(c1)) fail(ErrorKind::InvalidParameter, "c1 must be finite");
      break;
  }
}

CmcProfile cmc_profile(double alpha0, double dx, std::size_t n) {
  using State = std::array<double, 2>;
  auto rhs = [](const State& s) -> State {
    return {s[1], -std::sinh(s[0]) * std::cosh(s[0])};
  };
  constexpr int kSubsteps = 4;
  const double hs = dx / kSubsteps;
  CmcProfile out;
  out.a.resize(n);
  out.da.resize(n);
  State s{alpha0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    out.a[i] = s[0];
    out.da[i] = s[1];
    if (i + 1 == n) break;
    for (int sub = 0; sub < kSubsteps; ++sub) {
      const State k1 = rhs(s);
      const State k2 = rhs({s[0] + 0.5 * hs * k1[0], s[1] + 0.5 * hs * k1[1]});
      const State k3 = rhs({s[0] + 0.5 * hs * k2[0], s[1] + 0.5 * hs * k2[1]});
      const State k4 = rhs({s[0] + hs * k3[0], s[1] + hs * k3[1]});
      for (int c = 0; c < 2; ++c)
        s[c] += hs / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
  }
  return out;
}

GoverningFields seed_cmc(const SeedSpec& spec) {
  if (spec.family != Family::Cmc)
    fail(ErrorKind::InvalidParameter, "seed_cmc needs family cmc");
  spec.validate();
  const Grid2D& g = spec.grid;
  const CmcProfile prof = cmc_profile(spec.alpha0, g.dx, g.nx);
  GoverningFields out;
  out.kind = Kind::First;
  out.qn = spec.qn;
  out.alpha = ScalarField::generate(g, [&](std::size_t k) { return prof.a[k % g.nx]; });
  out.xi = ScalarField(g, 0.0);
  out.h = ScalarField(g, 1.0);
  return out;
}

GoverningFields seed_pseudospherical(const SeedSpec& spec) {
  if (spec.family != Family::Pseudospherical)
    fail(ErrorKind::InvalidParameter, "seed_pseudospherical needs family pseudospherical");
  spec.validate();
  const double gamma = 1.0 / std::sqrt(1.0 - spec.v * spec.v);
  GoverningFields out;
  out.kind = Kind::Second;
  out.qn = spec.qn;
  // alpha = beta / 2 with the boosted kink beta = 4 atan(exp(gamma (x - v y))).
  out.alpha = ScalarField::sample(spec.grid, [&](double x, double y) {
    return 2.0 * std::atan(std::exp(gamma * (x - spec.v * y)));
  });
  out.xi = ScalarField(spec.grid, 0.0);
  out.h = ScalarField(spec.grid, 0.0);
  return out;
}

GoverningFields seed_liouville(const SeedSpec& spec) {
  if (spec.family != Family::Liouville)
    fail(ErrorKind::InvalidParameter, "seed_liouville needs family liouville");
  spec.validate();
  const double a = spec.a;
  auto u = [a](double x, double y) { return a * (x * x + y * y) + 1.0 / (8.0 * a); };
  for (std::size_t j = 0; j < spec.grid.ny; ++j)
    for (std::size_t i = 0; i < spec.grid.nx; ++i)
      if (!(u(spec.grid.x(i), spec.grid.y(j)) > 0.0))
        fail(ErrorKind::Numerical, "liouville profile u must stay positive");
  GoverningFields out;
  out.kind = Kind::Second;
  out.qn = spec.qn;
  out.alpha = ScalarField(spec.grid, std::numbers::pi / 4.0);
  out.xi = ScalarField::sample(spec.grid, [&](double x, double y) { return -std::log(u(x, y)); });
  out.h = ScalarField::sample(spec.grid, [&](double x, double y) {
    return (2.0 * a * y * y + 1.0 / (4.0 * a) + spec.c1) / u(x, y) - 1.0;
  });
  return out;
}

GoverningFields make_seed(const SeedSpec& spec) {
  switch (spec.family) {
    case Family::Cmc: return seed_cmc(spec);
    case Family::Pseudospherical: return seed_pseudospherical(spec);
    case Family::Liouville: return seed_liouville(spec);
  }
  fail(ErrorKind::InvalidParameter, "unknown family");
}

}  // namespace mos
