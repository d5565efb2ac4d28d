#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "mos/omega.hpp"
#include "mos/seeds.hpp"

using namespace mos;

namespace {

GoverningFields seed(Family f, std::size_t n) {
  SeedSpec s;
  s.family = f;
  switch (f) {
    case Family::Cmc:
      s.grid = Grid2D::from_domain(0, 2, 0, 2, n, n);
      break;
    case Family::Pseudospherical:
      s.v = 0.3;
      s.grid = Grid2D::from_domain(-2.5, -0.5, -1, 1, n, n);
      break;
    case Family::Liouville:
      s.c1 = -0.35;
      s.grid = Grid2D::from_domain(0, 1, 0, 1, n, n);
      break;
  }
  return make_seed(s);
}

ResidualReport ratios(const GoverningFields& g) {
  return omega_ratios(coefficients_from_governing(g), g);
}

}  // namespace

TEST_CASE("ratio residuals below C h^2 with order 2 on every seed") {
  for (Family f : {Family::Cmc, Family::Pseudospherical, Family::Liouville}) {
    CAPTURE(to_string(f));
    const GoverningFields g1 = seed(f, 101), g2 = seed(f, 201);
    const ResidualReport a = ratios(g1), b = ratios(g2);
    const double h = g2.grid().h();
    for (std::string id : {"omega-1", "omega-2", "omega-3"}) {
      CAPTURE(id);
      CHECK(b.at(id).linf < 200 * h * h);
      if (b.at(id).linf > 1e-8) {
        const double order = std::log2(a.at(id).linf / b.at(id).linf);
        CHECK(order > 1.8);
        CHECK(order < 2.2);
      }
    }
  }
}

TEST_CASE("cmc: first ratio residual is the only nontrivial one") {
  const ResidualReport r = ratios(seed(Family::Cmc, 101));
  CHECK(r.at("omega-1").linf > 1e-6);
  CHECK(r.at("omega-2").linf < 1e-10);
}

TEST_CASE("constant alpha: ratios and residuals vanish") {
  const Grid2D g = Grid2D::from_domain(0, 1, 0, 1, 11, 11);
  GoverningFields c;
  c.kind = Kind::Second;
  c.alpha = ScalarField(g, std::numbers::pi / 3);
  c.xi = ScalarField(g, 0.0);
  c.h = ScalarField(g, 0.4);
  const CoefficientFields co = coefficients_from_governing(c);
  const OmegaRatios o = omega_ratio_fields(co);
  CHECK(norms(o.R1).linf == 0.0);
  CHECK(norms(o.R2).linf == 0.0);
  const ResidualReport r = omega_ratios(co, c);
  for (const auto& [id, e] : r.entries) CHECK(e.linf == 0.0);
}

TEST_CASE("umbilic nodes are flagged") {
  // kappa1 = kappa2 cannot occur on either kind, so build the coefficients.
  const Grid2D g = Grid2D::from_domain(0, 1, 0, 1, 7, 7);
  CoefficientFields co;
  co.A1 = co.A2 = co.Abar1 = co.Abar2 = ScalarField(g, 1.0);
  co.Ho = co.Ko = ScalarField(g, 0.5);
  co.p = co.q = ScalarField(g, 0.0);
  CHECK(omega_ratio_fields(co).umbilic.flagged_count() == g.size());
}

TEST_CASE("4-vector orthogonality: zero quad, linearity, membrane specialization") {
  const Grid2D g = Grid2D::from_domain(0, 1, 0, 1, 5, 5);
  const ScalarField z(g, 0.0);
  const OmegaQuad zero{z, z, z, z, z, z, z, z};
  CHECK(omega_general_check(zero).at("orthogonality-4").linf == 0.0);

  const GoverningFields s = seed(Family::Liouville, 21);
  const CoefficientFields co = coefficients_from_governing(s);
  OmegaQuad q = membrane_quad(co, s.qn);
  for (std::size_t k = 0; k < co.grid().size(); k += 17) {
    CHECK(q.H1[k] == co.A1[k]);
    CHECK(q.K1[k] == co.A2[k]);
    CHECK(q.H2[k] == -0.5 * s.qn * co.A1[k]);
    CHECK(q.K3[k] == co.Abar2[k]);
  }
  const ScalarField base = omega_general_field(q);
  std::vector<double> v(q.H3.values().begin(), q.H3.values().end());
  const double delta = 1e-4;
  v[50] += delta;
  q.H3 = ScalarField(co.grid(), v);
  const ScalarField moved = omega_general_field(q);
  CHECK(moved[50] - base[50] == doctest::Approx(delta * q.Kcirc[50]).epsilon(1e-9));
}

TEST_CASE("membrane specialization equals the orthogonality field bit for bit") {
  for (Family f : {Family::Cmc, Family::Pseudospherical, Family::Liouville}) {
    const GoverningFields g = seed(f, 101);
    const CoefficientFields co = coefficients_from_governing(g);
    const ScalarField a = omega_general_field(membrane_quad(co, g.qn));
    const ScalarField b = orthogonality_field(co, g.qn);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0);
    CHECK(omega_general_check(membrane_quad(co, g.qn)).at("orthogonality-4").linf < 1e-12);
  }
}
