#include <doctest.h>

#include <cmath>
#include <complex>

#include "mos/backlund.hpp"
#include "mos/seeds.hpp"

using namespace mos;

namespace {

GoverningFields seed(Family f, double x0, double x1, double y0, double y1, std::size_t n) {
  SeedSpec s;
  s.family = f;
  s.v = 0.3;
  s.c1 = -0.35;
  s.grid = Grid2D::from_domain(x0, x1, y0, y1, n, n);
  return make_seed(s);
}

GoverningFields cmc_unit(std::size_t n) { return seed(Family::Cmc, 0, 1, 0, 1, n); }

double quadric(const Vec5& s, double m, double qn) {
  return s[0] * s[0] + s[1] * s[1] + s[2] * s[2] - 2 * m * s[2] * s[4] + m * qn * s[3] * s[3];
}

}  // namespace

TEST_CASE("admissible initial states") {
  const Vec5 a = admissible_initial(1, 1, 0, 1, 0);
  CHECK(a[1] == 0.0);
  CHECK(a[4] == doctest::Approx(0.5));
  const double nu = a[4] - 1.0 * a[3] * a[3] / (2 * a[2]);
  CHECK(nu == doctest::Approx(0.5));
  CHECK(1.0 * a[2] * nu == doctest::Approx(0.5));

  const Vec5 b = admissible_initial(1, 1, 1, 1, 1);
  CHECK(b[4] == doctest::Approx(1.5));
  for (auto [m, qn, l, w, p] : {std::array<double, 5>{0.5, 2, 0.3, -1.2, 0.7}, {-3, 0.4, 2, 0.1, -5}}) {
    const Vec5 s = admissible_initial(m, qn, l, w, p);
    CHECK(std::fabs(quadric(s, m, qn)) < 1e-13 * (1 + std::fabs(2 * m * s[2] * s[4])));
  }
  CHECK_THROWS_AS(admissible_initial(0, 1, 0, 1, 0), Error);
  CHECK_THROWS_AS(admissible_initial(1, 1, 0, 0, 0), Error);
}

TEST_CASE("zero initial state: zero fields, every node singular") {
  const CoefficientFields c = coefficients_from_governing(cmc_unit(11));
  const LaxFields lx = integrate_lax(c, 1.0, 1.0, Vec5::Zero());
  CHECK(norms(lx.lambda).linf == 0.0);
  CHECK(norms(lx.chi).linf == 0.0);
  CHECK(lx.singular.flagged_count() == c.grid().size());
  CHECK_THROWS_AS(backlund(cmc_unit(11), 1.0, Vec5::Zero()), Error);
}

TEST_CASE("lax matrices conserve the quadric") {
  const CoefficientFields c = coefficients_from_governing(seed(Family::Liouville, 0, 1, 0, 1, 11));
  const double m = 0.7, qn = 1.0;
  Eigen::Matrix<double, 5, 5> Q = Eigen::Matrix<double, 5, 5>::Zero();
  Q(0, 0) = Q(1, 1) = Q(2, 2) = 1;
  Q(2, 4) = Q(4, 2) = -m;
  Q(3, 3) = m * qn;
  for (std::size_t k : {0u, 60u, 120u}) {
    const Mat5 X = lax_matrix_x(c, qn, m, k), Y = lax_matrix_y(c, qn, m, k);
    CHECK((X.transpose() * Q + Q * X).norm() < 1e-13);
    CHECK((Y.transpose() * Q + Q * Y).norm() < 1e-13);
  }
}

TEST_CASE("constraint drift and path error on the cmc seed") {
  const Vec5 init = admissible_initial(0.5, 1.0, 0.0, 1.0, 0.3);
  const LaxFields l1 = integrate_lax(coefficients_from_governing(cmc_unit(101)), 1.0, 0.5, init);
  const LaxFields l2 = integrate_lax(coefficients_from_governing(cmc_unit(201)), 1.0, 0.5, init);
  CHECK(l2.constraint_drift < 1e-8);
  CHECK(l2.singular.flagged_count() == 0);
  // the coefficients themselves carry O(h^2) finite-difference error
  CHECK(std::log2(l1.path_error / l2.path_error) > 1.8);

  CoefficientFields bad = coefficients_from_governing(cmc_unit(201));
  bad.Ho = 1.01 * bad.Ho;
  const LaxFields lb = integrate_lax(bad, 1.0, 0.5, init);
  CHECK(lb.path_error > 100 * l2.path_error);
}

TEST_CASE("transformed surface: displacement norm identity") {
  const GoverningFields g = cmc_unit(41);
  const CoefficientFields c = coefficients_from_governing(g);
  const FrameGrid f = integrate_frame(c, Mat3::Identity());
  const Reconstruction rec = reconstruct_surfaces(f, c, {Vec3(0, 0, 1), Vec3::Zero(), Vec3::Zero()});
  const double m = 0.5;
  const LaxFields lx = integrate_lax(c, 1.0, m, admissible_initial(m, 1.0, 0.0, 1.0, 0.3));
  const SurfaceTriple moved = backlund_surface(rec.surfaces, f, lx);
  for (std::size_t k = 0; k < g.grid().size(); k += 7) {
    const double l = lx.lambda[k], u = lx.mu[k], w = lx.omega[k];
    const double expect = std::fabs(lx.phi[k]) * std::sqrt(l * l + u * u + w * w) / std::fabs(m * w * lx.nu[k]);
    CHECK((moved.r[k] - rec.surfaces.r[k]).norm() == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("general transforms of every seed: kind preserved, cross-checks at rounding") {
  struct Case {
    GoverningFields g;
    double m;
    Vec5 init;
  };
  const GoverningFields cmc = cmc_unit(101);
  const GoverningFields ps = seed(Family::Pseudospherical, -2.5, -1.5, -0.5, 0.5, 101);
  const GoverningFields lv = seed(Family::Liouville, 0, 1, 0, 1, 101);
  const Case cases[] = {{cmc, 0.5, admissible_initial(0.5, 1, 0, 1, 0.3)},
                        {ps, 0.5, admissible_initial(0.5, 1, 0, 1, 2)},
                        {lv, 0.5, admissible_initial(0.5, 1, 0, 1, 0.3)}};
  for (const Case& cs : cases) {
    const BacklundResult r = backlund(cs.g, cs.m, cs.init);
    CHECK(r.primed_governing.kind == cs.g.kind);
    CHECK(r.primed_governing.mask.flagged_count() == 0);
    CHECK(r.coefficient_crosscheck < 1e-8);
    CHECK(r.ho_crosscheck < 1e-8);
    const double h = cs.g.grid().h();
    for (const auto& [id, e] : r.primed_report.entries) {
      CAPTURE(id);
      CHECK(e.linf < (e.algebraic ? 1e-8 : 400 * h * h));
    }
    CHECK(r.primed_report.contains("orthogonality"));
    CHECK(r.primed_report.contains("first-integral-1"));
  }
}

TEST_CASE("second kind: e^{i alpha'} = e^{i alpha} (1 - i t) / (1 + i t)") {
  const GoverningFields g = seed(Family::Liouville, 0, 1, 0, 1, 21);
  const BacklundResult r = backlund(g, 0.5, admissible_initial(0.5, 1, 0, 1, 0.3));
  for (std::size_t k = 0; k < g.grid().size(); k += 11) {
    const std::complex<double> i(0, 1), t = r.t[k];
    const std::complex<double> lhs = std::exp(i * r.primed_governing.alpha[k]);
    const std::complex<double> rhs = std::exp(i * g.alpha[k]) * (1.0 - i * t) / (1.0 + i * t);
    CHECK(std::abs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("first kind: raw update and the t = 0 node") {
  const GoverningFields g = cmc_unit(21);
  const CoefficientFields c = coefficients_from_governing(g);
  const LaxFields lx = integrate_lax(c, 1.0, 0.5, admissible_initial(0.5, 1, 0, 1, 0.3));
  const CoefficientUpdate u = backlund_coefficients(c, lx, 1.0);
  for (std::size_t k = 0; k < c.grid().size(); k += 5) {
    const double s = u.H[k] / lx.bigM[k];
    CHECK(u.primed.Ho[k] == doctest::Approx(c.Ho[k] - s * lx.omega[k]).epsilon(1e-13));
    CHECK(u.primed.A1[k] == doctest::Approx(c.A1[k] - s * lx.phi[k]).epsilon(1e-13));
    CHECK(u.primed.Abar1[k] == doctest::Approx(c.Abar1[k] - s * lx.chi[k]).epsilon(1e-13));
  }
  // phi0 = h omega0 e^-xi gives t = 0 at the base node: alpha' = -alpha there.
  const LaxFields l0 = integrate_lax(c, 1.0, 0.5, admissible_initial(0.5, 1, 0, 1, 1));
  const GoverningFields p = backlund_governing(g, l0);
  CHECK(transform_parameter(g, l0)[0] == doctest::Approx(0.0).scale(1));
  CHECK(p.alpha[0] == doctest::Approx(-g.alpha[0]).epsilon(1e-14));
  CHECK(p.h[0] == doctest::Approx(std::exp(p.xi[0])).epsilon(1e-14));
}

TEST_CASE("first kind: |t| >= 1 is flagged as branch-invalid") {
  const GoverningFields g = cmc_unit(21);
  const CoefficientFields c = coefficients_from_governing(g);
  // phi0 = 3: t = 1 - 3 = -2 at the base node.
  const LaxFields lx = integrate_lax(c, 1.0, 0.5, admissible_initial(0.5, 1, 0, 1, 3));
  const GoverningFields p = backlund_governing(g, lx);
  CHECK(!p.mask.valid(0));
}

TEST_CASE("Bianchi-Darboux: e^xi' = h' = 1, alpha' relation, reduced = general") {
  const GoverningFields g = seed(Family::Cmc, 0, 2, 0, 2, 101);
  const BianchiDarbouxResult bd = bianchi_darboux(g, 1.0, 1.0, 1.0);
  CHECK(bd.e_xi_prime_max_dev < 1e-6);
  CHECK(bd.h_prime_max_dev < 1e-6);
  CHECK(bd.e_alpha_prime_max_dev < 1e-6);
  CHECK(bd.reduced_vs_general < 1e-8);
  CHECK(bd.result.lax.state(0)[0] == doctest::Approx(1.0));  // lambda0 from the constraint
  CHECK(bd.result.lax.chi[0] == doctest::Approx(bd.result.lax.phi[0]));
  const double h = g.grid().h();
  CHECK(bd.result.primed_report.at("governing-3").linf < 400 * h * h);

  // independent check of e^{alpha'} = -(phi / sigma) e^{-alpha}
  const LaxFields& lx = bd.result.lax;
  for (std::size_t k = 0; k < g.grid().size(); k += 97) {
    const double sigma = lx.phi[k] - 2 * lx.omega[k];
    CHECK(std::exp(bd.result.primed_governing.alpha[k]) ==
          doctest::Approx(-(lx.phi[k] / sigma) * std::exp(-g.alpha[k])).epsilon(1e-9));
  }
}

TEST_CASE("Bianchi-Darboux preconditions") {
  CHECK_THROWS_AS(bianchi_darboux(seed(Family::Liouville, 0, 1, 0, 1, 11), 1, 1, 1), Error);
  CHECK_THROWS_AS(bianchi_darboux(cmc_unit(11), 0.0, 1, 1), Error);
  // lambda0^2 = 2 mbar phi0 (2 omega0 - phi0) - omega0^2 < 0
  CHECK_THROWS_AS(bianchi_darboux(cmc_unit(11), 0.1, 1, 1), Error);
}
