#include "mos/backlund.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mos/sweep.hpp"

namespace mos {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_finite(const CoefficientFields& c) {
  for (const ScalarField* f : {&c.p, &c.q, &c.Ho, &c.Ko, &c.A1, &c.A2, &c.Abar1, &c.Abar2}) {
    const std::size_t k = f->first_non_finite();
    if (k != f->size())
      fail(ErrorKind::Numerical, "non-finite coefficient at node " + std::to_string(k) +
                                     "; the Lax system needs every node");
  }
}

template <class MatX, class MatY>
std::vector<Vec5> integrate_linear(const Grid2D& g, const Vec5& init, SweepOrder order,
                                   MatX&& mx, MatY&& my) {
  auto step = [&](const Vec5& s, std::size_t from, std::size_t to, bool along_x) {
    return along_x ? rk4_left<Mat5, Vec5>(s, mx(from), mx(to), g.dx)
                   : rk4_left<Mat5, Vec5>(s, my(from), my(to), g.dy);
  };
  return sweep(g, init, order, step);
}

ScalarField component(const Grid2D& g, const std::vector<Vec5>& s, int c) {
  return ScalarField::generate(g, [&](std::size_t k) { return s[k][c]; });
}

double max_abs_diff(const ScalarField& a, const ScalarField& b, const NodeMask& mask) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (mask.valid(k) && std::isfinite(a[k]) && std::isfinite(b[k]))
      d = std::fmax(d, std::fabs(a[k] - b[k]));
  return d;
}

}  // namespace

Vec5 admissible_initial(double m, double qn, double lambda0, double omega0, double phi0) {
  if (m == 0.0 || !std::isfinite(m))
    fail(ErrorKind::InvalidParameter, "Backlund parameter m must be finite and nonzero");
  if (omega0 == 0.0)
    fail(ErrorKind::InvalidParameter, "omega0 must be nonzero");
  if (!std::isfinite(lambda0) || !std::isfinite(omega0) || !std::isfinite(phi0))
    fail(ErrorKind::InvalidParameter, "initial Lax values must be finite");
  const double chi0 = (lambda0 * lambda0 + omega0 * omega0) / (2.0 * m * omega0) +
                      qn * phi0 * phi0 / (2.0 * omega0);
  Vec5 s;
  s << lambda0, 0.0, omega0, phi0, chi0;
  return s;
}

Mat5 lax_matrix_x(const CoefficientFields& c, double qn, double m, std::size_t k) {
  const double p = c.p[k], H = c.Ho[k], A = c.A1[k], Ab = c.Abar1[k];
  Mat5 L = Mat5::Zero();
  L(0, 1) = -p;
  L(0, 2) = m * Ab - H;
  L(0, 3) = -m * qn * A;
  L(0, 4) = m * H;
  L(1, 0) = p;
  L(2, 0) = H;
  L(3, 0) = A;
  L(4, 0) = Ab;
  return L;
}

Mat5 lax_matrix_y(const CoefficientFields& c, double qn, double m, std::size_t k) {
  const double q = c.q[k], K = c.Ko[k], A = c.A2[k], Ab = c.Abar2[k];
  Mat5 L = Mat5::Zero();
  L(0, 1) = q;
  L(1, 0) = -q;
  L(1, 2) = m * Ab - K;
  L(1, 3) = -m * qn * A;
  L(1, 4) = m * K;
  L(2, 1) = K;
  L(3, 1) = A;
  L(4, 1) = Ab;
  return L;
}

LaxFields integrate_lax(const CoefficientFields& c, double qn, double m, const Vec5& init) {
  if (m == 0.0 || !std::isfinite(m))
    fail(ErrorKind::InvalidParameter, "Backlund parameter m must be finite and nonzero");
  if (!init.allFinite()) fail(ErrorKind::InvalidParameter, "initial Lax values must be finite");
  require_finite(c);
  const Grid2D& g = c.grid();
  auto mx = [&](std::size_t k) { return lax_matrix_x(c, qn, m, k); };
  auto my = [&](std::size_t k) { return lax_matrix_y(c, qn, m, k); };
  const std::vector<Vec5> a = integrate_linear(g, init, SweepOrder::RowThenColumns, mx, my);
  const std::vector<Vec5> b = integrate_linear(g, init, SweepOrder::ColumnThenRows, mx, my);

  LaxFields lx;
  lx.m = m;
  lx.qn = qn;
  lx.lambda = component(g, a, 0);
  lx.mu = component(g, a, 1);
  lx.omega = component(g, a, 2);
  lx.phi = component(g, a, 3);
  lx.chi = component(g, a, 4);
  const std::size_t n = g.size();
  std::vector<double> nu(n), M(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = a[k][2];
    nu[k] = w != 0.0 ? a[k][4] - qn * a[k][3] * a[k][3] / (2.0 * w) : kNaN;
    M[k] = m * w * nu[k];
    if (!(std::fabs(w) >= kSingularGuard) || !(std::fabs(nu[k]) >= kSingularGuard) ||
        !(std::fabs(M[k]) >= kSingularGuard))
      lx.singular.flag(k, n);
    lx.path_error = std::fmax(lx.path_error, (a[k] - b[k]).cwiseAbs().maxCoeff());
  }
  lx.nu = ScalarField(g, std::move(nu));
  lx.bigM = ScalarField(g, std::move(M));

  // Drift of the conserved quadric lambda^2 + mu^2 + omega^2 - 2 m omega chi + m qn phi^2.
  auto quadric = [&](const Vec5& s) {
    return s[0] * s[0] + s[1] * s[1] + s[2] * s[2] - 2.0 * m * s[2] * s[4] +
           m * qn * s[3] * s[3];
  };
  const double base = std::fabs(2.0 * m * init[2] * init[4] - m * qn * init[3] * init[3]);
  const double q0 = quadric(init);
  double drift = 0.0;
  for (std::size_t k = 0; k < n; ++k) drift = std::fmax(drift, std::fabs(quadric(a[k]) - q0));
  lx.constraint_drift = base > 0.0 ? drift / base : drift;
  return lx;
}

SurfaceTriple backlund_surface(const SurfaceTriple& s, const FrameGrid& f, const LaxFields& lx) {
  const Grid2D& g = lx.grid();
  if (!(s.r.grid() == g) || !(f.grid == g))
    fail(ErrorKind::InvalidInput, "surface, frame and Lax fields live on different grids");
  const std::size_t n = g.size();
  const Vec3 nan3 = Vec3::Constant(kNaN);
  std::vector<Vec3> N(n, nan3), r(n, nan3), rb(n, nan3);
  for (std::size_t k = 0; k < n; ++k) {
    if (!lx.singular.valid(k)) continue;
    const Vec3 M = lx.lambda[k] * f.X(k) + lx.mu[k] * f.Y(k) + lx.omega[k] * f.N(k);
    const double inv = 1.0 / lx.bigM[k];
    N[k] = s.N[k] - (lx.omega[k] * inv) * M;
    r[k] = s.r[k] - (lx.phi[k] * inv) * M;
    rb[k] = s.rbar[k] - (lx.chi[k] * inv) * M;
  }
  return {Vec3Field(g, std::move(N)), Vec3Field(g, std::move(r)), Vec3Field(g, std::move(rb))};
}

CoefficientUpdate backlund_coefficients(const CoefficientFields& c, const LaxFields& lx,
                                        double qn) {
  const Grid2D& g = lx.grid();
  if (!(c.grid() == g)) fail(ErrorKind::InvalidInput, "coefficients and Lax fields differ in grid");
  const std::size_t n = g.size();
  std::vector<double> H(n, kNaN), K(n, kNaN), A1(n, kNaN), A2(n, kNaN), Ho(n, kNaN),
      Ko(n, kNaN), Ab1(n, kNaN), Ab2(n, kNaN);
  const double m = lx.m;
  for (std::size_t k = 0; k < n; ++k) {
    if (!lx.singular.valid(k)) continue;
    const double w = lx.omega[k], ph = lx.phi[k], ch = lx.chi[k], M = lx.bigM[k];
    H[k] = m * (w * c.Abar1[k] - qn * ph * c.A1[k] + ch * c.Ho[k]);
    K[k] = m * (w * c.Abar2[k] - qn * ph * c.A2[k] + ch * c.Ko[k]);
    const double hm = H[k] / M, km = K[k] / M;
    Ho[k] = c.Ho[k] - hm * w;
    A1[k] = c.A1[k] - hm * ph;
    Ab1[k] = c.Abar1[k] - hm * ch;
    Ko[k] = c.Ko[k] - km * w;
    A2[k] = c.A2[k] - km * ph;
    Ab2[k] = c.Abar2[k] - km * ch;
  }
  CoefficientUpdate u;
  u.H = ScalarField(g, std::move(H));
  u.K = ScalarField(g, std::move(K));
  CoefficientFields& pc = u.primed;
  pc.kind = c.kind;
  pc.A1 = ScalarField(g, std::move(A1));
  pc.A2 = ScalarField(g, std::move(A2));
  pc.Ho = ScalarField(g, std::move(Ho));
  pc.Ko = ScalarField(g, std::move(Ko));
  pc.Abar1 = ScalarField(g, std::move(Ab1));
  pc.Abar2 = ScalarField(g, std::move(Ab2));
  pc.p = ScalarField(g, kNaN);
  pc.q = ScalarField(g, kNaN);
  pc.flags = lx.singular;
  return u;
}

ScalarField transform_parameter(const GoverningFields& g, const LaxFields& lx) {
  return ScalarField::generate(g.grid(), [&](std::size_t k) {
    return g.h[k] - (lx.phi[k] / lx.omega[k]) * std::exp(g.xi[k]);
  });
}

GoverningFields backlund_governing(const GoverningFields& g, const LaxFields& lx) {
  g.validate();
  const Grid2D& grid = g.grid();
  if (!(lx.grid() == grid)) fail(ErrorKind::InvalidInput, "seed and Lax fields differ in grid");
  const std::size_t n = grid.size();
  const ScalarField t = transform_parameter(g, lx);
  std::vector<double> xi(n, 0.0), al(n, 0.0), h(n, 0.0);
  NodeMask mask = g.mask;
  mask.merge(lx.singular, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!mask.valid(k)) continue;
    const double tk = t[k];
    const bool first = g.kind == Kind::First;
    const double arg = 0.5 * g.qn * (lx.omega[k] / lx.nu[k]) * std::exp(-g.xi[k]) *
                       (first ? 1.0 - tk * tk : 1.0 + tk * tk);
    if (!(arg > 0.0) || !std::isfinite(arg) || (first && !(std::fabs(tk) < 1.0))) {
      mask.flag(k, n);
      continue;
    }
    xi[k] = std::log(arg);
    const double ratio = lx.phi[k] / lx.omega[k];
    if (first) {
      al[k] = -g.alpha[k] + std::log((1.0 - tk) / (1.0 + tk));
      h[k] = tk + ratio * arg;
    } else {
      al[k] = g.alpha[k] - 2.0 * std::atan(tk);
      h[k] = -tk + ratio * arg;
    }
  }
  GoverningFields out;
  out.kind = g.kind;
  out.qn = g.qn;
  out.alpha = ScalarField(grid, std::move(al));
  out.xi = ScalarField(grid, std::move(xi));
  out.h = ScalarField(grid, std::move(h));
  out.mask = std::move(mask);
  return out;
}

CoefficientFields theorem_coefficients(const GoverningFields& primed) {
  CoefficientFields c = coefficients_from_governing(primed);
  if (primed.kind == Kind::First) {
    c.A2 = -1.0 * c.A2;
    c.Ko = -1.0 * c.Ko;
    c.Abar2 = -1.0 * c.Abar2;
    c.p = -1.0 * c.p;
    c.q = -1.0 * c.q;
  }
  return c;
}

BacklundResult backlund(const GoverningFields& g, double m, const Vec5& init) {
  const CoefficientFields c = coefficients_from_governing(g);
  BacklundResult res;
  res.lax = integrate_lax(c, g.qn, m, init);
  res.t = transform_parameter(g, res.lax);
  res.primed_governing = backlund_governing(g, res.lax);
  const NodeMask& valid = res.primed_governing.mask;
  if (valid.flagged_count() == g.grid().size())
    fail(ErrorKind::Numerical, "Backlund transform is undefined at every node");

  CoefficientUpdate u = backlund_coefficients(c, res.lax, g.qn);
  res.H = u.H;
  res.K = u.K;
  const CoefficientFields th = theorem_coefficients(res.primed_governing);
  CoefficientFields& pc = u.primed;
  for (auto [a, b] : {std::pair{&pc.A1, &th.A1}, {&pc.A2, &th.A2}, {&pc.Ho, &th.Ho},
                      {&pc.Ko, &th.Ko}, {&pc.Abar1, &th.Abar1}, {&pc.Abar2, &th.Abar2}})
    res.coefficient_crosscheck = std::fmax(res.coefficient_crosscheck, max_abs_diff(*a, *b, valid));

  const bool first = g.kind == Kind::First;
  for (std::size_t k = 0; k < g.grid().size(); ++k) {
    if (!valid.valid(k)) continue;
    const double e = std::exp(res.primed_governing.xi[k]), a = res.primed_governing.alpha[k];
    const double ho = c.Ho[k] - res.H[k] / (m * res.lax.nu[k]);
    res.ho_crosscheck =
        std::fmax(res.ho_crosscheck, std::fabs(ho - e * (first ? std::sinh(a) : std::sin(a))));
  }

  // Raw coefficients restricted to the valid region, with the net rotation
  // coefficients from the primed governing fields.
  auto restrict = [&](const ScalarField& f) {
    return ScalarField::generate(f.grid(), [&](std::size_t k) { return valid.valid(k) ? f[k] : kNaN; });
  };
  for (ScalarField* f : {&pc.A1, &pc.A2, &pc.Ho, &pc.Ko, &pc.Abar1, &pc.Abar2}) *f = restrict(*f);
  pc.p = th.p;
  pc.q = th.q;
  pc.flags = valid;
  res.primed_coefficients = pc;

  res.primed_report = governing_residuals(res.primed_governing);
  res.primed_report.merge(gauss_codazzi_residuals(pc));
  res.primed_report.merge(first_integral_check(pc, g.kind, g.qn));
  res.primed_report.merge(orthogonality_check(pc, g.qn));
  return res;
}

BianchiDarbouxResult bianchi_darboux(const GoverningFields& g, double mbar, double omega0,
                                     double phi0) {
  g.validate();
  if (g.kind != Kind::First)
    fail(ErrorKind::InvalidInput, "Bianchi-Darboux transform needs a first-kind (CMC) seed");
  for (std::size_t k = 0; k < g.grid().size(); ++k)
    if (std::fabs(g.xi[k]) > 1e-12 || std::fabs(g.h[k] - 1.0) > 1e-12)
      fail(ErrorKind::InvalidInput, "Bianchi-Darboux transform needs xi = 0 and h = 1");
  if (mbar == 0.0 || !std::isfinite(mbar))
    fail(ErrorKind::InvalidParameter, "mbar must be finite and nonzero");
  const double l2 = 2.0 * mbar * phi0 * (2.0 * omega0 - phi0) - omega0 * omega0;
  if (!(l2 >= 0.0))
    fail(ErrorKind::InvalidParameter,
         "no real lambda0 for these (mbar, omega0, phi0): 2 mbar phi0 (2 omega0 - phi0) < omega0^2");
  const double m = 2.0 * mbar / g.qn;
  const double lambda0 = std::sqrt(l2);

  BianchiDarbouxResult out;
  out.result = backlund(g, m, admissible_initial(m, g.qn, lambda0, omega0, phi0));

  // Reduced system, built from alpha alone.
  const Grid2D& grid = g.grid();
  const ScalarField ax = partial_x(g.alpha), ay = partial_y(g.alpha);
  auto mx = [&](std::size_t k) {
    const double a = g.alpha[k], ep = std::exp(a), em = std::exp(-a);
    Mat5 L = Mat5::Zero();
    L(0, 1) = -ay[k];
    L(0, 2) = -std::sinh(a);
    L(0, 3) = -mbar * em;
    L(0, 4) = -mbar * ep;
    L(1, 0) = ay[k];
    L(2, 0) = std::sinh(a);
    L(3, 0) = ep;
    L(4, 0) = em;
    return L;
  };
  auto my = [&](std::size_t k) {
    const double a = g.alpha[k], ep = std::exp(a), em = std::exp(-a);
    Mat5 L = Mat5::Zero();
    L(0, 1) = ax[k];
    L(1, 0) = -ax[k];
    L(1, 2) = -std::cosh(a);
    L(1, 3) = mbar * em;
    L(1, 4) = -mbar * ep;
    L(2, 1) = std::cosh(a);
    L(3, 1) = ep;
    L(4, 1) = -em;
    return L;
  };
  Vec5 r0;
  r0 << lambda0, 0.0, omega0, phi0, phi0 - 2.0 * omega0;
  const std::vector<Vec5> red = integrate_linear(grid, r0, SweepOrder::RowThenColumns, mx, my);
  out.sigma = component(grid, red, 4);

  const LaxFields& lx = out.result.lax;
  const GoverningFields& pg = out.result.primed_governing;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec5 s = lx.state(k);
    Vec5 mapped;
    mapped << s[0], s[1], s[2], s[3], s[3] - 2.0 * s[2];
    double d = (mapped - red[k]).cwiseAbs().maxCoeff();
    d = std::fmax(d, std::fabs(s[4] - g.qn * s[3]));
    out.reduced_vs_general = std::fmax(out.reduced_vs_general, d);
    if (!pg.mask.valid(k)) continue;
    out.e_xi_prime_max_dev = std::fmax(out.e_xi_prime_max_dev, std::fabs(std::exp(pg.xi[k]) - 1.0));
    out.h_prime_max_dev = std::fmax(out.h_prime_max_dev, std::fabs(pg.h[k] - 1.0));
    const double pred = -(red[k][3] / red[k][4]) * std::exp(-g.alpha[k]);
    out.e_alpha_prime_max_dev =
        std::fmax(out.e_alpha_prime_max_dev, std::fabs(std::exp(pg.alpha[k]) - pred));
  }
  return out;
}

}  // namespace mos
