#include "mos/membrane.hpp"

#include <cmath>
#include <limits>

namespace mos {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// factor * num / den. A zero factor gives exactly zero even where den
// vanishes (the product has a finite limit there); otherwise a vanishing
// den yields the NaN sentinel.
inline double scaled_ratio(double factor, double num, double den) {
  if (factor == 0.0) return 0.0;
  if (std::fabs(den) < kDivisionGuard) return kNaN;
  return factor * num / den;
}

inline double guarded_div(double num, double den) {
  if (std::fabs(den) < kDivisionGuard) return kNaN;
  return num / den;
}

NodeMask nan_mask(const ScalarField& f) {
  NodeMask m;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (std::isnan(f[k])) m.flag(k, f.size());
  return m;
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid()))
    fail(ErrorKind::InvalidInput, "fields live on different grids");
}

}  // namespace

std::string_view to_string(Kind kind) {
  return kind == Kind::First ? "first" : "second";
}

Kind parse_kind(std::string_view s) {
  if (s == "first") return Kind::First;
  if (s == "second") return Kind::Second;
  fail(ErrorKind::Parse, "unknown kind '" + std::string(s) + "'");
}

void GoverningFields::validate() const {
  require_same_grid(alpha, xi);
  require_same_grid(alpha, h);
  if (qn == 0.0 || !std::isfinite(qn))
    fail(ErrorKind::InvalidParameter, "q_n must be finite and nonzero");
}

GoverningFields with_sentinels(const GoverningFields& g) {
  if (g.mask.empty()) return g;
  auto masked = [&](const ScalarField& f) {
    return ScalarField::generate(f.grid(), [&](std::size_t k) {
      return g.mask.valid(k) ? f[k] : kNaN;
    });
  };
  GoverningFields out = g;
  out.alpha = masked(g.alpha);
  out.xi = masked(g.xi);
  out.h = masked(g.h);
  return out;
}

ScalarField CoefficientFields::kappa1() const {
  return ScalarField::generate(grid(), [&](std::size_t k) { return guarded_div(-Ho[k], A1[k]); });
}

ScalarField CoefficientFields::kappa2() const {
  return ScalarField::generate(grid(), [&](std::size_t k) { return guarded_div(-Ko[k], A2[k]); });
}

StressFields stresses(const GoverningFields& g0) {
  g0.validate();
  const GoverningFields g = with_sentinels(g0);
  const Grid2D& grid = g.grid();
  std::vector<double> t1(grid.size()), t2(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double a = g.alpha[k], h = g.h[k];
    const double pre = 0.5 * g.qn * std::exp(-g.xi[k]);
    if (g.kind == Kind::First) {
      const double s = std::sinh(a), c = std::cosh(a);
      t1[k] = pre * guarded_div(2.0 * h * s + (1.0 + h * h) * c, s + h * c);
      t2[k] = pre * guarded_div(2.0 * h * c + (1.0 + h * h) * s, c + h * s);
    } else {
      const double s = std::sin(a), c = std::cos(a);
      t1[k] = pre * guarded_div(2.0 * h * s + (1.0 - h * h) * c, s - h * c);
      t2[k] = pre * guarded_div(2.0 * h * c - (1.0 - h * h) * s, c + h * s);
    }
  }
  StressFields out{ScalarField(grid, std::move(t1)), ScalarField(grid, std::move(t2)), {}};
  out.flags = nan_mask(out.T1);
  out.flags.merge(nan_mask(out.T2), grid.size());
  return out;
}

CoefficientFields coefficients_from_governing(const GoverningFields& g0) {
  g0.validate();
  const GoverningFields g = with_sentinels(g0);
  const Grid2D& grid = g.grid();
  const std::size_t n = grid.size();
  const ScalarField ax = partial_x(g.alpha), ay = partial_y(g.alpha);
  const ScalarField xx = partial_x(g.xi), xy = partial_y(g.xi);

  std::vector<double> A1(n), A2(n), Ho(n), Ko(n), Ab1(n), Ab2(n), p(n), q(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = g.alpha[k], h = g.h[k];
    const double e = std::exp(g.xi[k]);
    const double pre = 0.5 * g.qn / e;
    if (g.kind == Kind::First) {
      const double s = std::sinh(a), c = std::cosh(a);
      A1[k] = c + h * s;
      A2[k] = s + h * c;
      Ho[k] = e * s;
      Ko[k] = e * c;
      Ab1[k] = pre * (2.0 * h * c + (1.0 + h * h) * s);
      Ab2[k] = pre * (2.0 * h * s + (1.0 + h * h) * c);
      p[k] = ay[k] + xy[k] * std::tanh(a);
      q[k] = ax[k] + scaled_ratio(xx[k], c, s);
    } else {
      const double s = std::sin(a), c = std::cos(a);
      A1[k] = c + h * s;
      A2[k] = s - h * c;
      Ho[k] = e * s;
      Ko[k] = -e * c;
      Ab1[k] = pre * (2.0 * h * c - (1.0 - h * h) * s);
      Ab2[k] = pre * (2.0 * h * s + (1.0 - h * h) * c);
      p[k] = -ay[k] - scaled_ratio(xy[k], s, c);
      q[k] = ax[k] - scaled_ratio(xx[k], c, s);
    }
  }
  CoefficientFields out;
  out.kind = g.kind;
  out.A1 = ScalarField(grid, std::move(A1));
  out.A2 = ScalarField(grid, std::move(A2));
  out.Ho = ScalarField(grid, std::move(Ho));
  out.Ko = ScalarField(grid, std::move(Ko));
  out.Abar1 = ScalarField(grid, std::move(Ab1));
  out.Abar2 = ScalarField(grid, std::move(Ab2));
  out.p = ScalarField(grid, std::move(p));
  out.q = ScalarField(grid, std::move(q));
  for (const ScalarField* f : {&out.A1, &out.A2, &out.Ho, &out.Ko, &out.Abar1,
                               &out.Abar2, &out.p, &out.q})
    out.flags.merge(nan_mask(*f), n);
  return out;
}

SecondForm second_fundamental_form(const GoverningFields& g) {
  g.validate();
  const Grid2D& grid = g.grid();
  std::vector<double> b11(grid.size()), b22(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double a = g.alpha[k], h = g.h[k], e = std::exp(g.xi[k]);
    if (g.kind == Kind::First) {
      const double s = std::sinh(a), c = std::cosh(a);
      b11[k] = -e * s * (c + h * s);
      b22[k] = -e * c * (s + h * c);
    } else {
      const double s = std::sin(a), c = std::cos(a);
      b11[k] = -e * s * (c + h * s);
      b22[k] = -e * c * (h * c - s);
    }
  }
  return {ScalarField(grid, std::move(b11)), ScalarField(grid, std::move(b22))};
}

void ResidualReport::add(const std::string& id, const ScalarField& residual,
                         bool algebraic, const NodeMask& mask) {
  grid = residual.grid();
  ResidualEntry e;
  const Norms nr = masked_norms(residual, mask, &e.excluded);
  e.linf = nr.linf;
  e.l2 = nr.l2;
  e.algebraic = algebraic;
  entries[id] = e;
}

void ResidualReport::merge(const ResidualReport& other) {
  if (!other.entries.empty()) grid = other.grid;
  for (const auto& [k, v] : other.entries) entries[k] = v;
}

const ResidualEntry& ResidualReport::at(const std::string& id) const {
  auto it = entries.find(id);
  if (it == entries.end()) fail(ErrorKind::InvalidInput, "no residual entry '" + id + "'");
  return it->second;
}

ResidualReport governing_residuals(const GoverningFields& g0) {
  g0.validate();
  const GoverningFields g = with_sentinels(g0);
  const Grid2D& grid = g.grid();
  const std::size_t n = grid.size();
  const ScalarField ax = partial_x(g.alpha), ay = partial_y(g.alpha);
  const ScalarField xx = partial_x(g.xi), xy = partial_y(g.xi);
  const ScalarField hx = partial_x(g.h), hy = partial_y(g.h);
  const ScalarField xxy = partial_y(xx);

  std::vector<double> r1(n), r2(n), inner_x(n), inner_y(n), source(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = g.alpha[k], h = g.h[k];
    const double e2 = std::exp(2.0 * g.xi[k]);
    double rx, ry;
    if (g.kind == Kind::First) {
      const double s = std::sinh(a), c = std::cosh(a);
      rx = hx[k] - h * xx[k] - scaled_ratio(xx[k], c, s);
      ry = hy[k] - h * xy[k] - xy[k] * std::tanh(a);
      r2[k] = xxy[k] - xx[k] * xy[k] - scaled_ratio(ay[k] * xx[k], c, s) -
              std::tanh(a) * ax[k] * xy[k];
      inner_x[k] = ax[k] + scaled_ratio(xx[k], c, s);
      inner_y[k] = ay[k] + xy[k] * std::tanh(a);
      source[k] = e2 * s * c;
    } else {
      const double s = std::sin(a), c = std::cos(a);
      rx = hx[k] - h * xx[k] - scaled_ratio(xx[k], c, s);
      ry = hy[k] - h * xy[k] + scaled_ratio(xy[k], s, c);
      r2[k] = xxy[k] - xx[k] * xy[k] - scaled_ratio(ay[k] * xx[k], c, s) +
              scaled_ratio(ax[k] * xy[k], s, c);
      inner_x[k] = -ax[k] + scaled_ratio(xx[k], c, s);
      inner_y[k] = ay[k] + scaled_ratio(xy[k], s, c);
      source[k] = e2 * s * c;
    }
    r1[k] = (std::isnan(rx) || std::isnan(ry))
                ? kNaN
                : std::fmax(std::fabs(rx), std::fabs(ry));
  }
  const ScalarField ix = partial_x(ScalarField(grid, std::move(inner_x)));
  const ScalarField iy = partial_y(ScalarField(grid, std::move(inner_y)));
  const ScalarField r3 = ScalarField::generate(grid, [&](std::size_t k) {
    return ix[k] + iy[k] + source[k];
  });

  ResidualReport rep;
  rep.add("governing-1", ScalarField(grid, std::move(r1)), false, g.mask);
  rep.add("governing-2", ScalarField(grid, std::move(r2)), false, g.mask);
  rep.add("governing-3", r3, false, g.mask);
  return rep;
}

ResidualReport gauss_codazzi_residuals(const CoefficientFields& c) {
  const Grid2D& grid = c.grid();
  auto combo = [&](const ScalarField& d, const ScalarField& coef,
                   const ScalarField& other) {
    return ScalarField::generate(grid, [&](std::size_t k) { return d[k] - coef[k] * other[k]; });
  };
  const ScalarField py = partial_y(c.p), qx = partial_x(c.q);
  ResidualReport rep;
  rep.add("codazzi-H", combo(partial_y(c.Ho), c.p, c.Ko), false);
  rep.add("codazzi-K", combo(partial_x(c.Ko), c.q, c.Ho), false);
  rep.add("net-A1", combo(partial_y(c.A1), c.p, c.A2), false);
  rep.add("net-A2", combo(partial_x(c.A2), c.q, c.A1), false);
  rep.add("net-Abar1", combo(partial_y(c.Abar1), c.p, c.Abar2), false);
  rep.add("net-Abar2", combo(partial_x(c.Abar2), c.q, c.Abar1), false);
  rep.add("gauss", ScalarField::generate(grid, [&](std::size_t k) {
            return py[k] + qx[k] + c.Ho[k] * c.Ko[k];
          }),
          false);
  return rep;
}

ResidualReport equilibrium_residuals(const CoefficientFields& c,
                                     const StressFields& s, double qn) {
  require_same_grid(c.A1, s.T1);
  const Grid2D& grid = c.grid();
  const ScalarField t1x = partial_x(s.T1), t2y = partial_y(s.T2);
  // In-plane balance with the metric factor of the transverse direction:
  // (A2 T1)_x = (A2)_x T2 and (A1 T2)_y = (A1)_y T1.
  const ScalarField a2x = partial_x(c.A2), a1y = partial_y(c.A1);
  const ScalarField k1 = c.kappa1(), k2 = c.kappa2();
  ResidualReport rep;
  rep.add("equilibrium-1", ScalarField::generate(grid, [&](std::size_t k) {
            return t1x[k] + guarded_div(a2x[k], c.A2[k]) * (s.T1[k] - s.T2[k]);
          }),
          false);
  rep.add("equilibrium-2", ScalarField::generate(grid, [&](std::size_t k) {
            return t2y[k] + guarded_div(a1y[k], c.A1[k]) * (s.T2[k] - s.T1[k]);
          }),
          false);
  rep.add("equilibrium-3", ScalarField::generate(grid, [&](std::size_t k) {
            return k1[k] * s.T1[k] + k2[k] * s.T2[k] + qn;
          }),
          true);
  return rep;
}

ResidualReport first_integral_check(const CoefficientFields& c, Kind kind,
                                    double qn) {
  const Grid2D& grid = c.grid();
  // f = qn and g = -qn (1st kind) or g = qn (2nd kind); the integrals read
  // 2 Abar1 Ho - qn A1^2 = -f and 2 Abar2 Ko - qn A2^2 = -g.
  const double g_norm = kind == Kind::First ? -qn : qn;
  ResidualReport rep;
  rep.add("first-integral-1", ScalarField::generate(grid, [&](std::size_t k) {
            return 2.0 * c.Abar1[k] * c.Ho[k] - qn * c.A1[k] * c.A1[k] + qn;
          }),
          true);
  rep.add("first-integral-2", ScalarField::generate(grid, [&](std::size_t k) {
            return 2.0 * c.Abar2[k] * c.Ko[k] - qn * c.A2[k] * c.A2[k] + g_norm;
          }),
          true);
  const double sign = kind == Kind::First ? -1.0 : 1.0;
  rep.add("constraint", ScalarField::generate(grid, [&](std::size_t k) {
            const double m = c.Ho[k] * c.A2[k] - c.Ko[k] * c.A1[k];
            return c.Ko[k] * c.Ko[k] + sign * c.Ho[k] * c.Ho[k] - m * m;
          }),
          true);
  return rep;
}

ScalarField orthogonality_field(const CoefficientFields& c, double qn) {
  // -qn A1 A2 is split symmetrically as A1 (c A2) + (c A1) A2 with c = -qn/2;
  // the 4-vector Omega form evaluates the same products in the same order.
  const double half = -0.5 * qn;
  return ScalarField::generate(c.grid(), [&](std::size_t k) {
    const double a1 = c.A1[k], a2 = c.A2[k];
    return ((a1 * (half * a2) + (half * a1) * a2) + c.Abar1[k] * c.Ko[k]) +
           c.Abar2[k] * c.Ho[k];
  });
}

ResidualReport orthogonality_check(const CoefficientFields& c, double qn) {
  ResidualReport rep;
  rep.add("orthogonality", orthogonality_field(c, qn), true);
  return rep;
}

ResidualReport membrane_report(const GoverningFields& g) {
  const CoefficientFields c = coefficients_from_governing(g);
  const StressFields s = stresses(g);
  ResidualReport rep = governing_residuals(g);
  rep.merge(gauss_codazzi_residuals(c));
  rep.merge(equilibrium_residuals(c, s, g.qn));
  rep.merge(first_integral_check(c, g.kind, g.qn));
  rep.merge(orthogonality_check(c, g.qn));
  return rep;
}

}  // namespace mos
