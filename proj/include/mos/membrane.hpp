#pragma once

// Membrane O surfaces of the 1st and 2nd kind: map the governing unknowns
// (alpha, xi, h) to fundamental-form, Combescure and stress coefficients,
// and evaluate every pointwise equation as a residual field.

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "mos/field.hpp"

namespace mos {

enum class Kind { First, Second };

std::string_view to_string(Kind kind);
Kind parse_kind(std::string_view s);

/// Division guard used for every pointwise quotient.
inline constexpr double kDivisionGuard = 1e-12;

struct GoverningFields {
  Kind kind = Kind::First;
  double qn = 1.0;
  ScalarField alpha;
  ScalarField xi;
  ScalarField h;
  /// Nodes carrying no solution (e.g. outside a Backlund transform's domain).
  NodeMask mask;

  const Grid2D& grid() const noexcept { return alpha.grid(); }
  void validate() const;
};

struct CoefficientFields {
  Kind kind = Kind::First;
  ScalarField A1, A2;      // I = A1^2 dx^2 + A2^2 dy^2
  ScalarField Ho, Ko;      // III = Ho^2 dx^2 + Ko^2 dy^2
  ScalarField Abar1, Abar2;  // Combescure dual: Abar1 = T2 A1, Abar2 = T1 A2
  ScalarField p, q;        // net rotation coefficients
  NodeMask flags;          // nodes where a guard tripped (values are NaN)

  const Grid2D& grid() const noexcept { return A1.grid(); }
  ScalarField kappa1() const;  // -Ho / A1
  ScalarField kappa2() const;  // -Ko / A2
};

struct StressFields {
  ScalarField T1, T2;
  NodeMask flags;
};

struct ResidualEntry {
  double linf = 0.0;
  double l2 = 0.0;
  std::size_t excluded = 0;
  /// Pure algebra (no finite differences involved).
  bool algebraic = false;
};

struct ResidualReport {
  Grid2D grid;
  std::map<std::string, ResidualEntry> entries;

  void add(const std::string& id, const ScalarField& residual, bool algebraic,
           const NodeMask& mask = {});
  void merge(const ResidualReport& other);
  const ResidualEntry& at(const std::string& id) const;
  bool contains(const std::string& id) const { return entries.count(id) != 0; }
};

/// The fixed equation registry.
inline constexpr std::array<std::string_view, 13> kEquationRegistry{
    "governing-1", "governing-2",  "governing-3",  "codazzi-H",
    "codazzi-K",   "net-A1",       "net-A2",       "net-Abar1",
    "net-Abar2",   "gauss",        "equilibrium-1", "equilibrium-2",
    "equilibrium-3"};

/// Entries reported alongside the registry.
inline constexpr std::array<std::string_view, 7> kExtendedEquations{
    "first-integral-1", "first-integral-2", "constraint", "orthogonality",
    "omega-1",          "omega-2",          "omega-3"};

/// Governing fields with masked nodes replaced by NaN so that every stencil
/// touching them yields NaN (and is excluded from the norms).
GoverningFields with_sentinels(const GoverningFields& g);

CoefficientFields coefficients_from_governing(const GoverningFields& g);
StressFields stresses(const GoverningFields& g);

struct SecondForm {
  ScalarField b11, b22;
};
SecondForm second_fundamental_form(const GoverningFields& g);

ResidualReport governing_residuals(const GoverningFields& g);
ResidualReport gauss_codazzi_residuals(const CoefficientFields& c);
ResidualReport equilibrium_residuals(const CoefficientFields& c,
                                     const StressFields& s, double qn);
ResidualReport first_integral_check(const CoefficientFields& c, Kind kind,
                                    double qn);
ResidualReport orthogonality_check(const CoefficientFields& c, double qn);

/// Pointwise H Lambda K^T = Abar1 Ko - qn A1 A2 + Ho Abar2.
ScalarField orthogonality_field(const CoefficientFields& c, double qn);

/// Every registry and extended entry except the Omega ones.
ResidualReport membrane_report(const GoverningFields& g);

}  // namespace mos
