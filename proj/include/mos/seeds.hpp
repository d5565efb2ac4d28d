#pragma once

// Seed solutions of the governing systems: the three example families.

#include <string_view>
#include <vector>

#include "mos/membrane.hpp"

namespace mos {

enum class Family { Cmc, Pseudospherical, Liouville };

std::string_view to_string(Family f);
Family parse_family(std::string_view s);
/// cmc -> first kind; pseudospherical, liouville -> second kind.
Kind kind_of(Family f);

struct SeedSpec {
  Family family = Family::Cmc;
  double qn = 1.0;
  double alpha0 = 1.0;  // cmc: a(x0)
  double v = 0.0;       // pseudospherical: kink velocity, |v| < 1
  double a = 0.3535533905932738;  // liouville: a > 0
  double c1 = 0.0;                // liouville: h-branch constant
  Grid2D grid;

  void validate() const;
};

/// Solution of a'' + sinh a cosh a = 0, a(x0) = alpha0, a'(x0) = 0, sampled
/// at x0 + i dx. Integrated with classical RK4 at four substeps per dx.
struct CmcProfile {
  std::vector<double> a;
  std::vector<double> da;
};
CmcProfile cmc_profile(double alpha0, double dx, std::size_t n);

GoverningFields seed_cmc(const SeedSpec& spec);
GoverningFields seed_pseudospherical(const SeedSpec& spec);
GoverningFields seed_liouville(const SeedSpec& spec);
GoverningFields make_seed(const SeedSpec& spec);

}  // namespace mos
