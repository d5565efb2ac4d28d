#include "mos/gates.hpp"

#include <cmath>

namespace mos {

double residual_constant(Family f) {
  switch (f) {
    case Family::Cmc: return 20.0;
    case Family::Pseudospherical: return 200.0;
    case Family::Liouville: return 40.0;
  }
  return 100.0;
}

bool GatedReport::pass() const {
  for (const auto& [id, e] : entries)
    if (!e.pass()) return false;
  return true;
}

const GatedEntry& GatedReport::at(const std::string& id) const {
  auto it = entries.find(id);
  if (it == entries.end()) fail(ErrorKind::InvalidInput, "no gated entry '" + id + "'");
  return it->second;
}

GatedReport gate(const std::vector<ResidualReport>& ladder, const GatePolicy& policy) {
  if (ladder.empty()) fail(ErrorKind::InvalidInput, "gate needs at least one report");
  GatedReport out;
  for (const ResidualReport& r : ladder) out.grids.push_back(r.grid);
  for (const auto& [id, first] : ladder.front().entries) {
    GatedEntry e;
    e.id = id;
    for (std::size_t s = 0; s < ladder.size(); ++s) {
      const ResidualEntry& r = ladder[s].at(id);
      const double h = ladder[s].grid.h();
      const double bound = r.algebraic ? policy.algebraic_tol : policy.C * h * h;
      e.ladder.push_back(r);
      e.bounds.push_back(bound);
      if (!(r.linf < bound)) e.bound_pass = false;
    }
    if (!first.algebraic)
      for (std::size_t s = 1; s < ladder.size(); ++s) {
        const double coarse = e.ladder[s - 1].linf, fine = e.ladder[s].linf;
        if (coarse > 0.0 && fine > 0.0) {
          const double hr = ladder[s - 1].grid.h() / ladder[s].grid.h();
          e.orders.push_back(std::log(coarse / fine) / std::log(hr));
        } else {
          e.orders.push_back(std::nullopt);
        }
        const bool resolved = fine >= policy.noise_floor;
        const auto& o = e.orders.back();
        if (resolved && (!o || *o < policy.order_lo || *o > policy.order_hi)) e.order_pass = false;
      }
    out.entries.emplace(id, std::move(e));
  }
  return out;
}

}  // namespace mos
