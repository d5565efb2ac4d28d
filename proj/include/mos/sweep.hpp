#pragma once

// Two-pass grid sweep shared by the frame and Lax integrators.

#include <vector>

#include "mos/field.hpp"
#include "mos/parallel.hpp"

namespace mos {

/// Canonical order integrates the first row in x, then every column in y.
enum class SweepOrder { RowThenColumns, ColumnThenRows };

/// Fills a node-indexed array from `init` at (0, 0): first the leading line
/// of nodes, then every transverse line in parallel. step(state, from, to,
/// along_x) advances one grid interval.
template <class State, class Step>
std::vector<State> sweep(const Grid2D& g, const State& init, SweepOrder order,
                         Step&& step) {
  std::vector<State> out(g.size(), init);
  if (order == SweepOrder::RowThenColumns) {
    for (std::size_t i = 1; i < g.nx; ++i)
      out[g.index(i, 0)] = step(out[g.index(i - 1, 0)], g.index(i - 1, 0), g.index(i, 0), true);
    parallel_for(g.nx, [&](std::size_t i) {
      for (std::size_t j = 1; j < g.ny; ++j)
        out[g.index(i, j)] = step(out[g.index(i, j - 1)], g.index(i, j - 1), g.index(i, j), false);
    });
  } else {
    for (std::size_t j = 1; j < g.ny; ++j)
      out[g.index(0, j)] = step(out[g.index(0, j - 1)], g.index(0, j - 1), g.index(0, j), false);
    parallel_for(g.ny, [&](std::size_t j) {
      for (std::size_t i = 1; i < g.nx; ++i)
        out[g.index(i, j)] = step(out[g.index(i - 1, j)], g.index(i - 1, j), g.index(i, j), true);
    });
  }
  return out;
}

/// One classical RK4 step of y' = y G(s) (or G(s) y) with G linear between
/// g0 and g1, so the midpoint stages use the average.
template <class M>
M rk4_right(const M& y, const M& g0, const M& g1, double h) {
  const M gm = 0.5 * (g0 + g1);
  const M k1 = y * g0;
  const M k2 = (y + 0.5 * h * k1) * gm;
  const M k3 = (y + 0.5 * h * k2) * gm;
  const M k4 = (y + h * k3) * g1;
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class M, class V>
V rk4_left(const V& y, const M& g0, const M& g1, double h) {
  const M gm = 0.5 * (g0 + g1);
  const V k1 = g0 * y;
  const V k2 = gm * (y + 0.5 * h * k1);
  const V k3 = gm * (y + 0.5 * h * k2);
  const V k4 = g1 * (y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace mos
