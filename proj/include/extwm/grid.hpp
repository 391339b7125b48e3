#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace extwm {

// Uniform exterior grid on [r_min, r_max], r_min = 1.
struct RadialGrid {
  double r_min = 1.0;
  double r_max = 0.0;
  std::size_t n = 0;
  double h = 0.0;

  RadialGrid() = default;
  RadialGrid(double rmax, std::size_t npts) : r_max(rmax), n(npts) {
    if (n < 2 || r_max <= r_min) throw std::invalid_argument("bad radial grid");
    h = (r_max - r_min) / static_cast<double>(n - 1);
  }
  double r(std::size_t i) const { return r_min + h * static_cast<double>(i); }
};

// Field pair (psi, psi_dot) sampled on the grid; Dirichlet at r = 1.
struct WaveState {
  RadialGrid grid;
  std::vector<double> psi;
  std::vector<double> psi_dot;
  double t = 0.0;

  void validate() const {
    if (psi.size() != grid.n || psi_dot.size() != grid.n)
      throw std::invalid_argument("field length does not match grid");
    if (psi.empty() || psi[0] != 0.0)
      throw std::invalid_argument("Dirichlet value psi(1) must be 0");
    for (double v : psi)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite psi");
    for (double v : psi_dot)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite psi_dot");
  }
};

struct EnergyReport {
  double total = 0.0;
  double kinetic = 0.0;
  double gradient = 0.0;
  double sine_potential = 0.0;
};

}  // namespace extwm
