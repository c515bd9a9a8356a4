#pragma once

#include "decosim/common.hpp"

namespace decosim {

// Physical constants. Defaults are natural units (hbar = k_B = 1); pass
// explicit values to run in physical units.
struct UnitSystem {
  double hbar = 1.0;
  double boltzmann = 1.0;

  UnitSystem() = default;
  UnitSystem(double hbar_, double boltzmann_) : hbar(hbar_), boltzmann(boltzmann_) {
    if (!(hbar > 0.0) || !(boltzmann > 0.0)) {
      throw DomainError("UnitSystem: hbar and boltzmann must be strictly positive");
    }
  }
};

}  // namespace decosim
