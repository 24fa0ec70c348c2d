#pragma once

// Synthetic six-factor scenario for demos and end-to-end tests.

#include <array>
#include <cstdint>

#include "mcda/grid.hpp"

namespace mcda {

inline constexpr Eigen::Index kMinSynthDimension = 16;

/// PD, LULC codes, RAIN, DD, SLOPE, LST; a meandering river corridor is nodata.
struct Scenario {
  std::array<Grid, 6> factors;
};

Scenario synth_scenario(std::uint64_t seed, Eigen::Index nrows, Eigen::Index ncols);

/// Two-octave bilinear lattice noise in [0, 1], one stream per lattice node.
RasterArray lattice_noise(std::uint64_t seed, Eigen::Index nrows, Eigen::Index ncols, int cells);

}  // namespace mcda
