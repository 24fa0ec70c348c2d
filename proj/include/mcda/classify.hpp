#pragma once

// Reclassification of factor rasters into vulnerability classes 1..5.

#include <array>
#include <map>
#include <span>
#include <vector>

#include "mcda/grid.hpp"

namespace mcda {

enum class Orientation { HigherIsWorse, LowerIsWorse };

/// Four strictly ascending thresholds. Intervals are (lower, upper]: a value
/// equal to a threshold takes the class below it.
class BreakSet {
 public:
  BreakSet(std::array<double, 4> thresholds, Orientation orientation);

  const std::array<double, 4>& thresholds() const noexcept { return thresholds_; }
  Orientation orientation() const noexcept { return orientation_; }

  /// Class of a single valid value.
  int classify(double value) const noexcept;

 private:
  std::array<double, 4> thresholds_;
  Orientation orientation_;
};

/// Category code -> class in 1..5.
using CategoryMap = std::map<long long, int>;

void validate_category_map(const CategoryMap& map);

ClassGrid classify(const Grid& grid, const BreakSet& breaks);
ClassGrid classify_categorical(const Grid& grid, const CategoryMap& map);

/*!
 * Fisher-Jenks natural breaks.
 *
 * Exact dynamic program over the distinct sorted values (weighted by
 * multiplicity) minimizing the total within-class sum of squared deviations.
 * Returns the k-1 upper boundaries of the lower classes, i.e. the largest
 * value of each of the first k-1 classes. On equal cost the smaller split
 * position wins.
 */
std::vector<double> jenks_breaks(std::span<const double> values, int k);

}  // namespace mcda
