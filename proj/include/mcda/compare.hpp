#pragma once

// Cross-method comparison layers: standardization, differences, deviation
// stacks, outlier composites and histograms.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mcda/grid.hpp"

namespace mcda {

/// (v - mean) / sd over valid pixels, population standard deviation.
Grid zscore(const Grid& grid);

/// zscore(ahp) - zscore(variant); positive where AHP rates the pixel higher.
Grid diff_layer(const Grid& ahp, const Grid& variant);

/// Per-pixel population standard deviation across the z-scored stack.
Grid stddev_stack(std::span<const Grid> grids);

struct NamedGrid {
  std::string name;
  Grid grid;
};

/*!
 * Outlier composite over a z-scored base layer.
 *
 * Each variant gets a signed mask (-1, 0, +1) set where |diff| >= threshold.
 * Overlaps are encoded as bitmasks over the variant order: bit v is set when
 * variant v is an outlier at the pixel, so a pair or all three variants get
 * their own code.
 */
struct CompositeLayer {
  Grid base;
  std::vector<std::string> names;
  std::vector<ClassArray> masks;
  double threshold = 2.0;

  enum class Sign { Any, Positive, Negative };

  /// Bitmask per pixel; nodata where the base is missing.
  Grid overlap_code(Sign sign = Sign::Any) const;
  /// "nested+anp" style label for a bitmask; "none" for 0.
  std::string code_label(int code) const;
};

CompositeLayer composite(const Grid& base_z, std::span<const NamedGrid> diffs, double threshold = 2.0);

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

/// Equal-width bins over [min, max]; the maximum lands in the last bin. A
/// constant grid yields a single bin.
std::vector<HistogramBin> histogram(const Grid& grid, int bin_count);

/// Header `bin_lower,bin_upper,count`.
void write_histogram_csv(std::ostream& os, std::span<const HistogramBin> bins);

/// Linear-interpolated percentile (p in [0, 100]) of valid pixels.
double percentile(const Grid& grid, double p);

}  // namespace mcda
