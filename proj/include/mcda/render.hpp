#pragma once

// Grid to RGB rendering and binary PPM output.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mcda/compare.hpp"
#include "mcda/grid.hpp"

namespace mcda {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kNodataColor{128, 128, 128};

/// Piecewise-linear ramp over evenly spaced stops.
class ColorRamp {
 public:
  explicit ColorRamp(std::vector<Rgb> stops);
  /// #2c7bb6 #abd9e9 #ffffbf #fdae61 #d7191c, low to high.
  static ColorRamp vulnerability();

  Rgb at(double t) const noexcept;
  const std::vector<Rgb>& stops() const noexcept { return stops_; }

 private:
  std::vector<Rgb> stops_;
};

enum class StretchMode { Global, LocalMinMax, Percentile5_95 };

struct Stretch {
  StretchMode mode = StretchMode::LocalMinMax;
  double lo = 0.0;  // used by Global
  double hi = 1.0;

  static Stretch global(double lo, double hi) { return {StretchMode::Global, lo, hi}; }
  static Stretch local_minmax() { return {StretchMode::LocalMinMax, 0.0, 0.0}; }
  static Stretch percentile_5_95() { return {StretchMode::Percentile5_95, 0.0, 0.0}; }

  /// Effective (lo, hi) for a grid.
  std::array<double, 2> range(const Grid& grid) const;
};

struct Image {
  Eigen::Index width = 0;
  Eigen::Index height = 0;
  std::vector<Rgb> pixels;  // row-major

  Rgb operator()(Eigen::Index r, Eigen::Index c) const { return pixels[std::size_t(r * width + c)]; }
};

Image render(const Grid& grid, const Stretch& stretch, const ColorRamp& ramp = ColorRamp::vulnerability());

/// Composite palette keyed by overlap bitmask over (nested, anp, mean_fuzzy).
Rgb composite_color(int code);
/// Base layer in grayscale, outlier pixels in their overlap color.
Image render_composite(const CompositeLayer& layer, CompositeLayer::Sign sign = CompositeLayer::Sign::Any);

void write_ppm(const Image& image, std::ostream& out);
void write_ppm(const Image& image, const std::filesystem::path& path);

}  // namespace mcda
