#include "mcda/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace mcda {

namespace {

std::uint8_t lerp_channel(std::uint8_t a, std::uint8_t b, double f) {
  const double v = double(a) + f * (double(b) - double(a));
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

ColorRamp::ColorRamp(std::vector<Rgb> stops) : stops_(std::move(stops)) {
  if (stops_.size() < 2) throw Error(Errc::InvalidArgument, "ramp needs at least two stops");
}

ColorRamp ColorRamp::vulnerability() {
  return ColorRamp({{0x2c, 0x7b, 0xb6}, {0xab, 0xd9, 0xe9}, {0xff, 0xff, 0xbf}, {0xfd, 0xae, 0x61},
                    {0xd7, 0x19, 0x1c}});
}

Rgb ColorRamp::at(double t) const noexcept {
  if (!(t > 0.0)) return stops_.front();
  if (t >= 1.0) return stops_.back();
  const double pos = t * double(stops_.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double f = pos - double(i);
  const Rgb& a = stops_[i];
  const Rgb& b = stops_[i + 1];
  return {lerp_channel(a.r, b.r, f), lerp_channel(a.g, b.g, f), lerp_channel(a.b, b.b, f)};
}

std::array<double, 2> Stretch::range(const Grid& grid) const {
  switch (mode) {
    case StretchMode::Global:
      return {lo, hi};
    case StretchMode::LocalMinMax:
      return {percentile(grid, 0.0), percentile(grid, 100.0)};
    case StretchMode::Percentile5_95:
      return {percentile(grid, 5.0), percentile(grid, 95.0)};
  }
  return {lo, hi};
}

Image render(const Grid& grid, const Stretch& stretch, const ColorRamp& ramp) {
  const auto [lo, hi] = stretch.range(grid);
  if (!(hi > lo)) throw Error(Errc::DegenerateRange, "stretch range is empty");
  Image img{grid.cols(), grid.rows(), {}};
  img.pixels.reserve(std::size_t(grid.geometry().cell_count()));
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      if (!grid.valid(r, c)) {
        img.pixels.push_back(kNodataColor);
        continue;
      }
      img.pixels.push_back(ramp.at((grid(r, c) - lo) / (hi - lo)));
    }
  }
  return img;
}

Rgb composite_color(int code) {
  switch (code) {
    case 1: return {228, 26, 28};    // nested
    case 2: return {55, 126, 184};   // anp
    case 4: return {255, 221, 0};    // mean_fuzzy
    case 3: return {152, 78, 163};   // nested+anp
    case 5: return {255, 127, 0};    // nested+mean_fuzzy
    case 6: return {77, 175, 74};    // anp+mean_fuzzy
    case 7: return {0, 0, 0};
    default: return kNodataColor;
  }
}

Image render_composite(const CompositeLayer& layer, CompositeLayer::Sign sign) {
  const Grid code = layer.overlap_code(sign);
  const Grid& base = layer.base;
  Image img{base.cols(), base.rows(), {}};
  img.pixels.reserve(std::size_t(base.geometry().cell_count()));
  const auto [lo, hi] = Stretch::local_minmax().range(base);
  const double span = hi > lo ? hi - lo : 1.0;
  for (Eigen::Index r = 0; r < base.rows(); ++r) {
    for (Eigen::Index c = 0; c < base.cols(); ++c) {
      if (!base.valid(r, c)) {
        img.pixels.push_back(kNodataColor);
        continue;
      }
      const int k = static_cast<int>(code(r, c));
      if (k != 0) {
        img.pixels.push_back(composite_color(k));
        continue;
      }
      const auto g = static_cast<std::uint8_t>(std::lround(60.0 + 170.0 * std::clamp((base(r, c) - lo) / span, 0.0, 1.0)));
      img.pixels.push_back({g, g, g});
    }
  }
  return img;
}

void write_ppm(const Image& image, std::ostream& out) {
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  for (const auto& p : image.pixels) {
    const char px[3] = {char(p.r), char(p.g), char(p.b)};
    out.write(px, 3);
  }
}

void write_ppm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  write_ppm(image, out);
  if (!out) throw Error(Errc::IoError, "write failed: " + path.string());
}

}  // namespace mcda
