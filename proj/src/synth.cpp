#include "mcda/synth.hpp"

#include <cmath>
#include <numbers>

#include "mcda/random.hpp"

namespace mcda {

namespace {

RasterArray octave(std::uint64_t seed, Eigen::Index nrows, Eigen::Index ncols, int cells) {
  const Eigen::Index lat_cols = cells + 1;
  auto node = [&](Eigen::Index i, Eigen::Index j) {
    return SplitMix64::stream(seed, std::uint64_t(i * lat_cols + j)).uniform();
  };
  RasterArray out(nrows, ncols);
  for (Eigen::Index r = 0; r < nrows; ++r) {
    const double y = (double(r) + 0.5) / double(nrows) * cells;
    const auto i = std::min<Eigen::Index>(Eigen::Index(y), cells - 1);
    const double fy = y - double(i);
    for (Eigen::Index c = 0; c < ncols; ++c) {
      const double x = (double(c) + 0.5) / double(ncols) * cells;
      const auto j = std::min<Eigen::Index>(Eigen::Index(x), cells - 1);
      const double fx = x - double(j);
      const double top = node(i, j) * (1 - fx) + node(i, j + 1) * fx;
      const double bot = node(i + 1, j) * (1 - fx) + node(i + 1, j + 1) * fx;
      out(r, c) = top * (1 - fy) + bot * fy;
    }
  }
  return out;
}

RasterArray rescale(const RasterArray& a) {
  const double lo = a.minCoeff();
  const double hi = a.maxCoeff();
  return hi > lo ? RasterArray((a - lo) / (hi - lo)) : RasterArray(RasterArray::Zero(a.rows(), a.cols()));
}

}  // namespace

RasterArray lattice_noise(std::uint64_t seed, Eigen::Index nrows, Eigen::Index ncols, int cells) {
  const RasterArray coarse = octave(mix64(seed ^ 0x1), nrows, ncols, cells);
  const RasterArray fine = octave(mix64(seed ^ 0x2), nrows, ncols, cells * 4);
  return rescale(0.75 * coarse + 0.25 * fine);
}

Scenario synth_scenario(std::uint64_t seed, Eigen::Index nrows, Eigen::Index ncols) {
  if (nrows < kMinSynthDimension || ncols < kMinSynthDimension)
    throw Error(Errc::InvalidArgument, "synthetic scenario needs at least 16x16 cells");

  const GridGeometry geometry{nrows, ncols, 30.0, 0.0, 0.0, kDefaultNodata};
  auto field = [&](std::uint64_t k) { return lattice_noise(mix64(seed + k * kGoldenGamma), nrows, ncols, 4); };

  // River centreline and buffer.
  const double pi = std::numbers::pi;
  RasterArray river_dist(nrows, ncols);
  for (Eigen::Index r = 0; r < nrows; ++r) {
    const double centre = 0.5 * double(ncols) + 0.12 * double(ncols) * std::sin(2 * pi * double(r) / double(nrows));
    for (Eigen::Index c = 0; c < ncols; ++c) river_dist(r, c) = std::abs(double(c) - centre) / double(ncols);
  }
  const double river_half_width = 0.02;
  const auto river = (river_dist < river_half_width).eval();

  const RasterArray pd_t = field(1);
  const RasterArray lulc_t = field(2);
  const RasterArray rain_t = field(3);
  const RasterArray dd_t = field(4);
  const RasterArray slope_t = field(5);
  const RasterArray lst_t = field(6);

  RasterArray pd = 8000.0 * pd_t.pow(2.5);
  RasterArray lulc(nrows, ncols);
  for (Eigen::Index r = 0; r < nrows; ++r) {
    for (Eigen::Index c = 0; c < ncols; ++c) {
      double code;
      if (pd_t(r, c) > 0.82)
        code = 50;
      else if (river_dist(r, c) < 2.5 * river_half_width)
        code = 80;
      else {
        static constexpr double bands[] = {80, 10, 30, 40, 60};
        code = bands[std::min(4, int(lulc_t(r, c) * 5.0))];
      }
      lulc(r, c) = code;
    }
  }
  RasterArray rain = 700.0 + 1000.0 * rain_t;
  RasterArray dd = 6.0 * dd_t;
  RasterArray slope = 50.0 * slope_t;
  RasterArray lst = 20.0 + 22.0 * lst_t;

  Scenario s{{Grid(geometry, river.select(kDefaultNodata, pd)), Grid(geometry, river.select(kDefaultNodata, lulc)),
              Grid(geometry, river.select(kDefaultNodata, rain)), Grid(geometry, river.select(kDefaultNodata, dd)),
              Grid(geometry, river.select(kDefaultNodata, slope)), Grid(geometry, river.select(kDefaultNodata, lst))}};
  return s;
}

}  // namespace mcda
