#include "mcda/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace mcda {

namespace {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<double> valid_values(const Grid& grid) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(grid.values().size()));
  for (Eigen::Index r = 0; r < grid.rows(); ++r)
    for (Eigen::Index c = 0; c < grid.cols(); ++c)
      if (grid.valid(r, c)) out.push_back(grid(r, c));
  return out;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

Grid zscore(const Grid& grid) {
  const Mask valid = grid.valid_mask();
  const auto n = valid.count();
  if (n < 2) throw Error(Errc::ZeroVariance, "fewer than two valid pixels");
  const RasterArray zeroed = valid.select(grid.values(), 0.0);
  const double mean = zeroed.sum() / double(n);
  const double var = valid.select((grid.values() - mean).square(), 0.0).sum() / double(n);
  const double sd = std::sqrt(var);
  if (!(sd > 0.0) || sd <= 1e-12 * std::max(1.0, std::abs(mean)))
    throw Error(Errc::ZeroVariance, "grid has zero variance");
  RasterArray z = valid.select((grid.values() - mean) / sd, grid.nodata());
  return Grid(grid.geometry(), std::move(z));
}

Grid diff_layer(const Grid& ahp, const Grid& variant) {
  require_same_raster(ahp.geometry(), variant.geometry());
  const Grid za = zscore(ahp);
  const Grid zv = zscore(variant);
  const Mask valid = za.valid_mask() && zv.valid_mask();
  RasterArray d = valid.select(za.values() - zv.values(), ahp.nodata());
  return Grid(ahp.geometry(), std::move(d));
}

Grid stddev_stack(std::span<const Grid> grids) {
  if (grids.size() < 2) throw Error(Errc::InvalidArgument, "stack needs at least two grids");
  std::vector<Grid> z;
  z.reserve(grids.size());
  for (const auto& g : grids) {
    require_same_raster(grids.front().geometry(), g.geometry());
    z.push_back(zscore(g));
  }
  const auto& geometry = grids.front().geometry();
  Mask valid = Mask::Constant(geometry.nrows, geometry.ncols, true);
  RasterArray sum = RasterArray::Zero(geometry.nrows, geometry.ncols);
  for (const auto& g : z) {
    valid = valid && g.valid_mask();
    sum += g.values();
  }
  const RasterArray mean = sum / double(z.size());
  RasterArray sq = RasterArray::Zero(geometry.nrows, geometry.ncols);
  for (const auto& g : z) sq += (g.values() - mean).square();
  RasterArray sd = valid.select((sq / double(z.size())).sqrt(), grids.front().nodata());
  return Grid(geometry, std::move(sd));
}

Grid CompositeLayer::overlap_code(Sign sign) const {
  const auto& geometry = base.geometry();
  RasterArray code = RasterArray::Zero(geometry.nrows, geometry.ncols);
  for (std::size_t v = 0; v < masks.size(); ++v) {
    Mask hit;
    switch (sign) {
      case Sign::Any: hit = masks[v] != 0; break;
      case Sign::Positive: hit = masks[v] > 0; break;
      case Sign::Negative: hit = masks[v] < 0; break;
    }
    code += hit.cast<double>() * double(1 << v);
  }
  code = base.valid_mask().select(code, geometry.nodata);
  return Grid(geometry, std::move(code));
}

std::string CompositeLayer::code_label(int code) const {
  if (code == 0) return "none";
  std::string label;
  for (std::size_t v = 0; v < names.size(); ++v) {
    if (code & (1 << v)) {
      if (!label.empty()) label += '+';
      label += names[v];
    }
  }
  return label;
}

CompositeLayer composite(const Grid& base_z, std::span<const NamedGrid> diffs, double threshold) {
  if (!(threshold > 0.0)) throw Error(Errc::InvalidArgument, "threshold must be positive");
  if (diffs.size() > 16) throw Error(Errc::InvalidArgument, "too many variants");
  CompositeLayer layer{base_z, {}, {}, threshold};
  for (const auto& d : diffs) {
    require_same_raster(base_z.geometry(), d.grid.geometry());
    const Mask valid = d.grid.valid_mask() && base_z.valid_mask();
    const RasterArray& v = d.grid.values();
    ClassArray mask = ClassArray::Zero(v.rows(), v.cols());
    mask = (valid && v >= threshold).select(1, mask);
    mask = (valid && v <= -threshold).select(-1, mask);
    layer.names.push_back(d.name);
    layer.masks.push_back(std::move(mask));
  }
  return layer;
}

std::vector<HistogramBin> histogram(const Grid& grid, int bin_count) {
  if (bin_count < 1) throw Error(Errc::InvalidArgument, "bin count must be positive");
  const auto values = valid_values(grid);
  if (values.empty()) throw Error(Errc::EmptyGrid, "no valid pixels");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) return {{lo, hi, values.size()}};

  const double width = (hi - lo) / bin_count;
  std::vector<HistogramBin> bins(static_cast<std::size_t>(bin_count));
  for (int b = 0; b < bin_count; ++b) {
    bins[static_cast<std::size_t>(b)].lower = lo + b * width;
    bins[static_cast<std::size_t>(b)].upper = b + 1 == bin_count ? hi : lo + (b + 1) * width;
  }
  for (double v : values) {
    auto b = static_cast<int>((v - lo) / width);
    b = std::clamp(b, 0, bin_count - 1);
    ++bins[static_cast<std::size_t>(b)].count;
  }
  return bins;
}

void write_histogram_csv(std::ostream& os, std::span<const HistogramBin> bins) {
  os << "bin_lower,bin_upper,count\n";
  for (const auto& b : bins) os << format_value(b.lower) << ',' << format_value(b.upper) << ',' << b.count << '\n';
}

double percentile(const Grid& grid, double p) {
  auto values = valid_values(grid);
  if (values.empty()) throw Error(Errc::EmptyGrid, "no valid pixels");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * double(values.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - double(i);
  if (i + 1 >= values.size()) return values.back();
  return values[i] + frac * (values[i + 1] - values[i]);
}

}  // namespace mcda
