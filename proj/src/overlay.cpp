#include "mcda/overlay.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mcda/random.hpp"

namespace mcda {

namespace {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_inputs(std::span<const ClassGrid> classes, Eigen::Index weights) {
  if (classes.empty()) throw Error(Errc::InvalidArgument, "no class grids");
  if (static_cast<Eigen::Index>(classes.size()) != weights) {
    throw Error(Errc::InvalidArgument, std::to_string(classes.size()) + " grids for " +
                                           std::to_string(weights) + " weights");
  }
  for (const auto& g : classes) require_same_raster(classes.front().geometry(), g.geometry());
}

Mask missing_mask(std::span<const ClassGrid> classes) {
  Mask missing = Mask::Constant(classes.front().rows(), classes.front().cols(), false);
  for (const auto& g : classes) missing = missing || (g.classes() == kNoClass);
  return missing;
}

Grid finish(const GridGeometry& geometry, RasterArray sum, const Mask& missing) {
  sum = missing.select(geometry.nodata, sum);
  return Grid(geometry, std::move(sum));
}

}  // namespace

Grid weighted_overlay(std::span<const ClassGrid> classes, const PriorityVector<double>& w) {
  check_inputs(classes, w.size());
  const auto& geometry = classes.front().geometry();
  RasterArray sum = RasterArray::Zero(geometry.nrows, geometry.ncols);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    sum += w[static_cast<Eigen::Index>(i)] * classes[i].classes().cast<double>();
  }
  return finish(geometry, std::move(sum), missing_mask(classes));
}

void validate_subweights(const Eigen::MatrixXd& s) {
  if (s.rows() != kClassCount) throw Error(Errc::InvalidArgument, "subweights need 5 rows");
  for (Eigen::Index f = 0; f < s.cols(); ++f) {
    if (std::abs(s.col(f).sum() - 1.0) > 0.01)
      throw Error(Errc::InvalidArgument, "subweight column " + std::to_string(f) + " does not sum to 1");
    if (!(s(kClassCount - 1, f) > s(0, f)))
      throw Error(Errc::InvalidArgument,
                  "subweight column " + std::to_string(f) + ": class 5 must exceed class 1");
  }
}

Grid nested_overlay(std::span<const ClassGrid> classes, const PriorityVector<double>& w,
                    const Eigen::MatrixXd& subweights) {
  check_inputs(classes, w.size());
  if (subweights.rows() != kClassCount || subweights.cols() != w.size())
    throw Error(Errc::InvalidArgument, "subweight matrix must be 5 x factor count");
  for (Eigen::Index f = 0; f < subweights.cols(); ++f) {
    if (std::abs(subweights.col(f).sum() - 1.0) > 0.01)
      throw Error(Errc::InvalidArgument, "subweight column " + std::to_string(f) + " does not sum to 1");
  }
  const auto& geometry = classes.front().geometry();
  RasterArray sum = RasterArray::Zero(geometry.nrows, geometry.ncols);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto f = static_cast<Eigen::Index>(i);
    // One-hot selection s_f(x_f(p)) as a per-pixel lookup.
    const ClassArray& x = classes[i].classes();
    RasterArray selected = RasterArray::Zero(geometry.nrows, geometry.ncols);
    for (int c = 1; c <= kClassCount; ++c) selected = (x == c).select(subweights(c - 1, f), selected);
    sum += w[f] * selected;
  }
  return finish(geometry, std::move(sum), missing_mask(classes));
}

ClassGrid stochastic_class_layer(const GridGeometry& geometry, double p_occ, std::uint64_t seed) {
  if (!(p_occ >= 0.0 && p_occ <= 1.0)) throw Error(Errc::InvalidArgument, "p_occ must lie in [0, 1]");
  ClassArray out(geometry.nrows, geometry.ncols);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    auto rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(i));
    const bool occurs = rng.uniform() < p_occ;
    const int cls = 1 + std::min(kClassCount - 1, static_cast<int>(rng.uniform() * kClassCount));
    out.data()[i] = occurs ? cls : kAbsentClass;
  }
  return ClassGrid(geometry, std::move(out), /*allow_absent=*/true);
}

PriorityVector<double> one_n_weights(const PriorityVector<double>& base_w, double n) {
  if (!(n >= 0.67 - 1e-12 && n <= 1.0 + 1e-12))
    throw Error(Errc::InvalidArgument, "N must lie in [0.67, 1]");
  const double rest = 1.0 - n;
  Eigen::VectorXd w(base_w.size() + 2);
  w.head(base_w.size()) = n * base_w.vector();
  w[base_w.size()] = kAcuteShare * rest;
  w[base_w.size() + 1] = (1.0 - kAcuteShare) * rest;
  return PriorityVector<double>(std::move(w));
}

Grid one_n_overlay(std::span<const ClassGrid> classes6, const ClassGrid& acute,
                   const ClassGrid& chronic, const PriorityVector<double>& base_w, double n) {
  check_inputs(classes6, base_w.size());
  require_same_raster(classes6.front().geometry(), acute.geometry());
  require_same_raster(classes6.front().geometry(), chronic.geometry());
  const auto w = one_n_weights(base_w, n);
  const auto& geometry = classes6.front().geometry();
  RasterArray sum = RasterArray::Zero(geometry.nrows, geometry.ncols);
  for (std::size_t i = 0; i < classes6.size(); ++i) {
    sum += w[static_cast<Eigen::Index>(i)] * classes6[i].classes().cast<double>();
  }
  const auto k = static_cast<Eigen::Index>(classes6.size());
  // kAbsentClass is 0, so non-occurrence drops out of the sum.
  sum += w[k] * acute.classes().cast<double>() + w[k + 1] * chronic.classes().cast<double>();
  Mask missing = missing_mask(classes6) || acute.classes() == kNoClass || chronic.classes() == kNoClass;
  return finish(geometry, std::move(sum), missing);
}

}  // namespace mcda
