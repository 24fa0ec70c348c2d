#pragma once

// In-memory rasters and ESRI ASCII grid I/O.

#include <cmath>
#include <filesystem>
#include <iosfwd>

#include <Eigen/Core>

#include "mcda/error.hpp"

namespace mcda {

using RasterArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ClassArray = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kDefaultNodata = -9999.0;
/// Missing class in a ClassGrid.
inline constexpr int kNoClass = -1;
/// Non-occurrence in stochastic acute/chronic layers.
inline constexpr int kAbsentClass = 0;

/// Raster dimensions and georeferencing. Row 0 is the northern row.
struct GridGeometry {
  Eigen::Index nrows = 0;
  Eigen::Index ncols = 0;
  double cellsize = 1.0;
  double xll = 0.0;  // lower-left corner
  double yll = 0.0;
  double nodata = kDefaultNodata;

  Eigen::Index cell_count() const noexcept { return nrows * ncols; }
  bool same_raster(const GridGeometry& o) const noexcept {
    return nrows == o.nrows && ncols == o.ncols && cellsize == o.cellsize && xll == o.xll &&
           yll == o.yll;
  }
  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

class Grid {
 public:
  Grid(GridGeometry geometry, RasterArray values);

  /// Every cell set to `value`.
  static Grid filled(const GridGeometry& geometry, double value);

  const GridGeometry& geometry() const noexcept { return geometry_; }
  const RasterArray& values() const noexcept { return values_; }
  Eigen::Index rows() const noexcept { return geometry_.nrows; }
  Eigen::Index cols() const noexcept { return geometry_.ncols; }
  double nodata() const noexcept { return geometry_.nodata; }

  double operator()(Eigen::Index r, Eigen::Index c) const { return values_(r, c); }
  bool valid(Eigen::Index r, Eigen::Index c) const {
    const double v = values_(r, c);
    return v != geometry_.nodata && std::isfinite(v);
  }

  /// true where the cell holds data.
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> valid_mask() const;
  Eigen::Index valid_count() const;

 private:
  GridGeometry geometry_;
  RasterArray values_;
};

/// Class raster: values in {1..5} or kNoClass; stochastic layers also allow kAbsentClass.
class ClassGrid {
 public:
  ClassGrid(GridGeometry geometry, ClassArray classes, bool allow_absent = false);

  const GridGeometry& geometry() const noexcept { return geometry_; }
  const ClassArray& classes() const noexcept { return classes_; }
  Eigen::Index rows() const noexcept { return geometry_.nrows; }
  Eigen::Index cols() const noexcept { return geometry_.ncols; }
  bool allows_absent() const noexcept { return allow_absent_; }
  int operator()(Eigen::Index r, Eigen::Index c) const { return classes_(r, c); }

  /// Real-valued copy; missing classes become the geometry's nodata.
  Grid to_grid() const;
  /// Reads class codes from a grid; non-integer or out-of-range values are rejected.
  static ClassGrid from_grid(const Grid& grid, bool allow_absent = false);

 private:
  GridGeometry geometry_;
  ClassArray classes_;
  bool allow_absent_;
};

void require_same_raster(const GridGeometry& a, const GridGeometry& b);

Grid read_grid(std::istream& in);
Grid read_grid(const std::filesystem::path& path);
/// Values are printed with up to 9 significant digits.
void write_grid(const Grid& grid, std::ostream& out);
void write_grid(const Grid& grid, const std::filesystem::path& path);

}  // namespace mcda
