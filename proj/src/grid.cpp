#include "mcda/grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mcda {

Grid::Grid(GridGeometry geometry, RasterArray values)
    : geometry_(geometry), values_(std::move(values)) {
  if (geometry_.nrows <= 0 || geometry_.ncols <= 0)
    throw Error(Errc::InvalidArgument, "grid dimensions must be positive");
  if (values_.rows() != geometry_.nrows || values_.cols() != geometry_.ncols)
    throw Error(Errc::GridShapeMismatch, "value array does not match grid geometry");
}

Grid Grid::filled(const GridGeometry& geometry, double value) {
  return Grid(geometry, RasterArray::Constant(geometry.nrows, geometry.ncols, value));
}

Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> Grid::valid_mask() const {
  return (values_ != geometry_.nodata) && values_.isFinite();
}

Eigen::Index Grid::valid_count() const { return valid_mask().count(); }

ClassGrid::ClassGrid(GridGeometry geometry, ClassArray classes, bool allow_absent)
    : geometry_(geometry), classes_(std::move(classes)), allow_absent_(allow_absent) {
  if (classes_.rows() != geometry_.nrows || classes_.cols() != geometry_.ncols)
    throw Error(Errc::GridShapeMismatch, "class array does not match grid geometry");
  const int lowest = allow_absent_ ? kAbsentClass : 1;
  for (Eigen::Index i = 0; i < classes_.size(); ++i) {
    const int c = classes_.data()[i];
    if (c != kNoClass && (c < lowest || c > 5))
      throw Error(Errc::InvalidArgument, "class value " + std::to_string(c) + " not permitted");
  }
}

Grid ClassGrid::to_grid() const {
  RasterArray values = (classes_ == kNoClass).select(geometry_.nodata, classes_.cast<double>());
  return Grid(geometry_, std::move(values));
}

ClassGrid ClassGrid::from_grid(const Grid& grid, bool allow_absent) {
  ClassArray classes(grid.rows(), grid.cols());
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      if (!grid.valid(r, c)) {
        classes(r, c) = kNoClass;
        continue;
      }
      const double v = grid(r, c);
      if (v != std::floor(v))
        throw Error(Errc::InvalidArgument, "class grid holds non-integer value");
      classes(r, c) = static_cast<int>(v);
    }
  }
  return ClassGrid(grid.geometry(), std::move(classes), allow_absent);
}

void require_same_raster(const GridGeometry& a, const GridGeometry& b) {
  if (!a.same_raster(b)) {
    std::ostringstream os;
    os << a.nrows << "x" << a.ncols << " vs " << b.nrows << "x" << b.ncols
       << " (or differing georeferencing)";
    throw Error(Errc::GridShapeMismatch, os.str());
  }
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

std::optional<double> parse_number(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool starts_numeric(const std::string& token) {
  if (token.empty()) return false;
  const unsigned char ch = static_cast<unsigned char>(token.front());
  return std::isdigit(ch) || ch == '-' || ch == '+' || ch == '.';
}

Eigen::Index parse_dimension(const std::map<std::string, std::string>& header, const char* key) {
  const auto it = header.find(key);
  if (it == header.end()) throw Error(Errc::MalformedHeader, std::string("missing ") + key);
  const auto v = parse_number(it->second);
  if (!v || *v < 1.0 || *v != std::floor(*v))
    throw Error(Errc::MalformedHeader, std::string(key) + " must be a positive integer, got '" + it->second + "'");
  return static_cast<Eigen::Index>(*v);
}

double parse_real(const std::map<std::string, std::string>& header, const std::string& key) {
  const auto v = parse_number(header.at(key));
  if (!v) throw Error(Errc::MalformedHeader, key + " is not a number: '" + header.at(key) + "'");
  return *v;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

Grid read_grid(std::istream& in) {
  std::map<std::string, std::string> header;
  std::string token;
  std::vector<std::string> first_values;
  while (in >> token) {
    if (starts_numeric(token)) {
      first_values.push_back(token);
      break;
    }
    std::string value;
    if (!(in >> value)) throw Error(Errc::MalformedHeader, "header key '" + token + "' has no value");
    header[lower(token)] = value;
  }

  GridGeometry g;
  g.ncols = parse_dimension(header, "ncols");
  g.nrows = parse_dimension(header, "nrows");
  if (!header.count("cellsize")) throw Error(Errc::MalformedHeader, "missing cellsize");
  g.cellsize = parse_real(header, "cellsize");
  if (!(g.cellsize > 0.0)) throw Error(Errc::MalformedHeader, "cellsize must be positive");
  if (header.count("xllcorner")) {
    g.xll = parse_real(header, "xllcorner");
  } else if (header.count("xllcenter")) {
    g.xll = parse_real(header, "xllcenter") - 0.5 * g.cellsize;
  } else {
    throw Error(Errc::MalformedHeader, "missing xllcorner");
  }
  if (header.count("yllcorner")) {
    g.yll = parse_real(header, "yllcorner");
  } else if (header.count("yllcenter")) {
    g.yll = parse_real(header, "yllcenter") - 0.5 * g.cellsize;
  } else {
    throw Error(Errc::MalformedHeader, "missing yllcorner");
  }
  if (header.count("nodata_value")) g.nodata = parse_real(header, "nodata_value");

  RasterArray values(g.nrows, g.ncols);
  const Eigen::Index expected = g.cell_count();
  Eigen::Index count = 0;
  auto push = [&](const std::string& t) {
    const auto v = parse_number(t);
    if (!v) throw Error(Errc::NonNumericCell, "cell " + std::to_string(count) + ": '" + t + "'");
    if (count >= expected)
      throw Error(Errc::RaggedRow, "more than " + std::to_string(expected) + " values");
    values.data()[count++] = *v;
  };
  for (const auto& t : first_values) push(t);
  while (in >> token) push(token);
  if (count != expected) {
    throw Error(Errc::RaggedRow, "expected " + std::to_string(expected) + " values, found " +
                                     std::to_string(count));
  }
  return Grid(g, std::move(values));
}

Grid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return read_grid(in);
}

void write_grid(const Grid& grid, std::ostream& out) {
  const auto& g = grid.geometry();
  out << "ncols " << g.ncols << '\n'
      << "nrows " << g.nrows << '\n'
      << "xllcorner " << format_value(g.xll) << '\n'
      << "yllcorner " << format_value(g.yll) << '\n'
      << "cellsize " << format_value(g.cellsize) << '\n'
      << "NODATA_value " << format_value(g.nodata) << '\n';
  for (Eigen::Index r = 0; r < g.nrows; ++r) {
    for (Eigen::Index c = 0; c < g.ncols; ++c) {
      if (c) out << ' ';
      out << format_value(grid.valid(r, c) ? grid(r, c) : g.nodata);
    }
    out << '\n';
  }
}

void write_grid(const Grid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  write_grid(grid, out);
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace mcda
