#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcda {

enum class Errc {
  // pairwise-core
  NonPositiveEntry,
  EntryOutOfScale,
  ReciprocityViolation,
  BadDiagonal,
  DimensionOutOfRange,
  ZeroWeightComponent,
  RandomIndexUnavailable,
  // fuzzy-mc
  BaselineMismatch,
  NoSuchCase,
  InvalidFuzzSpec,
  // anp
  BlockDimensionMismatch,
  NotConverged,
  ZeroVector,
  // raster
  MalformedHeader,
  RaggedRow,
  NonNumericCell,
  TooFewDistinctValues,
  UnmappedCategory,
  GridShapeMismatch,
  ZeroVariance,
  EmptyGrid,
  DegenerateRange,
  InvalidArgument,
  // cli / pipeline
  SchemaError,
  ValidationError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// I/O-class failures map to CLI exit code 2, everything else to 1.
constexpr bool is_io_error(Errc code) noexcept {
  return code == Errc::IoError || code == Errc::MalformedHeader ||
         code == Errc::RaggedRow || code == Errc::NonNumericCell;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveEntry: return "NonPositiveEntry";
    case Errc::EntryOutOfScale: return "EntryOutOfScale";
    case Errc::ReciprocityViolation: return "ReciprocityViolation";
    case Errc::BadDiagonal: return "BadDiagonal";
    case Errc::DimensionOutOfRange: return "DimensionOutOfRange";
    case Errc::ZeroWeightComponent: return "ZeroWeightComponent";
    case Errc::RandomIndexUnavailable: return "RandomIndexUnavailable";
    case Errc::BaselineMismatch: return "BaselineMismatch";
    case Errc::NoSuchCase: return "NoSuchCase";
    case Errc::InvalidFuzzSpec: return "InvalidFuzzSpec";
    case Errc::BlockDimensionMismatch: return "BlockDimensionMismatch";
    case Errc::NotConverged: return "NotConverged";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::RaggedRow: return "RaggedRow";
    case Errc::NonNumericCell: return "NonNumericCell";
    case Errc::TooFewDistinctValues: return "TooFewDistinctValues";
    case Errc::UnmappedCategory: return "UnmappedCategory";
    case Errc::GridShapeMismatch: return "GridShapeMismatch";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::SchemaError: return "SchemaError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mcda
