#pragma once

// Pipeline configuration: JSON with `//` and `/* */` comments.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcda/anp.hpp"
#include "mcda/classify.hpp"
#include "mcda/fuzzy.hpp"
#include "mcda/overlay.hpp"
#include "mcda/pairwise.hpp"

namespace mcda {

inline constexpr std::size_t kFactorCount = 6;
inline constexpr const char* kSyntheticSource = "synthetic";

struct FactorSpec {
  std::string name;
  std::string source = kSyntheticSource;  // "synthetic" or an ASCII grid path
  std::optional<BreakSet> breaks;
  std::optional<CategoryMap> categories;
};

/// Seeds derived from one master seed X: synthetic X, fuzzy X, sample X+1,
/// acute X+2, chronic X+3.
struct Seeds {
  std::uint64_t synthetic = 0;
  std::uint64_t fuzzy = 0;
  std::uint64_t sample = 1;
  std::uint64_t acute = 2;
  std::uint64_t chronic = 3;

  static Seeds derive(std::uint64_t master) {
    return {master, master, master + 1, master + 2, master + 3};
  }
};

struct OneNSpec {
  std::vector<double> n_values{0.67, 0.835};
  double p_acute = 0.025;    // occurrence probability of the acute layer
  double p_chronic = 0.25;
  double fuzzy_n = 0.67;     // worst case used by the fuzzy 1-N stage
  double p_acute_excl = 0.975;
  double p_chronic_excl = 0.75;
};

struct PipelineConfig {
  std::array<FactorSpec, kFactorCount> factors;
  ComparisonMatrix<double> comparison = ComparisonMatrix<double>::consistent(VectorX<double>::Ones(kFactorCount));
  /// Within-factor matrices in published order (class 5 first).
  std::vector<ComparisonMatrix<double>> class_matrices;
  /// 5 x 6, row c-1 = class c.
  Eigen::MatrixXd subweights;
  anp::SupermatrixBlocks<double> anp_blocks;
  FuzzSpec fuzzy;
  std::size_t mean_sample = 500;
  OneNSpec one_n;
  double composite_threshold = 2.0;
  int histogram_bins = 20;
  Seeds seeds;
  Eigen::Index synthetic_rows = 256;
  Eigen::Index synthetic_cols = 256;
  unsigned threads = 1;
  std::filesystem::path output_dir = "out";

  std::vector<std::string> factor_names() const;
};

/// Parses and validates; relative grid paths resolve against `base_dir`.
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Applies a master seed to every derived seed.
void apply_master_seed(PipelineConfig& config, std::uint64_t seed);

}  // namespace mcda
