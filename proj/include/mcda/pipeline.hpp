#pragma once

// End-to-end run: scenario, every scoring variant, comparisons, exports.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcda/classify.hpp"
#include "mcda/config.hpp"
#include "mcda/grid.hpp"

namespace mcda {

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> sim_count;
  bool quiet = true;
};

struct RunManifest {
  std::filesystem::path output_dir;
  /// Relative file name -> sha256 hex.
  std::map<std::string, std::string> outputs;
  std::vector<std::string> notes;
  /// Digest of the manifest without timings.
  std::string content_digest;
  std::string text;
};

/// Factor rasters for a config: generated or read, checked for co-registration.
std::vector<Grid> load_factor_grids(const PipelineConfig& config);
std::vector<ClassGrid> classify_factors(const PipelineConfig& config, const std::vector<Grid>& grids);

/// Writes all artifacts plus manifest.json. Stage failures are rethrown with
/// the stage name prefixed.
RunManifest run_pipeline(PipelineConfig config, const RunOptions& options = {});

}  // namespace mcda
