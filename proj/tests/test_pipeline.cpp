#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "mcda/config.hpp"
#include "mcda/digest.hpp"
#include "mcda/pipeline.hpp"

using namespace mcda;
namespace fs = std::filesystem;

namespace {

PipelineConfig small_config() {
  PipelineConfig c = load_config("configs/reference.config");
  c.synthetic_rows = 48;
  c.synthetic_cols = 40;
  c.fuzzy.sim_count = 3000;
  c.mean_sample = 100;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mcda_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("pipeline emits every artifact") {
  RunOptions opt;
  opt.output_dir = scratch("full");
  const RunManifest m = run_pipeline(small_config(), opt);
  for (const char* name : {"ahp.asc", "nested.asc", "anp.asc", "one_n_0.67.asc", "one_n_0.835.asc", "mean_fuzzy.asc",
                           "case1.asc", "case2.asc", "diff_nested.asc", "diff_anp.asc", "diff_mean_fuzzy.asc",
                           "diff_one_n_0.67.asc", "diff_case1.asc", "diff_case2.asc", "stddev_stack.asc",
                           "composite_any.asc", "composite_positive.asc", "composite_negative.asc",
                           "composite_any.ppm", "diff_anp_global.ppm", "diff_anp_local.ppm", "diff_anp_p5_95.ppm",
                           "hist_ahp.csv", "fuzzy_reversals.csv", "fuzzy_rate.csv", "fuzzy_one_n_reversals.csv",
                           "fuzzy_one_n_rate.csv", "layer_acute.asc", "class_PD.asc"}) {
    INFO(name);
    CHECK(m.outputs.count(name) == 1);
    CHECK(fs::exists(*opt.output_dir / name));
  }
  CHECK(fs::exists(*opt.output_dir / "manifest.json"));
  for (const auto& [name, digest] : m.outputs) CHECK(sha256_file(*opt.output_dir / name) == digest);
  CHECK(m.text.find("\"timings_ms\"") != std::string::npos);
  CHECK(m.text.find("\"content_digest\": \"" + m.content_digest) != std::string::npos);
  CHECK(m.text.find("\"digest_algorithm\": \"sha256\"") != std::string::npos);
  CHECK(m.text.find("\"alternative_priorities_class5_first\"") != std::string::npos);
  CHECK(m.text.find("\"w32_minus_nested_subweights_max_abs\"") != std::string::npos);
  CHECK(m.notes.empty());
  fs::remove_all(*opt.output_dir);
}

TEST_CASE("pipeline is deterministic across runs and thread counts") {
  RunOptions a, b;
  a.output_dir = scratch("a");
  b.output_dir = scratch("b");
  PipelineConfig threaded = small_config();
  threaded.threads = 3;
  const RunManifest ma = run_pipeline(small_config(), a);
  const RunManifest mb = run_pipeline(threaded, b);
  CHECK(ma.content_digest == mb.content_digest);
  CHECK(ma.outputs == mb.outputs);
  fs::remove_all(*a.output_dir);
  fs::remove_all(*b.output_dir);
}

TEST_CASE("seed option changes stochastic outputs only through derived seeds") {
  RunOptions a, b;
  a.output_dir = scratch("s1");
  b.output_dir = scratch("s2");
  b.seed = 7;
  const RunManifest ma = run_pipeline(small_config(), a);
  const RunManifest mb = run_pipeline(small_config(), b);
  CHECK(ma.content_digest != mb.content_digest);
  CHECK(ma.outputs.at("layer_acute.asc") != mb.outputs.at("layer_acute.asc"));
  fs::remove_all(*a.output_dir);
  fs::remove_all(*b.output_dir);
}

TEST_CASE("zero simulations skip fuzzy stages with a note") {
  RunOptions opt;
  opt.output_dir = scratch("nosim");
  opt.sim_count = 0;
  const RunManifest m = run_pipeline(small_config(), opt);
  CHECK(m.outputs.count("mean_fuzzy.asc") == 0);
  CHECK(m.outputs.count("fuzzy_reversals.csv") == 0);
  CHECK(m.outputs.count("ahp.asc") == 1);
  REQUIRE(m.notes.size() == 1);
  CHECK(m.notes[0].find("skipped") != std::string::npos);
  CHECK(m.text.find("skipped") != std::string::npos);
  fs::remove_all(*opt.output_dir);
}

TEST_CASE("stage failures name the stage") {
  PipelineConfig c = small_config();
  c.factors[2].source = "/nonexistent/rain.asc";
  RunOptions opt;
  opt.output_dir = scratch("fail");
  try {
    run_pipeline(c, opt);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IoError);
    CHECK(std::string(e.what()).find("stage load") != std::string::npos);
  }
  fs::remove_all(*opt.output_dir);
}

TEST_CASE("file-backed factors") {
  RunOptions gen;
  gen.output_dir = scratch("gen");
  gen.sim_count = 0;
  run_pipeline(small_config(), gen);
  PipelineConfig c = small_config();
  for (auto& f : c.factors) f.source = (*gen.output_dir / ("factor_" + f.name + ".asc")).string();
  RunOptions opt;
  opt.output_dir = scratch("files");
  opt.sim_count = 0;
  const RunManifest m = run_pipeline(c, opt);
  std::ifstream a(*gen.output_dir / "ahp.asc"), b(*opt.output_dir / "ahp.asc");
  CHECK(std::string(std::istreambuf_iterator<char>(a), {}) == std::string(std::istreambuf_iterator<char>(b), {}));
  CHECK(m.outputs.count("ahp.asc") == 1);
  fs::remove_all(*gen.output_dir);
  fs::remove_all(*opt.output_dir);
}
