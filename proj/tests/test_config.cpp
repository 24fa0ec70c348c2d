#include <doctest.h>

#include <fstream>
#include <iterator>
#include <regex>

#include <json.hpp>

#include "mcda/config.hpp"

using namespace mcda;

namespace {

std::string reference_text() {
  std::ifstream in("configs/reference.config");
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("shipped config loads with defaults") {
  const PipelineConfig c = load_config("configs/reference.config");
  CHECK(c.factors.size() == 6);
  CHECK(c.factor_names() == std::vector<std::string>{"PD", "LULC", "RAIN", "DD", "SLOPE", "LST"});
  CHECK(c.factors[1].categories.has_value());
  CHECK(c.factors[0].breaks->thresholds() == std::array<double, 4>{865, 1600, 2680, 4036});
  CHECK(c.fuzzy.fuzziness == 0.95);
  CHECK(c.fuzzy.sim_count == 100000);
  CHECK(c.fuzzy.master_seed == 42);
  CHECK(c.seeds.sample == 43);
  CHECK(c.seeds.acute == 44);
  CHECK(c.seeds.chronic == 45);
  CHECK(c.composite_threshold == 2.0);
  CHECK(c.one_n.n_values == std::vector<double>{0.67, 0.835});
  CHECK(c.class_matrices.size() == 6);
}

TEST_CASE("subweights reproduce the published table within 0.01") {
  const PipelineConfig c = load_config("configs/reference.config");
  // Rows class 1..5, columns PD, LULC, RAIN, DD, SLOPE, LST.
  const double published[6][5] = {{0.050, 0.057, 0.114, 0.207, 0.572}, {0.055, 0.110, 0.144, 0.186, 0.505},
                                   {0.102, 0.102, 0.124, 0.172, 0.501}, {0.065, 0.065, 0.071, 0.157, 0.642},
                                   {0.034, 0.070, 0.202, 0.278, 0.416}, {0.050, 0.099, 0.129, 0.165, 0.557}};
  for (int f = 0; f < 6; ++f)
    for (int k = 0; k < 5; ++k) CHECK(std::abs(c.subweights(k, f) - published[f][k]) <= 0.01);
}

TEST_CASE("defaults apply when sections are omitted") {
  std::string text = reference_text();
  text = std::regex_replace(text, std::regex(R"(\"fuzzy\": \{[^}]*\},)"), "");
  text = std::regex_replace(text, std::regex(R"(\"composite\": \{[^}]*\},)"), "");
  const PipelineConfig c = parse_config(text);
  CHECK(c.fuzzy.sim_count == 100000);
  CHECK(c.fuzzy.fuzziness == 0.95);
  CHECK(c.composite_threshold == 2.0);
}

TEST_CASE("schema errors carry the field path") {
  const std::string text = reference_text();
  auto j = nlohmann::json::parse(text, nullptr, true, true);
  j["factors"].erase(5);
  const std::string missing = j.dump();
  try {
    parse_config(missing);
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaError);
    CHECK(std::string(e.what()).find("factors: expected 6") != std::string::npos);
  }
  CHECK_THROWS_WITH_AS(parse_config(replace(text, "\"comparison\"", "\"comparisons\"")),
                       doctest::Contains("comparison: missing"), Error);
  CHECK_THROWS_WITH_AS(parse_config(replace(text, "[865, 1600, 2680, 4036]", "[865, 1600, 2680]")),
                       doctest::Contains("factors[0].breaks: expected 4"), Error);
  CHECK_THROWS_WITH_AS(parse_config("{ not json"), doctest::Contains("SchemaError"), Error);
}

TEST_CASE("module validation errors are delegated") {
  const std::string text = reference_text();
  try {
    parse_config(replace(text, "[0.5,  1,    3,    4,    5,    7]", "[2,    1,    3,    4,    5,    7]"));
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ValidationError);
    CHECK(std::string(e.what()).find("ReciprocityViolation") != std::string::npos);
  }
  // The slope matrix as printed is not reciprocal.
  CHECK_THROWS_WITH_AS(parse_config(replace(text, R"("factor": "SLOPE", "form": "lower")", R"("factor": "SLOPE", "form": "full")")),
                       doctest::Contains("ReciprocityViolation"), Error);
  CHECK_THROWS_WITH_AS(parse_config(replace(text, "[865, 1600, 2680, 4036]", "[865, 600, 2680, 4036]")),
                       doctest::Contains("ValidationError"), Error);
  CHECK_THROWS_WITH_AS(parse_config(replace(text, "\"n_values\": [0.67, 0.835]", "\"n_values\": [0.5]")),
                       doctest::Contains("ValidationError"), Error);
  CHECK_THROWS_WITH_AS(parse_config(replace(text, "\"fuzziness\": 0.95", "\"fuzziness\": 1.5")),
                       doctest::Contains("InvalidFuzzSpec"), Error);
}

TEST_CASE("master seed derivation") {
  PipelineConfig c = load_config("configs/reference.config");
  apply_master_seed(c, 100);
  CHECK(c.seeds.synthetic == 100);
  CHECK(c.seeds.fuzzy == 100);
  CHECK(c.fuzzy.master_seed == 100);
  CHECK(c.seeds.sample == 101);
  CHECK(c.seeds.acute == 102);
  CHECK(c.seeds.chronic == 103);
}

TEST_CASE("missing config file is an I/O error") {
  CHECK_THROWS_WITH_AS(load_config("configs/none.config"), doctest::Contains("IoError"), Error);
}
