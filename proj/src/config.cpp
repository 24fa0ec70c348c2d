#include "mcda/config.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

namespace mcda {

namespace {

using json = nlohmann::json;

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw Error(Errc::SchemaError, path + ": " + msg);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) schema(path, "expected object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema(path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected number");
  return j.get<double>();
}

std::uint64_t unsigned_int(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    schema(path, "expected non-negative integer");
  return j.get<std::uint64_t>();
}

Eigen::MatrixXd matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) schema(path + "[0]", "expected array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[std::size_t(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      schema(rp, "expected " + std::to_string(cols) + " values");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = number(row[std::size_t(c)], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

Eigen::VectorXd vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected non-empty array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[Eigen::Index(i)] = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

template <typename F>
auto validated(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::SchemaError) throw;
    throw Error(Errc::ValidationError, path + ": " + e.what());
  }
}

FactorSpec parse_factor(const json& j, const std::string& path, const std::filesystem::path& base_dir) {
  FactorSpec f;
  const auto& name = member(j, "name", path);
  if (!name.is_string()) schema(path + ".name", "expected string");
  f.name = name.get<std::string>();
  if (j.contains("grid")) {
    if (!j["grid"].is_string()) schema(path + ".grid", "expected string");
    f.source = j["grid"].get<std::string>();
    if (f.source != kSyntheticSource && std::filesystem::path(f.source).is_relative())
      f.source = (base_dir / f.source).string();
  }
  const bool has_breaks = j.contains("breaks");
  const bool has_categories = j.contains("categories");
  if (has_breaks == has_categories) schema(path, "expected exactly one of breaks, categories");
  if (has_breaks) {
    const Eigen::VectorXd t = vector(j["breaks"], path + ".breaks");
    if (t.size() != 4) schema(path + ".breaks", "expected 4");
    Orientation o = Orientation::HigherIsWorse;
    if (j.contains("orientation")) {
      const auto& s = j["orientation"];
      if (s == "higher_is_worse")
        o = Orientation::HigherIsWorse;
      else if (s == "lower_is_worse")
        o = Orientation::LowerIsWorse;
      else
        schema(path + ".orientation", "expected higher_is_worse or lower_is_worse");
    }
    f.breaks = validated(path + ".breaks", [&] { return BreakSet({t[0], t[1], t[2], t[3]}, o); });
  } else {
    const auto& cats = j["categories"];
    if (!cats.is_object() || cats.empty()) schema(path + ".categories", "expected non-empty object");
    CategoryMap map;
    for (const auto& [key, value] : cats.items()) {
      long long code = 0;
      std::istringstream is(key);
      if (!(is >> code) || !is.eof()) schema(path + ".categories." + key, "key must be an integer code");
      if (!value.is_number_integer()) schema(path + ".categories." + key, "expected integer class");
      map[code] = value.get<int>();
    }
    validated(path + ".categories", [&] { validate_category_map(map); return 0; });
    f.categories = std::move(map);
  }
  return f;
}

}  // namespace

std::vector<std::string> PipelineConfig::factor_names() const {
  std::vector<std::string> names;
  for (const auto& f : factors) names.push_back(f.name);
  return names;
}

void apply_master_seed(PipelineConfig& config, std::uint64_t seed) {
  config.seeds = Seeds::derive(seed);
  config.fuzzy.master_seed = config.seeds.fuzzy;
}

PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw Error(Errc::SchemaError, std::string("parse: ") + e.what());
  }
  if (!root.is_object()) schema("$", "expected object");

  PipelineConfig cfg;

  if (root.contains("seed")) apply_master_seed(cfg, unsigned_int(root["seed"], "seed"));
  if (root.contains("seeds")) {
    const auto& s = root["seeds"];
    if (!s.is_object()) schema("seeds", "expected object");
    if (s.contains("synthetic")) cfg.seeds.synthetic = unsigned_int(s["synthetic"], "seeds.synthetic");
    if (s.contains("fuzzy")) cfg.seeds.fuzzy = unsigned_int(s["fuzzy"], "seeds.fuzzy");
    if (s.contains("sample")) cfg.seeds.sample = unsigned_int(s["sample"], "seeds.sample");
    if (s.contains("acute")) cfg.seeds.acute = unsigned_int(s["acute"], "seeds.acute");
    if (s.contains("chronic")) cfg.seeds.chronic = unsigned_int(s["chronic"], "seeds.chronic");
    cfg.fuzzy.master_seed = cfg.seeds.fuzzy;
  }

  if (root.contains("synthetic")) {
    const auto& s = root["synthetic"];
    cfg.synthetic_rows = Eigen::Index(unsigned_int(member(s, "nrows", "synthetic"), "synthetic.nrows"));
    cfg.synthetic_cols = Eigen::Index(unsigned_int(member(s, "ncols", "synthetic"), "synthetic.ncols"));
  }
  if (root.contains("output")) {
    if (!root["output"].is_string()) schema("output", "expected string");
    cfg.output_dir = root["output"].get<std::string>();
  }
  if (root.contains("threads")) cfg.threads = unsigned(std::max<std::uint64_t>(1, unsigned_int(root["threads"], "threads")));

  const auto& factors = member(root, "factors", "$");
  if (!factors.is_array() || factors.size() != kFactorCount)
    schema("factors", "expected " + std::to_string(kFactorCount));
  for (std::size_t i = 0; i < kFactorCount; ++i)
    cfg.factors[i] = parse_factor(factors[i], "factors[" + std::to_string(i) + "]", base_dir);
  if (root.value("grid", std::string()) == kSyntheticSource)
    for (auto& f : cfg.factors) f.source = kSyntheticSource;

  const Eigen::MatrixXd cmp = matrix(member(root, "comparison", "$"), "comparison");
  if (cmp.rows() != Eigen::Index(kFactorCount) || cmp.cols() != Eigen::Index(kFactorCount))
    schema("comparison", "expected 6x6");
  cfg.comparison = validated("comparison", [&] { return validate_matrix(cmp); });

  const auto& subs = member(root, "subweights", "$");
  if (!subs.is_array() || subs.size() != kFactorCount) schema("subweights", "expected 6");
  cfg.subweights.resize(5, Eigen::Index(kFactorCount));
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    const std::string path = "subweights[" + std::to_string(i) + "]";
    const auto& s = subs[i];
    const std::string form = s.value("form", std::string("full"));
    if (form != "full" && form != "lower") schema(path + ".form", "expected full or lower");
    const Eigen::MatrixXd raw = matrix(member(s, "matrix", path), path + ".matrix");
    if (raw.rows() != 5 || raw.cols() != 5) schema(path + ".matrix", "expected 5x5");
    auto m = validated(path, [&] {
      return form == "full" ? validate_matrix(raw) : ComparisonMatrix<double>::from_lower_triangle(raw);
    });
    cfg.subweights.col(Eigen::Index(i)) = priority_vector(m).vector().reverse();
    cfg.class_matrices.push_back(std::move(m));
  }
  validated("subweights", [&] { validate_subweights(cfg.subweights); return 0; });

  const auto& a = member(root, "anp", "$");
  cfg.anp_blocks.w21 = vector(member(a, "w21", "anp"), "anp.w21");
  cfg.anp_blocks.w22 = matrix(member(a, "w22", "anp"), "anp.w22");
  cfg.anp_blocks.w32 = matrix(member(a, "w32", "anp"), "anp.w32");
  const auto& w33 = member(a, "w33", "anp");
  cfg.anp_blocks.w33 = w33.is_number() && number(w33, "anp.w33") == 0.0
                           ? Eigen::MatrixXd::Zero(anp::kSubcriteria, anp::kSubcriteria)
                           : matrix(w33, "anp.w33");
  cfg.anp_blocks.w34 = matrix(member(a, "w34", "anp"), "anp.w34");
  validated("anp", [&] { cfg.anp_blocks.validate(); return 0; });

  if (root.contains("fuzzy")) {
    const auto& f = root["fuzzy"];
    if (f.contains("fuzziness")) cfg.fuzzy.fuzziness = number(f["fuzziness"], "fuzzy.fuzziness");
    if (f.contains("sim_count")) cfg.fuzzy.sim_count = unsigned_int(f["sim_count"], "fuzzy.sim_count");
    if (f.contains("mean_sample")) cfg.mean_sample = unsigned_int(f["mean_sample"], "fuzzy.mean_sample");
  }
  validated("fuzzy", [&] { cfg.fuzzy.validate(); return 0; });

  if (root.contains("one_n")) {
    const auto& o = root["one_n"];
    if (o.contains("n_values")) {
      const Eigen::VectorXd n = vector(o["n_values"], "one_n.n_values");
      cfg.one_n.n_values.assign(n.data(), n.data() + n.size());
    }
    if (o.contains("p_acute")) cfg.one_n.p_acute = number(o["p_acute"], "one_n.p_acute");
    if (o.contains("p_chronic")) cfg.one_n.p_chronic = number(o["p_chronic"], "one_n.p_chronic");
    if (o.contains("fuzzy_n")) cfg.one_n.fuzzy_n = number(o["fuzzy_n"], "one_n.fuzzy_n");
    if (o.contains("p_acute_excl")) cfg.one_n.p_acute_excl = number(o["p_acute_excl"], "one_n.p_acute_excl");
    if (o.contains("p_chronic_excl")) cfg.one_n.p_chronic_excl = number(o["p_chronic_excl"], "one_n.p_chronic_excl");
  }
  for (double p : {cfg.one_n.p_acute, cfg.one_n.p_chronic, cfg.one_n.p_acute_excl, cfg.one_n.p_chronic_excl})
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::ValidationError, "one_n: probability outside [0, 1]");
  validated("one_n", [&] {
    const PriorityVector<double> base = priority_vector(cfg.comparison);
    for (double n : cfg.one_n.n_values) one_n_weights(base, n);
    one_n_weights(base, cfg.one_n.fuzzy_n);
    return 0;
  });

  if (root.contains("composite"))
    cfg.composite_threshold = number(member(root["composite"], "threshold", "composite"), "composite.threshold");
  if (!(cfg.composite_threshold > 0.0)) throw Error(Errc::ValidationError, "composite.threshold: must be positive");
  if (root.contains("histogram_bins")) cfg.histogram_bins = int(unsigned_int(root["histogram_bins"], "histogram_bins"));
  if (cfg.histogram_bins < 1) throw Error(Errc::ValidationError, "histogram_bins: must be positive");

  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text, path.parent_path());
}

}  // namespace mcda
