#include "mcda/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mcda/anp.hpp"
#include "mcda/compare.hpp"
#include "mcda/digest.hpp"
#include "mcda/fuzzy.hpp"
#include "mcda/overlay.hpp"
#include "mcda/render.hpp"
#include "mcda/synth.hpp"

namespace mcda {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return rows;
}

json to_json(const ConsistencyReport<double>& c) {
  return {{"lambda_max", c.lambda_max}, {"ci", c.ci}, {"cr", c.cr}, {"ri", c.ri}, {"consistent", c.consistent}};
}

json to_json(const ReversalReport& r, const std::vector<std::string>& names) {
  auto pairs = [&](const std::vector<PairCount>& v) {
    json out = json::array();
    for (const auto& p : v)
      out.push_back({{"higher", names[std::size_t(p.higher)]}, {"lower", names[std::size_t(p.lower)]}, {"count", p.count}});
    return out;
  };
  return {{"total_sims", r.total_sims},
          {"sims_with_any_reversal", r.sims_with_any_reversal},
          {"rate", r.rate()},
          {"first_order_total", r.first_order_total()},
          {"second_order_total", r.second_order_total()},
          {"sims_with_second_order", r.sims_with_second_order},
          {"first_order", pairs(r.first_order)},
          {"second_order", pairs(r.second_order)}};
}

std::string format_n(double n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", n);
  return buf;
}

json config_json(const PipelineConfig& c) {
  json factors = json::array();
  for (const auto& f : c.factors) {
    json j{{"name", f.name}, {"source", f.source}};
    if (f.breaks) {
      j["breaks"] = f.breaks->thresholds();
      j["orientation"] = f.breaks->orientation() == Orientation::HigherIsWorse ? "higher_is_worse" : "lower_is_worse";
    }
    if (f.categories) {
      json cats = json::object();
      for (const auto& [code, cls] : *f.categories) cats[std::to_string(code)] = cls;
      j["categories"] = cats;
    }
    factors.push_back(j);
  }
  json classes = json::array();
  for (const auto& m : c.class_matrices) classes.push_back(to_json(Eigen::MatrixXd(m.matrix())));
  return {{"factors", factors},
          {"comparison", to_json(Eigen::MatrixXd(c.comparison.matrix()))},
          {"class_matrices", classes},
          {"anp", {{"w21", to_json(c.anp_blocks.w21)},
                   {"w22", to_json(c.anp_blocks.w22)},
                   {"w32", to_json(c.anp_blocks.w32)},
                   {"w33", to_json(c.anp_blocks.w33)},
                   {"w34", to_json(c.anp_blocks.w34)}}},
          {"fuzzy", {{"fuzziness", c.fuzzy.fuzziness}, {"sim_count", c.fuzzy.sim_count}, {"mean_sample", c.mean_sample}}},
          {"one_n", {{"n_values", c.one_n.n_values},
                     {"p_acute", c.one_n.p_acute},
                     {"p_chronic", c.one_n.p_chronic},
                     {"fuzzy_n", c.one_n.fuzzy_n},
                     {"p_acute_excl", c.one_n.p_acute_excl},
                     {"p_chronic_excl", c.one_n.p_chronic_excl}}},
          {"composite_threshold", c.composite_threshold},
          {"histogram_bins", c.histogram_bins},
          {"synthetic", {c.synthetic_rows, c.synthetic_cols}}};
}

class Run {
 public:
  Run(PipelineConfig cfg, fs::path dir) : cfg_(std::move(cfg)), dir_(std::move(dir)) {}

  template <typename F>
  void stage(const std::string& name, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const Error& e) {
      throw Error(e.code(), "stage " + name + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(Errc::IoError, "stage " + name + ": " + e.what());
    }
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - t0;
    timings_[name] = dt.count();
  }

  void grid(const std::string& name, const Grid& g) {
    const fs::path p = dir_ / (name + ".asc");
    write_grid(g, p);
    record(p);
  }

  void image(const std::string& name, const Image& img) {
    const fs::path p = dir_ / (name + ".ppm");
    write_ppm(img, p);
    record(p);
  }

  template <typename Writer>
  void text(const std::string& file, Writer&& w) {
    const fs::path p = dir_ / file;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot open " + p.string());
    w(out);
    out.close();
    if (!out) throw Error(Errc::IoError, "write failed: " + p.string());
    record(p);
  }

  void record(const fs::path& p) { outputs_[p.filename().string()] = sha256_file(p); }

  PipelineConfig cfg_;
  fs::path dir_;
  json body_ = json::object();
  json timings_ = json::object();
  std::map<std::string, std::string> outputs_;
  std::vector<std::string> notes_;
};

}  // namespace

std::vector<Grid> load_factor_grids(const PipelineConfig& config) {
  std::optional<Scenario> scenario;
  std::vector<Grid> grids;
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    const auto& f = config.factors[i];
    if (f.source == kSyntheticSource) {
      if (!scenario) scenario = synth_scenario(config.seeds.synthetic, config.synthetic_rows, config.synthetic_cols);
      grids.push_back(scenario->factors[i]);
    } else {
      grids.push_back(read_grid(fs::path(f.source)));
    }
  }
  for (const auto& g : grids) require_same_raster(grids.front().geometry(), g.geometry());
  return grids;
}

std::vector<ClassGrid> classify_factors(const PipelineConfig& config, const std::vector<Grid>& grids) {
  std::vector<ClassGrid> classes;
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    const auto& f = config.factors[i];
    classes.push_back(f.breaks ? classify(grids[i], *f.breaks) : classify_categorical(grids[i], *f.categories));
  }
  return classes;
}

RunManifest run_pipeline(PipelineConfig config, const RunOptions& options) {
  if (options.seed) apply_master_seed(config, *options.seed);
  if (options.sim_count) config.fuzzy.sim_count = *options.sim_count;
  const fs::path dir = options.output_dir.value_or(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());

  Run run(config, dir);
  const auto& cfg = run.cfg_;
  const auto names = cfg.factor_names();
  json& m = run.body_;
  m["digest_algorithm"] = kDigestAlgorithm;
  m["config_digest"] = sha256_hex(config_json(cfg).dump());
  m["seeds"] = {{"synthetic", cfg.seeds.synthetic},
                {"fuzzy", cfg.seeds.fuzzy},
                {"sample", cfg.seeds.sample},
                {"acute", cfg.seeds.acute},
                {"chronic", cfg.seeds.chronic}};

  std::vector<Grid> factors;
  std::vector<ClassGrid> classes;
  run.stage("load", [&] {
    factors = load_factor_grids(cfg);
    for (std::size_t i = 0; i < kFactorCount; ++i) run.grid("factor_" + names[i], factors[i]);
  });
  run.stage("classify", [&] {
    classes = classify_factors(cfg, factors);
    for (std::size_t i = 0; i < kFactorCount; ++i) run.grid("class_" + names[i], classes[i].to_grid());
  });
  const GridGeometry geometry = factors.front().geometry();

  // Score layers in output order; diffs are taken against the first.
  std::vector<NamedGrid> scores;
  PriorityVector<double> w = priority_vector(cfg.comparison);

  run.stage("ahp", [&] {
    m["consistency"]["comparison"] = to_json(consistency(cfg.comparison));
    m["weights"]["ahp"] = to_json(w.vector());
    scores.push_back({"ahp", weighted_overlay(classes, w)});
  });

  run.stage("nested", [&] {
    json subs = json::array();
    for (std::size_t i = 0; i < kFactorCount; ++i) {
      json c = to_json(consistency(cfg.class_matrices[i]));
      c["factor"] = names[i];
      c["subweights_class5_first"] = to_json(Eigen::VectorXd(cfg.subweights.col(Eigen::Index(i)).reverse()));
      subs.push_back(c);
    }
    m["consistency"]["subweights"] = subs;
    scores.push_back({"nested", nested_overlay(classes, w, cfg.subweights)});
  });

  run.stage("anp", [&] {
    const auto lim = anp::limit<double>(anp::column_stochasticize<double>(anp::assemble(cfg.anp_blocks)), 1e-12);
    const auto eff = anp::effective_criteria_weights<double>(cfg.anp_blocks.w21, cfg.anp_blocks.w22);
    const Eigen::MatrixXd cw = anp::anp_class_weights(cfg.anp_blocks);
    const Eigen::MatrixXd w32_gap = cfg.anp_blocks.w32.colwise().reverse() - cfg.subweights;
    m["anp"] = {{"iterations", lim.iterations},
                {"converged", lim.converged},
                {"cesaro", lim.cesaro},
                {"degenerate", lim.degenerate},
                {"alternative_priorities_class5_first", to_json(lim.alternative_priorities)},
                {"effective_criteria_weights", to_json(eff.vector())},
                {"class_weights_class5_first", to_json(Eigen::MatrixXd(cw.colwise().reverse()))},
                {"w32_minus_nested_subweights_max_abs", to_json(Eigen::VectorXd(w32_gap.cwiseAbs().colwise().maxCoeff().transpose()))}};
    m["weights"]["anp_effective"] = to_json(eff.vector());
    scores.push_back({"anp", nested_overlay(classes, eff, cw)});
  });

  ClassGrid acute = stochastic_class_layer(geometry, 0.0, 0);
  ClassGrid chronic = acute;
  run.stage("one_n", [&] {
    acute = stochastic_class_layer(geometry, cfg.one_n.p_acute, cfg.seeds.acute);
    chronic = stochastic_class_layer(geometry, cfg.one_n.p_chronic, cfg.seeds.chronic);
    run.grid("layer_acute", acute.to_grid());
    run.grid("layer_chronic", chronic.to_grid());
    json wj = json::object();
    for (double n : cfg.one_n.n_values) {
      const std::string name = "one_n_" + format_n(n);
      wj[format_n(n)] = to_json(one_n_weights(w, n).vector());
      scores.push_back({name, one_n_overlay(classes, acute, chronic, w, n)});
    }
    m["weights"]["one_n"] = wj;
  });

  bool have_mean_fuzzy = false;
  if (cfg.fuzzy.sim_count == 0) {
    run.notes_.push_back("sim_count is 0: fuzzy, mean_fuzzy, case1, case2 and fuzzy_one_n stages skipped");
  } else {
    run.stage("fuzzy", [&] {
      const auto baseline = rank_order(w);
      const SimulationBatch batch = run_simulations(cfg.comparison, cfg.fuzzy, cfg.threads);
      const ReversalReport report = count_reversals(batch, baseline);
      m["reversals"]["fuzzy"] = to_json(report, names);
      run.text("fuzzy_reversals.csv", [&](std::ostream& os) { write_reversal_csv(os, report, names); });
      run.text("fuzzy_rate.csv", [&](std::ostream& os) { write_rate_csv(os, report); });

      const auto sample = sample_reversal_records(batch, baseline, cfg.mean_sample, cfg.seeds.sample);
      if (sample.empty()) {
        run.notes_.push_back("no fuzzy reversals: mean_fuzzy, case1 and case2 layers skipped");
        return;
      }
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(w.size());
      json idx = json::array();
      for (const auto* rec : sample) {
        mean += rec->priorities.vector();
        idx.push_back(rec->index);
      }
      mean /= double(sample.size());
      m["mean_fuzzy"] = {{"sample_size", sample.size()}, {"weights", to_json(mean)}};
      scores.push_back({"mean_fuzzy", weighted_overlay(classes, PriorityVector<double>::normalized(mean))});
      have_mean_fuzzy = true;

      const auto& c1 = select_case1(batch, baseline);
      const auto& c2 = select_case2(batch, w);
      m["cases"] = {{"case1", {{"sim", c1.index}, {"weights", to_json(c1.priorities.vector())}}},
                    {"case2", {{"sim", c2.index}, {"weights", to_json(c2.priorities.vector())}}}};
      scores.push_back({"case1", weighted_overlay(classes, c1.priorities)});
      scores.push_back({"case2", weighted_overlay(classes, c2.priorities)});
    });

    run.stage("fuzzy_one_n", [&] {
      auto names8 = names;
      names8.push_back("Acute");
      names8.push_back("Chronic");
      const auto w8 = one_n_weights(w, cfg.one_n.fuzzy_n);
      const ReversalReport report =
          fuzzy_one_n(w8, cfg.fuzzy, cfg.one_n.p_acute_excl, cfg.one_n.p_chronic_excl, cfg.threads);
      m["reversals"]["fuzzy_one_n"] = to_json(report, names8);
      run.text("fuzzy_one_n_reversals.csv", [&](std::ostream& os) { write_reversal_csv(os, report, names8); });
      run.text("fuzzy_one_n_rate.csv", [&](std::ostream& os) { write_rate_csv(os, report); });
    });
  }

  run.stage("scores", [&] {
    for (const auto& s : scores) {
      run.grid(s.name, s.grid);
      run.image(s.name + "_local", render(s.grid, Stretch::local_minmax()));
      run.text("hist_" + s.name + ".csv", [&](std::ostream& os) {
        const auto bins = histogram(s.grid, cfg.histogram_bins);
        write_histogram_csv(os, bins);
      });
    }
  });

  std::vector<NamedGrid> diffs;
  run.stage("compare", [&] {
    const Grid& ahp = scores.front().grid;
    for (std::size_t i = 1; i < scores.size(); ++i)
      diffs.push_back({scores[i].name, diff_layer(ahp, scores[i].grid)});

    double lo = 0.0, hi = 0.0;
    for (const auto& d : diffs) {
      lo = std::min(lo, percentile(d.grid, 0.0));
      hi = std::max(hi, percentile(d.grid, 100.0));
    }
    const double bound = std::max(-lo, hi);
    for (const auto& d : diffs) {
      const std::string name = "diff_" + d.name;
      run.grid(name, d.grid);
      run.text("hist_" + name + ".csv", [&](std::ostream& os) {
        const auto bins = histogram(d.grid, cfg.histogram_bins);
        write_histogram_csv(os, bins);
      });
      if (bound > 0.0) run.image(name + "_global", render(d.grid, Stretch::global(-bound, bound)));
      try {
        run.image(name + "_local", render(d.grid, Stretch::local_minmax()));
        run.image(name + "_p5_95", render(d.grid, Stretch::percentile_5_95()));
      } catch (const Error& e) {
        if (e.code() != Errc::DegenerateRange) throw;
        run.notes_.push_back(name + ": constant layer, local images skipped");
      }
    }

    const auto find = [&](const std::string& n) -> const Grid& {
      for (const auto& s : scores)
        if (s.name == n) return s.grid;
      throw Error(Errc::InvalidArgument, "missing score layer " + n);
    };
    const std::vector<Grid> stack{find("ahp"), find("anp"), find("nested")};
    const Grid sd = stddev_stack(stack);
    run.grid("stddev_stack", sd);
    run.image("stddev_stack_local", render(sd, Stretch::local_minmax()));
  });

  run.stage("composite", [&] {
    std::vector<NamedGrid> parts;
    for (const auto& d : diffs)
      if (d.name == "nested" || d.name == "anp" || (have_mean_fuzzy && d.name == "mean_fuzzy")) parts.push_back(d);
    const CompositeLayer layer = composite(zscore(scores.front().grid), parts, cfg.composite_threshold);
    using S = CompositeLayer::Sign;
    const std::pair<const char*, S> views[] = {{"any", S::Any}, {"positive", S::Positive}, {"negative", S::Negative}};
    json counts = json::object();
    for (const auto& [label, sign] : views) {
      const Grid code = layer.overlap_code(sign);
      run.grid(std::string("composite_") + label, code);
      run.image(std::string("composite_") + label, render_composite(layer, sign));
      std::map<std::string, std::size_t> tally;
      for (Eigen::Index r = 0; r < code.rows(); ++r)
        for (Eigen::Index c = 0; c < code.cols(); ++c)
          if (code.valid(r, c) && code(r, c) != 0) ++tally[layer.code_label(int(code(r, c)))];
      counts[label] = tally;
    }
    m["composite"] = {{"variants", layer.names}, {"threshold", layer.threshold}, {"outlier_pixels", counts}};
  });

  m["notes"] = run.notes_;
  m["outputs"] = run.outputs_;
  const std::string content_digest = sha256_hex(m.dump());
  json full = m;
  full["content_digest"] = content_digest;
  full["timings_ms"] = run.timings_;
  const std::string text = full.dump(2) + "\n";
  {
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write manifest");
    out << text;
  }

  RunManifest manifest;
  manifest.output_dir = dir;
  manifest.outputs = run.outputs_;
  manifest.notes = run.notes_;
  manifest.content_digest = content_digest;
  manifest.text = text;
  return manifest;
}

}  // namespace mcda
