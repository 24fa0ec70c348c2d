// mcda: command-line front end for the vulnerability-mapping library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mcda/anp.hpp"
#include "mcda/classify.hpp"
#include "mcda/compare.hpp"
#include "mcda/config.hpp"
#include "mcda/fuzzy.hpp"
#include "mcda/grid.hpp"
#include "mcda/overlay.hpp"
#include "mcda/pipeline.hpp"
#include "mcda/render.hpp"
#include "mcda/synth.hpp"

namespace fs = std::filesystem;
using namespace mcda;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

/// Whitespace/comma separated rows; blank lines and `#` comments skipped.
Eigen::MatrixXd read_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '[' || ch == ']') ch = ' ';
    std::istringstream is(line);
    std::vector<double> row;
    std::string tok;
    while (is >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(Errc::ValidationError, "non-numeric matrix entry '" + tok + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::ValidationError, "empty matrix");
  Eigen::MatrixXd m(Eigen::Index(rows.size()), Eigen::Index(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) throw Error(Errc::ValidationError, "matrix rows differ in length");
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(Eigen::Index(r), Eigen::Index(c)) = rows[r][c];
  }
  return m;
}

std::vector<ClassGrid> read_classes(const std::vector<std::string>& paths) {
  if (paths.size() != kFactorCount) throw Error(Errc::ValidationError, "expected 6 class grids");
  std::vector<ClassGrid> out;
  for (const auto& p : paths) out.push_back(ClassGrid::from_grid(read_grid(fs::path(p))));
  return out;
}

PriorityVector<double> weights_from(const std::vector<double>& given, const PipelineConfig* cfg) {
  if (!given.empty()) {
    return PriorityVector<double>(Eigen::Map<const Eigen::VectorXd>(given.data(), Eigen::Index(given.size())));
  }
  if (!cfg) throw Error(Errc::ValidationError, "either --weights or --config is required");
  return priority_vector(cfg->comparison);
}

void print_vector(const char* label, const Eigen::VectorXd& v) {
  std::printf("%s ", label);
  for (Eigen::Index i = 0; i < v.size(); ++i) std::printf("%s%.4f", i ? " " : "", v[i]);
  std::printf("\n");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string());
}

template <typename Writer>
void write_text(const fs::path& path, Writer&& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open " + path.string());
  w(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-criteria flood vulnerability mapping"};
  app.require_subcommand(1);

  std::string config_path = "configs/reference.config";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::optional<std::size_t> sims;

  auto add_common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--config", config_path, "Pipeline configuration")->capture_default_str();
    sub->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { seed = s; seed_given = true; }, "Master seed");
    auto* o = sub->add_option("--out", out, "Output path");
    if (needs_out) o->required();
  };
  auto config = [&]() {
    PipelineConfig cfg = load_config(config_path);
    if (seed_given) apply_master_seed(cfg, seed);
    if (sims) cfg.fuzzy.sim_count = *sims;
    return cfg;
  };

  // weights
  auto* weights = app.add_subcommand("weights", "Priority vector and consistency of a comparison matrix");
  std::string matrix_path;
  bool lower = false;
  weights->add_option("matrix", matrix_path, "Matrix file (rows of numbers)")->required();
  weights->add_flag("--lower", lower, "Complete the matrix from its lower triangle");
  weights->callback([&] {
    const Eigen::MatrixXd raw = read_matrix(matrix_path);
    const auto m = lower ? ComparisonMatrix<double>::from_lower_triangle(raw) : validate_matrix(raw);
    const auto w = priority_vector(m);
    print_vector("weights:", w.vector());
    if (m.size() <= 10) {
      const auto c = consistency(m);
      std::printf("lambda_max: %.4f\nCI: %.4f\nCR: %.2f\nconsistent: %s\n", c.lambda_max, c.ci, c.cr,
                  c.consistent ? "true" : "false");
    }
  });

  // classify
  auto* cls = app.add_subcommand("classify", "Reclassify a grid into classes 1..5");
  std::string in_path;
  std::vector<double> breaks;
  std::vector<std::string> categories;
  bool lower_is_worse = false;
  bool jenks = false;
  cls->add_option("--in", in_path, "Input grid")->required();
  cls->add_option("--breaks", breaks, "Four ascending thresholds")->delimiter(',');
  cls->add_option("--categories", categories, "code:class pairs")->delimiter(',');
  cls->add_flag("--lower-is-worse", lower_is_worse);
  cls->add_flag("--jenks", jenks, "Derive breaks with Fisher-Jenks");
  add_common(cls, true);
  cls->callback([&] {
    const Grid g = read_grid(fs::path(in_path));
    const Orientation o = lower_is_worse ? Orientation::LowerIsWorse : Orientation::HigherIsWorse;
    ClassGrid c = [&] {
      if (!categories.empty()) {
        CategoryMap map;
        for (const auto& kv : categories) {
          const auto colon = kv.find(':');
          if (colon == std::string::npos) throw Error(Errc::ValidationError, "category '" + kv + "' is not code:class");
          map[std::stoll(kv.substr(0, colon))] = std::stoi(kv.substr(colon + 1));
        }
        validate_category_map(map);
        return classify_categorical(g, map);
      }
      if (jenks) {
        std::vector<double> values;
        for (Eigen::Index r = 0; r < g.rows(); ++r)
          for (Eigen::Index col = 0; col < g.cols(); ++col)
            if (g.valid(r, col)) values.push_back(g(r, col));
        breaks = jenks_breaks(values, 5);
        std::printf("breaks: %.9g %.9g %.9g %.9g\n", breaks[0], breaks[1], breaks[2], breaks[3]);
      }
      if (breaks.size() != 4) throw Error(Errc::ValidationError, "expected 4 breaks");
      return classify(g, BreakSet({breaks[0], breaks[1], breaks[2], breaks[3]}, o));
    }();
    write_grid(c.to_grid(), fs::path(out));
  });

  // overlay / nested / anp / one-n
  std::vector<std::string> class_paths;
  std::vector<double> given_weights;
  auto* overlay = app.add_subcommand("overlay", "Weighted overlay of six class grids");
  auto* nested = app.add_subcommand("nested", "Nested AHP overlay");
  auto* anp_cmd = app.add_subcommand("anp", "ANP limit diagnostics and overlay");
  auto* one_n = app.add_subcommand("one-n", "1-N overlay with stochastic acute and chronic layers");
  for (auto* sub : {overlay, nested, one_n}) {
    sub->add_option("--classes", class_paths, "Six class grids in factor order")->required()->expected(6);
    sub->add_option("--weights", given_weights, "Factor weights (default: from config)")->delimiter(',');
    add_common(sub, true);
  }
  anp_cmd->add_option("--classes", class_paths, "Six class grids; writes the overlay to --out")->expected(6);
  add_common(anp_cmd, false);

  overlay->callback([&] {
    std::unique_ptr<PipelineConfig> cfg;
    if (given_weights.empty()) cfg = std::make_unique<PipelineConfig>(config());
    const auto classes = read_classes(class_paths);
    write_grid(weighted_overlay(classes, weights_from(given_weights, cfg.get())), fs::path(out));
  });
  nested->callback([&] {
    const PipelineConfig cfg = config();
    const auto classes = read_classes(class_paths);
    write_grid(nested_overlay(classes, weights_from(given_weights, &cfg), cfg.subweights), fs::path(out));
  });
  anp_cmd->callback([&] {
    const PipelineConfig cfg = config();
    const auto lim = anp::limit<double>(anp::column_stochasticize<double>(anp::assemble(cfg.anp_blocks)), 1e-12);
    const auto eff = anp::effective_criteria_weights<double>(cfg.anp_blocks.w21, cfg.anp_blocks.w22);
    const Eigen::MatrixXd cw = anp::anp_class_weights(cfg.anp_blocks);
    std::printf("iterations: %d\nconverged: %s\ncesaro: %s\ndegenerate: %s\n", lim.iterations,
                lim.converged ? "true" : "false", lim.cesaro ? "true" : "false", lim.degenerate ? "true" : "false");
    print_vector("alternatives (class 5..1):", lim.alternative_priorities);
    print_vector("effective weights:", eff.vector());
    for (Eigen::Index f = 0; f < cw.cols(); ++f) {
      const std::string label = cfg.factors[std::size_t(f)].name + " class weights (5..1):";
      print_vector(label.c_str(), Eigen::VectorXd(cw.col(f).reverse()));
    }
    if (!class_paths.empty()) {
      if (out.empty()) throw Error(Errc::ValidationError, "--out is required with --classes");
      write_grid(nested_overlay(read_classes(class_paths), eff, cw), fs::path(out));
    }
  });

  double n_value = 0.67;
  one_n->add_option("--n", n_value, "Known-factor share N in [0.67, 1]")->capture_default_str();
  one_n->callback([&] {
    const PipelineConfig cfg = config();
    const auto classes = read_classes(class_paths);
    const auto& g = classes.front().geometry();
    const ClassGrid acute = stochastic_class_layer(g, cfg.one_n.p_acute, cfg.seeds.acute);
    const ClassGrid chronic = stochastic_class_layer(g, cfg.one_n.p_chronic, cfg.seeds.chronic);
    write_grid(one_n_overlay(classes, acute, chronic, weights_from(given_weights, &cfg), n_value), fs::path(out));
  });

  // fuzzy / fuzzy-one-n
  auto* fuzzy = app.add_subcommand("fuzzy", "Fuzzy AHP Monte-Carlo rank reversals");
  auto* fuzzy_one = app.add_subcommand("fuzzy-one-n", "Fuzzy 1-N Monte-Carlo rank reversals");
  for (auto* sub : {fuzzy, fuzzy_one}) {
    sub->add_option("--sims", sims, "Simulation count (default: from config)");
    add_common(sub, true);
  }
  fuzzy->callback([&] {
    const PipelineConfig cfg = config();
    const auto w = priority_vector(cfg.comparison);
    const auto report = count_reversals(run_simulations(cfg.comparison, cfg.fuzzy, cfg.threads), rank_order(w));
    ensure_dir(out);
    write_text(fs::path(out) / "fuzzy_reversals.csv", [&](std::ostream& os) { write_reversal_csv(os, report, cfg.factor_names()); });
    write_text(fs::path(out) / "fuzzy_rate.csv", [&](std::ostream& os) { write_rate_csv(os, report); });
    std::printf("sims: %zu\nwith reversal: %zu\nrate: %.6f\nsecond order: %zu\n", report.total_sims,
                report.sims_with_any_reversal, report.rate(), report.second_order_total());
  });
  fuzzy_one->callback([&] {
    const PipelineConfig cfg = config();
    auto names = cfg.factor_names();
    names.push_back("Acute");
    names.push_back("Chronic");
    const auto w8 = one_n_weights(priority_vector(cfg.comparison), cfg.one_n.fuzzy_n);
    const auto report = fuzzy_one_n(w8, cfg.fuzzy, cfg.one_n.p_acute_excl, cfg.one_n.p_chronic_excl, cfg.threads);
    ensure_dir(out);
    write_text(fs::path(out) / "fuzzy_one_n_reversals.csv", [&](std::ostream& os) { write_reversal_csv(os, report, names); });
    write_text(fs::path(out) / "fuzzy_one_n_rate.csv", [&](std::ostream& os) { write_rate_csv(os, report); });
    std::printf("sims: %zu\nwith reversal: %zu\nrate: %.6f\nsecond order: %zu\n", report.total_sims,
                report.sims_with_any_reversal, report.rate(), report.second_order_total());
  });

  // diff / composite / render / hist
  auto* diff = app.add_subcommand("diff", "zscore(ahp) - zscore(variant)");
  std::string ahp_path, variant_path;
  diff->add_option("--ahp", ahp_path)->required();
  diff->add_option("--variant", variant_path)->required();
  add_common(diff, true);
  diff->callback([&] {
    write_grid(diff_layer(read_grid(fs::path(ahp_path)), read_grid(fs::path(variant_path))), fs::path(out));
  });

  auto* comp = app.add_subcommand("composite", "Outlier composite over the z-scored AHP layer");
  std::vector<std::string> variant_specs;
  double threshold = 2.0;
  comp->add_option("--ahp", ahp_path, "AHP score grid")->required();
  comp->add_option("--variant", variant_specs, "name=diff_grid, repeatable")->required();
  comp->add_option("--threshold", threshold)->capture_default_str();
  add_common(comp, true);
  comp->callback([&] {
    std::vector<NamedGrid> parts;
    for (const auto& spec : variant_specs) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) throw Error(Errc::ValidationError, "variant '" + spec + "' is not name=path");
      parts.push_back({spec.substr(0, eq), read_grid(fs::path(spec.substr(eq + 1)))});
    }
    const CompositeLayer layer = composite(zscore(read_grid(fs::path(ahp_path))), parts, threshold);
    using S = CompositeLayer::Sign;
    const std::pair<const char*, S> views[] = {{"any", S::Any}, {"positive", S::Positive}, {"negative", S::Negative}};
    for (const auto& [label, sign] : views) {
      write_grid(layer.overlap_code(sign), fs::path(out + "_" + label + ".asc"));
      write_ppm(render_composite(layer, sign), fs::path(out + "_" + label + ".ppm"));
    }
  });

  auto* rend = app.add_subcommand("render", "Render a grid to PPM");
  std::string stretch_name = "local";
  std::vector<double> range;
  rend->add_option("--in", in_path)->required();
  rend->add_option("--stretch", stretch_name)->check(CLI::IsMember({"global", "local", "p5_95"}))->capture_default_str();
  rend->add_option("--range", range, "lo,hi for the global stretch")->delimiter(',')->expected(2);
  add_common(rend, true);
  rend->callback([&] {
    Stretch s = Stretch::local_minmax();
    if (stretch_name == "p5_95") s = Stretch::percentile_5_95();
    if (stretch_name == "global") {
      if (range.size() != 2) throw Error(Errc::ValidationError, "--range lo,hi is required for the global stretch");
      s = Stretch::global(range[0], range[1]);
    }
    write_ppm(render(read_grid(fs::path(in_path)), s), fs::path(out));
  });

  auto* hist = app.add_subcommand("hist", "Equal-width histogram CSV");
  int bins = 20;
  hist->add_option("--in", in_path)->required();
  hist->add_option("--bins", bins)->capture_default_str();
  add_common(hist, true);
  hist->callback([&] {
    const auto h = histogram(read_grid(fs::path(in_path)), bins);
    write_text(fs::path(out), [&](std::ostream& os) { write_histogram_csv(os, h); });
  });

  // synth / run
  auto* synth = app.add_subcommand("synth", "Write a synthetic six-factor scenario");
  Eigen::Index rows = 256, cols = 256;
  synth->add_option("--rows", rows)->capture_default_str();
  synth->add_option("--cols", cols)->capture_default_str();
  add_common(synth, true);
  synth->callback([&] {
    const PipelineConfig cfg = config();
    const Scenario s = synth_scenario(seed_given ? seed : cfg.seeds.synthetic, rows, cols);
    ensure_dir(out);
    for (std::size_t i = 0; i < kFactorCount; ++i)
      write_grid(s.factors[i], fs::path(out) / ("factor_" + cfg.factors[i].name + ".asc"));
  });

  auto* run = app.add_subcommand("run", "Full pipeline");
  run->add_option("--sims", sims, "Simulation count (default: from config)");
  add_common(run, false);
  run->callback([&] {
    RunOptions opts;
    if (!out.empty()) opts.output_dir = out;
    const RunManifest m = run_pipeline(config(), opts);
    std::printf("outputs: %zu files in %s\ncontent digest: %s\n", m.outputs.size(), m.output_dir.string().c_str(),
                m.content_digest.c_str());
    for (const auto& n : m.notes) std::printf("note: %s\n", n.c_str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return is_io_error(e.code()) ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return 0;
}
