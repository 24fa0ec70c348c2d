#include "mcda/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "parallel.hpp"

namespace mcda {

void FuzzyComparisonMatrix::set_upper(Eigen::Index i, Eigen::Index j, const Tfn& t) {
  lower_(i, j) = t.l;
  modal_(i, j) = t.m;
  upper_(i, j) = t.u;
  const Tfn r = t.reciprocal();
  lower_(j, i) = r.l;
  modal_(j, i) = r.m;
  upper_(j, i) = r.u;
}

void FuzzSpec::validate() const {
  if (!(fuzziness >= 0.0 && fuzziness < 1.0))
    throw Error(Errc::InvalidFuzzSpec, "fuzziness must lie in [0, 1)");
}

std::size_t ReversalReport::first_order_total() const noexcept {
  std::size_t total = 0;
  for (const auto& p : first_order) total += p.count;
  return total;
}

std::size_t ReversalReport::second_order_total() const noexcept {
  std::size_t total = 0;
  for (const auto& p : second_order) total += p.count;
  return total;
}

namespace {

std::size_t find_count(const std::vector<PairCount>& pairs, int a, int b) noexcept {
  for (const auto& p : pairs) {
    if ((p.higher == a && p.lower == b) || (p.higher == b && p.lower == a)) return p.count;
  }
  return 0;
}

ReversalReport empty_report(const std::vector<int>& baseline) {
  ReversalReport report;
  report.baseline = baseline;
  const std::size_t n = baseline.size();
  for (std::size_t r = 0; r + 1 < n; ++r) report.first_order.push_back({baseline[r], baseline[r + 1], 0});
  for (std::size_t r = 0; r + 2 < n; ++r) report.second_order.push_back({baseline[r], baseline[r + 2], 0});
  return report;
}

void merge_into(ReversalReport& into, const ReversalReport& part) {
  into.total_sims += part.total_sims;
  into.sims_with_any_reversal += part.sims_with_any_reversal;
  into.sims_with_second_order += part.sims_with_second_order;
  for (std::size_t r = 0; r < into.first_order.size(); ++r) into.first_order[r].count += part.first_order[r].count;
  for (std::size_t r = 0; r < into.second_order.size(); ++r) into.second_order[r].count += part.second_order[r].count;
}

// `present` may be empty, meaning every factor takes part.
void tally(const VectorX<double>& w, const std::vector<char>& present, ReversalReport& report) {
  auto alive = [&](int f) { return present.empty() || present[static_cast<std::size_t>(f)] != 0; };
  bool any = false;
  bool second = false;
  for (auto& p : report.first_order) {
    if (alive(p.higher) && alive(p.lower) && w[p.higher] < w[p.lower]) {
      ++p.count;
      any = true;
    }
  }
  for (auto& p : report.second_order) {
    if (alive(p.higher) && alive(p.lower) && w[p.higher] < w[p.lower]) {
      ++p.count;
      any = true;
      second = true;
    }
  }
  ++report.total_sims;
  if (any) ++report.sims_with_any_reversal;
  if (second) ++report.sims_with_second_order;
}

void check_baseline(const std::vector<int>& baseline, Eigen::Index n) {
  if (static_cast<Eigen::Index>(baseline.size()) != n)
    throw Error(Errc::BaselineMismatch, "baseline length " + std::to_string(baseline.size()) +
                                            " != vector length " + std::to_string(n));
  std::vector<char> seen(baseline.size(), 0);
  for (int f : baseline) {
    if (f < 0 || f >= n || seen[static_cast<std::size_t>(f)])
      throw Error(Errc::BaselineMismatch, "baseline is not a permutation");
    seen[static_cast<std::size_t>(f)] = 1;
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::size_t ReversalReport::first_order_count(int a, int b) const noexcept {
  return find_count(first_order, a, b);
}

std::size_t ReversalReport::second_order_count(int a, int b) const noexcept {
  return find_count(second_order, a, b);
}

FuzzyComparisonMatrix fuzzify(const ComparisonMatrix<double>& m, double fuzziness, SplitMix64& rng) {
  const Eigen::Index n = m.size();
  FuzzyComparisonMatrix fm(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = m(i, j);
      const double l = rng.uniform((1.0 - fuzziness) * v, v);
      const double u = rng.uniform(v, (1.0 + fuzziness) * v);
      fm.set_upper(i, j, {l, v, u});
    }
  }
  return fm;
}

FuzzyComparisonMatrix fuzzify(const ComparisonMatrix<double>& m, const FuzzSpec& spec,
                              std::size_t sim_index) {
  spec.validate();
  auto rng = SplitMix64::stream(spec.master_seed, sim_index);
  return fuzzify(m, spec.fuzziness, rng);
}

PriorityVector<double> fuzzy_priority(const FuzzyComparisonMatrix& fm) {
  const double inv_n = 1.0 / double(fm.size());
  auto geo_mean = [inv_n](const Eigen::MatrixXd& c) -> Eigen::VectorXd {
    return c.rowwise().prod().array().pow(inv_n).matrix();
  };
  const Eigen::VectorXd gl = geo_mean(fm.lower());
  const Eigen::VectorXd gm = geo_mean(fm.modal());
  const Eigen::VectorXd gu = geo_mean(fm.upper());
  // g_i (x) (sum g)^-1 with the inverse TFN (1/sum u, 1/sum m, 1/sum l).
  const Eigen::VectorXd wl = gl / gu.sum();
  const Eigen::VectorXd wm = gm / gm.sum();
  const Eigen::VectorXd wu = gu / gl.sum();
  return PriorityVector<double>::normalized((wl + wm + wu) / 3.0);
}

SimulationBatch run_simulations(const ComparisonMatrix<double>& m, const FuzzSpec& spec,
                                unsigned threads) {
  spec.validate();
  std::vector<Eigen::VectorXd> priorities(spec.sim_count);
  detail::parallel_chunks(spec.sim_count, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) priorities[i] = fuzzy_priority(fuzzify(m, spec, i)).vector();
  });
  SimulationBatch batch;
  batch.reserve(spec.sim_count);
  for (std::size_t i = 0; i < spec.sim_count; ++i) {
    auto order = rank_order(priorities[i]);
    batch.push_back({i, PriorityVector<double>(std::move(priorities[i])), std::move(order)});
  }
  return batch;
}

ReversalReport count_reversals(const SimulationBatch& batch, const std::vector<int>& baseline) {
  ReversalReport report = empty_report(baseline);
  for (const auto& rec : batch) {
    check_baseline(baseline, rec.priorities.size());
    tally(rec.priorities.vector(), {}, report);
  }
  return report;
}

bool has_reversal(const VectorX<double>& w, const std::vector<int>& baseline) {
  check_baseline(baseline, w.size());
  for (std::size_t r = 0; r + 1 < baseline.size(); ++r) {
    if (w[baseline[r]] < w[baseline[r + 1]]) return true;
  }
  return false;
}

const SimulationRecord& select_case1(const SimulationBatch& batch, const std::vector<int>& baseline) {
  if (baseline.size() < 2) throw Error(Errc::BaselineMismatch, "baseline needs two factors");
  for (const auto& rec : batch) {
    check_baseline(baseline, rec.priorities.size());
    if (rec.priorities[baseline[0]] < rec.priorities[baseline[1]]) return rec;
  }
  throw Error(Errc::NoSuchCase, "no simulation inverts the two top-ranked factors");
}

const SimulationRecord& select_case2(const SimulationBatch& batch,
                                     const PriorityVector<double>& crisp_weights) {
  const auto baseline = rank_order(crisp_weights);
  const SimulationRecord* best = nullptr;
  double best_delta = -1.0;
  for (const auto& rec : batch) {
    if (!has_reversal(rec.priorities.vector(), baseline)) continue;
    const double delta = (rec.priorities.vector() - crisp_weights.vector()).lpNorm<1>();
    if (delta > best_delta) {
      best_delta = delta;
      best = &rec;
    }
  }
  if (best == nullptr) throw Error(Errc::NoSuchCase, "no simulation contains a rank reversal");
  return *best;
}

std::vector<const SimulationRecord*> sample_reversal_records(const SimulationBatch& batch,
                                                             const std::vector<int>& baseline,
                                                             std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (has_reversal(batch[i].priorities.vector(), baseline)) pool.push_back(i);
  }
  k = std::min(k, pool.size());
  // Partial Fisher-Yates; draw t comes from stream (seed, t).
  for (std::size_t t = 0; t < k; ++t) {
    auto rng = SplitMix64::stream(seed, t);
    const std::size_t span = pool.size() - t;
    const std::size_t pick = t + static_cast<std::size_t>(rng.uniform() * double(span));
    std::swap(pool[t], pool[std::min(pick, pool.size() - 1)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  std::vector<const SimulationRecord*> out;
  out.reserve(k);
  for (std::size_t i : pool) out.push_back(&batch[i]);
  return out;
}

ReversalReport fuzzy_one_n(const PriorityVector<double>& weights8, const FuzzSpec& spec,
                           double p_acute_excl, double p_chronic_excl, unsigned threads) {
  spec.validate();
  if (weights8.size() != 8) throw Error(Errc::InvalidArgument, "1-N protocol needs 8 weights");
  const auto matrix = consistent_matrix_from_weights(weights8);
  const auto baseline = rank_order(priority_vector(matrix));

  const std::size_t workers = std::max(1u, threads);
  std::vector<ReversalReport> parts(workers, empty_report(baseline));
  detail::parallel_chunks(spec.sim_count, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::vector<char> present(8, 1);
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = SplitMix64::stream(spec.master_seed, i);
      const auto w = fuzzy_priority(fuzzify(matrix, spec.fuzziness, rng));
      present[kAcuteIndex] = rng.uniform() < p_acute_excl ? 0 : 1;
      present[kChronicIndex] = rng.uniform() < p_chronic_excl ? 0 : 1;
      tally(w.vector(), present, parts[chunk]);
    }
  });
  ReversalReport report = empty_report(baseline);
  for (const auto& part : parts) merge_into(report, part);
  return report;
}

void write_reversal_csv(std::ostream& os, const ReversalReport& report,
                        const std::vector<std::string>& names) {
  auto name = [&](int f) {
    return static_cast<std::size_t>(f) < names.size() ? names[static_cast<std::size_t>(f)]
                                                       : std::to_string(f);
  };
  os << "order,rank,higher,lower,count\n";
  for (std::size_t r = 0; r < report.first_order.size(); ++r) {
    const auto& p = report.first_order[r];
    os << "first," << r << ',' << name(p.higher) << ',' << name(p.lower) << ',' << p.count << '\n';
  }
  for (std::size_t r = 0; r < report.second_order.size(); ++r) {
    const auto& p = report.second_order[r];
    os << "second," << r << ',' << name(p.higher) << ',' << name(p.lower) << ',' << p.count << '\n';
  }
}

void write_rate_csv(std::ostream& os, const ReversalReport& report) {
  os << report.total_sims << ',' << report.sims_with_any_reversal << ',' << format_double(report.rate())
     << '\n';
}

}  // namespace mcda
