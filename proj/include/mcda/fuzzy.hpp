#pragma once

// Triangular-fuzzy perturbation of comparison matrices and rank-reversal
// statistics over Monte-Carlo batches.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcda/pairwise.hpp"
#include "mcda/random.hpp"

namespace mcda {

struct Tfn {
  double l = 1.0;
  double m = 1.0;
  double u = 1.0;

  Tfn reciprocal() const noexcept { return {1.0 / u, 1.0 / m, 1.0 / l}; }
  friend bool operator==(const Tfn&, const Tfn&) = default;
};

/// Reciprocal matrix of triangular fuzzy numbers, stored as three component
/// matrices (lower, modal, upper).
class FuzzyComparisonMatrix {
 public:
  explicit FuzzyComparisonMatrix(Eigen::Index n)
      : lower_(Eigen::MatrixXd::Ones(n, n)),
        modal_(Eigen::MatrixXd::Ones(n, n)),
        upper_(Eigen::MatrixXd::Ones(n, n)) {}

  /// Sets entry (i, j), i < j, and its reciprocal at (j, i).
  void set_upper(Eigen::Index i, Eigen::Index j, const Tfn& t);

  Eigen::Index size() const noexcept { return modal_.rows(); }
  Tfn operator()(Eigen::Index i, Eigen::Index j) const {
    return {lower_(i, j), modal_(i, j), upper_(i, j)};
  }

  const Eigen::MatrixXd& lower() const noexcept { return lower_; }
  const Eigen::MatrixXd& modal() const noexcept { return modal_; }
  const Eigen::MatrixXd& upper() const noexcept { return upper_; }

  friend bool operator==(const FuzzyComparisonMatrix& a, const FuzzyComparisonMatrix& b) {
    return a.lower_ == b.lower_ && a.modal_ == b.modal_ && a.upper_ == b.upper_;
  }

 private:
  Eigen::MatrixXd lower_;
  Eigen::MatrixXd modal_;
  Eigen::MatrixXd upper_;
};

struct FuzzSpec {
  double fuzziness = 0.95;
  std::size_t sim_count = 100000;
  std::uint64_t master_seed = 0;

  /// Throws InvalidFuzzSpec unless 0 <= fuzziness < 1.
  void validate() const;
};

struct SimulationRecord {
  std::size_t index = 0;
  PriorityVector<double> priorities;
  std::vector<int> rank_order;
};

using SimulationBatch = std::vector<SimulationRecord>;

/// Count for one baseline pair; `higher` outranks `lower` in the crisp order.
struct PairCount {
  int higher = 0;
  int lower = 0;
  std::size_t count = 0;
};

struct ReversalReport {
  std::size_t total_sims = 0;
  std::vector<int> baseline;
  std::vector<PairCount> first_order;   // baseline ranks (r, r+1)
  std::vector<PairCount> second_order;  // baseline ranks (r, r+2)
  std::size_t sims_with_any_reversal = 0;
  std::size_t sims_with_second_order = 0;

  double rate() const noexcept {
    return total_sims == 0 ? 0.0 : double(sims_with_any_reversal) / double(total_sims);
  }
  std::size_t first_order_total() const noexcept;
  std::size_t second_order_total() const noexcept;
  /// Count for the pair (a, b) in either orientation; 0 when absent.
  std::size_t first_order_count(int a, int b) const noexcept;
  std::size_t second_order_count(int a, int b) const noexcept;
};

/// Draws one fuzzy matrix for simulation `sim_index`. Upper-triangle entries
/// are visited row-major; each takes an l draw then a u draw.
FuzzyComparisonMatrix fuzzify(const ComparisonMatrix<double>& m, const FuzzSpec& spec,
                              std::size_t sim_index);

/// Same as fuzzify() but continues an existing stream.
FuzzyComparisonMatrix fuzzify(const ComparisonMatrix<double>& m, double fuzziness,
                              SplitMix64& rng);

/// Row geometric means, Buckley normalization, centroid defuzzification.
PriorityVector<double> fuzzy_priority(const FuzzyComparisonMatrix& fm);

/// `threads` only affects scheduling; the batch is identical for any value.
SimulationBatch run_simulations(const ComparisonMatrix<double>& m, const FuzzSpec& spec,
                                unsigned threads = 1);

ReversalReport count_reversals(const SimulationBatch& batch, const std::vector<int>& baseline);

/// True when any pair is inverted relative to `baseline`.
bool has_reversal(const VectorX<double>& w, const std::vector<int>& baseline);

/// First record whose two top-ranked baseline factors are inverted.
const SimulationRecord& select_case1(const SimulationBatch& batch, const std::vector<int>& baseline);

/// Reversal record farthest (L1) from the crisp weights; ties go to the lowest index.
const SimulationRecord& select_case2(const SimulationBatch& batch,
                                     const PriorityVector<double>& crisp_weights);

/// Up to `k` reversal records drawn uniformly without replacement, in batch order.
std::vector<const SimulationRecord*> sample_reversal_records(const SimulationBatch& batch,
                                                             const std::vector<int>& baseline,
                                                             std::size_t k, std::uint64_t seed);

inline constexpr int kAcuteIndex = 6;
inline constexpr int kChronicIndex = 7;

/*!
 * Fuzzy 1-N protocol on an 8-factor vector (six known factors, acute, chronic).
 *
 * The vector is turned back into its consistent matrix and fuzzified once per
 * simulation. After the fuzzification draws the same stream yields two more
 * uniforms: acute is dropped when the first is below `p_acute_excl`, chronic
 * when the second is below `p_chronic_excl`. Pairs keep their positions in
 * the full 8-factor baseline and are only counted when both factors survive.
 */
ReversalReport fuzzy_one_n(const PriorityVector<double>& weights8, const FuzzSpec& spec,
                           double p_acute_excl = 0.975, double p_chronic_excl = 0.75,
                           unsigned threads = 1);

/// Header `order,rank,higher,lower,count`; one row per baseline pair.
void write_reversal_csv(std::ostream& os, const ReversalReport& report,
                        const std::vector<std::string>& names);

/// Single record `total,any_reversal,rate`.
void write_rate_csv(std::ostream& os, const ReversalReport& report);

}  // namespace mcda
