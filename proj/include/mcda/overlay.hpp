#pragma once

// Per-pixel scoring rules: weighted overlay, nested subweights, 1-N layers.

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "mcda/grid.hpp"
#include "mcda/pairwise.hpp"

namespace mcda {

inline constexpr int kClassCount = 5;
/// Share of the unexplained 1-N mass attributed to acute factors.
inline constexpr double kAcuteShare = 0.9;

/// V(p) = sum_i w_i * x_i(p); nodata wherever any input is missing.
Grid weighted_overlay(std::span<const ClassGrid> classes, const PriorityVector<double>& w);

/*!
 * V(p) = sum_i w_i * s_i(x_i(p)).
 *
 * `subweights` is 5 x F with row c-1 holding the subweight of class c. Only
 * column sums are checked (1 +/- 0.01).
 */
Grid nested_overlay(std::span<const ClassGrid> classes, const PriorityVector<double>& w,
                    const Eigen::MatrixXd& subweights);

/// Checks the subweight contract: 5 rows, unit column sums, class 5 above class 1.
void validate_subweights(const Eigen::MatrixXd& subweights);

/// Occurrence with probability p_occ, then a uniform class in 1..5; otherwise
/// kAbsentClass. Pixel i draws from stream (seed, i).
ClassGrid stochastic_class_layer(const GridGeometry& geometry, double p_occ, std::uint64_t seed);

/// (N * base, 0.9 (1-N) acute, 0.1 (1-N) chronic).
PriorityVector<double> one_n_weights(const PriorityVector<double>& base_w, double n);

/// Eight-term overlay; absent acute/chronic pixels contribute nothing.
Grid one_n_overlay(std::span<const ClassGrid> classes6, const ClassGrid& acute,
                   const ClassGrid& chronic, const PriorityVector<double>& base_w, double n);

}  // namespace mcda
