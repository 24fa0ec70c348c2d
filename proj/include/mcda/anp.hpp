#pragma once

// ANP supermatrix over [goal; 6 criteria; 5 subcriteria; 5 alternatives].
//
// Blocks follow the published layout: subcriteria and alternatives are listed
// from the highest vulnerability class (5) down to the lowest (1).

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "mcda/error.hpp"
#include "mcda/pairwise.hpp"

namespace mcda::anp {

inline constexpr Eigen::Index kCriteria = 6;
inline constexpr Eigen::Index kSubcriteria = 5;
inline constexpr Eigen::Index kAlternatives = 5;
inline constexpr Eigen::Index kNodes = 1 + kCriteria + kSubcriteria + kAlternatives;

inline constexpr Eigen::Index kGoalRow = 0;
inline constexpr Eigen::Index kCriteriaRow = 1;
inline constexpr Eigen::Index kSubcriteriaRow = kCriteriaRow + kCriteria;
inline constexpr Eigen::Index kAlternativesRow = kSubcriteriaRow + kSubcriteria;

inline constexpr double kBlockColumnTolerance = 0.01;

template <typename Scalar = double>
struct SupermatrixBlocks {
  MatrixX<Scalar> w21;  // criteria vs goal, 6x1
  MatrixX<Scalar> w22;  // criteria inner dependence, 6x6
  MatrixX<Scalar> w32;  // subcriteria vs criteria, 5x6
  MatrixX<Scalar> w33;  // subcriteria inner dependence, 5x5
  MatrixX<Scalar> w34;  // alternatives vs subcriteria, 5x5

  void validate() const {
    check(w21, kCriteria, 1, "w21", true);
    check(w22, kCriteria, kCriteria, "w22", false);
    check(w32, kSubcriteria, kCriteria, "w32", true);
    check(w33, kSubcriteria, kSubcriteria, "w33", false);
    check(w34, kAlternatives, kSubcriteria, "w34", true);
  }

 private:
  static void check(const MatrixX<Scalar>& b, Eigen::Index rows, Eigen::Index cols, const char* name,
                    bool stochastic_columns) {
    if (b.rows() != rows || b.cols() != cols) {
      std::ostringstream os;
      os << name << " is " << b.rows() << "x" << b.cols() << ", expected " << rows << "x" << cols;
      throw Error(Errc::BlockDimensionMismatch, os.str());
    }
    if ((b.array() < Scalar(0)).any())
      throw Error(Errc::InvalidArgument, std::string(name) + " has negative entries");
    if (!stochastic_columns) return;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double s = static_cast<double>(b.col(j).sum());
      if (s != 0.0 && std::abs(s - 1.0) > kBlockColumnTolerance) {
        std::ostringstream os;
        os << name << " column " << j << " sums to " << s;
        throw Error(Errc::InvalidArgument, os.str());
      }
    }
  }
};

/// Places the blocks in the 17x17 layout; zeros elsewhere, identity on alternatives.
template <typename Scalar>
MatrixX<Scalar> assemble(const SupermatrixBlocks<Scalar>& b) {
  b.validate();
  MatrixX<Scalar> s = MatrixX<Scalar>::Zero(kNodes, kNodes);
  s.block(kCriteriaRow, kGoalRow, kCriteria, 1) = b.w21;
  s.block(kCriteriaRow, kCriteriaRow, kCriteria, kCriteria) = b.w22;
  s.block(kSubcriteriaRow, kCriteriaRow, kSubcriteria, kCriteria) = b.w32;
  s.block(kSubcriteriaRow, kSubcriteriaRow, kSubcriteria, kSubcriteria) = b.w33;
  s.block(kAlternativesRow, kSubcriteriaRow, kAlternatives, kSubcriteria) = b.w34;
  s.block(kAlternativesRow, kAlternativesRow, kAlternatives, kAlternatives).setIdentity();
  return s;
}

template <typename Scalar>
SupermatrixBlocks<Scalar> disassemble(const MatrixX<Scalar>& s) {
  if (s.rows() != kNodes || s.cols() != kNodes)
    throw Error(Errc::BlockDimensionMismatch, "supermatrix must be 17x17");
  SupermatrixBlocks<Scalar> b;
  b.w21 = s.block(kCriteriaRow, kGoalRow, kCriteria, 1);
  b.w22 = s.block(kCriteriaRow, kCriteriaRow, kCriteria, kCriteria);
  b.w32 = s.block(kSubcriteriaRow, kCriteriaRow, kSubcriteria, kCriteria);
  b.w33 = s.block(kSubcriteriaRow, kSubcriteriaRow, kSubcriteria, kSubcriteria);
  b.w34 = s.block(kAlternativesRow, kSubcriteriaRow, kAlternatives, kSubcriteria);
  return b;
}

/// Nonzero columns scaled to unit sum; zero columns become absorbing (1 on the diagonal).
template <typename Scalar>
MatrixX<Scalar> column_stochasticize(const MatrixX<Scalar>& s) {
  if ((s.array() < Scalar(0)).any())
    throw Error(Errc::InvalidArgument, "supermatrix has negative entries");
  MatrixX<Scalar> out = s;
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    const Scalar total = s.col(j).sum();
    if (total > Scalar(0)) {
      out.col(j) /= total;
    } else if (j < s.rows()) {
      out(j, j) = Scalar(1);
    }
  }
  return out;
}

template <typename Scalar = double>
struct LimitResult {
  MatrixX<Scalar> limit;
  int iterations = 0;
  bool converged = false;
  /// Period-2 oscillation resolved by averaging the two accumulation points.
  bool cesaro = false;
  /// Goal column carries no weight to the alternatives; priorities are uniform.
  bool degenerate = false;
  VectorX<Scalar> alternative_priorities;
};

/*!
 * Limit of a column-stochastic supermatrix by repeated squaring.
 *
 * Squaring stops once successive powers differ by less than `tol` (max-abs).
 * The stable power P is then checked against S*P: equal means a true limit,
 * S*S*P == P means a period-2 chain whose Cesaro limit (P + S*P)/2 is
 * returned. Anything else raises NotConverged.
 */
template <typename Scalar>
LimitResult<Scalar> limit(const MatrixX<Scalar>& s, double tol = 1e-9, int max_iter = 10000) {
  if (s.rows() != s.cols()) throw Error(Errc::BlockDimensionMismatch, "supermatrix is not square");
  LimitResult<Scalar> result;
  MatrixX<Scalar> p = s;
  bool stable = false;
  for (int it = 1; it <= max_iter; ++it) {
    MatrixX<Scalar> q = p * p;
    const double diff = static_cast<double>((q - p).cwiseAbs().maxCoeff());
    p = std::move(q);
    result.iterations = it;
    if (diff < tol) {
      stable = true;
      break;
    }
  }
  if (!stable) throw Error(Errc::NotConverged, "powers did not stabilise");

  const MatrixX<Scalar> sp = s * p;
  if (static_cast<double>((sp - p).cwiseAbs().maxCoeff()) < tol) {
    result.limit = p;
  } else if (static_cast<double>((s * sp - p).cwiseAbs().maxCoeff()) < tol) {
    result.limit = (p + sp) / Scalar(2);
    result.cesaro = true;
  } else {
    throw Error(Errc::NotConverged, "limit cycles with period greater than 2");
  }
  result.converged = true;

  if (s.rows() != kNodes) return result;  // generic chain: no goal/alternative layout
  const VectorX<Scalar> alt = result.limit.col(kGoalRow).tail(kAlternatives);
  const Scalar total = alt.sum();
  if (total > Scalar(1e-12)) {
    result.alternative_priorities = alt / total;
  } else {
    result.alternative_priorities = VectorX<Scalar>::Constant(kAlternatives, Scalar(1) / kAlternatives);
    result.degenerate = true;
  }
  return result;
}

/// normalize(w22 * w21): criteria weights adjusted for inner dependence.
template <typename Scalar>
PriorityVector<Scalar> effective_criteria_weights(const MatrixX<Scalar>& w21, const MatrixX<Scalar>& w22) {
  if (w21.rows() != kCriteria || w21.cols() != 1 || w22.rows() != kCriteria || w22.cols() != kCriteria)
    throw Error(Errc::BlockDimensionMismatch, "w21 must be 6x1 and w22 6x6");
  const VectorX<Scalar> product = w22 * w21;
  if (!(product.sum() > Scalar(0))) throw Error(Errc::ZeroVector, "w22 * w21 is all zero");
  return PriorityVector<Scalar>::normalized(product);
}

/*!
 * Per-factor class effects: column f is w34 * w32.col(f), renormalized.
 *
 * The result is returned in subweight orientation, row c-1 holding class c,
 * so it can drive the same per-pixel lookup as nested subweights.
 */
template <typename Scalar>
MatrixX<Scalar> anp_class_weights(const SupermatrixBlocks<Scalar>& b) {
  b.validate();
  MatrixX<Scalar> effects = b.w34 * b.w32;
  for (Eigen::Index f = 0; f < effects.cols(); ++f) {
    const Scalar total = effects.col(f).sum();
    if (!(total > Scalar(0))) throw Error(Errc::ZeroVector, "factor column has no class effect");
    effects.col(f) /= total;
  }
  return effects.colwise().reverse();
}

}  // namespace mcda::anp
