#pragma once

// Pairwise comparison matrices, priority vectors and consistency checks.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "mcda/error.hpp"

namespace mcda {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr Eigen::Index kMinDimension = 2;
inline constexpr Eigen::Index kMaxDimension = 16;
/// Upper end of the Saaty judgment scale accepted for elicited matrices.
inline constexpr double kSaatyMax = 10.0;
/// Published matrices round reciprocals to two decimals (0.33, 0.14, 0.13).
inline constexpr double kReciprocalRounding = 0.005;
inline constexpr double kWeightSumTolerance = 1e-9;
inline constexpr double kConsistencyThreshold = 0.1;

/// Nonnegative weights summing to one.
template <typename Scalar = double>
class PriorityVector {
 public:
  using Vector = VectorX<Scalar>;

  /// Takes weights that already sum to one (within 1e-9).
  explicit PriorityVector(Vector w) : w_(std::move(w)) {
    if (w_.size() == 0) throw Error(Errc::InvalidArgument, "empty priority vector");
    for (Eigen::Index i = 0; i < w_.size(); ++i) {
      if (!(w_[i] >= Scalar(0)) || !std::isfinite(static_cast<double>(w_[i])))
        throw Error(Errc::InvalidArgument, "priority weights must be finite and nonnegative");
    }
    if (std::abs(static_cast<double>(w_.sum()) - 1.0) > kWeightSumTolerance)
      throw Error(Errc::InvalidArgument, "priority weights must sum to 1");
  }

  /// Scales nonnegative weights to unit sum.
  static PriorityVector normalized(const Vector& v) {
    const Scalar total = v.sum();
    if (!(total > Scalar(0))) throw Error(Errc::ZeroVector, "cannot normalize a zero vector");
    return PriorityVector(Vector(v / total));
  }

  Eigen::Index size() const noexcept { return w_.size(); }
  Scalar operator[](Eigen::Index i) const { return w_[i]; }
  const Vector& vector() const noexcept { return w_; }

 private:
  Vector w_;
};

/// Square positive reciprocal judgment matrix.
template <typename Scalar = double>
class ComparisonMatrix {
 public:
  using Matrix = MatrixX<Scalar>;

  /// Checks the shape, diagonal, Saaty-scale bounds and two-decimal reciprocity.
  static ComparisonMatrix validate(const Matrix& raw) {
    check_dimension(raw);
    const Eigen::Index n = raw.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double v = static_cast<double>(raw(i, j));
        if (!std::isfinite(v) || v <= 0.0) {
          std::ostringstream os;
          os << "entry (" << i << "," << j << ") = " << v << " is not positive";
          throw Error(Errc::NonPositiveEntry, os.str());
        }
        if (v > kSaatyMax) {
          std::ostringstream os;
          os << "entry (" << i << "," << j << ") = " << v << " exceeds " << kSaatyMax;
          throw Error(Errc::EntryOutOfScale, os.str());
        }
      }
      if (std::abs(static_cast<double>(raw(i, i)) - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "diagonal entry " << i << " = " << raw(i, i) << ", expected 1";
        throw Error(Errc::BadDiagonal, os.str());
      }
    }
    check_reciprocity(raw);
    return ComparisonMatrix(raw);
  }

  /// Completes the upper triangle as exact reciprocals of the lower one.
  static ComparisonMatrix from_lower_triangle(const Matrix& raw) {
    check_dimension(raw);
    Matrix full = raw;
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < raw.cols(); ++j) {
        if (!(raw(j, i) > Scalar(0))) {
          std::ostringstream os;
          os << "entry (" << j << "," << i << ") = " << raw(j, i) << " is not positive";
          throw Error(Errc::NonPositiveEntry, os.str());
        }
        full(i, j) = Scalar(1) / raw(j, i);
      }
    }
    return validate(full);
  }

  /// Rank-one consistent matrix a(i,j) = w(i) / w(j). No Saaty bound applies.
  static ComparisonMatrix consistent(const VectorX<Scalar>& w) {
    const Eigen::Index n = w.size();
    if (n < kMinDimension || n > kMaxDimension)
      throw Error(Errc::DimensionOutOfRange, "weight vector length out of range");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(w[i] > Scalar(0)))
        throw Error(Errc::ZeroWeightComponent, "weight " + std::to_string(i) + " is not positive");
    }
    Matrix a = w * w.cwiseInverse().transpose();
    a.diagonal().setOnes();
    return ComparisonMatrix(std::move(a));
  }

  Eigen::Index size() const noexcept { return a_.rows(); }
  const Matrix& matrix() const noexcept { return a_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return a_(i, j); }

 private:
  explicit ComparisonMatrix(Matrix a) : a_(std::move(a)) {}

  static void check_dimension(const Matrix& raw) {
    if (raw.rows() != raw.cols())
      throw Error(Errc::DimensionOutOfRange, "matrix is not square");
    if (raw.rows() < kMinDimension || raw.rows() > kMaxDimension) {
      throw Error(Errc::DimensionOutOfRange,
                  "dimension " + std::to_string(raw.rows()) + " outside [2, 16]");
    }
  }

  // The sub-unit member of each pair must be its partner's reciprocal up to
  // two-decimal rounding.
  static void check_reciprocity(const Matrix& raw) {
    double worst = 0.0;
    Eigen::Index wi = 0, wj = 0;
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < raw.cols(); ++j) {
        const double a = static_cast<double>(raw(i, j));
        const double b = static_cast<double>(raw(j, i));
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        const double dev = std::abs(lo - 1.0 / hi);
        if (dev > worst) {
          worst = dev;
          wi = i;
          wj = j;
        }
      }
    }
    if (worst > kReciprocalRounding + 1e-9) {
      std::ostringstream os;
      os << "worst pair (" << wi << "," << wj << "): " << raw(wi, wj) << " * " << raw(wj, wi)
         << " = " << raw(wi, wj) * raw(wj, wi);
      throw Error(Errc::ReciprocityViolation, os.str());
    }
  }

  Matrix a_;
};

template <typename Scalar>
ComparisonMatrix<Scalar> validate_matrix(const MatrixX<Scalar>& raw) {
  return ComparisonMatrix<Scalar>::validate(raw);
}

template <typename Scalar>
ComparisonMatrix<Scalar> consistent_matrix_from_weights(const PriorityVector<Scalar>& w) {
  return ComparisonMatrix<Scalar>::consistent(w.vector());
}

/// Column-normalize, then average each row.
template <typename Scalar>
PriorityVector<Scalar> priority_vector(const ComparisonMatrix<Scalar>& m) {
  const auto& a = m.matrix();
  const VectorX<Scalar> col_sums = a.colwise().sum().transpose();
  const MatrixX<Scalar> normalized = a * col_sums.cwiseInverse().asDiagonal();
  return PriorityVector<Scalar>::normalized(normalized.rowwise().mean());
}

/// Saaty's estimator (1/n) * sum_i (A w)_i / w_i.
template <typename Scalar>
Scalar principal_eigenvalue(const ComparisonMatrix<Scalar>& m, const PriorityVector<Scalar>& w) {
  if (w.size() != m.size())
    throw Error(Errc::InvalidArgument, "weight vector length does not match matrix");
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] == Scalar(0))
      throw Error(Errc::ZeroWeightComponent, "weight " + std::to_string(i) + " is zero");
  }
  const VectorX<Scalar> aw = m.matrix() * w.vector();
  return aw.cwiseQuotient(w.vector()).mean();
}

/// Saaty random index for n in [1, 10].
inline double random_index(Eigen::Index n) {
  static constexpr double kTable[] = {0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49};
  if (n < 1 || n > 10)
    throw Error(Errc::RandomIndexUnavailable, "no random index for n = " + std::to_string(n));
  return kTable[n - 1];
}

template <typename Scalar = double>
struct ConsistencyReport {
  Scalar lambda_max{};
  Scalar ci{};
  Scalar cr{};
  double ri{};
  bool consistent{};
};

/// CR is reported as 0 when RI is 0 (n <= 2).
template <typename Scalar>
ConsistencyReport<Scalar> consistency(const ComparisonMatrix<Scalar>& m) {
  const Eigen::Index n = m.size();
  const double ri = random_index(n);
  const auto w = priority_vector(m);
  ConsistencyReport<Scalar> report;
  report.lambda_max = principal_eigenvalue(m, w);
  report.ci = (report.lambda_max - Scalar(n)) / Scalar(n - 1);
  report.ri = ri;
  report.cr = ri > 0.0 ? report.ci / Scalar(ri) : Scalar(0);
  report.consistent = report.cr < Scalar(kConsistencyThreshold);
  return report;
}

/// Factor indices sorted by descending weight; ties go to the lower index.
template <typename Derived>
std::vector<int> rank_order(const Eigen::MatrixBase<Derived>& w) {
  std::vector<int> order(static_cast<std::size_t>(w.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w[a] > w[b]; });
  return order;
}

template <typename Scalar>
std::vector<int> rank_order(const PriorityVector<Scalar>& w) {
  return rank_order(w.vector());
}

}  // namespace mcda
