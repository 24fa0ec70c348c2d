#pragma once

// Reference implementations used only by tests. Each is written
// independently of the library code it checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

inline Eigen::MatrixXd criteria_matrix() {
  Eigen::MatrixXd a(6, 6);
  a << 1, 2, 4, 5, 7, 9,
       0.5, 1, 3, 4, 5, 7,
       0.25, 0.33, 1, 2, 4, 5,
       0.2, 0.25, 0.5, 1, 3, 5,
       0.14, 0.2, 0.25, 0.33, 1, 4,
       0.11, 0.14, 0.2, 0.2, 0.25, 1;
  return a;
}

/// Largest real eigenvalue and its eigenvector normalized to sum 1.
inline std::pair<double, Eigen::VectorXd> principal_eigen(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < a.rows(); ++i)
    if (es.eigenvalues()[i].real() > es.eigenvalues()[best].real()) best = i;
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  v /= v.sum();
  return {es.eigenvalues()[best].real(), v};
}

/// Within-class sum of squared deviations for sorted values split at `ends`
/// (exclusive end index of each class but the last).
inline double ssd(const std::vector<double>& sorted, const std::vector<std::size_t>& ends) {
  double total = 0.0;
  std::size_t begin = 0;
  auto add = [&](std::size_t end) {
    double mean = 0.0;
    for (std::size_t i = begin; i < end; ++i) mean += sorted[i];
    mean /= double(end - begin);
    for (std::size_t i = begin; i < end; ++i) total += (sorted[i] - mean) * (sorted[i] - mean);
    begin = end;
  };
  for (auto e : ends) add(e);
  add(sorted.size());
  return total;
}

/// Cost of a break list: class j holds values <= breaks[j] (and above the previous break).
inline double ssd_of_breaks(std::vector<double> values, const std::vector<double>& breaks) {
  std::sort(values.begin(), values.end());
  std::vector<std::size_t> ends;
  for (double b : breaks)
    ends.push_back(std::size_t(std::upper_bound(values.begin(), values.end(), b) - values.begin()));
  return ssd(values, ends);
}

/// Exhaustive search over every placement of k-1 cuts between distinct values.
inline double brute_force_jenks(std::vector<double> values, int k) {
  std::sort(values.begin(), values.end());
  std::vector<std::size_t> cuts;  // candidate cut positions: where the value changes
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] != values[i - 1]) cuts.push_back(i);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> chosen;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (int(chosen.size()) == k - 1) {
      best = std::min(best, ssd(values, chosen));
      return;
    }
    for (std::size_t c = from; c < cuts.size(); ++c) {
      chosen.push_back(cuts[c]);
      self(self, c + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

/// Literal one-hot form: one-hot P (5 x F), diag(S^T P) selects each factor's
/// subweight, then dot with w.
inline double one_hot_score(const Eigen::MatrixXd& s, const Eigen::VectorXd& w, const std::vector<int>& classes) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(s.rows(), s.cols());
  for (std::size_t f = 0; f < classes.size(); ++f) p(classes[f] - 1, Eigen::Index(f)) = 1.0;
  const Eigen::MatrixXd st_p = s.transpose() * p;
  double v = 0.0;
  for (Eigen::Index f = 0; f < s.cols(); ++f) v += w[f] * st_p(f, f);
  return v;
}

}  // namespace oracle
