#include "mcda/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace mcda {

BreakSet::BreakSet(std::array<double, 4> thresholds, Orientation orientation)
    : thresholds_(thresholds), orientation_(orientation) {
  for (std::size_t i = 0; i < thresholds_.size(); ++i) {
    if (!std::isfinite(thresholds_[i])) throw Error(Errc::InvalidArgument, "break is not finite");
    if (i > 0 && !(thresholds_[i] > thresholds_[i - 1]))
      throw Error(Errc::InvalidArgument, "breaks must be strictly ascending");
  }
}

int BreakSet::classify(double value) const noexcept {
  int ascending = 1;
  for (double t : thresholds_) {
    if (value > t) ++ascending;
  }
  return orientation_ == Orientation::HigherIsWorse ? ascending : 6 - ascending;
}

void validate_category_map(const CategoryMap& map) {
  if (map.empty()) throw Error(Errc::InvalidArgument, "category map is empty");
  for (const auto& [code, cls] : map) {
    if (cls < 1 || cls > 5)
      throw Error(Errc::InvalidArgument, "category " + std::to_string(code) + " maps outside 1..5");
  }
}

ClassGrid classify(const Grid& grid, const BreakSet& breaks) {
  ClassArray out(grid.rows(), grid.cols());
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      out(r, c) = grid.valid(r, c) ? breaks.classify(grid(r, c)) : kNoClass;
    }
  }
  return ClassGrid(grid.geometry(), std::move(out));
}

ClassGrid classify_categorical(const Grid& grid, const CategoryMap& map) {
  validate_category_map(map);
  ClassArray out(grid.rows(), grid.cols());
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      if (!grid.valid(r, c)) {
        out(r, c) = kNoClass;
        continue;
      }
      const double v = grid(r, c);
      const auto it = v == std::floor(v) ? map.find(static_cast<long long>(v)) : map.end();
      if (it == map.end()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        throw Error(Errc::UnmappedCategory, buf);
      }
      out(r, c) = it->second;
    }
  }
  return ClassGrid(grid.geometry(), std::move(out));
}

std::vector<double> jenks_breaks(std::span<const double> values, int k) {
  if (k < 1) throw Error(Errc::InvalidArgument, "class count must be positive");
  std::vector<double> sorted;
  sorted.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) sorted.push_back(v);
  }
  std::sort(sorted.begin(), sorted.end());

  // Distinct values with multiplicities, centred to limit cancellation.
  std::vector<double> x;
  std::vector<double> weight;
  for (double v : sorted) {
    if (x.empty() || v != x.back()) {
      x.push_back(v);
      weight.push_back(1.0);
    } else {
      weight.back() += 1.0;
    }
  }
  const std::size_t m = x.size();
  if (m < static_cast<std::size_t>(k)) {
    throw Error(Errc::TooFewDistinctValues,
                std::to_string(m) + " distinct values for " + std::to_string(k) + " classes");
  }
  if (k == 1) return {};

  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= double(sorted.size());

  std::vector<double> cw(m + 1, 0.0), cs(m + 1, 0.0), cs2(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = x[i] - mean;
    cw[i + 1] = cw[i] + weight[i];
    cs[i + 1] = cs[i] + weight[i] * d;
    cs2[i + 1] = cs2[i] + weight[i] * d * d;
  }
  // Sum of squared deviations of distinct values [i, j).
  auto ssd = [&](std::size_t i, std::size_t j) {
    const double w = cw[j] - cw[i];
    const double s = cs[j] - cs[i];
    return std::max(0.0, (cs2[j] - cs2[i]) - s * s / w);
  };

  const auto kk = static_cast<std::size_t>(k);
  constexpr double inf = std::numeric_limits<double>::infinity();
  // cost[c][j]: best cost of splitting the first j distinct values into c+1 classes.
  std::vector<std::vector<double>> cost(kk, std::vector<double>(m + 1, inf));
  std::vector<std::vector<std::size_t>> split(kk, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t j = 1; j <= m; ++j) cost[0][j] = ssd(0, j);
  for (std::size_t c = 1; c < kk; ++c) {
    for (std::size_t j = c + 1; j <= m; ++j) {
      for (std::size_t i = c; i < j; ++i) {
        const double candidate = cost[c - 1][i] + ssd(i, j);
        if (candidate < cost[c][j]) {
          cost[c][j] = candidate;
          split[c][j] = i;
        }
      }
    }
  }

  std::vector<double> breaks(kk - 1);
  std::size_t end = m;
  for (std::size_t c = kk - 1; c >= 1; --c) {
    const std::size_t start = split[c][end];
    breaks[c - 1] = x[start - 1];
    end = start;
  }
  return breaks;
}

}  // namespace mcda
