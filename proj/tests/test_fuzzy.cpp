#include <doctest.h>

#include <sstream>

#include "mcda/fuzzy.hpp"
#include "oracles.hpp"

using namespace mcda;

namespace {

const ComparisonMatrix<double>& criteria_matrix() {
  static const auto m = validate_matrix<double>(oracle::criteria_matrix());
  return m;
}

SimulationRecord record(std::size_t i, std::vector<double> w) {
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(w.data(), Eigen::Index(w.size()));
  auto order = rank_order(v);
  return {i, PriorityVector<double>::normalized(v), order};
}

}  // namespace

TEST_CASE("SplitMix64 reference values") {
  // Published SplitMix64 outputs for state 1234567.
  SplitMix64 g(1234567);
  CHECK(g() == 6457827717110365317ull);
  CHECK(g() == 3203168211198807973ull);
  CHECK(g() == 9817491932198370423ull);

  auto a = SplitMix64::stream(99, 5);
  auto b = SplitMix64::stream(99, 5);
  for (int i = 0; i < 10; ++i) CHECK(a.uniform() == b.uniform());
  auto c = SplitMix64::stream(99, 0);
  CHECK(c.state() == (99ull ^ mix64(0)));
}

TEST_CASE("uniform draws stay in range") {
  auto g = SplitMix64::stream(3, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = g.uniform(0.1, 2.0);
    REQUIRE(u >= 0.1);
    REQUIRE(u < 2.0);
  }
}

TEST_CASE("fuzzify bounds and reciprocity") {
  Eigen::MatrixXd two(2, 2);
  two << 1, 2, 0.5, 1;
  const auto m2 = validate_matrix<double>(two);
  FuzzSpec spec{0.95, 1000, 17};
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto fm = fuzzify(m2, spec, i);
    const Tfn t = fm(0, 1);
    REQUIRE(t.m == 2.0);
    REQUIRE(t.l >= 0.1 - 1e-12);
    REQUIRE(t.l <= 2.0);
    REQUIRE(t.u >= 2.0);
    REQUIRE(t.u <= 3.9 + 1e-12);
  }

  const auto fm = fuzzify(criteria_matrix(), spec, 3);
  for (Eigen::Index i = 0; i < 6; ++i) {
    CHECK(fm(i, i) == Tfn{1, 1, 1});
    for (Eigen::Index j = 0; j < 6; ++j) {
      const Tfn t = fm(i, j);
      CHECK(t.m == doctest::Approx(j >= i ? criteria_matrix()(i, j) : 1.0 / criteria_matrix()(j, i)).epsilon(1e-15));
      CHECK(t.l <= t.m);
      CHECK(t.m <= t.u);
      if (j > i) {
        const Tfn r = fm(j, i);
        CHECK(std::abs(r.l - 1.0 / t.u) <= 1e-9);
        CHECK(std::abs(r.m - 1.0 / t.m) <= 1e-9);
        CHECK(std::abs(r.u - 1.0 / t.l) <= 1e-9);
      }
    }
  }
}

TEST_CASE("fuzzify follows the documented draw order") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(3, 3);
  a << 1, 2, 4, 0.5, 1, 3, 0.25, 0.33, 1;
  const auto m = validate_matrix<double>(a);
  FuzzSpec spec{0.5, 10, 1234};
  auto rng = SplitMix64::stream(1234, 7);
  const auto fm = fuzzify(m, spec, 7);
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    const double v = a(i, j);
    const double l = 0.5 * v + rng.uniform() * (v - 0.5 * v);
    const double u = v + rng.uniform() * (1.5 * v - v);
    CHECK(fm(i, j).l == doctest::Approx(l).epsilon(1e-15));
    CHECK(fm(i, j).u == doctest::Approx(u).epsilon(1e-15));
  }
}

TEST_CASE("fuzzify is deterministic and degenerate at zero fuzziness") {
  FuzzSpec spec{0.95, 10, 5};
  CHECK(fuzzify(criteria_matrix(), spec, 4) == fuzzify(criteria_matrix(), spec, 4));
  CHECK_FALSE(fuzzify(criteria_matrix(), spec, 4) == fuzzify(criteria_matrix(), spec, 5));
  const auto crisp = fuzzify(criteria_matrix(), FuzzSpec{0.0, 1, 5}, 0);
  Eigen::MatrixXd exact = criteria_matrix().matrix();
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = i + 1; j < 6; ++j) exact(j, i) = 1.0 / exact(i, j);
  CHECK((crisp.lower() - exact).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((crisp.upper() - exact).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(crisp.modal() == exact);
  CHECK_THROWS_WITH_AS(FuzzSpec({1.0, 1, 0}).validate(), doctest::Contains("InvalidFuzzSpec"), Error);
}

TEST_CASE("fuzzy priority: hand examples") {
  FuzzyComparisonMatrix ones(4);
  const auto u = fuzzy_priority(ones);
  for (int i = 0; i < 4; ++i) CHECK(u[i] == doctest::Approx(0.25).epsilon(1e-12));

  // Row geometric means (1, 1.414, 2) and (0.5, 0.707, 1); Buckley weights
  // (1/3, 2/3, 4/3) and (1/6, 1/3, 2/3); centroids 7/9 and 7/18 -> (2/3, 1/3).
  FuzzyComparisonMatrix two(2);
  two.set_upper(0, 1, {1, 2, 4});
  const auto w = fuzzy_priority(two);
  CHECK(w[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("fuzzy priority of the crisp matrix tracks the AHP weights") {
  const auto crisp = fuzzy_priority(fuzzify(criteria_matrix(), FuzzSpec{0.0, 1, 0}, 0));
  const auto ahp = priority_vector(criteria_matrix());
  CHECK((crisp.vector() - ahp.vector()).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("run_simulations") {
  CHECK(run_simulations(criteria_matrix(), FuzzSpec{0.95, 0, 1}).empty());
  const FuzzSpec spec{0.95, 500, 77};
  const auto a = run_simulations(criteria_matrix(), spec, 1);
  const auto b = run_simulations(criteria_matrix(), spec, 3);
  REQUIRE(a.size() == 500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].index == i);
    CHECK(a[i].priorities.vector() == b[i].priorities.vector());
    CHECK(a[i].rank_order == rank_order(a[i].priorities));
    CHECK(std::abs(a[i].priorities.vector().sum() - 1.0) <= 1e-9);
    CHECK((a[i].priorities.vector().array() >= 0).all());
  }
  CHECK(a[42].priorities.vector() == fuzzy_priority(fuzzify(criteria_matrix(), spec, 42)).vector());
}

TEST_CASE("count_reversals on hand-built batches") {
  const std::vector<int> baseline{0, 1, 2};
  SimulationBatch batch{record(0, {0.5, 0.3, 0.2}), record(1, {0.3, 0.5, 0.2}), record(2, {0.5, 0.3, 0.2})};
  const auto r = count_reversals(batch, baseline);
  CHECK(r.total_sims == 3);
  CHECK(r.sims_with_any_reversal == 1);
  CHECK(r.first_order_count(0, 1) == 1);
  CHECK(r.first_order_count(1, 2) == 0);
  CHECK(r.second_order_total() == 0);

  SimulationBatch deep{record(0, {0.2, 0.3, 0.5})};
  const auto d = count_reversals(deep, baseline);
  CHECK(d.first_order_total() == 2);
  CHECK(d.second_order_count(0, 2) == 1);
  CHECK(d.sims_with_any_reversal == 1);
  CHECK(d.sims_with_second_order == 1);

  CHECK_THROWS_WITH_AS(count_reversals(batch, {0, 1}), doctest::Contains("BaselineMismatch"), Error);
}

TEST_CASE("crisp simulations never reverse") {
  const auto batch = run_simulations(criteria_matrix(), FuzzSpec{0.0, 200, 3});
  const auto r = count_reversals(batch, rank_order(priority_vector(criteria_matrix())));
  // The geometric-mean order of the crisp matrix matches the column-mean order.
  CHECK(r.sims_with_any_reversal == 0);
}

TEST_CASE("reversal rate grows with fuzziness") {
  const auto baseline = rank_order(priority_vector(criteria_matrix()));
  double prev = -1.0;
  for (double f : {0.0, 0.5, 0.95}) {
    const auto r = count_reversals(run_simulations(criteria_matrix(), FuzzSpec{f, 4000, 9}), baseline);
    CHECK(r.rate() >= prev);
    CHECK(r.sims_with_any_reversal <= r.total_sims);
    prev = r.rate();
  }
  CHECK(prev > 0.0);
}

TEST_CASE("case selection") {
  const std::vector<int> baseline{0, 1, 2};
  SimulationBatch none{record(0, {0.5, 0.3, 0.2})};
  CHECK_THROWS_WITH_AS(select_case1(none, baseline), doctest::Contains("NoSuchCase"), Error);
  CHECK_THROWS_WITH_AS(select_case2(none, PriorityVector<double>(Eigen::Vector3d(0.5, 0.3, 0.2))),
                       doctest::Contains("NoSuchCase"), Error);

  SimulationBatch batch{record(0, {0.5, 0.2, 0.3}), record(1, {0.3, 0.45, 0.25}), record(2, {0.35, 0.4, 0.25})};
  CHECK(select_case1(batch, baseline).index == 1);

  const PriorityVector<double> crisp(Eigen::Vector3d(0.5, 0.3, 0.2));
  // L1 deltas 0.2, 0.4, 0.3.
  CHECK(select_case2(batch, crisp).index == 1);

  SimulationBatch single{record(0, {0.3, 0.5, 0.2})};
  CHECK(select_case2(single, crisp).index == 0);

  SimulationBatch pair{record(0, {0.45, 0.3, 0.25}), record(1, {0.35, 0.4, 0.25})};
  CHECK(select_case2(pair, crisp).index == 1);
}

TEST_CASE("reference protocol batch has a top-two case") {
  const auto batch = run_simulations(criteria_matrix(), FuzzSpec{0.95, 20000, 0});
  const auto baseline = rank_order(priority_vector(criteria_matrix()));
  const auto& c1 = select_case1(batch, baseline);
  CHECK(c1.priorities[1] > c1.priorities[0]);
  const auto& c2 = select_case2(batch, priority_vector(criteria_matrix()));
  CHECK(has_reversal(c2.priorities.vector(), baseline));
}

TEST_CASE("reversal sampling") {
  const auto batch = run_simulations(criteria_matrix(), FuzzSpec{0.95, 5000, 2});
  const auto baseline = rank_order(priority_vector(criteria_matrix()));
  const auto s = sample_reversal_records(batch, baseline, 50, 8);
  REQUIRE(s.size() == 50);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(has_reversal(s[i]->priorities.vector(), baseline));
    if (i) CHECK(s[i - 1]->index < s[i]->index);
  }
  CHECK(sample_reversal_records(batch, baseline, 50, 8) == s);
  const auto all = sample_reversal_records(batch, baseline, 1000000, 8);
  CHECK(all.size() == count_reversals(batch, baseline).sims_with_any_reversal);
}

TEST_CASE("fuzzy 1-N limits") {
  Eigen::VectorXd w8(8);
  w8 << 0.27336, 0.17956, 0.09246, 0.067, 0.03886, 0.01876, 0.297, 0.033;
  const PriorityVector<double> w(w8);

  const auto crisp = fuzzy_one_n(w, FuzzSpec{0.0, 500, 4});
  CHECK(crisp.sims_with_any_reversal == 0);

  const auto excluded = fuzzy_one_n(w, FuzzSpec{0.95, 3000, 4}, 1.0, 1.0);
  for (const auto& p : excluded.first_order)
    if (p.higher >= 6 || p.lower >= 6) CHECK(p.count == 0);
  for (const auto& p : excluded.second_order)
    if (p.higher >= 6 || p.lower >= 6) CHECK(p.count == 0);
  CHECK(excluded.sims_with_any_reversal > 0);

  const auto a = fuzzy_one_n(w, FuzzSpec{0.95, 3000, 4}, 0.975, 0.75, 1);
  const auto b = fuzzy_one_n(w, FuzzSpec{0.95, 3000, 4}, 0.975, 0.75, 4);
  CHECK(a.sims_with_any_reversal == b.sims_with_any_reversal);
  for (std::size_t i = 0; i < a.first_order.size(); ++i) CHECK(a.first_order[i].count == b.first_order[i].count);
}

TEST_CASE("CSV exports") {
  const std::vector<int> baseline{0, 1, 2};
  SimulationBatch batch{record(0, {0.3, 0.5, 0.2})};
  const auto r = count_reversals(batch, baseline);
  std::ostringstream os;
  write_reversal_csv(os, r, {"A", "B", "C"});
  CHECK(os.str() == "order,rank,higher,lower,count\nfirst,0,A,B,1\nfirst,1,B,C,0\nsecond,0,A,C,0\n");
  std::ostringstream rate;
  write_rate_csv(rate, r);
  CHECK(rate.str() == "1,1,1.000000\n");
}
