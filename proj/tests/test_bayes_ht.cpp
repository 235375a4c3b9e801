#include <doctest.h>

#include <cmath>

#include "driftbench/hoeffding_tree.hpp"
#include "driftbench/naive_bayes.hpp"
#include "driftbench/rng.hpp"

using namespace driftbench;

namespace {

Schema one_numeric() {
  return Schema({{"x", AttrKind::numeric, 0}}, {"a", "b"});
}

Schema nominal_numeric() {
  return Schema({{"c", AttrKind::nominal, 3}, {"x", AttrKind::numeric, 0}}, {"a", "b"});
}

}  // namespace

TEST_CASE("nb prior counts and running statistics") {
  NaiveBayes nb(one_numeric());
  nb.train({{2.0}, 0});
  CHECK(nb.model().label_count(0) == 1);
  CHECK(nb.model().label_count(1) == 0);
  nb.train({{4.0}, 0});
  nb.train({{6.0}, 0});
  const auto& stat = nb.model().numeric_stat(0, 0);
  CHECK(stat.mean == doctest::Approx(4.0));
  CHECK(stat.variance() == doctest::Approx(4.0));  // sample variance of {2,4,6}
  CHECK(nb.model().total() == 3);
  CHECK(nb.model().label_count(0) + nb.model().label_count(1) == 3);
}

TEST_CASE("welford matches a two-pass computation") {
  Rng rng(17);
  RunningStat ws;
  std::vector<double> xs;
  for (int i = 0; i < 5000; ++i) {
    const double x = rng.next_gaussian() * 3.7 + 11.0;
    xs.push_back(x);
    ws.add(x);
  }
  double mean = 0;
  for (const double x : xs) mean += x;
  mean /= xs.size();
  double ss = 0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / double(xs.size() - 1);
  CHECK(std::abs(ws.mean - mean) / std::abs(mean) < 1e-9);
  CHECK(std::abs(ws.variance() - var) / var < 1e-9);
}

TEST_CASE("nb with a single training label predicts it everywhere") {
  NaiveBayes nb(nominal_numeric());
  CHECK(nb.classify(std::vector<double>{0.0, 0.0}) == kNoModel);
  nb.train({{1.0, 3.0}, 1});
  for (double x = -50; x < 50; x += 7.3)
    CHECK(nb.classify(std::vector<double>{2.0, x}) == 1);
}

TEST_CASE("nb separates two gaussian clusters") {
  NaiveBayes nb(one_numeric());
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    nb.train({{rng.next_gaussian()}, 0});         // mean 0
    nb.train({{10.0 + rng.next_gaussian()}, 1});  // mean 10
  }
  CHECK(nb.classify(std::vector<double>{9.0}) == 1);
  CHECK(nb.classify(std::vector<double>{1.0}) == 0);
  CHECK(nb.classify(std::vector<double>{4.9}) == 0);
}

TEST_CASE("nb posteriors normalize and the argmax ignores scaling") {
  const Schema schema = nominal_numeric();
  NaiveBayes nb(schema);
  Rng rng(6);
  for (int i = 0; i < 500; ++i) {
    LabeledInstance inst;
    inst.label = rng.next_int(2);
    inst.values = {double(rng.next_int(3)), rng.next_gaussian() + inst.label * 2.0};
    nb.train(inst);
  }
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> q{double(rng.next_int(3)), rng.next_double() * 6.0 - 1.0};
    const auto post = nb.model().posterior(q);
    double sum = 0;
    for (const double p : post) sum += p;
    REQUIRE(std::abs(sum - 1.0) <= 1e-9);
    // log-space argmax equals posterior argmax (positive rescaling is a
    // constant shift in log space)
    const auto scores = nb.model().log_scores(q);
    int best_post = 0, best_score = 0;
    for (int l = 1; l < 2; ++l) {
      if (post[l] > post[best_post]) best_post = l;
      if (scores[l] > scores[best_score]) best_score = l;
    }
    REQUIRE(best_post == best_score);
    REQUIRE(nb.classify(q) == best_score);
  }
}

TEST_CASE("nb handles zero-variance attributes via the floor") {
  NaiveBayes nb(one_numeric());
  for (int i = 0; i < 10; ++i) {
    nb.train({{1.0}, 0});
    nb.train({{2.0}, 1});
  }
  CHECK(nb.classify(std::vector<double>{1.01}) == 0);
  CHECK(nb.classify(std::vector<double>{1.99}) == 1);
}

TEST_CASE("hoeffding bound values") {
  // Numeric evaluation of sqrt(R^2 ln(1/delta) / (2n)) at R=1, delta=0.05,
  // n=200 gives 0.08654092 (independent oracle evaluation).
  CHECK(hoeffding_bound(1.0, 0.05, 200) == doctest::Approx(0.0865409).epsilon(1e-5));
  CHECK(std::abs(hoeffding_bound(1.0, 0.05, 200) - 0.08654092) < 1e-6);
  // quadrupling n halves the bound
  CHECK(hoeffding_bound(1.0, 0.05, 800) == doctest::Approx(hoeffding_bound(1.0, 0.05, 200) / 2));
  CHECK(hoeffding_bound(2.0, 1.0, 50) == 0.0);  // ln(1) = 0
  // monotone decreasing in n and in delta
  double prev = 1e9;
  for (long long n = 10; n <= 10000; n *= 10) {
    const double b = hoeffding_bound(1.0, 0.05, n);
    CHECK(b < prev);
    prev = b;
  }
  prev = 1e9;
  for (double delta = 1e-8; delta < 1.0; delta *= 100) {
    const double b = hoeffding_bound(1.0, delta, 100);
    CHECK(b < prev);
    prev = b;
  }
}

namespace {

// Stream where one attribute alone determines the label.
LabeledInstance oracle_instance(Rng& rng, int informative, int dims) {
  LabeledInstance inst;
  inst.values.resize(dims);
  for (int d = 0; d < dims; ++d) inst.values[d] = rng.next_double();
  inst.label = inst.values[informative] > 0.5 ? 1 : 0;
  return inst;
}

}  // namespace

TEST_CASE("ht splits on the informative attribute and learns the concept") {
  std::vector<AttributeSpec> attrs;
  for (int i = 0; i < 4; ++i) attrs.push_back({"x" + std::to_string(i), AttrKind::numeric, 0});
  const Schema schema(std::move(attrs), {"a", "b"});
  HtConfig cfg;
  HoeffdingTree ht(schema, cfg);
  Rng rng(21);
  for (int i = 0; i < 5000; ++i) ht.train(oracle_instance(rng, 2, 4));
  CHECK(ht.root_split_attribute() == 2);

  int correct = 0;
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) {
    const auto inst = oracle_instance(rng, 2, 4);
    if (ht.classify(inst.values) == inst.label) ++correct;
  }
  CHECK(double(correct) / trials >= 0.99);
}

TEST_CASE("ht never splits on a constant-label stream") {
  const Schema schema = one_numeric();
  HoeffdingTree ht(schema, {});
  Rng rng(9);
  for (int i = 0; i < 20000; ++i) ht.train({{rng.next_double()}, 0});
  CHECK(ht.leaf_count() == 1);
}

TEST_CASE("ht leaf count is nondecreasing and attempts align with the grace period") {
  std::vector<AttributeSpec> attrs;
  for (int i = 0; i < 3; ++i) attrs.push_back({"x" + std::to_string(i), AttrKind::numeric, 0});
  const Schema schema(std::move(attrs), {"a", "b"});
  HtConfig cfg;
  cfg.record_attempts = true;
  HoeffdingTree ht(schema, cfg);
  Rng rng(33);
  int prev_leaves = ht.leaf_count();
  for (int i = 0; i < 30000; ++i) {
    ht.train(oracle_instance(rng, 0, 3));
    CHECK(ht.leaf_count() >= prev_leaves);
    prev_leaves = ht.leaf_count();
  }
  REQUIRE(!ht.attempt_counts().empty());
  for (const long long count : ht.attempt_counts()) CHECK(count % 200 == 0);
}

TEST_CASE("ht cold start and deterministic routing") {
  const Schema schema = nominal_numeric();
  HoeffdingTree ht(schema, {});
  CHECK(ht.classify(std::vector<double>{0.0, 0.0}) == kNoModel);
  ht.train({{1.0, 0.5}, 0});
  for (double x = -3; x < 3; x += 0.7)
    CHECK(ht.classify(std::vector<double>{2.0, x}) == 0);
  const std::vector<double> q{1.0, 0.25};
  const int first = ht.classify(q);
  for (int i = 0; i < 100; ++i) REQUIRE(ht.classify(q) == first);
}

TEST_CASE("ht splits nominal attributes multiway") {
  const Schema schema({{"c", AttrKind::nominal, 4}, {"x", AttrKind::numeric, 0}}, {"a", "b"});
  HoeffdingTree ht(schema, {});
  Rng rng(44);
  for (int i = 0; i < 4000; ++i) {
    LabeledInstance inst;
    const int c = rng.next_int(4);
    inst.values = {double(c), rng.next_double()};
    inst.label = (c == 1 || c == 2) ? 1 : 0;
    ht.train(inst);
  }
  CHECK(ht.root_split_attribute() == 0);
  CHECK(ht.classify(std::vector<double>{1.0, 0.5}) == 1);
  CHECK(ht.classify(std::vector<double>{0.0, 0.5}) == 0);
}
