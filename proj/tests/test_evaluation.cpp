#include <doctest.h>

#include <cmath>

#include "driftbench/drift.hpp"
#include "driftbench/evaluation.hpp"
#include "driftbench/naive_bayes.hpp"

using namespace driftbench;

namespace {

Schema tiny_schema() {
  return Schema({{"x", AttrKind::numeric, 0}}, {"a", "b"});
}

class ConstantSource final : public StreamSource {
 public:
  ConstantSource(Schema schema, int label, long long limit = -1)
      : schema_(std::move(schema)), label_(label), limit_(limit) {}
  const Schema& schema() const override { return schema_; }
  bool next(LabeledInstance& out) override {
    if (limit_ >= 0 && emitted_ >= limit_) return false;
    ++emitted_;
    out.values.assign({0.5});
    out.label = label_;
    return true;
  }

 private:
  Schema schema_;
  int label_;
  long long limit_;
  long long emitted_ = 0;
};

// Predicts a scripted label sequence regardless of input.
class ScriptedLearner final : public Learner {
 public:
  explicit ScriptedLearner(Schema schema, std::vector<int> script)
      : schema_(std::move(schema)), script_(std::move(script)) {}
  void train(const LabeledInstance&) override {}
  int classify(std::span<const double>) const override {
    const int v = script_[pos_ % script_.size()];
    ++pos_;
    return v;
  }
  void reset() override { pos_ = 0; }
  std::unique_ptr<Learner> clone_untrained() const override {
    return std::make_unique<ScriptedLearner>(schema_, script_);
  }
  std::string name() const override { return "scripted"; }

 private:
  Schema schema_;
  std::vector<int> script_;
  mutable size_t pos_ = 0;
};

// Counts calls and asserts strict test-then-train per instance.
class SpyLearner final : public Learner {
 public:
  explicit SpyLearner(Schema schema) : schema_(std::move(schema)) {}
  void train(const LabeledInstance&) override {
    ++trains;
    REQUIRE(classifies == trains);  // the test for instance t precedes its train
  }
  int classify(std::span<const double>) const override {
    ++classifies;
    REQUIRE(classifies == trains + 1);
    return 0;
  }
  void reset() override { trains = classifies = 0; }
  std::unique_ptr<Learner> clone_untrained() const override {
    return std::make_unique<SpyLearner>(schema_);
  }
  std::string name() const override { return "spy"; }

  long long trains = 0;
  mutable long long classifies = 0;

 private:
  Schema schema_;
};

}  // namespace

TEST_CASE("oracle and constant-wrong learners bound the accuracy range") {
  const Schema schema = tiny_schema();
  PrequentialConfig cfg;
  cfg.total = 5000;

  ConstantSource right_src(schema, 1);
  MonitoredLearner always_right(std::make_unique<ScriptedLearner>(schema, std::vector<int>{1}),
                                nullptr);
  const auto perfect = prequential_run(right_src, always_right, cfg);
  CHECK(perfect.mean_acc == 100.0);
  CHECK(perfect.final_acc == 100.0);

  ConstantSource src2(schema, 1);
  MonitoredLearner always_wrong(std::make_unique<ScriptedLearner>(schema, std::vector<int>{0}),
                                nullptr);
  const auto zero = prequential_run(src2, always_wrong, cfg);
  CHECK(zero.mean_acc == 0.0);
}

TEST_CASE("every instance is tested once then trained once") {
  const Schema schema = tiny_schema();
  ConstantSource src(schema, 0);
  auto spy = std::make_unique<SpyLearner>(schema);
  auto* spy_ptr = spy.get();
  MonitoredLearner learner(std::move(spy), nullptr);
  PrequentialConfig cfg;
  cfg.total = 1234;
  prequential_run(src, learner, cfg);
  CHECK(spy_ptr->trains == 1234);
  CHECK(spy_ptr->classifies == 1234);
}

TEST_CASE("sliding accuracy equals the cumulative accuracy before the window fills") {
  const Schema schema = tiny_schema();
  // loss pattern: wrong on every 4th instance
  std::vector<int> script;
  for (int i = 0; i < 4; ++i) script.push_back(i == 3 ? 0 : 1);
  ConstantSource src(schema, 1);
  MonitoredLearner learner(std::make_unique<ScriptedLearner>(schema, script), nullptr);
  PrequentialConfig cfg;
  cfg.window = 1000;
  cfg.total = 400;  // < window
  cfg.record_every = 100;
  std::vector<CurvePoint> curve;
  const auto record = prequential_run(src, learner, cfg, &curve);
  REQUIRE(curve.size() == 4);
  for (const auto& point : curve) CHECK(point.acc == doctest::Approx(75.0));
  CHECK(record.mean_acc == doctest::Approx(75.0));
  CHECK(record.final_acc == doctest::Approx(75.0));
}

TEST_CASE("mean accuracy averages non-overlapping window samples") {
  const Schema schema = tiny_schema();
  // 100 rights then 100 wrongs, window = record_every = 100:
  // samples 100%, 0%, 100%, 0% ... mean 50, final 0
  std::vector<int> script(200, 1);
  for (int i = 100; i < 200; ++i) script[i] = 0;
  ConstantSource src(schema, 1);
  MonitoredLearner learner(std::make_unique<ScriptedLearner>(schema, script), nullptr);
  PrequentialConfig cfg;
  cfg.window = 100;
  cfg.record_every = 100;
  cfg.total = 1000;
  const auto record = prequential_run(src, learner, cfg);
  CHECK(record.mean_acc == doctest::Approx(50.0));
  CHECK(record.final_acc == doctest::Approx(0.0));

  PrequentialConfig final_only = cfg;
  final_only.mean_over_samples = false;
  ConstantSource src2(schema, 1);
  MonitoredLearner learner2(std::make_unique<ScriptedLearner>(schema, script), nullptr);
  const auto record2 = prequential_run(src2, learner2, final_only);
  CHECK(record2.mean_acc == doctest::Approx(0.0));
}

TEST_CASE("cold start counts as loss") {
  const Schema schema = tiny_schema();
  ConstantSource src(schema, 0);
  MonitoredLearner learner(std::make_unique<NaiveBayes>(schema), nullptr);
  PrequentialConfig cfg;
  cfg.total = 100;
  const auto record = prequential_run(src, learner, cfg);
  // first prediction has no model -> exactly one loss
  CHECK(record.mean_acc == doctest::Approx(99.0));
}

TEST_CASE("exhausted source raises") {
  const Schema schema = tiny_schema();
  ConstantSource src(schema, 0, 50);
  MonitoredLearner learner(std::make_unique<NaiveBayes>(schema), nullptr);
  PrequentialConfig cfg;
  cfg.total = 100;
  CHECK_THROWS_AS(prequential_run(src, learner, cfg), std::runtime_error);
}

TEST_CASE("identical seeds give identical records") {
  auto run_once = [] {
    DriftPlan plan;
    for (int i = 0; i < 5; ++i) plan.concepts.push_back(mixed_concept(i % 2 == 1, uint64_t(i)));
    plan.total = 5000;
    auto src = compose(plan, 99);
    MonitoredLearner learner(std::make_unique<NaiveBayes>(src->schema()), nullptr);
    PrequentialConfig pc;
    pc.total = 5000;
    return prequential_run(*src, learner, pc);
  };
  const auto a = run_once();
  const auto b = run_once();
  CHECK(a.mean_acc == b.mean_acc);
  CHECK(a.final_acc == b.final_acc);
  CHECK(a.drift_events == b.drift_events);
}

TEST_CASE("aggregate matches the t-interval oracle") {
  CHECK_THROWS(aggregate(std::vector<double>{1.0}));

  const std::vector<double> same{10.0, 10.0, 10.0};
  const auto zero = aggregate(same);
  CHECK(zero.mean == doctest::Approx(10.0));
  CHECK(zero.ci95_halfwidth == doctest::Approx(0.0));

  // {50, 60}: mean 55, s = 7.0711, t_{0.975,1} = 12.7062 -> half-width 63.531
  const std::vector<double> two{50.0, 60.0};
  const auto ci = aggregate(two);
  CHECK(ci.mean == doctest::Approx(55.0));
  CHECK(ci.ci95_halfwidth == doctest::Approx(63.531).epsilon(1e-4));
}
