#pragma once

#include <vector>

#include "driftbench/core.hpp"

namespace driftbench {

/// Welford accumulator with observed bounds.
struct RunningStat {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = 0.0;
  double max = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / double(n);
    m2 += delta * (x - mean);
    if (n == 1) {
      min = max = x;
    } else {
      if (x < min) min = x;
      if (x > max) max = x;
    }
  }

  /// Sample variance (n-1 denominator); 0 until two observations.
  double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
};

// Sufficient statistics of a naive Bayes model over one schema: class counts,
// per-(label, nominal attribute) value counts and per-(label, numeric
// attribute) running Gaussians. Also the leaf statistics of the Hoeffding
// tree, which reuses them for split evaluation.
class BayesModel {
 public:
  explicit BayesModel(const Schema& schema);

  void add(const LabeledInstance& inst);
  void clear();

  long long total() const { return total_; }
  long long label_count(int label) const { return label_counts_[label]; }

  /// Most frequent label so far (lowest index on ties), kNoModel when empty.
  int majority() const;

  /// argmax over seen labels of log P(y) + sum_j log P(x_j | y); kNoModel when
  /// untrained. Laplace-smoothed nominal frequencies and priors, Gaussian
  /// numeric likelihood with a 1e-6 variance floor.
  int classify(std::span<const double> values) const;

  /// Unnormalized log scores per label (quiet_NaN for unseen labels).
  std::vector<double> log_scores(std::span<const double> values) const;

  /// exp-normalized posterior over seen labels.
  std::vector<double> posterior(std::span<const double> values) const;

  long long nominal_count(int label, int attr, int value) const;
  const RunningStat& numeric_stat(int label, int attr) const;

  const Schema& schema() const { return schema_; }

  static constexpr double kVarianceFloor = 1e-6;

 private:
  const Schema* schema_ref() const { return &schema_; }

  Schema schema_;
  long long total_ = 0;
  std::vector<long long> label_counts_;
  // nominal_[attr]: label-major counts, size labels * cardinality
  std::vector<std::vector<long long>> nominal_;
  // numeric_[attr]: one RunningStat per label
  std::vector<std::vector<RunningStat>> numeric_;
};

class NaiveBayes final : public Learner {
 public:
  explicit NaiveBayes(const Schema& schema) : model_(schema) {}

  void train(const LabeledInstance& inst) override { model_.add(inst); }
  int classify(std::span<const double> values) const override { return model_.classify(values); }
  void reset() override { model_.clear(); }
  std::unique_ptr<Learner> clone_untrained() const override {
    return std::make_unique<NaiveBayes>(model_.schema());
  }
  std::string name() const override { return "nb"; }

  const BayesModel& model() const { return model_; }

 private:
  BayesModel model_;
};

}  // namespace driftbench
