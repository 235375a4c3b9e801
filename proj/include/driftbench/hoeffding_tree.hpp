#pragma once

#include <memory>
#include <vector>

#include "driftbench/naive_bayes.hpp"

namespace driftbench {

/// Confidence radius sqrt(R^2 ln(1/delta) / (2n)).
double hoeffding_bound(double range, double delta, long long n);

struct HtConfig {
  int grace = 200;          // leaf arrivals between split attempts
  double delta = 1e-7;      // split confidence
  double tie = 0.05;        // tie-break threshold on the bound
  int numeric_candidates = 10;
  bool nb_leaves = true;    // false: leaves predict their majority label
  bool record_attempts = false;  // keep per-attempt leaf sizes (testing)
};

/// Incremental decision tree: leaves accumulate BayesModel statistics, every
/// `grace` arrivals a leaf compares the best and second-best information gain
/// against the Hoeffding bound and splits when the gap is significant (or the
/// bound has shrunk below the tie threshold). Numeric attributes split on
/// thresholds proposed from per-class Gaussian summaries; nominal attributes
/// split one child per value.
class HoeffdingTree final : public Learner {
 public:
  HoeffdingTree(const Schema& schema, const HtConfig& config);
  ~HoeffdingTree() override;

  void train(const LabeledInstance& inst) override;
  int classify(std::span<const double> values) const override;
  void reset() override;
  std::unique_ptr<Learner> clone_untrained() const override;
  std::string name() const override { return "ht"; }

  int leaf_count() const { return leaf_count_; }
  int node_count() const;
  int root_split_attribute() const;  // -1 while the root is a leaf
  const std::vector<long long>& attempt_counts() const { return attempt_counts_; }

 private:
  struct Node;

  Node* route(Node* node, std::span<const double> values) const;
  void try_split(Node* leaf);

  Schema schema_;
  HtConfig config_;
  std::unique_ptr<Node> root_;
  int leaf_count_ = 1;
  std::vector<long long> attempt_counts_;
};

}  // namespace driftbench
