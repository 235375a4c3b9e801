#include "driftbench/hoeffding_tree.hpp"

#include <cmath>
#include <limits>

namespace driftbench {

double hoeffding_bound(double range, double delta, long long n) {
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * double(n)));
}

namespace {

double entropy(std::span<const double> counts, double total) {
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (const double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

double gaussian_cdf(double x, double mean, double stddev) {
  return 0.5 * (1.0 + std::erf((x - mean) / (stddev * 1.4142135623730950488)));
}

}  // namespace

struct HoeffdingTree::Node {
  // leaf state
  std::unique_ptr<BayesModel> stats;
  long long since_attempt = 0;
  // internal state
  int split_attr = -1;
  double threshold = 0.0;  // numeric splits: left <= threshold
  std::vector<std::unique_ptr<Node>> children;
  int majority_at_split = kNoModel;

  bool is_leaf() const { return split_attr < 0; }
};

HoeffdingTree::HoeffdingTree(const Schema& schema, const HtConfig& config)
    : schema_(schema), config_(config) {
  root_ = std::make_unique<Node>();
  root_->stats = std::make_unique<BayesModel>(schema_);
}

HoeffdingTree::~HoeffdingTree() = default;

HoeffdingTree::Node* HoeffdingTree::route(Node* node, std::span<const double> values) const {
  while (!node->is_leaf()) {
    const auto& attr = schema_.attributes()[node->split_attr];
    int branch;
    if (attr.kind == AttrKind::nominal) {
      branch = int(values[node->split_attr]);
    } else {
      branch = values[node->split_attr] <= node->threshold ? 0 : 1;
    }
    node = node->children[branch].get();
  }
  return node;
}

void HoeffdingTree::train(const LabeledInstance& inst) {
  Node* leaf = route(root_.get(), inst.values);
  leaf->stats->add(inst);
  if (++leaf->since_attempt >= config_.grace) {
    if (config_.record_attempts) attempt_counts_.push_back(leaf->stats->total());
    leaf->since_attempt = 0;
    try_split(leaf);
  }
}

void HoeffdingTree::try_split(Node* leaf) {
  const BayesModel& stats = *leaf->stats;
  const int labels = schema_.label_count();
  const double total = double(stats.total());
  if (total <= 0.0) return;

  std::vector<double> pre_counts(labels);
  for (int y = 0; y < labels; ++y) pre_counts[y] = double(stats.label_count(y));
  const double pre_entropy = entropy(pre_counts, total);
  if (pre_entropy == 0.0) return;  // pure leaf, nothing to gain

  const auto& attrs = schema_.attributes();
  double best_gain = 0.0, second_gain = 0.0;
  int best_attr = -1;
  double best_threshold = 0.0;

  std::vector<double> part_counts;
  for (int a = 0; a < int(attrs.size()); ++a) {
    double gain = 0.0;
    double threshold = 0.0;
    if (attrs[a].kind == AttrKind::nominal) {
      const int card = attrs[a].cardinality;
      double cond = 0.0;
      part_counts.assign(labels, 0.0);
      for (int v = 0; v < card; ++v) {
        double nv = 0.0;
        for (int y = 0; y < labels; ++y) {
          part_counts[y] = double(stats.nominal_count(y, a, v));
          nv += part_counts[y];
        }
        cond += nv / total * entropy(part_counts, nv);
      }
      gain = pre_entropy - cond;
    } else {
      // Candidate thresholds spread over the observed range; class mass on
      // each side estimated from the per-class Gaussian summaries.
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (int y = 0; y < labels; ++y) {
        const RunningStat& st = stats.numeric_stat(y, a);
        if (st.n == 0) continue;
        lo = std::min(lo, st.min);
        hi = std::max(hi, st.max);
      }
      if (!(hi > lo)) continue;
      std::vector<double> left(labels), right(labels);
      for (int c = 1; c <= config_.numeric_candidates; ++c) {
        const double t = lo + (hi - lo) * double(c) / double(config_.numeric_candidates + 1);
        double left_total = 0.0, right_total = 0.0;
        for (int y = 0; y < labels; ++y) {
          const RunningStat& st = stats.numeric_stat(y, a);
          double below;
          if (st.n == 0) {
            below = 0.0;
          } else if (t < st.min) {
            below = 0.0;
          } else if (t >= st.max) {
            below = double(st.n);
          } else {
            const double sd = std::sqrt(std::max(st.variance(), BayesModel::kVarianceFloor));
            below = double(st.n) * gaussian_cdf(t, st.mean, sd);
          }
          left[y] = below;
          right[y] = double(st.n) - below;
          left_total += left[y];
          right_total += right[y];
        }
        const double cond = left_total / total * entropy(left, left_total) +
                            right_total / total * entropy(right, right_total);
        const double g = pre_entropy - cond;
        if (g > gain) {
          gain = g;
          threshold = t;
        }
      }
    }
    if (gain > best_gain) {
      second_gain = best_gain;
      best_gain = gain;
      best_attr = a;
      best_threshold = threshold;
    } else if (gain > second_gain) {
      second_gain = gain;
    }
  }

  if (best_attr < 0 || best_gain <= 0.0) return;
  const double range = std::log2(double(labels));
  const double bound = hoeffding_bound(range, config_.delta, stats.total());
  if (best_gain - second_gain < bound && bound >= config_.tie) return;

  const auto& attr = schema_.attributes()[best_attr];
  leaf->split_attr = best_attr;
  leaf->threshold = best_threshold;
  leaf->majority_at_split = stats.majority();
  const int fanout = attr.kind == AttrKind::nominal ? attr.cardinality : 2;
  for (int b = 0; b < fanout; ++b) {
    auto child = std::make_unique<Node>();
    child->stats = std::make_unique<BayesModel>(schema_);
    leaf->children.push_back(std::move(child));
  }
  leaf->stats.reset();
  leaf_count_ += fanout - 1;
}

int HoeffdingTree::classify(std::span<const double> values) const {
  const Node* node = root_.get();
  int fallback = kNoModel;  // majority of the deepest split node passed
  while (!node->is_leaf()) {
    fallback = node->majority_at_split;
    const auto& attr = schema_.attributes()[node->split_attr];
    const int branch = attr.kind == AttrKind::nominal
                           ? int(values[node->split_attr])
                           : (values[node->split_attr] <= node->threshold ? 0 : 1);
    node = node->children[branch].get();
  }
  if (node->stats->total() > 0) {
    return config_.nb_leaves ? node->stats->classify(values) : node->stats->majority();
  }
  return fallback;
}

void HoeffdingTree::reset() {
  root_ = std::make_unique<Node>();
  root_->stats = std::make_unique<BayesModel>(schema_);
  leaf_count_ = 1;
  attempt_counts_.clear();
}

std::unique_ptr<Learner> HoeffdingTree::clone_untrained() const {
  return std::make_unique<HoeffdingTree>(schema_, config_);
}

int HoeffdingTree::root_split_attribute() const { return root_->split_attr; }

int HoeffdingTree::node_count() const {
  struct Counter {
    static int count(const Node* n) {
      int total = 1;
      for (const auto& c : n->children) total += count(c.get());
      return total;
    }
  };
  return Counter::count(root_.get());
}

}  // namespace driftbench
