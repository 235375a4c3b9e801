#include "driftbench/naive_bayes.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>

namespace driftbench {

BayesModel::BayesModel(const Schema& schema) : schema_(schema) {
  label_counts_.assign(schema_.label_count(), 0);
  const auto& attrs = schema_.attributes();
  nominal_.resize(attrs.size());
  numeric_.resize(attrs.size());
  for (size_t a = 0; a < attrs.size(); ++a) {
    if (attrs[a].kind == AttrKind::nominal) {
      nominal_[a].assign(size_t(schema_.label_count()) * attrs[a].cardinality, 0);
    } else {
      numeric_[a].assign(schema_.label_count(), RunningStat{});
    }
  }
}

void BayesModel::add(const LabeledInstance& inst) {
  assert(inst.label >= 0 && inst.label < schema_.label_count());
  ++total_;
  ++label_counts_[inst.label];
  const auto& attrs = schema_.attributes();
  for (size_t a = 0; a < attrs.size(); ++a) {
    if (attrs[a].kind == AttrKind::nominal) {
      nominal_[a][size_t(inst.label) * attrs[a].cardinality + int(inst.values[a])]++;
    } else {
      numeric_[a][inst.label].add(inst.values[a]);
    }
  }
}

void BayesModel::clear() {
  *this = BayesModel(schema_);
}

int BayesModel::majority() const {
  if (total_ == 0) return kNoModel;
  int best = 0;
  for (int l = 1; l < schema_.label_count(); ++l) {
    if (label_counts_[l] > label_counts_[best]) best = l;
  }
  return best;
}

std::vector<double> BayesModel::log_scores(std::span<const double> values) const {
  const int labels = schema_.label_count();
  std::vector<double> scores(labels, std::numeric_limits<double>::quiet_NaN());
  if (total_ == 0) return scores;
  const auto& attrs = schema_.attributes();
  constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)
  for (int y = 0; y < labels; ++y) {
    if (label_counts_[y] == 0) continue;  // unseen labels cannot win
    double s = std::log(double(label_counts_[y] + 1) / double(total_ + labels));
    for (size_t a = 0; a < attrs.size(); ++a) {
      if (attrs[a].kind == AttrKind::nominal) {
        const long long c = nominal_[a][size_t(y) * attrs[a].cardinality + int(values[a])];
        s += std::log(double(c + 1) / double(label_counts_[y] + attrs[a].cardinality));
      } else {
        const RunningStat& st = numeric_[a][y];
        const double var = std::max(st.variance(), kVarianceFloor);
        const double d = values[a] - st.mean;
        s += -0.5 * (kLog2Pi + std::log(var)) - d * d / (2.0 * var);
      }
    }
    scores[y] = s;
  }
  return scores;
}

int BayesModel::classify(std::span<const double> values) const {
  if (total_ == 0) return kNoModel;
  const auto scores = log_scores(values);
  int best = kNoModel;
  for (int y = 0; y < int(scores.size()); ++y) {
    if (std::isnan(scores[y])) continue;
    if (best == kNoModel || scores[y] > scores[best]) best = y;
  }
  return best;
}

std::vector<double> BayesModel::posterior(std::span<const double> values) const {
  auto scores = log_scores(values);
  double max_score = -std::numeric_limits<double>::infinity();
  for (const double s : scores) {
    if (!std::isnan(s)) max_score = std::max(max_score, s);
  }
  double z = 0.0;
  for (double& s : scores) {
    s = std::isnan(s) ? 0.0 : std::exp(s - max_score);
    z += s;
  }
  if (z > 0.0) {
    for (double& s : scores) s /= z;
  }
  return scores;
}

long long BayesModel::nominal_count(int label, int attr, int value) const {
  return nominal_[attr][size_t(label) * schema_.attributes()[attr].cardinality + value];
}

const RunningStat& BayesModel::numeric_stat(int label, int attr) const {
  return numeric_[attr][label];
}

}  // namespace driftbench
