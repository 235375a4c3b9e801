#include "driftbench/drift.hpp"

#include <cmath>
#include <stdexcept>

namespace driftbench {

double sigmoid_probability(long long t, long long position, int width) {
  return 1.0 / (1.0 + std::exp(-4.0 * double(t - position) / double(width)));
}

std::vector<long long> drift_positions(const DriftPlan& plan) {
  const long long c = (long long)plan.concepts.size();
  std::vector<long long> positions;
  for (long long i = 1; i < c; ++i) positions.push_back(i * plan.total / c);
  return positions;
}

std::optional<std::string> validate_plan(const DriftPlan& plan) {
  if (plan.concepts.empty()) return "plan needs at least one concept";
  if (plan.total < (long long)plan.concepts.size()) return "plan total smaller than segment count";
  for (const auto& c : plan.concepts) {
    if (auto problem = validate_concept(c)) return *problem;
  }
  const Schema first = schema_for(plan.concepts.front());
  for (size_t i = 1; i < plan.concepts.size(); ++i) {
    if (!(schema_for(plan.concepts[i]) == first))
      return "schema mismatch between concepts 0 and " + std::to_string(i);
  }
  if (plan.kind == DriftKind::gradual) {
    if (plan.width < 1) return "gradual width must be >= 1";
    if ((long long)plan.width >= plan.total / (long long)plan.concepts.size())
      return "gradual width must be smaller than one segment";
  }
  return std::nullopt;
}

namespace {

constexpr uint64_t kSelectStream = 0x5e1ec7;

class ComposedSourceImpl final : public ComposedSource {
 public:
  ComposedSourceImpl(const DriftPlan& plan, uint64_t seed)
      : plan_(plan), select_rng_(mix_seed(seed, kSelectStream)) {
    for (auto& concept_cfg : plan_.concepts) {
      ConceptConfig derived = concept_cfg;
      derived.seed = mix_seed(seed, concept_cfg.seed);
      sources_.push_back(make_concept(derived));
    }
    schema_ = sources_.front()->schema();
    buffers_.resize(sources_.size());
    positions_ = drift_positions(plan_);
    if (!plan_.centered) {
      for (auto& p : positions_) p += plan_.width / 2;
    }
  }

  const Schema& schema() const override { return schema_; }

  int last_selected() const override { return last_selected_; }

  bool next(LabeledInstance& out) override {
    if (t_ >= plan_.total) return false;
    for (size_t i = 0; i < sources_.size(); ++i) sources_[i]->next(buffers_[i]);
    const int idx = select_index(t_);
    out = buffers_[idx];
    last_selected_ = idx;
    ++t_;
    return true;
  }

 private:
  int select_index(long long t) {
    const long long c = (long long)sources_.size();
    long long seg = t * c / plan_.total;
    if (seg > c - 1) seg = c - 1;
    if (plan_.kind == DriftKind::abrupt || c == 1) {
      if (plan_.kind == DriftKind::gradual) select_rng_.next_double();
      return int(seg);
    }
    // One Bernoulli draw per tick against the nearest transition keeps the
    // selection stream aligned regardless of where t falls.
    long long j = seg;  // transition j sits between concepts j-1 and j
    if (seg < 1) {
      j = 1;
    } else if (seg + 1 <= c - 1) {
      const long long behind = t - positions_[seg - 1];
      const long long ahead = positions_[seg] - t;
      if (ahead < behind) j = seg + 1;
    }
    const double p_incoming = sigmoid_probability(t, positions_[j - 1], plan_.width);
    const bool incoming = select_rng_.next_double() < p_incoming;
    return int(incoming ? j : j - 1);
  }

  DriftPlan plan_;
  Rng select_rng_;
  Schema schema_;
  std::vector<std::unique_ptr<StreamSource>> sources_;
  std::vector<LabeledInstance> buffers_;
  std::vector<long long> positions_;
  long long t_ = 0;
  int last_selected_ = -1;
};

}  // namespace

std::unique_ptr<StreamSource> compose(const DriftPlan& plan, uint64_t seed) {
  if (auto problem = validate_plan(plan)) throw std::invalid_argument(*problem);
  return std::make_unique<ComposedSourceImpl>(plan, seed);
}

}  // namespace driftbench
