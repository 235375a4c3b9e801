#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "driftbench/generators.hpp"

namespace driftbench {

enum class DriftKind : uint8_t { abrupt, gradual };

struct DriftPlan {
  std::vector<ConceptConfig> concepts;  // one per segment; schemas must match
  long long total = 0;                  // instances before exhaustion
  DriftKind kind = DriftKind::abrupt;
  int width = 500;      // gradual transition length
  bool centered = true; // transition centered on the drift position; false
                        // shifts the sigmoid midpoint to position + width/2
};

/// 1 / (1 + e^(-4 (t - position) / width)): probability of drawing from the
/// incoming concept. Monotone increasing in t, 0.5 at t == position.
double sigmoid_probability(long long t, long long position, int width);

/// Drift positions i * total / |concepts|, i = 1 .. |concepts|-1.
std::vector<long long> drift_positions(const DriftPlan& plan);

std::optional<std::string> validate_plan(const DriftPlan& plan);

/// One drifting stream over the plan's segments. Every sub-source advances in
/// lockstep each tick (only the selected instance is emitted), so gradual
/// interleaving never desynchronizes a concept, and the sub-source for
/// concept i is seeded mix_seed(seed, concepts[i].seed). Emits exactly
/// plan.total instances. Throws std::invalid_argument on bad plans.
std::unique_ptr<StreamSource> compose(const DriftPlan& plan, uint64_t seed);

/// Composed source with the segment index of the last emitted instance
/// exposed; compose() returns one of these.
class ComposedSource : public StreamSource {
 public:
  virtual int last_selected() const = 0;  // -1 before the first instance
};

}  // namespace driftbench
