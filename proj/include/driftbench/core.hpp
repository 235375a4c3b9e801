#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace driftbench {

enum class AttrKind : uint8_t { numeric, nominal };

struct AttributeSpec {
  std::string name;
  AttrKind kind = AttrKind::numeric;
  int cardinality = 0;  // nominal only
};

class Schema {
 public:
  Schema() = default;
  // Throws std::invalid_argument on a malformed schema (needs at least one
  // attribute, at least two labels, unique names, nominal cardinality >= 2).
  Schema(std::vector<AttributeSpec> attributes, std::vector<std::string> labels);

  const std::vector<AttributeSpec>& attributes() const { return attributes_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int attribute_count() const { return int(attributes_.size()); }
  int label_count() const { return int(labels_.size()); }

  bool operator==(const Schema& other) const;

 private:
  std::vector<AttributeSpec> attributes_;
  std::vector<std::string> labels_;
};

// Feature values travel as doubles: numeric slots hold the real value and
// nominal slots hold the 0-based category index as an integral double.
// Labels are dense 0-based indices into Schema::labels().
struct LabeledInstance {
  std::vector<double> values;
  int label = -1;
};

/// nullopt when the instance satisfies every schema invariant, otherwise a
/// description of the first violation (with the attribute index).
std::optional<std::string> validate_instance(const LabeledInstance& inst, const Schema& schema);

/// classify() result when a learner has not seen any training instance yet.
inline constexpr int kNoModel = -1;

class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual const Schema& schema() const = 0;
  // Fills `out` and returns true, or returns false once the source is
  // exhausted. Generator concepts never exhaust; composed streams stop at
  // their plan total. Same construction parameters and seed give a
  // bit-identical sequence.
  virtual bool next(LabeledInstance& out) = 0;
};

class Learner {
 public:
  virtual ~Learner() = default;
  virtual void train(const LabeledInstance& inst) = 0;
  // Pure: never mutates model state. Returns kNoModel before any training.
  virtual int classify(std::span<const double> values) const = 0;
  virtual void reset() = 0;
  virtual std::unique_ptr<Learner> clone_untrained() const = 0;
  virtual std::string name() const = 0;
};

enum class DetectorStatus : uint8_t { stable, warning, drift };

}  // namespace driftbench
