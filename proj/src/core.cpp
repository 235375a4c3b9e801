#include "driftbench/core.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace driftbench {

Schema::Schema(std::vector<AttributeSpec> attributes, std::vector<std::string> labels)
    : attributes_(std::move(attributes)), labels_(std::move(labels)) {
  if (attributes_.empty()) throw std::invalid_argument("schema needs at least one attribute");
  if (labels_.size() < 2) throw std::invalid_argument("schema needs at least two labels");
  std::unordered_set<std::string> seen;
  for (const auto& a : attributes_) {
    if (!seen.insert(a.name).second)
      throw std::invalid_argument("duplicate attribute name: " + a.name);
    if (a.kind == AttrKind::nominal && a.cardinality < 2)
      throw std::invalid_argument("nominal attribute " + a.name + " needs cardinality >= 2");
  }
  seen.clear();
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate label name: " + l);
  }
}

bool Schema::operator==(const Schema& other) const {
  if (labels_ != other.labels_) return false;
  if (attributes_.size() != other.attributes_.size()) return false;
  for (size_t i = 0; i < attributes_.size(); ++i) {
    const auto& a = attributes_[i];
    const auto& b = other.attributes_[i];
    if (a.name != b.name || a.kind != b.kind || a.cardinality != b.cardinality) return false;
  }
  return true;
}

std::optional<std::string> validate_instance(const LabeledInstance& inst, const Schema& schema) {
  const auto& attrs = schema.attributes();
  if (inst.values.size() != attrs.size()) {
    return "arity mismatch: " + std::to_string(inst.values.size()) + " values for " +
           std::to_string(attrs.size()) + " attributes";
  }
  for (size_t i = 0; i < attrs.size(); ++i) {
    const double v = inst.values[i];
    if (!std::isfinite(v)) {
      return "attribute " + std::to_string(i) + " (" + attrs[i].name + "): non-finite value";
    }
    if (attrs[i].kind == AttrKind::nominal) {
      if (v != std::floor(v) || v < 0.0 || v >= double(attrs[i].cardinality)) {
        return "attribute " + std::to_string(i) + " (" + attrs[i].name + "): nominal value " +
               std::to_string(v) + " outside cardinality " + std::to_string(attrs[i].cardinality);
      }
    }
  }
  if (inst.label < 0 || inst.label >= schema.label_count()) {
    return "label " + std::to_string(inst.label) + " outside 0.." +
           std::to_string(schema.label_count() - 1);
  }
  return std::nullopt;
}

}  // namespace driftbench
