#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "driftbench/core.hpp"

namespace driftbench {

// Attribute layout used by the distance kernels. Binary nominal slots go into
// the squared-difference loop: for 0/1 values the squared difference equals
// the 0/1 mismatch metric, and a branch-free loop vectorizes.
struct DimSplit {
  std::vector<int> squared;  // numeric + binary nominal slots
  std::vector<int> nominal;  // nominal slots with cardinality > 2

  explicit DimSplit(const Schema& schema) {
    const auto& attrs = schema.attributes();
    for (int i = 0; i < int(attrs.size()); ++i) {
      if (attrs[i].kind == AttrKind::nominal && attrs[i].cardinality > 2)
        nominal.push_back(i);
      else
        squared.push_back(i);
    }
  }
};

/// Squared distance under the mixed metric: squared difference on numeric
/// slots, 0/1 mismatch on nominal slots.
inline double sq_distance(std::span<const double> a, std::span<const double> b,
                          const DimSplit& dims) {
  double acc = 0.0;
  for (const int i : dims.squared) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  for (const int i : dims.nominal) acc += a[i] != b[i] ? 1.0 : 0.0;
  return acc;
}

/// Euclidean distance over the schema: sqrt of summed squared differences,
/// nominal slots contributing 1 per mismatch. Throws on arity mismatch.
inline double euclidean(std::span<const double> a, std::span<const double> b,
                        const Schema& schema) {
  if (a.size() != b.size() || int(a.size()) != schema.attribute_count())
    throw std::invalid_argument("euclidean: arity mismatch");
  double acc = 0.0;
  const auto& attrs = schema.attributes();
  for (size_t i = 0; i < a.size(); ++i) {
    if (attrs[i].kind == AttrKind::nominal) {
      acc += a[i] != b[i] ? 1.0 : 0.0;
    } else {
      const double d = a[i] - b[i];
      acc += d * d;
    }
  }
  return std::sqrt(acc);
}

}  // namespace driftbench
