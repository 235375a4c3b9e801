#pragma once

#include <algorithm>
#include <cstdint>

#include "driftbench/core.hpp"
#include "driftbench/distance.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace driftbench {

struct KnnOptions {
  int k = 5;
  int window = 1000;
  bool normalize = false;      // per-window min-max rescale of numeric slots
  bool parallel_scan = false;  // OpenMP window scan; results identical to serial
  // Vote over every instance tied with the k-th distance (matters on integer
  // metrics where boundary ties are common). false restricts the vote to the
  // k heap residents.
  bool boundary_ties = true;
};

// One window neighbor candidate. Ordering for the bounded heap and all tie
// rules is lexicographic on (sq_dist, order): at equal distance the earlier
// arrival keeps heap residency.
struct Neighbor {
  double sq_dist;
  long long order;  // arrival counter, monotone over the stream
  int label;
};

inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
  return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.order < b.order);
}

/// Majority label among candidates; ties break to the lowest label index.
int knn_majority(std::span<const Neighbor> candidates, int label_count);

/// Sliding-window k-NN: O(1) train into a FIFO ring, classification scans the
/// window once keeping the k nearest in a bounded max-heap.
class KnnClassifier final : public Learner {
 public:
  KnnClassifier(const Schema& schema, const KnnOptions& options);

  void train(const LabeledInstance& inst) override;
  int classify(std::span<const double> values) const override;
  void reset() override;
  std::unique_ptr<Learner> clone_untrained() const override;
  std::string name() const override;

  int size() const { return count_; }
  const KnnOptions& options() const { return options_; }
  /// Window contents oldest-first (testing/diagnostics).
  std::vector<LabeledInstance> window_snapshot() const;

  /// The k nearest window rows under the (sq_dist, order) rule, unsorted.
  /// With `distances` given (size >= window rows) every row's squared
  /// distance is also written out for the boundary-tie vote.
  std::vector<Neighbor> scan_topk(std::span<const double> values, int k,
                                  std::span<double> distances = {}) const;
  std::vector<Neighbor> scan_topk_serial(std::span<const double> values, int k,
                                         std::span<double> distances = {}) const;
  std::vector<Neighbor> scan_topk_parallel(std::span<const double> values, int k,
                                           std::span<double> distances = {}) const;

 private:
  double row_sq_distance(std::span<const double> values, int row,
                         std::span<const double> scale) const;
  void scan_rows(std::span<const double> values, int k, int begin, int end,
                 std::span<const double> scale, std::vector<Neighbor>& heap,
                 std::span<double> distances) const;
  // Numeric rescale factors for the current window (1/(max-min), 0 when the
  // range collapses); empty span when normalization is off.
  std::vector<double> window_scales() const;

  Schema schema_;
  KnnOptions options_;
  DimSplit dims_;
  int dim_count_ = 0;
  // Flat ring storage: row r occupies values_[r*dim_count_ .. +dim_count_).
  std::vector<double> values_;
  std::vector<int> labels_;
  std::vector<long long> orders_;
  int head_ = 0;  // next slot to overwrite
  int count_ = 0;
  long long arrivals_ = 0;
};

}  // namespace driftbench
