#include "driftbench/knn.hpp"

#include <cassert>
#include <stdexcept>

namespace driftbench {

int knn_majority(std::span<const Neighbor> candidates, int label_count) {
  if (candidates.empty()) return kNoModel;
  std::vector<int> votes(label_count, 0);
  for (const auto& n : candidates) ++votes[n.label];
  int best = 0;
  for (int l = 1; l < label_count; ++l) {
    if (votes[l] > votes[best]) best = l;  // ties keep the lowest index
  }
  return best;
}

KnnClassifier::KnnClassifier(const Schema& schema, const KnnOptions& options)
    : schema_(schema), options_(options), dims_(schema), dim_count_(schema.attribute_count()) {
  if (options_.k < 1) throw std::invalid_argument("knn: k must be >= 1");
  if (options_.window < 1) throw std::invalid_argument("knn: window must be >= 1");
  values_.resize(size_t(options_.window) * dim_count_);
  labels_.resize(options_.window);
  orders_.resize(options_.window);
}

void KnnClassifier::train(const LabeledInstance& inst) {
  assert(int(inst.values.size()) == dim_count_);
  std::copy(inst.values.begin(), inst.values.end(), values_.begin() + size_t(head_) * dim_count_);
  labels_[head_] = inst.label;
  orders_[head_] = arrivals_++;
  head_ = (head_ + 1) % options_.window;
  if (count_ < options_.window) ++count_;
}

std::vector<double> KnnClassifier::window_scales() const {
  std::vector<double> scale;
  if (!options_.normalize || count_ == 0) return scale;
  scale.assign(dim_count_, 1.0);
  const auto& attrs = schema_.attributes();
  for (int d = 0; d < dim_count_; ++d) {
    if (attrs[d].kind == AttrKind::nominal) continue;
    double lo = values_[d], hi = values_[d];
    for (int r = 1; r < count_; ++r) {
      const double v = values_[size_t(r) * dim_count_ + d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    scale[d] = hi > lo ? 1.0 / (hi - lo) : 0.0;
  }
  return scale;
}

double KnnClassifier::row_sq_distance(std::span<const double> values, int row,
                                      std::span<const double> scale) const {
  const double* r = values_.data() + size_t(row) * dim_count_;
  double acc = 0.0;
  if (scale.empty()) {
    for (const int i : dims_.squared) {
      const double d = values[i] - r[i];
      acc += d * d;
    }
  } else {
    for (const int i : dims_.squared) {
      const double d = (values[i] - r[i]) * scale[i];
      acc += d * d;
    }
  }
  for (const int i : dims_.nominal) acc += values[i] != r[i] ? 1.0 : 0.0;
  return acc;
}

void KnnClassifier::scan_rows(std::span<const double> values, int k, int begin, int end,
                              std::span<const double> scale, std::vector<Neighbor>& heap,
                              std::span<double> distances) const {
  auto worse = [](const Neighbor& a, const Neighbor& b) { return neighbor_less(a, b); };
  for (int row = begin; row < end; ++row) {
    Neighbor cand{row_sq_distance(values, row, scale), orders_[row], labels_[row]};
    if (!distances.empty()) distances[row] = cand.sq_dist;
    if (int(heap.size()) < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end(), worse);
    } else if (neighbor_less(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), worse);
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end(), worse);
    }
  }
}

std::vector<Neighbor> KnnClassifier::scan_topk_serial(std::span<const double> values, int k,
                                                      std::span<double> distances) const {
  std::vector<Neighbor> heap;
  heap.reserve(k);
  scan_rows(values, k, 0, count_, window_scales(), heap, distances);
  return heap;
}

std::vector<Neighbor> KnnClassifier::scan_topk_parallel(std::span<const double> values, int k,
                                                        std::span<double> distances) const {
#ifndef _OPENMP
  return scan_topk_serial(values, k, distances);
#else
  const auto scale = window_scales();
  const int threads = std::min(omp_get_max_threads(), std::max(1, count_ / 256));
  if (threads <= 1 || count_ <= k) return scan_topk_serial(values, k, distances);

  std::vector<std::vector<Neighbor>> partial(threads);
#pragma omp parallel num_threads(threads)
  {
    const int t = omp_get_thread_num();
    const int chunk = (count_ + threads - 1) / threads;
    const int begin = t * chunk;
    const int end = std::min(count_, begin + chunk);
    auto& heap = partial[t];
    heap.reserve(k);
    if (begin < end) scan_rows(values, k, begin, end, scale, heap, distances);
  }

  // Each chunk's local top-k contains every global top-k row of that chunk,
  // so merging and re-selecting reproduces the serial result exactly.
  std::vector<Neighbor> merged;
  for (auto& p : partial) merged.insert(merged.end(), p.begin(), p.end());
  std::sort(merged.begin(), merged.end(), neighbor_less);
  if (int(merged.size()) > k) merged.resize(k);
  return merged;
#endif
}

std::vector<Neighbor> KnnClassifier::scan_topk(std::span<const double> values, int k,
                                               std::span<double> distances) const {
  return options_.parallel_scan ? scan_topk_parallel(values, k, distances)
                                : scan_topk_serial(values, k, distances);
}

int KnnClassifier::classify(std::span<const double> values) const {
  if (count_ == 0) return kNoModel;
  if (!options_.boundary_ties) {
    const auto neighbors = scan_topk(values, options_.k);
    return knn_majority(neighbors, schema_.label_count());
  }
  std::vector<double> distances(count_);
  const auto neighbors = scan_topk(values, options_.k, distances);
  double kth = 0.0;
  for (const auto& n : neighbors) kth = std::max(kth, n.sq_dist);
  std::vector<int> votes(schema_.label_count(), 0);
  for (int row = 0; row < count_; ++row) {
    if (distances[row] <= kth) ++votes[labels_[row]];
  }
  int best = 0;
  for (int l = 1; l < schema_.label_count(); ++l) {
    if (votes[l] > votes[best]) best = l;
  }
  return best;
}

void KnnClassifier::reset() {
  head_ = 0;
  count_ = 0;
  arrivals_ = 0;
}

std::unique_ptr<Learner> KnnClassifier::clone_untrained() const {
  return std::make_unique<KnnClassifier>(schema_, options_);
}

std::string KnnClassifier::name() const {
  return "knn_k" + std::to_string(options_.k) + "_w" + std::to_string(options_.window);
}

std::vector<LabeledInstance> KnnClassifier::window_snapshot() const {
  std::vector<LabeledInstance> out;
  out.reserve(count_);
  const int start = count_ < options_.window ? 0 : head_;
  for (int i = 0; i < count_; ++i) {
    const int row = (start + i) % options_.window;
    LabeledInstance inst;
    inst.values.assign(values_.begin() + size_t(row) * dim_count_,
                       values_.begin() + size_t(row + 1) * dim_count_);
    inst.label = labels_[row];
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace driftbench
