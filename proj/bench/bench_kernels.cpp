// Kernel and learner throughput comparison: serial vs OpenMP window scan for
// the k-NN classifier, plus per-instance train/classify costs of the three
// learners on representative schemas.

#include <chrono>
#include <cstdio>
#include <vector>

#include "driftbench/drift.hpp"
#include "driftbench/experiment.hpp"
#include "driftbench/hoeffding_tree.hpp"
#include "driftbench/knn.hpp"
#include "driftbench/naive_bayes.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace driftbench;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Schema numeric_schema(int dims) {
  std::vector<AttributeSpec> attrs;
  for (int i = 0; i < dims; ++i) attrs.push_back({"a" + std::to_string(i), AttrKind::numeric, 0});
  return Schema(std::move(attrs), {"l0", "l1"});
}

void bench_scan(int window, int dims, int k) {
  const Schema schema = numeric_schema(dims);
  KnnClassifier knn(schema, {.k = k, .window = window});
  Rng rng(1);
  LabeledInstance inst;
  inst.values.resize(dims);
  for (int i = 0; i < window; ++i) {
    for (auto& v : inst.values) v = rng.next_double();
    inst.label = rng.next_int(2);
    knn.train(inst);
  }

  std::vector<std::vector<double>> queries(512, std::vector<double>(dims));
  for (auto& q : queries)
    for (auto& v : q) v = rng.next_double();

  long long sink = 0;
  auto t0 = Clock::now();
  for (int rep = 0; rep < 20; ++rep)
    for (const auto& q : queries) sink += knn.scan_topk_serial(q, k).size();
  const double serial = seconds_since(t0) / (20.0 * queries.size());

  t0 = Clock::now();
  for (int rep = 0; rep < 20; ++rep)
    for (const auto& q : queries) sink += knn.scan_topk_parallel(q, k).size();
  const double parallel = seconds_since(t0) / (20.0 * queries.size());

  std::printf("  w=%-5d d=%-3d k=%-3d   serial %8.2f us   parallel %8.2f us   speedup %5.2fx\n",
              window, dims, k, serial * 1e6, parallel * 1e6, serial / parallel);
  if (sink == 42) std::printf("!");  // keep the scans alive
}

void bench_learner(const char* name, Learner& learner, StreamSource& source, long long n) {
  LabeledInstance inst;
  long long sink = 0;
  const auto t0 = Clock::now();
  for (long long i = 0; i < n; ++i) {
    source.next(inst);
    sink += learner.classify(inst.values) >= 0;
    learner.train(inst);
  }
  const double per = seconds_since(t0) / double(n);
  std::printf("  %-18s %8.2f us/instance  (%lld predictions)\n", name, per * 1e6, sink);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP max threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; parallel scan falls back to serial\n");
#endif

  std::printf("\nk-NN window scan, serial vs parallel (identical results by construction):\n");
  for (const int w : {600, 1000, 1600}) bench_scan(w, 2, 5);
  for (const int w : {600, 1000, 1600}) bench_scan(w, 40, 40);

  std::printf("\nlearner throughput on sine (2 numeric attributes), 50K instances:\n");
  {
    const auto plan = build_plan(DatasetId::sine, DriftKind::abrupt, 50000, 1, {});
    const Schema schema = schema_for(plan.concepts[0]);
    NaiveBayes nb(schema);
    HoeffdingTree ht(schema, {});
    KnnClassifier knn(schema, {.k = 5, .window = 1000});
    auto s1 = compose(plan, 1);
    bench_learner("nb", nb, *s1, 50000);
    auto s2 = compose(plan, 1);
    bench_learner("ht", ht, *s2, 50000);
    auto s3 = compose(plan, 1);
    bench_learner("knn k5 w1000", knn, *s3, 50000);
  }

  std::printf("\nlearner throughput on led (24 binary attributes), 20K instances:\n");
  {
    const auto plan = build_plan(DatasetId::led, DriftKind::abrupt, 20000, 1, {});
    const Schema schema = schema_for(plan.concepts[0]);
    NaiveBayes nb(schema);
    HoeffdingTree ht(schema, {});
    KnnClassifier knn(schema, {.k = 40, .window = 1000});
    auto s1 = compose(plan, 1);
    bench_learner("nb", nb, *s1, 20000);
    auto s2 = compose(plan, 1);
    bench_learner("ht", ht, *s2, 20000);
    auto s3 = compose(plan, 1);
    bench_learner("knn k40 w1000", knn, *s3, 20000);
  }
  return 0;
}
