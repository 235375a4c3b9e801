#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "driftbench/core.hpp"
#include "driftbench/detectors.hpp"

namespace driftbench {

struct PrequentialConfig {
  int window = 1000;        // sliding loss window
  long long total = 0;      // instance budget
  int record_every = 1000;  // sampling stride for the accuracy curve
  bool mean_over_samples = true;  // false: mean_acc reports only the final window
};

struct RunIds {
  std::string generator;  // agraw1, led, ...
  std::string drift;      // abrupt | gradual
  long long size = 0;
  std::string learner;    // nb | ht | knn
  std::string detector;   // none | ddm | rddm
  int k = 0;              // knn only, 0 otherwise
  int w = 0;
  uint64_t seed = 0;
};

struct RunRecord {
  RunIds ids;
  double mean_acc = 0.0;   // percent
  double final_acc = 0.0;  // percent
  double wall_time_s = 0.0;
  long long drift_events = 0;
};

struct CurvePoint {
  long long t;
  double acc;  // percent, sliding window
};

struct DriftEvent {
  long long t;
  DetectorStatus status;  // warning or drift
};

/// Test-then-train pass over cfg.total instances: classify, record the 0/1
/// loss, then train. Sliding accuracy covers the last min(t, window)
/// instances; mean_acc averages the samples taken every record_every
/// instances (plus the final partial stride). A "no model yet" prediction
/// counts as a loss. Throws std::runtime_error if the source exhausts early.
RunRecord prequential_run(StreamSource& source, MonitoredLearner& learner,
                          const PrequentialConfig& cfg, std::vector<CurvePoint>* curve = nullptr,
                          std::vector<DriftEvent>* drift_log = nullptr);

struct Aggregate {
  double mean = 0.0;
  double ci95_halfwidth = 0.0;  // Student t, 95% two-sided
  int n = 0;
};

/// Mean and 95% CI half-width t_{0.975, n-1} * s / sqrt(n); needs n >= 2.
Aggregate aggregate(std::span<const double> values);

}  // namespace driftbench
