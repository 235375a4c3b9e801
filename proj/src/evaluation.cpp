#include "driftbench/evaluation.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "driftbench/dist.hpp"

namespace driftbench {

RunRecord prequential_run(StreamSource& source, MonitoredLearner& learner,
                          const PrequentialConfig& cfg, std::vector<CurvePoint>* curve,
                          std::vector<DriftEvent>* drift_log) {
  if (cfg.window < 1) throw std::invalid_argument("prequential: window must be >= 1");
  if (cfg.record_every < 1) throw std::invalid_argument("prequential: record_every must be >= 1");
  if (cfg.total < 1) throw std::invalid_argument("prequential: total must be >= 1");

  std::vector<uint8_t> losses(cfg.window, 0);
  long long window_losses = 0;
  double sample_sum = 0.0;
  long long sample_count = 0;
  LabeledInstance inst;

  const auto start = std::chrono::steady_clock::now();
  RunRecord record;
  double sliding = 0.0;
  for (long long t = 1; t <= cfg.total; ++t) {
    if (!source.next(inst))
      throw std::runtime_error("stream exhausted at instance " + std::to_string(t) + " of " +
                               std::to_string(cfg.total));
    const auto outcome = learner.process(inst);
    const uint8_t loss = outcome.prediction == inst.label ? 0 : 1;

    const int slot = int((t - 1) % cfg.window);
    if (t > cfg.window) window_losses -= losses[slot];
    losses[slot] = loss;
    window_losses += loss;

    if (outcome.status != DetectorStatus::stable) {
      if (outcome.status == DetectorStatus::drift) ++record.drift_events;
      if (drift_log) drift_log->push_back({t, outcome.status});
    }

    const long long covered = std::min(t, (long long)cfg.window);
    sliding = 1.0 - double(window_losses) / double(covered);
    if (t % cfg.record_every == 0 || t == cfg.total) {
      sample_sum += sliding;
      ++sample_count;
      if (curve) curve->push_back({t, 100.0 * sliding});
    }
  }
  const auto stop = std::chrono::steady_clock::now();

  record.final_acc = 100.0 * sliding;
  record.mean_acc =
      cfg.mean_over_samples ? 100.0 * sample_sum / double(sample_count) : record.final_acc;
  record.wall_time_s = std::chrono::duration<double>(stop - start).count();
  return record;
}

Aggregate aggregate(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("aggregate needs at least two records");
  const int n = int(values.size());
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  const double stddev = std::sqrt(ss / double(n - 1));
  const double t = student_t_quantile(0.975, double(n - 1));
  return {mean, t * stddev / std::sqrt(double(n)), n};
}

}  // namespace driftbench
