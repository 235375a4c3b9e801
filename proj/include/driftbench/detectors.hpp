#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "driftbench/core.hpp"

namespace driftbench {

class Detector {
 public:
  virtual ~Detector() = default;
  virtual DetectorStatus update(bool correct) = 0;
  virtual void reset() = 0;
  virtual std::unique_ptr<Detector> clone_fresh() const = 0;
  virtual std::string name() const = 0;
};

// Running error statistics shared by DDM and RDDM: prediction count n, error
// rate p, s = sqrt(p (1-p) / n). The best observed pair (p_min, s_min) tracks
// each component's minimum once the warm-up count is reached.
struct DdmCore {
  long long n = 0;
  double p = 0.0;
  double s = 0.0;
  double p_min = 0.0;
  double s_min = 0.0;
  bool minima_set = false;

  void add(bool error, int min_instances) {
    ++n;
    p += ((error ? 1.0 : 0.0) - p) / double(n);
    s = std::sqrt(std::max(p * (1.0 - p), 0.0) / double(n));
    if (n >= min_instances) {
      if (!minima_set) {
        p_min = p;
        s_min = s;
        minima_set = true;
      } else {
        if (p < p_min) p_min = p;
        if (s < s_min) s_min = s;
      }
    }
  }

  void clear() { *this = DdmCore{}; }
};

struct DdmConfig {
  int min_instances = 30;  // warm-up: no signals, no minima before this
  double warn_coeff = 2.0;
  double drift_coeff = 3.0;
};

// Level thresholds p + s >= p_min + coeff * s_min per the two-threshold rule.
// Statistics reset after a drift. When warn_coeff < drift_coeff a drift is
// always announced through at least one WARNING in the same concept, so a
// single update that jumps both levels reports WARNING first.
class DdmDetector final : public Detector {
 public:
  explicit DdmDetector(const DdmConfig& config = {}) : config_(config) {}

  DetectorStatus update(bool correct) override;
  void reset() override;
  std::unique_ptr<Detector> clone_fresh() const override {
    return std::make_unique<DdmDetector>(config_);
  }
  std::string name() const override { return "ddm"; }

  const DdmCore& core() const { return core_; }
  const DdmConfig& config() const { return config_; }

 private:
  DdmConfig config_;
  DdmCore core_;
  bool warned_ = false;
};

struct RddmConfig {
  int min_instances = 129;
  double warn_coeff = 1.773;
  double drift_coeff = 2.258;
  int max_concept_size = 40000;  // recalculation trigger on stable concepts
  int min_stable_size = 7000;    // stored-prediction ring size
  int warn_limit = 1400;         // consecutive warning instances forcing drift
};

// DDM thresholds plus the reactive machinery: recent outcomes are kept in a
// ring; when a stable concept outgrows max_concept_size the statistics are
// rebuilt from the ring alone (discarding the older history), after a drift
// they are rebuilt from the instances stored since the warning began, and a
// warning that persists warn_limit instances forces a drift.
class RddmDetector final : public Detector {
 public:
  explicit RddmDetector(const RddmConfig& config = {});

  DetectorStatus update(bool correct) override;
  void reset() override;
  std::unique_ptr<Detector> clone_fresh() const override {
    return std::make_unique<RddmDetector>(config_);
  }
  std::string name() const override { return "rddm"; }

  const DdmCore& core() const { return core_; }
  const RddmConfig& config() const { return config_; }
  int stored() const { return num_stored_; }

 private:
  void rebuild_from_ring();

  RddmConfig config_;
  DdmCore core_;
  std::vector<uint8_t> ring_;
  int num_stored_ = 0;
  int first_pos_ = 0;
  int last_pos_ = -1;
  int last_warn_pos_ = -1;
  long long last_warn_inst_ = -1;
  long long inst_num_ = 0;
  bool pending_rebuild_ = false;
  bool warned_ = false;
};

/// Base learner + optional drift detector with the warning-state protocol:
/// predict with the main model, feed the outcome to the detector, train an
/// alternate model during warnings and promote it when the drift is
/// confirmed. Without a detector it behaves exactly like the bare learner.
class MonitoredLearner {
 public:
  struct Outcome {
    int prediction = kNoModel;
    DetectorStatus status = DetectorStatus::stable;
  };

  MonitoredLearner(std::unique_ptr<Learner> main, std::unique_ptr<Detector> detector,
                   bool use_alternate = true);

  Outcome process(const LabeledInstance& inst);

  const Learner& main() const { return *main_; }
  Learner* alternate() { return alternate_.get(); }
  bool warning_active() const { return warning_active_; }
  long long drift_count() const { return drift_count_; }

 private:
  std::unique_ptr<Learner> main_;
  std::unique_ptr<Learner> alternate_;
  std::unique_ptr<Detector> detector_;
  bool use_alternate_ = true;
  bool warning_active_ = false;
  long long drift_count_ = 0;
};

}  // namespace driftbench
