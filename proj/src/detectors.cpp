#include "driftbench/detectors.hpp"

namespace driftbench {

// ------------------------------------------------------------------- DDM

DetectorStatus DdmDetector::update(bool correct) {
  core_.add(!correct, config_.min_instances);
  if (core_.n < config_.min_instances) return DetectorStatus::stable;
  const double level = core_.p + core_.s;
  const bool over_drift = level > core_.p_min + config_.drift_coeff * core_.s_min;
  const bool over_warn = over_drift || level > core_.p_min + config_.warn_coeff * core_.s_min;
  if (over_drift && (warned_ || config_.warn_coeff >= config_.drift_coeff)) {
    reset();
    return DetectorStatus::drift;
  }
  if (over_warn) {
    warned_ = true;
    return DetectorStatus::warning;
  }
  warned_ = false;
  return DetectorStatus::stable;
}

void DdmDetector::reset() {
  core_.clear();
  warned_ = false;
}

// ------------------------------------------------------------------- RDDM

RddmDetector::RddmDetector(const RddmConfig& config) : config_(config) {
  ring_.assign(config_.min_stable_size, 0);
}

void RddmDetector::reset() {
  core_.clear();
  ring_.assign(config_.min_stable_size, 0);
  num_stored_ = 0;
  first_pos_ = 0;
  last_pos_ = -1;
  last_warn_pos_ = -1;
  last_warn_inst_ = -1;
  inst_num_ = 0;
  pending_rebuild_ = false;
  warned_ = false;
}

void RddmDetector::rebuild_from_ring() {
  core_.clear();
  warned_ = false;
  if (last_warn_pos_ != -1) {
    // Keep only what arrived since the warning began.
    first_pos_ = last_warn_pos_;
    num_stored_ = last_pos_ - first_pos_ + 1;
    if (num_stored_ <= 0) num_stored_ += config_.min_stable_size;
  }
  int pos = first_pos_;
  for (int i = 0; i < num_stored_; ++i) {
    core_.add(ring_[pos] != 0, config_.min_instances);
    pos = (pos + 1) % config_.min_stable_size;
  }
  last_warn_pos_ = -1;
  last_warn_inst_ = -1;
  pending_rebuild_ = false;
}

DetectorStatus RddmDetector::update(bool correct) {
  if (pending_rebuild_) rebuild_from_ring();

  const bool error = !correct;
  last_pos_ = (last_pos_ + 1) % config_.min_stable_size;
  ring_[last_pos_] = error ? 1 : 0;
  if (num_stored_ < config_.min_stable_size) {
    ++num_stored_;
  } else {
    first_pos_ = (first_pos_ + 1) % config_.min_stable_size;
    if (last_warn_pos_ == last_pos_) last_warn_pos_ = -1;
  }

  core_.add(error, config_.min_instances);
  ++inst_num_;
  if (core_.n < config_.min_instances) return DetectorStatus::stable;

  const double level = core_.p + core_.s;
  const bool over_drift = level > core_.p_min + config_.drift_coeff * core_.s_min;
  const bool over_warn = over_drift || level > core_.p_min + config_.warn_coeff * core_.s_min;

  if (over_drift && (warned_ || config_.warn_coeff >= config_.drift_coeff)) {
    pending_rebuild_ = true;
    if (last_warn_inst_ == -1) {
      // Drift without a preceding warning: keep only the newest outcome.
      first_pos_ = last_pos_;
      num_stored_ = 1;
    }
    return DetectorStatus::drift;
  }

  if (over_warn) {
    if (last_warn_inst_ != -1 && last_warn_inst_ + config_.warn_limit <= inst_num_) {
      // Forced drift: the warning has persisted for warn_limit instances.
      pending_rebuild_ = true;
      return DetectorStatus::drift;
    }
    warned_ = true;
    if (last_warn_inst_ == -1) {
      last_warn_inst_ = inst_num_;
      last_warn_pos_ = last_pos_;
    }
    return DetectorStatus::warning;
  }

  last_warn_inst_ = -1;
  last_warn_pos_ = -1;
  warned_ = false;
  if (core_.n > config_.max_concept_size) {
    // Concept got long while stable: silently rebuild from the stored tail so
    // old instances stop dominating p and s.
    pending_rebuild_ = true;
  }
  return DetectorStatus::stable;
}

// ------------------------------------------------------- monitored learner

MonitoredLearner::MonitoredLearner(std::unique_ptr<Learner> main,
                                   std::unique_ptr<Detector> detector, bool use_alternate)
    : main_(std::move(main)), detector_(std::move(detector)), use_alternate_(use_alternate) {}

MonitoredLearner::Outcome MonitoredLearner::process(const LabeledInstance& inst) {
  Outcome out;
  out.prediction = main_->classify(inst.values);
  if (!detector_) {
    main_->train(inst);
    return out;
  }
  out.status = detector_->update(out.prediction == inst.label);
  switch (out.status) {
    case DetectorStatus::drift:
      ++drift_count_;
      if (alternate_) {
        main_ = std::move(alternate_);
      } else {
        main_ = main_->clone_untrained();
      }
      warning_active_ = false;
      break;
    case DetectorStatus::warning:
      if (use_alternate_) {
        if (!warning_active_) alternate_ = main_->clone_untrained();
        alternate_->train(inst);
        warning_active_ = true;
      }
      break;
    case DetectorStatus::stable:
      if (warning_active_) {
        alternate_.reset();
        warning_active_ = false;
      }
      break;
  }
  main_->train(inst);
  return out;
}

}  // namespace driftbench
