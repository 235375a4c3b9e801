#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftbench/drift.hpp"
#include "driftbench/evaluation.hpp"
#include "driftbench/hoeffding_tree.hpp"
#include "driftbench/knn.hpp"

namespace driftbench {

enum class DatasetId : uint8_t { agraw1, agraw2, led, mixed, randrbf, sine, wavef };
enum class LearnerKind : uint8_t { nb, ht, knn };
enum class DetectorKind : uint8_t { none, ddm, rddm };

std::string to_string(DatasetId id);
std::string to_string(LearnerKind k);
std::string to_string(DetectorKind k);
std::optional<DatasetId> parse_dataset(const std::string& s);
std::optional<LearnerKind> parse_learner(const std::string& s);
std::optional<DetectorKind> parse_detector(const std::string& s);
std::optional<DriftKind> parse_drift_kind(const std::string& s);

/// Every tunable of the stream families, overridable from the config file.
struct GeneratorDefaults {
  double agrawal_flip = 0.10;
  double led_invert = 0.10;
  // Swapped attribute positions per concept: concept i exchanges the first
  // swaps[i] relevant slots with the same number of noise slots.
  std::vector<int> led_swaps = {0, 1, 3, 4, 6};
  std::vector<int> wavef_swaps = {0, 1, 3, 5, 7};
  SineVariant sine_variant = SineVariant::sine1;
  double sine_x_min = 0.0, sine_x_max = 6.283185307179586476925286766559;
  double sine_y_min = -1.0, sine_y_max = 1.0;
  int gradual_width = 500;
  bool gradual_centered = true;
};

/// The paper-protocol stream for one dataset: five concepts with four drifts
/// at regular intervals. The run seed reseeds everything stochastic.
DriftPlan build_plan(DatasetId dataset, DriftKind kind, long long size, uint64_t run_seed,
                     const GeneratorDefaults& gen = {});

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  uint64_t base_seed = 1;
  int repetitions = 1;
  std::string out_dir = "results";
  long long size_cap = 100000;  // raise only via --large

  struct StreamSpec {
    DatasetId dataset = DatasetId::mixed;
    DriftKind kind = DriftKind::abrupt;
    std::vector<long long> sizes = {10000};
  };
  std::vector<StreamSpec> streams;

  std::vector<LearnerKind> learners = {LearnerKind::nb};
  std::vector<int> ks = {5};
  std::vector<int> ws = {1000};
  std::vector<DetectorKind> detectors = {DetectorKind::none};

  KnnOptions knn;
  HtConfig ht;
  DdmConfig ddm;
  RddmConfig rddm;
  PrequentialConfig eval;
  GeneratorDefaults gen;
};

/// Parses the flat key = value format with repeated [section] blocks.
/// Unknown keys raise ConfigError naming the key.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

struct Task {
  DatasetId dataset;
  DriftKind kind;
  long long size;
  LearnerKind learner;
  DetectorKind detector;
  int k = 0, w = 0;
  int rep = 0;
  uint64_t seed = 0;

  RunIds ids() const;
};

std::vector<Task> expand_grid(const ExperimentConfig& cfg);

/// Primary key of a run: every id field joined with '|'.
std::string task_key(const RunIds& ids);

struct FailureRow {
  RunIds ids;
  std::string error;
};

struct GridOutcome {
  std::vector<RunRecord> records;
  std::vector<FailureRow> failures;
  int skipped = 0;  // rows already present before the run
};

/// Runs the grid with an OpenMP worker pool. Each worker owns its stream,
/// learner and detector end to end; rows append to <out_dir>/results.csv as
/// they finish and the file is rewritten in canonical order at the end.
/// Failures go to <out_dir>/failures.csv and never abort the grid. Rows whose
/// identity is already present are skipped (resume).
GridOutcome run_grid(const ExperimentConfig& cfg, int workers, std::ostream* progress = nullptr);

std::unique_ptr<Learner> make_learner(const Task& task, const ExperimentConfig& cfg,
                                      const Schema& schema);
std::unique_ptr<Detector> make_detector(DetectorKind kind, const ExperimentConfig& cfg);

// results.csv column order (fixed):
// generator,drift,size,learner,detector,k,w,seed,mean_acc,final_acc,wall_time_s,drift_events
void write_results_csv(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_results_csv(const std::string& path);
void append_result_row(const std::string& path, const RunRecord& record);
std::string result_row(const RunRecord& record);

/// Composed stream CSV: header of attribute names plus "class"; numerics with
/// six decimals, nominals and the class as indices.
void write_stream_csv(StreamSource& source, long long count, std::ostream& out);

}  // namespace driftbench
