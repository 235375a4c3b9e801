#include "driftbench/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace driftbench {

namespace {

constexpr uint64_t kRbfTableStream = 0x7b1;
constexpr uint64_t kRbfCenterStream = 0xce0;

std::array<int, 24> led_permutation(int swaps) {
  auto p = identity_permutation<24>();
  for (int j = 0; j < swaps; ++j) std::swap(p[j], p[7 + j]);
  return p;
}

std::array<int, 40> wavef_permutation(int swaps) {
  auto p = identity_permutation<40>();
  for (int j = 0; j < swaps; ++j) std::swap(p[j], p[21 + j]);
  return p;
}

}  // namespace

std::string to_string(DatasetId id) {
  switch (id) {
    case DatasetId::agraw1: return "agraw1";
    case DatasetId::agraw2: return "agraw2";
    case DatasetId::led: return "led";
    case DatasetId::mixed: return "mixed";
    case DatasetId::randrbf: return "randrbf";
    case DatasetId::sine: return "sine";
    case DatasetId::wavef: return "wavef";
  }
  return "?";
}

std::string to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::nb: return "nb";
    case LearnerKind::ht: return "ht";
    case LearnerKind::knn: return "knn";
  }
  return "?";
}

std::string to_string(DetectorKind k) {
  switch (k) {
    case DetectorKind::none: return "none";
    case DetectorKind::ddm: return "ddm";
    case DetectorKind::rddm: return "rddm";
  }
  return "?";
}

std::optional<DatasetId> parse_dataset(const std::string& s) {
  for (const auto id : {DatasetId::agraw1, DatasetId::agraw2, DatasetId::led, DatasetId::mixed,
                        DatasetId::randrbf, DatasetId::sine, DatasetId::wavef}) {
    if (s == to_string(id)) return id;
  }
  return std::nullopt;
}

std::optional<LearnerKind> parse_learner(const std::string& s) {
  for (const auto k : {LearnerKind::nb, LearnerKind::ht, LearnerKind::knn}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<DetectorKind> parse_detector(const std::string& s) {
  for (const auto k : {DetectorKind::none, DetectorKind::ddm, DetectorKind::rddm}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<DriftKind> parse_drift_kind(const std::string& s) {
  if (s == "abrupt") return DriftKind::abrupt;
  if (s == "gradual") return DriftKind::gradual;
  return std::nullopt;
}

// ------------------------------------------------------------------ plans

DriftPlan build_plan(DatasetId dataset, DriftKind kind, long long size, uint64_t run_seed,
                     const GeneratorDefaults& gen) {
  DriftPlan plan;
  plan.total = size;
  plan.kind = kind;
  plan.width = gen.gradual_width;
  plan.centered = gen.gradual_centered;

  auto swaps_for = [](const std::vector<int>& swaps, int i) {
    return swaps.empty() ? 0 : swaps[size_t(i) % swaps.size()];
  };

  for (int i = 0; i < 5; ++i) {
    ConceptConfig c;
    switch (dataset) {
      case DatasetId::agraw1:
        c = agrawal_concept(1 + i, uint64_t(i), gen.agrawal_flip);
        break;
      case DatasetId::agraw2:
        c = agrawal_concept(6 + i, uint64_t(i), gen.agrawal_flip);
        break;
      case DatasetId::led:
        c = led_concept(led_permutation(swaps_for(gen.led_swaps, i)), uint64_t(i),
                        gen.led_invert);
        break;
      case DatasetId::mixed:
        c = mixed_concept(i % 2 == 1, uint64_t(i));
        break;
      case DatasetId::randrbf:
        // Fresh centers per concept; labels, weights and stddevs persist.
        c = randrbf_concept(mix_seed(run_seed, kRbfTableStream),
                            mix_seed(run_seed, kRbfCenterStream + uint64_t(i)), uint64_t(i));
        break;
      case DatasetId::sine: {
        c = sine_concept(gen.sine_variant, i % 2 == 1, uint64_t(i));
        auto& p = std::get<SineParams>(c.params);
        if (gen.sine_variant == SineVariant::sine1) {
          p.x_min = gen.sine_x_min;
          p.x_max = gen.sine_x_max;
          p.y_min = gen.sine_y_min;
          p.y_max = gen.sine_y_max;
        }
        break;
      }
      case DatasetId::wavef:
        c = waveform_concept(wavef_permutation(swaps_for(gen.wavef_swaps, i)), uint64_t(i));
        break;
    }
    plan.concepts.push_back(std::move(c));
  }
  return plan;
}

// ------------------------------------------------------------------ config

namespace {

struct RawConfig {
  // section -> list of (key, value) in order; section "" is the top level
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

RawConfig read_raw(std::istream& in) {
  RawConfig raw;
  raw.sections.push_back({"", {}});
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      raw.sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    raw.sections.back().second.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return raw;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long parse_ll(const std::string& section, const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config key '" + (section.empty() ? key : section + "." + key) +
                      "': not an integer: " + value);
  }
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config key '" + (section.empty() ? key : section + "." + key) +
                      "': not a number: " + value);
  }
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + (section.empty() ? key : section + "." + key) +
                    "': not a boolean: " + value);
}

[[noreturn]] void unknown_key(const std::string& section, const std::string& key) {
  throw ConfigError("unknown config key '" + (section.empty() ? key : section + "." + key) + "'");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  const RawConfig raw = read_raw(in);
  ExperimentConfig cfg;
  cfg.streams.clear();
  cfg.learners.clear();
  cfg.ks.clear();
  cfg.ws.clear();
  cfg.detectors.clear();

  for (const auto& [section, entries] : raw.sections) {
    if (section == "stream") cfg.streams.emplace_back();
    for (const auto& [key, value] : entries) {
      if (section.empty()) {
        if (key == "base_seed") cfg.base_seed = uint64_t(parse_ll(section, key, value));
        else if (key == "repetitions") cfg.repetitions = int(parse_ll(section, key, value));
        else if (key == "out") cfg.out_dir = value;
        else unknown_key(section, key);
      } else if (section == "stream") {
        auto& spec = cfg.streams.back();
        if (key == "dataset") {
          const auto ds = parse_dataset(value);
          if (!ds) throw ConfigError("config key 'stream.dataset': unknown dataset " + value);
          spec.dataset = *ds;
        } else if (key == "kind") {
          const auto kind = parse_drift_kind(value);
          if (!kind) throw ConfigError("config key 'stream.kind': unknown drift kind " + value);
          spec.kind = *kind;
        } else if (key == "sizes") {
          spec.sizes.clear();
          for (const auto& s : split_list(value)) spec.sizes.push_back(parse_ll(section, key, s));
        } else {
          unknown_key(section, key);
        }
      } else if (section == "grid") {
        if (key == "learners") {
          for (const auto& s : split_list(value)) {
            const auto l = parse_learner(s);
            if (!l) throw ConfigError("config key 'grid.learners': unknown learner " + s);
            cfg.learners.push_back(*l);
          }
        } else if (key == "ks") {
          for (const auto& s : split_list(value)) cfg.ks.push_back(int(parse_ll(section, key, s)));
        } else if (key == "ws") {
          for (const auto& s : split_list(value)) cfg.ws.push_back(int(parse_ll(section, key, s)));
        } else if (key == "detectors") {
          for (const auto& s : split_list(value)) {
            const auto d = parse_detector(s);
            if (!d) throw ConfigError("config key 'grid.detectors': unknown detector " + s);
            cfg.detectors.push_back(*d);
          }
        } else {
          unknown_key(section, key);
        }
      } else if (section == "knn") {
        if (key == "normalize") cfg.knn.normalize = parse_bool(section, key, value);
        else if (key == "parallel_scan") cfg.knn.parallel_scan = parse_bool(section, key, value);
        else unknown_key(section, key);
      } else if (section == "ht") {
        if (key == "grace") cfg.ht.grace = int(parse_ll(section, key, value));
        else if (key == "delta") cfg.ht.delta = parse_double(section, key, value);
        else if (key == "tie") cfg.ht.tie = parse_double(section, key, value);
        else if (key == "numeric_candidates")
          cfg.ht.numeric_candidates = int(parse_ll(section, key, value));
        else if (key == "nb_leaves") cfg.ht.nb_leaves = parse_bool(section, key, value);
        else unknown_key(section, key);
      } else if (section == "ddm") {
        if (key == "min_instances") cfg.ddm.min_instances = int(parse_ll(section, key, value));
        else if (key == "warn_coeff") cfg.ddm.warn_coeff = parse_double(section, key, value);
        else if (key == "drift_coeff") cfg.ddm.drift_coeff = parse_double(section, key, value);
        else unknown_key(section, key);
      } else if (section == "rddm") {
        if (key == "min_instances") cfg.rddm.min_instances = int(parse_ll(section, key, value));
        else if (key == "warn_coeff") cfg.rddm.warn_coeff = parse_double(section, key, value);
        else if (key == "drift_coeff") cfg.rddm.drift_coeff = parse_double(section, key, value);
        else if (key == "max_concept_size")
          cfg.rddm.max_concept_size = int(parse_ll(section, key, value));
        else if (key == "min_stable_size")
          cfg.rddm.min_stable_size = int(parse_ll(section, key, value));
        else if (key == "warn_limit") cfg.rddm.warn_limit = int(parse_ll(section, key, value));
        else unknown_key(section, key);
      } else if (section == "evaluation") {
        if (key == "window") cfg.eval.window = int(parse_ll(section, key, value));
        else if (key == "record_every") cfg.eval.record_every = int(parse_ll(section, key, value));
        else if (key == "mean_over_samples")
          cfg.eval.mean_over_samples = parse_bool(section, key, value);
        else unknown_key(section, key);
      } else if (section == "generators") {
        if (key == "agrawal_flip") cfg.gen.agrawal_flip = parse_double(section, key, value);
        else if (key == "led_invert") cfg.gen.led_invert = parse_double(section, key, value);
        else if (key == "led_swaps") {
          cfg.gen.led_swaps.clear();
          for (const auto& s : split_list(value))
            cfg.gen.led_swaps.push_back(int(parse_ll(section, key, s)));
        } else if (key == "wavef_swaps") {
          cfg.gen.wavef_swaps.clear();
          for (const auto& s : split_list(value))
            cfg.gen.wavef_swaps.push_back(int(parse_ll(section, key, s)));
        } else if (key == "sine_variant") {
          if (value == "sine1") cfg.gen.sine_variant = SineVariant::sine1;
          else if (value == "sine2") cfg.gen.sine_variant = SineVariant::sine2;
          else throw ConfigError("config key 'generators.sine_variant': " + value);
        } else if (key == "sine_x_min") cfg.gen.sine_x_min = parse_double(section, key, value);
        else if (key == "sine_x_max") cfg.gen.sine_x_max = parse_double(section, key, value);
        else if (key == "sine_y_min") cfg.gen.sine_y_min = parse_double(section, key, value);
        else if (key == "sine_y_max") cfg.gen.sine_y_max = parse_double(section, key, value);
        else if (key == "gradual_width") cfg.gen.gradual_width = int(parse_ll(section, key, value));
        else if (key == "gradual_centered")
          cfg.gen.gradual_centered = parse_bool(section, key, value);
        else unknown_key(section, key);
      } else {
        throw ConfigError("unknown config section '" + section + "'");
      }
    }
  }

  if (cfg.streams.empty()) throw ConfigError("config needs at least one [stream] section");
  if (cfg.learners.empty()) throw ConfigError("config key 'grid.learners': grid is empty");
  if (cfg.repetitions < 1) throw ConfigError("config key 'repetitions': must be >= 1");
  const bool has_knn =
      std::find(cfg.learners.begin(), cfg.learners.end(), LearnerKind::knn) != cfg.learners.end();
  if (has_knn && (cfg.ks.empty() || cfg.ws.empty()))
    throw ConfigError("config keys 'grid.ks'/'grid.ws': required when knn is in the grid");
  if (cfg.detectors.empty()) cfg.detectors.push_back(DetectorKind::none);
  for (const auto& spec : cfg.streams) {
    if (spec.sizes.empty()) throw ConfigError("config key 'stream.sizes': must not be empty");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

// ------------------------------------------------------------------- grid

RunIds Task::ids() const {
  RunIds ids;
  ids.generator = to_string(dataset);
  ids.drift = kind == DriftKind::abrupt ? "abrupt" : "gradual";
  ids.size = size;
  ids.learner = to_string(learner);
  ids.detector = to_string(detector);
  ids.k = k;
  ids.w = w;
  ids.seed = seed;
  return ids;
}

std::vector<Task> expand_grid(const ExperimentConfig& cfg) {
  std::vector<Task> tasks;
  for (const auto& spec : cfg.streams) {
    for (const long long size : spec.sizes) {
      if (size > cfg.size_cap)
        throw ConfigError("stream size " + std::to_string(size) +
                          " exceeds the cap; pass --large to allow it");
      for (const auto learner : cfg.learners) {
        const std::vector<int> ks = learner == LearnerKind::knn ? cfg.ks : std::vector<int>{0};
        const std::vector<int> ws = learner == LearnerKind::knn ? cfg.ws : std::vector<int>{0};
        for (const int k : ks) {
          for (const int w : ws) {
            for (const auto detector : cfg.detectors) {
              for (int rep = 0; rep < cfg.repetitions; ++rep) {
                Task t;
                t.dataset = spec.dataset;
                t.kind = spec.kind;
                t.size = size;
                t.learner = learner;
                t.detector = detector;
                t.k = k;
                t.w = w;
                t.rep = rep;
                t.seed = cfg.base_seed + uint64_t(rep);
                tasks.push_back(t);
              }
            }
          }
        }
      }
    }
  }
  return tasks;
}

std::string task_key(const RunIds& ids) {
  std::ostringstream out;
  out << ids.generator << '|' << ids.drift << '|' << ids.size << '|' << ids.learner << '|'
      << ids.detector << '|' << ids.k << '|' << ids.w << '|' << ids.seed;
  return out.str();
}

std::unique_ptr<Learner> make_learner(const Task& task, const ExperimentConfig& cfg,
                                      const Schema& schema) {
  switch (task.learner) {
    case LearnerKind::nb:
      return std::make_unique<NaiveBayes>(schema);
    case LearnerKind::ht:
      return std::make_unique<HoeffdingTree>(schema, cfg.ht);
    case LearnerKind::knn: {
      KnnOptions opt = cfg.knn;
      opt.k = task.k;
      opt.window = task.w;
      return std::make_unique<KnnClassifier>(schema, opt);
    }
  }
  throw std::logic_error("unknown learner kind");
}

std::unique_ptr<Detector> make_detector(DetectorKind kind, const ExperimentConfig& cfg) {
  switch (kind) {
    case DetectorKind::none:
      return nullptr;
    case DetectorKind::ddm:
      return std::make_unique<DdmDetector>(cfg.ddm);
    case DetectorKind::rddm:
      return std::make_unique<RddmDetector>(cfg.rddm);
  }
  throw std::logic_error("unknown detector kind");
}

// -------------------------------------------------------------------- csv

std::string result_row(const RunRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%s,%lld,%s,%s,%d,%d,%llu,%.5f,%.5f,%.3f,%lld",
                r.ids.generator.c_str(), r.ids.drift.c_str(), r.ids.size, r.ids.learner.c_str(),
                r.ids.detector.c_str(), r.ids.k, r.ids.w, (unsigned long long)r.ids.seed,
                r.mean_acc, r.final_acc, r.wall_time_s, r.drift_events);
  return buf;
}

namespace {
constexpr const char* kResultsHeader =
    "generator,drift,size,learner,detector,k,w,seed,mean_acc,final_acc,wall_time_s,drift_events";
}

void write_results_csv(const std::string& path, const std::vector<RunRecord>& records) {
  std::vector<const RunRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& r : records) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const RunRecord* a, const RunRecord* b) {
    return task_key(a->ids) < task_key(b->ids);
  });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kResultsHeader << '\n';
  for (const auto* r : ordered) out << result_row(*r) << '\n';
}

void append_result_row(const std::string& path, const RunRecord& record) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (fresh) out << kResultsHeader << '\n';
  out << result_row(record) << '\n';
}

std::vector<RunRecord> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<RunRecord> records;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("generator,", 0) == 0) continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 12) throw std::runtime_error("results row with wrong arity: " + line);
    RunRecord r;
    r.ids.generator = fields[0];
    r.ids.drift = fields[1];
    r.ids.size = std::stoll(fields[2]);
    r.ids.learner = fields[3];
    r.ids.detector = fields[4];
    r.ids.k = std::stoi(fields[5]);
    r.ids.w = std::stoi(fields[6]);
    r.ids.seed = std::stoull(fields[7]);
    r.mean_acc = std::stod(fields[8]);
    r.final_acc = std::stod(fields[9]);
    r.wall_time_s = std::stod(fields[10]);
    r.drift_events = std::stoll(fields[11]);
    records.push_back(std::move(r));
  }
  return records;
}

void write_stream_csv(StreamSource& source, long long count, std::ostream& out) {
  const Schema& schema = source.schema();
  const auto& attrs = schema.attributes();
  for (const auto& a : attrs) out << a.name << ',';
  out << "class\n";
  LabeledInstance inst;
  char buf[32];
  for (long long i = 0; i < count; ++i) {
    if (!source.next(inst))
      throw std::runtime_error("stream exhausted after " + std::to_string(i) + " instances");
    for (size_t a = 0; a < attrs.size(); ++a) {
      if (attrs[a].kind == AttrKind::nominal) {
        out << int(inst.values[a]);
      } else {
        std::snprintf(buf, sizeof buf, "%.6f", inst.values[a]);
        out << buf;
      }
      out << ',';
    }
    out << inst.label << '\n';
  }
}

// ------------------------------------------------------------------ runner

GridOutcome run_grid(const ExperimentConfig& cfg, int workers, std::ostream* progress) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::string results_path = cfg.out_dir + "/results.csv";
  const std::string failures_path = cfg.out_dir + "/failures.csv";

  GridOutcome outcome;
  std::set<std::string> done;
  if (std::filesystem::exists(results_path)) {
    for (auto& r : read_results_csv(results_path)) {
      done.insert(task_key(r.ids));
      outcome.records.push_back(std::move(r));
    }
  }

  std::vector<Task> tasks = expand_grid(cfg);
  std::vector<Task> pending;
  for (const auto& t : tasks) {
    if (done.count(task_key(t.ids())) == 0)
      pending.push_back(t);
    else
      ++outcome.skipped;
  }

  if (workers < 1) workers = 1;
  const long long total = (long long)pending.size();
  long long finished = 0;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
#endif
  for (long long i = 0; i < total; ++i) {
    const Task& task = pending[i];
    RunRecord record;
    std::string error;
    try {
      const DriftPlan plan = build_plan(task.dataset, task.kind, task.size, task.seed, cfg.gen);
      auto source = compose(plan, task.seed);
      MonitoredLearner learner(make_learner(task, cfg, source->schema()),
                               make_detector(task.detector, cfg));
      PrequentialConfig eval = cfg.eval;
      eval.total = task.size;
      record = prequential_run(*source, learner, eval);
      record.ids = task.ids();
      record.drift_events = learner.drift_count();
    } catch (const std::exception& e) {
      error = e.what();
    }
#ifdef _OPENMP
#pragma omp critical(driftbench_collect)
#endif
    {
      if (error.empty()) {
        outcome.records.push_back(record);
        append_result_row(results_path, record);
      } else {
        outcome.failures.push_back({task.ids(), error});
      }
      ++finished;
      if (progress && (finished % 25 == 0 || finished == total)) {
        (*progress) << "\r" << finished << "/" << total << " runs" << std::flush;
      }
    }
  }
  if (progress && total > 0) (*progress) << "\n";

  write_results_csv(results_path, outcome.records);
  if (!outcome.failures.empty()) {
    std::ofstream out(failures_path);
    out << "generator,drift,size,learner,detector,k,w,seed,error\n";
    for (const auto& f : outcome.failures) {
      std::string msg = f.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      out << f.ids.generator << ',' << f.ids.drift << ',' << f.ids.size << ',' << f.ids.learner
          << ',' << f.ids.detector << ',' << f.ids.k << ',' << f.ids.w << ',' << f.ids.seed << ','
          << msg << '\n';
    }
  }
  return outcome;
}

}  // namespace driftbench
