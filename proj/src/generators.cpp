#include "driftbench/generators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace driftbench {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_permutation_of(const int* p, int n) {
  std::vector<bool> seen(n, false);
  for (int i = 0; i < n; ++i) {
    if (p[i] < 0 || p[i] >= n || seen[p[i]]) return false;
    seen[p[i]] = true;
  }
  return true;
}

bool in_range(double v, double lo, double hi) { return lo <= v && v <= hi; }

}  // namespace

// ---------------------------------------------------------------- configs

ConceptConfig agrawal_concept(int function, uint64_t seed, double flip_p) {
  ConceptConfig c;
  c.family = Family::agrawal;
  c.seed = seed;
  c.noise = flip_p;
  c.params = AgrawalParams{function};
  return c;
}

ConceptConfig led_concept(const std::array<int, 24>& permutation, uint64_t seed, double invert_p) {
  ConceptConfig c;
  c.family = Family::led;
  c.seed = seed;
  c.noise = invert_p;
  c.params = LedParams{permutation};
  return c;
}

ConceptConfig mixed_concept(bool inverted, uint64_t seed, double flip_p) {
  ConceptConfig c;
  c.family = Family::mixed;
  c.seed = seed;
  c.noise = flip_p;
  c.params = MixedParams{inverted};
  return c;
}

ConceptConfig randrbf_concept(uint64_t table_seed, uint64_t center_seed, uint64_t seed,
                              double spread) {
  ConceptConfig c;
  c.family = Family::randrbf;
  c.seed = seed;
  c.noise = spread;
  RandRbfParams p;
  p.table_seed = table_seed;
  p.center_seed = center_seed;
  c.params = p;
  return c;
}

ConceptConfig sine_concept(SineVariant variant, bool inverted, uint64_t seed, double flip_p) {
  ConceptConfig c;
  c.family = Family::sine;
  c.seed = seed;
  c.noise = flip_p;
  SineParams p;
  p.variant = variant;
  p.inverted = inverted;
  if (variant == SineVariant::sine2) {
    p.x_min = 0.0;
    p.x_max = 1.0;
    p.y_min = 0.0;
    p.y_max = 1.0;
  }
  c.params = p;
  return c;
}

ConceptConfig waveform_concept(const std::array<int, 40>& permutation, uint64_t seed,
                               double noise) {
  ConceptConfig c;
  c.family = Family::waveform;
  c.seed = seed;
  c.noise = noise;
  c.params = WaveformParams{permutation};
  return c;
}

// ---------------------------------------------------------------- schemas

Schema schema_for(const ConceptConfig& config) {
  switch (config.family) {
    case Family::agrawal:
      return Schema({{"salary", AttrKind::numeric, 0},
                     {"commission", AttrKind::numeric, 0},
                     {"age", AttrKind::numeric, 0},
                     {"elevel", AttrKind::nominal, 5},
                     {"car", AttrKind::nominal, 20},
                     {"zipcode", AttrKind::nominal, 9},
                     {"hvalue", AttrKind::numeric, 0},
                     {"hyears", AttrKind::numeric, 0},
                     {"loan", AttrKind::numeric, 0}},
                    {"groupA", "groupB"});
    case Family::led: {
      std::vector<AttributeSpec> attrs;
      for (int i = 0; i < 24; ++i) attrs.push_back({"att" + std::to_string(i), AttrKind::nominal, 2});
      std::vector<std::string> labels;
      for (int d = 0; d < 10; ++d) labels.push_back("digit" + std::to_string(d));
      return Schema(std::move(attrs), std::move(labels));
    }
    case Family::mixed:
      return Schema({{"v", AttrKind::nominal, 2},
                     {"w", AttrKind::nominal, 2},
                     {"x", AttrKind::numeric, 0},
                     {"y", AttrKind::numeric, 0}},
                    {"neg", "pos"});
    case Family::randrbf: {
      const auto& p = std::get<RandRbfParams>(config.params);
      std::vector<AttributeSpec> attrs;
      for (int i = 0; i < p.attributes; ++i)
        attrs.push_back({"att" + std::to_string(i), AttrKind::numeric, 0});
      std::vector<std::string> labels;
      for (int c = 0; c < p.classes; ++c) labels.push_back("class" + std::to_string(c));
      return Schema(std::move(attrs), std::move(labels));
    }
    case Family::sine:
      return Schema({{"x", AttrKind::numeric, 0}, {"y", AttrKind::numeric, 0}}, {"neg", "pos"});
    case Family::waveform: {
      std::vector<AttributeSpec> attrs;
      for (int i = 0; i < 40; ++i) attrs.push_back({"att" + std::to_string(i), AttrKind::numeric, 0});
      return Schema(std::move(attrs), {"class0", "class1", "class2"});
    }
  }
  throw std::invalid_argument("unknown family");
}

std::optional<std::string> validate_concept(const ConceptConfig& config) {
  switch (config.family) {
    case Family::agrawal: {
      const auto* p = std::get_if<AgrawalParams>(&config.params);
      if (!p) return "agrawal: wrong parameter block";
      if (p->function < 1 || p->function > 10)
        return "agrawal: function " + std::to_string(p->function) + " outside 1..10";
      if (!in_range(config.noise, 0.0, 1.0)) return "agrawal: flip probability outside [0,1]";
      break;
    }
    case Family::led: {
      const auto* p = std::get_if<LedParams>(&config.params);
      if (!p) return "led: wrong parameter block";
      if (!is_permutation_of(p->permutation.data(), 24)) return "led: not a permutation of 0..23";
      if (!in_range(config.noise, 0.0, 1.0)) return "led: invert probability outside [0,1]";
      break;
    }
    case Family::mixed: {
      if (!std::get_if<MixedParams>(&config.params)) return "mixed: wrong parameter block";
      if (!in_range(config.noise, 0.0, 1.0)) return "mixed: flip probability outside [0,1]";
      break;
    }
    case Family::randrbf: {
      const auto* p = std::get_if<RandRbfParams>(&config.params);
      if (!p) return "randrbf: wrong parameter block";
      if (p->classes < 2) return "randrbf: needs at least 2 classes";
      if (p->attributes < 1) return "randrbf: needs at least 1 attribute";
      if (p->centroids < 1) return "randrbf: needs at least 1 centroid";
      if (config.noise < 0.0) return "randrbf: spread scale must be >= 0";
      break;
    }
    case Family::sine: {
      const auto* p = std::get_if<SineParams>(&config.params);
      if (!p) return "sine: wrong parameter block";
      if (!(p->x_min < p->x_max) || !(p->y_min < p->y_max)) return "sine: empty sampling box";
      if (!in_range(config.noise, 0.0, 1.0)) return "sine: flip probability outside [0,1]";
      break;
    }
    case Family::waveform: {
      const auto* p = std::get_if<WaveformParams>(&config.params);
      if (!p) return "waveform: wrong parameter block";
      if (!is_permutation_of(p->permutation.data(), 40))
        return "waveform: not a permutation of 0..39";
      if (config.noise < 0.0) return "waveform: noise scale must be >= 0";
      break;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- labels

bool mixed_label(bool v, bool w, double x, double y, bool inverted) {
  const int conditions = int(v) + int(w) + int(y < 0.5 + 0.3 * std::sin(3.0 * kPi * x));
  return (conditions >= 2) != inverted;
}

bool sine_label(SineVariant variant, double x, double y, bool inverted) {
  const bool below = variant == SineVariant::sine1 ? y < std::sin(x)
                                                   : y < 0.5 + 0.3 * std::sin(3.0 * kPi * x);
  return below != inverted;
}

int agrawal_group(int function, double salary, double commission, int age, int elevel, int /*car*/,
                  int /*zipcode*/, double hvalue, int hyears, double loan) {
  const double total = salary + commission;
  switch (function) {
    case 1:
      return (age < 40 || age >= 60) ? 0 : 1;
    case 2:
      if (age < 40) return in_range(salary, 50000, 100000) ? 0 : 1;
      if (age < 60) return in_range(salary, 75000, 125000) ? 0 : 1;
      return in_range(salary, 25000, 75000) ? 0 : 1;
    case 3:
      if (age < 40) return (elevel == 0 || elevel == 1) ? 0 : 1;
      if (age < 60) return (elevel >= 1 && elevel <= 3) ? 0 : 1;
      return (elevel >= 2 && elevel <= 4) ? 0 : 1;
    case 4:
      if (age < 40)
        return (elevel <= 1 ? in_range(salary, 25000, 75000) : in_range(salary, 50000, 100000))
                   ? 0
                   : 1;
      if (age < 60)
        return ((elevel >= 1 && elevel <= 3) ? in_range(salary, 50000, 100000)
                                             : in_range(salary, 75000, 125000))
                   ? 0
                   : 1;
      return (elevel >= 2 ? in_range(salary, 50000, 100000) : in_range(salary, 25000, 75000)) ? 0
                                                                                              : 1;
    case 5:
      if (age < 40)
        return (in_range(salary, 50000, 100000) ? in_range(loan, 100000, 300000)
                                                : in_range(loan, 200000, 400000))
                   ? 0
                   : 1;
      if (age < 60)
        return (in_range(salary, 75000, 125000) ? in_range(loan, 200000, 400000)
                                                : in_range(loan, 300000, 500000))
                   ? 0
                   : 1;
      return (in_range(salary, 25000, 75000) ? in_range(loan, 300000, 500000)
                                             : in_range(loan, 100000, 300000))
                 ? 0
                 : 1;
    case 6:
      if (age < 40) return in_range(total, 50000, 100000) ? 0 : 1;
      if (age < 60) return in_range(total, 75000, 125000) ? 0 : 1;
      return in_range(total, 25000, 75000) ? 0 : 1;
    case 7:
      return (2.0 * total / 3.0 - loan / 5.0 - 20000.0 > 0.0) ? 0 : 1;
    case 8:
      return (2.0 * total / 3.0 - 5000.0 * elevel - 20000.0 > 0.0) ? 0 : 1;
    case 9:
      return (2.0 * total / 3.0 - 5000.0 * elevel - loan / 5.0 - 10000.0 > 0.0) ? 0 : 1;
    case 10: {
      const double equity = hyears >= 20 ? hvalue * double(hyears - 20) / 10.0 : 0.0;
      return (2.0 * total / 3.0 - 5000.0 * elevel + equity / 5.0 - 10000.0 > 0.0) ? 0 : 1;
    }
    default:
      throw std::invalid_argument("agrawal function outside 1..10");
  }
}

// Standard seven-segment encoding, segments ordered a..g in bits 0..6.
const std::array<uint8_t, 10> kLedSegments = {0x3F, 0x06, 0x5B, 0x4F, 0x66,
                                              0x6D, 0x7D, 0x07, 0x7F, 0x6F};

double waveform_base(int wave, int i) {
  static constexpr int kPeaks[3] = {7, 11, 15};
  const double v = 6.0 - std::abs(i - kPeaks[wave]);
  return v > 0.0 ? v : 0.0;
}

void waveform_combine(int cls, double u, std::span<double> out21) {
  static constexpr int kPairs[3][2] = {{0, 1}, {1, 2}, {0, 2}};
  const int a = kPairs[cls][0];
  const int b = kPairs[cls][1];
  for (int i = 0; i < 21; ++i) out21[i] = u * waveform_base(a, i) + (1.0 - u) * waveform_base(b, i);
}

// ---------------------------------------------------------------- randrbf

CentroidTable CentroidTable::generate(const RandRbfParams& params) {
  CentroidTable table;
  table.rows.resize(params.centroids);
  // Two generators keep the base table stable while centers are reseeded.
  Rng base(mix_seed(params.table_seed, 0x7ab1e));
  Rng centers(mix_seed(params.center_seed, 0xce47e5));
  for (auto& row : table.rows) {
    row.label = base.next_int(params.classes);
    row.weight = 1.0 - base.next_double();          // (0, 1]
    row.stddev = 2.0 * (1.0 - base.next_double());  // (0, 2]
  }
  for (auto& row : table.rows) {
    row.center.resize(params.attributes);
    for (auto& c : row.center) c = centers.next_double();
  }
  for (const auto& row : table.rows) table.total_weight += row.weight;
  return table;
}

std::optional<std::string> CentroidTable::validate(const RandRbfParams& params) const {
  if (int(rows.size()) != params.centroids)
    return "centroid table: expected " + std::to_string(params.centroids) + " rows";
  double total = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (int(r.center.size()) != params.attributes)
      return "centroid " + std::to_string(i) + ": wrong center arity";
    if (r.label < 0 || r.label >= params.classes)
      return "centroid " + std::to_string(i) + ": label outside range";
    if (!(r.weight > 0.0)) return "centroid " + std::to_string(i) + ": weight must be positive";
    if (!(r.stddev > 0.0)) return "centroid " + std::to_string(i) + ": stddev must be positive";
    total += r.weight;
  }
  if (!(total > 0.0)) return "centroid table: weights do not normalize";
  return std::nullopt;
}

// ---------------------------------------------------------------- emission

void agrawal_emit(Rng& value_rng, Rng& noise_rng, int function, double flip_p,
                  LabeledInstance& out) {
  // Draw order is frozen: salary, commission (only when salary < 75k), age,
  // elevel, car, zipcode, hvalue, hyears, loan, then one flip draw.
  const double salary = 20000.0 + 130000.0 * value_rng.next_double();
  const double commission =
      salary >= 75000.0 ? 0.0 : 10000.0 + 65000.0 * value_rng.next_double();
  const int age = 20 + value_rng.next_int(61);
  const int elevel = value_rng.next_int(5);
  const int car = value_rng.next_int(20);
  const int zipcode = value_rng.next_int(9);
  const double hvalue = double(9 - zipcode) * 100000.0 * (0.5 + value_rng.next_double());
  const int hyears = 1 + value_rng.next_int(30);
  const double loan = 500000.0 * value_rng.next_double();

  out.values.assign({salary, commission, double(age), double(elevel), double(car),
                     double(zipcode), hvalue, double(hyears), loan});
  out.label = agrawal_group(function, salary, commission, age, elevel, car, zipcode, hvalue,
                            hyears, loan);
  if (noise_rng.next_double() < flip_p) out.label ^= 1;
}

void led_emit(Rng& value_rng, Rng& noise_rng, const std::array<int, 24>& permutation,
              double invert_p, LabeledInstance& out) {
  const int digit = value_rng.next_int(10);
  uint8_t bits[24];
  for (int s = 0; s < 7; ++s) bits[s] = (kLedSegments[digit] >> s) & 1;
  for (int i = 7; i < 24; ++i) bits[i] = uint8_t(value_rng.next_int(2));
  for (int i = 0; i < 24; ++i) {
    if (noise_rng.next_double() < invert_p) bits[i] ^= 1;
  }
  out.values.resize(24);
  for (int i = 0; i < 24; ++i) out.values[permutation[i]] = double(bits[i]);
  out.label = digit;
}

void mixed_emit(Rng& value_rng, Rng& noise_rng, bool inverted, double flip_p,
                LabeledInstance& out) {
  const bool v = value_rng.next_int(2) == 1;
  const bool w = value_rng.next_int(2) == 1;
  const double x = value_rng.next_double();
  const double y = value_rng.next_double();
  bool pos = mixed_label(v, w, x, y, inverted);
  if (noise_rng.next_double() < flip_p) pos = !pos;
  out.values.assign({double(v), double(w), x, y});
  out.label = pos ? 1 : 0;
}

void sine_emit(Rng& value_rng, Rng& noise_rng, const SineParams& params, double flip_p,
               LabeledInstance& out) {
  const double x = params.x_min + (params.x_max - params.x_min) * value_rng.next_double();
  const double y = params.y_min + (params.y_max - params.y_min) * value_rng.next_double();
  bool pos = sine_label(params.variant, x, y, params.inverted);
  if (noise_rng.next_double() < flip_p) pos = !pos;
  out.values.assign({x, y});
  out.label = pos ? 1 : 0;
}

void randrbf_emit(Rng& rng, const CentroidTable& table, double spread_scale,
                  LabeledInstance& out) {
  double u = rng.next_double() * table.total_weight;
  size_t idx = 0;
  for (; idx + 1 < table.rows.size(); ++idx) {
    u -= table.rows[idx].weight;
    if (u < 0.0) break;
  }
  const Centroid& c = table.rows[idx];
  const int d = int(c.center.size());
  out.values.resize(d);
  // Spherical Gaussian cloud around the centroid, one draw per attribute.
  const double spread = c.stddev * spread_scale;
  for (int i = 0; i < d; ++i) out.values[i] = c.center[i] + rng.next_gaussian() * spread;
  out.label = c.label;
}

void waveform_emit(Rng& rng, const std::array<int, 40>& permutation, double noise_scale,
                   LabeledInstance& out) {
  const int cls = rng.next_int(3);
  const double u = rng.next_double();
  double wave[21];
  waveform_combine(cls, u, wave);
  out.values.resize(40);
  for (int i = 0; i < 21; ++i)
    out.values[permutation[i]] = wave[i] + noise_scale * rng.next_gaussian();
  for (int i = 21; i < 40; ++i) out.values[permutation[i]] = noise_scale * rng.next_gaussian();
  out.label = cls;
}

// ---------------------------------------------------------------- source

namespace {

class ConceptSource final : public StreamSource {
 public:
  explicit ConceptSource(const ConceptConfig& config)
      : config_(config),
        schema_(schema_for(config)),
        value_rng_(mix_seed(config.seed, 0)),
        noise_rng_(mix_seed(config.seed, 1)) {
    if (config_.family == Family::randrbf) {
      table_ = CentroidTable::generate(std::get<RandRbfParams>(config_.params));
    }
  }

  const Schema& schema() const override { return schema_; }

  bool next(LabeledInstance& out) override {
    switch (config_.family) {
      case Family::agrawal:
        agrawal_emit(value_rng_, noise_rng_, std::get<AgrawalParams>(config_.params).function,
                     config_.noise, out);
        break;
      case Family::led:
        led_emit(value_rng_, noise_rng_, std::get<LedParams>(config_.params).permutation,
                 config_.noise, out);
        break;
      case Family::mixed:
        mixed_emit(value_rng_, noise_rng_, std::get<MixedParams>(config_.params).inverted,
                   config_.noise, out);
        break;
      case Family::randrbf:
        randrbf_emit(value_rng_, table_, config_.noise, out);
        break;
      case Family::sine:
        sine_emit(value_rng_, noise_rng_, std::get<SineParams>(config_.params), config_.noise,
                  out);
        break;
      case Family::waveform:
        waveform_emit(value_rng_, std::get<WaveformParams>(config_.params).permutation,
                      config_.noise, out);
        break;
    }
    return true;
  }

 private:
  ConceptConfig config_;
  Schema schema_;
  Rng value_rng_;
  Rng noise_rng_;
  CentroidTable table_;
};

}  // namespace

std::unique_ptr<StreamSource> make_concept(const ConceptConfig& config) {
  if (auto problem = validate_concept(config)) throw std::invalid_argument(*problem);
  return std::make_unique<ConceptSource>(config);
}

}  // namespace driftbench
