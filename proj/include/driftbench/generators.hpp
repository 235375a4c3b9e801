#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>

#include "driftbench/core.hpp"
#include "driftbench/rng.hpp"

namespace driftbench {

enum class Family : uint8_t { agrawal, led, mixed, randrbf, sine, waveform };
enum class SineVariant : uint8_t { sine1, sine2 };

template <size_t N>
constexpr std::array<int, N> identity_permutation() {
  std::array<int, N> p{};
  for (size_t i = 0; i < N; ++i) p[i] = int(i);
  return p;
}

struct AgrawalParams {
  int function = 1;  // 1..10
};

struct LedParams {
  // position_of[logical bit] = physical attribute slot
  std::array<int, 24> permutation = identity_permutation<24>();
};

struct MixedParams {
  bool inverted = false;
};

struct RandRbfParams {
  int classes = 6;
  int attributes = 40;
  int centroids = 50;
  uint64_t table_seed = 1;   // labels, weights, stddevs
  uint64_t center_seed = 1;  // centroid positions only; reseeding moves the
                             // centers while the rest of the table persists
};

struct SineParams {
  SineVariant variant = SineVariant::sine1;
  bool inverted = false;
  // Sampling box. sine1 defaults to x in [0, 2*pi], y in [-1, 1] so the curve
  // y = sin(x) splits the box evenly; sine2 uses the unit square.
  double x_min = 0.0, x_max = 6.283185307179586476925286766559;
  double y_min = -1.0, y_max = 1.0;
};

struct WaveformParams {
  std::array<int, 40> permutation = identity_permutation<40>();
};

struct ConceptConfig {
  Family family = Family::mixed;
  // Stream id. Solo sources draw from it directly; composed plans derive the
  // actual generator seed as mix_seed(plan seed, this value).
  uint64_t seed = 0;
  // agrawal/mixed/sine: label-flip probability; led: per-bit invert
  // probability; randrbf/waveform: spread scale (0 suppresses all noise).
  double noise = 0.0;
  std::variant<AgrawalParams, LedParams, MixedParams, RandRbfParams, SineParams, WaveformParams>
      params = MixedParams{};
};

ConceptConfig agrawal_concept(int function, uint64_t seed, double flip_p = 0.10);
ConceptConfig led_concept(const std::array<int, 24>& permutation, uint64_t seed,
                          double invert_p = 0.10);
ConceptConfig mixed_concept(bool inverted, uint64_t seed, double flip_p = 0.0);
ConceptConfig randrbf_concept(uint64_t table_seed, uint64_t center_seed, uint64_t seed,
                              double spread = 1.0);
ConceptConfig sine_concept(SineVariant variant, bool inverted, uint64_t seed,
                           double flip_p = 0.0);
ConceptConfig waveform_concept(const std::array<int, 40>& permutation, uint64_t seed,
                               double noise = 1.0);

Schema schema_for(const ConceptConfig& config);

/// nullopt when the config is valid, otherwise the first problem found.
std::optional<std::string> validate_concept(const ConceptConfig& config);

/// Deterministic, conceptually infinite source for one stationary concept.
/// Throws std::invalid_argument on invalid configs.
std::unique_ptr<StreamSource> make_concept(const ConceptConfig& config);

// ---- closed-form label predicates (also used by the test oracles) ----

/// Positive iff at least two of {v, w, y < 0.5 + 0.3*sin(3*pi*x)} hold, XOR inverted.
bool mixed_label(bool v, bool w, double x, double y, bool inverted);

/// sine1: positive iff y < sin(x); sine2: positive iff y < 0.5 + 0.3*sin(3*pi*x); XOR inverted.
bool sine_label(SineVariant variant, double x, double y, bool inverted);

/// Group for one of the ten loan functions; 0 = group A, 1 = group B.
int agrawal_group(int function, double salary, double commission, int age, int elevel, int car,
                  int zipcode, double hvalue, int hyears, double loan);

/// Seven-segment masks for digits 0..9; bit s set = segment s lit.
extern const std::array<uint8_t, 10> kLedSegments;

/// Base wave value at position i (0..20); waves peak at 7, 11, 15 with height 6.
double waveform_base(int wave, int i);

/// Mixes the two base waves of class cls (0..2) with weight u into out[0..20].
void waveform_combine(int cls, double u, std::span<double> out21);

struct Centroid {
  std::vector<double> center;
  int label = 0;
  double weight = 1.0;
  double stddev = 1.0;
};

struct CentroidTable {
  std::vector<Centroid> rows;
  double total_weight = 0.0;

  // Labels, weights and stddevs come from table_seed; centers from
  // center_seed. Centers live in [0,1)^d, weights in (0,1], stddevs in
  // (0,2]. The wide stddev range makes neighboring clouds overlap, which is
  // what keeps this family hard to learn.
  static CentroidTable generate(const RandRbfParams& params);
  std::optional<std::string> validate(const RandRbfParams& params) const;
};

// ---- per-family emission, one instance per call ----
// Attribute draws come from value_rng, label/bit flips from noise_rng, so a
// noiseless twin with the same seed emits identical attribute values.

void agrawal_emit(Rng& value_rng, Rng& noise_rng, int function, double flip_p,
                  LabeledInstance& out);
void led_emit(Rng& value_rng, Rng& noise_rng, const std::array<int, 24>& permutation,
              double invert_p, LabeledInstance& out);
void mixed_emit(Rng& value_rng, Rng& noise_rng, bool inverted, double flip_p,
                LabeledInstance& out);
void sine_emit(Rng& value_rng, Rng& noise_rng, const SineParams& params, double flip_p,
               LabeledInstance& out);
void randrbf_emit(Rng& rng, const CentroidTable& table, double spread_scale, LabeledInstance& out);
void waveform_emit(Rng& rng, const std::array<int, 40>& permutation, double noise_scale,
                   LabeledInstance& out);

}  // namespace driftbench
