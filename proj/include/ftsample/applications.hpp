#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftsample/bounds.hpp"
#include "ftsample/error.hpp"
#include "ftsample/number_theory.hpp"
#include "ftsample/sampling.hpp"
#include "ftsample/superposition.hpp"

namespace ftsample {

// A black-box function on the integers. Values only need equality.
using Evaluator = std::function<std::uint64_t(std::uint64_t)>;

// Periodic h, injective on [0, r). The generator keeps the ground truth
// beside the evaluator; recovery code receives only the evaluator.
struct PeriodicInstance {
  Evaluator h;
  std::uint64_t period = 1;
  std::optional<std::uint64_t> r_upper;
  std::string spec;  // JSON the instance was built from

  void validate(std::uint64_t checked_range = 0) const;
};

// h(i) = base^i mod modulus.
PeriodicInstance modular_exponentiation_instance(std::uint64_t base, std::uint64_t modulus);

// h(i) = i mod r.
PeriodicInstance residue_instance(std::uint64_t r);

// Random modular exponentiation instance whose period lies in [min_r, max_r].
PeriodicInstance random_modular_exponentiation_instance(Rng& rng, std::uint64_t min_r,
                                                        std::uint64_t max_r);

// {"type": "modular_exponentiation", "base": b, "modulus": N}
PeriodicInstance periodic_instance_from_json(const std::string& text);

// Uniform superposition over {i < P : h(i) = b} after measuring b. b is
// drawn with probability proportional to its preimage count.
struct CosetState {
  Superposition state;
  std::uint64_t value;
};

CosetState coset_state(const PeriodicInstance& inst, std::size_t P, std::uint64_t seed);

struct IdealProbability {
  double per_pair;   // 1/r² for each (jt, b)
  double aggregate;  // Φ(r)/r over coprime j and every b
};

IdealProbability shor_ideal_probability(std::uint64_t r, std::uint64_t t);

// Exact sampling over the domain tr: mass[b][c] is the probability of
// observing (c, b), with b indexed by h's values on [0, r) in order.
struct IdealSimulation {
  std::uint64_t r = 0;
  std::uint64_t t = 0;
  std::vector<std::vector<double>> mass;

  double mass_at(std::size_t b, std::size_t c) const { return mass[b][c]; }
  // Total mass over (jt, b) with gcd(j, r) = 1.
  double coprime_mass() const;
  double total_mass() const;
};

IdealSimulation simulate_ideal_sampling(const PeriodicInstance& inst, std::uint64_t t);

// Largest L2 distance, over the measured values b, between the coset state
// on [0, P) and the ideal one on [0, tr) with t = ⌊P/r⌋.
double near_coset_distance(const PeriodicInstance& inst, std::size_t P);

// Measurement distributions |FT_q(α)|² keyed by (q, support shifted to 0).
// The distribution depends on α's support only up to translation, so one
// entry serves every coset with the same shape. Safe to share across threads.
class MeasurementCache {
 public:
  std::shared_ptr<const DiscreteSampler> get(std::size_t q,
                                             const std::vector<std::size_t>& support);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>,
           std::shared_ptr<const DiscreteSampler>>
      entries_;
};

struct RecoveryOptions {
  double s_n = 2.0;                 // accuracy parameter; sets the samples per guess
  std::uint64_t q_multiplier = 2;   // q is smooth in [m·p, 2m·p]
  std::uint64_t max_guess = 1u << 12;
  std::size_t spot_checks = 16;
  std::shared_ptr<MeasurementCache> cache;  // optional
};

struct PeriodSample {
  std::uint64_t guess;  // r'
  std::uint64_t p;
  std::uint64_t q;
  std::uint64_t value;  // measured b
  std::uint64_t c;      // observed index in [0, q)
  Fraction fraction;
};

struct RecoveryResult {
  std::uint64_t period;
  std::vector<PeriodSample> samples;
};

class RecoveryFailed : public Error {
 public:
  RecoveryFailed(const std::string& what, std::vector<PeriodSample> samples)
      : Error(Errc::recovery_failed, what), samples_(std::move(samples)) {}
  const std::vector<PeriodSample>& samples() const noexcept { return samples_; }

 private:
  std::vector<PeriodSample> samples_;
};

std::size_t samples_per_guess(double s_n, std::uint64_t guess);

// h(0) = h(r̂), h injective on [0, r̂), plus h(x) = h(x + r̂) at spot points.
bool verify_period(const Evaluator& h, std::uint64_t candidate, std::size_t spot_checks = 16);

RecoveryResult recover_period(const Evaluator& h, std::uint64_t seed,
                              const RecoveryOptions& options = {});

// {instance, seed, samples, recovered, correct, trials}
std::string pipeline_record_json(const PeriodicInstance& inst, std::uint64_t seed,
                                 const std::optional<RecoveryResult>& result,
                                 const std::vector<PeriodSample>& samples);

// f(x, y) = h((x + α·y) mod q_bl), h of smallest period r dividing q_bl and
// taking each value at most m times on [0, r).
struct HiddenLinearInstance {
  Evaluator h;
  std::uint64_t q_bl = 1;
  std::uint64_t alpha = 0;
  std::uint64_t m = 1;
  std::uint64_t r = 1;
  std::string spec;

  std::uint64_t f(std::uint64_t x, std::uint64_t y) const;
  void validate() const;
  // m < smallest prime divisor of r, which makes the second fraction
  // determine α mod r.
  bool satisfies_recovery_conditions() const;
};

// h assigns each residue mod r a label; labels are shared by at most m
// residues. Resampled until r is the smallest period.
HiddenLinearInstance hidden_linear_instance(std::uint64_t r, std::uint64_t m,
                                            std::uint64_t alpha, std::uint64_t q_bl,
                                            std::uint64_t seed);

// {"type": "affine_mod", "r": r, "m": m, "alpha": α, "q_bl": q, "seed": s}
HiddenLinearInstance hidden_linear_instance_from_json(const std::string& text);

// Counts x ∈ [r] with |Σ_i ω_r^{x·b_i}| ≥ 1/2 against r/m.
BoundReport bl_counting_check(const std::vector<std::int64_t>& b, std::uint64_t r);

struct BLTriple {
  std::uint64_t y1;
  std::uint64_t y2;
  std::uint64_t value;
  friend bool operator==(const BLTriple&, const BLTriple&) = default;
};

// Exact output of the 2D pipeline: uniform state over [r]², f applied and
// measured, 2D FT over q_sim × q_sim, then measured. Observations are drawn
// from the primed lattice {(u', v') : u, v ∈ [r]} with probabilities
// |γ_{(u',v')}|² renormalized over the lattice, the 2D analogue of D_γ.
class BonehLiptonSimulator {
 public:
  BonehLiptonSimulator(HiddenLinearInstance inst, std::uint64_t q_sim);

  BLTriple sample(Rng& rng) const;
  double probability(const BLTriple& t) const;
  std::vector<std::pair<BLTriple, double>> support(double threshold = 1e-12) const;
  // Total mass on triples (⌊q u/r⌋, ⌊q (αu mod r)/r⌋, b).
  double good_mass() const;
  // Unnormalized chance that the raw q_sim² measurement lands on the lattice.
  double primed_mass() const noexcept { return primed_mass_; }
  bool is_good(const BLTriple& t) const;

  const HiddenLinearInstance& instance() const noexcept { return inst_; }
  std::uint64_t q_sim() const noexcept { return q_sim_; }

 private:
  HiddenLinearInstance inst_;
  std::uint64_t q_sim_;
  std::vector<std::uint64_t> values_;          // measured-value labels
  std::vector<std::vector<double>> masses_;    // per value, over the r² lattice
  double primed_mass_ = 0.0;
  std::vector<double> value_cdf_;
  std::vector<DiscreteSampler> samplers_;
};

BLTriple bl_sample(const HiddenLinearInstance& inst, std::uint64_t q_sim, std::uint64_t seed);

struct BLRecovery {
  Fraction y_over_r;
  Fraction alpha_y_over_r;
  // The second denominator divides the first, as it must for a good triple.
  bool consistent;
};

BLRecovery bl_recover(const BLTriple& triple, std::uint64_t q_sim, std::uint64_t den_bound);

}  // namespace ftsample
