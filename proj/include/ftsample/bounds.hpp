#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ftsample/sampling.hpp"
#include "ftsample/superposition.hpp"

namespace ftsample {

inline constexpr double kBoundTolerance = 1e-12;

enum class BoundDirection { lower, upper };

// One mechanized inequality: `computed` is the measured side, `bound` the
// printed threshold. slack is positive when the inequality holds.
struct BoundReport {
  using Params = std::vector<std::pair<std::string, double>>;

  std::string check;
  Params params;
  double computed = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  BoundDirection direction = BoundDirection::upper;
  bool pass = false;
  bool vacuous = false;
  // False when the inequality's own hypothesis on q was not met; the
  // comparison is still carried out.
  bool hypothesis_met = true;

  static BoundReport make(std::string check, Params params, double computed,
                          double bound, BoundDirection direction, bool vacuous = false);

  // Failure that counts against a run. A miss outside the inequality's own
  // hypothesis is reported but is not a counterexample.
  bool counts_as_failure() const { return !pass && !vacuous && hypothesis_met; }
};

bool bound_holds(double computed, double bound, BoundDirection direction);

std::string bound_report_to_json(const BoundReport& r);
std::string bound_report_csv_header();
std::string bound_report_to_csv(const BoundReport& r);

// Parameters of the threshold multiplier t(n) with q ≥ t(n)·p.
struct ThresholdParams {
  std::size_t p = 0;
  double n = 0.0;       // log2 p
  double k = 1.0;       // p = O(2^{n^k})
  double s_n = 1.0;     // target inverse accuracy
  double r = 1.0;
  double c = 1.0;
  std::size_t S_size = 1;
  double delta = 1.0;

  // r = 4 s(n), c = 1/(2 s(n)), |S| = p (the largest set the proof ranges over).
  static ThresholdParams for_accuracy(std::size_t p, double s_n);
  void validate() const;
};

// |x|_p: distance from x to the nearest multiple of p, in [0, p/2].
double signed_mod(double x, double p);

// η = FT_q(FT_p⁻¹ |j⟩) as a length-q vector (direct summation). Needs q ≥ p.
Superposition delta_response(std::size_t j, std::size_t p, std::size_t q);

// Claim 1 for the delta at j: .first is the lower bound on |η_{j'}|,
// .second the off-centre upper bound at the k ≠ j with the least slack.
std::pair<BoundReport, BoundReport> claim1_check(std::size_t j, std::size_t p,
                                                 std::size_t q);

// |(1/p) Σ_i ω_p^{ix}| ≤ δ/|x|_p with δ the distance from x to the nearest
// integer.
BoundReport observation_check(double x, std::size_t p);

// Inequality (1): lower bound on |γ_{j'}| for arbitrary β, where
// γ = FT_q(FT_p⁻¹ β).
BoundReport inequality1_lower(const Superposition& beta, std::size_t j, std::size_t q);

// Inequality (2): the cross-contamination double sum over s ∈ S, t ∈ [p]∖{s}.
BoundReport inequality2_sum(const Superposition& beta, const IndexSet& s, std::size_t q);

bool is_delta_uniform(std::span<const Complex> v, double delta);

// ‖γ_{S'}‖² for γ = FT_q(FT_p⁻¹ β), evaluated entry by entry.
double primed_restricted_mass(const Superposition& beta, const IndexSet& s, std::size_t q);

double lemma1_multiplier(std::size_t p, double r, double delta, double c);
BoundReport lemma1_check(const Superposition& beta, const IndexSet& s, double delta,
                         double r, std::size_t q);

struct DeltaUniformPartition {
  struct Cell {
    IndexSet members;
    int band;  // members satisfy δ^band < |β| ≤ δ^(band-1)
  };
  IndexSet discarded;
  std::vector<Cell> cells;
  double delta = 1.0;
  double cutoff = 0.0;
  double c = 0.0;
  // log_{1/δ} √(|S|·100r/c): the band count the construction allows.
  double band_limit = 0.0;
};

DeltaUniformPartition partition_delta_uniform(const Superposition& beta,
                                              const IndexSet& s, double r);

double lemma2_multiplier(std::size_t p, double r, double c, std::size_t s_size);
BoundReport lemma2_check(const Superposition& beta, const IndexSet& s, double r,
                         std::size_t q);

// t = 6400 r ln p √|ln(c/(100 r |S|))| / √(c |ln(1 − 1/(100 r))|).
double theorem_threshold(const ThresholdParams& params);

BoundReport theorem1_check(const Superposition& alpha, double s_n, std::size_t q);

// Multidimensional analogues. Indices are per-axis vectors.
std::pair<BoundReport, BoundReport> multidim_claim_check(
    const std::vector<std::size_t>& y, const std::vector<std::size_t>& p,
    const std::vector<std::size_t>& q);

double lemma3_multiplier(const std::vector<std::size_t>& p, double r, double c,
                         std::size_t s_size);

// S is a set of flat (row-major) indices into beta's tensor.
BoundReport multidim_lemma3_check(const MultiSuperposition& beta, const IndexSet& s,
                                  double r, const std::vector<std::size_t>& q);

BoundReport multidim_cross_term_check(const MultiSuperposition& beta,
                                      const IndexSet& s,
                                      const std::vector<std::size_t>& q);

}  // namespace ftsample
