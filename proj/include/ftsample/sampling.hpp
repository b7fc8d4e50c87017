#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ftsample/superposition.hpp"

namespace ftsample {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(Rng& rng);

// Probability masses over [p].
class Distribution {
 public:
  explicit Distribution(std::vector<double> masses);

  static Distribution point_mass(std::size_t p, std::size_t at);
  static Distribution uniform(std::size_t p);

  std::size_t p() const noexcept { return masses_.size(); }
  std::span<const double> masses() const noexcept { return masses_; }
  double operator[](std::size_t i) const { return masses_[i]; }

 private:
  std::vector<double> masses_;
};

// Sorted set of distinct indices within [0, ambient).
class IndexSet {
 public:
  IndexSet(std::vector<std::size_t> indices, std::size_t ambient);

  static IndexSet full(std::size_t ambient);
  static IndexSet empty(std::size_t ambient) { return IndexSet({}, ambient); }

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool is_empty() const noexcept { return indices_.empty(); }
  bool contains(std::size_t i) const;
  std::span<const std::size_t> indices() const noexcept { return indices_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t ambient_;
};

// The map i ↦ ⌊q·i/p⌋ from [p] into [q]. Requires q ≥ p, which makes the
// map strictly increasing.
class PrimedMap {
 public:
  PrimedMap(std::size_t p, std::size_t q);

  std::size_t p() const noexcept { return p_; }
  std::size_t q() const noexcept { return q_; }

 private:
  std::size_t p_;
  std::size_t q_;
};

std::size_t primed_index(std::size_t i, const PrimedMap& pm);
IndexSet primed_set(const IndexSet& s, const PrimedMap& pm);
std::vector<std::size_t> primed_indices(const PrimedMap& pm);

// Nearest-integer inverse of primed_index; empty when c is not of the form i'.
std::optional<std::size_t> round_observation(std::size_t c, const PrimedMap& pm);

// Copy of v with every entry outside s set to zero.
ComplexVector restrict_to(std::span<const Complex> v, const IndexSet& s);

// D_β(i) = |FT_p(α)_i|² with p = alpha.size().
Distribution dist_beta(const Superposition& alpha);

// D_γ(i) = |γ_{i'}|² / Σ_j |γ_{j'}|² with γ = FT_q(α) and q > p. Only the p
// primed entries of γ are evaluated, each by direct summation.
Distribution dist_gamma(const Superposition& alpha, std::size_t q);

// k-dimensional versions over the flat (row-major) index of [p_1]×…×[p_k].
Distribution dist_beta(const MultiSuperposition& alpha);
Distribution dist_gamma(const MultiSuperposition& alpha, std::span<const std::size_t> q);

// ‖γ_{[p]'}‖², the chance that observing γ lands on some primed index.
double primed_mass(const Superposition& alpha, std::size_t q);

double l1_distance(const Distribution& a, const Distribution& b);

// Inverse-CDF sampler over a fixed distribution.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> masses);
  explicit DiscreteSampler(const Distribution& d) : DiscreteSampler(d.masses()) {}

  std::size_t operator()(Rng& rng) const;
  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

std::size_t sample(const Distribution& d, std::uint64_t seed);

std::string distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const std::string& text);
std::string distribution_to_csv(const Distribution& d);

}  // namespace ftsample
