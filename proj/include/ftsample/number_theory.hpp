#pragma once

#include <cstdint>
#include <string>

namespace ftsample {

// Reduced fraction with positive denominator.
struct Fraction {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  Fraction() = default;
  Fraction(std::int64_t num, std::int64_t den);

  std::string to_string() const;
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

std::uint64_t euler_phi(std::uint64_t r);

// Smallest k ≥ 1 with base^k ≡ 1 (mod modulus); needs gcd(base, modulus) = 1.
std::uint64_t multiplicative_order(std::uint64_t base, std::uint64_t modulus);

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t modulus);

// A product of distinct small primes in [lo, hi]: the first primorial in
// range, else the smallest squarefree number in range whose prime factors
// are at most max(3, bit length of hi), else a power of two.
std::uint64_t smooth_number_in_range(std::uint64_t lo, std::uint64_t hi);

// Smallest power of two in [lo, hi].
std::uint64_t power_of_two_in_range(std::uint64_t lo, std::uint64_t hi);

// The a/b closest to s/q over 1 ≤ b < den_bound (b = 1 when den_bound = 1).
// Exact ties go to the smaller denominator.
Fraction continued_fraction_round(std::uint64_t s, std::uint64_t q, std::uint64_t den_bound);

}  // namespace ftsample
