#include "ftsample/number_theory.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <vector>

#include "ftsample/detail/wide.hpp"
#include "ftsample/error.hpp"

namespace ftsample {

using detail::i128;
using detail::u128;

Fraction::Fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(Errc::precondition, "fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const auto g = std::gcd(num, den);
  numerator = num / g;
  denominator = den / g;
}

std::string Fraction::to_string() const {
  return std::to_string(numerator) + "/" + std::to_string(denominator);
}

std::uint64_t euler_phi(std::uint64_t r) {
  if (r == 0) throw Error(Errc::precondition, "euler_phi needs r >= 1");
  std::uint64_t result = r;
  for (std::uint64_t f = 2; f * f <= r; ++f) {
    if (r % f != 0) continue;
    while (r % f == 0) r /= f;
    result -= result / f;
  }
  if (r > 1) result -= result / r;
  return result;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t modulus) {
  if (modulus == 0) throw Error(Errc::precondition, "pow_mod with modulus 0");
  u128 result = 1 % modulus;
  u128 b = base % modulus;
  while (exp) {
    if (exp & 1) result = result * b % modulus;
    b = b * b % modulus;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t multiplicative_order(std::uint64_t base, std::uint64_t modulus) {
  if (modulus < 2) throw Error(Errc::precondition, "multiplicative order needs modulus >= 2");
  if (std::gcd(base, modulus) != 1) {
    throw Error(Errc::precondition, "multiplicative order needs gcd(base, modulus) = 1");
  }
  const std::uint64_t b = base % modulus;
  std::uint64_t x = b;
  for (std::uint64_t k = 1;; ++k) {
    if (x == 1) return k;
    x = static_cast<std::uint64_t>(u128(x) * b % modulus);
  }
}

namespace {

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 2; c <= n; ++c) {
    bool prime = true;
    for (auto p : out) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(c);
  }
  return out;
}

void smallest_product_at_least(const std::vector<std::uint64_t>& primes, std::size_t from,
                               std::uint64_t acc, std::uint64_t lo, std::uint64_t hi,
                               std::uint64_t& best) {
  if (acc >= lo) {
    best = std::min(best, acc);
    return;  // extending only grows the product
  }
  for (std::size_t i = from; i < primes.size(); ++i) {
    if (u128(acc) * primes[i] > std::min<u128>(hi, best)) break;
    smallest_product_at_least(primes, i + 1, acc * primes[i], lo, hi, best);
  }
}

}  // namespace

std::uint64_t power_of_two_in_range(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t c = std::bit_ceil(std::max<std::uint64_t>(lo, 1));
  if (c < lo || c > hi) {
    throw Error(Errc::no_smooth_number, "no power of two in [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "]");
  }
  return c;
}

std::uint64_t smooth_number_in_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw Error(Errc::no_smooth_number, "empty range");
  const auto bound = std::max<std::uint64_t>(3, std::bit_width(hi));
  const auto primes = primes_up_to(std::max<std::uint64_t>(bound, 64));

  u128 primorial = 1;
  for (auto p : primes) {
    primorial *= p;
    if (primorial > hi) break;
    if (primorial >= lo) return static_cast<std::uint64_t>(primorial);
  }

  std::vector<std::uint64_t> small;
  for (auto p : primes) {
    if (p <= bound) small.push_back(p);
  }
  std::uint64_t best = UINT64_MAX;
  smallest_product_at_least(small, 0, 1, lo, hi, best);
  if (best <= hi) return best;
  return power_of_two_in_range(lo, hi);
}

Fraction continued_fraction_round(std::uint64_t s, std::uint64_t q, std::uint64_t den_bound) {
  if (q == 0 || s >= q) throw Error(Errc::precondition, "continued_fraction_round needs 0 <= s < q");
  if (den_bound == 0) throw Error(Errc::precondition, "continued_fraction_round needs den_bound >= 1");
  const i128 limit = std::max<std::uint64_t>(1, den_bound - 1);

  // Convergents h/k of s/q until the next denominator would pass the limit.
  i128 h0 = 0, k0 = 1, h1 = 1, k1 = 0;
  i128 num = s, den = q;
  while (den != 0) {
    const i128 a = num / den;
    const i128 k2 = k0 + a * k1;
    if (k2 > limit) break;
    const i128 h2 = h0 + a * h1;
    h0 = h1;
    k0 = k1;
    h1 = h2;
    k1 = k2;
    const i128 rem = num - a * den;
    num = den;
    den = rem;
  }
  if (den == 0) return Fraction(static_cast<std::int64_t>(h1), static_cast<std::int64_t>(k1));

  // Best semiconvergent on the other side of s/q.
  const i128 t = (limit - k0) / k1;
  const i128 hs = h0 + t * h1;
  const i128 ks = k0 + t * k1;

  // |s/q − h/k| compared as |s·k − h·q| / k without division.
  const auto err = [&](i128 h, i128 k) {
    i128 d = i128(s) * k - h * i128(q);
    return d < 0 ? -d : d;
  };
  const i128 lhs = err(h1, k1) * ks;
  const i128 rhs = err(hs, ks) * k1;
  bool take_convergent = lhs < rhs || (lhs == rhs && k1 <= ks);
  const i128 h = take_convergent ? h1 : hs;
  const i128 k = take_convergent ? k1 : ks;
  return Fraction(static_cast<std::int64_t>(h), static_cast<std::int64_t>(k));
}

}  // namespace ftsample
