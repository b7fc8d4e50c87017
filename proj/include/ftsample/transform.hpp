#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ftsample/superposition.hpp"

namespace ftsample {

// Forward uses ω_N = exp(+2πi/N); inverse uses the conjugate root. Both carry
// the symmetric 1/√N factor, so the pair is unitary.
enum class Direction { forward, inverse };

enum class Strategy {
  automatic,  // direct when nonzeros * size < kDirectCostLimit, else fast
  direct,     // exact summation over the nonzero inputs, O(nnz * size)
  fast,       // radix-2 for powers of two, chirp-z (Bluestein) otherwise
};

inline constexpr double kDirectCostLimit = 1e9;

// exp(±2πi m / n) for an exact integer numerator; the phase is reduced
// modulo n before the angle is formed.
Complex unit_root(std::uint64_t m, std::uint64_t n, Direction dir = Direction::forward);

// Zero-extends v to `size` entries.
Superposition embed(const Superposition& v, std::size_t size);

// FT_size applied to v zero-padded to `size`.
Superposition dft(const Superposition& v, std::size_t size,
                  Direction dir = Direction::forward,
                  Strategy strategy = Strategy::automatic);

ComplexVector dft_direct(std::span<const Complex> input, std::size_t size,
                         Direction dir = Direction::forward);
ComplexVector dft_fast(std::span<const Complex> input, std::size_t size,
                       Direction dir = Direction::forward);

// Direct summation for a batch of equal-length dense inputs. Produces the
// same values as calling dft_direct on each input, sharing the root table.
std::vector<ComplexVector> dft_direct_batch(
    std::span<const ComplexVector> inputs, std::size_t size,
    Direction dir = Direction::forward);

// Selected output entries of FT_size(input), each by direct summation over
// the nonzero inputs. Cost O(nnz * outputs.size()), independent of `size`.
ComplexVector dft_entries(std::span<const Complex> input, std::size_t size,
                          std::span<const std::size_t> outputs,
                          Direction dir = Direction::forward);

// Applies dft along every axis in `axis_order` (default 0..k-1). Output
// dims are `sizes`.
MultiSuperposition multidim_dft(const MultiSuperposition& v,
                                std::span<const std::size_t> sizes,
                                Direction dir = Direction::forward,
                                std::span<const std::size_t> axis_order = {});

// Selected entries of the k-dimensional transform, each by direct
// summation over the nonzero inputs.
ComplexVector multidim_dft_entries(
    const MultiSuperposition& v, std::span<const std::size_t> sizes,
    std::span<const std::vector<std::size_t>> outputs,
    Direction dir = Direction::forward);

}  // namespace ftsample
