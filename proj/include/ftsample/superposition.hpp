#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ftsample {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kNormTolerance = 1e-9;

double l2_norm(std::span<const Complex> v);

// Finite complex amplitude vector. The public constructor normalizes to unit
// L2 norm; `raw` keeps the values as given, for intermediate quantities such
// as restrictions or partial transforms.
class Superposition {
 public:
  explicit Superposition(ComplexVector amplitudes);

  static Superposition raw(ComplexVector amplitudes);
  static Superposition basis(std::size_t length, std::size_t index);
  static Superposition uniform(std::size_t length);

  std::size_t size() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm() const { return l2_norm(amplitudes_); }
  bool is_normalized() const;
  std::size_t nonzero_count() const;

  // Moves the storage out; the superposition is left empty.
  ComplexVector release() && { return std::move(amplitudes_); }

 private:
  struct RawTag {};
  Superposition(ComplexVector amplitudes, RawTag);

  ComplexVector amplitudes_;
};

// k-dimensional amplitude tensor stored row-major (last axis fastest).
class MultiSuperposition {
 public:
  MultiSuperposition(std::vector<std::size_t> dims, ComplexVector amplitudes);

  static MultiSuperposition raw(std::vector<std::size_t> dims,
                                ComplexVector amplitudes);
  static MultiSuperposition basis(std::vector<std::size_t> dims,
                                  std::span<const std::size_t> index);

  std::size_t rank() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }

  const Complex& at(std::span<const std::size_t> index) const;
  std::size_t flat_index(std::span<const std::size_t> index) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;

  double norm() const { return l2_norm(amplitudes_); }

 private:
  struct RawTag {};
  MultiSuperposition(std::vector<std::size_t> dims, ComplexVector amplitudes,
                     RawTag);

  std::vector<std::size_t> dims_;
  ComplexVector amplitudes_;
};

}  // namespace ftsample
