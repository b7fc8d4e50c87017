#include "ftsample/superposition.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "ftsample/error.hpp"

namespace ftsample {

double l2_norm(std::span<const Complex> v) {
  double sum = 0.0;
  for (const auto& z : v) sum += std::norm(z);
  return std::sqrt(sum);
}

namespace {

ComplexVector normalized(ComplexVector v) {
  const double n = l2_norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(Errc::invalid_size, "superposition has zero or non-finite norm");
  }
  for (auto& z : v) z /= n;
  return v;
}

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

void check_dims(const std::vector<std::size_t>& dims, std::size_t count) {
  if (dims.empty()) throw Error(Errc::invalid_size, "tensor needs at least one axis");
  for (auto d : dims) {
    if (d == 0) throw Error(Errc::invalid_size, "tensor axis of length zero");
  }
  if (product(dims) != count) {
    throw Error(Errc::dimension_mismatch,
                "tensor dims product " + std::to_string(product(dims)) +
                    " does not match element count " + std::to_string(count));
  }
}

}  // namespace

Superposition::Superposition(ComplexVector amplitudes)
    : Superposition(normalized(std::move(amplitudes)), RawTag{}) {}

Superposition::Superposition(ComplexVector amplitudes, RawTag)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) {
    throw Error(Errc::invalid_size, "superposition length must be at least 1");
  }
}

Superposition Superposition::raw(ComplexVector amplitudes) {
  return Superposition(std::move(amplitudes), RawTag{});
}

Superposition Superposition::basis(std::size_t length, std::size_t index) {
  if (index >= length) {
    throw Error(Errc::out_of_range, "basis index " + std::to_string(index) +
                                        " outside length " + std::to_string(length));
  }
  ComplexVector v(length);
  v[index] = 1.0;
  return Superposition(std::move(v), RawTag{});
}

Superposition Superposition::uniform(std::size_t length) {
  if (length == 0) throw Error(Errc::invalid_size, "uniform superposition of length 0");
  return Superposition(ComplexVector(length, Complex(1.0 / std::sqrt(double(length)))),
                       RawTag{});
}

bool Superposition::is_normalized() const {
  return std::abs(norm() - 1.0) <= kNormTolerance;
}

std::size_t Superposition::nonzero_count() const {
  std::size_t n = 0;
  for (const auto& z : amplitudes_) n += (z != Complex{});
  return n;
}

MultiSuperposition::MultiSuperposition(std::vector<std::size_t> dims,
                                       ComplexVector amplitudes)
    : MultiSuperposition(std::move(dims), normalized(std::move(amplitudes)),
                         RawTag{}) {}

MultiSuperposition::MultiSuperposition(std::vector<std::size_t> dims,
                                       ComplexVector amplitudes, RawTag)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  check_dims(dims_, amplitudes_.size());
}

MultiSuperposition MultiSuperposition::raw(std::vector<std::size_t> dims,
                                           ComplexVector amplitudes) {
  return MultiSuperposition(std::move(dims), std::move(amplitudes), RawTag{});
}

MultiSuperposition MultiSuperposition::basis(std::vector<std::size_t> dims,
                                             std::span<const std::size_t> index) {
  const std::size_t count = dims.empty() ? 0 : product(dims);
  MultiSuperposition out(std::move(dims), ComplexVector(count), RawTag{});
  out.amplitudes_[out.flat_index(index)] = 1.0;
  return out;
}

std::size_t MultiSuperposition::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) {
    throw Error(Errc::dimension_mismatch, "multi-index rank does not match tensor rank");
  }
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    if (index[a] >= dims_[a]) {
      throw Error(Errc::out_of_range, "multi-index component out of range");
    }
    flat = flat * dims_[a] + index[a];
  }
  return flat;
}

std::vector<std::size_t> MultiSuperposition::unflatten(std::size_t flat) const {
  std::vector<std::size_t> index(dims_.size());
  for (std::size_t a = dims_.size(); a-- > 0;) {
    index[a] = flat % dims_[a];
    flat /= dims_[a];
  }
  return index;
}

const Complex& MultiSuperposition::at(std::span<const std::size_t> index) const {
  return amplitudes_[flat_index(index)];
}

}  // namespace ftsample
