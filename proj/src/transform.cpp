#include "ftsample/transform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ftsample/error.hpp"

namespace ftsample {

namespace {

// Sizes up to this bound tabulate their roots of unity for direct summation.
constexpr std::size_t kRootTableLimit = std::size_t{1} << 21;

struct Nonzero {
  std::uint64_t index;
  Complex value;
};

std::vector<Nonzero> nonzeros(std::span<const Complex> input) {
  std::vector<Nonzero> out;
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] != Complex{}) out.push_back({i, input[i]});
  }
  return out;
}

void check_size(std::size_t input_length, std::size_t size) {
  if (size == 0) throw Error(Errc::invalid_size, "transform size must be positive");
  if (size < input_length) {
    throw Error(Errc::domain_too_small,
                "transform size " + std::to_string(size) +
                    " is smaller than input length " + std::to_string(input_length));
  }
}

// Split real/imaginary root table for one direction.
struct RootTable {
  std::vector<double> re;
  std::vector<double> im;

  RootTable(std::size_t n, Direction dir) : re(n), im(n) {
    for (std::size_t m = 0; m < n; ++m) {
      const Complex w = unit_root(m, n, dir);
      re[m] = w.real();
      im[m] = w.imag();
    }
  }
};

// Unnormalized in-place radix-2 transform computing Σ x_n ω^{nk} with ω the
// root for `dir`. data.size() must be a power of two.
void radix2_inplace(std::span<Complex> data, Direction dir) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  std::vector<Complex> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) twiddle[k] = unit_root(k, n, dir);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex t = data[start + k + half] * twiddle[k * step];
        const Complex u = data[start + k];
        data[start + k] = u + t;
        data[start + k + half] = u - t;
      }
    }
  }
}

ComplexVector bluestein(std::span<const Complex> input, std::size_t n, Direction dir) {
  const std::size_t m = std::bit_ceil(2 * n - 1);
  const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
  std::vector<Complex> chirp(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    // exp(±πi k²/n) = root of order 2n raised to k² mod 2n.
    chirp[k] = unit_root((k * k) % two_n, two_n, dir);
  }
  std::vector<Complex> a(m), b(m);
  for (std::size_t k = 0; k < input.size(); ++k) a[k] = input[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
  radix2_inplace(a, Direction::forward);
  radix2_inplace(b, Direction::forward);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  radix2_inplace(a, Direction::inverse);
  const double scale = 1.0 / (double(m) * std::sqrt(double(n)));
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k] * scale;
  return out;
}

ComplexVector transform_line(std::span<const Complex> input, std::size_t size,
                             Direction dir, Strategy strategy) {
  if (strategy == Strategy::automatic) {
    std::size_t nnz = 0;
    for (const auto& z : input) nnz += (z != Complex{});
    strategy = double(nnz) * double(size) < kDirectCostLimit ? Strategy::direct
                                                             : Strategy::fast;
  }
  return strategy == Strategy::direct ? dft_direct(input, size, dir)
                                      : dft_fast(input, size, dir);
}

}  // namespace

Complex unit_root(std::uint64_t m, std::uint64_t n, Direction dir) {
  m %= n;
  // Fold into (-n/2, n/2] so the angle stays as small as possible.
  const double numer = 2 * m > n ? -double(n - m) : double(m);
  double angle = 2.0 * std::numbers::pi * numer / double(n);
  if (dir == Direction::inverse) angle = -angle;
  return {std::cos(angle), std::sin(angle)};
}

Superposition embed(const Superposition& v, std::size_t size) {
  check_size(v.size(), size);
  ComplexVector out(size);
  std::copy(v.amplitudes().begin(), v.amplitudes().end(), out.begin());
  return Superposition::raw(std::move(out));
}

Superposition dft(const Superposition& v, std::size_t size, Direction dir,
                  Strategy strategy) {
  check_size(v.size(), size);
  return Superposition::raw(transform_line(v.amplitudes(), size, dir, strategy));
}

ComplexVector dft_direct(std::span<const Complex> input, std::size_t size,
                         Direction dir) {
  check_size(input.size(), size);
  const auto nz = nonzeros(input);
  const double scale = 1.0 / std::sqrt(double(size));
  ComplexVector out(size);
  if (nz.empty()) return out;
  const std::uint64_t n = size;

  if (size <= kRootTableLimit) {
    const RootTable table(size, dir);
    const bool dense = nz.size() == input.size();
    for (std::uint64_t c = 0; c < n; ++c) {
      double re = 0.0, im = 0.0;
      if (dense) {
        std::uint64_t m = 0;
        for (const auto& [i, z] : nz) {
          re += z.real() * table.re[m] - z.imag() * table.im[m];
          im += z.real() * table.im[m] + z.imag() * table.re[m];
          m += c;
          if (m >= n) m -= n;
        }
      } else {
        for (const auto& [i, z] : nz) {
          const std::uint64_t m = (i * c) % n;
          re += z.real() * table.re[m] - z.imag() * table.im[m];
          im += z.real() * table.im[m] + z.imag() * table.re[m];
        }
      }
      out[c] = Complex(re, im) * scale;
    }
    return out;
  }

  for (std::uint64_t c = 0; c < n; ++c) {
    Complex acc{};
    for (const auto& [i, z] : nz) acc += z * unit_root((i * c) % n, n, dir);
    out[c] = acc * scale;
  }
  return out;
}

ComplexVector dft_fast(std::span<const Complex> input, std::size_t size,
                       Direction dir) {
  check_size(input.size(), size);
  if (size == 1) return ComplexVector(input.begin(), input.end());
  if (std::has_single_bit(size)) {
    ComplexVector out(size);
    std::copy(input.begin(), input.end(), out.begin());
    radix2_inplace(out, dir);
    const double scale = 1.0 / std::sqrt(double(size));
    for (auto& z : out) z *= scale;
    return out;
  }
  return bluestein(input, size, dir);
}

std::vector<ComplexVector> dft_direct_batch(std::span<const ComplexVector> inputs,
                                            std::size_t size, Direction dir) {
  std::vector<ComplexVector> out(inputs.size(), ComplexVector(size));
  if (inputs.empty()) return out;
  const std::size_t len = inputs.front().size();
  for (const auto& v : inputs) {
    if (v.size() != len) {
      throw Error(Errc::dimension_mismatch, "batch inputs must share one length");
    }
  }
  check_size(len, size);
  if (size > kRootTableLimit) {
    for (std::size_t b = 0; b < inputs.size(); ++b) out[b] = dft_direct(inputs[b], size, dir);
    return out;
  }

  const std::size_t batch = inputs.size();
  const RootTable table(size, dir);
  // Transposed copies so the innermost loop runs over the batch.
  std::vector<double> vre(len * batch), vim(len * batch);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < len; ++i) {
      vre[i * batch + b] = inputs[b][i].real();
      vim[i * batch + b] = inputs[b][i].imag();
    }
  }
  constexpr std::size_t kBlock = 8;
  std::vector<double> acc_re(kBlock * batch), acc_im(kBlock * batch);
  const double scale = 1.0 / std::sqrt(double(size));
  const std::uint64_t n = size;
  for (std::uint64_t c0 = 0; c0 < n; c0 += kBlock) {
    const std::size_t width = std::min<std::uint64_t>(kBlock, n - c0);
    std::fill(acc_re.begin(), acc_re.end(), 0.0);
    std::fill(acc_im.begin(), acc_im.end(), 0.0);
    std::uint64_t phase[kBlock] = {};
    for (std::size_t i = 0; i < len; ++i) {
      const double* xr = &vre[i * batch];
      const double* xi = &vim[i * batch];
      for (std::size_t w = 0; w < width; ++w) {
        const double wr = table.re[phase[w]];
        const double wi = table.im[phase[w]];
        double* ar = &acc_re[w * batch];
        double* ai = &acc_im[w * batch];
        for (std::size_t b = 0; b < batch; ++b) {
          ar[b] += xr[b] * wr - xi[b] * wi;
          ai[b] += xr[b] * wi + xi[b] * wr;
        }
        phase[w] += c0 + w;
        if (phase[w] >= n) phase[w] -= n;
      }
    }
    for (std::size_t w = 0; w < width; ++w) {
      for (std::size_t b = 0; b < batch; ++b) {
        out[b][c0 + w] = Complex(acc_re[w * batch + b], acc_im[w * batch + b]) * scale;
      }
    }
  }
  return out;
}

ComplexVector dft_entries(std::span<const Complex> input, std::size_t size,
                          std::span<const std::size_t> outputs, Direction dir) {
  check_size(input.size(), size);
  const auto nz = nonzeros(input);
  const std::uint64_t n = size;
  const double scale = 1.0 / std::sqrt(double(size));
  ComplexVector out(outputs.size());
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const std::uint64_t c = outputs[k];
    if (c >= n) throw Error(Errc::out_of_range, "requested output index beyond transform size");
    Complex acc{};
    for (const auto& [i, z] : nz) acc += z * unit_root((i * c) % n, n, dir);
    out[k] = acc * scale;
  }
  return out;
}

MultiSuperposition multidim_dft(const MultiSuperposition& v,
                                std::span<const std::size_t> sizes, Direction dir,
                                std::span<const std::size_t> axis_order) {
  const std::size_t k = v.rank();
  if (sizes.size() != k) {
    throw Error(Errc::dimension_mismatch,
                "transform sizes have rank " + std::to_string(sizes.size()) +
                    ", tensor has rank " + std::to_string(k));
  }
  std::vector<std::size_t> order(k);
  if (axis_order.empty()) {
    std::iota(order.begin(), order.end(), std::size_t{0});
  } else {
    order.assign(axis_order.begin(), axis_order.end());
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t a = 0; a < sorted.size(); ++a) {
      if (sorted.size() != k || sorted[a] != a) {
        throw Error(Errc::dimension_mismatch, "axis order is not a permutation of the axes");
      }
    }
  }
  for (std::size_t a = 0; a < k; ++a) check_size(v.dims()[a], sizes[a]);

  std::vector<std::size_t> dims = v.dims();
  ComplexVector data(v.amplitudes().begin(), v.amplitudes().end());
  for (const std::size_t axis : order) {
    std::size_t outer = 1, inner = 1;
    for (std::size_t a = 0; a < axis; ++a) outer *= dims[a];
    for (std::size_t a = axis + 1; a < k; ++a) inner *= dims[a];
    const std::size_t from = dims[axis];
    const std::size_t to = sizes[axis];
    ComplexVector next(outer * to * inner);
    ComplexVector line(from);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < inner; ++in) {
        for (std::size_t i = 0; i < from; ++i) line[i] = data[(o * from + i) * inner + in];
        const auto t = transform_line(line, to, dir, Strategy::automatic);
        for (std::size_t c = 0; c < to; ++c) next[(o * to + c) * inner + in] = t[c];
      }
    }
    dims[axis] = to;
    data = std::move(next);
  }
  return MultiSuperposition::raw(std::move(dims), std::move(data));
}

ComplexVector multidim_dft_entries(const MultiSuperposition& v,
                                   std::span<const std::size_t> sizes,
                                   std::span<const std::vector<std::size_t>> outputs,
                                   Direction dir) {
  const std::size_t k = v.rank();
  if (sizes.size() != k) {
    throw Error(Errc::dimension_mismatch, "transform sizes do not match tensor rank");
  }
  for (std::size_t a = 0; a < k; ++a) check_size(v.dims()[a], sizes[a]);
  double total = 1.0;
  for (auto q : sizes) total *= double(q);
  const double scale = 1.0 / std::sqrt(total);

  std::vector<std::vector<std::size_t>> support;
  std::vector<Complex> values;
  for (std::size_t f = 0; f < v.size(); ++f) {
    if (v.amplitudes()[f] != Complex{}) {
      support.push_back(v.unflatten(f));
      values.push_back(v.amplitudes()[f]);
    }
  }
  ComplexVector out(outputs.size());
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    const auto& x = outputs[o];
    if (x.size() != k) throw Error(Errc::dimension_mismatch, "output index rank mismatch");
    Complex acc{};
    for (std::size_t s = 0; s < support.size(); ++s) {
      Complex term = values[s];
      for (std::size_t a = 0; a < k; ++a) {
        if (x[a] >= sizes[a]) throw Error(Errc::out_of_range, "output index beyond transform size");
        term *= unit_root((std::uint64_t(support[s][a]) * x[a]) % sizes[a], sizes[a], dir);
      }
      acc += term;
    }
    out[o] = acc * scale;
  }
  return out;
}

}  // namespace ftsample
