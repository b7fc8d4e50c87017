#include "ftsample/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ftsample/detail/wide.hpp"
#include "ftsample/error.hpp"
#include "ftsample/format.hpp"
#include "ftsample/transform.hpp"

namespace ftsample {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kDegenerateNormalizer = 1e-15;

}  // namespace

double uniform01(Rng& rng) { return double(rng() >> 11) * 0x1.0p-53; }

Distribution::Distribution(std::vector<double> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) throw Error(Errc::invalid_size, "distribution over an empty support");
  double total = 0.0;
  for (double m : masses_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw Error(Errc::degenerate_distribution, "distribution mass is negative or not finite");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(Errc::degenerate_distribution,
                "distribution masses sum to " + format_double(total));
  }
}

Distribution Distribution::point_mass(std::size_t p, std::size_t at) {
  if (at >= p) throw Error(Errc::out_of_range, "point mass outside support");
  std::vector<double> m(p, 0.0);
  m[at] = 1.0;
  return Distribution(std::move(m));
}

Distribution Distribution::uniform(std::size_t p) {
  if (p == 0) throw Error(Errc::invalid_size, "uniform distribution over an empty support");
  return Distribution(std::vector<double>(p, 1.0 / double(p)));
}

IndexSet::IndexSet(std::vector<std::size_t> indices, std::size_t ambient)
    : indices_(std::move(indices)), ambient_(ambient) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw Error(Errc::precondition, "index set contains duplicates");
  }
  if (!indices_.empty() && indices_.back() >= ambient_) {
    throw Error(Errc::out_of_range, "index " + std::to_string(indices_.back()) +
                                        " outside [0, " + std::to_string(ambient_) + ")");
  }
}

IndexSet IndexSet::full(std::size_t ambient) {
  std::vector<std::size_t> all(ambient);
  for (std::size_t i = 0; i < ambient; ++i) all[i] = i;
  return IndexSet(std::move(all), ambient);
}

bool IndexSet::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

PrimedMap::PrimedMap(std::size_t p, std::size_t q) : p_(p), q_(q) {
  if (p == 0) throw Error(Errc::invalid_size, "primed map needs p >= 1");
  if (q < p) {
    throw Error(Errc::domain_too_small, "primed map needs q >= p (got p=" +
                                            std::to_string(p) + ", q=" + std::to_string(q) + ")");
  }
}

std::size_t primed_index(std::size_t i, const PrimedMap& pm) {
  if (i >= pm.p()) {
    throw Error(Errc::out_of_range, "primed_index: i=" + std::to_string(i) +
                                        " outside [0, " + std::to_string(pm.p()) + ")");
  }
  return static_cast<std::size_t>(
      (static_cast<detail::u128>(pm.q()) * i) / pm.p());
}

IndexSet primed_set(const IndexSet& s, const PrimedMap& pm) {
  if (s.ambient() != pm.p()) {
    throw Error(Errc::dimension_mismatch, "index set ambient size differs from p");
  }
  std::vector<std::size_t> image;
  image.reserve(s.size());
  for (auto i : s) image.push_back(primed_index(i, pm));
  return IndexSet(std::move(image), pm.q());
}

std::vector<std::size_t> primed_indices(const PrimedMap& pm) {
  std::vector<std::size_t> out(pm.p());
  for (std::size_t i = 0; i < pm.p(); ++i) out[i] = primed_index(i, pm);
  return out;
}

std::optional<std::size_t> round_observation(std::size_t c, const PrimedMap& pm) {
  if (c >= pm.q()) {
    throw Error(Errc::out_of_range, "observation outside [0, q)");
  }
  // c = ⌊q·i/p⌋ forces i = ⌈c·p/q⌉. For q ≥ 2p this is also the nearest
  // integer to c·p/q; below that, nearest rounding can land one short.
  const auto num = static_cast<detail::u128>(c) * pm.p();
  const auto den = static_cast<detail::u128>(pm.q());
  const auto i = (num + den - 1) / den;
  if (i >= pm.p()) return std::nullopt;
  const auto candidate = static_cast<std::size_t>(i);
  if (primed_index(candidate, pm) != c) return std::nullopt;
  return candidate;
}

ComplexVector restrict_to(std::span<const Complex> v, const IndexSet& s) {
  if (s.ambient() != v.size()) {
    throw Error(Errc::dimension_mismatch, "restriction set ambient size differs from vector length");
  }
  ComplexVector out(v.size());
  for (auto i : s) out[i] = v[i];
  return out;
}

Distribution dist_beta(const Superposition& alpha) {
  const auto beta = dft(alpha, alpha.size(), Direction::forward);
  std::vector<double> masses(beta.size());
  double total = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) total += masses[i] = std::norm(beta[i]);
  if (total < kDegenerateNormalizer) {
    throw Error(Errc::degenerate_distribution, "transform has zero mass");
  }
  for (auto& m : masses) m /= total;
  return Distribution(std::move(masses));
}

namespace {

std::vector<double> primed_weights(const Superposition& alpha, std::size_t q) {
  if (q <= alpha.size()) {
    throw Error(Errc::domain_too_small, "dist_gamma needs q > p (got p=" +
                                            std::to_string(alpha.size()) +
                                            ", q=" + std::to_string(q) + ")");
  }
  const auto outputs = primed_indices(PrimedMap(alpha.size(), q));
  const auto gamma = dft_entries(alpha.amplitudes(), q, outputs, Direction::forward);
  std::vector<double> w(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) w[i] = std::norm(gamma[i]);
  return w;
}

}  // namespace

Distribution dist_gamma(const Superposition& alpha, std::size_t q) {
  auto w = primed_weights(alpha, q);
  double total = 0.0;
  for (double x : w) total += x;
  if (total < kDegenerateNormalizer) {
    throw Error(Errc::degenerate_distribution,
                "primed mass " + format_double(total) + " is below 1e-15");
  }
  for (auto& x : w) x /= total;
  return Distribution(std::move(w));
}

Distribution dist_beta(const MultiSuperposition& alpha) {
  const auto beta = multidim_dft(alpha, alpha.dims(), Direction::forward);
  std::vector<double> masses(beta.size());
  double total = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) total += masses[i] = std::norm(beta.amplitudes()[i]);
  if (total < kDegenerateNormalizer) {
    throw Error(Errc::degenerate_distribution, "transform has zero mass");
  }
  for (auto& m : masses) m /= total;
  return Distribution(std::move(masses));
}

Distribution dist_gamma(const MultiSuperposition& alpha, std::span<const std::size_t> q) {
  const auto& p = alpha.dims();
  if (q.size() != p.size()) throw Error(Errc::dimension_mismatch, "q has the wrong rank");
  std::vector<PrimedMap> maps;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (q[a] <= p[a]) throw Error(Errc::domain_too_small, "dist_gamma needs q_i > p_i");
    maps.emplace_back(p[a], q[a]);
  }
  std::vector<std::vector<std::size_t>> outputs(alpha.size());
  for (std::size_t f = 0; f < alpha.size(); ++f) {
    auto idx = alpha.unflatten(f);
    for (std::size_t a = 0; a < idx.size(); ++a) idx[a] = primed_index(idx[a], maps[a]);
    outputs[f] = std::move(idx);
  }
  const auto gamma = multidim_dft_entries(alpha, q, outputs);
  std::vector<double> w(gamma.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) total += w[i] = std::norm(gamma[i]);
  if (total < kDegenerateNormalizer) {
    throw Error(Errc::degenerate_distribution,
                "primed mass " + format_double(total) + " is below 1e-15");
  }
  for (auto& x : w) x /= total;
  return Distribution(std::move(w));
}

double primed_mass(const Superposition& alpha, std::size_t q) {
  double total = 0.0;
  for (double x : primed_weights(alpha, q)) total += x;
  return total;
}

double l1_distance(const Distribution& a, const Distribution& b) {
  if (a.p() != b.p()) {
    throw Error(Errc::dimension_mismatch, "l1_distance over supports of size " +
                                              std::to_string(a.p()) + " and " +
                                              std::to_string(b.p()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.p(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

DiscreteSampler::DiscreteSampler(std::span<const double> masses) : cdf_(masses.size()) {
  if (masses.empty()) throw Error(Errc::invalid_size, "sampler over an empty support");
  double run = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) cdf_[i] = run += masses[i];
  if (!(run > 0.0)) throw Error(Errc::degenerate_distribution, "sampler has zero total mass");
}

std::size_t DiscreteSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng) * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  // upper_bound skips zero-mass entries, whose cumulative value repeats.
  if (it == cdf_.end()) --it;
  return static_cast<std::size_t>(it - cdf_.begin());
}

std::size_t sample(const Distribution& d, std::uint64_t seed) {
  Rng rng(seed);
  return DiscreteSampler(d)(rng);
}

std::string distribution_to_json(const Distribution& d) {
  nlohmann::ordered_json j;
  j["p"] = d.p();
  j["masses"] = std::vector<double>(d.masses().begin(), d.masses().end());
  return j.dump();
}

Distribution distribution_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io, std::string("distribution JSON: ") + e.what());
  }
  if (!j.contains("p") || !j.contains("masses")) {
    throw Error(Errc::io, "distribution JSON needs fields p and masses");
  }
  auto masses = j.at("masses").get<std::vector<double>>();
  if (j.at("p").get<std::size_t>() != masses.size()) {
    throw Error(Errc::dimension_mismatch, "distribution JSON p disagrees with masses length");
  }
  return Distribution(std::move(masses));
}

std::string distribution_to_csv(const Distribution& d) {
  std::ostringstream out;
  out << "index,mass\n";
  for (std::size_t i = 0; i < d.p(); ++i) out << i << ',' << format_double(d[i]) << '\n';
  return out.str();
}

}  // namespace ftsample
