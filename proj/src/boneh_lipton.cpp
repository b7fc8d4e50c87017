#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "ftsample/applications.hpp"
#include "ftsample/detail/wide.hpp"
#include "ftsample/transform.hpp"

namespace ftsample {

namespace {

std::uint64_t smallest_prime_factor(std::uint64_t n) {
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) return f;
  }
  return n;
}

bool has_period(const std::vector<std::uint64_t>& labels, std::uint64_t d) {
  const auto r = labels.size();
  for (std::size_t x = 0; x < r; ++x) {
    if (labels[x] != labels[(x + d) % r]) return false;
  }
  return true;
}

std::uint64_t smallest_period(const std::vector<std::uint64_t>& labels) {
  const auto r = labels.size();
  for (std::uint64_t d = 1; d < r; ++d) {
    if (r % d == 0 && has_period(labels, d)) return d;
  }
  return r;
}

}  // namespace

std::uint64_t HiddenLinearInstance::f(std::uint64_t x, std::uint64_t y) const {
  const auto t = (detail::u128(x) + detail::u128(alpha) * y) % q_bl;
  return h(static_cast<std::uint64_t>(t));
}

void HiddenLinearInstance::validate() const {
  if (!h) throw Error(Errc::degenerate_instance, "hidden linear instance without h");
  if (r == 0 || m == 0 || q_bl == 0) throw Error(Errc::degenerate_instance, "r, m and q_bl must be positive");
  if (q_bl % r != 0) throw Error(Errc::degenerate_instance, "r must divide q_bl");
  if (alpha >= q_bl) throw Error(Errc::degenerate_instance, "alpha must lie in [0, q_bl)");
  std::vector<std::uint64_t> labels(r);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t x = 0; x < r; ++x) {
    labels[x] = h(x);
    if (++counts[labels[x]] > m) {
      throw Error(Errc::degenerate_instance, "h takes a value more than m times on [0, r)");
    }
    if (h(x + r) != labels[x]) throw Error(Errc::degenerate_instance, "h is not r-periodic");
  }
  if (smallest_period(labels) != r) {
    throw Error(Errc::degenerate_instance, "r is not the smallest period of h");
  }
}

bool HiddenLinearInstance::satisfies_recovery_conditions() const {
  return r == 1 || m < smallest_prime_factor(r);
}

HiddenLinearInstance hidden_linear_instance(std::uint64_t r, std::uint64_t m,
                                            std::uint64_t alpha, std::uint64_t q_bl,
                                            std::uint64_t seed) {
  if (r == 0 || m == 0) throw Error(Errc::degenerate_instance, "r and m must be positive");
  Rng rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::uint64_t> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    auto labels = std::make_shared<std::vector<std::uint64_t>>(r);
    std::uint64_t label = 0;
    for (std::size_t k = 0; k < r; ++label) {
      const auto group = 1 + std::uniform_int_distribution<std::uint64_t>(0, m - 1)(rng);
      for (std::uint64_t g = 0; g < group && k < r; ++g) (*labels)[order[k++]] = label;
    }
    if (smallest_period(*labels) != r) continue;

    HiddenLinearInstance inst;
    inst.h = [labels, r](std::uint64_t x) { return (*labels)[x % r]; };
    inst.q_bl = q_bl;
    inst.alpha = alpha;
    inst.m = m;
    inst.r = r;
    inst.spec = nlohmann::ordered_json{{"type", "affine_mod"}, {"r", r},       {"m", m},
                                       {"alpha", alpha},       {"q_bl", q_bl}, {"seed", seed}}
                    .dump();
    inst.validate();
    return inst;
  }
  throw Error(Errc::degenerate_instance, "could not draw h with smallest period r");
}

HiddenLinearInstance hidden_linear_instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config, std::string("instance JSON: ") + e.what());
  }
  const auto type = j.value("type", std::string());
  if (type != "affine_mod") {
    throw Error(Errc::config, "unknown hidden linear instance type '" + type + "' (valid: affine_mod)");
  }
  for (const char* field : {"r", "m", "alpha"}) {
    if (!j.contains(field)) throw Error(Errc::config, std::string("affine_mod needs ") + field);
  }
  const auto r = j["r"].get<std::uint64_t>();
  return hidden_linear_instance(r, j["m"].get<std::uint64_t>(), j["alpha"].get<std::uint64_t>(),
                                j.value("q_bl", r), j.value("seed", std::uint64_t{0}));
}

BoundReport bl_counting_check(const std::vector<std::int64_t>& b, std::uint64_t r) {
  if (b.empty()) throw Error(Errc::precondition, "bl_counting_check needs m >= 1");
  if (r == 0) throw Error(Errc::precondition, "bl_counting_check needs r >= 1");
  const auto sr = static_cast<std::int64_t>(r);
  std::size_t count = 0;
  for (std::uint64_t x = 0; x < r; ++x) {
    Complex sum{};
    for (auto bi : b) {
      const auto e = ((bi % sr) + sr) % sr;
      sum += unit_root((x * std::uint64_t(e)) % r, r);
    }
    if (std::abs(sum) >= 0.5 - kBoundTolerance) ++count;
  }
  return BoundReport::make("bl-counting", {{"r", double(r)}, {"m", double(b.size())}},
                           double(count), double(r) / double(b.size()), BoundDirection::lower);
}

BonehLiptonSimulator::BonehLiptonSimulator(HiddenLinearInstance inst, std::uint64_t q_sim)
    : inst_(std::move(inst)), q_sim_(q_sim) {
  inst_.validate();
  const auto r = inst_.r;
  if (q_sim_ <= 2 * r) {
    throw Error(Errc::precondition, "bl simulation needs q_sim > 2r");
  }

  std::map<std::uint64_t, std::vector<std::size_t>> cells;
  for (std::uint64_t x = 0; x < r; ++x) {
    for (std::uint64_t y = 0; y < r; ++y) cells[inst_.f(x, y)].push_back(x * r + y);
  }

  const PrimedMap pm(r, q_sim_);
  std::vector<std::vector<std::size_t>> lattice;
  lattice.reserve(r * r);
  for (std::uint64_t u = 0; u < r; ++u) {
    for (std::uint64_t v = 0; v < r; ++v) lattice.push_back({primed_index(u, pm), primed_index(v, pm)});
  }

  const std::vector<std::size_t> sizes = {q_sim_, q_sim_};
  double run = 0.0;
  for (const auto& [value, members] : cells) {
    ComplexVector amps(r * r);
    for (auto c : members) amps[c] = 1.0;
    const auto gamma = multidim_dft_entries(MultiSuperposition({r, r}, std::move(amps)), sizes, lattice);
    std::vector<double> m(gamma.size());
    double total = 0.0;
    for (std::size_t c = 0; c < m.size(); ++c) total += m[c] = std::norm(gamma[c]);
    if (total < 1e-15) {
      throw Error(Errc::degenerate_distribution, "no mass on the primed lattice");
    }
    for (auto& x : m) x /= total;
    primed_mass_ += total * double(members.size()) / double(r * r);
    values_.push_back(value);
    samplers_.emplace_back(m);
    masses_.push_back(std::move(m));
    run += double(members.size()) / double(r * r);
    value_cdf_.push_back(run);
  }
}

BLTriple BonehLiptonSimulator::sample(Rng& rng) const {
  const double u = uniform01(rng) * value_cdf_.back();
  auto it = std::upper_bound(value_cdf_.begin(), value_cdf_.end(), u);
  if (it == value_cdf_.end()) --it;
  const auto v = static_cast<std::size_t>(it - value_cdf_.begin());
  const auto cell = samplers_[v](rng);
  const PrimedMap pm(inst_.r, q_sim_);
  return {primed_index(cell / inst_.r, pm), primed_index(cell % inst_.r, pm), values_[v]};
}

double BonehLiptonSimulator::probability(const BLTriple& t) const {
  const auto it = std::find(values_.begin(), values_.end(), t.value);
  if (it == values_.end() || t.y1 >= q_sim_ || t.y2 >= q_sim_) return 0.0;
  const PrimedMap pm(inst_.r, q_sim_);
  const auto u = round_observation(t.y1, pm);
  const auto w = round_observation(t.y2, pm);
  if (!u || !w) return 0.0;
  const auto v = static_cast<std::size_t>(it - values_.begin());
  const double pv = value_cdf_[v] - (v ? value_cdf_[v - 1] : 0.0);
  return pv * masses_[v][*u * inst_.r + *w];
}

std::vector<std::pair<BLTriple, double>> BonehLiptonSimulator::support(double threshold) const {
  const PrimedMap pm(inst_.r, q_sim_);
  std::vector<std::pair<BLTriple, double>> out;
  for (std::size_t v = 0; v < values_.size(); ++v) {
    for (std::size_t c = 0; c < masses_[v].size(); ++c) {
      const BLTriple t{primed_index(c / inst_.r, pm), primed_index(c % inst_.r, pm), values_[v]};
      const double pr = probability(t);
      if (pr > threshold) out.emplace_back(t, pr);
    }
  }
  return out;
}

bool BonehLiptonSimulator::is_good(const BLTriple& t) const {
  const PrimedMap pm(inst_.r, q_sim_);
  const auto u = round_observation(t.y1, pm);
  const auto v = round_observation(t.y2, pm);
  return u && v && *v == (detail::u128(inst_.alpha) * *u) % inst_.r;
}

double BonehLiptonSimulator::good_mass() const {
  const PrimedMap pm(inst_.r, q_sim_);
  double total = 0.0;
  for (std::uint64_t u = 0; u < inst_.r; ++u) {
    const auto v = static_cast<std::uint64_t>((detail::u128(inst_.alpha) * u) % inst_.r);
    for (auto value : values_) {
      total += probability({primed_index(u, pm), primed_index(v, pm), value});
    }
  }
  return total;
}

BLTriple bl_sample(const HiddenLinearInstance& inst, std::uint64_t q_sim, std::uint64_t seed) {
  BonehLiptonSimulator sim(inst, q_sim);
  Rng rng(seed);
  return sim.sample(rng);
}

BLRecovery bl_recover(const BLTriple& triple, std::uint64_t q_sim, std::uint64_t den_bound) {
  const auto a = continued_fraction_round(triple.y1, q_sim, den_bound);
  const auto b = continued_fraction_round(triple.y2, q_sim, den_bound);
  return {a, b, a.denominator % b.denominator == 0};
}

}  // namespace ftsample
