#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "ftsample/applications.hpp"
#include "ftsample/transform.hpp"

namespace ftsample {

namespace {

using json = nlohmann::ordered_json;

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

std::uint64_t isqrt_ceil(std::uint64_t q) {
  auto s = static_cast<std::uint64_t>(std::sqrt(double(q)));
  while (s * s < q) ++s;
  while (s > 0 && (s - 1) * (s - 1) >= q) --s;
  return s;
}

}  // namespace

void PeriodicInstance::validate(std::uint64_t checked_range) const {
  if (!h) throw Error(Errc::degenerate_instance, "periodic instance without an evaluator");
  if (period == 0) throw Error(Errc::degenerate_instance, "period must be positive");
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < period; ++i) {
    if (!seen.insert(h(i)).second) {
      throw Error(Errc::degenerate_instance, "h is not injective on its fundamental period");
    }
  }
  for (std::uint64_t i = 0; i < std::max(checked_range, period); ++i) {
    if (h(i) != h(i + period)) throw Error(Errc::degenerate_instance, "h(i) != h(i + r)");
  }
  if (r_upper && !(*r_upper >= period && *r_upper < 2 * period)) {
    throw Error(Errc::degenerate_instance, "r_upper must satisfy r <= r_upper < 2r");
  }
}

PeriodicInstance modular_exponentiation_instance(std::uint64_t base, std::uint64_t modulus) {
  const auto r = multiplicative_order(base, modulus);
  PeriodicInstance inst;
  inst.h = [base, modulus](std::uint64_t i) { return pow_mod(base, i, modulus); };
  inst.period = r;
  inst.spec = json{{"type", "modular_exponentiation"}, {"base", base}, {"modulus", modulus}}.dump();
  return inst;
}

PeriodicInstance residue_instance(std::uint64_t r) {
  if (r == 0) throw Error(Errc::degenerate_instance, "residue instance needs r >= 1");
  PeriodicInstance inst;
  inst.h = [r](std::uint64_t i) { return i % r; };
  inst.period = r;
  inst.spec = json{{"type", "residue"}, {"r", r}}.dump();
  return inst;
}

PeriodicInstance random_modular_exponentiation_instance(Rng& rng, std::uint64_t min_r,
                                                        std::uint64_t max_r) {
  if (min_r < 1 || max_r < min_r) throw Error(Errc::precondition, "empty period range");
  const std::uint64_t modulus_cap = std::max<std::uint64_t>(64, 8 * max_r);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const auto modulus = 3 + uniform_below(rng, modulus_cap - 2);
    const auto base = 2 + uniform_below(rng, modulus - 2);
    if (std::gcd(base, modulus) != 1) continue;
    const auto r = multiplicative_order(base, modulus);
    if (r >= min_r && r <= max_r) return modular_exponentiation_instance(base, modulus);
  }
  throw Error(Errc::degenerate_instance, "no modular exponentiation instance found in range");
}

PeriodicInstance periodic_instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config, std::string("instance JSON: ") + e.what());
  }
  const auto type = j.value("type", std::string());
  if (type == "modular_exponentiation") {
    if (!j.contains("base") || !j.contains("modulus")) {
      throw Error(Errc::config, "modular_exponentiation needs base and modulus");
    }
    return modular_exponentiation_instance(j["base"].get<std::uint64_t>(),
                                           j["modulus"].get<std::uint64_t>());
  }
  if (type == "residue") return residue_instance(j.at("r").get<std::uint64_t>());
  throw Error(Errc::config, "unknown periodic instance type '" + type +
                                "' (valid: modular_exponentiation, residue)");
}

CosetState coset_state(const PeriodicInstance& inst, std::size_t P, std::uint64_t seed) {
  if (P < inst.period) {
    throw Error(Errc::degenerate_instance, "coset state needs P >= r (P=" + std::to_string(P) +
                                               ", r=" + std::to_string(inst.period) + ")");
  }
  Rng rng(seed);
  const auto value = inst.h(uniform_below(rng, P));
  ComplexVector amps(P);
  for (std::size_t i = 0; i < P; ++i) {
    if (inst.h(i) == value) amps[i] = 1.0;
  }
  return {Superposition(std::move(amps)), value};
}

IdealProbability shor_ideal_probability(std::uint64_t r, std::uint64_t t) {
  if (r == 0 || t == 0) throw Error(Errc::precondition, "shor_ideal_probability needs r, t >= 1");
  return {1.0 / (double(r) * double(r)), double(euler_phi(r)) / double(r)};
}

IdealSimulation simulate_ideal_sampling(const PeriodicInstance& inst, std::uint64_t t) {
  if (t == 0) throw Error(Errc::precondition, "simulate_ideal_sampling needs t >= 1");
  const std::uint64_t r = inst.period;
  const std::size_t n = r * t;
  IdealSimulation sim{r, t, {}};
  sim.mass.reserve(r);
  for (std::uint64_t i0 = 0; i0 < r; ++i0) {
    // Every value of h has exactly t preimages in [0, tr): probability 1/r.
    ComplexVector coset(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.h(i) == inst.h(i0)) coset[i] = 1.0;
    }
    const auto out = dft_direct(Superposition(std::move(coset)).amplitudes(), n);
    std::vector<double> m(n);
    for (std::size_t c = 0; c < n; ++c) m[c] = std::norm(out[c]) / double(r);
    sim.mass.push_back(std::move(m));
  }
  return sim;
}

double IdealSimulation::coprime_mass() const {
  double total = 0.0;
  for (const auto& row : mass) {
    for (std::uint64_t j = 0; j < r; ++j) {
      if (std::gcd(j, r) == 1) total += row[j * t];
    }
  }
  return total;
}

double IdealSimulation::total_mass() const {
  double total = 0.0;
  for (const auto& row : mass) {
    for (double x : row) total += x;
  }
  return total;
}

double near_coset_distance(const PeriodicInstance& inst, std::size_t P) {
  const std::uint64_t r = inst.period;
  const std::size_t t = P / r;
  if (t == 0) throw Error(Errc::degenerate_instance, "near_coset_distance needs P >= r");
  double worst = 0.0;
  for (std::uint64_t i0 = 0; i0 < r; ++i0) {
    const auto value = inst.h(i0);
    ComplexVector near(P), ideal(P);
    for (std::size_t i = 0; i < P; ++i) {
      if (inst.h(i) != value) continue;
      near[i] = 1.0;
      if (i < t * r) ideal[i] = 1.0;
    }
    const Superposition a(std::move(near)), b(std::move(ideal));
    double d = 0.0;
    for (std::size_t i = 0; i < P; ++i) d += std::norm(a[i] - b[i]);
    worst = std::max(worst, std::sqrt(d));
  }
  return worst;
}

std::shared_ptr<const DiscreteSampler> MeasurementCache::get(
    std::size_t q, const std::vector<std::size_t>& support) {
  auto key = std::make_pair(q, support);
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  if (support.empty()) throw Error(Errc::precondition, "measurement of an empty support");
  ComplexVector amps(support.back() + 1);
  for (auto i : support) amps[i] = 1.0;
  const auto out = dft(Superposition(std::move(amps)), q);
  std::vector<double> masses(q);
  for (std::size_t c = 0; c < q; ++c) masses[c] = std::norm(out[c]);
  auto sampler = std::make_shared<const DiscreteSampler>(masses);
  std::lock_guard lock(mutex_);
  return entries_.emplace(std::move(key), std::move(sampler)).first->second;
}

std::size_t MeasurementCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::size_t samples_per_guess(double s_n, std::uint64_t guess) {
  if (!(s_n > 0.0)) throw Error(Errc::precondition, "s_n must be positive");
  const double n = double(std::bit_width(std::max<std::uint64_t>(guess, 1)));
  return static_cast<std::size_t>(std::ceil(s_n * 8.0 * std::log2(2.0 + n)));
}

bool verify_period(const Evaluator& h, std::uint64_t candidate, std::size_t spot_checks) {
  if (candidate == 0) return false;
  if (h(0) != h(candidate)) return false;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(candidate);
  for (std::uint64_t i = 0; i < candidate; ++i) {
    if (!seen.insert(h(i)).second) return false;
  }
  for (std::uint64_t k = 1; k <= spot_checks; ++k) {
    const std::uint64_t x = k * k * 7919 + k;
    if (h(x) != h(x + candidate)) return false;
  }
  return true;
}

RecoveryResult recover_period(const Evaluator& h, std::uint64_t seed,
                              const RecoveryOptions& options) {
  if (options.q_multiplier < 1) throw Error(Errc::precondition, "q_multiplier must be >= 1");
  auto cache = options.cache ? options.cache : std::make_shared<MeasurementCache>();
  Rng rng(seed);
  std::vector<PeriodSample> samples;

  for (std::uint64_t guess = 1; guess <= options.max_guess; guess *= 2) {
    const auto p = smooth_number_in_range(guess * guess, 2 * guess * guess);
    const auto q = smooth_number_in_range(options.q_multiplier * p, 2 * options.q_multiplier * p);
    const auto den_bound = isqrt_ceil(q);

    std::vector<std::uint64_t> table(p);
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> preimages;
    for (std::size_t i = 0; i < p; ++i) preimages[table[i] = h(i)].push_back(i);
    const Evaluator cached = [&](std::uint64_t x) { return x < p ? table[x] : h(x); };

    std::vector<std::uint64_t> denominators;
    std::unordered_set<std::uint64_t> rejected;
    const auto attempt = [&](std::uint64_t candidate) {
      if (candidate < 1 || candidate > q || !rejected.insert(candidate).second) return false;
      return verify_period(cached, candidate, options.spot_checks);
    };

    const auto n = samples_per_guess(options.s_n, guess);
    for (std::size_t a = 0; a < n; ++a) {
      const auto value = table[uniform_below(rng, p)];
      const auto& support = preimages[value];
      std::vector<std::size_t> shape(support.size());
      for (std::size_t k = 0; k < support.size(); ++k) shape[k] = support[k] - support[0];
      const auto c = (*cache->get(q, shape))(rng);
      const auto frac = continued_fraction_round(c, q, den_bound);
      samples.push_back({guess, p, q, value, c, frac});

      // j/r reduces to a denominator dividing r; lcm over pairs of samples
      // recovers r once the numerators' common factors are gone.
      const auto d = static_cast<std::uint64_t>(frac.denominator);
      if (attempt(d)) return {d, std::move(samples)};
      for (auto e : denominators) {
        const auto l = std::lcm(d, e);
        if (attempt(l)) return {l, std::move(samples)};
      }
      if (std::find(denominators.begin(), denominators.end(), d) == denominators.end()) {
        denominators.push_back(d);
      }
    }
  }
  throw RecoveryFailed("period not recovered within guess budget " +
                           std::to_string(options.max_guess),
                       std::move(samples));
}

std::string pipeline_record_json(const PeriodicInstance& inst, std::uint64_t seed,
                                 const std::optional<RecoveryResult>& result,
                                 const std::vector<PeriodSample>& samples) {
  json rec;
  rec["instance"] = json::parse(inst.spec);
  rec["seed"] = seed;
  json arr = json::array();
  for (const auto& s : samples) {
    arr.push_back({{"guess", s.guess}, {"p", s.p}, {"q", s.q}, {"value", s.value},
                   {"c", s.c}, {"fraction", s.fraction.to_string()}});
  }
  rec["samples"] = std::move(arr);
  if (result) {
    rec["recovered"] = result->period;
  } else {
    rec["recovered"] = nullptr;
  }
  rec["correct"] = result && result->period == inst.period;
  rec["trials"] = samples.size();
  return rec.dump();
}

}  // namespace ftsample
