#include "ftsample/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "ftsample/applications.hpp"
#include "ftsample/format.hpp"
#include "ftsample/sampling.hpp"
#include "ftsample/transform.hpp"

namespace ftsample {

namespace {

using json = nlohmann::ordered_json;
using Task = std::function<ExperimentOutput()>;

constexpr double kCollapseTolerance = 1e-9;
constexpr std::size_t kManifestFailures = 20;

ComplexVector gaussian_vector(Rng& rng, std::size_t n) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

Superposition random_superposition(Rng& rng, std::size_t n) {
  return Superposition(gaussian_vector(rng, n));
}

IndexSet random_subset(Rng& rng, std::size_t n) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() >> 63) members.push_back(i);
  }
  if (members.empty()) members.push_back(rng() % n);
  return IndexSet(std::move(members), n);
}

std::uint64_t uniform_in(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

std::uint64_t q_for(std::uint64_t p, double multiplier, std::uint64_t offset) {
  return std::uint64_t(std::llround(multiplier * double(p))) + offset;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double restricted_mass(const Superposition& beta, const IndexSet& s) {
  double c = 0.0;
  for (auto i : s) c += std::norm(beta[i]);
  return c;
}

ExperimentOutput checks_only(std::vector<BoundReport> checks) {
  ExperimentOutput out;
  out.checks = std::move(checks);
  out.rows_are_checks = true;
  return out;
}

// Non-increasing medians along a ladder of q values, as upper-bound checks.
void monotone_checks(const std::string& name, BoundReport::Params base,
                     const std::vector<std::uint64_t>& qs, const std::vector<double>& medians,
                     std::vector<BoundReport>& out) {
  for (std::size_t i = 1; i < medians.size(); ++i) {
    auto params = base;
    params.emplace_back("q_prev", double(qs[i - 1]));
    params.emplace_back("q", double(qs[i]));
    out.push_back(BoundReport::make(name, std::move(params), medians[i], medians[i - 1],
                                    BoundDirection::upper));
  }
}

std::vector<Task> claim1_tasks(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  for (auto p : c.grid.p) {
    std::vector<std::uint64_t> qs;
    if (c.grid.q_mode == "range") {
      const double top = *std::max_element(c.grid.q_multiplier.begin(), c.grid.q_multiplier.end());
      for (auto q = 2 * p + 1; q <= std::uint64_t(std::llround(top * double(p))); ++q) qs.push_back(q);
    } else {
      for (auto m : c.grid.q_multiplier) qs.push_back(q_for(p, m, c.grid.q_offset));
    }
    tasks.push_back([p, qs] {
      std::vector<BoundReport> out;
      for (auto q : qs) {
        for (std::size_t j = 0; j < p; ++j) {
          auto [centre, off] = claim1_check(j, p, q);
          out.push_back(std::move(centre));
          out.push_back(std::move(off));
        }
      }
      return checks_only(std::move(out));
    });
  }
  return tasks;
}

std::vector<Task> observation_tasks(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < c.grid.p.size(); ++i) {
    const auto p = c.grid.p[i];
    const auto seed = derive_seed(c.seed, i);
    const auto trials = c.trials;
    tasks.push_back([p, seed, trials] {
      Rng rng(seed);
      std::vector<BoundReport> out;
      for (std::size_t t = 0; t < trials;) {
        const double x = uniform01(rng) * double(p);
        if (signed_mod(x, double(p)) == 0.0) continue;
        out.push_back(observation_check(x, p));
        ++t;
      }
      for (std::uint64_t k = 1; k < 2 * p; ++k) out.push_back(observation_check(double(k) / 2.0, p));
      return checks_only(std::move(out));
    });
  }
  return tasks;
}

std::vector<Task> l1_tasks(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  auto mults = c.grid.q_multiplier;
  std::sort(mults.begin(), mults.end());
  for (std::size_t i = 0; i < c.grid.p.size(); ++i) {
    const auto p = c.grid.p[i];
    const auto seed = derive_seed(c.seed, i);
    const auto trials = c.trials;
    const auto offset = c.grid.q_offset;
    tasks.push_back([=] {
      Rng rng(seed);
      std::vector<Superposition> alphas;
      for (std::size_t t = 0; t < trials; ++t) alphas.push_back(random_superposition(rng, p));
      std::vector<Distribution> betas;
      for (const auto& a : alphas) betas.push_back(dist_beta(a));

      ExperimentOutput out;
      std::vector<std::uint64_t> qs;
      std::vector<double> medians;
      for (auto m : mults) {
        const auto q = q_for(p, m, offset);
        std::vector<double> d;
        for (std::size_t t = 0; t < trials; ++t) d.push_back(l1_distance(betas[t], dist_gamma(alphas[t], q)));
        const double med = median(d);
        out.rows.push_back({{"p", p}, {"multiplier", m}, {"q", q}, {"trials", trials},
                            {"median_l1", med}, {"max_l1", *std::max_element(d.begin(), d.end())}});
        qs.push_back(q);
        medians.push_back(med);
      }
      monotone_checks("l1-monotone", {{"p", double(p)}}, qs, medians, out.checks);
      return out;
    });
  }
  return tasks;
}

std::vector<Task> lemma_tasks(const ExperimentConfig& c, bool first) {
  std::vector<Task> tasks;
  std::size_t index = 0;
  for (auto p : c.grid.p) {
    for (auto r : c.grid.r) {
      const auto seed = derive_seed(c.seed, index++);
      tasks.push_back([=, grid = c.grid, trials = c.trials] {
        Rng rng(seed);
        std::vector<BoundReport> out;
        for (std::size_t t = 0; t < trials; ++t) {
          const bool constructed = t % 2 == 0;
          auto s = random_subset(rng, p);
          auto raw = gaussian_vector(rng, p);
          double delta = 1.0;
          if (constructed && first) {
            // Magnitudes on S drawn from [δ, 1] with random phases.
            delta = grid.delta[(t / 2) % grid.delta.size()];
            for (auto i : s) {
              const double mag = delta + (1.0 - delta) * uniform01(rng);
              raw[i] = std::polar(mag, 2.0 * std::numbers::pi * uniform01(rng));
            }
          } else if (constructed) {
            // Two tiers on S: half near 1, half three orders of magnitude down.
            std::size_t k = 0;
            for (auto i : s) raw[i] = std::polar(k++ % 2 ? 1e-3 : 1.0, 2.0 * std::numbers::pi * uniform01(rng));
          }
          const Superposition beta(std::move(raw));
          const double c_mass = restricted_mass(beta, s);
          if (first && !constructed) {
            double lo = INFINITY, hi = 0.0;
            for (auto i : s) {
              lo = std::min(lo, std::abs(beta[i]));
              hi = std::max(hi, std::abs(beta[i]));
            }
            delta = lo / hi;
          }

          std::vector<std::uint64_t> qs;
          if (grid.q_mode == "threshold") {
            const double mult = first ? lemma1_multiplier(p, r, delta, c_mass)
                                      : lemma2_multiplier(p, r, c_mass, s.size());
            qs.push_back(std::uint64_t(std::floor(mult * double(p))) + 1);
          } else {
            for (auto m : grid.q_multiplier) qs.push_back(q_for(p, m, grid.q_offset));
          }
          for (auto q : qs) {
            if (q <= p) continue;
            out.push_back(first ? lemma1_check(beta, s, delta, r, q) : lemma2_check(beta, s, r, q));
            out.back().params.emplace_back("constructed", constructed ? 1.0 : 0.0);
          }
        }
        return checks_only(std::move(out));
      });
    }
  }
  return tasks;
}

std::vector<Task> theorem1_tasks(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  auto mults = c.grid.q_multiplier;
  std::sort(mults.begin(), mults.end());
  std::size_t index = 0;
  for (auto p : c.grid.p) {
    for (auto s_n : c.grid.s_n) {
      const auto seed = derive_seed(c.seed, index++);
      tasks.push_back([=, trials = c.trials, offset = c.grid.q_offset] {
        Rng rng(seed);
        std::vector<Superposition> alphas;
        for (std::size_t t = 0; t < trials; ++t) alphas.push_back(random_superposition(rng, p));
        const double threshold = theorem_threshold(ThresholdParams::for_accuracy(p, s_n));
        const auto q = std::uint64_t(std::ceil(threshold * double(p)));

        ExperimentOutput out;
        out.rows_are_checks = true;
        for (const auto& a : alphas) out.checks.push_back(theorem1_check(a, s_n, q));

        std::vector<std::uint64_t> qs;
        std::vector<double> medians;
        for (auto m : mults) {
          const auto qm = q_for(p, m, offset);
          std::vector<double> d;
          for (const auto& a : alphas) d.push_back(l1_distance(dist_beta(a), dist_gamma(a, qm)));
          const double med = median(d);
          out.summary.push_back({{"p", p}, {"s_n", s_n}, {"multiplier", m}, {"q", qm},
                                 {"trials", trials}, {"median_l1", med},
                                 {"max_l1", *std::max_element(d.begin(), d.end())}});
          qs.push_back(qm);
          medians.push_back(med);
        }
        monotone_checks("l1-monotone", {{"p", double(p)}, {"s_n", s_n}}, qs, medians, out.checks);
        return out;
      });
    }
  }
  return tasks;
}

std::vector<std::vector<std::size_t>> cartesian(const std::vector<std::uint64_t>& values,
                                                std::size_t k) {
  std::vector<std::vector<std::size_t>> out = {{}};
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& prefix : out) {
      for (auto v : values) {
        auto e = prefix;
        e.push_back(v);
        next.push_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::vector<std::size_t>> box(const std::vector<std::size_t>& lo,
                                          const std::vector<std::size_t>& hi) {
  std::vector<std::vector<std::size_t>> out = {{}};
  for (std::size_t a = 0; a < lo.size(); ++a) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& prefix : out) {
      for (auto v = lo[a]; v <= hi[a]; ++v) {
        auto e = prefix;
        e.push_back(v);
        next.push_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<Task> multidim_tasks(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  const auto shapes = cartesian(c.grid.p, c.grid.k);
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto p = shapes[i];
    const auto seed = derive_seed(c.seed, i);
    tasks.push_back([=, trials = c.trials, q_max = c.grid.q_max, mults = c.grid.q_multiplier] {
      Rng rng(seed);
      std::vector<BoundReport> out;
      const auto k = p.size();
      std::vector<std::size_t> q_lo(k), q_hi(k, q_max), zero(k, 0), top(k);
      std::size_t cells = 1;
      for (std::size_t a = 0; a < k; ++a) {
        q_lo[a] = 2 * p[a] + 1;
        top[a] = p[a] - 1;
        cells *= p[a];
      }
      for (const auto& q : box(q_lo, q_hi)) {
        for (const auto& y : box(zero, top)) {
          auto [centre, off] = multidim_claim_check(y, p, q);
          out.push_back(std::move(centre));
          out.push_back(std::move(off));
        }
      }
      for (auto m : mults) {
        std::vector<std::size_t> q(k);
        bool valid = true;
        for (std::size_t a = 0; a < k; ++a) {
          q[a] = std::size_t(std::llround(m * double(p[a])));
          valid = valid && q[a] > p[a];
        }
        if (!valid) continue;
        for (std::size_t t = 0; t < trials; ++t) {
          const MultiSuperposition alpha(p, gaussian_vector(rng, cells));
          const double d = l1_distance(dist_beta(alpha), dist_gamma(alpha, q));
          BoundReport::Params params;
          for (std::size_t a = 0; a < k; ++a) {
            params.emplace_back("p" + std::to_string(a), double(p[a]));
            params.emplace_back("q" + std::to_string(a), double(q[a]));
          }
          out.push_back(BoundReport::make("multidim-collapse", std::move(params), d,
                                          kCollapseTolerance, BoundDirection::upper));
        }
      }
      bool has_cross_terms = true;
      for (auto pa : p) has_cross_terms = has_cross_terms && pa >= 2;
      if (has_cross_terms) {
        for (std::size_t t = 0; t < trials; ++t) {
          std::vector<std::size_t> q(k);
          for (std::size_t a = 0; a < k; ++a) q[a] = uniform_in(rng, 2 * p[a] + 1, 24 * p[a]);
          const MultiSuperposition beta(p, gaussian_vector(rng, cells));
          out.push_back(multidim_cross_term_check(beta, random_subset(rng, cells), q));
        }
      }
      return checks_only(std::move(out));
    });
  }
  return tasks;
}

std::vector<Task> shor_tasks(const ExperimentConfig& c) {
  std::vector<PeriodicInstance> instances;
  for (const auto& s : c.instances) instances.push_back(periodic_instance_from_json(s));
  Rng gen(derive_seed(c.seed, 0xfeedULL));
  for (std::size_t i = 0; i < c.random_instances; ++i) {
    instances.push_back(random_modular_exponentiation_instance(gen, 2, c.max_r));
  }

  RecoveryOptions options;
  options.s_n = c.grid.s_n.front();
  options.q_multiplier = std::uint64_t(c.grid.q_multiplier.front());

  std::vector<Task> tasks;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    tasks.push_back([=, inst = instances[i], runs = c.trials, base = derive_seed(c.seed, i)] {
      auto opts = options;
      opts.cache = std::make_shared<MeasurementCache>();
      ExperimentOutput out;
      const json spec = json::parse(inst.spec);
      const BoundReport::Params params = {{"r", double(inst.period)}};
      std::size_t successes = 0;
      bool all_verified = true;
      for (std::size_t run = 0; run < runs; ++run) {
        const auto seed = derive_seed(base, run);
        std::optional<RecoveryResult> result;
        std::vector<PeriodSample> samples;
        try {
          result = recover_period(inst.h, seed, opts);
          samples = result->samples;
        } catch (const RecoveryFailed& e) {
          samples = e.samples();
        }
        out.rows.push_back(json::parse(pipeline_record_json(inst, seed, result, samples)));
        if (result) {
          successes += result->period == inst.period;
          const bool verified = verify_period(inst.h, result->period, opts.spot_checks);
          all_verified = all_verified && verified;
          auto p = params;
          p.emplace_back("seed", double(seed));
          out.checks.push_back(BoundReport::make("shor-verified", std::move(p), verified ? 1.0 : 0.0,
                                                 1.0, BoundDirection::lower));
        }
      }
      const double rate = double(successes) / double(runs);
      out.checks.push_back(BoundReport::make("shor-success-rate", params, rate, 0.95,
                                             BoundDirection::lower));

      const std::uint64_t t = 2;
      const auto sim = simulate_ideal_sampling(inst, t);
      const auto ideal = shor_ideal_probability(inst.period, t);
      double pair_error = 0.0;
      for (std::size_t b = 0; b < inst.period; ++b) {
        for (std::uint64_t j = 0; j < inst.period; ++j) {
          pair_error = std::max(pair_error, std::abs(sim.mass_at(b, j * t) - ideal.per_pair));
        }
      }
      auto tp = params;
      tp.emplace_back("t", double(t));
      out.checks.push_back(BoundReport::make("shor-ideal-pair", tp, pair_error, 1e-9,
                                             BoundDirection::upper));
      out.checks.push_back(BoundReport::make("shor-ideal-coprime", tp,
                                             std::abs(sim.coprime_mass() - ideal.aggregate), 1e-9,
                                             BoundDirection::upper));
      out.summary.push_back({{"instance", spec}, {"r", inst.period}, {"runs", runs},
                             {"successes", successes}, {"success_rate", rate},
                             {"all_verified", all_verified}});
      return out;
    });
  }
  return tasks;
}

std::vector<Task> boneh_lipton_tasks(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  const auto r_max = std::uint64_t(*std::max_element(c.grid.r.begin(), c.grid.r.end()));
  tasks.push_back([=, trials = c.trials, m_max = c.grid.m, seed = derive_seed(c.seed, 0)] {
    Rng rng(seed);
    std::vector<BoundReport> out;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto r = uniform_in(rng, 1, r_max);
      const auto m = uniform_in(rng, 1, m_max);
      std::vector<std::int64_t> b(m);
      for (auto& x : b) x = std::int64_t(uniform_in(rng, 0, 3 * r)) - std::int64_t(r);
      out.push_back(bl_counting_check(b, r));
    }
    return checks_only(std::move(out));
  });

  std::size_t index = 1;
  for (const auto& spec : c.instances) {
    for (auto mult : c.grid.q_multiplier) {
      const auto seed = derive_seed(c.seed, index++);
      tasks.push_back([=, trials = c.trials] {
        const auto inst = hidden_linear_instance_from_json(spec);
        const auto q_sim = std::uint64_t(mult) * inst.r;
        const BonehLiptonSimulator sim(inst, q_sim);
        const BoundReport::Params params = {{"r", double(inst.r)}, {"m", double(inst.m)},
                                            {"alpha", double(inst.alpha)}, {"q_sim", double(q_sim)}};
        std::vector<BoundReport> out;

        const auto support = sim.support();
        std::size_t good = 0, recovered = 0;
        for (const auto& [triple, pr] : support) {
          good += sim.is_good(triple);
          const auto rec = bl_recover(triple, q_sim, inst.r + 1);
          const auto r = std::int64_t(inst.r);
          recovered += r % rec.y_over_r.denominator == 0 && r % rec.alpha_y_over_r.denominator == 0 &&
                       rec.consistent;
        }
        const double n = double(support.size());
        out.push_back(BoundReport::make("bl-support-good", params, double(good) / n, 1.0,
                                        BoundDirection::lower));
        out.push_back(BoundReport::make("bl-recover", params, double(recovered) / n, 1.0,
                                        BoundDirection::lower));

        Rng rng(seed);
        std::size_t hits = 0;
        for (std::size_t t = 0; t < trials; ++t) hits += sim.is_good(sim.sample(rng));
        const double floor_mass = 1.0 / (4.0 * double(inst.m * inst.m));
        auto fp = params;
        fp.emplace_back("draws", double(trials));
        out.push_back(BoundReport::make("bl-good-frequency", std::move(fp),
                                        double(hits) / double(trials), floor_mass,
                                        BoundDirection::lower));
        return checks_only(std::move(out));
      });
    }
  }
  return tasks;
}

void tally(const std::vector<BoundReport>& checks, RunManifest& m) {
  for (const auto& r : checks) {
    ++m.tallies.total;
    if (r.pass) {
      ++m.tallies.passed;
    } else if (r.vacuous) {
      ++m.tallies.vacuous;
    } else if (!r.hypothesis_met) {
      ++m.tallies.outside_hypothesis;
    } else {
      ++m.tallies.failed;
      if (m.failures.size() < kManifestFailures) m.failures.push_back(r);
    }
  }
}

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return csv_field(v.get<std::string>());
  return csv_field(v.dump());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::io, "write failed for " + path.string());
}

std::string rows_to_json(const std::string& kind, std::uint64_t seed,
                         const std::vector<json>& rows) {
  json doc;
  doc["experiment"] = kind;
  doc["seed"] = seed;
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<ExperimentOutput> run_ordered(std::vector<Task> tasks, std::size_t jobs) {
  std::vector<ExperimentOutput> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, tasks.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  check_config(config);
  std::vector<Task> tasks;
  const auto& k = config.kind;
  if (k == "claim1-sweep") tasks = claim1_tasks(config);
  else if (k == "observation-sweep") tasks = observation_tasks(config);
  else if (k == "l1-convergence") tasks = l1_tasks(config);
  else if (k == "lemma1") tasks = lemma_tasks(config, true);
  else if (k == "lemma2") tasks = lemma_tasks(config, false);
  else if (k == "theorem1") tasks = theorem1_tasks(config);
  else if (k == "multidim") tasks = multidim_tasks(config);
  else if (k == "shor") tasks = shor_tasks(config);
  else if (k == "boneh-lipton") tasks = boneh_lipton_tasks(config);
  else throw ConfigError({"experiment: unknown kind '" + k + "'"});

  ExperimentOutput merged;
  merged.rows_are_checks = true;
  for (auto& part : run_ordered(std::move(tasks), config.jobs)) {
    merged.rows_are_checks = merged.rows_are_checks && part.rows_are_checks;
    for (auto& r : part.rows) merged.rows.push_back(std::move(r));
    for (auto& r : part.summary) merged.summary.push_back(std::move(r));
    for (auto& r : part.checks) merged.checks.push_back(std::move(r));
  }
  return merged;
}

std::string table_to_csv(const std::vector<json>& rows) {
  if (rows.empty()) return "";
  std::vector<std::string> columns;
  for (const auto& [key, _] : rows.front().items()) columns.push_back(key);
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_field(columns[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out << ',';
      if (row.contains(columns[i])) out << cell(row[columns[i]]);
    }
    out << '\n';
  }
  return out.str();
}

std::string checks_to_csv(const std::vector<BoundReport>& checks) {
  std::string out = bound_report_csv_header() + "\n";
  for (const auto& r : checks) out += bound_report_to_csv(r) + "\n";
  return out;
}

std::string RunManifest::to_json() const {
  json j;
  j["tool"] = "ftsample";
  j["version"] = tool_version;
  j["config"] = config.to_json();
  j["duration_seconds"] = duration_seconds;
  j["tallies"] = {{"total", tallies.total},
                  {"passed", tallies.passed},
                  {"failed", tallies.failed},
                  {"vacuous", tallies.vacuous},
                  {"outside_hypothesis", tallies.outside_hypothesis}};
  json fails = json::array();
  for (const auto& r : failures) fails.push_back(json::parse(bound_report_to_json(r)));
  j["failures"] = fails;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.config = config;
  auto out = run_experiment(config);
  tally(out.checks, manifest);

  namespace fs = std::filesystem;
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io, "cannot create " + dir.string() + ": " + ec.message());

  const bool csv = config.format == OutputFormat::csv;
  const std::string ext = csv ? ".csv" : ".json";
  std::vector<json> check_rows;
  if (out.rows_are_checks) {
    for (const auto& r : out.checks) check_rows.push_back(json::parse(bound_report_to_json(r)));
  }
  const auto& rows = out.rows_are_checks ? check_rows : out.rows;
  std::string main_text;
  if (csv) {
    main_text = out.rows_are_checks ? checks_to_csv(out.checks) : table_to_csv(rows);
  } else {
    main_text = rows_to_json(config.kind, config.seed, rows);
  }
  write_file(dir / (config.kind + ext), main_text);
  manifest.outputs.push_back(config.kind + ext);

  if (!out.summary.empty()) {
    const auto name = config.kind + "_summary" + ext;
    write_file(dir / name, csv ? table_to_csv(out.summary)
                               : rows_to_json(config.kind, config.seed, out.summary));
    manifest.outputs.push_back(name);
  }
  if (!out.rows_are_checks && !out.checks.empty()) {
    const auto name = config.kind + "_checks" + ext;
    std::vector<json> extra;
    for (const auto& r : out.checks) extra.push_back(json::parse(bound_report_to_json(r)));
    write_file(dir / name, csv ? checks_to_csv(out.checks)
                               : rows_to_json(config.kind, config.seed, extra));
    manifest.outputs.push_back(name);
  }

  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest.outputs.push_back("manifest.json");
  write_file(dir / "manifest.json", manifest.to_json());
  return manifest;
}

std::string emit_figure_data(std::size_t j, std::size_t p, std::size_t q, FigureSource source) {
  if (p == 0) throw Error(Errc::invalid_size, "figure needs p >= 1");
  if (j >= p) throw Error(Errc::out_of_range, "figure needs j < p");
  if (q < p) throw Error(Errc::domain_too_small, "figure needs q >= p");
  Superposition alpha = Superposition::basis(p, j);
  if (source == FigureSource::beta_delta) alpha = dft(alpha, p, Direction::inverse);
  const auto beta = dft(alpha, p);
  const auto gamma = dft(alpha, q);
  std::ostringstream out;
  out << "index,beta_abs,gamma_abs\n";
  for (std::size_t i = 0; i < q; ++i) {
    out << i << ',';
    if (i < p) out << format_double(std::abs(beta[i]));
    out << ',' << format_double(std::abs(gamma[i])) << '\n';
  }
  return out.str();
}

}  // namespace ftsample
