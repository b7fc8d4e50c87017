// Acceptance run: one line per criterion. `acceptance` runs all ten,
// `acceptance 3 7` runs a subset. Exit status is 1 if any selected one fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ftsample/applications.hpp"
#include "ftsample/bounds.hpp"
#include "ftsample/number_theory.hpp"
#include "ftsample/sampling.hpp"
#include "ftsample/transform.hpp"

using namespace ftsample;

namespace {

constexpr double kUnitTol = 1e-9;
constexpr double kCollapseTol = 1e-9;
constexpr double kSlackTol = -1e-12;   // slack ≥ this counts as holding
constexpr double kEqualityTol = 1e-12;
constexpr double kTheoremL1 = 0.5;     // 1/s(n) with s(n) = 2
constexpr double kShorSuccess = 0.95;
constexpr double kPhiTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ComplexVector random_unit(Rng& rng, std::size_t n) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  double s = 0;
  for (auto& z : v) {
    z = {g(rng), g(rng)};
    s += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(s);
  return v;
}

IndexSet random_subset(Rng& rng, std::size_t p) {
  std::vector<std::size_t> idx;
  const double keep = 0.1 + 0.9 * uniform01(rng);
  for (std::size_t i = 0; i < p; ++i) {
    if (uniform01(rng) < keep) idx.push_back(i);
  }
  if (idx.empty()) idx.push_back(rng() % p);
  return IndexSet(idx, p);
}

double restricted_norm2(const Superposition& b, const IndexSet& s) {
  double c = 0;
  for (auto i : s) c += std::norm(b[i]);
  return c;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 1. FT_N unitary, inverse ∘ forward = id, fast path (chirp-z off powers
// of two) equal to direct summation entrywise.
Outcome criterion1() {
  constexpr double kLimit = 60.0;
  Clock clock;
  Rng rng(1001);
  std::vector<std::size_t> sizes;
  for (std::size_t n = 1; n <= 128; ++n) sizes.push_back(n);
  for (std::size_t n : {251u, 1009u, 10007u, 16384u}) sizes.push_back(n);

  double worst_norm = 0, worst_round = 0, worst_direct = 0;
  for (auto n : sizes) {
    std::vector<ComplexVector> inputs;
    for (int t = 0; t < 100; ++t) inputs.push_back(random_unit(rng, n));
    const auto direct = dft_direct_batch(inputs, n);
    for (std::size_t t = 0; t < inputs.size(); ++t) {
      const auto f = dft_fast(inputs[t], n);
      worst_norm = std::max(worst_norm, std::abs(l2_norm(f) - 1.0));
      const auto back = dft_fast(f, n, Direction::inverse);
      for (std::size_t i = 0; i < n; ++i) {
        worst_round = std::max(worst_round, std::abs(back[i] - inputs[t][i]));
        worst_direct = std::max(worst_direct, std::abs(f[i] - direct[t][i]));
      }
    }
  }
  const double secs = clock.seconds();
  Outcome o;
  o.pass = worst_norm <= kUnitTol && worst_round <= kUnitTol && worst_direct <= kUnitTol &&
           secs < kLimit;
  o.detail = fmt("max |norm-1| %.2e, max round-trip err %.2e, max fast-vs-direct %.2e, %.1f s (< %.0f s)",
                 worst_norm, worst_round, worst_direct, secs, kLimit);
  return o;
}

// 2. D_β = D_γ at q = kp.
Outcome criterion2() {
  constexpr double kLimit = 30.0;
  Clock clock;
  Rng rng(2002);
  double worst = 0;
  for (std::size_t p = 2; p <= 32; ++p) {
    for (std::size_t k : {2u, 3u, 5u}) {
      for (int t = 0; t < 100; ++t) {
        const Superposition a(random_unit(rng, p));
        worst = std::max(worst, l1_distance(dist_beta(a), dist_gamma(a, k * p)));
      }
    }
  }
  const double secs = clock.seconds();
  return {worst <= kCollapseTol && secs < kLimit,
          fmt("max L1 %.2e over 9300 cases, %.1f s (< %.0f s)", worst, secs, kLimit)};
}

// 3. Both claim bounds for every j, p ∈ [3, 16], q ∈ [2p+1, 12p].
Outcome criterion3() {
  constexpr double kLimit = 120.0;
  Clock clock;
  std::size_t checks = 0, misses = 0, vacuous = 0;
  double least = 1e9;
  for (std::size_t p = 3; p <= 16; ++p) {
    for (std::size_t q = 2 * p + 1; q <= 12 * p; ++q) {
      for (std::size_t j = 0; j < p; ++j) {
        const auto [c, o] = claim1_check(j, p, q);
        for (const auto* r : {&c, &o}) {
          ++checks;
          vacuous += r->vacuous;
          if (!r->vacuous) least = std::min(least, r->slack);
          if (!r->pass || r->slack < kSlackTol) misses += !r->vacuous;
        }
      }
    }
  }
  const double secs = clock.seconds();
  return {misses == 0 && secs < kLimit,
          fmt("%zu checks, %zu misses, %zu vacuous, least slack %.3e, %.1f s (< %.0f s)", checks,
              misses, vacuous, least, secs, kLimit)};
}

// 4. The observation bound on random, integer and half-integer x, and the
// equality case at x = 2.5, p = 5.
Outcome criterion4() {
  Rng rng(4004);
  std::size_t checks = 0, misses = 0;
  double worst = 0, worst_x = 0, worst_p = 0;
  const auto one = [&](double x, std::size_t p) {
    if (signed_mod(x, double(p)) == 0.0) return;  // bound undefined
    const auto r = observation_check(x, p);
    ++checks;
    if (!r.pass) {
      ++misses;
      if (-r.slack > worst) {
        worst = -r.slack;
        worst_x = x;
        worst_p = double(p);
      }
    }
  };
  for (std::size_t p : {5u, 32u, 101u}) {
    for (int t = 0; t < 200; ++t) one(uniform01(rng) * double(p), p);
    for (std::size_t k = 1; k < 2 * p; ++k) one(0.5 * double(k), p);
  }
  const auto eq = observation_check(2.5, 5);
  const bool equality = std::abs(eq.computed - 0.2) <= kEqualityTol &&
                        std::abs(eq.bound - 0.2) <= kEqualityTol && eq.pass;
  return {misses == 0 && equality,
          fmt("%zu checks, %zu misses (largest excess %.4f at x=%.4f, p=%.0f); "
              "x=2.5,p=5: %.15f vs %.15f",
              checks, misses, worst, worst_x, worst_p, eq.computed, eq.bound)};
}

// 5. The cross-contamination sum.
Outcome criterion5() {
  Rng rng(5005);
  std::size_t checks = 0, misses = 0;
  double least = 1e9;
  for (std::size_t p = 3; p <= 64; ++p) {
    for (std::size_t q : {2 * p + 1, 5 * p, 20 * p}) {
      for (int t = 0; t < 500; ++t) {
        const Superposition b(random_unit(rng, p));
        const auto r = inequality2_sum(b, random_subset(rng, p), q);
        ++checks;
        misses += !r.pass;
        least = std::min(least, r.slack);
      }
    }
  }
  return {misses == 0, fmt("%zu checks, %zu misses, least slack %.3e", checks, misses, least)};
}

// β supported on S with |β_i| ∈ [δ, 1]·scale (δ-uniform by construction),
// plus unrelated mass outside S.
Superposition constructed_lemma1(Rng& rng, std::size_t p, const IndexSet& s, double delta) {
  ComplexVector v = random_unit(rng, p);
  for (auto& z : v) z *= 0.3;
  for (auto i : s) {
    const double mag = delta + (1 - delta) * uniform01(rng);
    v[i] = std::polar(mag, 2 * std::numbers::pi * uniform01(rng));
  }
  // keep the extremes in so the ratio is exactly δ when |S| ≥ 2
  if (s.size() >= 2) {
    v[s.indices()[0]] = std::polar(1.0, 0.3);
    v[s.indices()[1]] = std::polar(delta, 1.1);
  }
  return Superposition(v);
}

// Two magnitude tiers, 1 and 1e-3, on S.
Superposition constructed_lemma2(Rng& rng, std::size_t p, const IndexSet& s) {
  ComplexVector v = random_unit(rng, p);
  for (auto& z : v) z *= 0.1;
  std::size_t k = 0;
  for (auto i : s) v[i] = std::polar(k++ % 2 ? 1e-3 : 1.0, 2 * std::numbers::pi * uniform01(rng));
  return Superposition(v);
}

// 6. Lemma 1 and Lemma 2 at q just past their (sign-corrected) thresholds.
Outcome criterion6() {
  constexpr double kLimit = 600.0;
  Clock clock;
  Rng rng(6006);
  std::size_t checks = 0, misses = 0, outside = 0, vacuous = 0;
  std::size_t q_max = 0;
  const auto tally = [&](const BoundReport& r) {
    ++checks;
    outside += !r.hypothesis_met;
    vacuous += r.vacuous;
    if (!r.pass) ++misses;
    q_max = std::max<std::size_t>(q_max, std::size_t(r.params[1].second));
  };
  for (std::size_t p : {8u, 16u, 32u}) {
    for (double r : {1.0, 2.0}) {
      for (int t = 0; t < 20; ++t) {
        // Lemma 1: constructed, then random β with S = the top band.
        for (double delta : {0.5, 0.9}) {
          const auto s = random_subset(rng, p);
          const auto b = constructed_lemma1(rng, p, s, delta);
          const double c = restricted_norm2(b, s);
          const auto q = std::size_t(std::floor(lemma1_multiplier(p, r, delta, c) * p)) + 1;
          tally(lemma1_check(b, s, delta, r, q));

          const Superposition rb(random_unit(rng, p));
          double top = 0;
          for (std::size_t i = 0; i < p; ++i) top = std::max(top, std::abs(rb[i]));
          std::vector<std::size_t> band;
          for (std::size_t i = 0; i < p; ++i) {
            if (std::abs(rb[i]) >= delta * top) band.push_back(i);
          }
          const IndexSet rs(band, p);
          const double rc = restricted_norm2(rb, rs);
          const auto rq = std::size_t(std::floor(lemma1_multiplier(p, r, delta, rc) * p)) + 1;
          tally(lemma1_check(rb, rs, delta, r, rq));
        }
        // Lemma 2: constructed two-tier, then random β and S.
        {
          const auto s = random_subset(rng, p);
          const auto b = constructed_lemma2(rng, p, s);
          const double c = restricted_norm2(b, s);
          const auto q = std::size_t(std::ceil(lemma2_multiplier(p, r, c, s.size()) * p));
          tally(lemma2_check(b, s, r, q));

          const Superposition rb(random_unit(rng, p));
          const auto rs = random_subset(rng, p);
          const double rc = restricted_norm2(rb, rs);
          const auto rq = std::size_t(std::ceil(lemma2_multiplier(p, r, rc, rs.size()) * p));
          tally(lemma2_check(rb, rs, r, rq));
        }
      }
    }
  }
  // The checks above evaluate only the primed entries; compare once with
  // the full length-q transform.
  double entry_gap = 0;
  {
    const auto s = random_subset(rng, 8);
    const auto b = constructed_lemma1(rng, 8, s, 0.9);
    const auto q = std::size_t(std::floor(lemma1_multiplier(8, 1, 0.9, restricted_norm2(b, s)) * 8)) + 1;
    const auto gamma = dft(dft(b, 8, Direction::inverse), q, Direction::forward, Strategy::direct);
    double full = 0;
    for (auto i : primed_set(s, PrimedMap(8, q))) full += std::norm(gamma[i]);
    entry_gap = std::abs(full - lemma1_check(b, s, 0.9, 1, q).computed);
  }
  const double secs = clock.seconds();
  return {misses == 0 && outside == 0 && entry_gap <= kUnitTol && secs < kLimit,
          fmt("%zu checks, %zu misses, %zu outside hypothesis, %zu vacuous (r=1 lemma 2), "
              "q up to %zu, entries vs full transform %.1e, %.1f s (< %.0f s)",
              checks, misses, outside, vacuous, q_max, entry_gap, secs, kLimit)};
}

// 7. Theorem 1 at q = ⌈t·p⌉, and the median-L1 ladder q = m·p + 1.
Outcome criterion7() {
  constexpr double kLimit = 600.0;
  Clock clock;
  constexpr std::size_t p = 16;
  constexpr double s_n = 2;
  const double t = theorem_threshold(ThresholdParams::for_accuracy(p, s_n));
  const auto q = static_cast<std::size_t>(std::ceil(t * p));
  Rng rng(7007);
  double worst = 0;
  bool met = true;
  for (int i = 0; i < 100; ++i) {
    const auto r = theorem1_check(Superposition(random_unit(rng, p)), s_n, q);
    worst = std::max(worst, r.computed);
    met = met && r.hypothesis_met;
  }
  std::vector<double> medians;
  std::string ladder;
  for (std::size_t m : {2u, 4u, 16u, 64u, 256u}) {
    std::vector<double> l1;
    for (int i = 0; i < 100; ++i) {
      const Superposition a(random_unit(rng, p));
      l1.push_back(l1_distance(dist_beta(a), dist_gamma(a, m * p + 1)));
    }
    medians.push_back(median(l1));
    ladder += fmt("%s%zu:%.2e", ladder.empty() ? "" : " ", m, medians.back());
  }
  bool monotone = true;
  for (std::size_t i = 1; i < medians.size(); ++i) monotone = monotone && medians[i] <= medians[i - 1];
  const double secs = clock.seconds();
  return {worst <= kTheoremL1 && met && monotone && secs < kLimit,
          fmt("q=%zu, worst L1 %.3e (<= %.1f); ladder medians %s%s; %.1f s", q, worst, kTheoremL1,
              ladder.c_str(), monotone ? "" : " NOT monotone", secs)};
}

// 8. Period finding: ≥ 95% exact in 200 runs per instance, every returned
// period verified, ideal coprime mass Φ(r)/r.
Outcome criterion8() {
  Rng rng(8008);
  std::vector<PeriodicInstance> instances = {modular_exponentiation_instance(2, 9),
                                             modular_exponentiation_instance(5, 21)};
  for (int i = 0; i < 20; ++i) instances.push_back(random_modular_exponentiation_instance(rng, 2, 100));

  auto cache = std::make_shared<MeasurementCache>();
  RecoveryOptions opt;
  opt.cache = cache;
  double worst_rate = 1;
  std::size_t returned = 0, unverified = 0;
  double worst_phi = 0;
  std::uint64_t seed = 0;
  for (const auto& inst : instances) {
    std::size_t exact = 0;
    for (int run = 0; run < 200; ++run) {
      try {
        const auto res = recover_period(inst.h, seed++, opt);
        ++returned;
        bool ok = inst.h(0) == inst.h(res.period);
        std::set<std::uint64_t> seen;
        for (std::uint64_t x = 0; x < res.period && ok; ++x) ok = seen.insert(inst.h(x)).second;
        unverified += !ok;
        exact += res.period == inst.period;
      } catch (const RecoveryFailed&) {
      }
    }
    worst_rate = std::min(worst_rate, exact / 200.0);
    const auto sim = simulate_ideal_sampling(inst, 2);
    worst_phi = std::max(worst_phi, std::abs(sim.coprime_mass() -
                                             double(euler_phi(inst.period)) / double(inst.period)));
  }
  return {worst_rate >= kShorSuccess && unverified == 0 && worst_phi <= kPhiTol,
          fmt("%zu instances, worst success rate %.3f (>= %.2f), %zu returned, %zu unverified, "
              "max |coprime mass - phi(r)/r| %.2e",
              instances.size(), worst_rate, kShorSuccess, returned, unverified, worst_phi)};
}

// 9. Counting lemma; support and recovery of the 2D pipeline at r = 6.
Outcome criterion9() {
  Rng rng(9009);
  std::size_t counting_misses = 0;
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t r = 1 + rng() % 60;
    const std::size_t m = 1 + rng() % 5;
    std::vector<std::int64_t> b(m);
    for (auto& x : b) x = std::int64_t(rng() % r);
    counting_misses += !bl_counting_check(b, r).pass;
  }

  std::size_t triples = 0, off_line = 0, bad_den = 0, instances = 0;
  for (std::uint64_t m : {1u, 2u}) {
    for (std::uint64_t alpha = 0; alpha < 6; ++alpha) {
      for (std::uint64_t k : {3u, 4u, 7u}) {
        const auto inst = hidden_linear_instance(6, m, alpha, 6, rng());
        const std::uint64_t q = 6 * k;
        const BonehLiptonSimulator sim(inst, q);
        ++instances;
        for (const auto& [t, pr] : sim.support()) {
          ++triples;
          off_line += (t.y2 + 6 * 6 * q - (alpha * t.y1) % 6) % 6 != 0;
          const auto rec = bl_recover(t, q, 7);
          bad_den += 6 % rec.y_over_r.denominator != 0 || 6 % rec.alpha_y_over_r.denominator != 0;
        }
      }
    }
  }
  return {counting_misses == 0 && off_line == 0 && bad_den == 0 && triples > 0,
          fmt("counting: 200 instances, %zu misses; r=6: %zu instances, %zu support triples, "
              "%zu off y2=alpha*y1 (mod r), %zu denominators not dividing r",
              counting_misses, instances, triples, off_line, bad_den)};
}

// 10. Multidimensional claim (exhaustive small grid), 2D collapse,
// cross-term bound.
Outcome criterion10() {
  std::size_t claim_checks = 0, claim_misses = 0;
  for (std::size_t p0 = 1; p0 <= 4; ++p0) {
    for (std::size_t p1 = 1; p1 <= 4; ++p1) {
      for (std::size_t q0 = 2 * p0 + 1; q0 <= 24; ++q0) {
        for (std::size_t q1 = 2 * p1 + 1; q1 <= 24; ++q1) {
          for (std::size_t y0 = 0; y0 < p0; ++y0) {
            for (std::size_t y1 = 0; y1 < p1; ++y1) {
              const auto [c, o] = multidim_claim_check({y0, y1}, {p0, p1}, {q0, q1});
              claim_checks += 2;
              claim_misses += !c.pass + !o.pass;
            }
          }
        }
      }
    }
  }

  Rng rng(1010);
  double worst_collapse = 0;
  for (std::size_t p0 = 1; p0 <= 6; ++p0) {
    for (std::size_t p1 = 1; p1 <= 6; ++p1) {
      for (std::size_t k : {2u, 3u, 5u}) {
        const MultiSuperposition a({p0, p1}, random_unit(rng, p0 * p1));
        const std::vector<std::size_t> q = {k * p0, (k + 1) * p1};
        worst_collapse = std::max(worst_collapse, l1_distance(dist_beta(a), dist_gamma(a, q)));
      }
    }
  }

  std::size_t cross_misses = 0;
  double least = 1e9;
  for (int t = 0; t < 100; ++t) {
    const std::size_t p0 = 2 + rng() % 5, p1 = 2 + rng() % 5;
    const std::vector<std::size_t> q = {2 * p0 + 1 + rng() % (22 * p0), 2 * p1 + 1 + rng() % (22 * p1)};
    const MultiSuperposition b({p0, p1}, random_unit(rng, p0 * p1));
    const auto r = multidim_cross_term_check(b, random_subset(rng, p0 * p1), q);
    cross_misses += !r.pass;
    least = std::min(least, r.slack);
  }
  return {claim_misses == 0 && worst_collapse <= kCollapseTol && cross_misses == 0,
          fmt("claim: %zu checks, %zu misses; 2D collapse max L1 %.2e; cross-term: 100 cases, "
              "%zu misses, least slack %.3e",
              claim_checks, claim_misses, worst_collapse, cross_misses, least)};
}

const char* const kNames[] = {
    "",
    "unitarity and oracle equivalence",
    "exact-multiple collapse",
    "claim bounds, exhaustive",
    "observation bound",
    "cross-contamination sum",
    "lemma 1 and lemma 2 at threshold",
    "theorem end to end",
    "period finding pipeline",
    "hidden linear structure",
    "multidimensional checks",
};

}  // namespace

int main(int argc, char** argv) {
  const std::function<Outcome()> criteria[] = {
      nullptr,     criterion1, criterion2, criterion3, criterion4,  criterion5,
      criterion6,  criterion7, criterion8, criterion9, criterion10,
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1-10 ...]\n", argv[0]);
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty()) {
    selected.resize(10);
    std::iota(selected.begin(), selected.end(), 1);
  }
  int failed = 0;
  for (int n : selected) {
    Outcome o;
    try {
      o = criteria[n]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, kNames[n], o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
