#include "ftsample/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "ftsample/error.hpp"
#include "ftsample/format.hpp"
#include "ftsample/transform.hpp"

namespace ftsample {

namespace {

using std::sqrt;

void require_claim_domain(std::size_t p, std::size_t q, const char* what) {
  if (p == 0) throw Error(Errc::invalid_size, std::string(what) + ": p must be positive");
  if (q <= 2 * p) {
    throw Error(Errc::precondition, std::string(what) + " assumes q > 2p (got p=" +
                                        std::to_string(p) + ", q=" + std::to_string(q) + ")");
  }
}

// Amplitude FT_p⁻¹|j⟩ as a dense length-p vector.
ComplexVector inverse_delta(std::size_t j, std::size_t p) {
  ComplexVector a(p);
  const double scale = 1.0 / sqrt(double(p));
  for (std::size_t i = 0; i < p; ++i) {
    a[i] = unit_root((std::uint64_t(i) * j) % p, p, Direction::inverse) * scale;
  }
  return a;
}

double restricted_mass(std::span<const Complex> v, const IndexSet& s) {
  double c = 0.0;
  for (auto i : s) c += std::norm(v[i]);
  return c;
}

// (1 − 1/(100 r)), the band ratio δ used by the partition.
double band_delta(double r) { return 1.0 - 1.0 / (100.0 * r); }

void require_r(double r) {
  if (!(r >= 1.0)) throw Error(Errc::precondition, "accuracy parameter r must be >= 1");
}

double log_p(std::size_t p) {
  if (p < 2) throw Error(Errc::precondition, "threshold needs p >= 2 so that ln p > 0");
  return std::log(double(p));
}

// Shared denominator-corrected factor √|ln(c/(|S|100r))| / √(c |ln(1 − 1/(100r))|).
double corrected_log_ratio(double r, double c, std::size_t s_size) {
  require_r(r);
  if (!(c > 0.0 && c <= 1.0 + 1e-12)) {
    throw Error(Errc::precondition, "probability mass c must lie in (0, 1]");
  }
  if (s_size == 0) throw Error(Errc::precondition, "|S| must be at least 1");
  const double top = std::abs(std::log(c / (double(s_size) * 100.0 * r)));
  const double bottom = c * std::abs(std::log(band_delta(r)));
  return sqrt(top) / sqrt(bottom);
}

}  // namespace

bool bound_holds(double computed, double bound, BoundDirection direction) {
  return direction == BoundDirection::lower ? computed >= bound - kBoundTolerance
                                            : computed <= bound + kBoundTolerance;
}

BoundReport BoundReport::make(std::string check, Params params, double computed,
                              double bound, BoundDirection direction, bool vacuous) {
  BoundReport r;
  r.check = std::move(check);
  r.params = std::move(params);
  r.computed = computed;
  r.bound = bound;
  r.direction = direction;
  r.slack = direction == BoundDirection::lower ? computed - bound : bound - computed;
  r.pass = bound_holds(computed, bound, direction);
  // A lower bound at or below zero says nothing about a magnitude.
  r.vacuous = vacuous || (direction == BoundDirection::lower && bound <= 0.0);
  return r;
}

std::string bound_report_to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["computed"] = r.computed;
  j["bound"] = r.bound;
  j["slack"] = r.slack;
  j["direction"] = r.direction == BoundDirection::lower ? "lower" : "upper";
  j["pass"] = r.pass;
  j["vacuous"] = r.vacuous;
  j["hypothesis_met"] = r.hypothesis_met;
  return j.dump();
}

std::string bound_report_csv_header() {
  return "check,params,computed,bound,slack,direction,pass,vacuous,hypothesis_met";
}

std::string bound_report_to_csv(const BoundReport& r) {
  std::string params;
  for (const auto& [k, v] : r.params) {
    if (!params.empty()) params += ';';
    params += k + "=" + format_double(v);
  }
  std::ostringstream out;
  out << csv_field(r.check) << ',' << csv_field(params) << ','
      << format_double(r.computed) << ',' << format_double(r.bound) << ','
      << format_double(r.slack) << ','
      << (r.direction == BoundDirection::lower ? "lower" : "upper") << ','
      << (r.pass ? "true" : "false") << ',' << (r.vacuous ? "true" : "false") << ','
      << (r.hypothesis_met ? "true" : "false");
  return out.str();
}

ThresholdParams ThresholdParams::for_accuracy(std::size_t p, double s_n) {
  ThresholdParams t;
  t.p = p;
  t.n = std::log2(double(p));
  t.s_n = s_n;
  t.r = 4.0 * s_n;
  t.c = 1.0 / (2.0 * s_n);
  t.S_size = p;
  t.delta = band_delta(t.r);
  t.validate();
  return t;
}

void ThresholdParams::validate() const {
  if (p < 2) throw Error(Errc::precondition, "threshold needs p >= 2");
  if (!(c > 0.0 && c <= 1.0)) throw Error(Errc::precondition, "threshold needs 0 < c <= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(Errc::precondition, "threshold needs 0 < delta <= 1");
  if (!(r >= 1.0)) throw Error(Errc::precondition, "threshold needs r >= 1");
  if (S_size < 1) throw Error(Errc::precondition, "threshold needs |S| >= 1");
}

double signed_mod(double x, double p) {
  if (!(p >= 1.0)) throw Error(Errc::precondition, "signed_mod needs p >= 1");
  double m = std::fmod(x, p);
  if (m < 0.0) m += p;
  if (m >= p) m -= p;
  return m <= p / 2.0 ? m : p - m;
}

Superposition delta_response(std::size_t j, std::size_t p, std::size_t q) {
  if (j >= p) throw Error(Errc::out_of_range, "delta_response: j outside [0, p)");
  if (q < p) throw Error(Errc::domain_too_small, "delta_response needs q >= p");
  const auto a = inverse_delta(j, p);
  return Superposition::raw(dft_direct(a, q, Direction::forward));
}

std::pair<BoundReport, BoundReport> claim1_check(std::size_t j, std::size_t p,
                                                 std::size_t q) {
  require_claim_domain(p, q, "claim1_check");
  if (j >= p) throw Error(Errc::out_of_range, "claim1_check: j outside [0, p)");
  const auto a = inverse_delta(j, p);
  const auto primed = primed_indices(PrimedMap(p, q));
  const auto eta = dft_entries(a, q, primed, Direction::forward);

  const double ratio = double(p) / double(q);
  const double scale = sqrt(ratio);
  const BoundReport::Params base = {{"j", double(j)}, {"p", double(p)}, {"q", double(q)}};

  auto centre = BoundReport::make("claim1-center", base, std::abs(eta[j]),
                                  scale * (1.0 - 20.0 * ratio * ratio),
                                  BoundDirection::lower);

  BoundReport worst = BoundReport::make("claim1-offcenter", base, 0.0, 0.0,
                                        BoundDirection::upper, p == 1);
  double worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p; ++k) {
    if (k == j) continue;
    const double dist = signed_mod(double(k) - double(j), double(p));
    const double bound = scale * (2.0 / dist) * ratio;
    const double value = std::abs(eta[k]);
    if (bound - value < worst_slack) {
      worst_slack = bound - value;
      auto params = base;
      params.emplace_back("k", double(k));
      worst = BoundReport::make("claim1-offcenter", std::move(params), value, bound,
                                BoundDirection::upper);
    }
  }
  return {centre, worst};
}

BoundReport observation_check(double x, std::size_t p) {
  if (p == 0) throw Error(Errc::invalid_size, "observation_check needs p >= 1");
  const double y = signed_mod(x, double(p));
  if (y == 0.0) {
    throw Error(Errc::undefined_bound, "observation bound undefined: |x|_p = 0");
  }
  const double delta = std::abs(x - std::nearbyint(x));
  Complex acc{};
  for (std::size_t i = 0; i < p; ++i) {
    const double turns = std::fmod(double(i) * x, double(p)) / double(p);
    const double angle = 2.0 * std::numbers::pi * turns;
    acc += Complex(std::cos(angle), std::sin(angle));
  }
  const double value = std::abs(acc) / double(p);
  return BoundReport::make("observation", {{"x", x}, {"p", double(p)}, {"delta", delta}},
                           value, delta / y, BoundDirection::upper);
}

BoundReport inequality1_lower(const Superposition& beta, std::size_t j, std::size_t q) {
  const std::size_t p = beta.size();
  require_claim_domain(p, q, "inequality1_lower");
  if (j >= p) throw Error(Errc::out_of_range, "inequality1_lower: j outside [0, p)");
  const auto alpha = dft(beta, p, Direction::inverse);
  const std::size_t jp = primed_index(j, PrimedMap(p, q));
  const std::size_t outputs[] = {jp};
  const double value = std::abs(dft_entries(alpha.amplitudes(), q, outputs)[0]);

  const double ratio = double(p) / double(q);
  const double scale = sqrt(ratio);
  double bound = std::abs(beta[j]) * scale * (1.0 - 20.0 * ratio * ratio);
  for (std::size_t k = 0; k < p; ++k) {
    if (k == j) continue;
    bound -= std::abs(beta[k]) * scale *
             (2.0 / signed_mod(double(k) - double(j), double(p))) * ratio;
  }
  return BoundReport::make("inequality1",
                           {{"j", double(j)}, {"p", double(p)}, {"q", double(q)}}, value,
                           bound, BoundDirection::lower);
}

BoundReport inequality2_sum(const Superposition& beta, const IndexSet& s, std::size_t q) {
  const std::size_t p = beta.size();
  if (p < 3) throw Error(Errc::precondition, "inequality2_sum needs p >= 3");
  if (s.is_empty()) throw Error(Errc::precondition, "inequality2_sum needs a nonempty S");
  if (s.ambient() != p) throw Error(Errc::dimension_mismatch, "S ambient size differs from p");
  if (q < p) throw Error(Errc::domain_too_small, "inequality2_sum needs q >= p");
  const double ratio = double(p) / double(q);
  double lhs = 0.0;
  for (auto si : s) {
    for (std::size_t t = 0; t < p; ++t) {
      if (t == si) continue;
      lhs += std::abs(beta[t]) * (2.0 / signed_mod(double(t) - double(si), double(p)));
    }
  }
  lhs *= sqrt(ratio) * ratio;
  const double rhs = std::pow(ratio, 1.5) * 8.0 * sqrt(double(s.size())) * std::log(double(p));
  return BoundReport::make("inequality2",
                           {{"p", double(p)}, {"q", double(q)}, {"S_size", double(s.size())}},
                           lhs, rhs, BoundDirection::upper);
}

bool is_delta_uniform(std::span<const Complex> v, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(Errc::precondition, "is_delta_uniform needs 0 < delta <= 1");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& z : v) {
    const double m = std::abs(z);
    if (m == 0.0) continue;
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  if (hi == 0.0) return true;
  return lo >= delta * hi * (1.0 - 1e-12);
}

double primed_restricted_mass(const Superposition& beta, const IndexSet& s, std::size_t q) {
  const std::size_t p = beta.size();
  if (s.ambient() != p) throw Error(Errc::dimension_mismatch, "S ambient size differs from p");
  const auto alpha = dft(beta, p, Direction::inverse);
  const auto image = primed_set(s, PrimedMap(p, q));
  const auto gamma = dft_entries(alpha.amplitudes(), q, image.indices());
  double mass = 0.0;
  for (const auto& z : gamma) mass += std::norm(z);
  return mass;
}

double lemma1_multiplier(std::size_t p, double r, double delta, double c) {
  require_r(r);
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(Errc::precondition, "lemma 1 needs 0 < delta <= 1");
  if (!(c > 0.0)) throw Error(Errc::precondition, "lemma 1 needs c > 0");
  return 3200.0 * r * log_p(p) / (delta * sqrt(c));
}

BoundReport lemma1_check(const Superposition& beta, const IndexSet& s, double delta,
                         double r, std::size_t q) {
  const std::size_t p = beta.size();
  if (s.is_empty()) throw Error(Errc::precondition, "lemma1_check needs a nonempty S");
  if (s.ambient() != p) throw Error(Errc::dimension_mismatch, "S ambient size differs from p");
  const auto restricted = restrict_to(beta.amplitudes(), s);
  if (!is_delta_uniform(restricted, delta)) {
    throw Error(Errc::precondition, "lemma1_check: beta_S is not delta-uniform");
  }
  const double c = restricted_mass(beta.amplitudes(), s);
  const double multiplier = lemma1_multiplier(p, r, delta, c);
  if (q <= p) throw Error(Errc::domain_too_small, "lemma1_check needs q > p");

  const double value = primed_restricted_mass(beta, s, q);
  const double bound = double(p) / double(q) * delta * delta * (1.0 - 1.0 / (100.0 * r)) * c;
  auto report = BoundReport::make(
      "lemma1",
      {{"p", double(p)}, {"q", double(q)}, {"r", r}, {"delta", delta}, {"c", c},
       {"S_size", double(s.size())}},
      value, bound, BoundDirection::lower);
  report.hypothesis_met = double(q) > multiplier * double(p);
  return report;
}

DeltaUniformPartition partition_delta_uniform(const Superposition& beta, const IndexSet& s,
                                              double r) {
  require_r(r);
  const std::size_t p = beta.size();
  if (s.ambient() != p) throw Error(Errc::dimension_mismatch, "S ambient size differs from p");
  if (s.is_empty()) throw Error(Errc::precondition, "partition needs a nonempty S");
  const double c = restricted_mass(beta.amplitudes(), s);
  if (!(c > 0.0)) throw Error(Errc::precondition, "partition needs ||beta_S||^2 > 0");

  DeltaUniformPartition out{IndexSet::empty(p), {}, band_delta(r), 0.0, c, 0.0};
  const double delta = out.delta;
  out.cutoff = sqrt(c / (100.0 * r * double(s.size())));
  out.band_limit = std::log(sqrt(double(s.size()) * 100.0 * r / c)) / std::log(1.0 / delta);

  std::vector<std::size_t> discarded;
  std::vector<std::pair<int, std::size_t>> banded;
  for (auto i : s) {
    const double m = std::abs(beta[i]);
    if (m < out.cutoff) {
      discarded.push_back(i);
      continue;
    }
    // Band b holds δ^b < m ≤ δ^(b-1).
    int b = static_cast<int>(std::floor(std::log(m) / std::log(delta))) + 1;
    while (b > 1 && std::pow(delta, b - 1) < m) --b;
    while (std::pow(delta, b) >= m) ++b;
    banded.emplace_back(b, i);
  }
  std::sort(banded.begin(), banded.end());
  for (std::size_t k = 0; k < banded.size();) {
    const int b = banded[k].first;
    std::vector<std::size_t> members;
    for (; k < banded.size() && banded[k].first == b; ++k) members.push_back(banded[k].second);
    out.cells.push_back({IndexSet(std::move(members), p), b});
  }
  out.discarded = IndexSet(std::move(discarded), p);
  return out;
}

double lemma2_multiplier(std::size_t p, double r, double c, std::size_t s_size) {
  return 6400.0 * r * log_p(p) * corrected_log_ratio(r, c, s_size);
}

BoundReport lemma2_check(const Superposition& beta, const IndexSet& s, double r,
                         std::size_t q) {
  const std::size_t p = beta.size();
  if (s.is_empty()) throw Error(Errc::precondition, "lemma2_check needs a nonempty S");
  if (s.ambient() != p) throw Error(Errc::dimension_mismatch, "S ambient size differs from p");
  if (q <= p) throw Error(Errc::domain_too_small, "lemma2_check needs q > p");
  const double c = restricted_mass(beta.amplitudes(), s);
  const double multiplier = lemma2_multiplier(p, r, c, s.size());
  const double value = primed_restricted_mass(beta, s, q);
  const double bound = double(p) / double(q) * (1.0 - 1.0 / r) * c;
  auto report = BoundReport::make(
      "lemma2",
      {{"p", double(p)}, {"q", double(q)}, {"r", r}, {"c", c}, {"S_size", double(s.size())}},
      value, bound, BoundDirection::lower);
  report.hypothesis_met = double(q) >= multiplier * double(p);
  return report;
}

double theorem_threshold(const ThresholdParams& params) {
  params.validate();
  return 6400.0 * params.r * log_p(params.p) *
         corrected_log_ratio(params.r, params.c, params.S_size);
}

BoundReport theorem1_check(const Superposition& alpha, double s_n, std::size_t q) {
  const std::size_t p = alpha.size();
  const double t = theorem_threshold(ThresholdParams::for_accuracy(p, s_n));
  const double distance = l1_distance(dist_beta(alpha), dist_gamma(alpha, q));
  auto report = BoundReport::make(
      "theorem1", {{"p", double(p)}, {"q", double(q)}, {"s_n", s_n}, {"t", t}}, distance,
      1.0 / s_n, BoundDirection::upper);
  report.hypothesis_met = double(q) >= t * double(p);
  return report;
}

namespace {

void require_multidim(const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) {
  if (p.empty()) throw Error(Errc::invalid_size, "multidimensional check needs k >= 1");
  if (p.size() != q.size()) throw Error(Errc::dimension_mismatch, "p and q have different rank");
  for (std::size_t a = 0; a < p.size(); ++a) require_claim_domain(p[a], q[a], "multidim check");
}

std::vector<std::vector<std::size_t>> all_indices(const std::vector<std::size_t>& dims) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::vector<std::vector<std::size_t>> out;
  out.reserve(total);
  std::vector<std::size_t> idx(dims.size(), 0);
  for (std::size_t f = 0; f < total; ++f) {
    out.push_back(idx);
    for (std::size_t a = dims.size(); a-- > 0;) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

std::vector<std::size_t> primed_point(const std::vector<std::size_t>& x,
                                      const std::vector<std::size_t>& p,
                                      const std::vector<std::size_t>& q) {
  std::vector<std::size_t> out(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) out[a] = primed_index(x[a], PrimedMap(p[a], q[a]));
  return out;
}

BoundReport::Params vector_params(const std::vector<std::size_t>& p,
                                  const std::vector<std::size_t>& q) {
  BoundReport::Params out;
  for (std::size_t a = 0; a < p.size(); ++a) {
    out.emplace_back("p" + std::to_string(a), double(p[a]));
    out.emplace_back("q" + std::to_string(a), double(q[a]));
  }
  return out;
}

double max_log_p(const std::vector<std::size_t>& p) {
  return log_p(*std::max_element(p.begin(), p.end()));
}

}  // namespace

std::pair<BoundReport, BoundReport> multidim_claim_check(const std::vector<std::size_t>& y,
                                                         const std::vector<std::size_t>& p,
                                                         const std::vector<std::size_t>& q) {
  require_multidim(p, q);
  const std::size_t k = p.size();
  if (y.size() != k) throw Error(Errc::dimension_mismatch, "y has the wrong rank");
  const auto zeta = multidim_dft(MultiSuperposition::basis(p, y), p, Direction::inverse);
  const auto points = all_indices(p);
  std::vector<std::vector<std::size_t>> primed;
  primed.reserve(points.size());
  for (const auto& z : points) primed.push_back(primed_point(z, p, q));
  const auto eta = multidim_dft_entries(zeta, q, primed, Direction::forward);

  auto base = vector_params(p, q);
  for (std::size_t a = 0; a < k; ++a) base.emplace_back("y" + std::to_string(a), double(y[a]));

  double scale = 1.0;
  double centre_bound = 1.0;
  bool clamped = false;
  for (std::size_t a = 0; a < k; ++a) {
    const double ratio = double(p[a]) / double(q[a]);
    scale *= sqrt(ratio);
    // Each axis factor bounds a nonnegative magnitude; a negative factor
    // carries no information and is clamped to zero.
    const double factor = 1.0 - 20.0 * ratio * ratio;
    if (factor <= 0.0) clamped = true;
    centre_bound *= sqrt(ratio) * std::max(0.0, factor);
  }
  std::size_t centre_flat = 0;
  for (std::size_t a = 0; a < k; ++a) centre_flat = centre_flat * p[a] + y[a];
  auto centre = BoundReport::make("multidim-claim-center", base, std::abs(eta[centre_flat]),
                                  centre_bound, BoundDirection::lower, clamped);

  BoundReport worst = BoundReport::make("multidim-claim-offcenter", base, 0.0, 0.0,
                                        BoundDirection::upper, true);
  double worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < points.size(); ++f) {
    if (f == centre_flat) continue;
    const auto& z = points[f];
    double bound = scale;
    for (std::size_t a = 0; a < k; ++a) {
      if (z[a] == y[a]) continue;
      bound *= 2.0 / signed_mod(double(z[a]) - double(y[a]), double(p[a])) *
               (double(p[a]) / double(q[a]));
    }
    const double value = std::abs(eta[f]);
    if (bound - value < worst_slack) {
      worst_slack = bound - value;
      auto params = base;
      for (std::size_t a = 0; a < k; ++a) params.emplace_back("z" + std::to_string(a), double(z[a]));
      worst = BoundReport::make("multidim-claim-offcenter", std::move(params), value, bound,
                                BoundDirection::upper);
    }
  }
  return {centre, worst};
}

double lemma3_multiplier(const std::vector<std::size_t>& p, double r, double c,
                         std::size_t s_size) {
  const double k = double(p.size());
  return std::pow(2.0, k + 2.0) * std::pow(k, k + 1.0) * 800.0 * r *
         std::pow(max_log_p(p), k) * corrected_log_ratio(r, c, s_size);
}

BoundReport multidim_lemma3_check(const MultiSuperposition& beta, const IndexSet& s,
                                  double r, const std::vector<std::size_t>& q) {
  const auto& p = beta.dims();
  if (p.size() != q.size()) throw Error(Errc::dimension_mismatch, "p and q have different rank");
  if (s.ambient() != beta.size()) throw Error(Errc::dimension_mismatch, "S ambient size differs from tensor size");
  if (s.is_empty()) throw Error(Errc::precondition, "lemma 3 needs a nonempty S");
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (q[a] <= p[a]) throw Error(Errc::domain_too_small, "lemma 3 needs q_i > p_i");
  }
  const double c = restricted_mass(beta.amplitudes(), s);
  const double multiplier = lemma3_multiplier(p, r, c, s.size());
  const auto alpha = multidim_dft(beta, p, Direction::inverse);
  std::vector<std::vector<std::size_t>> image;
  for (auto f : s) image.push_back(primed_point(beta.unflatten(f), p, q));
  double value = 0.0;
  for (const auto& z : multidim_dft_entries(alpha, q, image)) value += std::norm(z);

  double volume_ratio = 1.0;
  bool met = true;
  for (std::size_t a = 0; a < p.size(); ++a) {
    volume_ratio *= double(p[a]) / double(q[a]);
    met = met && double(q[a]) > multiplier * double(p[a]);
  }
  auto params = vector_params(p, q);
  params.emplace_back("r", r);
  params.emplace_back("c", c);
  params.emplace_back("S_size", double(s.size()));
  auto report = BoundReport::make("multidim-lemma3", std::move(params), value,
                                  volume_ratio * (1.0 - 1.0 / r) * c, BoundDirection::lower);
  report.hypothesis_met = met;
  return report;
}

BoundReport multidim_cross_term_check(const MultiSuperposition& beta, const IndexSet& s,
                                      const std::vector<std::size_t>& q) {
  const auto& p = beta.dims();
  require_multidim(p, q);
  if (s.ambient() != beta.size()) throw Error(Errc::dimension_mismatch, "S ambient size differs from tensor size");
  if (s.is_empty()) throw Error(Errc::precondition, "cross-term bound needs a nonempty S");
  const std::size_t k = p.size();
  const auto points = all_indices(p);
  double lhs = 0.0;
  for (auto xf : s) {
    const auto& x = points[xf];
    for (std::size_t zf = 0; zf < points.size(); ++zf) {
      if (zf == xf) continue;
      const auto& z = points[zf];
      double term = std::abs(beta.amplitudes()[zf]);
      for (std::size_t a = 0; a < k; ++a) {
        if (z[a] == x[a]) continue;
        term *= 2.0 / signed_mod(double(z[a]) - double(x[a]), double(p[a])) *
                (double(p[a]) / double(q[a]));
      }
      lhs += term;
    }
  }
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) min_ratio = std::min(min_ratio, double(p[a]) / double(q[a]));
  const double kk = double(k);
  const double rhs = std::pow(2.0, kk + 2.0) * std::pow(kk, kk + 1.0) * sqrt(double(s.size())) *
                     std::pow(max_log_p(p), kk) * min_ratio;
  auto params = vector_params(p, q);
  params.emplace_back("S_size", double(s.size()));
  return BoundReport::make("multidim-cross-term", std::move(params), lhs, rhs,
                           BoundDirection::upper);
}

}  // namespace ftsample
