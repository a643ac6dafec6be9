// The experiment harness: reproducible scenario runs with JSON + CSV
// reports. Every verdict is a pure function of the recorded statistics
// and the configured thresholds; timestamps are confined to the
// provenance block, which the report hash skips.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <string>
#include <vector>

#include "normsel/complexity.hpp"
#include "normsel/generators.hpp"
#include "normsel/normality.hpp"
#include "normsel/report.hpp"
#include "normsel/selection.hpp"

namespace normsel {

inline constexpr const char* kVersion = "normsel 0.1.0";

struct ExperimentConfig {
  std::string scenario;  // forward | converse | counterexample | weakrand
  std::string y_spec;
  std::string x_spec;                    // counterexample control arm (prng)
  uint64_t n = uint64_t{1} << 20;
  unsigned k_max = 8;
  unsigned kt_order = 0;                 // proxy order for selected-sequence rates
  unsigned kt_order_y = 8;               // proxy order for y's own rate
  std::string measure_id = "uniform";
  std::vector<uint64_t> x_seeds;         // forward arms; default 1..16
  std::vector<uint64_t> baseline_seeds;  // default 1001..1016
  double envelope_rel = 1.0;             // widen by rel * span on each side
  double envelope_abs = 5e-4;            // plus this absolute slack
  uint64_t min_pass = 0;                 // 0 => |x_seeds| - 1
  double kt_rate_high = 0.99;
  double defect_tol = 1.0 / 1024;        // 2^-10
  double converse_rate_min = 0.95;
  double converse_cond_max = 0.05;
  double gap_max = 0.05;
  unsigned ladder_min_exp = 12;
  double vacuous_fraction = 0.1;

  void validate() const {
    if (scenario != "forward" && scenario != "converse" && scenario != "counterexample" &&
        scenario != "weakrand")
      throw config_error("unknown scenario: " + scenario);
    if (n < (uint64_t{1} << 10)) throw config_error("n must be at least 2^10");
    if (k_max == 0 || k_max > 16) throw config_error("k_max must be in [1, 16]");
    if (kt_order > 16 || kt_order_y > 16) throw config_error("kt order must be <= 16");
    if (y_spec.empty()) throw config_error("y_spec is required");
    GeneratorSpec::parse(y_spec);
    if (!x_spec.empty()) GeneratorSpec::parse(x_spec);
    if (scenario == "converse" || scenario == "weakrand") make_measure(measure_id);
  }

  json to_json() const {
    return {{"scenario", scenario},
            {"y_spec", y_spec},
            {"x_spec", x_spec},
            {"n", n},
            {"k_max", k_max},
            {"kt_order", kt_order},
            {"kt_order_y", kt_order_y},
            {"measure", measure_id},
            {"x_seeds", x_seeds},
            {"baseline_seeds", baseline_seeds},
            {"envelope_rel", envelope_rel},
            {"envelope_abs", envelope_abs},
            {"min_pass", min_pass},
            {"kt_rate_high", kt_rate_high},
            {"defect_tol", defect_tol},
            {"converse_rate_min", converse_rate_min},
            {"converse_cond_max", converse_cond_max},
            {"gap_max", gap_max},
            {"ladder_min_exp", ladder_min_exp},
            {"vacuous_fraction", vacuous_fraction}};
  }

  static ExperimentConfig from_json(const json& j) {
    ExperimentConfig c;
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const json& v = it.value();
      if (k == "scenario") c.scenario = v.get<std::string>();
      else if (k == "y_spec") c.y_spec = v.get<std::string>();
      else if (k == "x_spec") c.x_spec = v.get<std::string>();
      else if (k == "n") c.n = v.get<uint64_t>();
      else if (k == "k_max") c.k_max = v.get<unsigned>();
      else if (k == "kt_order") c.kt_order = v.get<unsigned>();
      else if (k == "kt_order_y") c.kt_order_y = v.get<unsigned>();
      else if (k == "measure") c.measure_id = v.get<std::string>();
      else if (k == "x_seeds") c.x_seeds = v.get<std::vector<uint64_t>>();
      else if (k == "baseline_seeds") c.baseline_seeds = v.get<std::vector<uint64_t>>();
      else if (k == "envelope_rel") c.envelope_rel = v.get<double>();
      else if (k == "envelope_abs") c.envelope_abs = v.get<double>();
      else if (k == "min_pass") c.min_pass = v.get<uint64_t>();
      else if (k == "kt_rate_high") c.kt_rate_high = v.get<double>();
      else if (k == "defect_tol") c.defect_tol = v.get<double>();
      else if (k == "converse_rate_min") c.converse_rate_min = v.get<double>();
      else if (k == "converse_cond_max") c.converse_cond_max = v.get<double>();
      else if (k == "gap_max") c.gap_max = v.get<double>();
      else if (k == "ladder_min_exp") c.ladder_min_exp = v.get<unsigned>();
      else if (k == "vacuous_fraction") c.vacuous_fraction = v.get<double>();
      else throw config_error("unknown config key: " + k);
    }
    return c;
  }

  std::vector<uint64_t> arms() const {
    if (!x_seeds.empty()) return x_seeds;
    std::vector<uint64_t> s(16);
    for (int i = 0; i < 16; ++i) s[i] = static_cast<uint64_t>(i + 1);
    return s;
  }
  std::vector<uint64_t> baselines() const {
    if (!baseline_seeds.empty()) return baseline_seeds;
    std::vector<uint64_t> s(16);
    for (int i = 0; i < 16; ++i) s[i] = static_cast<uint64_t>(i + 1001);
    return s;
  }
};

struct ExperimentReport {
  json doc;
  bool pass = false;
  std::string csv;
};

namespace detail {

struct Envelope {
  double lo = 0, hi = 0, min = 0, max = 0;

  static Envelope of(const std::vector<double>& vals, double rel, double abs) {
    Envelope e;
    e.min = *std::min_element(vals.begin(), vals.end());
    e.max = *std::max_element(vals.begin(), vals.end());
    const double span = e.max - e.min;
    e.lo = e.min - (rel * span + abs);
    e.hi = e.max + (rel * span + abs);
    return e;
  }

  bool contains(double v) const { return v >= lo && v <= hi; }

  json to_json() const { return {{"min", min}, {"max", max}, {"lo", lo}, {"hi", hi}}; }
};

inline std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

class CsvBuilder {
 public:
  CsvBuilder() {
    rows_ += "sequence,kind,k,defect_k,h_k,p_k,reliable,method,bits_total,rate\n";
  }
  void add_normality(const std::string& label, const NormalityReport& r) {
    for (const auto& e : r.per_k) {
      std::ostringstream o;
      o << label << ",normality," << e.k << ',' << e.defect.get_d() << ',' << e.entropy << ','
        << e.subwords << ',' << (e.reliable ? 1 : 0) << ",,,\n";
      rows_ += o.str();
    }
  }
  void add_complexity(const std::string& label, const ComplexityEstimate& e) {
    std::ostringstream o;
    o << label << ",complexity,,,,,," << e.method << ',' << e.bits_total << ',' << e.rate << "\n";
    rows_ += o.str();
  }
  std::string str() const { return rows_; }

 private:
  std::string rows_;
};

inline ExperimentReport finish_report(const ExperimentConfig& cfg, json results, bool pass,
                                      json verdict, CsvBuilder csv) {
  ExperimentReport r;
  verdict["pass"] = pass;
  r.doc = {{"scenario", cfg.scenario},
           {"config", cfg.to_json()},
           {"results", std::move(results)},
           {"verdict", std::move(verdict)}};
  r.doc["report_hash"] = report_hash(r.doc);
  r.doc["provenance"] = {{"version", kVersion}, {"timestamp", iso_timestamp()}};
  r.pass = pass;
  r.csv = csv.str();
  return r;
}

}  // namespace detail

// A zero-entropy mask selecting from fresh random sequences should leave
// their statistics inside the envelope of untouched random baselines.
inline ExperimentReport run_forward_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const GeneratorSpec yspec = GeneratorSpec::parse(cfg.y_spec);
  if (yspec.kind == GenKind::prng)
    throw config_error("forward experiment requires a zero-entropy y (sturmian, champernowne or periodic)");
  const BitString y = generate_prefix(yspec, cfg.n);
  const SelectionMask mask(y);
  const mpq_class dens = density(mask, cfg.n);
  if (dens == 0) throw config_error("forward hypothesis violated: density(y) = 0");
  const uint64_t m = mask.ones();
  if (m < cfg.k_max || m < (uint64_t{1} << 10))
    throw config_error("selected length too small for the configured statistics");

  detail::CsvBuilder csv;
  const ComplexityEstimate y_rate = kt_compress_rate(y, cfg.kt_order_y);
  const NormalityReport y_norm = normality_defect(y, cfg.k_max);
  csv.add_normality("y", y_norm);
  csv.add_complexity("y", y_rate);
  // Both entropy proxies for y go into the record: the KT rate above and
  // the windowed block-entropy supremum below, at the largest block
  // length the sample-size rule admits.
  unsigned k_w = cfg.k_max;
  while (k_w > 1 && (uint64_t{64} << k_w) > cfg.n) --k_w;
  const uint64_t window = std::min<uint64_t>(cfg.n, std::max<uint64_t>(uint64_t{64} << k_w, cfg.n / 8));
  const double y_went = windowed_entropy_sup(y, k_w, window, std::max<uint64_t>(1, window / 2));

  std::vector<double> base_defect, base_rate;
  json baseline_vals = json::array();
  for (uint64_t seed : cfg.baselines()) {
    const BitString w = prng_prefix(seed, m);
    const NormalityReport nr = normality_defect(w, cfg.k_max);
    const ComplexityEstimate ce = kt_compress_rate(w, cfg.kt_order);
    base_defect.push_back(nr.defect_value());
    base_rate.push_back(ce.rate);
    baseline_vals.push_back({{"seed", seed}, {"defect", nr.defect_value()}, {"kt_rate", ce.rate}});
  }
  const auto env_defect = detail::Envelope::of(base_defect, cfg.envelope_rel, cfg.envelope_abs);
  const auto env_rate = detail::Envelope::of(base_rate, cfg.envelope_rel, cfg.envelope_abs);

  uint64_t inside_count = 0;
  json arms = json::array();
  for (uint64_t seed : cfg.arms()) {
    const BitString x = prng_prefix(seed, cfg.n);
    const BitString xy = select(x, mask);
    const NormalityReport nr = normality_defect(xy, cfg.k_max);
    const ComplexityEstimate ce = kt_compress_rate(xy, cfg.kt_order);
    const ComplexityEstimate xrate = kt_compress_rate(x, cfg.kt_order);
    const bool inside = env_defect.contains(nr.defect_value()) && env_rate.contains(ce.rate);
    inside_count += inside;
    arms.push_back({{"seed", seed},
                    {"x_kt_rate", xrate.rate},
                    {"xy_defect", nr.defect_value()},
                    {"xy_kt_rate", ce.rate},
                    {"inside", inside}});
    const std::string label = "x/y[seed=" + std::to_string(seed) + "]";
    csv.add_normality(label, nr);
    csv.add_complexity(label, ce);
  }
  const uint64_t need = cfg.min_pass ? cfg.min_pass : cfg.arms().size() - 1;
  const bool pass = inside_count >= need;

  json results = {{"y", {{"density", dens.get_str()},
                         {"density_value", dens.get_d()},
                         {"kt_rate", y_rate.rate},
                         {"windowed_entropy_sup", y_went},
                         {"windowed_entropy_k", k_w},
                         {"defect", y_norm.defect_value()},
                         {"selected_length", m}}},
                  {"baseline", {{"defect_envelope", env_defect.to_json()},
                                {"rate_envelope", env_rate.to_json()},
                                {"values", baseline_vals}}},
                  {"arms", arms}};
  json verdict = {{"inside_count", inside_count}, {"required", need}};
  return detail::finish_report(cfg, std::move(results), pass, std::move(verdict), std::move(csv));
}

// Selecting a positive-entropy sequence along itself yields the all-ones
// word: one mask that wrecks normality of whatever random input it sees.
inline ExperimentReport run_counterexample(const ExperimentConfig& cfg) {
  cfg.validate();
  const GeneratorSpec yspec = GeneratorSpec::parse(cfg.y_spec);
  if (yspec.kind != GenKind::prng)
    throw config_error("counterexample requires y_spec = prng:SEED");
  const BitString y = generate_prefix(yspec, cfg.n);
  const SelectionMask mask(y);
  const BitString xy = select(y, mask);  // x = y
  if (xy.empty()) throw config_error("degenerate counterexample: y has no ones");

  detail::CsvBuilder csv;
  const ComplexityEstimate y_rate = kt_compress_rate(y, cfg.kt_order);
  csv.add_complexity("y", y_rate);
  const NormalityReport nr = normality_defect(xy, 1);
  csv.add_normality("x/y", nr);
  // Exact distance of freq(1) from 1/2 at k = 1.
  const mpq_class d1 = nr.at_k(1).defect;
  const double d1_err = std::abs(d1.get_d() - 0.5);

  // Control arm: an independent x keeps x/y random-looking.
  uint64_t control_seed = yspec.seed + 1;
  if (!cfg.x_spec.empty()) {
    const GeneratorSpec xspec = GeneratorSpec::parse(cfg.x_spec);
    if (xspec.kind != GenKind::prng)
      throw config_error("counterexample control arm must be prng:SEED");
    control_seed = xspec.seed;
  }
  const BitString x2 = prng_prefix(control_seed, cfg.n);
  const NormalityReport control = normality_defect(select(x2, mask), cfg.k_max);
  csv.add_normality("control x/y", control);

  const bool pass = y_rate.rate >= cfg.kt_rate_high && d1_err <= cfg.defect_tol;
  json results = {{"y_kt_rate", y_rate.rate},
                  {"xy_length", xy.size()},
                  {"xy_defect_k1", d1.get_d()},
                  {"xy_defect_k1_exact", d1.get_str()},
                  {"control_seed", control_seed},
                  {"control_defect", control.defect_value()}};
  json verdict = {{"kt_rate_high", y_rate.rate >= cfg.kt_rate_high},
                  {"defect_is_half", d1_err <= cfg.defect_tol}};
  return detail::finish_report(cfg, std::move(results), pass, std::move(verdict), std::move(csv));
}

// z = arithmetic code of y is incompressible, yet z/y is cheap given y
// because the code word itself is a catalog transform of y.
inline ExperimentReport run_converse_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const GeneratorSpec yspec = GeneratorSpec::parse(cfg.y_spec);
  if (yspec.kind != GenKind::prng)
    throw config_error("converse experiment requires y_spec = prng:SEED (positive entropy)");
  const BitString y = generate_prefix(yspec, cfg.n);
  const auto P = make_measure(cfg.measure_id);
  const LogProb lp = measure_logprob(*P, y);
  if (lp.off_support) throw config_error("y is off the support of " + cfg.measure_id);
  const uint64_t fn = code_target_length(lp);
  if (static_cast<double>(fn) < cfg.vacuous_fraction * static_cast<double>(cfg.n))
    throw config_error("f(n) = o(n) regime: converse construction vacuous for this measure");

  auto zext = extended_code(*P, y, cfg.n);
  if (!zext) throw config_error("cannot build extended code word");
  const BitString z = *zext;

  detail::CsvBuilder csv;
  const ComplexityEstimate rate_z = kt_compress_rate(z, cfg.kt_order);
  csv.add_complexity("z", rate_z);
  const SelectionMask mask(y);
  const BitString zy = select(z, mask);
  if (zy.empty()) throw config_error("degenerate mask: y has no ones");
  std::vector<const Measure*> ms{P.get()};
  const Catalog cat = make_default_catalog(ms);
  const ComplexityEstimate cond = conditional_estimate(zy, y, cat, cfg.kt_order);
  const ComplexityEstimate uncond = kt_compress_rate(zy, cfg.kt_order);
  csv.add_complexity("z/y|y", cond);
  csv.add_complexity("z/y", uncond);

  const bool pass = rate_z.rate >= cfg.converse_rate_min && cond.rate <= cfg.converse_cond_max;
  json results = {{"f_n", fn},
                  {"neg_log2_rate", lp.mid() / static_cast<double>(cfg.n)},
                  {"code_length", z.size()},
                  {"z_kt_rate", rate_z.rate},
                  {"zy_conditional_rate", cond.rate},
                  {"zy_conditional_entry", cond.detail},
                  {"zy_unconditional_rate", uncond.rate}};
  json verdict = {{"z_incompressible", rate_z.rate >= cfg.converse_rate_min},
                  {"conditional_cheap", cond.rate <= cfg.converse_cond_max}};
  return detail::finish_report(cfg, std::move(results), pass, std::move(verdict), std::move(csv));
}

// Weak-randomness gap over a ladder of prefix lengths; the verdict looks
// at the final gap, the trend is recorded alongside.
inline ExperimentReport run_weakrand_check(const ExperimentConfig& cfg) {
  cfg.validate();
  const GeneratorSpec yspec = GeneratorSpec::parse(cfg.y_spec);
  const auto P = make_measure(cfg.measure_id);
  if (cfg.n < (uint64_t{1} << cfg.ladder_min_exp))
    throw config_error("n smaller than the first ladder rung");

  std::vector<uint64_t> ladder;
  for (unsigned e = cfg.ladder_min_exp; (uint64_t{1} << e) <= cfg.n; e += 2)
    ladder.push_back(uint64_t{1} << e);
  if (ladder.back() != cfg.n) ladder.push_back(cfg.n);

  detail::CsvBuilder csv;
  BitStream ys(yspec);
  BitString y;
  json rungs = json::array();
  std::vector<double> gaps;
  for (uint64_t len : ladder) {
    y.append(ys.take(len - y.size()));
    const GapResult g = weak_randomness_gap(y, *P, cfg.kt_order);
    if (g.off_support)
      throw config_error("y prefix of length " + std::to_string(len) + " is off the support of " +
                         cfg.measure_id);
    gaps.push_back(g.gap);
    rungs.push_back({{"n", len}, {"kt_rate", g.kt_rate}, {"log_rate", g.log_rate}, {"gap", g.gap}});
    ComplexityEstimate e;
    e.method = "gap_order_" + std::to_string(cfg.kt_order);
    e.bits_total = g.gap * static_cast<double>(len);
    e.rate = g.gap;
    csv.add_complexity("y[n=" + std::to_string(len) + "]", e);
  }
  unsigned nonincreasing = 0;
  for (size_t i = 1; i < gaps.size(); ++i) nonincreasing += gaps[i] <= gaps[i - 1];

  const bool pass = gaps.back() <= cfg.gap_max;
  json results = {{"ladder", rungs},
                  {"final_gap", gaps.back()},
                  {"nonincreasing_steps", nonincreasing},
                  {"total_steps", gaps.size() - 1}};
  json verdict = {{"final_gap_ok", pass}};
  return detail::finish_report(cfg, std::move(results), pass, std::move(verdict), std::move(csv));
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.scenario == "forward") return run_forward_experiment(cfg);
  if (cfg.scenario == "converse") return run_converse_experiment(cfg);
  if (cfg.scenario == "counterexample") return run_counterexample(cfg);
  if (cfg.scenario == "weakrand") return run_weakrand_check(cfg);
  throw config_error("unknown scenario: " + cfg.scenario);
}

}  // namespace normsel
