// Computable stand-ins for Kolmogorov-complexity rates: LZ78 phrase
// counting, Krichevsky-Trofimov mixture code lengths (exact, via the
// closed-form per-context product), a fixed transform catalog for
// conditional complexity, and the weak-randomness gap between the KT
// rate and the exact log-likelihood rate of a measure.
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "normsel/bitstring.hpp"
#include "normsel/coder.hpp"
#include "normsel/errors.hpp"
#include "normsel/measure.hpp"
#include "normsel/selection.hpp"

namespace normsel {

struct ComplexityEstimate {
  std::string method;     // lz78 | kt_order_k | catalog_conditional
  double bits_total = 0;  // integer-valued for KT and catalog estimates
  double rate = 0;        // bits_total / n
  unsigned order = 0;     // KT context order where applicable
  std::string detail;     // phrase count / catalog entry chosen
};

// ---- LZ78 ----------------------------------------------------------------

// Incremental parse: each phrase is the longest dictionary match plus
// one symbol; the final phrase may be a bare dictionary match. Tokens
// are (dictionary index, extension symbol), index 0 = empty phrase.
struct Lz78Token {
  uint32_t parent = 0;
  bool has_symbol = false;
  bool symbol = false;
};

inline std::vector<Lz78Token> lz78_parse(const BitString& x) {
  if (x.empty()) throw domain_error("lz78: empty input");
  std::vector<Lz78Token> tokens;
  std::unordered_map<uint64_t, uint32_t> dict;  // key = (node << 1) | bit
  uint32_t next_id = 1;
  uint32_t node = 0;
  for (uint64_t i = 1; i <= x.size(); ++i) {
    const bool b = x.bit(i);
    const uint64_t key = (uint64_t{node} << 1) | (b ? 1 : 0);
    auto it = dict.find(key);
    if (it != dict.end()) {
      node = it->second;
      continue;
    }
    dict.emplace(key, next_id++);
    tokens.push_back({node, true, b});
    node = 0;
  }
  if (node != 0) tokens.push_back({node, false, false});
  return tokens;
}

inline BitString lz78_reconstruct(const std::vector<Lz78Token>& tokens) {
  std::vector<std::pair<uint32_t, bool>> nodes;  // (parent, symbol), 1-based ids
  BitString x;
  auto emit_phrase = [&](uint32_t id) {
    std::vector<bool> stack;
    while (id != 0) {
      stack.push_back(nodes[id - 1].second);
      id = nodes[id - 1].first;
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) x.push_back(*it);
  };
  for (const auto& t : tokens) {
    emit_phrase(t.parent);
    if (t.has_symbol) {
      x.push_back(t.symbol);
      nodes.push_back({t.parent, t.symbol});
    }
  }
  return x;
}

inline ComplexityEstimate lz78_estimate(const BitString& x) {
  const auto tokens = lz78_parse(x);
  const uint64_t c = tokens.size();
  ComplexityEstimate e;
  e.method = "lz78";
  e.bits_total = static_cast<double>(c) * (std::log2(static_cast<double>(c)) + 1.0);
  e.rate = e.bits_total / static_cast<double>(x.size());
  e.detail = "phrases=" + std::to_string(c);
  return e;
}

// ---- Krichevsky-Trofimov -------------------------------------------------

namespace detail {

// Balanced product of a list of mpz factors.
inline mpz_class tree_product(std::vector<mpz_class>& v, size_t lo, size_t hi) {
  if (lo == hi) return 1;
  if (hi - lo == 1) return v[lo];
  const size_t mid = lo + (hi - lo) / 2;
  return tree_product(v, lo, mid) * tree_product(v, mid, hi);
}

}  // namespace detail

// Exact KT mixture probability of x under order-k binary contexts
// (contexts before position k+1 are padded with zeros). Per context
// with a zeros and b ones the sequential add-1/2 product collapses to
//   (2a)! (2b)! / (4^(a+b) a! b! (a+b)!).
inline BigRatio kt_probability(const BitString& x, unsigned order) {
  if (order > 16) throw domain_error("kt: order must be <= 16");
  const uint64_t ctxs = uint64_t{1} << order;
  std::vector<uint64_t> zeros(ctxs, 0), ones(ctxs, 0);
  uint64_t ctx = 0;
  const uint64_t mask = ctxs - 1;
  for (uint64_t i = 1; i <= x.size(); ++i) {
    const bool b = x.bit(i);
    (b ? ones : zeros)[ctx]++;
    ctx = ((ctx << 1) | (b ? 1 : 0)) & mask;
  }
  std::vector<mpz_class> nums, dens;
  for (uint64_t c = 0; c < ctxs; ++c) {
    const uint64_t a = zeros[c], b = ones[c];
    if (a + b == 0) continue;
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), 2 * a);
    nums.push_back(f);
    mpz_fac_ui(f.get_mpz_t(), 2 * b);
    nums.push_back(f);
    mpz_fac_ui(f.get_mpz_t(), a);
    dens.push_back(f);
    mpz_fac_ui(f.get_mpz_t(), b);
    dens.push_back(f);
    mpz_fac_ui(f.get_mpz_t(), a + b);
    dens.push_back(f);
  }
  BigRatio r;
  r.num = detail::tree_product(nums, 0, nums.size());
  r.den = detail::tree_product(dens, 0, dens.size()) << (2 * x.size());
  return r;
}

// ceil(-log2 P_KT(x)), exact.
inline uint64_t kt_bits_exact(const BitString& x, unsigned order) {
  if (x.empty()) return 0;
  const BigRatio p = kt_probability(x, order);
  auto [m, pow2] = floor_neg_log2(p.num, p.den);
  return pow2 ? m : m + 1;
}

inline ComplexityEstimate kt_compress_rate(const BitString& x, unsigned order) {
  const uint64_t bits = kt_bits_exact(x, order);
  ComplexityEstimate e;
  e.method = "kt_order_" + std::to_string(order);
  e.order = order;
  e.bits_total = static_cast<double>(bits);
  e.rate = x.empty() ? 0.0 : e.bits_total / static_cast<double>(x.size());
  return e;
}

// The KT mixture as a computable measure, for cross-checking the exact
// bit count against what the arithmetic coder actually emits.
class KTMeasure final : public Measure {
 public:
  explicit KTMeasure(unsigned order) : order_(order) {
    if (order > 16) throw domain_error("kt: order must be <= 16");
  }

  std::string id() const override { return "kt:" + std::to_string(order_); }

  class State final : public MeasureState {
   public:
    explicit State(unsigned order)
        : mask_((uint64_t{1} << order) - 1), zeros_(uint64_t{1} << order, 0),
          ones_(uint64_t{1} << order, 0) {}
    Rat64 prob_zero() const override {
      const uint64_t a = zeros_[ctx_], b = ones_[ctx_];
      return {2 * a + 1, 2 * (a + b) + 2};
    }
    void advance(bool bit) override {
      (bit ? ones_ : zeros_)[ctx_]++;
      ctx_ = ((ctx_ << 1) | (bit ? 1 : 0)) & mask_;
    }

   private:
    uint64_t ctx_ = 0;
    uint64_t mask_;
    std::vector<uint64_t> zeros_, ones_;
  };

  std::unique_ptr<MeasureState> start() const override { return std::make_unique<State>(order_); }

  BigRatio prob(const BitString& x) const override { return kt_probability(x, order_); }

 private:
  unsigned order_;
};

// ---- Conditional complexity via a fixed transform catalog -----------------

// Deterministic extension of an arithmetic code word to a target length:
// the code of `side` is repeated and truncated. Used both when building
// the converse experiment's z and inside the catalog, so the two agree.
inline std::optional<BitString> extended_code(const Measure& P, const BitString& side, uint64_t len) {
  BigRatio p = P.prob(side);
  if (p.zero) return std::nullopt;
  const BitString z = encode(P, side).z;
  if (z.empty()) return std::nullopt;
  BitString out;
  while (out.size() < len) {
    for (uint64_t i = 1; i <= z.size() && out.size() < len; ++i) out.push_back(z.bit(i));
  }
  return out;
}

// A catalog entry maps the side string to one candidate for the target.
struct CatalogEntry {
  std::string name;
  std::function<std::optional<BitString>(const BitString& side, uint64_t len)> transform;
};

struct Catalog {
  std::vector<CatalogEntry> entries;

  uint64_t id_cost_bits() const {
    uint64_t c = 0;
    while ((uint64_t{1} << c) < entries.size()) ++c;
    return c;
  }
};

// The transforms a decoder could reconstruct from the side string alone:
// constants, the side itself, its complement, the arithmetic code z(side)
// under each registered measure, and that code selected back through the
// side as a mask.
inline Catalog make_default_catalog(const std::vector<const Measure*>& measures) {
  Catalog cat;
  cat.entries.push_back({"constant-0", [](const BitString&, uint64_t len) {
                           return BitString::zeros(len);
                         }});
  cat.entries.push_back({"constant-1", [](const BitString&, uint64_t len) {
                           return BitString::ones(len);
                         }});
  cat.entries.push_back({"identity", [](const BitString& side, uint64_t len) -> std::optional<BitString> {
                           if (side.size() < len) return std::nullopt;
                           return side.prefix(len);
                         }});
  cat.entries.push_back({"complement", [](const BitString& side, uint64_t len) -> std::optional<BitString> {
                           if (side.size() < len) return std::nullopt;
                           return SelectionMask(side.prefix(len)).complement().bits();
                         }});
  for (const Measure* m : measures) {
    cat.entries.push_back({"code[" + m->id() + "]",
                           [m](const BitString& side, uint64_t len) {
                             return extended_code(*m, side, len);
                           }});
    cat.entries.push_back({"code/side[" + m->id() + "]",
                           [m](const BitString& side, uint64_t len) -> std::optional<BitString> {
                             auto z = extended_code(*m, side, side.size());
                             if (!z) return std::nullopt;
                             BitString sel = select(*z, SelectionMask(side));
                             if (sel.size() < len) return std::nullopt;
                             return sel.prefix(len);
                           }});
  }
  return cat;
}

// Proxy for K(target | side): entry id plus a KT-coded residual, where a
// transform that reproduces target exactly leaves an empty residual.
inline ComplexityEstimate conditional_estimate(const BitString& target, const BitString& side,
                                               const Catalog& cat, unsigned kt_order) {
  if (target.empty()) throw domain_error("conditional_estimate: empty target");
  if (cat.entries.empty()) throw domain_error("conditional_estimate: empty catalog");
  const uint64_t id_bits = cat.id_cost_bits();
  std::string hit;
  for (const auto& e : cat.entries) {
    auto candidate = e.transform(side, target.size());
    if (candidate && *candidate == target) {
      hit = e.name;
      break;
    }
  }
  ComplexityEstimate est;
  est.method = "catalog_conditional";
  est.order = kt_order;
  if (!hit.empty()) {
    est.bits_total = static_cast<double>(id_bits);
    est.detail = "entry=" + hit;
  } else {
    est.bits_total = static_cast<double>(id_bits + kt_bits_exact(target, kt_order));
    est.detail = "entry=none";
  }
  est.rate = est.bits_total / static_cast<double>(target.size());
  return est;
}

// ---- Weak randomness -----------------------------------------------------

// | KT rate  -  (-log2 P(y))/n |. Off support is a distinguished
// outcome, not an exception.
struct GapResult {
  bool off_support = false;
  double kt_rate = 0;
  double log_rate = 0;  // (-log2 P)/n, bracket midpoint (width <= 2^-32/n)
  double gap = 0;
};

inline GapResult weak_randomness_gap(const BitString& y, const Measure& P, unsigned kt_order) {
  if (y.empty()) throw domain_error("weak_randomness_gap: empty input");
  GapResult g;
  const LogProb lp = measure_logprob(P, y);
  if (lp.off_support) {
    g.off_support = true;
    return g;
  }
  g.kt_rate = kt_compress_rate(y, kt_order).rate;
  g.log_rate = mpq_class((lp.lo + lp.hi) / 2 / static_cast<unsigned long>(y.size())).get_d();
  g.gap = std::abs(g.kt_rate - g.log_rate);
  return g;
}

}  // namespace normsel
