// Finite-scale normality statistics: k-block histograms, the worst-block
// defect against the uniform frequency 2^-k, subword complexity, and
// empirical block entropy. Frequencies are compared in exact rational
// arithmetic; only entropy uses floating point.
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "normsel/bitstring.hpp"
#include "normsel/errors.hpp"

namespace normsel {

// Histogram bins are indexed by the block read in text order: block
// w_1..w_k maps to the integer w_1*2^(k-1) + ... + w_k.
struct BlockHistogram {
  unsigned k = 0;
  bool overlapping = true;
  uint64_t total = 0;
  std::vector<uint64_t> counts;

  uint64_t count_of(const BitString& w) const {
    if (w.size() != k) throw domain_error("block length does not match histogram");
    uint64_t idx = 0;
    for (uint64_t i = 1; i <= w.size(); ++i) idx = (idx << 1) | (w.bit(i) ? 1 : 0);
    return counts[idx];
  }
};

namespace detail {
// Histograms materialize 2^k bins; beyond this the statistic is
// meaningless at desk scale anyway.
inline constexpr unsigned kMaxBlock = 20;
}  // namespace detail

inline BlockHistogram block_histogram(const BitString& x, unsigned k, bool overlapping) {
  if (k == 0 || k > x.size()) throw domain_error("block length k out of range");
  if (k > detail::kMaxBlock) throw domain_error("block length k exceeds supported maximum");
  BlockHistogram h;
  h.k = k;
  h.overlapping = overlapping;
  h.counts.assign(uint64_t{1} << k, 0);
  const uint64_t mask = (uint64_t{1} << k) - 1;
  if (overlapping) {
    h.total = x.size() - k + 1;
    uint64_t code = 0;
    for (uint64_t i = 1; i <= x.size(); ++i) {
      code = ((code << 1) | (x.bit(i) ? 1 : 0)) & mask;
      if (i >= k) ++h.counts[code];
    }
  } else {
    h.total = x.size() / k;
    for (uint64_t blk = 0; blk < h.total; ++blk) {
      uint64_t code = 0;
      for (unsigned j = 1; j <= k; ++j) code = (code << 1) | (x.bit(blk * k + j) ? 1 : 0);
      ++h.counts[code];
    }
  }
  return h;
}

inline uint64_t subword_complexity(const BitString& x, unsigned k) {
  BlockHistogram h = block_histogram(x, k, true);
  uint64_t distinct = 0;
  for (uint64_t c : h.counts) distinct += c > 0;
  return distinct;
}

// (1/k) * sum_w -p(w) log2 p(w) over the overlapping k-block empirical
// distribution; 0 log 0 = 0.
inline double block_entropy_of(const BlockHistogram& h) {
  double s = 0.0;
  for (uint64_t c : h.counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(h.total);
    s -= p * std::log2(p);
  }
  return s / h.k;
}

inline double block_entropy(const BitString& x, unsigned k) {
  return block_entropy_of(block_histogram(x, k, true));
}

struct NormalityPerK {
  unsigned k = 0;
  mpq_class defect;     // max_w |count(w)/total - 2^-k|, exact
  double entropy = 0;   // h_k, bits per symbol
  uint64_t subwords = 0;
  bool reliable = true; // total >= 64 * 2^k counted positions
};

struct NormalityReport {
  uint64_t n = 0;
  unsigned k_max = 0;
  mpq_class defect;  // max over all k <= k_max
  std::vector<NormalityPerK> per_k;

  double defect_value() const { return defect.get_d(); }

  const NormalityPerK& at_k(unsigned k) const {
    for (const auto& e : per_k)
      if (e.k == k) return e;
    throw domain_error("no such k in report");
  }
};

inline NormalityReport normality_defect(const BitString& x, unsigned k_max) {
  if (k_max == 0) throw domain_error("k_max must be >= 1");
  if (x.size() < k_max) throw domain_error("input shorter than k_max");
  NormalityReport r;
  r.n = x.size();
  r.k_max = k_max;
  r.defect = 0;
  for (unsigned k = 1; k <= k_max; ++k) {
    BlockHistogram h = block_histogram(x, k, true);
    // |c/T - 2^-k| = |c*2^k - T| / (T*2^k); take the worst numerator.
    mpz_class worst = 0;
    for (uint64_t c : h.counts) {
      mpz_class num = mpz_class(static_cast<unsigned long>(c)) * (mpz_class(1) << k) -
                      static_cast<unsigned long>(h.total);
      mpz_class a = abs(num);
      if (a > worst) worst = a;
    }
    NormalityPerK e;
    e.k = k;
    e.defect = mpq_class(worst, mpz_class(static_cast<unsigned long>(h.total)) * (mpz_class(1) << k));
    e.defect.canonicalize();
    e.entropy = block_entropy_of(h);
    uint64_t distinct = 0;
    for (uint64_t c : h.counts) distinct += c > 0;
    e.subwords = distinct;
    e.reliable = h.total >= (uint64_t{64} << k);
    if (e.defect > r.defect) r.defect = e.defect;
    r.per_k.push_back(std::move(e));
  }
  return r;
}

// Max of block_entropy over sliding windows x_{t..t+window-1},
// t = 1, 1+stride, ... (full windows only).
inline double windowed_entropy_sup(const BitString& x, unsigned k, uint64_t window, uint64_t stride) {
  if (k == 0 || k > detail::kMaxBlock) throw domain_error("block length k out of range");
  if (stride == 0) throw domain_error("stride must be >= 1");
  if (window > x.size()) throw domain_error("window exceeds input length");
  if (window < (uint64_t{64} << k))
    throw domain_error("window too small: need at least 64 * 2^k symbols");
  const uint64_t mask = (uint64_t{1} << k) - 1;
  const uint64_t bins = uint64_t{1} << k;
  std::vector<uint64_t> counts(bins, 0);
  double sup = 0.0;
  for (uint64_t t = 1; t + window - 1 <= x.size(); t += stride) {
    std::fill(counts.begin(), counts.end(), 0);
    uint64_t code = 0;
    for (uint64_t i = t; i < t + window; ++i) {
      code = ((code << 1) | (x.bit(i) ? 1 : 0)) & mask;
      if (i - t + 1 >= k) ++counts[code];
    }
    const uint64_t total = window - k + 1;
    double s = 0.0;
    for (uint64_t c : counts) {
      if (c == 0) continue;
      const double p = static_cast<double>(c) / static_cast<double>(total);
      s -= p * std::log2(p);
    }
    sup = std::max(sup, s / k);
  }
  return sup;
}

}  // namespace normsel
