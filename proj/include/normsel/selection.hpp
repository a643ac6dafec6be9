// Oblivious subsequence selection: the mask y, its index map tau, the
// selected word x/y, the complement split, and its inverse merge.
#pragma once

#include <gmpxx.h>

#include <bit>
#include <cstdint>
#include <utility>

#include "normsel/bitstring.hpp"
#include "normsel/errors.hpp"

namespace normsel {

// y together with its ones count. tau(j) is the position of the j-th
// one, so y_i = 1 iff i = tau(j) for some j.
class SelectionMask {
 public:
  explicit SelectionMask(BitString y) : y_(std::move(y)), ones_(y_.count_ones()) {}

  const BitString& bits() const { return y_; }
  uint64_t size() const { return y_.size(); }
  uint64_t ones() const { return ones_; }
  uint64_t zeros() const { return y_.size() - ones_; }

  // 1-based index map; defined for 1 <= j <= ones(). Linear scan.
  uint64_t tau(uint64_t j) const {
    if (j < 1 || j > ones_) throw domain_error("tau index out of range");
    uint64_t seen = 0;
    for (uint64_t wi = 0; wi < y_.word_size(); ++wi) {
      uint64_t w = y_.word(wi);
      const uint64_t c = std::popcount(w);
      if (seen + c < j) {
        seen += c;
        continue;
      }
      while (w) {
        const unsigned t = std::countr_zero(w);
        if (++seen == j) return (wi << 6) + t + 1;
        w &= w - 1;
      }
    }
    throw domain_error("tau scan failed");  // unreachable for valid j
  }

  SelectionMask complement() const {
    BitString c = BitString::zeros(y_.size());
    for (uint64_t i = 1; i <= y_.size(); ++i)
      if (!y_.bit(i)) c.set(i, true);
    return SelectionMask(std::move(c));
  }

 private:
  BitString y_;
  uint64_t ones_;
};

// x/y: bits of x at the positions where y is 1.
inline BitString select(const BitString& x, const SelectionMask& y) {
  if (x.size() != y.size())
    throw domain_error("select: |x| = " + std::to_string(x.size()) +
                       " but |y| = " + std::to_string(y.size()));
  BitString out;
  for (uint64_t wi = 0; wi < y.bits().word_size(); ++wi) {
    uint64_t w = y.bits().word(wi);
    const uint64_t xw = x.word(wi);
    while (w) {
      const unsigned t = std::countr_zero(w);
      out.push_back((xw >> t) & 1);
      w &= w - 1;
    }
  }
  return out;
}

// (x/y, x/~y).
inline std::pair<BitString, BitString> split(const BitString& x, const SelectionMask& y) {
  if (x.size() != y.size()) throw domain_error("split: length mismatch");
  BitString a, b;
  for (uint64_t wi = 0; wi < y.bits().word_size(); ++wi) {
    const uint64_t yw = y.bits().word(wi);
    const uint64_t xw = x.word(wi);
    const uint64_t hi = wi + 1 < y.bits().word_size() ? 64 : ((y.size() - 1) & 63) + 1;
    for (unsigned t = 0; t < hi; ++t) {
      const bool xb = (xw >> t) & 1;
      if ((yw >> t) & 1)
        a.push_back(xb);
      else
        b.push_back(xb);
    }
  }
  return {a, b};
}

// The unique x with x/y = a and x/~y = b.
inline BitString merge_selected(const SelectionMask& y, const BitString& a, const BitString& b) {
  if (a.size() != y.ones())
    throw domain_error("merge: |a| must equal ones(y)");
  if (b.size() != y.size() - y.ones())
    throw domain_error("merge: |b| must equal |y| - ones(y)");
  BitString x;
  uint64_t ia = 0, ib = 0;
  for (uint64_t i = 1; i <= y.size(); ++i)
    x.push_back(y.bits().bit(i) ? a.bit(++ia) : b.bit(++ib));
  return x;
}

// (sum_{i<=n} y_i)/n as an exact rational.
inline mpq_class density(const SelectionMask& y, uint64_t n) {
  if (n == 0) throw domain_error("density: n must be positive");
  if (n > y.size()) throw domain_error("density: n exceeds mask length");
  mpq_class q(static_cast<unsigned long>(y.bits().count_ones_prefix(n)),
              static_cast<unsigned long>(n));
  q.canonicalize();
  return q;
}

}  // namespace normsel
