// Binary arithmetic codec over exact rational conditional measures.
//
// The code is defined by one abstract machine: an interval [low, low+width)
// inside [0,1), subdivided per symbol at w0 = floor(width * P(0|prefix)),
// with width kept in (2^61, 2^62] by doubling (each doubling is one bit of
// scale). The emitted word is the shortest dyadic v/2^len whose cylinder
// fits inside the final interval, so |z| <= -log2 P(y) + 2.
//
// Two encoder engines realize the machine:
//   reference  — full-precision low bound as a GMP integer; no carries to
//                get wrong by construction (test regime, n <= 2^16).
//   streaming  — 62-bit low register, emitting one buffered bit per
//                renormalization, with carries rippled into the buffer
//                (long inputs).
// The two must agree bit for bit; the decoder is a single 64-bit machine.
//
// Code words are per-length objects: z(y_1^m) need not be a prefix of
// z(y_1^n) for m < n, since the flush depends on where the interval sits
// when the input stops.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "normsel/bitstring.hpp"
#include "normsel/errors.hpp"
#include "normsel/measure.hpp"

namespace normsel {

enum class CoderEngine { automatic, reference, streaming };

namespace detail {

inline constexpr uint64_t kWidthOne = uint64_t{1} << 62;   // width of [0,1)
inline constexpr uint64_t kRenormBound = uint64_t{1} << 61;

inline uint64_t split_width(uint64_t width, const Rat64& p0) {
  if (p0.den == 0 || p0.num > p0.den) throw domain_error("conditional probability out of range");
  if (p0.den > (uint64_t{1} << 32)) throw domain_error("conditional denominator exceeds 2^32");
  return static_cast<uint64_t>((static_cast<unsigned __int128>(width) * p0.num) / p0.den);
}

}  // namespace detail

struct CodeOutput {
  BitString z;
  uint64_t f_n = 0;        // least integer greater than -log2 P(y)
  LogProb logp;            // exact P(y) bookkeeping
  std::string measure_id;
  uint64_t n = 0;          // source length
};

namespace detail {

inline BitString encode_reference(const Measure& P, const BitString& y) {
  mpz_class low = 0;
  uint64_t width = kWidthOne;
  uint64_t scale = 62;
  auto st = P.start();
  for (uint64_t i = 1; i <= y.size(); ++i) {
    const Rat64 p0 = st->prob_zero();
    const bool b = y.bit(i);
    const uint64_t w0 = split_width(width, p0);
    if ((!b && w0 == 0) || (b && w0 == width))
      throw off_support_error("encode: symbol has probability zero at position " + std::to_string(i));
    if (!b) {
      width = w0;
    } else {
      low += static_cast<unsigned long>(w0);
      width -= w0;
    }
    st->advance(b);
    while (width <= kRenormBound) {
      width <<= 1;
      low <<= 1;
      ++scale;
    }
  }
  // Flush: max r with ceil(low/2^r)*2^r + 2^r <= low + width.
  unsigned r = 62;
  for (;; --r) {
    mpz_class rem = low & ((mpz_class(1) << r) - 1);
    mpz_class u = rem == 0 ? mpz_class(0) : (mpz_class(1) << r) - rem;
    if (u + (mpz_class(1) << r) <= width) break;
    if (r == 0) throw domain_error("flush failed");  // unreachable
  }
  mpz_class v = (low + ((mpz_class(1) << r) - 1)) >> r;
  const uint64_t len = scale - r;
  BitString z = BitString::zeros(len);
  for (uint64_t j = 0; j < len; ++j)
    if (mpz_tstbit(v.get_mpz_t(), static_cast<mp_bitcnt_t>(len - 1 - j))) z.set(j + 1, true);
  return z;
}

// Adds one to the binary number held in buf (most significant bit
// first). The machine keeps low + width <= 2^scale, so the ripple
// always terminates inside the buffer.
inline void carry_into(BitString& buf) {
  uint64_t j = buf.size();
  while (j >= 1 && buf.bit(j)) {
    buf.set(j, false);
    --j;
  }
  if (j == 0) throw domain_error("carry overflow: interval escaped [0,1)");
  buf.set(j, true);
}

inline BitString encode_streaming(const Measure& P, const BitString& y) {
  constexpr uint64_t kLowMask = (uint64_t{1} << 62) - 1;
  BitString buf;            // bits of low above the 62-bit register
  uint64_t low = 0;         // low 62 bits
  uint64_t width = kWidthOne;
  auto st = P.start();
  for (uint64_t i = 1; i <= y.size(); ++i) {
    const Rat64 p0 = st->prob_zero();
    const bool b = y.bit(i);
    const uint64_t w0 = split_width(width, p0);
    if ((!b && w0 == 0) || (b && w0 == width))
      throw off_support_error("encode: symbol has probability zero at position " + std::to_string(i));
    if (!b) {
      width = w0;
    } else {
      const uint64_t t = low + w0;  // < 2^63, no overflow
      if (t >> 62) carry_into(buf);
      low = t & kLowMask;
      width -= w0;
    }
    st->advance(b);
    while (width <= kRenormBound) {
      buf.push_back((low >> 61) & 1);
      low = (low << 1) & kLowMask;
      width <<= 1;
    }
  }
  // Same flush rule as the reference engine, on the 62-bit window.
  unsigned r = 62;
  uint64_t u = 0;
  for (;; --r) {
    const uint64_t mask = (r == 62) ? kLowMask : ((uint64_t{1} << r) - 1);
    const uint64_t rem = low & mask;
    u = rem == 0 ? 0 : (r == 62 ? (uint64_t{1} << 62) - rem : (uint64_t{1} << r) - rem);
    if (u + (uint64_t{1} << r) <= width) break;
    if (r == 0) throw domain_error("flush failed");  // unreachable
  }
  uint64_t vlow = low + u;  // <= 2^62
  if (vlow >> 62) {
    carry_into(buf);
    vlow = 0;
  }
  BitString z = buf;
  for (unsigned j = 0; j < 62 - r; ++j) z.push_back((vlow >> (61 - j)) & 1);
  return z;
}

}  // namespace detail

// Deterministic arithmetic code of y under P. Requires P(y) > 0.
inline CodeOutput encode(const Measure& P, const BitString& y,
                         CoderEngine engine = CoderEngine::automatic) {
  CodeOutput out;
  out.measure_id = P.id();
  out.n = y.size();
  out.logp = measure_logprob(P, y);
  if (out.logp.off_support) throw off_support_error("encode: P(y) = 0");
  out.f_n = code_target_length(out.logp);
  if (engine == CoderEngine::automatic)
    engine = y.size() <= (uint64_t{1} << 16) ? CoderEngine::reference : CoderEngine::streaming;
  out.z = engine == CoderEngine::reference ? detail::encode_reference(P, y)
                                           : detail::encode_streaming(P, y);
  return out;
}

// Recovers the unique y of length n with encode(P, y).z == z. A single
// 64-bit machine serves both engines: it tracks V = floor(p * 2^scale) -
// low, which always fits in the width register.
inline BitString decode(const Measure& P, const BitString& z, uint64_t n) {
  uint64_t width = detail::kWidthOne;
  uint64_t v = 0;
  uint64_t next_bit = 1;  // 1-based index into z
  for (; next_bit <= 62; ++next_bit)
    v = (v << 1) | (next_bit <= z.size() && z.bit(next_bit) ? 1 : 0);
  if (v >= width) throw decode_error("code value outside the unit interval");
  BitString y;
  auto st = P.start();
  for (uint64_t i = 1; i <= n; ++i) {
    const Rat64 p0 = st->prob_zero();
    const uint64_t w0 = detail::split_width(width, p0);
    bool b;
    if (v < w0) {
      b = false;
      width = w0;
    } else {
      b = true;
      v -= w0;
      width -= w0;
    }
    if (v >= width) throw decode_error("interval underflow at position " + std::to_string(i));
    y.push_back(b);
    st->advance(b);
    while (width <= detail::kRenormBound) {
      v = (v << 1) | (next_bit <= z.size() && z.bit(next_bit) ? 1 : 0);
      ++next_bit;
      width <<= 1;
      if (v >= width) throw decode_error("interval underflow during renormalization");
    }
  }
  return y;
}

// Container format: measure id line, n line, f_n line, then the packed
// bitfile of z.
inline void write_codefile(const std::filesystem::path& path, const CodeOutput& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << c.measure_id << "\n" << c.n << "\n" << c.f_n << "\n";
  const uint64_t nz = c.z.size();
  unsigned char header[8];
  for (int i = 0; i < 8; ++i) header[i] = static_cast<unsigned char>((nz >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(header), 8);
  for (uint64_t j = 0; j < (nz + 7) / 8; ++j)
    out.put(static_cast<char>((c.z.word(j >> 3) >> (8 * (j & 7))) & 0xFF));
  if (!out) throw io_error("write failed: " + path.string());
}

struct CodeFile {
  std::string measure_id;
  uint64_t n = 0;
  uint64_t f_n = 0;
  BitString z;
};

inline CodeFile read_codefile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path.string());
  CodeFile f;
  std::string line;
  if (!std::getline(in, f.measure_id)) throw io_error("missing measure id line: " + path.string());
  if (!std::getline(in, line)) throw io_error("missing length line: " + path.string());
  try {
    f.n = std::stoull(line);
  } catch (...) {
    throw io_error("bad length line: " + path.string());
  }
  if (!std::getline(in, line)) throw io_error("missing f_n line: " + path.string());
  try {
    f.f_n = std::stoull(line);
  } catch (...) {
    throw io_error("bad f_n line: " + path.string());
  }
  f.z = read_bitstream(in, path.string());
  in.peek();
  if (!in.eof()) throw io_error("trailing bytes after payload: " + path.string());
  return f;
}

}  // namespace normsel
