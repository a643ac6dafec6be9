// Deterministic sequence generators: Champernowne, Sturmian (exact
// irrational rotation), periodic words, and a fixed PRNG stand-in for
// random sequences. Every generator is a pure function of (spec, n).
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "normsel/bitstring.hpp"
#include "normsel/errors.hpp"
#include "normsel/quadratic.hpp"

namespace normsel {

enum class GenKind { champernowne, sturmian, periodic, prng };

struct GeneratorSpec {
  GenKind kind = GenKind::champernowne;
  Quadratic alpha;   // sturmian
  Quadratic beta;    // sturmian
  BitString pattern; // periodic
  uint64_t seed = 0; // prng

  bool operator==(const GeneratorSpec& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
      case GenKind::champernowne: return true;
      case GenKind::sturmian: return alpha == o.alpha && beta == o.beta;
      case GenKind::periodic: return pattern == o.pattern;
      case GenKind::prng: return seed == o.seed;
    }
    return false;
  }

  // Canonical text forms:
  //   champernowne
  //   sturmian:a,b,c,d:beta      (alpha = (a+b*sqrt(d))/c; beta rational
  //                               "p/q" or a second "a,b,c,d" quadruple)
  //   periodic:PATTERN
  //   prng:SEED
  std::string str() const;
  static GeneratorSpec parse(std::string_view s);

  static GeneratorSpec make_champernowne() { return GeneratorSpec{GenKind::champernowne, {}, {}, {}, 0}; }
  static GeneratorSpec make_sturmian(Quadratic a, Quadratic b) {
    GeneratorSpec g;
    g.kind = GenKind::sturmian;
    g.alpha = std::move(a);
    g.beta = std::move(b);
    g.validate();
    return g;
  }
  static GeneratorSpec make_periodic(BitString pat) {
    GeneratorSpec g;
    g.kind = GenKind::periodic;
    g.pattern = std::move(pat);
    g.validate();
    return g;
  }
  static GeneratorSpec make_prng(uint64_t seed) {
    GeneratorSpec g;
    g.kind = GenKind::prng;
    g.seed = seed;
    return g;
  }

  void validate() const {
    switch (kind) {
      case GenKind::sturmian:
        if (alpha.cmp(mpq_class(0)) <= 0 || alpha.cmp(mpq_class(1)) >= 0)
          throw domain_error("sturmian alpha must satisfy 0 < alpha < 1");
        if (beta.cmp(mpq_class(0)) < 0 || beta.cmp(mpq_class(1)) >= 0)
          throw domain_error("sturmian beta must satisfy 0 <= beta < 1");
        break;
      case GenKind::periodic:
        if (pattern.empty()) throw domain_error("periodic pattern must be nonempty");
        break;
      default:
        break;
    }
  }
};

namespace detail {

inline uint64_t splitmix64_next(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Single-consumer cursor over an infinite sequence. Equal specs yield
// equal prefixes; copying a stream copies the cursor.
class BitStream {
 public:
  explicit BitStream(GeneratorSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.kind == GenKind::sturmian) {
      // prev_floor_ = floor(1*alpha + beta) for the upcoming i = 1.
      prev_floor_ = spec_.alpha.floor_scale_add(1, spec_.beta);
    }
  }

  const GeneratorSpec& spec() const { return spec_; }
  // 1-based index of the next symbol to emit.
  uint64_t cursor() const { return pos_ + 1; }

  bool next() {
    const uint64_t i = ++pos_;  // 1-based position being emitted
    switch (spec_.kind) {
      case GenKind::champernowne: {
        if (cham_bits_left_ == 0) {
          ++cham_value_;
          cham_bits_left_ = 64 - std::countl_zero(cham_value_);
        }
        --cham_bits_left_;
        return (cham_value_ >> cham_bits_left_) & 1;
      }
      case GenKind::sturmian: {
        // bit_i = floor((i+1)a + b) - floor(i a + b); prev_floor_ holds
        // the i-th floor.
        mpz_class nf = spec_.alpha.floor_scale_add(mpz_class(static_cast<unsigned long>(i + 1)), spec_.beta);
        bool b = (nf - prev_floor_) != 0;
        prev_floor_ = std::move(nf);
        return b;
      }
      case GenKind::periodic: {
        const uint64_t m = (i - 1) % spec_.pattern.size();
        return spec_.pattern.bit(m + 1);
      }
      case GenKind::prng: {
        if (prng_bits_left_ == 0) {
          if (!prng_started_) {
            prng_state_ = spec_.seed;
            prng_started_ = true;
          }
          prng_word_ = detail::splitmix64_next(prng_state_);
          prng_bits_left_ = 64;
        }
        const bool b = prng_word_ & 1;
        prng_word_ >>= 1;
        --prng_bits_left_;
        return b;
      }
    }
    throw domain_error("unreachable generator kind");
  }

  BitString take(uint64_t k) {
    BitString x;
    for (uint64_t j = 0; j < k; ++j) x.push_back(next());
    return x;
  }

 private:
  GeneratorSpec spec_;
  uint64_t pos_ = 0;

  uint64_t cham_value_ = 0;
  unsigned cham_bits_left_ = 0;

  mpz_class prev_floor_;

  uint64_t prng_state_ = 0;
  uint64_t prng_word_ = 0;
  unsigned prng_bits_left_ = 0;
  bool prng_started_ = false;
};

inline BitString generate_prefix(const GeneratorSpec& spec, uint64_t n) {
  BitStream s(spec);
  return s.take(n);
}

inline BitString champernowne_prefix(uint64_t n) {
  return generate_prefix(GeneratorSpec::make_champernowne(), n);
}

inline BitString sturmian_prefix(const Quadratic& alpha, const Quadratic& beta, uint64_t n) {
  return generate_prefix(GeneratorSpec::make_sturmian(alpha, beta), n);
}

inline BitString periodic_prefix(const BitString& pattern, uint64_t n) {
  return generate_prefix(GeneratorSpec::make_periodic(pattern), n);
}

inline BitString prng_prefix(uint64_t seed, uint64_t n) {
  return generate_prefix(GeneratorSpec::make_prng(seed), n);
}

namespace detail {

inline mpz_class parse_mpz(std::string_view tok) {
  if (tok.empty()) throw parse_error("empty integer token in generator spec");
  try {
    return mpz_class(std::string(tok));
  } catch (const std::invalid_argument&) {
    throw parse_error("bad integer token in generator spec: " + std::string(tok));
  }
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t p = s.find(sep, start);
    if (p == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, p - start));
    start = p + 1;
  }
}

// "a,b,c,d" quadruple or rational "p/q" / "p".
inline Quadratic parse_quadratic_token(std::string_view tok) {
  if (tok.find(',') != std::string_view::npos) {
    auto parts = split(tok, ',');
    if (parts.size() != 4) throw parse_error("expected a,b,c,d quadruple: " + std::string(tok));
    mpz_class d = parse_mpz(parts[3]);
    if (d < 0 || !d.fits_ulong_p()) throw parse_error("radicand out of range: " + std::string(tok));
    return Quadratic(parse_mpz(parts[0]), parse_mpz(parts[1]), parse_mpz(parts[2]), d.get_ui());
  }
  auto parts = split(tok, '/');
  if (parts.size() == 1) return Quadratic::rational(parse_mpz(parts[0]), 1);
  if (parts.size() == 2) return Quadratic::rational(parse_mpz(parts[0]), parse_mpz(parts[1]));
  throw parse_error("bad rational token: " + std::string(tok));
}

}  // namespace detail

inline std::string GeneratorSpec::str() const {
  switch (kind) {
    case GenKind::champernowne:
      return "champernowne";
    case GenKind::sturmian: {
      std::string b;
      if (beta.is_rational()) {
        b = beta.a().get_str();
        if (beta.c() != 1) b += "/" + beta.c().get_str();
      } else {
        b = beta.str();
      }
      return "sturmian:" + alpha.str() + ":" + b;
    }
    case GenKind::periodic:
      return "periodic:" + to_text(pattern);
    case GenKind::prng:
      return "prng:" + std::to_string(seed);
  }
  return {};
}

inline GeneratorSpec GeneratorSpec::parse(std::string_view s) {
  if (s == "champernowne") return make_champernowne();
  if (s.rfind("sturmian:", 0) == 0) {
    auto rest = s.substr(9);
    auto parts = detail::split(rest, ':');
    if (parts.size() != 2) throw parse_error("sturmian spec needs sturmian:a,b,c,d:beta");
    return make_sturmian(detail::parse_quadratic_token(parts[0]),
                         detail::parse_quadratic_token(parts[1]));
  }
  if (s.rfind("periodic:", 0) == 0) {
    return make_periodic(from_text(s.substr(9)));
  }
  if (s.rfind("prng:", 0) == 0) {
    auto tok = s.substr(5);
    if (tok.empty()) throw parse_error("prng spec needs a seed");
    uint64_t seed = 0;
    for (char ch : tok) {
      if (ch < '0' || ch > '9') throw parse_error("prng seed must be a decimal integer");
      seed = seed * 10 + static_cast<uint64_t>(ch - '0');
    }
    return make_prng(seed);
  }
  throw parse_error("unknown generator spec: " + std::string(s));
}

}  // namespace normsel
