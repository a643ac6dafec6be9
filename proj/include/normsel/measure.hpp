// Computable measures on binary sequences, given as exact rational
// conditional-probability programs. P(x) is always an exact rational;
// -log2 P(x) is exact when it is an integer (P a power of two) and
// otherwise bracketed to width <= 2^-32 via directed-rounding MPFR.
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>

#include "normsel/bitstring.hpp"
#include "normsel/errors.hpp"
#include "normsel/generators.hpp"

namespace normsel {

// Conditional probability as a machine-word rational. Coders multiply
// these into 64-bit interval widths, so den must stay below 2^32.
struct Rat64 {
  uint64_t num = 0;
  uint64_t den = 1;
};

// Streaming evaluation state: conditional probability of the next bit
// given the prefix consumed so far.
class MeasureState {
 public:
  virtual ~MeasureState() = default;
  virtual Rat64 prob_zero() const = 0;
  virtual void advance(bool bit) = 0;
};

// Unreduced exact rational in (0,1] plus a zero flag; avoids giant gcd
// reductions on the hot paths.
struct BigRatio {
  mpz_class num = 1;
  mpz_class den = 1;
  bool zero = false;

  mpq_class to_mpq() const {
    if (zero) return mpq_class(0);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
};

// floor(-log2(num/den)) for 0 < num/den <= 1, exact. Also reports
// whether the ratio is exactly 2^-m.
inline std::pair<uint64_t, bool> floor_neg_log2(const mpz_class& num, const mpz_class& den) {
  if (num <= 0 || den <= 0 || num > den) throw domain_error("floor_neg_log2 expects 0 < p <= 1");
  // p in (2^-(m+1), 2^-m]  <=>  num*2^m <= den < num*2^(m+1)
  long m = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  if (m < 0) m = 0;
  mpz_class shifted = num << m;
  while (shifted > den) {
    shifted >>= 1;
    --m;
  }
  while ((shifted << 1) <= den) {
    shifted <<= 1;
    ++m;
  }
  return {static_cast<uint64_t>(m), shifted == den};
}

struct LogProb {
  bool off_support = false;
  mpq_class p;             // exact P(x)
  bool exact = false;      // -log2 P is the exact integer below
  uint64_t neg_log2_int = 0;
  mpq_class lo, hi;        // bracket around -log2 P, width <= 2^-32
  uint64_t floor_neg_log2 = 0;

  double mid() const { return mpq_class((lo + hi) / 2).get_d(); }
};

namespace detail {

// Directed-rounding -log2(num/den) = log2(den) - log2(num).
inline void bracket_neg_log2(const mpz_class& num, const mpz_class& den, mpq_class& lo, mpq_class& hi) {
  constexpr mpfr_prec_t prec = 128;
  mpfr_t ln, ld, r;
  mpfr_init2(ln, prec);
  mpfr_init2(ld, prec);
  mpfr_init2(r, prec);
  mpq_class out[2];
  // Lower bound: log2(den) rounded down minus log2(num) rounded up.
  for (int side = 0; side < 2; ++side) {
    const mpfr_rnd_t down = side == 0 ? MPFR_RNDD : MPFR_RNDU;
    const mpfr_rnd_t up = side == 0 ? MPFR_RNDU : MPFR_RNDD;
    mpfr_set_z(ld, den.get_mpz_t(), down);
    mpfr_log2(ld, ld, down);
    mpfr_set_z(ln, num.get_mpz_t(), up);
    mpfr_log2(ln, ln, up);
    mpfr_sub(r, ld, ln, down);
    mpq_t q;
    mpq_init(q);
    mpfr_get_q(q, r);
    out[side] = mpq_class(q);
    mpq_clear(q);
  }
  lo = out[0];
  hi = out[1];
  mpfr_clear(ln);
  mpfr_clear(ld);
  mpfr_clear(r);
}

}  // namespace detail

inline LogProb logprob_of_ratio(const BigRatio& p) {
  LogProb out;
  if (p.zero) {
    out.off_support = true;
    return out;
  }
  out.p = p.to_mpq();
  auto [m, pow2] = floor_neg_log2(p.num, p.den);
  out.floor_neg_log2 = m;
  if (pow2) {
    out.exact = true;
    out.neg_log2_int = m;
    out.lo = mpq_class(static_cast<unsigned long>(m));
    out.hi = out.lo;
  } else {
    detail::bracket_neg_log2(p.num, p.den, out.lo, out.hi);
  }
  return out;
}

class Measure {
 public:
  virtual ~Measure() = default;
  virtual std::string id() const = 0;
  virtual std::unique_ptr<MeasureState> start() const = 0;

  // Exact P(x). The default folds the conditional program; concrete
  // measures override with closed forms.
  virtual BigRatio prob(const BitString& x) const {
    BigRatio r;
    auto st = start();
    for (uint64_t i = 1; i <= x.size(); ++i) {
      const Rat64 p0 = st->prob_zero();
      const bool b = x.bit(i);
      const uint64_t num = b ? p0.den - p0.num : p0.num;
      if (num == 0) {
        r.zero = true;
        return r;
      }
      r.num *= static_cast<unsigned long>(num);
      r.den *= static_cast<unsigned long>(p0.den);
      st->advance(b);
    }
    return r;
  }

  // The approximation-oracle interface: a rational within 1/k of P(x).
  mpq_class approx(const BitString& x, uint64_t k) const {
    if (k == 0) throw domain_error("approximation accuracy k must be >= 1");
    BigRatio p = prob(x);
    if (p.zero) return mpq_class(0);
    // Round P to a multiple of 1/(2k): error <= 1/(2k) < 1/k.
    mpz_class scaled = (p.num * 2 * static_cast<unsigned long>(k)) / p.den;
    mpq_class q(scaled, 2 * static_cast<unsigned long>(k));
    q.canonicalize();
    return q;
  }
};

inline LogProb measure_logprob(const Measure& P, const BitString& x) {
  return logprob_of_ratio(P.prob(x));
}

// f(n): the least integer strictly greater than -log2 P, so floor + 1
// even when -log2 P is itself an integer.
inline uint64_t code_target_length(const LogProb& lp) {
  if (lp.off_support) throw off_support_error("f(n) undefined off support");
  return lp.floor_neg_log2 + 1;
}

class UniformMeasure final : public Measure {
 public:
  std::string id() const override { return "uniform"; }

  class State final : public MeasureState {
   public:
    Rat64 prob_zero() const override { return {1, 2}; }
    void advance(bool) override {}
  };

  std::unique_ptr<MeasureState> start() const override { return std::make_unique<State>(); }

  BigRatio prob(const BitString& x) const override {
    BigRatio r;
    r.den = mpz_class(1) << x.size();
    return r;
  }
};

class BernoulliMeasure final : public Measure {
 public:
  // p = P(bit = 1).
  BernoulliMeasure(uint64_t p_num, uint64_t p_den) : num_(p_num), den_(p_den) {
    if (p_den == 0 || p_num > p_den) throw domain_error("bernoulli p must be in [0,1]");
    if (p_den > (uint64_t{1} << 32)) throw domain_error("bernoulli denominator too large");
    const uint64_t g = std::gcd(p_num == 0 ? p_den : p_num, p_den);
    num_ = p_num / g;
    den_ = p_den / g;
  }

  std::string id() const override {
    return "bernoulli:" + std::to_string(num_) + "/" + std::to_string(den_);
  }

  class State final : public MeasureState {
   public:
    State(uint64_t n, uint64_t d) : n_(n), d_(d) {}
    Rat64 prob_zero() const override { return {d_ - n_, d_}; }
    void advance(bool) override {}

   private:
    uint64_t n_, d_;
  };

  std::unique_ptr<MeasureState> start() const override {
    return std::make_unique<State>(num_, den_);
  }

  BigRatio prob(const BitString& x) const override {
    BigRatio r;
    const uint64_t ones = x.count_ones();
    const uint64_t zeros = x.size() - ones;
    if ((num_ == 0 && ones > 0) || (num_ == den_ && zeros > 0)) {
      r.zero = true;
      return r;
    }
    mpz_class pn(static_cast<unsigned long>(num_)), qn(static_cast<unsigned long>(den_ - num_));
    mpz_class a, b;
    mpz_pow_ui(a.get_mpz_t(), pn.get_mpz_t(), ones);
    mpz_pow_ui(b.get_mpz_t(), qn.get_mpz_t(), zeros);
    r.num = a * b;
    mpz_class d(static_cast<unsigned long>(den_));
    mpz_pow_ui(r.den.get_mpz_t(), d.get_mpz_t(), x.size());
    return r;
  }

  uint64_t p_num() const { return num_; }
  uint64_t p_den() const { return den_; }

 private:
  uint64_t num_, den_;
};

// Two-state chain on the previous bit: P(1 | prev=0), P(1 | prev=1),
// and P(first bit = 1).
class MarkovMeasure final : public Measure {
 public:
  MarkovMeasure(Rat64 one_after_zero, Rat64 one_after_one, Rat64 first_one)
      : p01_(reduce(one_after_zero)), p11_(reduce(one_after_one)), pi1_(reduce(first_one)) {
    check(p01_);
    check(p11_);
    check(pi1_);
  }

  std::string id() const override {
    return "markov:" + fmt(p01_) + "," + fmt(p11_) + ":" + fmt(pi1_);
  }

  class State final : public MeasureState {
   public:
    State(const MarkovMeasure& m) : m_(m) {}
    Rat64 prob_zero() const override {
      const Rat64 p1 = !started_ ? m_.pi1_ : (prev_ ? m_.p11_ : m_.p01_);
      return {p1.den - p1.num, p1.den};
    }
    void advance(bool bit) override {
      prev_ = bit;
      started_ = true;
    }

   private:
    const MarkovMeasure& m_;
    bool prev_ = false;
    bool started_ = false;
  };

  std::unique_ptr<MeasureState> start() const override { return std::make_unique<State>(*this); }

  BigRatio prob(const BitString& x) const override {
    BigRatio r;
    if (x.empty()) return r;
    // Count the four transition types, then exponentiate.
    uint64_t c[2][2] = {{0, 0}, {0, 0}};
    for (uint64_t i = 2; i <= x.size(); ++i) c[x.bit(i - 1)][x.bit(i)]++;
    const Rat64 first = x.bit(1) ? pi1_ : Rat64{pi1_.den - pi1_.num, pi1_.den};
    if (first.num == 0) {
      r.zero = true;
      return r;
    }
    r.num = static_cast<unsigned long>(first.num);
    r.den = static_cast<unsigned long>(first.den);
    const Rat64 t[2][2] = {{{p01_.den - p01_.num, p01_.den}, p01_},
                           {{p11_.den - p11_.num, p11_.den}, p11_}};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        if (c[a][b] == 0) continue;
        if (t[a][b].num == 0) {
          r.zero = true;
          return r;
        }
        mpz_class base(static_cast<unsigned long>(t[a][b].num)), pw;
        mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), c[a][b]);
        r.num *= pw;
        base = static_cast<unsigned long>(t[a][b].den);
        mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), c[a][b]);
        r.den *= pw;
      }
    return r;
  }

 private:
  static Rat64 reduce(Rat64 r) {
    if (r.den == 0 || r.num > r.den) throw domain_error("markov probability must be in [0,1]");
    const uint64_t g = std::gcd(r.num == 0 ? r.den : r.num, r.den);
    return {r.num / g, r.den / g};
  }
  static void check(const Rat64& r) {
    if (r.den > (uint64_t{1} << 32)) throw domain_error("markov denominator too large");
  }
  static std::string fmt(const Rat64& r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
  }

  Rat64 p01_, p11_, pi1_;
};

// Probability one on a single generated sequence: conditionals are 1 on
// the unique continuation and 0 off it.
class PointMassMeasure final : public Measure {
 public:
  explicit PointMassMeasure(GeneratorSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

  std::string id() const override { return "pointmass:" + spec_.str(); }
  const GeneratorSpec& spec() const { return spec_; }

  class State final : public MeasureState {
   public:
    explicit State(const GeneratorSpec& spec) : stream_(spec) { next_ = stream_.next(); }
    Rat64 prob_zero() const override {
      if (off_) return {0, 1};  // both branches dead once off support
      return next_ ? Rat64{0, 1} : Rat64{1, 1};
    }
    void advance(bool bit) override {
      if (off_ || bit != next_) {
        off_ = true;
        return;
      }
      next_ = stream_.next();
    }

   private:
    BitStream stream_;
    bool next_;
    bool off_ = false;
  };

  std::unique_ptr<MeasureState> start() const override { return std::make_unique<State>(spec_); }

  BigRatio prob(const BitString& x) const override {
    BigRatio r;
    BitStream s(spec_);
    for (uint64_t i = 1; i <= x.size(); ++i) {
      if (s.next() != x.bit(i)) {
        r.zero = true;
        return r;
      }
    }
    return r;  // P = 1 on the unique continuation
  }

 private:
  GeneratorSpec spec_;
};

namespace detail {

inline Rat64 parse_rat64(std::string_view tok) {
  auto parts = split(tok, '/');
  auto parse_u64 = [](std::string_view t) {
    if (t.empty()) throw parse_error("empty rational component");
    uint64_t v = 0;
    for (char ch : t) {
      if (ch < '0' || ch > '9') throw parse_error("bad rational: " + std::string(t));
      v = v * 10 + static_cast<uint64_t>(ch - '0');
    }
    return v;
  };
  if (parts.size() == 1) return {parse_u64(parts[0]), 1};
  if (parts.size() == 2) return {parse_u64(parts[0]), parse_u64(parts[1])};
  throw parse_error("bad rational: " + std::string(tok));
}

}  // namespace detail

// Registry ids: uniform | bernoulli:p/q | markov:a/b,c/d:e/f |
// pointmass:<generator-spec>.
inline std::unique_ptr<Measure> make_measure(std::string_view id) {
  if (id == "uniform") return std::make_unique<UniformMeasure>();
  if (id.rfind("bernoulli:", 0) == 0) {
    const Rat64 p = detail::parse_rat64(id.substr(10));
    return std::make_unique<BernoulliMeasure>(p.num, p.den);
  }
  if (id.rfind("markov:", 0) == 0) {
    auto rest = id.substr(7);
    auto outer = detail::split(rest, ':');
    if (outer.size() != 2) throw parse_error("markov id needs markov:a/b,c/d:e/f");
    auto trans = detail::split(outer[0], ',');
    if (trans.size() != 2) throw parse_error("markov id needs two transition probabilities");
    return std::make_unique<MarkovMeasure>(detail::parse_rat64(trans[0]),
                                           detail::parse_rat64(trans[1]),
                                           detail::parse_rat64(outer[1]));
  }
  if (id.rfind("pointmass:", 0) == 0) {
    return std::make_unique<PointMassMeasure>(GeneratorSpec::parse(id.substr(10)));
  }
  throw parse_error("unknown measure id: " + std::string(id));
}

}  // namespace normsel
