// Exact values of the form (a + b*sqrt(d))/c with integer a, b, c and
// square-free d. Floors and comparisons are done in integer arithmetic
// only; no floating point touches these numbers.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "normsel/errors.hpp"

namespace normsel {

class Quadratic {
 public:
  // Value (a + b*sqrt(d))/c. Canonical form: c > 0, gcd(a,b,c) = 1,
  // d square-free; when b = 0 the value is rational and d is fixed to 2.
  Quadratic() : a_(0), b_(0), c_(1), d_(2) {}

  Quadratic(mpz_class a, mpz_class b, mpz_class c, unsigned long d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d) {
    if (c_ == 0) throw domain_error("quadratic irrational with zero denominator");
    if (b_ != 0 && d_ < 2) throw domain_error("radicand must be >= 2");
    canonicalize();
  }

  static Quadratic rational(mpz_class num, mpz_class den) {
    return Quadratic(std::move(num), 0, std::move(den), 2);
  }

  static Quadratic from_mpq(const mpq_class& q) {
    return rational(q.get_num(), q.get_den());
  }

  bool is_rational() const { return b_ == 0; }
  const mpz_class& a() const { return a_; }
  const mpz_class& b() const { return b_; }
  const mpz_class& c() const { return c_; }
  unsigned long d() const { return d_; }

  // floor(b*sqrt(d)) as an exact integer.
  static mpz_class floor_sqrt_term(const mpz_class& b, unsigned long d) {
    if (b == 0) return 0;
    mpz_class s = b * b * d;
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
    if (b > 0) return r;
    // b < 0: b*sqrt(d) = -sqrt(s); s is not a perfect square for
    // square-free d >= 2, so the floor is -(r+1).
    if (r * r == s) return -r;
    return -(r + 1);
  }

  // Exact floor of the value.
  mpz_class floor() const {
    mpz_class m = a_ + floor_sqrt_term(b_, d_);
    if (b_ == 0) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), m.get_mpz_t(), c_.get_mpz_t());
      return q;
    }
    // The value lies in the open interval (m, m+1), which contains no
    // integer, so flooring the numerator first is exact.
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), m.get_mpz_t(), c_.get_mpz_t());
    return q;
  }

  // Sign of (this - p/q), exact.
  int cmp(const mpq_class& rhs) const {
    // (a + b*sqrt(d))/c vs p/q  <=>  b*q*sqrt(d) vs p*c - a*q   (c, q > 0)
    mpz_class u = rhs.get_num() * c_ - a_ * rhs.get_den();
    mpz_class v = b_ * rhs.get_den();
    if (v == 0) return u == 0 ? 0 : (u < 0 ? 1 : -1);
    if (v > 0 && u <= 0) return 1;
    if (v < 0 && u >= 0) return -1;
    // Same sign: compare v^2*d vs u^2, flipping for the negative branch.
    mpz_class lhs2 = v * v * d_;
    mpz_class rhs2 = u * u;
    int s = (lhs2 == rhs2) ? 0 : (lhs2 < rhs2 ? -1 : 1);
    return v > 0 ? s : -s;
  }

  bool operator==(const Quadratic& o) const {
    return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && (b_ == 0 || d_ == o.d_);
  }

  // this*k + other, exact; requires matching radicands unless one side
  // is rational.
  Quadratic scale_add(const mpz_class& k, const Quadratic& other) const {
    unsigned long d = d_;
    if (b_ != 0 && other.b_ != 0 && d_ != other.d_)
      throw domain_error("incompatible radicands in quadratic arithmetic");
    if (b_ == 0) d = other.d_;
    mpz_class A = k * a_ * other.c_ + other.a_ * c_;
    mpz_class B = k * b_ * other.c_ + other.b_ * c_;
    mpz_class C = c_ * other.c_;
    return Quadratic(std::move(A), std::move(B), std::move(C), d);
  }

  // floor(k*this + beta), exact.
  mpz_class floor_scale_add(const mpz_class& k, const Quadratic& beta) const {
    return scale_add(k, beta).floor();
  }

  // Canonical "a,b,c,d" (rationals keep the placeholder d = 2).
  std::string str() const {
    return a_.get_str() + "," + b_.get_str() + "," + c_.get_str() + "," + std::to_string(d_);
  }

 private:
  void canonicalize() {
    if (b_ == 0) {
      d_ = 2;
    } else {
      // Pull square factors of d into b.
      unsigned long d = d_;
      for (unsigned long p = 2; p * p <= d; ++p) {
        while (d % (p * p) == 0) {
          d /= p * p;
          b_ *= p;
        }
      }
      d_ = d;
      if (d_ == 1) {  // sqrt(1): the value was rational after all
        a_ += b_;
        b_ = 0;
        d_ = 2;
      }
    }
    if (c_ < 0) {
      a_ = -a_;
      b_ = -b_;
      c_ = -c_;
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c_.get_mpz_t());
    if (g > 1) {
      a_ /= g;
      b_ /= g;
      c_ /= g;
    }
  }

  mpz_class a_, b_, c_;
  unsigned long d_;
};

}  // namespace normsel
