#include <catch2/catch_amalgamated.hpp>

#include "normsel/generators.hpp"
#include "normsel/measure.hpp"
#include "oracles.hpp"

using namespace normsel;

namespace {

const std::vector<std::string> kRegistry = {
    "uniform", "bernoulli:1/3", "markov:1/4,2/3:1/2", "pointmass:periodic:011",
    "pointmass:champernowne"};

}  // namespace

TEST_CASE("measure ids round-trip through the registry") {
  for (const auto& id : kRegistry) {
    CHECK(make_measure(id)->id() == id);
  }
  CHECK(make_measure("bernoulli:2/6")->id() == "bernoulli:1/3");
  CHECK_THROWS_AS(make_measure("gauss"), parse_error);
  CHECK_THROWS_AS(make_measure("bernoulli:x"), parse_error);
  CHECK_THROWS_AS(make_measure("markov:1/2:1/2"), parse_error);
  CHECK_THROWS_AS(make_measure("bernoulli:3/2"), domain_error);
}

TEST_CASE("the measure property P(x0) + P(x1) = P(x) holds exactly") {
  for (const auto& id : kRegistry) {
    const auto P = make_measure(id);
    CHECK(P->prob(BitString{}).to_mpq() == 1);
    for (unsigned n = 0; n <= 8; ++n) {
      for (const auto& xs : oracle::all_strings(n)) {
        BitString x0 = from_text(xs), x1 = from_text(xs);
        x0.push_back(false);
        x1.push_back(true);
        CHECK(P->prob(x0).to_mpq() + P->prob(x1).to_mpq() == P->prob(from_text(xs)).to_mpq());
      }
    }
  }
}

TEST_CASE("closed-form probabilities agree with the conditional fold") {
  for (const auto& id : kRegistry) {
    const auto P = make_measure(id);
    for (uint64_t seed : {1, 2}) {
      for (unsigned n : {1u, 5u, 16u, 33u}) {
        const BitString x = prng_prefix(seed, n);
        CHECK(P->prob(x).to_mpq() == P->Measure::prob(x).to_mpq());
      }
    }
  }
}

TEST_CASE("uniform log-probability is exactly the length") {
  const auto P = make_measure("uniform");
  const LogProb lp = measure_logprob(*P, prng_prefix(3, 137));
  CHECK(lp.exact);
  CHECK(lp.neg_log2_int == 137);
  CHECK(code_target_length(lp) == 138);
}

TEST_CASE("a point mass assigns probability one along its own sequence") {
  const auto P = make_measure("pointmass:champernowne");
  const LogProb on = measure_logprob(*P, champernowne_prefix(2000));
  CHECK(on.exact);
  CHECK(on.neg_log2_int == 0);
  CHECK(code_target_length(on) == 1);

  BitString off = champernowne_prefix(2000);
  off.set(1500, !off.bit(1500));
  CHECK(measure_logprob(*P, off).off_support);
}

TEST_CASE("bernoulli(1/3) brackets -log2 P to width 2^-32") {
  const auto P = make_measure("bernoulli:1/3");
  const LogProb lp = measure_logprob(*P, from_text("10"));
  CHECK_FALSE(lp.off_support);
  CHECK_FALSE(lp.exact);
  CHECK(lp.p == mpq_class(2, 9));
  CHECK(mpq_class(lp.hi - lp.lo) <= mpq_class(1, uint64_t{1} << 32));
  // -log2(2/9) = 2.16992500144...
  CHECK(lp.mid() == Catch::Approx(2.1699250014).epsilon(1e-9));
  CHECK(lp.floor_neg_log2 == 2);
  CHECK(code_target_length(lp) == 3);
}

TEST_CASE("off-support inputs are reported, not thrown, by measure_logprob") {
  const auto P = make_measure("bernoulli:0/1");
  CHECK(measure_logprob(*P, from_text("001")).off_support);
  CHECK_FALSE(measure_logprob(*P, from_text("000")).off_support);
}

TEST_CASE("the approximation oracle A(x,k) is within 1/k of P(x)") {
  for (const auto& id : kRegistry) {
    const auto P = make_measure(id);
    for (uint64_t seed : {1, 9}) {
      const BitString x = prng_prefix(seed, 11);
      const mpq_class p = P->prob(x).to_mpq();
      for (uint64_t k : {1ull, 2ull, 1000ull, 1ull << 40}) {
        const mpq_class a = P->approx(x, k);
        CHECK(abs(p - a) < mpq_class(1, k));
      }
    }
  }
}

TEST_CASE("markov probabilities multiply the right transitions") {
  const auto P = make_measure("markov:1/4,2/3:1/2");
  // x = 1 0 1 1: pi(1) * p(0|1) * p(1|0) * p(1|1) = 1/2 * 1/3 * 1/4 * 2/3.
  CHECK(P->prob(from_text("1011")).to_mpq() == mpq_class(1, 2) * mpq_class(1, 3) *
                                                   mpq_class(1, 4) * mpq_class(2, 3));
}

TEST_CASE("floor_neg_log2 pins the dyadic boundary cases") {
  CHECK(floor_neg_log2(mpz_class(1), mpz_class(1)) == std::pair<uint64_t, bool>{0, true});
  CHECK(floor_neg_log2(mpz_class(1), mpz_class(2)) == std::pair<uint64_t, bool>{1, true});
  CHECK(floor_neg_log2(mpz_class(3), mpz_class(8)) == std::pair<uint64_t, bool>{1, false});
  CHECK(floor_neg_log2(mpz_class(1), mpz_class(3)) == std::pair<uint64_t, bool>{1, false});
  CHECK_THROWS_AS(floor_neg_log2(mpz_class(3), mpz_class(2)), domain_error);
}
