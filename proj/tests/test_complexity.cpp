#include <catch2/catch_amalgamated.hpp>

#include "normsel/complexity.hpp"
#include "normsel/generators.hpp"
#include "oracles.hpp"

using namespace normsel;

TEST_CASE("lz78 parses the worked example into seven phrases") {
  // 1|0|11|01|010|00|10
  const auto tokens = lz78_parse(from_text("1011010100010"));
  CHECK(tokens.size() == 7);
  CHECK(lz78_estimate(from_text("1011010100010")).detail == "phrases=7");
}

TEST_CASE("lz78 phrase counts match the string-dictionary oracle") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    for (uint64_t n : {1, 2, 13, 100, 1000}) {
      const BitString x = prng_prefix(seed, n);
      CHECK(lz78_parse(x).size() == oracle::lz78_phrases(to_text(x)));
    }
  }
}

TEST_CASE("lz78 parses reconstruct their input exactly") {
  for (uint64_t seed : {1, 7}) {
    for (uint64_t n : {1, 64, 4097}) {
      const BitString x = prng_prefix(seed, n);
      CHECK(lz78_reconstruct(lz78_parse(x)) == x);
    }
  }
  const BitString z = BitString::zeros(5000);
  CHECK(lz78_reconstruct(lz78_parse(z)) == z);
  CHECK_THROWS_AS(lz78_parse(BitString{}), domain_error);
}

TEST_CASE("lz78 rate of the constant word at n = 10^6") {
  // c(c+1)/2 >= n gives c = 1414 phrases, so the bits formula
  // c*(log2 c + 1)/n comes out at 0.01621.
  const ComplexityEstimate e = lz78_estimate(BitString::zeros(1000000));
  CHECK(e.detail == "phrases=1414");
  CHECK(e.rate == Catch::Approx(0.016212).margin(2e-4));
}

TEST_CASE("lz78 rate of a random word at n = 10^6 sits in the slow band") {
  const double r = lz78_estimate(prng_prefix(1, 1000000)).rate;
  CHECK(r >= 0.9);
  CHECK(r <= 1.3);
}

TEST_CASE("kt probability matches the sequential oracle exactly") {
  for (unsigned order : {0u, 1u, 2u}) {
    for (unsigned n = 1; n <= 10; ++n) {
      for (uint64_t seed : {1, 2, 3, 4}) {
        const BitString x = prng_prefix(seed + 10 * n, n);
        CHECK(kt_probability(x, order).to_mpq() == oracle::kt_probability(to_text(x), order));
      }
    }
  }
  // And exhaustively at n = 8, order 2.
  for (const auto& xs : oracle::all_strings(8)) {
    CHECK(kt_probability(from_text(xs), 2).to_mpq() == oracle::kt_probability(xs, 2));
  }
}

TEST_CASE("kt code length of a constant word stays within log2 n + 2") {
  for (uint64_t n : {1, 2, 10, 100, 10000}) {
    const uint64_t bits = kt_bits_exact(BitString::ones(n), 0);
    CHECK(static_cast<double>(bits) <= std::log2(static_cast<double>(n)) + 2.0);
  }
}

TEST_CASE("kt rate of a random word at n = 10^6 is essentially one") {
  const double r = kt_compress_rate(prng_prefix(1, 1000000), 0).rate;
  CHECK(r >= 0.99);
  CHECK(r <= 1.01);
}

TEST_CASE("kt order-8 rate of the golden sturmian settles at the order-8 entropy") {
  // The order-8 conditional entropy of the Fibonacci word is 0.1400
  // bits/symbol (frozen from the oracle run); no fixed order reaches the
  // true complexity rate 0.
  const BitString y = sturmian_prefix(Quadratic(-1, 1, 2, 5), Quadratic(), 1000000);
  const double r = kt_compress_rate(y, 8).rate;
  CHECK(r == Catch::Approx(0.1399).margin(0.014));
}

TEST_CASE("kt bits match the arithmetic coder run with the kt measure") {
  for (unsigned order : {0u, 1u, 2u}) {
    for (unsigned n = 1; n <= 10; ++n) {
      for (const auto& xs : oracle::all_strings(n)) {
        const BitString x = from_text(xs);
        const uint64_t bits = kt_bits_exact(x, order);
        const KTMeasure m(order);
        const uint64_t emitted = encode(m, x).z.size();
        CHECK(emitted <= bits + 2);
        CHECK(emitted + 1 >= bits);
      }
    }
  }
}

TEST_CASE("catalog: an exact constant hit costs only the entry id") {
  const BitString x = prng_prefix(9, 4096);
  const BitString target = select(x, SelectionMask(x));  // all ones
  const Catalog cat = make_default_catalog({});
  const ComplexityEstimate e = conditional_estimate(target, x, cat, 0);
  CHECK(e.detail == "entry=constant-1");
  CHECK(e.bits_total == 2.0);  // ceil(log2 4) entries
  CHECK(e.rate < 0.01);
}

TEST_CASE("catalog: no hit falls back to the unconditional kt bits") {
  const BitString target = prng_prefix(4, 2048);
  const BitString side = sturmian_prefix(Quadratic(-1, 1, 2, 5), Quadratic(), 2048);
  const Catalog cat = make_default_catalog({});
  const ComplexityEstimate e = conditional_estimate(target, side, cat, 0);
  CHECK(e.detail == "entry=none");
  CHECK(e.bits_total == Catch::Approx(2.0 + static_cast<double>(kt_bits_exact(target, 0))));
  CHECK(e.rate == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("catalog: the code-of-side entry matches the emitted code word") {
  // Under the uniform measure the code of y is y itself, so the identity
  // entry fires; a skewed measure produces a genuinely different word.
  const auto U = make_measure("uniform");
  const BitString y = prng_prefix(6, 4096);
  {
    const auto z = extended_code(*U, y, 4096);
    REQUIRE(z.has_value());
    CHECK(*z == y);  // near-identity coding, truncated back to n
    std::vector<const Measure*> ms{U.get()};
    const ComplexityEstimate e = conditional_estimate(*z, y, make_default_catalog(ms), 0);
    CHECK(e.detail == "entry=identity");
    CHECK(e.rate < 0.01);
  }
  {
    const auto B = make_measure("bernoulli:1/3");
    const auto z = extended_code(*B, y, 4096);
    REQUIRE(z.has_value());
    CHECK(*z != y);
    std::vector<const Measure*> ms{B.get()};
    const ComplexityEstimate e = conditional_estimate(*z, y, make_default_catalog(ms), 0);
    CHECK(e.detail == "entry=code[bernoulli:1/3]");
    CHECK(e.rate < 0.01);
  }
}

TEST_CASE("conditioning never costs more than the entry id") {
  const Catalog cat = make_default_catalog({});
  for (uint64_t seed : {1, 2, 3}) {
    const BitString t = prng_prefix(seed, 512);
    const BitString s = prng_prefix(seed + 100, 512);
    const double cond = conditional_estimate(t, s, cat, 0).bits_total;
    const double plain = static_cast<double>(kt_bits_exact(t, 0));
    CHECK(cond <= plain + static_cast<double>(cat.id_cost_bits()));
  }
}

TEST_CASE("weak randomness gap: prng under the uniform measure is tiny") {
  const GapResult g = weak_randomness_gap(prng_prefix(1, 1 << 16), *make_measure("uniform"), 0);
  CHECK_FALSE(g.off_support);
  CHECK(g.log_rate == Catch::Approx(1.0));
  CHECK(g.gap <= 0.05);
}

TEST_CASE("weak randomness gap: the constant word under bernoulli(1/2) is near one") {
  const GapResult g = weak_randomness_gap(BitString::ones(1 << 14), *make_measure("uniform"), 0);
  CHECK(g.log_rate == Catch::Approx(1.0));
  CHECK(g.kt_rate < 0.01);
  CHECK(g.gap > 0.9);
}

TEST_CASE("weak randomness gap: off-support is a distinguished outcome") {
  const GapResult g = weak_randomness_gap(from_text("111"), *make_measure("pointmass:champernowne"), 0);
  CHECK(g.off_support);
}
