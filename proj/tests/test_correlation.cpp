#include "embedlens/correlation.hpp"
#include "embedlens/fixtures.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace el = embedlens;
using el::AnyFunction;
using el::Complex;
using el::ProductFunction;
using el::TableFunction;

namespace {

std::vector<AnyFunction> characters(const el::JointDistribution& d, int n) {
  const auto w = *el::detect_embedding(d).witness;
  std::vector<AnyFunction> fs;
  for (int i = 0; i < d.arity(); ++i) fs.emplace_back(el::character_function(d, w, i, n));
  return fs;
}

ProductFunction parity_product(int n) {
  return {el::Alphabet::range(2), std::vector<std::vector<Complex>>(static_cast<std::size_t>(n), {1.0, -1.0})};
}

std::vector<AnyFunction> random_tables(std::mt19937_64& rng, const el::JointDistribution& d, int n) {
  std::vector<AnyFunction> fs;
  for (int i = 0; i < d.arity(); ++i) fs.emplace_back(el::testing::random_table(rng, d.alphabet(i).size(), n));
  return fs;
}

}  // namespace

TEST(ExactCorrelation, Constants) {
  const auto d = el::fixtures::seven_atom();
  std::vector<AnyFunction> fs(3, TableFunction::constant(el::Alphabet::range(2), 3, 1.0));
  EXPECT_NEAR(std::abs(el::exact_correlation(d, fs, 3).value - Complex(1.0)), 0.0, 1e-12);
  std::vector<AnyFunction> ps(3, ProductFunction::ones(el::Alphabet::range(2), 7));
  EXPECT_EQ(el::exact_correlation(d, ps, 7).value, Complex(1.0));
}

TEST(ExactCorrelation, ThreeLinCharactersAreOne) {
  const auto d = el::fixtures::three_lin();
  for (int n = 1; n <= 10; ++n) {
    const auto r = el::exact_correlation(d, characters(d, n), n);
    EXPECT_EQ(r.value, Complex(1.0)) << n;
    EXPECT_EQ(r.half_width, 0.0);
  }
}

TEST(ExactCorrelation, SevenAtomDecay) {
  const auto d = el::fixtures::seven_atom();
  for (int n = 1; n <= 10; ++n) {
    std::vector<AnyFunction> fs(3, parity_product(n));
    const auto v = el::exact_correlation(d, fs, n).value;
    const double expect = std::pow(1.0 / 7.0, n);
    EXPECT_NEAR(v.real(), expect, 1e-12 * expect);
    EXPECT_EQ(v.imag(), 0.0);
  }
}

TEST(ExactCorrelation, ArityMismatchAndGuard) {
  const auto d = el::fixtures::three_lin();
  std::vector<AnyFunction> two(2, parity_product(2));
  EXPECT_THROW(el::exact_correlation(d, two, 2), el::ValidationError);
  std::vector<AnyFunction> wrong_n{parity_product(2), parity_product(2), parity_product(3)};
  EXPECT_THROW(el::exact_correlation(d, wrong_n, 2), el::ValidationError);
  std::vector<AnyFunction> tables(3, TableFunction::constant(el::Alphabet::range(2), 14, 1.0));
  EXPECT_THROW(el::exact_correlation(d, tables, 14), el::SizeGuardError);
}

TEST(ExactCorrelation, FastPathMatchesSlowPath) {
  std::mt19937_64 rng(21);
  const auto d = el::testing::random_weighted(rng, {2, 3, 2});
  for (int n = 1; n <= 4; ++n) {
    std::vector<AnyFunction> products, tables;
    for (int i = 0; i < 3; ++i) {
      const auto P = el::testing::random_unimodular_product(rng, d.alphabet(i).size(), n);
      products.emplace_back(P);
      tables.emplace_back(P.to_table());
    }
    const auto fast = el::exact_correlation(d, products, n).value;
    const auto slow = el::exact_correlation(d, tables, n).value;
    EXPECT_LT(std::abs(fast - slow), 1e-10);
  }
}

TEST(ExactCorrelation, StaysInUnitDisc) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = el::testing::random_weighted(rng, {3, 3, 2});
    const auto fs = random_tables(rng, d, 2);
    EXPECT_LE(std::abs(el::exact_correlation(d, fs, 2).value), 1.0 + 1e-12);
  }
}

TEST(MonteCarlo, ConstantIntegrands) {
  const auto d = el::fixtures::three_lin();
  std::vector<AnyFunction> ones(3, ProductFunction::ones(el::Alphabet::range(2), 5));
  const auto r = el::mc_correlation(d, ones, 5, 1000, 3);
  EXPECT_EQ(r.value, Complex(1.0));
  EXPECT_EQ(r.mode, el::CorrelationMode::monte_carlo);
  EXPECT_DOUBLE_EQ(r.half_width, std::sqrt(std::log(200.0) / 2000.0));
  const auto c = el::mc_correlation(d, characters(d, 6), 6, 10000, 9);
  EXPECT_EQ(c.value, Complex(1.0));
}

TEST(MonteCarlo, ReproducibleAcrossThreadCounts) {
  std::mt19937_64 rng(23);
  const auto d = el::testing::random_weighted(rng, {2, 2, 3});
  const auto fs = random_tables(rng, d, 3);
  const auto a = el::mc_correlation(d, fs, 3, 20000, 77, {.threads = 1});
  const auto b = el::mc_correlation(d, fs, 3, 20000, 77, {.threads = 4});
  EXPECT_EQ(a.value, b.value);
  const auto c = el::mc_correlation(d, fs, 3, 20000, 78);
  EXPECT_NE(a.value, c.value);
}

TEST(MonteCarlo, AgreesWithExact) {
  std::mt19937_64 rng(24);
  int misses = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = el::testing::random_weighted(rng, {2, 3, 2});
    const auto fs = random_tables(rng, d, 3);
    const auto exact = el::exact_correlation(d, fs, 3).value;
    const auto mc = el::mc_correlation(d, fs, 3, 20000, 1000 + static_cast<std::uint64_t>(trial));
    // Real and imaginary parts each obey the bound at 99%.
    misses += std::abs(mc.value.real() - exact.real()) > 3 * mc.half_width;
    misses += std::abs(mc.value.imag() - exact.imag()) > 3 * mc.half_width;
  }
  EXPECT_EQ(misses, 0);
}

TEST(BestProduct, UnimodularProductReachesOne) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    const auto nu = el::testing::random_measure(rng, 3);
    const auto P = el::testing::random_unimodular_product(rng, 3, 4);
    const auto r = el::best_product_correlation(nu, P.to_table(), {.seed = 5});
    EXPECT_GE(r.value, 1.0 - 1e-6);
    EXPECT_LE(r.value, 1.0 + 1e-12);
  }
}

TEST(BestProduct, DictatorClosedForm) {
  std::mt19937_64 rng(26);
  const auto nu = el::testing::random_measure(rng, 3);
  std::vector<Complex> g(3);
  double expect = 0;
  for (std::size_t a = 0; a < 3; ++a) {
    g[a] = el::testing::random_disc_point(rng);
    expect += nu[a] * std::abs(g[a]);
  }
  const auto f = TableFunction::from(el::Alphabet::range(3), 3, [&](const el::Atom& x) { return g[static_cast<std::size_t>(x[0])]; });
  const auto r = el::best_product_correlation(nu, f, {.seed = 1});
  EXPECT_NEAR(r.value, expect, 1e-10);
  for (std::size_t a = 0; a < 3; ++a) EXPECT_LT(std::abs(r.P.factor(0)[a] * g[a] - std::abs(g[a]) * (r.P.factor(0)[0] * g[0] / std::abs(g[0]))), 1e-9);
}

TEST(BestProduct, ZeroFunction) {
  const auto f = TableFunction::constant(el::Alphabet::range(2), 3, 0.0);
  const auto r = el::best_product_correlation(el::testing::uniform_measure(2), f);
  EXPECT_EQ(r.value, 0.0);
  for (const auto& fac : r.P.factors()) {
    for (const auto& v : fac) EXPECT_EQ(v, Complex(1.0));
  }
}

TEST(BestProduct, HistoryIsMonotone) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    const int q = 2 + trial % 2;
    const auto nu = el::testing::random_measure(rng, q);
    const auto f = el::testing::random_table(rng, q, 1 + trial % 4);
    const auto r = el::best_product_correlation(nu, f, {.restarts = 3, .seed = static_cast<std::uint64_t>(trial)});
    for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1] - 1e-12);
    EXPECT_NEAR(r.value, std::abs(el::inner_product(f, r.P.to_table().conj(), nu)), 1e-10);
  }
}

TEST(RestrictedProduct, Examples) {
  std::mt19937_64 rng(28);
  const auto nu = el::testing::random_measure(rng, 3);
  const auto P = el::testing::random_unimodular_product(rng, 3, 4);
  EXPECT_EQ(el::restricted_product_correlation(P.to_table(), nu, nu, 0.3, 20, 1, 1 - 1e-9).probability, 1.0);
  const auto zero = TableFunction::constant(el::Alphabet::range(3), 4, 0.0);
  EXPECT_EQ(el::restricted_product_correlation(zero, nu, nu, 0.3, 20, 1, 1e-6).probability, 0.0);

  const auto d = el::fixtures::z3_sum();
  const auto chi = std::get<ProductFunction>(characters(d, 4)[0]).to_table();
  const auto mu1 = d.coordinate_measure(0);
  const auto r = el::restricted_product_correlation(chi, mu1, mu1, 0.5, 25, 11, 1 - 1e-9);
  EXPECT_EQ(r.hits, 25);
}

TEST(RestrictedProduct, Reproducible) {
  std::mt19937_64 rng(29);
  const auto nu = el::testing::random_measure(rng, 2);
  const auto f = el::testing::random_table(rng, 2, 4);
  const auto a = el::restricted_product_correlation(f, nu, nu, 0.5, 30, 3, 0.5, {.restarts = 2});
  const auto b = el::restricted_product_correlation(f, nu, nu, 0.5, 30, 3, 0.5, {.restarts = 2});
  EXPECT_EQ(a.hits, b.hits);
}

TEST(ExactPhase, CharactersAreExactlyOne) {
  for (const auto& d : {el::fixtures::three_lin(), el::fixtures::z3_sum()}) {
    const auto w = *el::detect_embedding(d).witness;
    for (int n = 1; n <= 10; ++n) {
      std::vector<el::PhaseProduct> fs;
      for (int i = 0; i < 3; ++i) fs.push_back(el::character_phases(d, w, i, n));
      const auto v = el::exact_phase_correlation(d, fs, n);
      EXPECT_TRUE(v.is_one()) << n;
      EXPECT_EQ(v.to_complex(), Complex(1.0));
    }
  }
}

TEST(ExactPhase, MatchesFloatingCharacters) {
  const auto d = el::fixtures::z3_sum();
  const auto w = *el::detect_embedding(d).witness;
  const auto phase = el::character_phases(d, w, 1, 3).to_product();
  const auto direct = el::character_function(d, w, 1, 3);
  for (int j = 0; j < 3; ++j) {
    for (std::size_t a = 0; a < 3; ++a) EXPECT_LT(std::abs(phase.factor(j)[a] - direct.factor(j)[a]), 1e-15);
  }
}

TEST(ExactPhase, SevenAtomParities) {
  const auto d = el::fixtures::seven_atom();
  for (int n = 1; n <= 6; ++n) {
    const el::PhaseProduct parity{el::Alphabet::range(2), 2, std::vector<std::vector<el::Integer>>(static_cast<std::size_t>(n), {0, 1})};
    const auto v = el::exact_phase_correlation(d, {parity, parity, parity}, n);
    el::Rational expect = 1;
    for (int j = 0; j < n; ++j) expect *= el::Rational(1, 7);
    // Coefficient at exponent 0 minus coefficient at exponent 1.
    const el::Rational c0 = v.coeffs.count(0) ? v.coeffs.at(0) : el::Rational(0);
    const el::Rational c1 = v.coeffs.count(1) ? v.coeffs.at(1) : el::Rational(0);
    EXPECT_EQ(c0 - c1, expect);
  }
}
