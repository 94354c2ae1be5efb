#include "embedlens/correlation.hpp"
#include "embedlens/fixtures.hpp"
#include "embedlens/function_space.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace el = embedlens;
using el::Complex;
using el::Rational;
using el::TableFunction;

namespace {

constexpr double kTol = 1e-10;

TableFunction parity(int n) {
  return TableFunction::from(el::Alphabet::range(2), n, [](const el::Atom& x) {
    int s = 0;
    for (int v : x) s += v;
    return Complex(s % 2 ? -1.0 : 1.0);
  });
}

double max_diff(const TableFunction& a, const TableFunction& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(TableFunction, LayoutIsLexicographic) {
  const auto f = TableFunction::from(el::Alphabet::range(3), 2, [](const el::Atom& x) { return Complex(10 * x[0] + x[1]); });
  EXPECT_EQ(f[5], Complex(12));
  EXPECT_EQ(f.decode(5), (el::Atom{1, 2}));
  EXPECT_EQ(f.encode({2, 1}), 7u);
  EXPECT_THROW(TableFunction(el::Alphabet::range(2), 2, std::vector<Complex>(3)), el::ValidationError);
}

TEST(InnerProduct, Examples) {
  const auto nu = el::testing::uniform_measure(2);
  const auto one = TableFunction::constant(el::Alphabet::range(2), 3, 1.0);
  EXPECT_NEAR(std::abs(el::inner_product(one, one, nu) - Complex(1.0)), 0.0, kTol);
  std::mt19937_64 rng(1);
  const auto f = el::testing::random_table(rng, 2, 3);
  const auto ff = el::inner_product(f, f, nu);
  EXPECT_GE(ff.real(), 0.0);
  EXPECT_NEAR(ff.imag(), 0.0, kTol);
  const TableFunction a(el::Alphabet::range(2), 1, {1.0, -1.0});
  const TableFunction b(el::Alphabet::range(2), 1, {1.0, 1.0});
  EXPECT_EQ(el::inner_product(a, b, nu), Complex(0.0));
  EXPECT_THROW(el::inner_product(a, one, nu), el::ValidationError);
}

TEST(NoiseApply, Examples) {
  std::mt19937_64 rng(2);
  const auto nu = el::testing::random_measure(rng, 3);
  const auto f = el::testing::random_table(rng, 3, 3);
  EXPECT_LT(max_diff(el::noise_apply(f, 1.0, nu), f), kTol);
  const auto t0 = el::noise_apply(f, 0.0, nu);
  const auto mean = el::expectation(f, nu);
  for (std::size_t i = 0; i < t0.size(); ++i) EXPECT_LT(std::abs(t0[i] - mean), kTol);

  const auto g = el::testing::random_table(rng, 3, 1);
  const auto tg = el::noise_apply(g, 0.3, nu);
  const auto eg = el::expectation(g, nu);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(tg[i] - (0.3 * g[i] + 0.7 * eg)), kTol);
  EXPECT_THROW(el::noise_apply(f, 1.5, nu), el::ValidationError);
}

TEST(NoiseApply, AveragingAndSemigroup) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto nu = el::testing::random_measure(rng, 3);
    const auto f = el::testing::random_table(rng, 3, 3);
    EXPECT_LE(el::noise_apply(f, 0.4, nu).sup_norm(), f.sup_norm() + kTol);
    const auto one = TableFunction::constant(el::Alphabet::range(3), 3, 1.0);
    EXPECT_LT(max_diff(el::noise_apply(one, 0.4, nu), one), kTol);
    EXPECT_LT(max_diff(el::noise_apply(el::noise_apply(f, 0.4, nu), 0.7, nu), el::noise_apply(f, 0.28, nu)), kTol);
  }
}

TEST(Stability, Examples) {
  const auto nu = el::testing::uniform_measure(2);
  EXPECT_NEAR(el::stability(TableFunction::constant(el::Alphabet::range(2), 3, Complex(0.6, 0.3)), 0.5, nu), 0.45, kTol);
  const TableFunction g(el::Alphabet::range(2), 1, {Complex(0.5, 0.5), Complex(-0.5, -0.5)});
  EXPECT_NEAR(el::stability(g, 0.3, nu), 0.3 * 0.5, kTol);
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(el::stability(parity(n), 0.7, nu), std::pow(0.7, n), kTol);
}

TEST(EfronStein, Examples) {
  const auto nu = el::testing::uniform_measure(2);
  const auto c = el::efron_stein(TableFunction::constant(el::Alphabet::range(2), 3, Complex(0.0, 0.5)), nu);
  EXPECT_NEAR(c.degree_weights[0], 0.25, kTol);
  for (int d = 1; d <= 3; ++d) EXPECT_NEAR(c.degree_weights[static_cast<std::size_t>(d)], 0.0, kTol);

  std::mt19937_64 rng(4);
  const auto mu = el::testing::random_measure(rng, 3);
  std::vector<std::vector<Complex>> g(3, std::vector<Complex>(3));
  for (auto& gj : g) {
    Complex mean = 0;
    for (std::size_t a = 0; a < 3; ++a) mean += mu[a] * (gj[a] = el::testing::random_disc_point(rng));
    for (auto& v : gj) v -= mean;
  }
  const auto sum = TableFunction::from(el::Alphabet::range(3), 3, [&](const el::Atom& x) {
    return g[0][static_cast<std::size_t>(x[0])] + g[1][static_cast<std::size_t>(x[1])] + g[2][static_cast<std::size_t>(x[2])];
  });
  const auto w = el::degree_weights(sum, mu);
  EXPECT_NEAR(w[1], el::norm_squared(sum, mu), kTol);
  EXPECT_NEAR(w[0] + w[2] + w[3], 0.0, kTol);

  const auto p = el::degree_weights(parity(4), nu);
  EXPECT_NEAR(p[4], 1.0, kTol);
  EXPECT_NEAR(p[0] + p[1] + p[2] + p[3], 0.0, kTol);
}

TEST(EfronStein, ComponentInvariants) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto nu = el::testing::random_measure(rng, 3);
    const auto f = el::testing::random_table(rng, 3, 3);
    const auto es = el::efron_stein(f, nu);
    ASSERT_EQ(es.components.size(), 8u);
    std::vector<Complex> total(f.size(), 0.0);
    for (const auto& [mask, comp] : es.components) {
      for (std::size_t i = 0; i < f.size(); ++i) total[i] += comp[i];
      for (const auto& [mask2, comp2] : es.components) {
        if (mask2 > mask) {
          EXPECT_LT(std::abs(el::inner_product(comp, comp2, nu)), kTol);
        }
      }
    }
    EXPECT_LT(max_diff(TableFunction(f.alphabet(), f.n(), total), f), kTol);
    double w = 0;
    for (double x : es.degree_weights) w += x;
    EXPECT_NEAR(w, el::norm_squared(f, nu), kTol);
  }
}

TEST(EfronStein, SizeGuard) {
  const auto f = TableFunction::constant(el::Alphabet::range(2), 11, 1.0);
  EXPECT_THROW(el::efron_stein(f, el::testing::uniform_measure(2)), el::SizeGuardError);
  EXPECT_NO_THROW(el::degree_weights(f, el::testing::uniform_measure(2)));
}

TEST(Stability, Diagonalization) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const int q = 2 + trial % 2;
    const int n = 1 + trial % 4;
    const auto nu = el::testing::random_measure(rng, q);
    const auto f = el::testing::random_table(rng, q, n);
    const auto w = el::degree_weights(f, nu);
    for (double rho : {0.0, 0.3, 1.0}) {
      double expect = 0;
      for (std::size_t d = 0; d < w.size(); ++d) expect += std::pow(rho, static_cast<double>(d)) * w[d];
      EXPECT_NEAR(el::stability(f, rho, nu), expect, kTol);
    }
  }
}

TEST(LowDegreeProject, Examples) {
  std::mt19937_64 rng(7);
  const auto nu = el::testing::random_measure(rng, 3);
  const auto f = el::testing::random_table(rng, 3, 3);
  EXPECT_LT(max_diff(el::low_degree_project(f, 3, nu).L, f), kTol);
  const auto l0 = el::low_degree_project(f, 0, nu);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LT(std::abs(l0.L[i] - el::expectation(f, nu)), kTol);
  const auto l1 = el::low_degree_project(f, 1, nu);
  EXPECT_LE(l1.norm, std::sqrt(el::norm_squared(f, nu)) + kTol);
  EXPECT_LT(el::low_degree_project(parity(3), 2, el::testing::uniform_measure(2)).L.sup_norm(), kTol);
}

TEST(Restrict, Examples) {
  std::mt19937_64 rng(8);
  const auto f = el::testing::random_table(rng, 3, 3);
  EXPECT_LT(max_diff(el::restrict(f, {}, {}), f), kTol);
  const auto full = el::restrict(f, {2, 0, 1}, {1, 2, 0});
  EXPECT_EQ(full.n(), 0);
  EXPECT_EQ(full[0], f.at({2, 0, 1}));
  EXPECT_THROW(el::restrict(f, {0}, {3}), el::ValidationError);
  EXPECT_THROW(el::restrict(f, {0, 0}, {1, 1}), el::ValidationError);

  const auto P = el::testing::random_unimodular_product(rng, 3, 3);
  const auto r = el::restrict(P.to_table(), {1}, {2});
  const Complex scale = P.factor(1)[2];
  const el::ProductFunction rest(P.alphabet(), {P.factor(0), P.factor(2)});
  const auto expect = rest.to_table();
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_LT(std::abs(r[i] - scale * expect[i]), kTol);
}

TEST(Restrict, CommutesWithNoiseOnFreeCoordinates) {
  std::mt19937_64 rng(9);
  const auto nu = el::testing::random_measure(rng, 2);
  const auto f = el::testing::random_table(rng, 2, 4);
  const auto lhs = el::restrict(el::noise_apply_on(f, 0.35, nu, {0, 3}), {1, 2}, {1, 0});
  const auto rhs = el::noise_apply(el::restrict(f, {1, 2}, {1, 0}), 0.35, nu);
  EXPECT_LT(max_diff(lhs, rhs), kTol);
}

TEST(CharacterFunction, ThreeLinParity) {
  const auto d = el::fixtures::three_lin();
  const auto w = *el::detect_embedding(d).witness;
  const auto f = el::character_function(d, w, 0, 4);
  EXPECT_LT(max_diff(f.to_table(), parity(4)), 0.0 + 1e-300);
  EXPECT_TRUE(f.is_unimodular());
}

TEST(CharacterFunction, ConstantAndZ3) {
  const auto d = el::fixtures::z3_sum();
  const el::EmbeddingWitness w{3, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}};
  const auto f = el::character_function(d, w, 1, 2);
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  EXPECT_LT(std::abs(f.factor(0)[0] - 1.0), kTol);
  EXPECT_LT(std::abs(f.factor(0)[1] - omega), kTol);
  EXPECT_LT(std::abs(f.factor(0)[2] - omega * omega), kTol);

  // x1 = x2 with x3 free: sigma_3 is forced constant.
  const auto tied = el::JointDistribution::uniform(el::fixtures::binary(3), {{0, 0, 0}, {0, 0, 1}, {1, 1, 0}, {1, 1, 1}});
  const el::EmbeddingWitness partial{2, {{0, 1}, {0, 1}, {0, 0}}};
  const auto one = el::character_function(tied, partial, 2, 3);
  for (const auto& fac : one.factors()) {
    for (const auto& v : fac) EXPECT_EQ(v, Complex(1.0));
  }
  EXPECT_THROW(el::character_function(el::fixtures::three_lin(), {2, {{0, 1}, {0, 0}, {0, 0}}}, 0, 3), el::ValidationError);
}

TEST(CharacterFunction, IntegerWitnessUsesRationalPhase) {
  const auto d = el::fixtures::disconnected_pair();
  const auto w = *el::detect_embedding(d).witness;
  ASSERT_EQ(w.modulus, 0);
  for (int n = 1; n <= 5; ++n) {
    const std::vector<el::AnyFunction> fs{el::character_function(d, w, 0, n), el::character_function(d, w, 1, n)};
    EXPECT_LT(std::abs(el::exact_correlation(d, fs, n).value - Complex(1.0)), 1e-12);
  }
  const auto custom = el::character_function(d, w, 0, 1, Rational(1, 4));
  EXPECT_TRUE(custom.is_unimodular());
}

TEST(GlobalInverseCheck, Examples) {
  std::mt19937_64 rng(10);
  const auto nu = el::testing::random_measure(rng, 3);
  const auto P = el::testing::random_unimodular_product(rng, 3, 3);
  const auto one = TableFunction::constant(P.alphabet(), 3, 1.0);
  const auto r = el::global_inverse_check(P.to_table(), one, P, nu, 0);
  EXPECT_NEAR(r.value, 1.0, kTol);
  EXPECT_TRUE(r.degree_ok && r.norm_ok && r.unimodular_ok);

  // f orthogonal to degree <= 1: remove the low-degree part of a random table.
  const auto f = el::testing::random_table(rng, 3, 3);
  const auto low = el::low_degree_project(f, 1, nu).L;
  std::vector<Complex> high(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) high[i] = f[i] - low[i];
  const TableFunction h(f.alphabet(), 3, high);
  auto L = el::low_degree_project(el::testing::random_table(rng, 3, 3), 1, nu).L;
  const auto ones = el::ProductFunction::ones(P.alphabet(), 3);
  const auto z = el::global_inverse_check(h, L, ones, nu, 1);
  EXPECT_NEAR(z.value, 0.0, kTol);
  EXPECT_TRUE(z.degree_ok);

  const auto u = el::testing::uniform_measure(2);
  const auto pr = el::global_inverse_check(parity(3), parity(3), el::ProductFunction::ones(el::Alphabet::range(2), 3), u, 3);
  EXPECT_NEAR(pr.value, 1.0, kTol);
  EXPECT_EQ(pr.L_degree, 3);
  EXPECT_FALSE(el::global_inverse_check(parity(3), parity(3), el::ProductFunction::ones(el::Alphabet::range(2), 3), u, 2).degree_ok);
}
