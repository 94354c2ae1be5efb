#include "embedlens/distribution.hpp"
#include "embedlens/fixtures.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <map>

namespace el = embedlens;
using el::Rational;

namespace {

el::RawDistribution raw_binary3(const std::vector<std::pair<std::vector<std::string>, Rational>>& atoms) {
  el::RawDistribution raw;
  raw.alphabets = {{"0", "1"}, {"0", "1"}, {"0", "1"}};
  for (const auto& [x, p] : atoms) raw.atoms.push_back({x, p});
  return raw;
}

}  // namespace

TEST(Validate, UniformFullSupport) {
  const auto r = el::validate(el::fixtures::full_support(3));
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(*r.min_atom_mass, Rational(1, 8));
}

TEST(Validate, MassSumShort) {
  const auto r = el::validate(raw_binary3({{{"0", "0", "0"}, Rational(1, 2)}, {{"1", "1", "0"}, Rational(3, 8)}}));
  EXPECT_FALSE(r.valid);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_NE(r.violations.front().find("mass sum"), std::string::npos);
  EXPECT_EQ(r.mass_sum, Rational(7, 8));
}

TEST(Validate, NegativeMass) {
  const auto r = el::validate(raw_binary3({{{"0", "0", "0"}, Rational(9, 8)}, {{"1", "1", "0"}, Rational(-1, 8)}}));
  EXPECT_FALSE(r.valid);
  bool found = false;
  for (const auto& v : r.violations) found |= v.find("negative mass") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Validate, UnknownSymbol) {
  const auto r = el::validate(raw_binary3({{{"0", "0", "2"}, Rational(1)}}));
  EXPECT_FALSE(r.valid);
}

TEST(Alphabet, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(el::Alphabet({"a", "a"}), el::ValidationError);
  EXPECT_THROW(el::Alphabet(std::vector<std::string>{}), el::ValidationError);
  EXPECT_EQ(el::Alphabet({"x"}).size(), 1);
}

TEST(Distribution, DropsZeroMassAndMergesDuplicates) {
  const auto d = el::JointDistribution(el::fixtures::binary(2),
                                       {{{0, 0}, Rational(1, 4)}, {{0, 0}, Rational(1, 4)}, {{1, 1}, Rational(1, 2)}, {{0, 1}, 0}});
  EXPECT_EQ(d.support_size(), 2u);
  EXPECT_EQ(d.mass({0, 0}), Rational(1, 2));
  EXPECT_EQ(d.mass({0, 1}), 0);
}

TEST(MinAtomMass, Examples) {
  EXPECT_EQ(el::min_atom_mass(el::fixtures::three_lin()), Rational(1, 4));
  const auto d = el::JointDistribution({el::Alphabet::range(3)},
                                       {{{0}, Rational(1, 2)}, {{1}, Rational(1, 3)}, {{2}, Rational(1, 6)}});
  EXPECT_EQ(el::min_atom_mass(d), Rational(1, 6));
  EXPECT_EQ(el::min_atom_mass(el::fixtures::single_atom()), Rational(1));
}

TEST(Marginal, ThreeLinPairIsUniform) {
  const auto m = el::marginal(el::fixtures::three_lin(), {1, 2});
  EXPECT_EQ(m, el::fixtures::full_support(2));
}

TEST(Marginal, AllCoordinatesIsIdentity) {
  const auto d = el::fixtures::seven_atom();
  EXPECT_EQ(el::marginal(d, {0, 1, 2}), d);
}

TEST(Marginal, ProductFactorizes) {
  const auto nu1 = el::JointDistribution({el::Alphabet::range(2)}, {{{0}, Rational(1, 3)}, {{1}, Rational(2, 3)}});
  const auto nu2 = el::JointDistribution({el::Alphabet::range(3)},
                                         {{{0}, Rational(1, 5)}, {{1}, Rational(3, 5)}, {{2}, Rational(1, 5)}});
  EXPECT_EQ(el::marginal(el::product(nu1, nu2), {1}), nu2);
  EXPECT_EQ(el::marginal(el::product(nu1, nu2), {0}), nu1);
}

TEST(Marginal, Errors) {
  const auto d = el::fixtures::three_lin();
  EXPECT_THROW(el::marginal(d, {}), el::ValidationError);
  EXPECT_THROW(el::marginal(d, {3}), el::ValidationError);
  EXPECT_THROW(el::marginal(d, {0, 0}), el::ValidationError);
}

TEST(Condition, ThreeLinOnLastZero) {
  const auto c = el::condition(el::fixtures::three_lin(), 2, 0);
  EXPECT_EQ(c, el::fixtures::disconnected_pair());
}

TEST(Condition, ProductIsIndependent) {
  const auto nu1 = el::JointDistribution({el::Alphabet::range(2)}, {{{0}, Rational(1, 3)}, {{1}, Rational(2, 3)}});
  const auto nu2 = el::JointDistribution({el::Alphabet::range(2)}, {{{0}, Rational(1, 4)}, {{1}, Rational(3, 4)}});
  const auto p = el::product(nu1, nu2);
  EXPECT_EQ(el::condition(p, 1, 0), nu1);
  EXPECT_EQ(el::condition(p, 1, 1), nu1);
}

TEST(Condition, ZeroMassValueThrows) {
  EXPECT_THROW(el::condition(el::fixtures::single_atom(), 0, 1), el::ValidationError);
}

TEST(DecomposeMixture, IdentityCase) {
  const auto d = el::fixtures::seven_atom();
  EXPECT_EQ(el::decompose_mixture(d, d, Rational(1, 2)), d);
}

TEST(DecomposeMixture, ReportsWitnessAtom) {
  const auto total = el::fixtures::full_support(2);
  const auto base = el::fixtures::disconnected_pair();  // ratio total/base = 1/2 on its support
  try {
    el::decompose_mixture(total, base, Rational(3, 4));
    FAIL() << "expected NegativeMixtureError";
  } catch (const el::NegativeMixtureError& e) {
    EXPECT_EQ(e.atom(), (el::Atom{0, 0}));
  }
  EXPECT_NO_THROW(el::decompose_mixture(total, base, Rational(1, 2)));
}

TEST(DistributionProperties, MarginalComposesAndConditionReconstructs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = el::testing::random_weighted(rng, {2, 3, 2});
    EXPECT_EQ(el::marginal(el::marginal(d, {0, 2}), {1}), el::marginal(d, {2}));
    EXPECT_EQ(el::marginal(el::marginal(d, {2, 1, 0}), {2, 0}), el::marginal(d, {0, 2}));

    std::map<el::Atom, Rational> rebuilt;
    const auto last = d.coordinate_masses(2);
    for (int v = 0; v < 2; ++v) {
      if (last[static_cast<std::size_t>(v)] == 0) continue;
      const auto cond = el::condition(d, 2, v);
      for (const auto& [y, p] : cond.atoms()) rebuilt[y] += last[static_cast<std::size_t>(v)] * p;
    }
    std::vector<el::JointDistribution::Entry> entries(rebuilt.begin(), rebuilt.end());
    EXPECT_EQ(el::JointDistribution(el::marginal(d, {0, 1}).alphabets(), entries), el::marginal(d, {0, 1}));

    const Rational c(1, 3);
    const auto nu = el::decompose_mixture(el::product(el::marginal(d, {0}), el::marginal(d, {1})),
                                          el::product(el::marginal(d, {0}), el::marginal(d, {1})), c);
    EXPECT_EQ(nu, el::product(el::marginal(d, {0}), el::marginal(d, {1})));
  }
}

TEST(DecomposeMixture, RoundTripsExactly) {
  const auto total = el::fixtures::full_support(2);
  const auto base = el::JointDistribution(el::fixtures::binary(2), {{{0, 0}, Rational(1, 2)}, {{1, 0}, Rational(1, 2)}});
  const Rational c(1, 3);
  const auto nu = el::decompose_mixture(total, base, c);
  for (const auto& [x, p] : total.atoms()) EXPECT_EQ(c * base.mass(x) + (1 - c) * nu.mass(x), p);
}

TEST(ProductPowerSampler, ReproducibleAndOnSupport) {
  const auto d = el::fixtures::three_lin();
  el::ProductPowerSampler a(d, 6, 42), b(d, 6, 42);
  for (int t = 0; t < 100; ++t) {
    const auto ra = a.draw();
    EXPECT_EQ(ra, b.draw());
    for (int j = 0; j < 6; ++j) EXPECT_EQ((ra[0][j] + ra[1][j] + ra[2][j]) % 2, 0);
  }
}

TEST(ProductPowerSampler, FrequenciesTrackMasses) {
  const auto d = el::JointDistribution({el::Alphabet::range(2)}, {{{0}, Rational(1, 4)}, {{1}, Rational(3, 4)}});
  el::ProductPowerSampler s(d, 1, 7);
  int ones = 0;
  const int draws = 40000;
  for (int t = 0; t < draws; ++t) ones += s.draw()[0][0];
  EXPECT_NEAR(static_cast<double>(ones) / draws, 0.75, 0.01);
}
