#include "embedlens/dictator.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace el = embedlens;
using el::Rational;
using el::SymbolFunction;

namespace {

const el::TestInstance& a5() {
  static const auto inst = el::fixtures::a5_instance();
  return inst;
}

// Two constraints on a ternary alphabet: "not all equal" style predicate.
el::TestInstance mixed_instance() {
  const auto sigma = el::Alphabet::range(3);
  const auto P = el::Predicate::from(sigma, 3, [](const el::Atom& x) { return !(x[0] == x[1] && x[1] == x[2]); });
  const auto mu1 = el::JointDistribution::uniform({sigma, sigma, sigma}, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  const auto mu2 = el::JointDistribution({sigma, sigma, sigma}, {{{0, 0, 1}, Rational(1, 3)}, {{1, 2, 2}, Rational(2, 3)}});
  return {P, {{Rational(1, 4), mu1}, {Rational(3, 4), mu2}}};
}

SymbolFunction random_function(std::mt19937_64& rng, const el::Alphabet& sigma, int n) {
  std::uniform_int_distribution<int> v(0, sigma.size() - 1);
  return SymbolFunction::from(sigma, n, [&](const el::Atom&) { return v(rng); });
}

}  // namespace

TEST(ValidateInstance, ThreeLinAdmitsEmbedding) {
  const auto r = el::validate_instance(el::fixtures::three_lin_instance());
  EXPECT_TRUE(r.valid);
  ASSERT_EQ(r.constraints.size(), 1u);
  EXPECT_TRUE(r.constraints[0].support_ok);
  EXPECT_TRUE(r.constraints[0].admits_embedding);
  EXPECT_FALSE(r.no_embedding);
}

TEST(ValidateInstance, A5PassesEverything) {
  const auto r = el::validate_instance(a5());
  EXPECT_TRUE(r.valid);
  EXPECT_TRUE(r.no_embedding);
  EXPECT_TRUE(r.constraints[0].pairwise_connected);
}

TEST(ValidateInstance, FalsifyingAtomAndWeights) {
  auto inst = el::fixtures::three_lin_instance();
  inst.constraints[0].mu = el::fixtures::full_support(3);
  auto r = el::validate_instance(inst);
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.constraints[0].support_ok);
  EXPECT_EQ(r.violations.size(), 4u);

  inst = el::fixtures::three_lin_instance();
  inst.constraints[0].weight = Rational(1, 2);
  r = el::validate_instance(inst);
  EXPECT_FALSE(r.valid);
  EXPECT_THROW(el::run_test_exact(inst, SymbolFunction::dictator(el::Alphabet::range(2), 2, 0)), el::ValidationError);
}

TEST(SymbolFunction, RelevantCoordinates) {
  const auto sigma = el::Alphabet::range(3);
  EXPECT_EQ(SymbolFunction::dictator(sigma, 4, 2).relevant_coordinates(), std::vector<int>{2});
  EXPECT_TRUE(SymbolFunction::constant(sigma, 3, 1).relevant_coordinates().empty());
  const auto f = SymbolFunction::from(sigma, 3, [](const el::Atom& x) { return (x[0] + x[2]) % 3; });
  EXPECT_EQ(f.relevant_coordinates(), (std::vector<int>{0, 2}));
  const auto g = f.restrict_to({0, 2});
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g[i], (static_cast<int>(i) / 3 + static_cast<int>(i) % 3) % 3);
}

TEST(RunTestExact, DictatorsAcceptWithProbabilityOne) {
  for (const auto& inst : {el::fixtures::three_lin_instance(), mixed_instance()}) {
    for (int n = 1; n <= 4; ++n) {
      for (int j = 0; j < n; ++j) EXPECT_EQ(el::run_test_exact(inst, SymbolFunction::dictator(inst.predicate.alphabet(), n, j)), 1);
    }
  }
  EXPECT_EQ(el::run_test_exact(a5(), SymbolFunction::dictator(a5().predicate.alphabet(), 3, 1)), 1);
}

TEST(RunTestExact, ConstantsAndIdentity) {
  const auto inst = mixed_instance();
  const auto& sigma = inst.predicate.alphabet();
  EXPECT_EQ(el::run_test_exact(inst, SymbolFunction::constant(sigma, 3, 0)), 0);
  EXPECT_EQ(el::run_test_exact(inst, SymbolFunction::from(sigma, 1, [](const el::Atom& x) { return x[0]; })), 1);
  const auto lin = el::fixtures::three_lin_instance();
  EXPECT_EQ(el::run_test_exact(lin, SymbolFunction::constant(el::Alphabet::range(2), 2, 0)), 1);
  EXPECT_EQ(el::run_test_exact(lin, SymbolFunction::constant(el::Alphabet::range(2), 2, 1)), 0);
}

TEST(RunTestExact, ThreeLinParityOfTwo) {
  // f = x_1 xor x_2 is a character of the embedding: it passes every check.
  const auto lin = el::fixtures::three_lin_instance();
  const auto f = SymbolFunction::from(el::Alphabet::range(2), 3, [](const el::Atom& x) { return (x[0] + x[1]) % 2; });
  EXPECT_EQ(el::run_test_exact(lin, f), 1);
  // Majority of three is far from a character.
  const auto maj = SymbolFunction::from(el::Alphabet::range(2), 3, [](const el::Atom& x) { return x[0] + x[1] + x[2] >= 2 ? 1 : 0; });
  EXPECT_EQ(el::run_test_exact(lin, maj), Rational(5, 8));
}

TEST(RunTestExact, RelabelingInvariance) {
  std::mt19937_64 rng(61);
  const auto inst = mixed_instance();
  const std::vector<int> perm{2, 0, 1};
  auto relabel_dist = [&](const el::JointDistribution& d) {
    std::vector<el::JointDistribution::Entry> atoms;
    for (const auto& [x, p] : d.atoms()) {
      el::Atom y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = perm[static_cast<std::size_t>(x[i])];
      atoms.emplace_back(y, p);
    }
    return el::JointDistribution(d.alphabets(), atoms);
  };
  el::TestInstance moved{el::Predicate::from(inst.predicate.alphabet(), 3, [&](const el::Atom& y) {
                           el::Atom x(3);
                           for (std::size_t i = 0; i < 3; ++i) x[i] = static_cast<int>(std::find(perm.begin(), perm.end(), y[i]) - perm.begin());
                           return inst.predicate(x);
                         }),
                         {}};
  for (const auto& c : inst.constraints) moved.constraints.push_back({c.weight, relabel_dist(c.mu)});
  for (int t = 0; t < 10; ++t) {
    const int n = 1 + t % 3;
    const auto f = random_function(rng, inst.predicate.alphabet(), n);
    const auto g = SymbolFunction::from(inst.predicate.alphabet(), n, [&](const el::Atom& y) {
      el::Atom x(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) x[i] = static_cast<int>(std::find(perm.begin(), perm.end(), y[i]) - perm.begin());
      std::size_t idx = 0;
      for (int v : x) idx = idx * 3 + static_cast<std::size_t>(v);
      return perm[static_cast<std::size_t>(f[idx])];
    });
    EXPECT_EQ(el::run_test_exact(inst, f), el::run_test_exact(moved, g));
  }
}

TEST(RunTestMc, DictatorAlwaysAccepts) {
  const auto e = el::run_test_mc(a5(), SymbolFunction::dictator(a5().predicate.alphabet(), 2, 0), 10000, 3);
  EXPECT_EQ(e.accepted, 10000u);
  EXPECT_EQ(e.estimate, 1.0);
}

TEST(RunTestMc, AgreesWithExactAndIsReproducible) {
  std::mt19937_64 rng(62);
  const auto inst = mixed_instance();
  int misses = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 3;
    const auto f = random_function(rng, inst.predicate.alphabet(), n);
    const double exact = el::to_double(el::run_test_exact(inst, f));
    const auto e = el::run_test_mc(inst, f, 20000, 500 + static_cast<std::uint64_t>(t));
    misses += std::abs(e.estimate - exact) > e.half_width;
  }
  EXPECT_LE(misses, 1);
  const auto f = random_function(rng, inst.predicate.alphabet(), 2);
  EXPECT_EQ(el::run_test_mc(inst, f, 9000, 8, {.threads = 1}).accepted, el::run_test_mc(inst, f, 9000, 8, {.threads = 3}).accepted);
}

TEST(MaxAcceptance, ThreeLinBestIsOne) {
  const auto r = el::max_acceptance_bruteforce(el::fixtures::three_lin_instance(), 2);
  EXPECT_EQ(r.value, 1);
  EXPECT_EQ(r.functions, 16u);
  EXPECT_THROW(el::max_acceptance_bruteforce(el::fixtures::three_lin_instance(), 5), el::SizeGuardError);
}
