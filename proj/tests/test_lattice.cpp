#include "embedlens/lattice.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <functional>

namespace el = embedlens;
using el::Integer;
using el::IntMatrix;

namespace {

std::vector<Integer> divisors_of(const IntMatrix& a) { return el::smith_normal_form(a).divisors; }

void expect_certificate(const IntMatrix& a) {
  const auto snf = el::smith_normal_form(a);
  ASSERT_EQ(snf.U * a * snf.V, snf.D) << a.str();
  EXPECT_EQ(abs(el::determinant(snf.U)), 1);
  EXPECT_EQ(abs(el::determinant(snf.V)), 1);
  for (int i = 0; i < snf.D.rows(); ++i) {
    for (int j = 0; j < snf.D.cols(); ++j) {
      if (i != j) {
        EXPECT_EQ(snf.D(i, j), 0);
      }
    }
  }
  const auto& d = snf.divisors;
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(d[i], 0);
    EXPECT_EQ(d[i], snf.D(static_cast<int>(i), static_cast<int>(i)));
    if (i + 1 < d.size()) {
      if (d[i] == 0) {
        EXPECT_EQ(d[i + 1], 0);
      } else {
        EXPECT_EQ(Integer(d[i + 1] % d[i]), 0);
      }
    }
    EXPECT_EQ(d[i] != 0, static_cast<int>(i) < snf.rank);
  }
}

// gcd of all r x r minors.
Integer minor_gcd(const IntMatrix& a, int r) {
  Integer g = 0;
  std::vector<int> rows, cols;
  std::function<void(int, int)> pick_cols;
  std::function<void(int)> pick_rows = [&](int start) {
    if (static_cast<int>(rows.size()) == r) {
      pick_cols(0, 0);
      return;
    }
    for (int i = start; i < a.rows(); ++i) {
      rows.push_back(i);
      pick_rows(i + 1);
      rows.pop_back();
    }
  };
  pick_cols = [&](int start, int) {
    if (static_cast<int>(cols.size()) == r) {
      IntMatrix sub(r, r);
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) sub(i, j) = a(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
      }
      g = boost::multiprecision::gcd(g, Integer(abs(el::determinant(sub))));
      return;
    }
    for (int j = start; j < a.cols(); ++j) {
      cols.push_back(j);
      pick_cols(j + 1, 0);
      cols.pop_back();
    }
  };
  pick_rows(0);
  return g;
}

// Every standard basis vector is an integer combination of rows with
// coefficients in [-bound, bound].
bool brute_force_full(const IntMatrix& g, int bound) {
  const int m = g.rows();
  const int s = g.cols();
  for (int target = 0; target < s; ++target) {
    std::vector<int> coef(static_cast<std::size_t>(m), -bound);
    bool found = false;
    while (true) {
      bool ok = true;
      for (int j = 0; j < s && ok; ++j) {
        long long v = 0;
        for (int i = 0; i < m; ++i) v += coef[static_cast<std::size_t>(i)] * g(i, j).convert_to<long long>();
        ok = v == (j == target ? 1 : 0);
      }
      if (ok) {
        found = true;
        break;
      }
      int i = 0;
      while (i < m && coef[static_cast<std::size_t>(i)] == bound) coef[static_cast<std::size_t>(i++)] = -bound;
      if (i == m) break;
      ++coef[static_cast<std::size_t>(i)];
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST(SmithNormalForm, Identity) { EXPECT_EQ(divisors_of(IntMatrix::identity(2)), (std::vector<Integer>{1, 1})); }

TEST(SmithNormalForm, AlreadyDiagonal) { EXPECT_EQ(divisors_of(IntMatrix{{2, 0}, {0, 4}}), (std::vector<Integer>{2, 4})); }

TEST(SmithNormalForm, TwoOneOneTwo) { EXPECT_EQ(divisors_of(IntMatrix{{2, 1}, {1, 2}}), (std::vector<Integer>{1, 3})); }

TEST(SmithNormalForm, NonDividingDiagonalGetsFixed) {
  EXPECT_EQ(divisors_of(IntMatrix{{2, 0}, {0, 3}}), (std::vector<Integer>{1, 6}));
  expect_certificate(IntMatrix{{2, 0}, {0, 3}});
}

TEST(SmithNormalForm, ZeroAndRectangular) {
  const auto snf = el::smith_normal_form(IntMatrix(2, 3));
  EXPECT_EQ(snf.rank, 0);
  EXPECT_EQ(snf.divisors, (std::vector<Integer>{0, 0}));
  expect_certificate(IntMatrix{{1, 2, 3}, {4, 5, 6}});
  expect_certificate(IntMatrix{{6}, {4}, {10}});
}

TEST(SmithNormalForm, Deterministic) {
  const IntMatrix a{{4, -6, 2}, {3, 9, -1}, {0, 5, 7}};
  const auto s1 = el::smith_normal_form(a);
  const auto s2 = el::smith_normal_form(a);
  EXPECT_EQ(s1.U, s2.U);
  EXPECT_EQ(s1.V, s2.V);
}

TEST(SmithNormalForm, RandomCertificates) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) expect_certificate(el::testing::random_matrix(rng));
}

TEST(SmithNormalForm, DivisorProductsMatchMinorGcds) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    const auto a = el::testing::random_matrix(rng, 4);
    const auto snf = el::smith_normal_form(a);
    Integer prod = 1;
    for (int r = 1; r <= snf.rank; ++r) {
      prod *= snf.divisors[static_cast<std::size_t>(r - 1)];
      EXPECT_EQ(prod, minor_gcd(a, r)) << a.str() << " r=" << r;
    }
  }
}

TEST(LatticeIsFull, Examples) {
  EXPECT_TRUE(el::lattice_is_full(IntMatrix::identity(2)));
  EXPECT_FALSE(el::lattice_is_full(IntMatrix{{2, 0}, {0, 2}}));
  EXPECT_FALSE(el::lattice_is_full(IntMatrix{{1, 1}}));
  EXPECT_TRUE(el::lattice_is_full(IntMatrix{{2, 0}, {3, 0}, {0, 1}}));
}

TEST(LatticeIsFull, AgreesWithBoundedCoefficientOracle) {
  std::mt19937_64 rng(5);
  int full = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto g = el::testing::random_matrix(rng, 3, 2);
    const bool fast = el::lattice_is_full(g);
    full += fast;
    EXPECT_EQ(fast, brute_force_full(g, 12)) << g.str();
  }
  EXPECT_GT(full, 0);
}

TEST(LatticeInvariants, MatchesSnfOnGenerators) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = el::testing::random_matrix(rng, 8, 4);
    const auto snf = el::smith_normal_form(g);
    const auto inv = el::lattice_invariants(g);
    EXPECT_EQ(inv.rank, snf.rank);
    for (int i = 0; i < snf.rank; ++i) EXPECT_EQ(inv.divisors[static_cast<std::size_t>(i)], snf.divisors[static_cast<std::size_t>(i)]);
  }
}

TEST(RationalKernelVector, Examples) {
  const auto v = el::rational_kernel_vector(IntMatrix{{1, 1}});
  ASSERT_TRUE(v);
  EXPECT_EQ(*v, (std::vector<Integer>{1, -1}));
  EXPECT_FALSE(el::rational_kernel_vector(IntMatrix{{2, 1}, {1, 2}}));
  const auto z = el::rational_kernel_vector(IntMatrix(1, 2));
  ASSERT_TRUE(z);
  EXPECT_EQ(IntMatrix(1, 2) * *z, (std::vector<Integer>{0}));
  EXPECT_NE(*z, (std::vector<Integer>{0, 0}));
}

TEST(RationalKernelVector, RandomRankDeficient) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = el::testing::random_matrix(rng, 6, 5);
    const auto snf = el::smith_normal_form(a);
    const auto v = el::rational_kernel_vector(a);
    EXPECT_EQ(v.has_value(), snf.rank < a.cols());
    if (v) {
      for (const auto& x : a * *v) EXPECT_EQ(x, 0);
    }
  }
}
