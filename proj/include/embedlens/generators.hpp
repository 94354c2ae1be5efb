#pragma once

// Seeded random instances shared by the test suite and the verify suites.

#include "embedlens/distribution.hpp"
#include "embedlens/function_space.hpp"
#include "embedlens/lattice.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace embedlens::generators {

inline IntMatrix random_matrix(std::mt19937_64& rng, int max_dim = 8, int bound = 9) {
  std::uniform_int_distribution<int> dim(1, max_dim);
  std::uniform_int_distribution<int> entry(-bound, bound);
  IntMatrix a(dim(rng), dim(rng));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) a(i, j) = entry(rng);
  }
  return a;
}

// Random non-empty support over alphabets of the given sizes, uniform mass.
inline JointDistribution random_support(std::mt19937_64& rng, const std::vector<int>& sizes) {
  std::vector<Alphabet> alphabets;
  std::size_t total = 1;
  for (int q : sizes) {
    alphabets.push_back(Alphabet::range(q));
    total *= static_cast<std::size_t>(q);
  }
  std::uniform_int_distribution<std::size_t> count(1, total);
  std::vector<std::size_t> cells(total);
  for (std::size_t i = 0; i < total; ++i) cells[i] = i;
  std::shuffle(cells.begin(), cells.end(), rng);
  cells.resize(count(rng));
  std::vector<Atom> support;
  for (std::size_t c : cells) {
    Atom x(sizes.size());
    for (std::size_t i = sizes.size(); i-- > 0;) {
      x[i] = static_cast<int>(c % static_cast<std::size_t>(sizes[i]));
      c /= static_cast<std::size_t>(sizes[i]);
    }
    support.push_back(x);
  }
  return JointDistribution::uniform(alphabets, support);
}

// Random distribution with integer weights 1..5 on a random support.
inline JointDistribution random_weighted(std::mt19937_64& rng, const std::vector<int>& sizes) {
  const auto base = random_support(rng, sizes);
  std::uniform_int_distribution<int> w(1, 5);
  std::vector<JointDistribution::Entry> atoms;
  long long total = 0;
  std::vector<int> ws;
  for (std::size_t i = 0; i < base.support_size(); ++i) {
    ws.push_back(w(rng));
    total += ws.back();
  }
  for (std::size_t i = 0; i < base.support_size(); ++i) {
    atoms.emplace_back(base.atoms()[i].first, Rational(ws[i], total));
  }
  return {base.alphabets(), atoms};
}

inline Complex random_disc_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) <= 1.0) return z;
  }
}

inline TableFunction random_table(std::mt19937_64& rng, int q, int n) {
  return TableFunction::from(Alphabet::range(q), n, [&](const Atom&) { return random_disc_point(rng); });
}

inline Measure random_measure(std::mt19937_64& rng, int q) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Measure nu(static_cast<std::size_t>(q));
  double total = 0;
  for (auto& w : nu) total += (w = u(rng));
  for (auto& w : nu) w /= total;
  return nu;
}

inline Measure uniform_measure(int q) { return Measure(static_cast<std::size_t>(q), 1.0 / q); }

inline ProductFunction random_unimodular_product(std::mt19937_64& rng, int q, int n) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<std::vector<Complex>> factors(static_cast<std::size_t>(n), std::vector<Complex>(static_cast<std::size_t>(q)));
  for (auto& f : factors) {
    for (auto& v : f) v = std::polar(1.0, angle(rng));
  }
  return {Alphabet::range(q), factors};
}

}  // namespace embedlens::generators
