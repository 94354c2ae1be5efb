#pragma once

// Named desk-scale distributions used by tests, the CLI and the property
// suites.

#include "embedlens/distribution.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

namespace embedlens::fixtures {

inline std::vector<Alphabet> binary(int k) { return std::vector<Alphabet>(static_cast<std::size_t>(k), Alphabet::range(2)); }

// Uniform on even-parity triples of {0,1}^3.
inline JointDistribution three_lin() {
  return JointDistribution::uniform(binary(3), {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}

// Uniform on {(x, y, z) in Z_3^3 : x + y + z = 0}.
inline JointDistribution z3_sum() {
  std::vector<Atom> s;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) s.push_back({x, y, (6 - x - y) % 3});
  }
  return JointDistribution::uniform(std::vector<Alphabet>(3, Alphabet::range(3)), s);
}

// Uniform on all of [q]^k.
inline JointDistribution full_support(int k, int q = 2) {
  std::vector<Atom> s;
  Atom x(static_cast<std::size_t>(k), 0);
  while (true) {
    s.push_back(x);
    std::size_t i = x.size();
    while (i > 0 && ++x[i - 1] == q) x[--i] = 0;
    if (i == 0) break;
  }
  return JointDistribution::uniform(std::vector<Alphabet>(static_cast<std::size_t>(k), Alphabet::range(q)), s);
}

inline JointDistribution single_atom(int k = 3, int q = 2) {
  return JointDistribution::uniform(std::vector<Alphabet>(static_cast<std::size_t>(k), Alphabet::range(q)),
                                    {Atom(static_cast<std::size_t>(k), 0)});
}

// Uniform on {(0,0), (1,1)}: the pair graph splits into two components.
inline JointDistribution disconnected_pair() { return JointDistribution::uniform(binary(2), {{0, 0}, {1, 1}}); }

// Uniform on {0,1}^3 minus (1,1,1).
inline JointDistribution seven_atom() {
  std::vector<Atom> s;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 2; ++z) {
        if (x + y + z < 3) s.push_back({x, y, z});
      }
    }
  }
  return JointDistribution::uniform(binary(3), s);
}

namespace detail {

using Perm = std::array<int, 5>;

inline std::vector<Perm> alternating_group_a5() {
  std::vector<Perm> out;
  Perm p{0, 1, 2, 3, 4};
  do {
    int inversions = 0;
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) inversions += p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)];
    }
    if (inversions % 2 == 0) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline Perm compose(const Perm& a, const Perm& b) {  // (a*b)(i) = a(b(i))
  Perm c{};
  for (std::size_t i = 0; i < 5; ++i) c[i] = a[static_cast<std::size_t>(b[i])];
  return c;
}

}  // namespace detail

// Uniform on {(x, y, z) in A5^3 : x y z = 1}; symbols are one-line notation
// of the permutation ("01234" is the identity).
inline JointDistribution a5_product() {
  const auto group = detail::alternating_group_a5();
  std::vector<std::string> names;
  for (const auto& g : group) {
    std::string s;
    for (int v : g) s += static_cast<char>('0' + v);
    names.push_back(s);
  }
  const detail::Perm id{0, 1, 2, 3, 4};
  std::vector<Atom> support;
  for (std::size_t a = 0; a < group.size(); ++a) {
    for (std::size_t b = 0; b < group.size(); ++b) {
      const auto ab = detail::compose(group[a], group[b]);
      for (std::size_t c = 0; c < group.size(); ++c) {
        if (detail::compose(ab, group[c]) == id) {
          support.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
          break;
        }
      }
    }
  }
  const Alphabet alpha(names);
  return JointDistribution::uniform({alpha, alpha, alpha}, support);
}

}  // namespace embedlens::fixtures
