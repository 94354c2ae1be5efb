#pragma once

// Abelian embeddings of a support: constraint lattice, SNF-based decision
// and witness extraction, an exhaustive oracle, and connectivity checks.

#include "embedlens/distribution.hpp"
#include "embedlens/errors.hpp"
#include "embedlens/lattice.hpp"
#include "embedlens/rational.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace embedlens {

// One row a_x per support atom; column (i, s) for every symbol s != x*_i of
// coordinate i, so <a_x, alpha> = sum_i alpha_i(x_i) when alpha_i(x*_i) = 0.
struct ConstraintMatrix {
  Atom base_point;
  int S = 0;
  std::vector<std::vector<int>> column_of;      // [coord][symbol] -> column, -1 at base symbol
  std::vector<std::pair<int, int>> column_key;  // column -> (coord, symbol)
  IntMatrix rows;
};

inline ConstraintMatrix constraint_matrix(const std::vector<Atom>& support, const std::vector<Alphabet>& alphabets) {
  if (support.empty()) throw ValidationError("constraint matrix needs a non-empty support");
  ConstraintMatrix cm;
  cm.base_point = *std::min_element(support.begin(), support.end());
  const std::size_t k = alphabets.size();
  cm.column_of.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    cm.column_of[i].assign(static_cast<std::size_t>(alphabets[i].size()), -1);
    for (int s = 0; s < alphabets[i].size(); ++s) {
      if (s == cm.base_point[i]) continue;
      cm.column_of[i][static_cast<std::size_t>(s)] = cm.S++;
      cm.column_key.emplace_back(static_cast<int>(i), s);
    }
  }
  cm.rows = IntMatrix(static_cast<int>(support.size()), cm.S);
  for (std::size_t r = 0; r < support.size(); ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      const int c = cm.column_of[i][static_cast<std::size_t>(support[r][i])];
      if (c >= 0) cm.rows(static_cast<int>(r), c) = 1;
    }
  }
  return cm;
}

inline ConstraintMatrix constraint_matrix(const JointDistribution& dist) {
  return constraint_matrix(dist.support(), dist.alphabets());
}

// Maps sigma_i : Sigma_i -> Z (modulus 0) or Z_m (modulus m >= 2).
struct EmbeddingWitness {
  Integer modulus = 0;
  std::vector<std::vector<Integer>> sigma;

  friend bool operator==(const EmbeddingWitness&, const EmbeddingWitness&) = default;
};

struct EmbeddingVerdict {
  bool admits = false;
  std::optional<EmbeddingWitness> witness;
  std::vector<Integer> snf_divisors;
  int rank = 0;
  int S = 0;
};

inline bool verify_witness(const std::vector<Atom>& support, const std::vector<Alphabet>& alphabets,
                           const EmbeddingWitness& w) {
  if (w.modulus < 0 || w.modulus == 1) return false;
  if (w.sigma.size() != alphabets.size()) return false;
  for (std::size_t i = 0; i < alphabets.size(); ++i) {
    if (static_cast<int>(w.sigma[i].size()) != alphabets[i].size()) return false;
  }
  auto reduce = [&](const Integer& v) { return w.modulus == 0 ? v : floor_mod(v, w.modulus); };
  bool nonconstant = false;
  for (const auto& table : w.sigma) {
    for (const auto& v : table) {
      if (reduce(v) != reduce(table.front())) nonconstant = true;
    }
  }
  if (!nonconstant) return false;
  for (const auto& x : support) {
    Integer sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += w.sigma[i][static_cast<std::size_t>(x[i])];
    if (!reduce(sum).is_zero()) return false;
  }
  return true;
}

inline bool verify_witness(const JointDistribution& dist, const EmbeddingWitness& w) {
  return verify_witness(dist.support(), dist.alphabets(), w);
}

namespace detail {

inline EmbeddingWitness witness_from_columns(const ConstraintMatrix& cm, const std::vector<Alphabet>& alphabets,
                                             const std::vector<Integer>& alpha, const Integer& modulus) {
  EmbeddingWitness w;
  w.modulus = modulus;
  for (std::size_t i = 0; i < alphabets.size(); ++i) {
    std::vector<Integer> table(static_cast<std::size_t>(alphabets[i].size()), Integer(0));
    for (int s = 0; s < alphabets[i].size(); ++s) {
      const int c = cm.column_of[i][static_cast<std::size_t>(s)];
      if (c < 0) continue;
      const Integer& v = alpha[static_cast<std::size_t>(c)];
      table[static_cast<std::size_t>(s)] = modulus == 0 ? v : floor_mod(v, modulus);
    }
    w.sigma.push_back(std::move(table));
  }
  return w;
}

}  // namespace detail

// No embedding iff the constraint lattice is all of Z^S. Rank deficiency
// gives a Z-valued witness from a kernel vector; otherwise the first
// elementary divisor d > 1 gives a Z_d witness from the matching column of V.
inline EmbeddingVerdict detect_embedding(const std::vector<Atom>& support, const std::vector<Alphabet>& alphabets) {
  const auto cm = constraint_matrix(support, alphabets);
  const auto inv = lattice_invariants(cm.rows);
  EmbeddingVerdict verdict;
  verdict.rank = inv.rank;
  verdict.S = cm.S;
  verdict.snf_divisors = inv.divisors;

  std::optional<EmbeddingWitness> w;
  if (inv.rank < cm.S) {
    auto v = inv.V.column(inv.rank);
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, abs(x));
    for (auto& x : v) x /= g;
    w = detail::witness_from_columns(cm, alphabets, v, 0);
  } else {
    for (int j = 0; j < inv.rank; ++j) {
      const Integer& d = inv.divisors[static_cast<std::size_t>(j)];
      if (d > 1) {
        w = detail::witness_from_columns(cm, alphabets, inv.V.column(j), d);
        break;
      }
    }
  }
  if (w) {
    if (!verify_witness(support, alphabets, *w)) {
      throw std::logic_error("extracted embedding witness failed verification");
    }
    verdict.admits = true;
    verdict.witness = std::move(w);
  }
  return verdict;
}

inline EmbeddingVerdict detect_embedding(const JointDistribution& dist) {
  return detect_embedding(dist.support(), dist.alphabets());
}

namespace detail {

// Rank of the constraint rows over Q and, if deficient, an integer kernel
// vector. Plain Gaussian elimination on rationals.
inline std::pair<int, std::optional<std::vector<Integer>>> rational_rank_kernel(const IntMatrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  std::vector<std::vector<Rational>> r(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(n)));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rational(a(i, j));
  }
  std::vector<int> pivot_col;
  int row = 0;
  for (int c = 0; c < n && row < m; ++c) {
    int p = -1;
    for (int i = row; i < m; ++i) {
      if (r[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    std::swap(r[static_cast<std::size_t>(row)], r[static_cast<std::size_t>(p)]);
    auto& pr = r[static_cast<std::size_t>(row)];
    const Rational inv = 1 / pr[static_cast<std::size_t>(c)];
    for (auto& x : pr) x *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      auto& ri = r[static_cast<std::size_t>(i)];
      const Rational f = ri[static_cast<std::size_t>(c)];
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) ri[static_cast<std::size_t>(j)] -= f * pr[static_cast<std::size_t>(j)];
    }
    pivot_col.push_back(c);
    ++row;
  }
  const int rank = row;
  if (rank == n) return {rank, std::nullopt};
  int free_col = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
  std::vector<Rational> v(static_cast<std::size_t>(n), Rational(0));
  v[static_cast<std::size_t>(free_col)] = 1;
  for (int i = 0; i < rank; ++i) {
    v[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(i)])] =
        -r[static_cast<std::size_t>(i)][static_cast<std::size_t>(free_col)];
  }
  Integer l = 1;
  for (const auto& x : v) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
  std::vector<Integer> out;
  for (const auto& x : v) out.push_back(boost::multiprecision::numerator(Rational(x * l)));
  return {rank, out};
}

}  // namespace detail

struct BruteForceOptions {
  double max_assignments = 1e7;  // per modulus
};

// Exhaustive oracle: every normalized sigma into Z_m for 2 <= m <= max_modulus
// (coordinates 1..k-1 enumerated, the last one forced by the support), then a
// Z-embedding from the rational rank. Shifting each sigma_i so that
// sigma_i(x*_i) = 0 loses no embeddings because x* is in the support.
inline std::optional<EmbeddingWitness> brute_force_embedding(const std::vector<Atom>& support,
                                                             const std::vector<Alphabet>& alphabets,
                                                             int max_modulus, BruteForceOptions opts = {}) {
  if (support.empty()) throw ValidationError("empty support");
  const std::size_t k = alphabets.size();
  const Atom base = *std::min_element(support.begin(), support.end());

  std::vector<std::pair<std::size_t, int>> free_slots;  // (coord, symbol) over coords 0..k-2
  for (std::size_t i = 0; i + 1 < k; ++i) {
    for (int s = 0; s < alphabets[i].size(); ++s) {
      if (s != base[i]) free_slots.emplace_back(i, s);
    }
  }
  const std::size_t last = k - 1;
  for (int m = 2; m <= max_modulus; ++m) {
    if (std::pow(static_cast<double>(m), static_cast<double>(free_slots.size())) > opts.max_assignments) {
      throw SizeGuardError("brute-force embedding enumeration exceeds size guard");
    }
    std::vector<std::vector<long long>> sigma(k);
    for (std::size_t i = 0; i < k; ++i) sigma[i].assign(static_cast<std::size_t>(alphabets[i].size()), 0);
    std::vector<int> digits(free_slots.size(), 0);
    while (true) {
      for (std::size_t t = 0; t < free_slots.size(); ++t) {
        sigma[free_slots[t].first][static_cast<std::size_t>(free_slots[t].second)] = digits[t];
      }
      // Force the last coordinate from the support.
      std::vector<long long> forced(static_cast<std::size_t>(alphabets[last].size()), -1);
      bool ok = true;
      for (const auto& x : support) {
        long long s = 0;
        for (std::size_t i = 0; i < last; ++i) s += sigma[i][static_cast<std::size_t>(x[i])];
        const long long need = ((-s) % m + m) % m;
        auto& f = forced[static_cast<std::size_t>(x[last])];
        if (f < 0) {
          f = need;
        } else if (f != need) {
          ok = false;
          break;
        }
      }
      if (ok) {
        bool nonconstant = false;
        for (std::size_t i = 0; i < last && !nonconstant; ++i) {
          for (auto v : sigma[i]) nonconstant |= v != 0;
        }
        for (auto f : forced) nonconstant |= f > 0;
        std::vector<long long> last_table(forced.size(), 0);
        for (std::size_t s = 0; s < forced.size(); ++s) last_table[s] = std::max(forced[s], 0LL);
        if (!nonconstant) {
          // An unsupported symbol of the last coordinate can move freely.
          for (std::size_t s = 0; s < forced.size(); ++s) {
            if (forced[s] < 0) {
              last_table[s] = 1;
              nonconstant = true;
              break;
            }
          }
        }
        if (nonconstant) {
          EmbeddingWitness w;
          w.modulus = m;
          for (std::size_t i = 0; i < last; ++i) {
            w.sigma.emplace_back(sigma[i].begin(), sigma[i].end());
          }
          w.sigma.emplace_back(last_table.begin(), last_table.end());
          return w;
        }
      }
      std::size_t t = 0;
      while (t < digits.size() && ++digits[t] == m) digits[t++] = 0;
      if (t == digits.size()) break;
    }
  }
  // Z-embedding via rational rank deficiency.
  ConstraintMatrix cm;
  cm = constraint_matrix(support, alphabets);
  const auto [rank, kernel] = detail::rational_rank_kernel(cm.rows);
  if (kernel) return detail::witness_from_columns(cm, alphabets, *kernel, 0);
  return std::nullopt;
}

inline std::optional<EmbeddingWitness> brute_force_embedding(const JointDistribution& dist, int max_modulus,
                                                             BruteForceOptions opts = {}) {
  return brute_force_embedding(dist.support(), dist.alphabets(), max_modulus, opts);
}

// Rank of the constraint rows over F_p. A Z_m embedding with m <= M exists
// iff some prime p <= M drops the rank below S; this scales to supports
// too large for brute_force_embedding.
inline int constraint_rank_mod_p(const IntMatrix& a, long long p) {
  std::vector<std::vector<long long>> r(static_cast<std::size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      r[static_cast<std::size_t>(i)].push_back(floor_mod(a(i, j), p).convert_to<long long>());
    }
  }
  auto inverse = [p](long long x) {
    long long result = 1, e = p - 2;
    while (e > 0) {
      if (e & 1) result = result * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return result;
  };
  int rank = 0;
  for (int c = 0; c < a.cols() && rank < a.rows(); ++c) {
    int piv = -1;
    for (int i = rank; i < a.rows(); ++i) {
      if (r[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(r[static_cast<std::size_t>(rank)], r[static_cast<std::size_t>(piv)]);
    const auto& pr = r[static_cast<std::size_t>(rank)];
    const long long inv = inverse(pr[static_cast<std::size_t>(c)]);
    for (int i = rank + 1; i < a.rows(); ++i) {
      auto& ri = r[static_cast<std::size_t>(i)];
      const long long f = ri[static_cast<std::size_t>(c)] * inv % p;
      if (f == 0) continue;
      for (int j = c; j < a.cols(); ++j) {
        ri[static_cast<std::size_t>(j)] = ((ri[static_cast<std::size_t>(j)] - f * pr[static_cast<std::size_t>(j)]) % p + p) % p;
      }
    }
    ++rank;
  }
  return rank;
}

// Connectivity -------------------------------------------------------------

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

struct PairwiseSplit {
  int i = 0;
  int j = 0;
  std::vector<int> left_i, left_j;    // Sigma_i', Sigma_j' (component of symbol 0 of Sigma_i)
  std::vector<int> right_i, right_j;  // the rest
};

struct PairwiseConnectivity {
  bool connected = true;
  std::optional<PairwiseSplit> split;
};

// Every bipartite graph (Sigma_i u Sigma_j, supp(mu_ij)) must be connected,
// zero-mass symbols included as isolated vertices.
inline PairwiseConnectivity pairwise_connected(const JointDistribution& dist) {
  const int k = dist.arity();
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const auto qi = static_cast<std::size_t>(dist.alphabet(i).size());
      const auto qj = static_cast<std::size_t>(dist.alphabet(j).size());
      detail::DisjointSets ds(qi + qj);
      for (const auto& [x, p] : dist.atoms()) {
        ds.unite(static_cast<std::size_t>(x[static_cast<std::size_t>(i)]),
                 qi + static_cast<std::size_t>(x[static_cast<std::size_t>(j)]));
      }
      const std::size_t root = ds.find(0);
      bool all = true;
      for (std::size_t v = 0; v < qi + qj; ++v) all &= ds.find(v) == root;
      if (all) continue;
      PairwiseSplit split{i, j, {}, {}, {}, {}};
      for (std::size_t s = 0; s < qi; ++s) (ds.find(s) == root ? split.left_i : split.right_i).push_back(static_cast<int>(s));
      for (std::size_t s = 0; s < qj; ++s) (ds.find(qi + s) == root ? split.left_j : split.right_j).push_back(static_cast<int>(s));
      return {false, std::move(split)};
    }
  }
  return {true, std::nullopt};
}

// Graph on supp(mu) with edges between atoms differing in exactly one
// coordinate.
inline bool connected(const JointDistribution& dist) {
  const auto& atoms = dist.atoms();
  detail::DisjointSets ds(atoms.size());
  for (int c = 0; c < dist.arity(); ++c) {
    std::map<Atom, std::size_t> bucket;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      Atom key = atoms[a].first;
      key[static_cast<std::size_t>(c)] = -1;
      auto [it, inserted] = bucket.emplace(std::move(key), a);
      if (!inserted) ds.unite(it->second, a);
    }
  }
  const std::size_t root = ds.find(0);
  for (std::size_t a = 1; a < atoms.size(); ++a) {
    if (ds.find(a) != root) return false;
  }
  return true;
}

// Indicator witness for a disconnected pair (i, j): sigma_i = 1 on Sigma_i',
// sigma_j = -1 on Sigma_j', zero elsewhere.
inline EmbeddingWitness partition_witness(const JointDistribution& dist, const PairwiseSplit& split) {
  EmbeddingWitness w;
  w.modulus = 0;
  for (int t = 0; t < dist.arity(); ++t) {
    w.sigma.emplace_back(static_cast<std::size_t>(dist.alphabet(t).size()), Integer(0));
  }
  for (int s : split.left_i) w.sigma[static_cast<std::size_t>(split.i)][static_cast<std::size_t>(s)] = 1;
  for (int s : split.left_j) w.sigma[static_cast<std::size_t>(split.j)][static_cast<std::size_t>(s)] = -1;
  return w;
}

struct NoEmbeddingPcReport {
  bool admits_embedding = false;
  bool pairwise_connected = false;
  bool consistent = false;
  std::optional<EmbeddingWitness> partition_witness;
  bool partition_witness_verified = false;
};

// No embedding must imply pairwise connectivity; when a pair is disconnected
// the indicator construction must itself be an embedding.
inline NoEmbeddingPcReport no_embedding_implies_pc_check(const JointDistribution& dist) {
  NoEmbeddingPcReport r;
  r.admits_embedding = detect_embedding(dist).admits;
  const auto pc = pairwise_connected(dist);
  r.pairwise_connected = pc.connected;
  if (pc.split) {
    r.partition_witness = partition_witness(dist, *pc.split);
    r.partition_witness_verified = verify_witness(dist, *r.partition_witness);
  }
  r.consistent = (r.admits_embedding || r.pairwise_connected) &&
                 (r.pairwise_connected || (r.partition_witness_verified && r.admits_embedding));
  return r;
}

}  // namespace embedlens
