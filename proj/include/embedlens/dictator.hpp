#pragma once

// The dictatorship test: pick a constraint by weight, draw a k x n matrix
// whose columns are i.i.d. from the constraint's local distribution, and
// accept when the predicate holds on the images of the rows.

#include "embedlens/correlation.hpp"
#include "embedlens/distribution.hpp"
#include "embedlens/embedding.hpp"
#include "embedlens/errors.hpp"
#include "embedlens/fixtures.hpp"
#include "embedlens/function_space.hpp"
#include "embedlens/rational.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace embedlens {

class Predicate {
 public:
  Predicate() = default;
  // truth is indexed lexicographically, coordinate 0 most significant.
  Predicate(Alphabet alphabet, int k, std::vector<std::uint8_t> truth)
      : alphabet_(std::move(alphabet)), k_(k), truth_(std::move(truth)) {
    if (k_ < 1) throw ValidationError("predicate arity must be positive");
    if (truth_.size() != detail::checked_power(alphabet_.size(), k_)) throw ValidationError("predicate truth table has the wrong length");
    for (auto v : truth_) {
      if (v > 1) throw ValidationError("predicate truth values must be 0 or 1");
    }
  }

  template <class F>
  static Predicate from(const Alphabet& alphabet, int k, F&& accepts) {
    std::vector<std::uint8_t> truth(detail::checked_power(alphabet.size(), k));
    Atom x(static_cast<std::size_t>(k), 0);
    for (std::size_t idx = 0; idx < truth.size(); ++idx) {
      truth[idx] = accepts(x) ? 1 : 0;
      for (std::size_t j = x.size(); j-- > 0;) {
        if (++x[j] < alphabet.size()) break;
        x[j] = 0;
      }
    }
    return {alphabet, k, std::move(truth)};
  }

  const Alphabet& alphabet() const { return alphabet_; }
  int k() const { return k_; }
  const std::vector<std::uint8_t>& truth() const { return truth_; }

  bool operator()(const Atom& x) const {
    std::size_t idx = 0;
    for (int v : x) idx = idx * static_cast<std::size_t>(alphabet_.size()) + static_cast<std::size_t>(v);
    return truth_[idx] != 0;
  }

 private:
  Alphabet alphabet_;
  int k_ = 0;
  std::vector<std::uint8_t> truth_;
};

struct Constraint {
  Rational weight;
  JointDistribution mu;
};

struct TestInstance {
  Predicate predicate;
  std::vector<Constraint> constraints;
};

// f : Sigma^n -> Sigma as an explicit table, same indexing as TableFunction.
class SymbolFunction {
 public:
  SymbolFunction() = default;
  SymbolFunction(Alphabet alphabet, int n, std::vector<int> values)
      : alphabet_(std::move(alphabet)), n_(n), values_(std::move(values)) {
    if (n_ < 0) throw ValidationError("function arity must be non-negative");
    if (values_.size() != detail::checked_power(alphabet_.size(), n_)) throw ValidationError("function table has the wrong length");
    for (int v : values_) {
      if (v < 0 || v >= alphabet_.size()) throw ValidationError("function value outside the alphabet");
    }
  }

  template <class F>
  static SymbolFunction from(const Alphabet& alphabet, int n, F&& map) {
    std::vector<int> values(detail::checked_power(alphabet.size(), n));
    Atom x(static_cast<std::size_t>(n), 0);
    for (auto& v : values) {
      v = map(x);
      for (std::size_t j = x.size(); j-- > 0;) {
        if (++x[j] < alphabet.size()) break;
        x[j] = 0;
      }
    }
    return {alphabet, n, std::move(values)};
  }

  static SymbolFunction dictator(const Alphabet& alphabet, int n, int j) {
    if (j < 0 || j >= n) throw ValidationError("dictator coordinate out of range");
    return from(alphabet, n, [j](const Atom& x) { return x[static_cast<std::size_t>(j)]; });
  }

  static SymbolFunction constant(const Alphabet& alphabet, int n, int value) {
    return from(alphabet, n, [value](const Atom&) { return value; });
  }

  const Alphabet& alphabet() const { return alphabet_; }
  int n() const { return n_; }
  int q() const { return alphabet_.size(); }
  std::size_t size() const { return values_.size(); }
  const std::vector<int>& values() const { return values_; }
  int operator[](std::size_t idx) const { return values_[idx]; }

  // Coordinates on which f actually depends.
  std::vector<int> relevant_coordinates() const {
    std::vector<int> out;
    std::size_t stride = 1;
    std::vector<std::size_t> strides(static_cast<std::size_t>(n_));
    for (int j = n_ - 1; j >= 0; --j) {
      strides[static_cast<std::size_t>(j)] = stride;
      stride *= static_cast<std::size_t>(q());
    }
    for (int j = 0; j < n_; ++j) {
      const std::size_t s = strides[static_cast<std::size_t>(j)];
      bool depends = false;
      for (std::size_t idx = 0; idx < values_.size() && !depends; ++idx) {
        if ((idx / s) % static_cast<std::size_t>(q()) == 0) {
          for (int a = 1; a < q() && !depends; ++a) depends = values_[idx + static_cast<std::size_t>(a) * s] != values_[idx];
        }
      }
      if (depends) out.push_back(j);
    }
    return out;
  }

  // f with every coordinate outside `keep` fixed to symbol 0.
  SymbolFunction restrict_to(const std::vector<int>& keep) const {
    return from(alphabet_, static_cast<int>(keep.size()), [&](const Atom& y) {
      std::size_t idx = 0;
      std::size_t t = 0;
      for (int j = 0; j < n_; ++j) {
        const int v = t < keep.size() && keep[t] == j ? y[t++] : 0;
        idx = idx * static_cast<std::size_t>(q()) + static_cast<std::size_t>(v);
      }
      return values_[idx];
    });
  }

 private:
  Alphabet alphabet_;
  int n_ = 0;
  std::vector<int> values_;
};

// Validation ------------------------------------------------------------------

struct ConstraintVerdict {
  bool support_ok = true;
  bool admits_embedding = false;
  bool connected = false;
  bool pairwise_connected = false;
};

struct InstanceReport {
  bool valid = true;  // weights, shapes and supports
  std::vector<std::string> violations;
  std::vector<ConstraintVerdict> constraints;
  bool no_embedding = true;  // no constraint distribution admits an embedding
};

namespace detail {

// Weights, shapes and supports; no embedding analysis.
inline std::vector<std::string> structural_violations(const TestInstance& inst) {
  std::vector<std::string> out;
  const auto& P = inst.predicate;
  Rational total = 0;
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    const auto& c = inst.constraints[i];
    const std::string tag = "constraint " + std::to_string(i) + ": ";
    if (c.weight <= 0) out.push_back(tag + "weight must be positive");
    total += c.weight;
    bool shape_ok = c.mu.arity() == P.k();
    for (int j = 0; shape_ok && j < c.mu.arity(); ++j) shape_ok = c.mu.alphabet(j) == P.alphabet();
    if (!shape_ok) {
      out.push_back(tag + "local distribution must be over Sigma^k");
      continue;
    }
    for (const auto& [x, p] : c.mu.atoms()) {
      if (P(x)) continue;
      std::string atom;
      for (int s : x) atom += (atom.empty() ? "" : ",") + P.alphabet().symbol(s);
      out.push_back(tag + "atom (" + atom + ") falsifies the predicate");
    }
  }
  if (inst.constraints.empty()) out.emplace_back("instance has no constraints");
  if (total != 1) out.push_back("weights sum to " + to_string(total) + ", not 1");
  return out;
}

}  // namespace detail

inline InstanceReport validate_instance(const TestInstance& inst) {
  InstanceReport r;
  r.violations = detail::structural_violations(inst);
  r.valid = r.violations.empty();
  const auto& P = inst.predicate;
  for (const auto& c : inst.constraints) {
    ConstraintVerdict v;
    bool shape_ok = c.mu.arity() == P.k();
    for (int j = 0; shape_ok && j < c.mu.arity(); ++j) shape_ok = c.mu.alphabet(j) == P.alphabet();
    if (!shape_ok) {
      v.support_ok = false;
      r.constraints.push_back(v);
      continue;
    }
    for (const auto& [x, p] : c.mu.atoms()) v.support_ok = v.support_ok && P(x);
    v.admits_embedding = detect_embedding(c.mu).admits;
    v.connected = connected(c.mu);
    v.pairwise_connected = pairwise_connected(c.mu).connected;
    r.no_embedding = r.no_embedding && !v.admits_embedding;
    r.constraints.push_back(v);
  }
  return r;
}

inline void require_valid(const TestInstance& inst, const SymbolFunction& f) {
  const auto violations = detail::structural_violations(inst);
  if (!violations.empty()) throw ValidationError(violations.front());
  if (!(f.alphabet() == inst.predicate.alphabet())) throw ValidationError("function alphabet differs from the predicate alphabet");
}

// Exact evaluation -------------------------------------------------------------

inline constexpr double kMaxDictatorTerms = 1e7;

namespace detail {

// Acceptance of one constraint on a function restricted to its relevant
// coordinates; the remaining columns integrate out.
inline Rational constraint_acceptance(const Predicate& P, const JointDistribution& mu, const SymbolFunction& g) {
  const auto& atoms = mu.atoms();
  const int m = g.n();
  if (std::pow(static_cast<double>(atoms.size()), m) > kMaxDictatorTerms) {
    throw SizeGuardError("exact dictatorship test needs |supp|^(relevant coordinates) <= 1e7");
  }
  // Integer numerators over a common denominator keep the inner loop cheap.
  Integer den = 1;
  for (const auto& [x, p] : atoms) den = boost::integer::lcm(den, Integer(boost::multiprecision::denominator(p)));
  std::vector<Integer> num;
  for (const auto& [x, p] : atoms) num.push_back(Integer(boost::multiprecision::numerator(p) * (den / boost::multiprecision::denominator(p))));

  const std::size_t k = static_cast<std::size_t>(P.k());
  const auto q = static_cast<std::size_t>(g.q());
  std::vector<std::vector<std::size_t>> rows(static_cast<std::size_t>(m) + 1, std::vector<std::size_t>(k, 0));
  std::vector<Integer> weight(static_cast<std::size_t>(m) + 1, Integer(1));
  Integer accepted = 0;
  Atom image(k);
  auto walk = [&](auto&& self, int j) -> void {
    const auto ju = static_cast<std::size_t>(j);
    if (j == m) {
      for (std::size_t i = 0; i < k; ++i) image[i] = g[rows[ju][i]];
      if (P(image)) accepted += weight[ju];
      return;
    }
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      weight[ju + 1] = weight[ju] * num[a];
      for (std::size_t i = 0; i < k; ++i) rows[ju + 1][i] = rows[ju][i] * q + static_cast<std::size_t>(atoms[a].first[i]);
      self(self, j + 1);
    }
  };
  walk(walk, 0);
  Integer scale = 1;
  for (int j = 0; j < m; ++j) scale *= den;
  return make_rational(accepted, scale);
}

inline Rational acceptance_unchecked(const TestInstance& inst, const SymbolFunction& f) {
  const auto g = f.restrict_to(f.relevant_coordinates());
  Rational total = 0;
  for (const auto& c : inst.constraints) total += c.weight * constraint_acceptance(inst.predicate, c.mu, g);
  return total;
}

}  // namespace detail

inline Rational run_test_exact(const TestInstance& inst, const SymbolFunction& f) {
  require_valid(inst, f);
  return detail::acceptance_unchecked(inst, f);
}

// Monte Carlo ---------------------------------------------------------------

struct AcceptanceEstimate {
  std::uint64_t accepted = 0;
  std::uint64_t samples = 0;
  double estimate = 0;
  double half_width = 0;
};

inline AcceptanceEstimate run_test_mc(const TestInstance& inst, const SymbolFunction& f, std::uint64_t samples,
                                      std::uint64_t seed, MonteCarloOptions opts = {}) {
  require_valid(inst, f);
  if (samples == 0) throw ValidationError("Monte Carlo needs at least one sample");
  std::vector<Rational> weights;
  std::vector<detail::DiscreteSampler> columns;
  for (const auto& c : inst.constraints) {
    weights.push_back(c.weight);
    std::vector<Rational> m;
    for (const auto& [x, p] : c.mu.atoms()) m.push_back(p);
    columns.emplace_back(m);
  }
  const detail::DiscreteSampler pick(weights);
  const std::size_t k = static_cast<std::size_t>(inst.predicate.k());
  const auto q = static_cast<std::size_t>(f.q());

  const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk);
  const std::uint64_t chunks = (samples + chunk - 1) / chunk;
  std::vector<std::uint64_t> partial(chunks, 0);
  detail::for_each_chunk(chunks, opts.threads, [&](std::uint64_t c) {
    detail::Engine rng(detail::derive_seed(seed, c));
    const std::uint64_t count = std::min(chunk, samples - c * chunk);
    std::vector<std::size_t> rows(k);
    Atom image(k);
    for (std::uint64_t s = 0; s < count; ++s) {
      const std::size_t ci = pick(rng);
      const auto& atoms = inst.constraints[ci].mu.atoms();
      std::fill(rows.begin(), rows.end(), 0);
      for (int j = 0; j < f.n(); ++j) {
        const Atom& x = atoms[columns[ci](rng)].first;
        for (std::size_t i = 0; i < k; ++i) rows[i] = rows[i] * q + static_cast<std::size_t>(x[i]);
      }
      for (std::size_t i = 0; i < k; ++i) image[i] = f[rows[i]];
      partial[c] += inst.predicate(image) ? 1 : 0;
    }
  });
  AcceptanceEstimate e;
  for (auto v : partial) e.accepted += v;
  e.samples = samples;
  e.estimate = static_cast<double>(e.accepted) / static_cast<double>(samples);
  e.half_width = hoeffding_half_width(samples);
  return e;
}

// Exhaustive maximum over all tables Sigma^n -> Sigma.
struct MaxAcceptance {
  Rational value;
  SymbolFunction best;
  std::uint64_t functions = 0;
};

inline constexpr double kMaxBruteForceFunctions = 1e6;

inline MaxAcceptance max_acceptance_bruteforce(const TestInstance& inst, int n) {
  const auto& sigma = inst.predicate.alphabet();
  const std::size_t cells = detail::checked_power(sigma.size(), n);
  if (std::pow(static_cast<double>(sigma.size()), static_cast<double>(cells)) > kMaxBruteForceFunctions) {
    throw SizeGuardError("exhaustive search needs |Sigma|^(|Sigma|^n) <= 1e6");
  }
  require_valid(inst, SymbolFunction::constant(sigma, n, 0));
  std::vector<int> values(cells, 0);
  MaxAcceptance best{Rational(-1), {}, 0};
  while (true) {
    const SymbolFunction f(sigma, n, values);
    const Rational v = detail::acceptance_unchecked(inst, f);
    ++best.functions;
    if (v > best.value) {
      best.value = v;
      best.best = f;
    }
    bool done = true;
    for (std::size_t t = cells; t-- > 0;) {
      if (++values[t] < sigma.size()) {
        done = false;
        break;
      }
      values[t] = 0;
    }
    if (done) break;
  }
  return best;
}

namespace fixtures {

// One constraint whose predicate is the support of mu.
inline TestInstance support_instance(const JointDistribution& mu) {
  const auto P = Predicate::from(mu.alphabet(0), mu.arity(), [&](const Atom& x) { return mu.mass(x) > 0; });
  return {P, {{Rational(1), mu}}};
}

inline TestInstance three_lin_instance() { return support_instance(three_lin()); }
inline TestInstance a5_instance() { return support_instance(a5_product()); }

}  // namespace fixtures

}  // namespace embedlens
