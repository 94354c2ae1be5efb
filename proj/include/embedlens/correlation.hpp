#pragma once

// k-wise correlations E_{mu^n}[prod_i f_i(x_i)], exact and sampled, and the
// alternating-phase search for best-correlating product functions.

#include "embedlens/detail/random.hpp"
#include "embedlens/distribution.hpp"
#include "embedlens/errors.hpp"
#include "embedlens/function_space.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace embedlens {

enum class CorrelationMode { exact, monte_carlo };

inline std::string to_string(CorrelationMode m) { return m == CorrelationMode::exact ? "exact" : "monte-carlo"; }

struct CorrelationResult {
  Complex value{0.0, 0.0};
  CorrelationMode mode = CorrelationMode::exact;
  std::uint64_t samples = 0;
  double half_width = 0.0;
};

inline constexpr double kConfidenceFailure = 0.01;
inline constexpr double kMaxExactTerms = 1e8;

// Two-sided Hoeffding half-width at 99% for averages of 1-bounded terms.
inline double hoeffding_half_width(std::uint64_t samples) {
  if (samples == 0) return INFINITY;
  return std::sqrt(std::log(2.0 / kConfidenceFailure) / (2.0 * static_cast<double>(samples)));
}

using AnyFunction = std::variant<TableFunction, ProductFunction>;

namespace detail {

inline int function_n(const AnyFunction& f) {
  return std::visit([](const auto& g) { return g.n(); }, f);
}
inline const Alphabet& function_alphabet(const AnyFunction& f) {
  return std::visit([](const auto& g) -> const Alphabet& { return g.alphabet(); }, f);
}

inline void check_shapes(const JointDistribution& dist, const std::vector<AnyFunction>& fs, int n) {
  if (static_cast<int>(fs.size()) != dist.arity()) {
    throw ValidationError("expected " + std::to_string(dist.arity()) + " functions, got " + std::to_string(fs.size()));
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (function_n(fs[i]) != n) throw ValidationError("function " + std::to_string(i) + " has the wrong arity");
    if (!(function_alphabet(fs[i]) == dist.alphabet(static_cast<int>(i)))) {
      throw ValidationError("function " + std::to_string(i) + " is over a different alphabet");
    }
  }
}

inline TableFunction as_table(const AnyFunction& f) {
  if (const auto* t = std::get_if<TableFunction>(&f)) return *t;
  return std::get<ProductFunction>(f).to_table();
}

}  // namespace detail

inline CorrelationResult exact_correlation(const JointDistribution& dist, const std::vector<AnyFunction>& fs, int n) {
  detail::check_shapes(dist, fs, n);
  const auto masses = dist.masses_as_double();
  const auto& atoms = dist.atoms();
  const std::size_t k = fs.size();

  bool all_products = true;
  for (const auto& f : fs) all_products &= std::holds_alternative<ProductFunction>(f);
  if (all_products) {
    Complex value = 1.0;
    for (int j = 0; j < n; ++j) {
      detail::CompensatedSum col;
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        Complex term = masses[a];
        for (std::size_t i = 0; i < k; ++i) {
          term *= std::get<ProductFunction>(fs[i]).factor(j)[static_cast<std::size_t>(atoms[a].first[i])];
        }
        col.add(term);
      }
      value *= col.value();
    }
    return {value, CorrelationMode::exact, 0, 0.0};
  }

  if (std::pow(static_cast<double>(atoms.size()), n) > kMaxExactTerms) {
    throw SizeGuardError("exact correlation needs |supp|^n <= 1e8 for table inputs");
  }
  std::vector<TableFunction> tables;
  for (const auto& f : fs) tables.push_back(detail::as_table(f));

  // Depth-first over columns, carrying each row's partial table index.
  detail::CompensatedSum sum;
  std::vector<std::vector<std::size_t>> index(static_cast<std::size_t>(n) + 1, std::vector<std::size_t>(k, 0));
  std::vector<double> weight(static_cast<std::size_t>(n) + 1, 1.0);
  auto walk = [&](auto&& self, int j) -> void {
    const auto ju = static_cast<std::size_t>(j);
    if (j == n) {
      Complex term = weight[ju];
      for (std::size_t i = 0; i < k; ++i) term *= tables[i][index[ju][i]];
      sum.add(term);
      return;
    }
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      weight[ju + 1] = weight[ju] * masses[a];
      for (std::size_t i = 0; i < k; ++i) {
        index[ju + 1][i] = index[ju][i] * static_cast<std::size_t>(tables[i].q()) + static_cast<std::size_t>(atoms[a].first[i]);
      }
      self(self, j + 1);
    }
  };
  walk(walk, 0);
  return {sum.value(), CorrelationMode::exact, 0, 0.0};
}

struct MonteCarloOptions {
  unsigned threads = 1;
  std::uint64_t chunk = 4096;
};

// Samples are split into fixed-size chunks with seeds derived from (seed,
// chunk index) and summed in chunk order, so the value does not depend on
// the thread count.
namespace detail {

// Runs fn(c) for c in [0, chunks) on up to `threads` workers, round-robin.
template <class F>
void for_each_chunk(std::uint64_t chunks, unsigned threads, F&& fn) {
  const unsigned workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, chunks)));
  if (workers == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t c = w; c < chunks; c += workers) fn(c);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

inline CorrelationResult mc_correlation(const JointDistribution& dist, const std::vector<AnyFunction>& fs, int n,
                                        std::uint64_t samples, std::uint64_t seed, MonteCarloOptions opts = {}) {
  detail::check_shapes(dist, fs, n);
  if (samples == 0) throw ValidationError("Monte Carlo needs at least one sample");
  std::vector<Rational> weights;
  for (const auto& [x, p] : dist.atoms()) weights.push_back(p);
  const detail::DiscreteSampler sampler(weights);
  const auto& atoms = dist.atoms();
  const std::size_t k = fs.size();

  const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk);
  const std::uint64_t chunks = (samples + chunk - 1) / chunk;
  std::vector<Complex> partial(chunks);

  auto run_chunk = [&](std::uint64_t c) {
    detail::Engine rng(detail::derive_seed(seed, c));
    const std::uint64_t count = std::min(chunk, samples - c * chunk);
    std::vector<std::size_t> index(k);
    std::vector<Complex> prod(k);
    detail::CompensatedSum sum;
    for (std::uint64_t s = 0; s < count; ++s) {
      std::fill(index.begin(), index.end(), 0);
      std::fill(prod.begin(), prod.end(), Complex(1.0));
      for (int j = 0; j < n; ++j) {
        const Atom& x = atoms[sampler(rng)].first;
        for (std::size_t i = 0; i < k; ++i) {
          if (const auto* p = std::get_if<ProductFunction>(&fs[i])) {
            prod[i] *= p->factor(j)[static_cast<std::size_t>(x[i])];
          } else {
            index[i] = index[i] * static_cast<std::size_t>(std::get<TableFunction>(fs[i]).q()) + static_cast<std::size_t>(x[i]);
          }
        }
      }
      Complex term = 1.0;
      for (std::size_t i = 0; i < k; ++i) {
        if (const auto* t = std::get_if<TableFunction>(&fs[i])) {
          term *= (*t)[index[i]];
        } else {
          term *= prod[i];
        }
      }
      sum.add(term);
    }
    partial[c] = sum.value();
  };

  detail::for_each_chunk(chunks, opts.threads, run_chunk);
  detail::CompensatedSum total;
  for (const auto& v : partial) total.add(v);
  return {total.value() / static_cast<double>(samples), CorrelationMode::monte_carlo, samples, hoeffding_half_width(samples)};
}

// Exact phases ---------------------------------------------------------------

// Element sum_e coeffs[e] exp(2 pi i e / modulus) of the group ring Q[Z_m].
struct CyclotomicValue {
  Integer modulus = 1;
  std::map<Integer, Rational> coeffs;

  bool is_one() const { return coeffs.size() == 1 && coeffs.begin()->first == 0 && coeffs.begin()->second == 1; }

  Complex to_complex() const {
    Complex z = 0;
    for (const auto& [e, c] : coeffs) z += to_double(c) * detail::unit_phase(Rational(e, modulus));
    return z;
  }
};

// E_{mu^n}[prod_i f_i] computed in Q[Z_m] for character-type products, so
// a value of exactly one is certified without rounding.
inline CyclotomicValue exact_phase_correlation(const JointDistribution& dist, const std::vector<PhaseProduct>& fs, int n) {
  if (static_cast<int>(fs.size()) != dist.arity()) throw ValidationError("need one function per coordinate");
  const Integer m = fs.front().modulus;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    if (f.modulus != m) throw ValidationError("phase products must share a modulus");
    if (f.n() != n || !(f.alphabet == dist.alphabet(static_cast<int>(i)))) throw ValidationError("phase product " + std::to_string(i) + " has the wrong shape");
  }
  CyclotomicValue total{m, {{Integer(0), Rational(1)}}};
  for (int j = 0; j < n; ++j) {
    std::map<Integer, Rational> step;
    for (const auto& [x, p] : dist.atoms()) {
      Integer e = 0;
      for (std::size_t i = 0; i < fs.size(); ++i) e += fs[i].exponents[static_cast<std::size_t>(j)][static_cast<std::size_t>(x[i])];
      step[floor_mod(e, m)] += p;
    }
    std::map<Integer, Rational> next;
    for (const auto& [a, ca] : total.coeffs) {
      for (const auto& [b, cb] : step) next[floor_mod(Integer(a + b), m)] += ca * cb;
    }
    std::erase_if(next, [](const auto& kv) { return kv.second == 0; });
    total.coeffs = std::move(next);
  }
  return total;
}

// Product search ------------------------------------------------------------

struct ProductSearchOptions {
  int restarts = 8;
  int max_iters = 200;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

struct ProductSearchResult {
  double value = 0;
  ProductFunction P;
  std::vector<double> history;  // objective before the first sweep and after each sweep, best restart
};

namespace detail {

// Sums axis `axis` of a q^m array against factor, giving a q^(m-1) array.
inline std::vector<Complex> contract_axis(const std::vector<Complex>& v, int q, int m, int axis, const std::vector<Complex>& factor) {
  std::vector<Complex> out(v.size() / static_cast<std::size_t>(q), 0.0);
  std::size_t stride = 1;
  for (int i = axis + 1; i < m; ++i) stride *= static_cast<std::size_t>(q);
  const std::size_t block = stride * static_cast<std::size_t>(q);
  for (std::size_t o = 0, r = 0; o < v.size(); o += block, r += stride) {
    for (int a = 0; a < q; ++a) {
      const Complex fa = factor[static_cast<std::size_t>(a)];
      const std::size_t base = o + static_cast<std::size_t>(a) * stride;
      for (std::size_t t = 0; t < stride; ++t) out[r + t] += v[base + t] * fa;
    }
  }
  return out;
}

// Coefficients c_a with E[f * prod P] = sum_a P_j(a) c_a, where
// weighted = f times the product weights.
inline std::vector<Complex> coordinate_coefficients(const std::vector<Complex>& weighted, const ProductFunction& P, int j) {
  std::vector<Complex> v = weighted;
  int m = P.n();
  for (int axis = P.n() - 1; axis >= 0; --axis) {
    if (axis == j) continue;
    v = contract_axis(v, P.q(), m, axis, P.factor(axis));
    --m;
  }
  return v;
}

inline Complex product_objective(const std::vector<Complex>& weighted, const ProductFunction& P) {
  if (P.n() == 0) return weighted.front();
  const auto c = coordinate_coefficients(weighted, P, 0);
  Complex s = 0;
  for (std::size_t a = 0; a < c.size(); ++a) s += c[a] * P.factor(0)[a];
  return s;
}

}  // namespace detail

// Alternating ascent on |E_{nu^n}[f * prod_j P_j]| over unimodular factors.
inline ProductSearchResult best_product_correlation(const Measure& nu, const TableFunction& f, ProductSearchOptions opts = {}) {
  detail::validate_measure(nu, f.q());
  if (opts.restarts < 1) throw ValidationError("restarts must be positive");
  const auto w = product_weights(nu, f.n());
  std::vector<Complex> weighted(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) weighted[i] = w[i] * f[i];

  ProductSearchResult best;
  best.value = -1;
  for (int r = 0; r < opts.restarts; ++r) {
    detail::Engine rng(detail::derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    std::vector<std::vector<Complex>> factors(static_cast<std::size_t>(f.n()), std::vector<Complex>(static_cast<std::size_t>(f.q())));
    for (auto& fac : factors) {
      for (auto& v : fac) v = std::polar(1.0, 2.0 * std::numbers::pi * detail::uniform01(rng));
    }
    ProductFunction P(f.alphabet(), std::move(factors));
    std::vector<double> history{std::abs(detail::product_objective(weighted, P))};
    for (int it = 0; it < opts.max_iters && f.n() > 0; ++it) {
      for (int j = 0; j < f.n(); ++j) {
        const auto c = detail::coordinate_coefficients(weighted, P, j);
        auto& fac = P.factors()[static_cast<std::size_t>(j)];
        for (std::size_t a = 0; a < c.size(); ++a) fac[a] = std::abs(c[a]) == 0.0 ? Complex(1.0) : std::conj(c[a]) / std::abs(c[a]);
      }
      const double value = std::abs(detail::product_objective(weighted, P));
      if (value < history.back() - 1e-12 * std::max(1.0, history.back())) {
        throw std::logic_error("product ascent decreased the objective");
      }
      const double gain = value - history.back();
      history.push_back(value);
      if (gain < opts.tol) break;
    }
    if (history.back() > best.value) {
      best.value = history.back();
      best.P = std::move(P);
      best.history = std::move(history);
    }
  }
  return best;
}

struct RestrictedCorrelationResult {
  double probability = 0;
  int hits = 0;
  int trials = 0;
};

// Fraction of draws I ~_{1-delta} [n], z ~ restriction_measure^I for which
// the best product correlation of f_{I->z} under inner_measure reaches
// threshold.
inline RestrictedCorrelationResult restricted_product_correlation(const TableFunction& f, const Measure& inner_measure,
                                                                  const Measure& restriction_measure, double delta,
                                                                  int trials, std::uint64_t seed, double threshold,
                                                                  ProductSearchOptions search = {}) {
  detail::validate_measure(inner_measure, f.q());
  detail::validate_measure(restriction_measure, f.q());
  if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in [0,1]");
  if (trials < 1) throw ValidationError("trials must be positive");
  std::vector<Rational> zweights;
  for (double p : restriction_measure) zweights.push_back(Rational(static_cast<long long>(std::llround(p * 1e12)), 1000000000000LL));
  const detail::DiscreteSampler zsampler(zweights);

  RestrictedCorrelationResult out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const auto trial_seed = detail::derive_seed(seed, static_cast<std::uint64_t>(t));
    detail::Engine rng(trial_seed);
    std::vector<int> coords, values;
    for (int j = 0; j < f.n(); ++j) {
      if (detail::uniform01(rng) < 1.0 - delta) {
        coords.push_back(j);
        values.push_back(static_cast<int>(zsampler(rng)));
      }
    }
    auto opts = search;
    opts.seed = detail::derive_seed(trial_seed, 1);
    const auto r = best_product_correlation(inner_measure, restrict(f, coords, values), opts);
    if (r.value >= threshold) ++out.hits;
  }
  out.probability = static_cast<double>(out.hits) / trials;
  return out;
}

}  // namespace embedlens
