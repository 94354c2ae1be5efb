#pragma once

// Property suites behind `embedlens verify` and the acceptance binary. Each
// suite is deterministic: fixed seeds, fixed instance counts.

#include "embedlens/correlation.hpp"
#include "embedlens/dictator.hpp"
#include "embedlens/embedding.hpp"
#include "embedlens/fixtures.hpp"
#include "embedlens/function_space.hpp"
#include "embedlens/generators.hpp"
#include "embedlens/lattice.hpp"
#include "embedlens/reduction.hpp"

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace embedlens::verify {

struct SuiteResult {
  std::string name;
  int criterion = 0;
  bool passed = false;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  double seconds = 0;
  std::vector<std::string> notes;     // summary facts
  std::vector<std::string> failed;    // first few failing checks
};

namespace detail {

class Checker {
 public:
  explicit Checker(SuiteResult& r) : r_(r) {}

  bool check(bool ok, const std::string& what) {
    ++r_.checks;
    if (!ok) {
      ++r_.failures;
      if (r_.failed.size() < 10) r_.failed.push_back(what);
    }
    return ok;
  }

  void note(const std::string& s) { r_.notes.push_back(s); }

 private:
  SuiteResult& r_;
};

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

inline std::vector<std::pair<std::string, JointDistribution>> named_fixtures() {
  return {{"3-LIN", fixtures::three_lin()},
          {"Z3-sum", fixtures::z3_sum()},
          {"full-support", fixtures::full_support(3)},
          {"single-atom", fixtures::single_atom()},
          {"disconnected-pair", fixtures::disconnected_pair()}};
}

inline std::vector<AnyFunction> character_functions(const JointDistribution& d, int n) {
  const auto w = *detect_embedding(d).witness;
  std::vector<AnyFunction> fs;
  for (int i = 0; i < d.arity(); ++i) fs.emplace_back(character_function(d, w, i, n));
  return fs;
}

inline JointDistribution random_full_marginals(std::mt19937_64& rng, const std::vector<int>& sizes) {
  while (true) {
    const auto d = generators::random_weighted(rng, sizes);
    bool ok = true;
    for (int i = 0; i < d.arity(); ++i) {
      for (const auto& m : d.coordinate_masses(i)) ok = ok && m > 0;
    }
    if (ok) return d;
  }
}

}  // namespace detail

// 1. detect_embedding against the exhaustive oracle.
inline void embedding_oracle(SuiteResult& r) {
  detail::Checker c(r);
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> q(1, 3);
  std::vector<std::pair<std::string, JointDistribution>> cases = detail::named_fixtures();
  for (int t = 0; t < 200; ++t) cases.emplace_back("random #" + std::to_string(t), generators::random_support(rng, {q(rng), q(rng), q(rng)}));
  int positives = 0;
  for (const auto& [name, d] : cases) {
    const auto v = detect_embedding(d);
    const auto oracle = brute_force_embedding(d, 12);
    c.check(v.admits == oracle.has_value(), name + ": detector and oracle disagree");
    if (v.admits) {
      ++positives;
      c.check(v.witness && verify_witness(d, *v.witness), name + ": witness fails verification");
    }
  }
  c.note(std::to_string(cases.size()) + " distributions, " + std::to_string(positives) + " admit an embedding");
}

// 2. Smith normal form certificates.
inline void snf(SuiteResult& r) {
  detail::Checker c(r);
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 500; ++t) {
    const auto a = generators::random_matrix(rng, 8, 9);
    const auto s = smith_normal_form(a);
    const std::string tag = "matrix #" + std::to_string(t);
    c.check(s.U * a * s.V == s.D, tag + ": U A V != D");
    c.check(abs(determinant(s.U)) == 1 && abs(determinant(s.V)) == 1, tag + ": U or V not unimodular");
    bool diagonal = true;
    for (int i = 0; i < s.D.rows(); ++i) {
      for (int j = 0; j < s.D.cols(); ++j) diagonal = diagonal && (i == j || s.D(i, j) == 0);
    }
    bool chain = true;
    for (std::size_t i = 0; i + 1 < s.divisors.size(); ++i) {
      const auto& d = s.divisors;
      chain = chain && d[i] >= 0 && (d[i] == 0 ? d[i + 1] == 0 : Integer(d[i + 1] % d[i]) == 0);
    }
    c.check(diagonal && chain, tag + ": D is not a divisor chain");
  }
  c.note("500 matrices, dims <= 8, entries in [-9, 9]");
}

// 3. Character functions correlate perfectly yet have full-degree stability.
inline void necessity(SuiteResult& r) {
  detail::Checker c(r);
  for (const auto& [name, d] : {std::pair{std::string("3-LIN"), fixtures::three_lin()}, std::pair{std::string("Z3-sum"), fixtures::z3_sum()}}) {
    const auto w = *detect_embedding(d).witness;
    double worst = 0;
    for (int n = 1; n <= 10; ++n) {
      std::vector<PhaseProduct> phases;
      for (int i = 0; i < d.arity(); ++i) phases.push_back(character_phases(d, w, i, n));
      c.check(exact_phase_correlation(d, phases, n).is_one(), name + " n=" + std::to_string(n) + ": correlation is not exactly 1");
      const auto v = exact_correlation(d, detail::character_functions(d, n), n).value;
      worst = std::max(worst, std::abs(v - Complex(1.0)));
      c.check(std::abs(v - Complex(1.0)) <= 1e-12, name + " n=" + std::to_string(n) + ": floating value off by " + detail::fmt(std::abs(v - Complex(1.0))));
    }
    c.note(name + ": exact group-ring value 1 for n <= 10; floating-point evaluation within " + detail::fmt(worst));
    for (int n = 1; n <= 4; ++n) {
      const auto fs = detail::character_functions(d, n);
      for (double delta : {0.1, 0.5}) {
        for (int i = 0; i < d.arity(); ++i) {
          const auto table = std::get<ProductFunction>(fs[static_cast<std::size_t>(i)]).to_table();
          const double stab = stability(table, 1.0 - delta, d.coordinate_measure(i));
          const double expect = std::pow(1.0 - delta, n);
          c.check(std::abs(stab - expect) <= 1e-12, name + " n=" + std::to_string(n) + ": Stab off by " + detail::fmt(std::abs(stab - expect)));
        }
      }
    }
  }
  c.note("Stab_{1-delta} = (1-delta)^n within 1e-12 for n <= 4, delta in {0.1, 0.5}");
}

// 4. Stab_rho(f) = sum_d rho^d W_d.
inline void stability_diagonalization(SuiteResult& r) {
  detail::Checker c(r);
  std::mt19937_64 rng(404);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const int q = 2 + t % 2;
    const int n = 1 + t % 4;
    const auto nu = generators::random_measure(rng, q);
    const auto f = generators::random_table(rng, q, n);
    const auto w = degree_weights(f, nu);
    for (double rho : {0.0, 0.3, 1.0}) {
      double expect = 0;
      for (std::size_t d = 0; d < w.size(); ++d) expect += std::pow(rho, static_cast<double>(d)) * w[d];
      const double gap = std::abs(stability(f, rho, nu) - expect);
      worst = std::max(worst, gap);
      c.check(gap <= 1e-10, "function #" + std::to_string(t) + " rho=" + detail::fmt(rho) + ": gap " + detail::fmt(gap));
    }
  }
  c.note("worst gap " + detail::fmt(worst));
}

// 5. Random-restriction identity, with the restriction rate settled at n = 1.
inline void obs34(SuiteResult& r) {
  detail::Checker c(r);
  std::mt19937_64 rng(505);
  const auto lin = fixtures::three_lin();
  const Rational p_star(1, 5);
  int alpha_sq_wins = 0;
  for (int t = 0; t < 5; ++t) {
    const auto f = generators::random_table(rng, 2, 1);
    const auto res = resolve_obs34_rate(lin, f, p_star);
    c.check(res.candidates_matching == 1, "rate resolution #" + std::to_string(t) + ": " + std::to_string(res.candidates_matching) + " rates match");
    alpha_sq_wins += res.gap_alpha_squared <= 1e-12;
  }
  c.check(alpha_sq_wins == 5, "rate 1 - alpha^2 is not the exact one on every resolution run");
  c.note("n = 1 resolution: rate 1 - alpha^2 exact, rate 1 - alpha off");

  const std::vector<JointDistribution> dists{lin, fixtures::z3_sum(), fixtures::seven_atom()};
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const auto& d = dists[static_cast<std::size_t>(t) % dists.size()];
    const int n = 1 + t % 2;
    const auto f = generators::random_table(rng, d.alphabet(0).size(), n);
    const auto params = xi_params_from(d, p_star);
    const auto rep = check_obs34(params, f, params.p_nu);
    worst = std::max(worst, rep.gap);
    c.check(rep.gap <= 1e-10, "f #" + std::to_string(t) + ": gap " + detail::fmt(rep.gap));
  }
  c.note("50 random f1 at n in {1, 2}, worst gap " + detail::fmt(worst));
}

// 6. Connected mu: three parities decay as (1/7)^n.
inline void mossel_decay(SuiteResult& r) {
  detail::Checker c(r);
  const auto d = fixtures::seven_atom();
  double prev = 1.0;
  double last = 0;
  Rational power = 1;
  for (int n = 1; n <= 10; ++n) {
    power /= 7;
    // Parity as a phase product of order 2: the real value is c_0 - c_1.
    const PhaseProduct phase{Alphabet::range(2), 2, std::vector<std::vector<Integer>>(static_cast<std::size_t>(n), {0, 1})};
    const auto exact = exact_phase_correlation(d, {phase, phase, phase}, n);
    const Rational c0 = exact.coeffs.count(0) ? exact.coeffs.at(0) : Rational(0);
    const Rational c1 = exact.coeffs.count(1) ? exact.coeffs.at(1) : Rational(0);
    c.check(c0 - c1 == power, "n=" + std::to_string(n) + ": exact value is not (1/7)^n");
    const std::vector<AnyFunction> fs(3, phase.to_product());
    const auto v = exact_correlation(d, fs, n).value;
    c.check(v.imag() == 0.0 && std::abs(v.real() - to_double(power)) <= 1e-12 * to_double(power), "n=" + std::to_string(n) + ": value " + detail::fmt(v.real()));
    c.check(v.real() < prev, "n=" + std::to_string(n) + ": not strictly decaying");
    prev = v.real();
    last = v.real();
  }
  c.check(last < 1e-8, "value at n = 10 is not below 1e-8");
  c.note("exact rational value (1/7)^n for n <= 10; n = 10 value " + detail::fmt(last));
}

// 7. Dictators pass the test with probability one.
inline void dictator_completeness(SuiteResult& r) {
  detail::Checker c(r);
  for (const auto& [name, inst] : {std::pair{std::string("3-LIN"), fixtures::three_lin_instance()}, std::pair{std::string("A5"), fixtures::a5_instance()}}) {
    const auto& sigma = inst.predicate.alphabet();
    for (int n = 1; n <= 4; ++n) {
      for (int j = 0; j < n; ++j) {
        const auto f = SymbolFunction::dictator(sigma, n, j);
        c.check(run_test_exact(inst, f) == 1, name + " n=" + std::to_string(n) + " j=" + std::to_string(j) + ": exact acceptance != 1");
      }
      const auto mc = run_test_mc(inst, SymbolFunction::dictator(sigma, n, n - 1), 10000, 700 + static_cast<std::uint64_t>(n));
      c.check(mc.accepted == mc.samples, name + " n=" + std::to_string(n) + ": Monte Carlo rejected a sample");
    }
  }
  c.note("every dictator accepted exactly; 10^4 Monte Carlo samples all accept");
}

// 8. mu_{-k,-k}, its alpha^2 split, and xi.
inline void reductions(SuiteResult& r) {
  detail::Checker c(r);
  auto all = detail::named_fixtures();
  all.emplace_back("seven-atom", fixtures::seven_atom());
  all.emplace_back("A5", fixtures::a5_product());
  for (const auto& [name, d] : all) {
    c.check(check_diagonal_dominance(d).holds, name + ": diagonal dominance fails");
    try {
      const auto m = alpha_squared_mixture(d);
      std::map<Atom, Rational> sum;
      for (const auto& [x, p] : m.diagonal.atoms()) sum[x] += m.c * p;
      for (const auto& [x, p] : m.nu.atoms()) sum[x] += (1 - m.c) * p;
      bool same = sum.size() == m.mu_mk_mk.support_size();
      for (const auto& [x, p] : m.mu_mk_mk.atoms()) same = same && sum[x] == p;
      c.check(same, name + ": mixture does not reassemble");
    } catch (const NegativeMixtureError&) {
      c.check(false, name + ": alpha^2 mixture has a negative atom");
    }
  }
  // xi needs mu pairwise connected with full marginals.
  int xi_cases = 0;
  for (const auto& [name, d] : all) {
    if (!pairwise_connected(d).connected) continue;
    bool full = true;
    for (int i = 0; i < d.arity(); ++i) {
      for (const auto& m : d.coordinate_masses(i)) full = full && m > 0;
    }
    if (!full) continue;
    ++xi_cases;
    for (const Rational& ps : {Rational(1, 10), Rational(1, 2)}) {
      const auto xi = build_xi(xi_params_from(d, ps));
      c.check(pairwise_connected(xi).connected, name + " p*=" + to_string(ps) + ": xi not pairwise connected");
      const auto m = xi_mass_report(d, ps);
      c.check(m.branch_bound_holds, name + ": xi atom below the branch bound");
      c.check(m.alpha_cubed_bound_holds, name + ": xi atom below alpha^3 min(p*, 1-p*)");
    }
  }
  c.note(std::to_string(all.size()) + " fixtures for mu_{-k,-k}; " + std::to_string(xi_cases) + " pairwise-connected fixtures for xi");
  const auto lin = xi_mass_report(fixtures::three_lin(), Rational(1, 10));
  c.note(std::string("3-LIN p*=1/10: min xi atom ") + to_string(lin.min_atom) + " vs alpha^2 p* = " + to_string(lin.alpha_squared_bound));
}

// 9. Product-correlation ascent.
inline void product_ascent(SuiteResult& r) {
  detail::Checker c(r);
  std::mt19937_64 rng(909);
  for (int t = 0; t < 100; ++t) {
    const int q = 2 + t % 2;
    const auto nu = generators::random_measure(rng, q);
    const auto f = generators::random_table(rng, q, 1 + t % 4);
    const auto res = best_product_correlation(nu, f, {.restarts = 3, .seed = static_cast<std::uint64_t>(t)});
    bool monotone = true;
    for (std::size_t i = 1; i < res.history.size(); ++i) monotone = monotone && res.history[i] >= res.history[i - 1] - 1e-12;
    c.check(monotone, "instance #" + std::to_string(t) + ": objective decreased");
  }
  for (int t = 0; t < 20; ++t) {
    const auto nu = generators::random_measure(rng, 3);
    const auto P = generators::random_unimodular_product(rng, 3, 1 + t % 4);
    const auto res = best_product_correlation(nu, P.to_table(), {.seed = static_cast<std::uint64_t>(t)});
    c.check(res.value >= 1.0 - 1e-6, "unimodular product #" + std::to_string(t) + ": value " + detail::fmt(res.value));
  }
  for (const auto& d : {fixtures::three_lin(), fixtures::z3_sum()}) {
    const auto chi = std::get<ProductFunction>(detail::character_functions(d, 4)[0]).to_table();
    const auto mu1 = d.coordinate_measure(0);
    const auto res = restricted_product_correlation(chi, mu1, mu1, 0.5, 20, 11, 1 - 1e-9);
    c.check(res.probability == 1.0, "character restriction probability " + detail::fmt(res.probability));
  }
  c.note("100 monotone runs, 20 unimodular recoveries, character restrictions at threshold 1 - 1e-9");
}

// 10. Cauchy-Schwarz chains.
inline void cauchy_schwarz(SuiteResult& r) {
  detail::Checker c(r);
  std::mt19937_64 rng(1010);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 3;
    const auto d = detail::random_full_marginals(rng, {2, 3, 2});
    std::vector<TableFunction> fs;
    for (int i = 0; i < 3; ++i) fs.push_back(generators::random_table(rng, d.alphabet(i).size(), n));
    const auto chain = cauchy_schwarz_chain(d, fs, 1e-10);
    c.check(chain.chain_holds, "input #" + std::to_string(t) + ": eps^2 <= ||f~||^2 chain fails");
    const std::vector<ProductFunction> ps{generators::random_unimodular_product(rng, 3, n), generators::random_unimodular_product(rng, 2, n)};
    const auto tr = correlation_transfer(d, fs[0], ps);
    c.check(tr.gap <= 1e-10, "input #" + std::to_string(t) + ": transfer gap " + detail::fmt(tr.gap));
  }
  c.note("100 random inputs, n <= 3");
}

struct Suite {
  std::string name;
  int criterion;
  double time_limit;  // seconds; 0 means none
  std::function<void(SuiteResult&)> run;
};

inline const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {"embedding-oracle", 1, 120, embedding_oracle},
      {"snf", 2, 60, snf},
      {"necessity", 3, 0, necessity},
      {"stability-diagonalization", 4, 0, stability_diagonalization},
      {"obs34", 5, 0, obs34},
      {"mossel-decay", 6, 0, mossel_decay},
      {"dictator-completeness", 7, 0, dictator_completeness},
      {"reductions", 8, 0, reductions},
      {"product-ascent", 9, 0, product_ascent},
      {"cauchy-schwarz", 10, 0, cauchy_schwarz},
  };
  return all;
}

inline SuiteResult run_suite(const Suite& s) {
  SuiteResult r;
  r.name = s.name;
  r.criterion = s.criterion;
  const auto start = std::chrono::steady_clock::now();
  try {
    s.run(r);
  } catch (const std::exception& e) {
    ++r.failures;
    r.failed.push_back(std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (s.time_limit > 0 && r.seconds > s.time_limit) {
    ++r.failures;
    r.failed.push_back("runtime " + detail::fmt(r.seconds) + " s exceeds " + detail::fmt(s.time_limit) + " s");
  }
  r.passed = r.failures == 0;
  return r;
}

// "all" runs every suite; unknown names throw ValidationError.
inline std::vector<SuiteResult> run(const std::string& name) {
  std::vector<SuiteResult> out;
  for (const auto& s : suites()) {
    if (name == "all" || name == s.name) out.push_back(run_suite(s));
  }
  if (out.empty()) throw ValidationError("unknown suite '" + name + "'");
  return out;
}

}  // namespace embedlens::verify
