#pragma once

// The k -> k-1 reduction: the doubled distribution mu_{-k,-k}, its alpha^2
// mixture split, the three-coordinate distribution xi over
// Sigma x Sigma x Sigma+, the star-resampled function g, conditional
// expectations f~ and P~, and the product-smoothness closed form.

#include "embedlens/correlation.hpp"
#include "embedlens/distribution.hpp"
#include "embedlens/errors.hpp"
#include "embedlens/function_space.hpp"
#include "embedlens/rational.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace embedlens {

// (Sigma x Sigma) + {*}; pair (a, b) has index a*q + b, the star is last.
class StarAlphabet {
 public:
  StarAlphabet() = default;
  explicit StarAlphabet(Alphabet base) : base_(std::move(base)) {
    std::vector<std::string> names;
    for (const auto& a : base_.symbols()) {
      for (const auto& b : base_.symbols()) names.push_back("(" + a + "," + b + ")");
    }
    names.emplace_back("*");
    symbols_ = Alphabet(names);
  }

  const Alphabet& base() const { return base_; }
  const Alphabet& symbols() const { return symbols_; }
  int size() const { return symbols_.size(); }
  int star() const { return base_.size() * base_.size(); }
  int pair(int a, int b) const { return a * base_.size() + b; }
  bool is_star(int s) const { return s == star(); }
  int first(int s) const { return s / base_.size(); }
  int second(int s) const { return s % base_.size(); }

 private:
  Alphabet base_;
  Alphabet symbols_;
};

// mu_{-k,-k} -----------------------------------------------------------------

// Draw x_k ~ mu_k, then two independent (k-1)-tuples from mu given x_k.
// The result lives on (Sigma_1..Sigma_{k-1}) x (Sigma_1..Sigma_{k-1}).
inline JointDistribution build_mu_mk_mk(const JointDistribution& dist) {
  const int k = dist.arity();
  if (k < 2) throw ValidationError("mu_{-k,-k} needs arity at least 2");
  const auto last = dist.coordinate_masses(k - 1);
  std::map<int, std::vector<std::pair<Atom, Rational>>> by_last;
  for (const auto& [x, p] : dist.atoms()) {
    by_last[x.back()].emplace_back(Atom(x.begin(), x.end() - 1), p);
  }
  std::vector<Alphabet> alphabets(dist.alphabets().begin(), dist.alphabets().end() - 1);
  const auto half = alphabets;
  alphabets.insert(alphabets.end(), half.begin(), half.end());
  std::vector<JointDistribution::Entry> atoms;
  for (const auto& [v, cell] : by_last) {
    const Rational& pv = last[static_cast<std::size_t>(v)];
    for (const auto& [y, p] : cell) {
      for (const auto& [y2, p2] : cell) {
        Atom pair = y;
        pair.insert(pair.end(), y2.begin(), y2.end());
        atoms.emplace_back(std::move(pair), p * p2 / pv);
      }
    }
  }
  return {std::move(alphabets), std::move(atoms)};
}

// (y) -> (y, y) on the doubled alphabets.
inline JointDistribution diagonal_embedding(const JointDistribution& dist) {
  auto alphabets = dist.alphabets();
  const auto half = alphabets;
  alphabets.insert(alphabets.end(), half.begin(), half.end());
  std::vector<JointDistribution::Entry> atoms;
  for (const auto& [y, p] : dist.atoms()) {
    Atom pair = y;
    pair.insert(pair.end(), y.begin(), y.end());
    atoms.emplace_back(std::move(pair), p);
  }
  return {std::move(alphabets), std::move(atoms)};
}

struct AlphaMixture {
  JointDistribution mu_mk_mk;
  JointDistribution diagonal;  // diagonal copy of mu_{-k}
  Rational alpha;              // min atom mass of mu
  Rational c;                  // alpha^2
  JointDistribution nu;        // mu_mk_mk = c * diagonal + (1 - c) * nu
};

// With alpha = 1 the mixture weight is 1 and every nu satisfies the
// identity; the diagonal itself is returned.
inline AlphaMixture alpha_squared_mixture(const JointDistribution& dist) {
  AlphaMixture m;
  m.mu_mk_mk = build_mu_mk_mk(dist);
  std::vector<int> head(static_cast<std::size_t>(dist.arity() - 1));
  for (int i = 0; i < dist.arity() - 1; ++i) head[static_cast<std::size_t>(i)] = i;
  m.diagonal = diagonal_embedding(marginal(dist, head));
  m.alpha = min_atom_mass(dist);
  m.c = m.alpha * m.alpha;
  m.nu = m.c == 1 ? m.diagonal : decompose_mixture(m.mu_mk_mk, m.diagonal, m.c);
  return m;
}

struct DiagonalDominance {
  bool holds = true;
  std::optional<Atom> violation;
};

// Mass of (y, y) in mu_{-k,-k} is at least mu_{-k}(y)^2.
inline DiagonalDominance check_diagonal_dominance(const JointDistribution& dist) {
  const auto mm = build_mu_mk_mk(dist);
  std::vector<int> head(static_cast<std::size_t>(dist.arity() - 1));
  for (int i = 0; i < dist.arity() - 1; ++i) head[static_cast<std::size_t>(i)] = i;
  const auto base = marginal(dist, head);
  for (const auto& [y, p] : base.atoms()) {
    Atom pair = y;
    pair.insert(pair.end(), y.begin(), y.end());
    if (mm.mass(pair) < p * p) return {false, y};
  }
  return {};
}

// xi ---------------------------------------------------------------------------

struct XiParams {
  Rational p_nu;          // weight of the nu_1 branch
  Rational p_star;        // star probability inside the diagonal branch
  JointDistribution nu1;  // over Sigma x Sigma
  JointDistribution mu1;  // over Sigma
};

inline void validate_xi_params(const XiParams& p) {
  if (p.p_nu < 0 || p.p_nu > 1 || p.p_star < 0 || p.p_star > 1) throw ValidationError("xi probabilities must lie in [0,1]");
  if (p.mu1.arity() != 1 || p.nu1.arity() != 2) throw ValidationError("xi needs nu1 over Sigma^2 and mu1 over Sigma");
  if (!(p.nu1.alphabet(0) == p.mu1.alphabet(0)) || !(p.nu1.alphabet(1) == p.mu1.alphabet(0))) {
    throw ValidationError("nu1 and mu1 must share the alphabet");
  }
}

// p_nu = 1 - alpha^2, nu1 = marginal of nu on (x_1, x_1'), mu1 = marginal of
// mu on coordinate 1.
inline XiParams xi_params_from(const JointDistribution& dist, const Rational& p_star) {
  const auto m = alpha_squared_mixture(dist);
  const int half = dist.arity() - 1;
  return {1 - m.c, p_star, marginal(m.nu, {0, half}), marginal(dist, {0})};
}

inline JointDistribution build_xi(const XiParams& params) {
  validate_xi_params(params);
  const StarAlphabet plus(params.mu1.alphabet(0));
  std::vector<JointDistribution::Entry> atoms;
  for (const auto& [ab, p] : params.nu1.atoms()) {
    atoms.push_back({{ab[0], ab[1], plus.pair(ab[0], ab[1])}, params.p_nu * p});
  }
  for (const auto& [x, p] : params.mu1.atoms()) {
    const int a = x[0];
    atoms.push_back({{a, a, plus.pair(a, a)}, (1 - params.p_nu) * (1 - params.p_star) * p});
    atoms.push_back({{a, a, plus.star()}, (1 - params.p_nu) * params.p_star * p});
  }
  const auto& sigma = params.mu1.alphabet(0);
  return {{sigma, sigma, plus.symbols()}, std::move(atoms)};
}

// Smallest positive branch contribution: every xi atom has at least this mass.
inline Rational xi_branch_mass_bound(const XiParams& params) {
  std::optional<Rational> best;
  auto consider = [&](const Rational& v) {
    if (v > 0 && (!best || v < *best)) best = v;
  };
  consider(params.p_nu * min_atom_mass(params.nu1));
  consider((1 - params.p_nu) * (1 - params.p_star) * min_atom_mass(params.mu1));
  consider((1 - params.p_nu) * params.p_star * min_atom_mass(params.mu1));
  return best.value_or(Rational(0));
}

struct XiMassReport {
  Rational min_atom;
  Rational branch_bound;
  Rational alpha_cubed_bound;    // alpha^3 * min(p_star, 1 - p_star)
  Rational alpha_squared_bound;  // alpha^2 * p_star
  bool branch_bound_holds = false;
  bool alpha_cubed_bound_holds = false;
  bool alpha_squared_bound_holds = false;
};

// Mass bounds for xi built from mu with min atom alpha. Star atoms carry
// alpha^2 * p_star * mu_1(x), so only alpha^3 * min(p_star, 1 - p_star) is
// guaranteed; the alpha^2 * p_star figure is reported for comparison.
inline XiMassReport xi_mass_report(const JointDistribution& dist, const Rational& p_star) {
  const auto params = xi_params_from(dist, p_star);
  const auto xi = build_xi(params);
  const Rational alpha = min_atom_mass(dist);
  XiMassReport r;
  r.min_atom = min_atom_mass(xi);
  r.branch_bound = xi_branch_mass_bound(params);
  r.alpha_cubed_bound = alpha * alpha * alpha * (p_star < 1 - p_star ? p_star : 1 - p_star);
  r.alpha_squared_bound = alpha * alpha * p_star;
  r.branch_bound_holds = r.min_atom >= r.branch_bound;
  r.alpha_cubed_bound_holds = r.min_atom >= r.alpha_cubed_bound;
  r.alpha_squared_bound_holds = r.min_atom >= r.alpha_squared_bound;
  return r;
}

// Star sampling and g -----------------------------------------------------------

// Non-star entries are split into their components; each star gets a fresh
// x ~ mu1 copied to both sides.
inline std::pair<Atom, Atom> star_sample(const Atom& x_plus, const StarAlphabet& plus, const JointDistribution& mu1,
                                         detail::Engine& rng) {
  std::vector<Rational> w = mu1.coordinate_masses(0);
  const detail::DiscreteSampler sampler(w);
  Atom x(x_plus.size()), y(x_plus.size());
  for (std::size_t j = 0; j < x_plus.size(); ++j) {
    if (plus.is_star(x_plus[j])) {
      x[j] = y[j] = static_cast<int>(sampler(rng));
    } else {
      x[j] = plus.first(x_plus[j]);
      y[j] = plus.second(x_plus[j]);
    }
  }
  return {x, y};
}

inline std::pair<Atom, Atom> star_sample(const Atom& x_plus, const StarAlphabet& plus, const JointDistribution& mu1,
                                         std::uint64_t seed) {
  detail::Engine rng(seed);
  return star_sample(x_plus, plus, mu1, rng);
}

// g(x+) = E_{(x,x') ~* x+}[f1(x) conj(f1(x'))], computed by expanding one
// axis at a time from pair values to pair-or-star values.
inline TableFunction build_g(const TableFunction& f1, const Measure& mu1) {
  detail::validate_measure(mu1, f1.q());
  const int q = f1.q();
  const int n = f1.n();
  const std::size_t q2 = static_cast<std::size_t>(q) * static_cast<std::size_t>(q);
  const std::size_t qp = q2 + 1;
  detail::checked_power(static_cast<int>(qp), n);

  // Pair table: digit j is a_j * q + b_j, value f1(a) conj(f1(b)).
  std::vector<Complex> h(detail::checked_power(static_cast<int>(q2), n));
  for (std::size_t idx = 0; idx < h.size(); ++idx) {
    std::size_t rest = idx, ia = 0, ib = 0, scale = 1;
    for (int j = n - 1; j >= 0; --j) {
      const std::size_t d = rest % q2;
      rest /= q2;
      ia += (d / static_cast<std::size_t>(q)) * scale;
      ib += (d % static_cast<std::size_t>(q)) * scale;
      scale *= static_cast<std::size_t>(q);
    }
    h[idx] = f1[ia] * std::conj(f1[ib]);
  }
  std::size_t outer = 1;
  for (int j = 0; j < n; ++j) {
    std::size_t inner = 1;
    for (int t = j + 1; t < n; ++t) inner *= q2;
    std::vector<Complex> next(outer * qp * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < inner; ++i) {
        Complex star = 0;
        for (std::size_t d = 0; d < q2; ++d) {
          const Complex v = h[(o * q2 + d) * inner + i];
          next[(o * qp + d) * inner + i] = v;
          if (d / static_cast<std::size_t>(q) == d % static_cast<std::size_t>(q)) star += mu1[d / static_cast<std::size_t>(q)] * v;
        }
        next[(o * qp + q2) * inner + i] = star;
      }
    }
    h = std::move(next);
    outer *= qp;
  }
  return {StarAlphabet(f1.alphabet()).symbols(), n, std::move(h)};
}

// Restriction identity -----------------------------------------------------

struct Obs34Report {
  Complex lhs;
  double rhs = 0;
  double gap = 0;
};

inline constexpr int kObs34MaxN = 3;

// lhs = E_{xi^n}[f1(x) conj(f1(x')) conj(g(x+))]
// rhs = E_{I ~_rate [n]} E_{(z,z') ~ nu1^I}[Stab_{1-p_star}((f1)_{I->z} conj((f1)_{I->z'}))]
// with Stab under mu1.
inline Obs34Report check_obs34(const XiParams& params, const TableFunction& f1, const Rational& restriction_rate) {
  validate_xi_params(params);
  const int n = f1.n();
  if (n > kObs34MaxN) throw SizeGuardError("restriction identity check enumerates exactly and needs n <= 3");
  if (!(f1.alphabet() == params.mu1.alphabet(0))) throw ValidationError("f1 must be over the alphabet of mu1");
  if (restriction_rate < 0 || restriction_rate > 1) throw ValidationError("restriction rate must lie in [0,1]");
  const Measure mu1 = params.mu1.coordinate_measure(0);
  const double rho = 1.0 - to_double(params.p_star);
  const double rate = to_double(restriction_rate);

  const auto xi = build_xi(params);
  const auto g = build_g(f1, mu1);
  const std::vector<AnyFunction> fs{f1, f1.conj(), g.conj()};
  Obs34Report r;
  r.lhs = exact_correlation(xi, fs, n).value;

  const auto nu_atoms = params.nu1.atoms();
  const auto nu_mass = params.nu1.masses_as_double();
  detail::CompensatedSum rhs;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    std::vector<int> coords;
    for (int j = 0; j < n; ++j) {
      if (mask & (std::uint32_t{1} << j)) coords.push_back(j);
    }
    const int m = static_cast<int>(coords.size());
    const double p_subset = std::pow(rate, m) * std::pow(1.0 - rate, n - m);
    if (p_subset == 0.0) continue;
    // Odometer over nu1-atom choices for the restricted coordinates.
    std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
    while (true) {
      std::vector<int> z, z2;
      double w = p_subset;
      for (std::size_t t = 0; t < pick.size(); ++t) {
        z.push_back(nu_atoms[pick[t]].first[0]);
        z2.push_back(nu_atoms[pick[t]].first[1]);
        w *= nu_mass[pick[t]];
      }
      const auto h = restrict(f1, coords, z) * restrict(f1, coords, z2).conj();
      rhs.add(w * stability(h, rho, mu1));
      std::size_t t = 0;
      while (t < pick.size() && ++pick[t] == nu_atoms.size()) pick[t++] = 0;
      if (t == pick.size()) break;
    }
  }
  r.rhs = rhs.value().real();
  r.gap = std::abs(r.lhs - Complex(r.rhs));
  return r;
}

inline Obs34Report check_obs34(const JointDistribution& dist, const TableFunction& f1, const Rational& restriction_rate,
                               const Rational& p_star) {
  return check_obs34(xi_params_from(dist, p_star), f1, restriction_rate);
}

struct RateResolution {
  Rational alpha;
  Rational rate_alpha_squared;  // 1 - alpha^2
  Rational rate_alpha;          // 1 - alpha
  double gap_alpha_squared = 0;
  double gap_alpha = 0;
  int candidates_matching = 0;
};

// Runs the n = 1 identity at both candidate rates.
inline RateResolution resolve_obs34_rate(const JointDistribution& dist, const TableFunction& f1, const Rational& p_star,
                                         double tol = 1e-12) {
  if (f1.n() != 1) throw ValidationError("rate resolution runs at n = 1");
  RateResolution r;
  r.alpha = min_atom_mass(dist);
  r.rate_alpha_squared = 1 - r.alpha * r.alpha;
  r.rate_alpha = 1 - r.alpha;
  const auto params = xi_params_from(dist, p_star);
  r.gap_alpha_squared = check_obs34(params, f1, r.rate_alpha_squared).gap;
  r.gap_alpha = check_obs34(params, f1, r.rate_alpha).gap;
  r.candidates_matching = (r.gap_alpha_squared <= tol) + (r.gap_alpha <= tol);
  return r;
}

// Conditional expectations -------------------------------------------------------

// f~(x) = E_{mu^n}[prod_{i<k} f_i(x_i) | x_k = x].
inline TableFunction tilde_f(const JointDistribution& dist, const std::vector<TableFunction>& fs) {
  const int k = dist.arity();
  if (k < 2 || static_cast<int>(fs.size()) != k - 1) throw ValidationError("tilde_f needs k-1 functions for arity k >= 2");
  const int n = fs.front().n();
  for (int i = 0; i < k - 1; ++i) {
    if (fs[static_cast<std::size_t>(i)].n() != n || !(fs[static_cast<std::size_t>(i)].alphabet() == dist.alphabet(i))) {
      throw ValidationError("tilde_f input " + std::to_string(i) + " has the wrong shape");
    }
  }
  const auto last = dist.coordinate_measure(k - 1);
  for (double w : last) {
    if (w == 0.0) throw ValidationError("tilde_f conditions on a zero-probability symbol of the last coordinate");
  }
  const auto& atoms = dist.atoms();
  if (std::pow(static_cast<double>(atoms.size()), n) > kMaxExactTerms) throw SizeGuardError("tilde_f needs |supp|^n <= 1e8");
  const auto masses = dist.masses_as_double();
  const int qk = dist.alphabet(k - 1).size();
  std::vector<Complex> num(detail::checked_power(qk, n), 0.0);
  std::vector<double> den(num.size(), 0.0);
  const std::size_t km = static_cast<std::size_t>(k - 1);
  std::vector<std::vector<std::size_t>> index(static_cast<std::size_t>(n) + 1, std::vector<std::size_t>(km + 1, 0));
  std::vector<double> weight(static_cast<std::size_t>(n) + 1, 1.0);
  auto walk = [&](auto&& self, int j) -> void {
    const auto ju = static_cast<std::size_t>(j);
    if (j == n) {
      Complex term = weight[ju];
      for (std::size_t i = 0; i < km; ++i) term *= fs[i][index[ju][i]];
      num[index[ju][km]] += term;
      den[index[ju][km]] += weight[ju];
      return;
    }
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      weight[ju + 1] = weight[ju] * masses[a];
      for (std::size_t i = 0; i <= km; ++i) {
        index[ju + 1][i] = index[ju][i] * static_cast<std::size_t>(dist.alphabet(static_cast<int>(i)).size()) +
                           static_cast<std::size_t>(atoms[a].first[i]);
      }
      self(self, j + 1);
    }
  };
  walk(walk, 0);
  for (std::size_t x = 0; x < num.size(); ++x) num[x] /= den[x];
  return {dist.alphabet(k - 1), n, std::move(num)};
}

// P~(x) = E[prod_{i>=2} P_i(x_i) | x_1 = x], factor by factor. Symbols of
// zero mass under mu_1 get factor value 0.
inline ProductFunction tilde_P(const JointDistribution& dist, const std::vector<ProductFunction>& ps) {
  const int k = dist.arity();
  if (k < 2 || static_cast<int>(ps.size()) != k - 1) throw ValidationError("tilde_P needs k-1 products for arity k >= 2");
  const int n = ps.front().n();
  for (int i = 1; i < k; ++i) {
    const auto& P = ps[static_cast<std::size_t>(i - 1)];
    if (P.n() != n || !(P.alphabet() == dist.alphabet(i))) throw ValidationError("tilde_P input has the wrong shape");
  }
  const auto first = dist.coordinate_measure(0);
  const auto masses = dist.masses_as_double();
  const auto q1 = static_cast<std::size_t>(dist.alphabet(0).size());
  std::vector<std::vector<Complex>> factors(static_cast<std::size_t>(n), std::vector<Complex>(q1, 0.0));
  for (int j = 0; j < n; ++j) {
    auto& fac = factors[static_cast<std::size_t>(j)];
    for (std::size_t a = 0; a < dist.atoms().size(); ++a) {
      const Atom& x = dist.atoms()[a].first;
      Complex term = masses[a];
      for (int i = 1; i < k; ++i) term *= ps[static_cast<std::size_t>(i - 1)].factor(j)[static_cast<std::size_t>(x[static_cast<std::size_t>(i)])];
      fac[static_cast<std::size_t>(x[0])] += term;
    }
    for (std::size_t a = 0; a < q1; ++a) fac[a] = first[a] > 0 ? fac[a] / first[a] : Complex(0.0);
  }
  return {dist.alphabet(0), std::move(factors)};
}

struct CauchySchwarzReport {
  double epsilon = 0;          // |E prod_i f_i|
  double tilde_norm_sq = 0;    // ||f~_k||^2 under mu_k
  double tilde_corr = 0;       // |E[prod_{i<k} f_i conj(f~_k(x_k))]|
  bool chain_holds = false;    // epsilon^2 <= ||f~||^2 and ||f~||^2 == tilde_corr
};

inline CauchySchwarzReport cauchy_schwarz_chain(const JointDistribution& dist, const std::vector<TableFunction>& fs,
                                                double tol = 1e-10) {
  const int k = dist.arity();
  if (static_cast<int>(fs.size()) != k) throw ValidationError("cauchy_schwarz_chain needs k functions");
  const int n = fs.front().n();
  std::vector<AnyFunction> all(fs.begin(), fs.end());
  CauchySchwarzReport r;
  r.epsilon = std::abs(exact_correlation(dist, all, n).value);
  const auto ft = tilde_f(dist, std::vector<TableFunction>(fs.begin(), fs.end() - 1));
  r.tilde_norm_sq = norm_squared(ft, dist.coordinate_measure(k - 1));
  std::vector<AnyFunction> with_tilde(fs.begin(), fs.end() - 1);
  with_tilde.emplace_back(ft.conj());
  r.tilde_corr = std::abs(exact_correlation(dist, with_tilde, n).value);
  r.chain_holds = r.epsilon * r.epsilon <= r.tilde_norm_sq + tol && std::abs(r.tilde_norm_sq - r.tilde_corr) <= tol;
  return r;
}

struct CorrelationTransfer {
  double direct = 0;    // |E[f(x_1) prod_{i>=2} P_i(x_i)]|
  double via_tilde = 0; // |E_{mu_1^n}[f P~]|
  double gap = 0;
};

inline CorrelationTransfer correlation_transfer(const JointDistribution& dist, const TableFunction& f,
                                                const std::vector<ProductFunction>& ps) {
  std::vector<AnyFunction> fs{f};
  for (const auto& P : ps) fs.emplace_back(P);
  CorrelationTransfer t;
  t.direct = std::abs(exact_correlation(dist, fs, f.n()).value);
  const auto pt = tilde_P(dist, ps);
  // inner_product conjugates its second argument.
  t.via_tilde = std::abs(inner_product(f, pt.to_table().conj(), dist.coordinate_measure(0)));
  t.gap = std::abs(t.direct - t.via_tilde);
  return t;
}

// Product smoothness -------------------------------------------------------------

// E_{x ~ mu^n, y ~_{1-gamma} x}|P(x) - P(y)|^2
//   = 2 prod_j ||P_j||^2 - 2 prod_j [(1 - gamma) ||P_j||^2 + gamma |E P_j|^2].
inline double product_smoothness(const ProductFunction& P, const Measure& mu, double gamma) {
  detail::validate_measure(mu, P.q());
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in [0,1]");
  double norms = 1.0, cross = 1.0;
  for (const auto& fac : P.factors()) {
    double sq = 0;
    Complex mean = 0;
    for (std::size_t a = 0; a < fac.size(); ++a) {
      sq += mu[a] * std::norm(fac[a]);
      mean += mu[a] * fac[a];
    }
    norms *= sq;
    cross *= (1.0 - gamma) * sq + gamma * std::norm(mean);
  }
  return std::max(0.0, 2.0 * norms - 2.0 * cross);
}

// Direct enumeration over (x, y) pairs; small n only.
inline double product_smoothness_bruteforce(const ProductFunction& P, const Measure& mu, double gamma) {
  detail::validate_measure(mu, P.q());
  const auto table = P.to_table();
  const auto w = product_weights(mu, P.n());
  if (table.size() > 4096) throw SizeGuardError("brute-force smoothness is limited to 4096 points");
  detail::CompensatedSum sum;
  for (std::size_t x = 0; x < table.size(); ++x) {
    const Atom ax = table.decode(x);
    for (std::size_t y = 0; y < table.size(); ++y) {
      const Atom ay = table.decode(y);
      double kernel = 1.0;
      for (std::size_t j = 0; j < ax.size(); ++j) {
        kernel *= gamma * mu[static_cast<std::size_t>(ay[j])] + (ax[j] == ay[j] ? 1.0 - gamma : 0.0);
      }
      sum.add(w[x] * kernel * std::norm(table[x] - table[y]));
    }
  }
  return sum.value().real();
}

struct StabilityTransferReport {
  double delta = 0;  // |E[f(x_1) prod P_i(x_i)]|
  double gamma = 0;
  double stability = 0;
  double bound = 0;  // delta^2 / 4
  bool holds = false;
};

// gamma = c delta^2 / max(log(1/delta), 1), which never exceeds
// c delta^2 / log(1/delta).
inline StabilityTransferReport stability_transfer_check(const JointDistribution& dist, const TableFunction& f,
                                                        const std::vector<ProductFunction>& ps, double c = 1e-2) {
  if (!(c > 0.0)) throw ValidationError("c must be positive");
  std::vector<AnyFunction> fs{f};
  for (const auto& P : ps) fs.emplace_back(P);
  StabilityTransferReport r;
  r.delta = std::abs(exact_correlation(dist, fs, f.n()).value);
  r.bound = r.delta * r.delta / 4.0;
  if (r.delta <= 0.0) {
    r.holds = true;
    return r;
  }
  r.gamma = std::min(1.0, c * r.delta * r.delta / std::max(std::log(1.0 / r.delta), 1.0));
  r.stability = stability(f, 1.0 - r.gamma, dist.coordinate_measure(0));
  r.holds = r.stability >= r.bound - 1e-12;
  return r;
}

}  // namespace embedlens
