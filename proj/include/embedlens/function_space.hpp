#pragma once

// Complex-valued functions on Sigma^n: dense tables and coordinate-factored
// products, the noise operator, stability, and the Efron-Stein (degree)
// decomposition under a product measure.

#include "embedlens/distribution.hpp"
#include "embedlens/embedding.hpp"
#include "embedlens/errors.hpp"
#include "embedlens/rational.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace embedlens {

using Complex = std::complex<double>;

// A probability measure on one alphabet, as doubles.
using Measure = std::vector<double>;

inline constexpr std::size_t kMaxTableEntries = std::size_t{1} << 24;
inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kBoundednessSlack = 1e-12;

namespace detail {

inline std::size_t checked_power(int q, int n, std::size_t limit = kMaxTableEntries) {
  std::size_t size = 1;
  for (int i = 0; i < n; ++i) {
    if (size > limit / static_cast<std::size_t>(q)) throw SizeGuardError("table size exceeds guard");
    size *= static_cast<std::size_t>(q);
  }
  return size;
}

// Neumaier summation on both components.
class CompensatedSum {
 public:
  void add(Complex v) {
    add_part(re_, cre_, v.real());
    add_part(im_, cim_, v.imag());
  }
  Complex value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

// Calls f(base, stride) once per fiber along `axis` (axis 0 is the most
// significant digit); the fiber's entries sit at base + a * stride.
template <class F>
void for_each_fiber(std::size_t size, int q, int n, int axis, F&& f) {
  std::size_t stride = 1;
  for (int i = axis + 1; i < n; ++i) stride *= static_cast<std::size_t>(q);
  const std::size_t block = stride * static_cast<std::size_t>(q);
  for (std::size_t o = 0; o < size; o += block) {
    for (std::size_t t = 0; t < stride; ++t) f(o + t, stride);
  }
}

inline void validate_measure(const Measure& nu, int q) {
  if (static_cast<int>(nu.size()) != q) throw ValidationError("measure size does not match alphabet");
  double total = 0;
  for (double w : nu) {
    if (w < 0) throw ValidationError("negative measure weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("measure does not sum to 1");
}

}  // namespace detail

class TableFunction {
 public:
  TableFunction() = default;
  TableFunction(Alphabet alphabet, int n, std::vector<Complex> values)
      : alphabet_(std::move(alphabet)), n_(n), values_(std::move(values)) {
    if (n_ < 0) throw ValidationError("negative arity");
    if (values_.size() != detail::checked_power(alphabet_.size(), n_)) {
      throw ValidationError("table length does not equal |Sigma|^n");
    }
  }

  static TableFunction constant(Alphabet alphabet, int n, Complex c) {
    const auto size = detail::checked_power(alphabet.size(), n);
    return {std::move(alphabet), n, std::vector<Complex>(size, c)};
  }

  template <class F>
  static TableFunction from(Alphabet alphabet, int n, F&& f) {
    const auto size = detail::checked_power(alphabet.size(), n);
    std::vector<Complex> values(size);
    Atom x(static_cast<std::size_t>(n), 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
      values[idx] = f(static_cast<const Atom&>(x));
      for (std::size_t i = x.size(); i-- > 0;) {
        if (++x[i] < alphabet.size()) break;
        x[i] = 0;
      }
    }
    return {std::move(alphabet), n, std::move(values)};
  }

  int n() const { return n_; }
  int q() const { return alphabet_.size(); }
  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }
  Complex operator[](std::size_t i) const { return values_[i]; }

  std::size_t encode(const Atom& x) const {
    std::size_t idx = 0;
    for (int v : x) idx = idx * static_cast<std::size_t>(q()) + static_cast<std::size_t>(v);
    return idx;
  }
  Atom decode(std::size_t idx) const {
    Atom x(static_cast<std::size_t>(n_));
    for (std::size_t i = x.size(); i-- > 0;) {
      x[i] = static_cast<int>(idx % static_cast<std::size_t>(q()));
      idx /= static_cast<std::size_t>(q());
    }
    return x;
  }
  Complex at(const Atom& x) const { return values_[encode(x)]; }

  double sup_norm() const {
    double m = 0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  bool is_one_bounded(double slack = kBoundednessSlack) const { return sup_norm() <= 1.0 + slack; }

  TableFunction conj() const {
    TableFunction out = *this;
    for (auto& v : out.values_) v = std::conj(v);
    return out;
  }

  friend TableFunction operator*(const TableFunction& a, const TableFunction& b) {
    if (a.n_ != b.n_ || a.q() != b.q()) throw ValidationError("pointwise product shape mismatch");
    TableFunction out = a;
    for (std::size_t i = 0; i < out.values_.size(); ++i) out.values_[i] *= b.values_[i];
    return out;
  }

 private:
  Alphabet alphabet_;
  int n_ = 0;
  std::vector<Complex> values_;
};

// P(x) = prod_j factor_j(x_j).
class ProductFunction {
 public:
  ProductFunction() = default;
  ProductFunction(Alphabet alphabet, std::vector<std::vector<Complex>> factors)
      : alphabet_(std::move(alphabet)), factors_(std::move(factors)) {
    for (const auto& f : factors_) {
      if (static_cast<int>(f.size()) != alphabet_.size()) throw ValidationError("factor length does not equal |Sigma|");
    }
  }

  static ProductFunction ones(Alphabet alphabet, int n) {
    const auto q = static_cast<std::size_t>(alphabet.size());
    return {std::move(alphabet), std::vector<std::vector<Complex>>(static_cast<std::size_t>(n), std::vector<Complex>(q, 1.0))};
  }

  int n() const { return static_cast<int>(factors_.size()); }
  int q() const { return alphabet_.size(); }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<std::vector<Complex>>& factors() const { return factors_; }
  std::vector<std::vector<Complex>>& factors() { return factors_; }
  const std::vector<Complex>& factor(int j) const { return factors_.at(static_cast<std::size_t>(j)); }

  Complex evaluate(const Atom& x) const {
    Complex v = 1.0;
    for (std::size_t j = 0; j < factors_.size(); ++j) v *= factors_[j][static_cast<std::size_t>(x[j])];
    return v;
  }

  TableFunction to_table() const {
    return TableFunction::from(alphabet_, n(), [&](const Atom& x) { return evaluate(x); });
  }

  bool is_one_bounded(double slack = kBoundednessSlack) const {
    for (const auto& f : factors_) {
      for (const auto& v : f) {
        if (std::abs(v) > 1.0 + slack) return false;
      }
    }
    return true;
  }

  bool is_unimodular(double tol = kIdentityTolerance) const {
    for (const auto& f : factors_) {
      for (const auto& v : f) {
        if (std::abs(std::abs(v) - 1.0) > tol) return false;
      }
    }
    return true;
  }

 private:
  Alphabet alphabet_;
  std::vector<std::vector<Complex>> factors_;
};

// Weights of nu^{tensor n} in table order.
inline std::vector<double> product_weights(const Measure& nu, int n) {
  const int q = static_cast<int>(nu.size());
  std::vector<double> w(detail::checked_power(q, n), 1.0);
  for (int axis = 0; axis < n; ++axis) {
    detail::for_each_fiber(w.size(), q, n, axis, [&](std::size_t base, std::size_t stride) {
      for (int a = 0; a < q; ++a) w[base + static_cast<std::size_t>(a) * stride] *= nu[static_cast<std::size_t>(a)];
    });
  }
  return w;
}

// <f, g>_nu = E_{x ~ nu^n}[f(x) conj(g(x))]
inline Complex inner_product(const TableFunction& f, const TableFunction& g, const Measure& nu) {
  if (f.n() != g.n() || f.q() != g.q()) throw ValidationError("inner product shape mismatch");
  detail::validate_measure(nu, f.q());
  const auto w = product_weights(nu, f.n());
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < f.size(); ++i) sum.add(w[i] * f[i] * std::conj(g[i]));
  return sum.value();
}

inline double norm_squared(const TableFunction& f, const Measure& nu) { return inner_product(f, f, nu).real(); }

inline Complex expectation(const TableFunction& f, const Measure& nu) {
  return inner_product(f, TableFunction::constant(f.alphabet(), f.n(), 1.0), nu);
}

namespace detail {

// (T h)(y) = rho h(y) + (1 - rho) E_nu h along one axis.
inline void noise_axis(std::vector<Complex>& v, int q, int n, int axis, double rho, const Measure& nu) {
  for_each_fiber(v.size(), q, n, axis, [&](std::size_t base, std::size_t stride) {
    Complex mean = 0;
    for (int a = 0; a < q; ++a) mean += nu[static_cast<std::size_t>(a)] * v[base + static_cast<std::size_t>(a) * stride];
    for (int a = 0; a < q; ++a) {
      auto& x = v[base + static_cast<std::size_t>(a) * stride];
      x = rho * x + (1.0 - rho) * mean;
    }
  });
}

}  // namespace detail

inline TableFunction noise_apply(const TableFunction& f, double rho, const Measure& nu) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ValidationError("noise parameter must lie in [0,1]");
  detail::validate_measure(nu, f.q());
  TableFunction out = f;
  for (int axis = 0; axis < f.n(); ++axis) detail::noise_axis(out.values(), f.q(), f.n(), axis, rho, nu);
  return out;
}

// Noise applied only on the listed axes.
inline TableFunction noise_apply_on(const TableFunction& f, double rho, const Measure& nu, const std::vector<int>& axes) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ValidationError("noise parameter must lie in [0,1]");
  detail::validate_measure(nu, f.q());
  TableFunction out = f;
  for (int axis : axes) detail::noise_axis(out.values(), f.q(), f.n(), axis, rho, nu);
  return out;
}

inline double stability(const TableFunction& f, double rho, const Measure& nu) {
  const Complex s = inner_product(f, noise_apply(f, rho, nu), nu);
  if (std::abs(s.imag()) > kIdentityTolerance * std::max(1.0, std::abs(s.real()))) {
    throw std::logic_error("stability has a non-negligible imaginary part");
  }
  return s.real();
}

// Efron-Stein -------------------------------------------------------------

struct EfronSteinOptions {
  int n_max = 10;
  bool materialize = true;
};

struct EfronSteinDecomposition {
  int n = 0;
  std::vector<double> degree_weights;               // W_0..W_n
  std::map<std::uint32_t, TableFunction> components;  // bit j of the key <-> coordinate j
  bool materialized = false;
};

namespace detail {

// Visits every component f^{=S} with |S| <= max_degree by splitting each
// axis into its average and the remainder.
template <class Leaf>
void efron_stein_walk(const std::vector<Complex>& h, int axis, std::uint32_t mask, int q, int n, const Measure& nu,
                      int max_degree, Leaf& leaf) {
  if (axis == n) {
    leaf(mask, h);
    return;
  }
  std::vector<Complex> avg(h.size());
  for_each_fiber(h.size(), q, n, axis, [&](std::size_t base, std::size_t stride) {
    Complex mean = 0;
    for (int a = 0; a < q; ++a) mean += nu[static_cast<std::size_t>(a)] * h[base + static_cast<std::size_t>(a) * stride];
    for (int a = 0; a < q; ++a) avg[base + static_cast<std::size_t>(a) * stride] = mean;
  });
  if (std::popcount(mask) < max_degree) {
    std::vector<Complex> rest(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) rest[i] = h[i] - avg[i];
    efron_stein_walk(rest, axis + 1, mask | (std::uint32_t{1} << axis), q, n, nu, max_degree, leaf);
  }
  efron_stein_walk(avg, axis + 1, mask, q, n, nu, max_degree, leaf);
}

}  // namespace detail

inline EfronSteinDecomposition efron_stein(const TableFunction& f, const Measure& nu, EfronSteinOptions opts = {}) {
  detail::validate_measure(nu, f.q());
  if (f.n() > 31) throw SizeGuardError("Efron-Stein supports at most 31 coordinates");
  if (opts.materialize) {
    if (f.n() > opts.n_max) throw SizeGuardError("Efron-Stein components capped at n_max coordinates");
    if ((f.size() << f.n()) > 4 * kMaxTableEntries) throw SizeGuardError("Efron-Stein components exceed memory guard");
  }
  EfronSteinDecomposition out;
  out.n = f.n();
  out.degree_weights.assign(static_cast<std::size_t>(f.n()) + 1, 0.0);
  out.materialized = opts.materialize;
  const auto w = product_weights(nu, f.n());
  auto leaf = [&](std::uint32_t mask, const std::vector<Complex>& comp) {
    detail::CompensatedSum s;
    for (std::size_t i = 0; i < comp.size(); ++i) s.add(w[i] * std::norm(comp[i]));
    out.degree_weights[static_cast<std::size_t>(std::popcount(mask))] += s.value().real();
    if (opts.materialize) out.components.emplace(mask, TableFunction(f.alphabet(), f.n(), comp));
  };
  detail::efron_stein_walk(f.values(), 0, 0, f.q(), f.n(), nu, f.n(), leaf);
  return out;
}

inline std::vector<double> degree_weights(const TableFunction& f, const Measure& nu) {
  return efron_stein(f, nu, {.n_max = 31, .materialize = false}).degree_weights;
}

// Largest d with W_d above tol * max(1, ||f||^2).
inline int degree(const TableFunction& f, const Measure& nu, double tol = 1e-20) {
  const auto w = degree_weights(f, nu);
  double total = 0;
  for (double x : w) total += x;
  int d = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > tol * std::max(1.0, total)) d = static_cast<int>(i);
  }
  return d;
}

struct LowDegreeProjection {
  TableFunction L;
  double norm = 0;  // ||L||_2
};

inline LowDegreeProjection low_degree_project(const TableFunction& f, int d, const Measure& nu) {
  detail::validate_measure(nu, f.q());
  if (d < 0) throw ValidationError("degree must be nonnegative");
  std::vector<Complex> acc(f.size(), 0.0);
  auto leaf = [&](std::uint32_t, const std::vector<Complex>& comp) {
    for (std::size_t i = 0; i < comp.size(); ++i) acc[i] += comp[i];
  };
  detail::efron_stein_walk(f.values(), 0, 0, f.q(), f.n(), nu, d, leaf);
  LowDegreeProjection out{TableFunction(f.alphabet(), f.n(), std::move(acc)), 0.0};
  out.norm = std::sqrt(std::max(0.0, norm_squared(out.L, nu)));
  return out;
}

// Restrictions ------------------------------------------------------------

// Fixes coordinates `coords` to `values`; the result lives on the remaining
// coordinates in their original order (a 0-ary constant when all are fixed).
inline TableFunction restrict(const TableFunction& f, const std::vector<int>& coords, const std::vector<int>& values) {
  if (coords.size() != values.size()) throw ValidationError("restriction assignment length mismatch");
  std::vector<int> fixed(static_cast<std::size_t>(f.n()), -1);
  for (std::size_t t = 0; t < coords.size(); ++t) {
    const int c = coords[t];
    if (c < 0 || c >= f.n() || fixed[static_cast<std::size_t>(c)] >= 0) throw ValidationError("invalid restriction coordinate");
    if (values[t] < 0 || values[t] >= f.q()) throw ValidationError("restriction value not in alphabet");
    fixed[static_cast<std::size_t>(c)] = values[t];
  }
  const int m = f.n() - static_cast<int>(coords.size());
  return TableFunction::from(f.alphabet(), m, [&](const Atom& y) {
    Atom x(static_cast<std::size_t>(f.n()));
    std::size_t t = 0;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = fixed[j] >= 0 ? fixed[j] : y[t++];
    return f.at(x);
  });
}

// Characters --------------------------------------------------------------

namespace detail {

// exp(2 pi i r) for rational r, exact at quarter turns.
inline Complex unit_phase(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  const Integer rem = floor_mod(num, den);
  if (rem == 0) return {1.0, 0.0};
  const Rational frac(rem, den);
  if (frac == Rational(1, 2)) return {-1.0, 0.0};
  if (frac == Rational(1, 4)) return {0.0, 1.0};
  if (frac == Rational(3, 4)) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * to_double(frac);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace detail

// Default phase for Z-valued witnesses: 1/Q with Q = 1 + (max sigma - min sigma).
inline Rational default_integer_phase(const EmbeddingWitness& w) {
  Integer lo = 0, hi = 0;
  bool first = true;
  for (const auto& t : w.sigma) {
    for (const auto& v : t) {
      if (first || v < lo) lo = v;
      if (first || v > hi) hi = v;
      first = false;
    }
  }
  return Rational(Integer(1), Integer(1) + hi - lo);
}

// x -> prod_j chi(sigma_i(x_j)) with chi(t) = exp(2 pi i t / m), or
// exp(2 pi i theta t) for a Z-valued witness.
inline ProductFunction character_function(const JointDistribution& dist, const EmbeddingWitness& w, int coord, int n,
                                          std::optional<Rational> theta = std::nullopt) {
  if (!verify_witness(dist, w)) throw ValidationError("character_function needs a verified witness");
  if (coord < 0 || coord >= dist.arity()) throw ValidationError("coordinate out of range");
  Rational phase;
  if (w.modulus == 0) {
    phase = theta ? *theta : default_integer_phase(w);
  } else {
    phase = Rational(Integer(1), w.modulus);
  }
  std::vector<Complex> factor;
  for (const auto& s : w.sigma[static_cast<std::size_t>(coord)]) factor.push_back(detail::unit_phase(Rational(s) * phase));
  return {dist.alphabet(coord), std::vector<std::vector<Complex>>(static_cast<std::size_t>(n), factor)};
}

// Character with values kept exact: factor value exp(2 pi i e / modulus) is
// stored as the exponent e in [0, modulus).
struct PhaseProduct {
  Alphabet alphabet;
  Integer modulus = 1;
  std::vector<std::vector<Integer>> exponents;  // one row per coordinate

  int n() const { return static_cast<int>(exponents.size()); }

  ProductFunction to_product() const {
    std::vector<std::vector<Complex>> factors;
    for (const auto& row : exponents) {
      std::vector<Complex> f;
      for (const auto& e : row) f.push_back(detail::unit_phase(Rational(e, modulus)));
      factors.push_back(std::move(f));
    }
    return {alphabet, std::move(factors)};
  }
};

// Same function as character_function, in exponent form.
inline PhaseProduct character_phases(const JointDistribution& dist, const EmbeddingWitness& w, int coord, int n,
                                     std::optional<Rational> theta = std::nullopt) {
  if (!verify_witness(dist, w)) throw ValidationError("character_phases needs a verified witness");
  if (coord < 0 || coord >= dist.arity()) throw ValidationError("coordinate out of range");
  const Rational phase = w.modulus == 0 ? (theta ? *theta : default_integer_phase(w)) : Rational(Integer(1), w.modulus);
  const Integer num = boost::multiprecision::numerator(phase);
  const Integer den = boost::multiprecision::denominator(phase);
  std::vector<Integer> row;
  for (const auto& s : w.sigma[static_cast<std::size_t>(coord)]) row.push_back(floor_mod(Integer(s * num), den));
  return {dist.alphabet(coord), den, std::vector<std::vector<Integer>>(static_cast<std::size_t>(n), row)};
}

struct GlobalInverseReport {
  double value = 0;  // |<f, L * P>|
  int L_degree = 0;
  double L_norm = 0;
  bool degree_ok = false;
  bool norm_ok = false;
  bool unimodular_ok = false;
};

inline GlobalInverseReport global_inverse_check(const TableFunction& f, const TableFunction& L, const ProductFunction& P,
                                                const Measure& nu, int d) {
  if (f.n() != L.n() || f.n() != P.n() || f.q() != L.q() || f.q() != P.q()) {
    throw ValidationError("global inverse check shape mismatch");
  }
  GlobalInverseReport r;
  r.value = std::abs(inner_product(f, L * P.to_table(), nu));
  r.L_degree = degree(L, nu);
  r.L_norm = std::sqrt(std::max(0.0, norm_squared(L, nu)));
  r.degree_ok = r.L_degree <= d;
  r.norm_ok = r.L_norm <= 1.0 + kBoundednessSlack;
  r.unimodular_ok = P.is_unimodular();
  return r;
}

}  // namespace embedlens
