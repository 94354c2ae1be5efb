#pragma once

// Exact k-ary distributions over finite alphabets.

#include "embedlens/detail/random.hpp"
#include "embedlens/errors.hpp"
#include "embedlens/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace embedlens {

class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw ValidationError("alphabet must be non-empty");
    std::unordered_set<std::string> seen;
    for (const auto& s : symbols_) {
      if (!seen.insert(s).second) throw ValidationError("duplicate alphabet symbol '" + s + "'");
    }
  }

  // Symbols "0", "1", ..., "q-1".
  static Alphabet range(int q) {
    std::vector<std::string> s;
    for (int i = 0; i < q; ++i) s.push_back(std::to_string(i));
    return Alphabet(std::move(s));
  }

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbol(int i) const { return symbols_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  std::optional<int> find(const std::string& name) const {
    auto it = std::find(symbols_.begin(), symbols_.end(), name);
    if (it == symbols_.end()) return std::nullopt;
    return static_cast<int>(it - symbols_.begin());
  }

  int index_of(const std::string& name) const {
    auto i = find(name);
    if (!i) throw ValidationError("symbol '" + name + "' not in alphabet");
    return *i;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

// Symbol indices, one per coordinate.
using Atom = std::vector<int>;

inline std::string format_atom(const Atom& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

// Unvalidated distribution as read from a file: symbol names and masses
// exactly as given.
struct RawDistribution {
  struct Entry {
    std::vector<std::string> x;
    Rational p;
  };
  std::vector<std::vector<std::string>> alphabets;
  std::vector<Entry> atoms;
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
  Rational mass_sum = 0;
  std::optional<Rational> min_atom_mass;
};

class JointDistribution {
 public:
  using Entry = std::pair<Atom, Rational>;

  JointDistribution() = default;

  // Duplicate atoms are merged, zero-mass atoms dropped. Throws
  // ValidationError on negative mass, index out of range or mass sum != 1.
  JointDistribution(std::vector<Alphabet> alphabets, std::vector<Entry> atoms)
      : alphabets_(std::move(alphabets)) {
    if (alphabets_.empty()) throw ValidationError("distribution needs at least one coordinate");
    std::map<Atom, Rational> merged;
    for (auto& [x, p] : atoms) {
      if (x.size() != alphabets_.size()) {
        throw ValidationError("atom " + format_atom(x) + " has wrong arity");
      }
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || x[i] >= alphabets_[i].size()) {
          throw ValidationError("atom " + format_atom(x) + " is not alphabet-consistent");
        }
      }
      if (p < 0) throw ValidationError("negative mass at atom " + format_atom(x));
      merged[x] += p;
    }
    Rational total = 0;
    for (auto& [x, p] : merged) {
      total += p;
      if (p > 0) atoms_.emplace_back(x, p);
    }
    if (total != 1) throw ValidationError("mass sum != 1 (got " + to_string(total) + ")");
    if (atoms_.empty()) throw ValidationError("empty support");
  }

  static JointDistribution uniform(std::vector<Alphabet> alphabets, const std::vector<Atom>& support) {
    std::set<Atom> distinct(support.begin(), support.end());
    if (distinct.empty()) throw ValidationError("empty support");
    const Rational p(1, static_cast<long long>(distinct.size()));
    std::vector<Entry> atoms;
    for (const auto& x : distinct) atoms.emplace_back(x, p);
    return {std::move(alphabets), std::move(atoms)};
  }

  static JointDistribution from_raw(const RawDistribution& raw);

  int arity() const { return static_cast<int>(alphabets_.size()); }
  const std::vector<Alphabet>& alphabets() const { return alphabets_; }
  const Alphabet& alphabet(int i) const { return alphabets_.at(static_cast<std::size_t>(i)); }

  // Support atoms in lexicographic order.
  const std::vector<Entry>& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }

  std::vector<Atom> support() const {
    std::vector<Atom> s;
    s.reserve(atoms_.size());
    for (const auto& [x, p] : atoms_) s.push_back(x);
    return s;
  }

  Rational mass(const Atom& x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                               [](const Entry& e, const Atom& a) { return e.first < a; });
    if (it != atoms_.end() && it->first == x) return it->second;
    return 0;
  }

  std::vector<double> masses_as_double() const {
    std::vector<double> m;
    m.reserve(atoms_.size());
    for (const auto& [x, p] : atoms_) m.push_back(to_double(p));
    return m;
  }

  // Exact marginal masses of coordinate i over its whole alphabet.
  std::vector<Rational> coordinate_masses(int i) const {
    std::vector<Rational> m(static_cast<std::size_t>(alphabet(i).size()), Rational(0));
    for (const auto& [x, p] : atoms_) m[static_cast<std::size_t>(x[static_cast<std::size_t>(i)])] += p;
    return m;
  }

  std::vector<double> coordinate_measure(int i) const {
    std::vector<double> out;
    for (const auto& r : coordinate_masses(i)) out.push_back(to_double(r));
    return out;
  }

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  std::vector<Alphabet> alphabets_;
  std::vector<Entry> atoms_;
};

inline ValidationReport validate(const RawDistribution& raw) {
  ValidationReport report;
  auto fail = [&](std::string msg) {
    report.valid = false;
    report.violations.push_back(std::move(msg));
  };
  if (raw.alphabets.empty()) fail("no coordinates");
  std::vector<std::set<std::string>> sets;
  for (std::size_t i = 0; i < raw.alphabets.size(); ++i) {
    const auto& a = raw.alphabets[i];
    std::set<std::string> s(a.begin(), a.end());
    if (a.empty()) fail("alphabet " + std::to_string(i) + " is empty");
    if (s.size() != a.size()) fail("alphabet " + std::to_string(i) + " has duplicate symbols");
    sets.push_back(std::move(s));
  }
  std::map<std::vector<std::string>, Rational> merged;
  for (const auto& e : raw.atoms) {
    bool consistent = e.x.size() == raw.alphabets.size();
    for (std::size_t i = 0; consistent && i < e.x.size(); ++i) consistent = sets[i].count(e.x[i]) > 0;
    if (!consistent) {
      std::string t;
      for (const auto& s : e.x) t += (t.empty() ? "" : ",") + s;
      fail("atom (" + t + ") is not alphabet-consistent");
    }
    if (e.p < 0) fail("negative mass " + to_string(e.p));
    report.mass_sum += e.p;
    merged[e.x] += e.p;
  }
  if (report.mass_sum != 1) fail("mass sum != 1 (got " + to_string(report.mass_sum) + ")");
  for (const auto& [x, p] : merged) {
    if (p > 0 && (!report.min_atom_mass || p < *report.min_atom_mass)) report.min_atom_mass = p;
  }
  return report;
}

inline JointDistribution JointDistribution::from_raw(const RawDistribution& raw) {
  const auto report = validate(raw);
  if (!report.valid) {
    std::string msg = "invalid distribution:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw ValidationError(msg);
  }
  std::vector<Alphabet> alphabets;
  for (const auto& a : raw.alphabets) alphabets.emplace_back(a);
  std::vector<Entry> atoms;
  for (const auto& e : raw.atoms) {
    Atom x;
    for (std::size_t i = 0; i < e.x.size(); ++i) x.push_back(alphabets[i].index_of(e.x[i]));
    atoms.emplace_back(std::move(x), e.p);
  }
  return {std::move(alphabets), std::move(atoms)};
}

inline ValidationReport validate(const JointDistribution& dist) {
  ValidationReport report;
  for (const auto& [x, p] : dist.atoms()) {
    report.mass_sum += p;
    if (!report.min_atom_mass || p < *report.min_atom_mass) report.min_atom_mass = p;
  }
  return report;
}

inline Rational min_atom_mass(const JointDistribution& dist) {
  Rational best = dist.atoms().front().second;
  for (const auto& [x, p] : dist.atoms()) best = std::min(best, p);
  return best;
}

// Marginal on the listed coordinates, in the order given.
inline JointDistribution marginal(const JointDistribution& dist, const std::vector<int>& coords) {
  if (coords.empty()) throw ValidationError("marginal needs a non-empty coordinate set");
  std::set<int> distinct;
  for (int c : coords) {
    if (c < 0 || c >= dist.arity()) throw ValidationError("marginal coordinate out of range");
    if (!distinct.insert(c).second) throw ValidationError("repeated marginal coordinate");
  }
  std::vector<Alphabet> alphabets;
  for (int c : coords) alphabets.push_back(dist.alphabet(c));
  std::vector<JointDistribution::Entry> atoms;
  atoms.reserve(dist.support_size());
  for (const auto& [x, p] : dist.atoms()) {
    Atom y;
    for (int c : coords) y.push_back(x[static_cast<std::size_t>(c)]);
    atoms.emplace_back(std::move(y), p);
  }
  return {std::move(alphabets), std::move(atoms)};
}

// Conditional law of the other k-1 coordinates given x_coord = value.
inline JointDistribution condition(const JointDistribution& dist, int coord, int value) {
  if (coord < 0 || coord >= dist.arity()) throw ValidationError("condition coordinate out of range");
  if (dist.arity() < 2) throw ValidationError("conditioning needs arity >= 2");
  Rational cell = 0;
  for (const auto& [x, p] : dist.atoms()) {
    if (x[static_cast<std::size_t>(coord)] == value) cell += p;
  }
  if (cell == 0) throw ValidationError("conditioning on a zero-mass value");
  std::vector<Alphabet> alphabets;
  for (int i = 0; i < dist.arity(); ++i) {
    if (i != coord) alphabets.push_back(dist.alphabet(i));
  }
  std::vector<JointDistribution::Entry> atoms;
  for (const auto& [x, p] : dist.atoms()) {
    if (x[static_cast<std::size_t>(coord)] != value) continue;
    Atom y;
    for (int i = 0; i < dist.arity(); ++i) {
      if (i != coord) y.push_back(x[static_cast<std::size_t>(i)]);
    }
    atoms.emplace_back(std::move(y), p / cell);
  }
  return {std::move(alphabets), std::move(atoms)};
}

// Coordinates of a followed by those of b, independent.
inline JointDistribution product(const JointDistribution& a, const JointDistribution& b) {
  std::vector<Alphabet> alphabets = a.alphabets();
  alphabets.insert(alphabets.end(), b.alphabets().begin(), b.alphabets().end());
  std::vector<JointDistribution::Entry> atoms;
  for (const auto& [x, p] : a.atoms()) {
    for (const auto& [y, q] : b.atoms()) {
      Atom z = x;
      z.insert(z.end(), y.begin(), y.end());
      atoms.emplace_back(std::move(z), p * q);
    }
  }
  return {std::move(alphabets), std::move(atoms)};
}

class NegativeMixtureError : public ValidationError {
 public:
  NegativeMixtureError(Atom atom, const std::string& msg) : ValidationError(msg), atom_(std::move(atom)) {}
  const Atom& atom() const { return atom_; }

 private:
  Atom atom_;
};

// Returns nu with total = c * base + (1 - c) * nu.
inline JointDistribution decompose_mixture(const JointDistribution& total, const JointDistribution& base,
                                           const Rational& c) {
  if (c <= 0 || c >= 1) throw ValidationError("mixture weight must lie in (0,1)");
  if (total.alphabets() != base.alphabets()) throw ValidationError("mixture alphabets differ");
  std::map<Atom, Rational> rest;
  for (const auto& [x, p] : total.atoms()) rest[x] = p;
  for (const auto& [x, p] : base.atoms()) rest[x] -= c * p;
  std::vector<JointDistribution::Entry> atoms;
  for (auto& [x, r] : rest) {
    if (r < 0) {
      throw NegativeMixtureError(x, "total - c*base is negative at atom " + format_atom(x) + " (" +
                                        to_string(r) + ")");
    }
    atoms.emplace_back(x, r / (1 - c));
  }
  return {total.alphabets(), std::move(atoms)};
}

// Draws i.i.d. columns from base; a draw of n columns is one sample of
// base^{tensor n}.
class ProductPowerSampler {
 public:
  ProductPowerSampler(JointDistribution base, int n, std::uint64_t seed)
      : base_(std::move(base)), n_(n), rng_(seed) {
    if (n_ <= 0) throw ValidationError("product power needs n >= 1");
    std::vector<Rational> w;
    for (const auto& [x, p] : base_.atoms()) w.push_back(p);
    sampler_ = detail::DiscreteSampler(w);
  }

  // Support-atom indices of n fresh columns.
  std::vector<std::size_t> draw_columns() {
    std::vector<std::size_t> cols(static_cast<std::size_t>(n_));
    for (auto& c : cols) c = sampler_(rng_);
    return cols;
  }

  // k rows of length n (row i holds the i-th coordinate of every column).
  std::vector<std::vector<int>> draw() {
    const auto cols = draw_columns();
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(base_.arity()),
                                       std::vector<int>(static_cast<std::size_t>(n_)));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const Atom& x = base_.atoms()[cols[j]].first;
      for (std::size_t i = 0; i < x.size(); ++i) rows[i][j] = x[i];
    }
    return rows;
  }

  const JointDistribution& base() const { return base_; }
  int n() const { return n_; }

 private:
  JointDistribution base_;
  int n_;
  detail::Engine rng_;
  detail::DiscreteSampler sampler_;
};

}  // namespace embedlens
