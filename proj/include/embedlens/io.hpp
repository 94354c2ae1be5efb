#pragma once

// JSON readers and writers for distributions, witnesses, functions,
// dictatorship-test instances and correlation results. Structural problems
// raise ParseError; well-formed files with invalid content raise
// ValidationError from the owning type.

#include "embedlens/correlation.hpp"
#include "embedlens/dictator.hpp"
#include "embedlens/distribution.hpp"
#include "embedlens/embedding.hpp"
#include "embedlens/errors.hpp"
#include "embedlens/function_space.hpp"
#include "embedlens/rational.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace embedlens::io {

using Json = nlohmann::ordered_json;

inline Json parse_json(const std::string& text, const std::string& origin = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing \"" + key + "\"");
  return *it;
}

// Runs fn, converting nlohmann type errors into ParseError.
template <class F>
auto guarded(const std::string& where, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline std::vector<std::string> symbols(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of symbols");
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (s.is_string()) {
      out.push_back(s.get<std::string>());
    } else if (s.is_number_integer()) {
      out.push_back(std::to_string(s.get<long long>()));
    } else {
      throw ParseError(where + ": symbols must be strings or integers");
    }
  }
  return out;
}

inline std::string symbol(const Json& s, const std::string& where) {
  if (s.is_string()) return s.get<std::string>();
  if (s.is_number_integer()) return std::to_string(s.get<long long>());
  throw ParseError(where + ": symbols must be strings or integers");
}

inline int symbol_index(const Alphabet& a, const std::string& s, const std::string& where) {
  const auto i = a.find(s);
  if (!i) throw ValidationError(where + ": symbol \"" + s + "\" is not in the alphabet");
  return *i;
}

}  // namespace detail

// Integers and rationals ----------------------------------------------------

inline Integer integer_from_json(const Json& j, const std::string& where = "integer") {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos) {
      throw ParseError(where + ": \"" + s + "\" is not an integer");
    }
    return Integer(s);
  }
  throw ParseError(where + ": expected an integer");
}

inline Json integer_to_json(const Integer& v) {
  if (fits_int64(v)) return v.convert_to<std::int64_t>();
  return v.str();
}

// [num, den]; a bare integer is accepted as den = 1.
inline Rational rational_from_json(const Json& j, const std::string& where = "rational") {
  if (j.is_array()) {
    if (j.size() != 2) throw ParseError(where + ": rationals are [num, den]");
    const Integer num = integer_from_json(j[0], where);
    const Integer den = integer_from_json(j[1], where);
    if (den == 0) throw ParseError(where + ": zero denominator");
    return make_rational(num, den);
  }
  return Rational(integer_from_json(j, where));
}

inline Json rational_to_json(const Rational& r) {
  return Json::array({integer_to_json(boost::multiprecision::numerator(r)), integer_to_json(boost::multiprecision::denominator(r))});
}

// "a/b", "a" or an exact decimal such as "0.125".
inline Rational rational_from_string(const std::string& text) {
  const auto bad = [&] { return ParseError("\"" + text + "\" is not a rational number"); };
  const auto integer = [&](const std::string& s) {
    const std::size_t start = !s.empty() && (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos) throw bad();
    return Integer(s[0] == '+' ? s.substr(1) : s);
  };
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const Integer den = integer(text.substr(slash + 1));
    if (den == 0) throw bad();
    return make_rational(integer(text.substr(0, slash)), den);
  }
  if (const auto dot = text.find('.'); dot != std::string::npos) {
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos) throw bad();
    std::string whole = text.substr(0, dot);
    const bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const Integer mag = abs(integer(whole)) * scale + Integer(frac);
    return make_rational(negative ? Integer(-mag) : mag, scale);
  }
  return Rational(integer(text));
}

inline Complex complex_from_json(const Json& j, const std::string& where = "complex") {
  return detail::guarded(where, [&] {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2) throw ParseError(where + ": complex values are [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
  });
}

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

// Distributions -------------------------------------------------------------

inline RawDistribution raw_distribution_from_json(const Json& j) {
  const std::string where = "distribution";
  RawDistribution raw;
  const auto& alphabets = detail::field(j, "alphabets", where);
  if (!alphabets.is_array()) throw ParseError(where + ": \"alphabets\" must be an array");
  for (const auto& a : alphabets) raw.alphabets.push_back(detail::symbols(a, where + " alphabet"));
  const auto& atoms = detail::field(j, "atoms", where);
  if (!atoms.is_array()) throw ParseError(where + ": \"atoms\" must be an array");
  for (const auto& a : atoms) {
    raw.atoms.push_back({detail::symbols(detail::field(a, "x", where + " atom"), where + " atom"),
                         rational_from_json(detail::field(a, "p", where + " atom"), where + " atom mass")});
  }
  return raw;
}

inline JointDistribution distribution_from_json(const Json& j) { return JointDistribution::from_raw(raw_distribution_from_json(j)); }

inline Json distribution_to_json(const JointDistribution& d) {
  Json alphabets = Json::array();
  for (const auto& a : d.alphabets()) alphabets.push_back(a.symbols());
  Json atoms = Json::array();
  for (const auto& [x, p] : d.atoms()) {
    Json xs = Json::array();
    for (std::size_t i = 0; i < x.size(); ++i) xs.push_back(d.alphabet(static_cast<int>(i)).symbol(x[i]));
    atoms.push_back(Json{{"x", xs}, {"p", rational_to_json(p)}});
  }
  return Json{{"alphabets", alphabets}, {"atoms", atoms}};
}

// Witnesses -------------------------------------------------------------------

inline Json witness_to_json(const EmbeddingWitness& w, const std::vector<Alphabet>& alphabets) {
  Json sigma = Json::array();
  for (std::size_t i = 0; i < w.sigma.size(); ++i) {
    Json m = Json::object();
    for (std::size_t a = 0; a < w.sigma[i].size(); ++a) m[alphabets[i].symbol(static_cast<int>(a))] = integer_to_json(w.sigma[i][a]);
    sigma.push_back(m);
  }
  return Json{{"modulus", integer_to_json(w.modulus)}, {"sigma", sigma}};
}

inline EmbeddingWitness witness_from_json(const Json& j, const std::vector<Alphabet>& alphabets) {
  const std::string where = "witness";
  EmbeddingWitness w;
  w.modulus = integer_from_json(detail::field(j, "modulus", where), where + " modulus");
  const auto& sigma = detail::field(j, "sigma", where);
  if (!sigma.is_array() || sigma.size() != alphabets.size()) throw ParseError(where + ": \"sigma\" needs one map per coordinate");
  for (std::size_t i = 0; i < alphabets.size(); ++i) {
    if (!sigma[i].is_object()) throw ParseError(where + ": sigma entries are objects");
    std::vector<Integer> values(static_cast<std::size_t>(alphabets[i].size()), Integer(0));
    std::vector<bool> seen(values.size(), false);
    for (const auto& [key, v] : sigma[i].items()) {
      const int a = detail::symbol_index(alphabets[i], key, where);
      values[static_cast<std::size_t>(a)] = integer_from_json(v, where);
      seen[static_cast<std::size_t>(a)] = true;
    }
    for (std::size_t a = 0; a < seen.size(); ++a) {
      if (!seen[a]) throw ValidationError(where + ": coordinate " + std::to_string(i) + " misses symbol \"" + alphabets[i].symbol(static_cast<int>(a)) + "\"");
    }
    w.sigma.push_back(std::move(values));
  }
  return w;
}

// Functions -------------------------------------------------------------------

inline ProductFunction product_from_json(const Json& j) {
  const std::string where = "product function";
  const auto& factors = detail::field(j, "factors", where);
  if (!factors.is_array()) throw ParseError(where + ": \"factors\" must be an array");
  // Without an explicit alphabet, symbol order follows the first factor.
  Alphabet alphabet;
  if (j.contains("alphabet")) {
    alphabet = Alphabet(detail::symbols(j["alphabet"], where));
  } else {
    if (factors.empty() || !factors[0].is_object()) throw ParseError(where + ": needs \"alphabet\" or a first factor");
    std::vector<std::string> names;
    for (const auto& [key, v] : factors[0].items()) names.push_back(key);
    alphabet = Alphabet(names);
  }
  std::vector<std::vector<Complex>> out;
  for (const auto& f : factors) {
    if (!f.is_object()) throw ParseError(where + ": factors are objects {symbol: [re, im]}");
    std::vector<Complex> values(static_cast<std::size_t>(alphabet.size()));
    std::vector<bool> seen(values.size(), false);
    for (const auto& [key, v] : f.items()) {
      const int a = detail::symbol_index(alphabet, key, where);
      values[static_cast<std::size_t>(a)] = complex_from_json(v, where);
      seen[static_cast<std::size_t>(a)] = true;
    }
    for (bool s : seen) {
      if (!s) throw ValidationError(where + ": every factor must cover the whole alphabet");
    }
    out.push_back(std::move(values));
  }
  if (j.contains("n") && detail::guarded(where, [&] { return j["n"].get<int>(); }) != static_cast<int>(out.size())) {
    throw ValidationError(where + ": \"n\" disagrees with the number of factors");
  }
  return {alphabet, std::move(out)};
}

inline TableFunction table_from_json(const Json& j) {
  const std::string where = "function";
  const int n = detail::guarded(where, [&] { return detail::field(j, "n", where).get<int>(); });
  const Alphabet alphabet(detail::symbols(detail::field(j, "alphabet", where), where));
  const auto& values = detail::field(j, "values", where);
  if (!values.is_array()) throw ParseError(where + ": \"values\" must be an array");
  std::vector<Complex> v;
  for (const auto& z : values) v.push_back(complex_from_json(z, where));
  return {alphabet, n, std::move(v)};
}

inline AnyFunction function_from_json(const Json& j) {
  if (j.is_object() && j.contains("factors")) return product_from_json(j);
  return table_from_json(j);
}

inline Json function_to_json(const TableFunction& f) {
  Json values = Json::array();
  for (const auto& z : f.values()) values.push_back(complex_to_json(z));
  return Json{{"n", f.n()}, {"alphabet", f.alphabet().symbols()}, {"values", values}};
}

inline Json function_to_json(const ProductFunction& P) {
  Json factors = Json::array();
  for (const auto& fac : P.factors()) {
    Json m = Json::object();
    for (std::size_t a = 0; a < fac.size(); ++a) m[P.alphabet().symbol(static_cast<int>(a))] = complex_to_json(fac[a]);
    factors.push_back(m);
  }
  return Json{{"n", P.n()}, {"alphabet", P.alphabet().symbols()}, {"factors", factors}};
}

inline Json function_to_json(const AnyFunction& f) {
  return std::visit([](const auto& g) { return function_to_json(g); }, f);
}

// A measure is either a list of weights or {symbol: weight}.
inline Measure measure_from_json(const Json& j, const Alphabet& alphabet) {
  const std::string where = "measure";
  Measure mu(static_cast<std::size_t>(alphabet.size()), 0.0);
  detail::guarded(where, [&] {
    if (j.is_array()) {
      if (j.size() != mu.size()) throw ValidationError(where + ": needs one weight per symbol");
      for (std::size_t a = 0; a < mu.size(); ++a) mu[a] = j[a].get<double>();
    } else if (j.is_object()) {
      for (const auto& [key, v] : j.items()) mu[static_cast<std::size_t>(detail::symbol_index(alphabet, key, where))] = v.get<double>();
    } else {
      throw ParseError(where + ": expected an array or an object");
    }
    return 0;
  });
  ::embedlens::detail::validate_measure(mu, alphabet.size());
  return mu;
}

// Dictatorship-test instances ------------------------------------------------------

inline TestInstance instance_from_json(const Json& j) {
  const std::string where = "instance";
  const auto& pred = detail::field(j, "predicate", where);
  const Alphabet sigma(detail::symbols(detail::field(pred, "alphabet", where + " predicate"), where + " predicate"));
  const int k = detail::guarded(where, [&] { return detail::field(pred, "k", where + " predicate").get<int>(); });
  const auto truth = detail::guarded(where, [&] { return detail::field(pred, "truth", where + " predicate").get<std::vector<int>>(); });
  std::vector<std::uint8_t> bits;
  for (int t : truth) {
    if (t != 0 && t != 1) throw ValidationError(where + ": truth values must be 0 or 1");
    bits.push_back(static_cast<std::uint8_t>(t));
  }
  TestInstance inst{Predicate(sigma, k, std::move(bits)), {}};
  const auto& constraints = detail::field(j, "constraints", where);
  if (!constraints.is_array()) throw ParseError(where + ": \"constraints\" must be an array");
  for (const auto& c : constraints) {
    const Rational w = rational_from_json(detail::field(c, "w", where + " constraint"), where + " weight");
    const auto& mu = detail::field(c, "mu", where + " constraint");
    // "mu" is either a list of atoms over Sigma^k or a full distribution object.
    Json dist = mu;
    if (mu.is_array()) {
      dist = Json{{"alphabets", Json::array()}, {"atoms", mu}};
      for (int i = 0; i < k; ++i) dist["alphabets"].push_back(sigma.symbols());
    }
    inst.constraints.push_back({w, distribution_from_json(dist)});
  }
  return inst;
}

inline Json instance_to_json(const TestInstance& inst) {
  const auto& P = inst.predicate;
  Json truth = Json::array();
  for (auto t : P.truth()) truth.push_back(static_cast<int>(t));
  Json constraints = Json::array();
  for (const auto& c : inst.constraints) constraints.push_back(Json{{"w", rational_to_json(c.weight)}, {"mu", distribution_to_json(c.mu)["atoms"]}});
  return Json{{"predicate", {{"alphabet", P.alphabet().symbols()}, {"k", P.k()}, {"truth", truth}}}, {"constraints", constraints}};
}

// Sigma^n -> Sigma maps: {"n", "alphabet", "map": [symbol, ...]} in
// lexicographic order, or {"n", "alphabet", "dictator": j}.
inline SymbolFunction symbol_function_from_json(const Json& j) {
  const std::string where = "symbol function";
  const int n = detail::guarded(where, [&] { return detail::field(j, "n", where).get<int>(); });
  const Alphabet sigma(detail::symbols(detail::field(j, "alphabet", where), where));
  if (j.contains("dictator")) {
    return SymbolFunction::dictator(sigma, n, detail::guarded(where, [&] { return j["dictator"].get<int>(); }));
  }
  const auto& map = detail::field(j, "map", where);
  if (!map.is_array()) throw ParseError(where + ": \"map\" must be an array");
  std::vector<int> values;
  for (const auto& s : map) values.push_back(detail::symbol_index(sigma, detail::symbol(s, where), where));
  return {sigma, n, std::move(values)};
}

inline Json symbol_function_to_json(const SymbolFunction& f) {
  Json map = Json::array();
  for (int v : f.values()) map.push_back(f.alphabet().symbol(v));
  return Json{{"n", f.n()}, {"alphabet", f.alphabet().symbols()}, {"map", map}};
}

// Results ---------------------------------------------------------------------

inline Json correlation_to_json(const CorrelationResult& r) {
  return Json{{"value", complex_to_json(r.value)}, {"mode", to_string(r.mode)}, {"samples", r.samples}, {"half_width", r.half_width}};
}

}  // namespace embedlens::io
