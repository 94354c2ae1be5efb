// embedlens command-line front end.
//
// Exit codes: 0 success, 1 a verify suite failed, 2 validation failure
// (including bad arguments), 3 size guard, 4 parse error.

#include "embedlens/correlation.hpp"
#include "embedlens/dictator.hpp"
#include "embedlens/embedding.hpp"
#include "embedlens/function_space.hpp"
#include "embedlens/io.hpp"
#include "embedlens/reduction.hpp"
#include "embedlens/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace el = embedlens;
namespace io = embedlens::io;
using io::Json;

namespace {

constexpr int kExitSuiteFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSizeGuard = 3;
constexpr int kExitParse = 4;

struct Global {
  unsigned threads = 1;
  std::string out;
  std::string manifest;
};

// Everything that determines the output bytes.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  Json parameters = Json::object();
  std::optional<std::uint64_t> seed;
};

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw el::ValidationError("cannot write " + path);
  out << text;
}

void emit(const Global& g, const RunManifest& m, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_file(g.out, text);
  }
  if (!g.manifest.empty()) {
    Json j{{"tool", "embedlens"},
           {"version", EMBEDLENS_VERSION},
           {"subcommand", m.subcommand},
           {"inputs", m.inputs},
           {"parameters", m.parameters},
           {"seed", m.seed ? Json(*m.seed) : Json(nullptr)},
           {"output_digest", "fnv1a64:" + hex64(fnv1a64(text))}};
    write_file(g.manifest, j.dump(2) + "\n");
  }
}

void emit_json(const Global& g, const RunManifest& m, Json report) {
  Json wrapped{{"schema", 1}, {"command", m.subcommand}};
  for (auto& [k, v] : report.items()) wrapped[k] = std::move(v);
  emit(g, m, wrapped.dump(2) + "\n");
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const std::string& what) {
  if (!seed) throw el::ValidationError(what + " is randomized and needs --seed");
  return *seed;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// analyze ----------------------------------------------------------------------

struct AnalyzeArgs {
  std::string dist;
};

void run_analyze(const Global& g, const AnalyzeArgs& a) {
  const auto d = io::distribution_from_json(io::read_json_file(a.dist));
  const auto v = el::detect_embedding(d);
  const auto pc = el::pairwise_connected(d);
  Json divisors = Json::array();
  for (const auto& x : v.snf_divisors) divisors.push_back(io::integer_to_json(x));
  Json report{{"admits_embedding", v.admits},
              {"modulus", v.witness ? io::integer_to_json(v.witness->modulus) : Json(nullptr)},
              {"connected", el::connected(d)},
              {"pairwise_connected", pc.connected},
              {"alpha", io::rational_to_json(el::min_atom_mass(d))},
              {"arity", d.arity()},
              {"support_size", d.support_size()},
              {"rank", v.rank},
              {"S", v.S},
              {"snf_divisors", divisors},
              {"witness", v.witness ? io::witness_to_json(*v.witness, d.alphabets()) : Json(nullptr)}};
  emit_json(g, {"analyze", {a.dist}, Json::object(), std::nullopt}, report);
}

// correlate --------------------------------------------------------------------

struct CorrelateArgs {
  std::string dist;
  std::vector<std::string> functions;
  bool characters = false;
  std::string theta;
  int n = 0;
  std::string n_range;
  std::string mode = "exact";
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> seed;
  bool csv = false;
};

// A one-factor product file stands for its n-fold tensor power.
el::AnyFunction at_arity(const el::AnyFunction& f, int n) {
  if (const auto* p = std::get_if<el::ProductFunction>(&f); p && p->n() == 1 && n != 1) {
    return el::ProductFunction(p->alphabet(), std::vector<std::vector<el::Complex>>(static_cast<std::size_t>(n), p->factor(0)));
  }
  return f;
}

void run_correlate(const Global& g, const CorrelateArgs& a) {
  const auto d = io::distribution_from_json(io::read_json_file(a.dist));
  if (a.mode != "exact" && a.mode != "mc") throw el::ValidationError("--mode must be exact or mc");
  const bool mc = a.mode == "mc";
  if (mc) require_seed(a.seed, "correlate --mode mc");
  if (a.characters == !a.functions.empty()) throw el::ValidationError("give either function files or --characters");

  std::vector<el::AnyFunction> base;
  std::optional<el::EmbeddingWitness> witness;
  std::optional<el::Rational> theta;
  if (!a.theta.empty()) theta = io::rational_from_string(a.theta);
  if (a.characters) {
    const auto v = el::detect_embedding(d);
    if (!v.witness) throw el::ValidationError("--characters: the distribution admits no embedding");
    witness = v.witness;
  } else {
    for (const auto& path : a.functions) base.push_back(io::function_from_json(io::read_json_file(path)));
  }

  std::vector<int> ns;
  if (!a.n_range.empty()) {
    const auto colon = a.n_range.find(':');
    if (colon == std::string::npos) throw el::ValidationError("--n-range expects LO:HI");
    const int lo = std::stoi(a.n_range.substr(0, colon));
    const int hi = std::stoi(a.n_range.substr(colon + 1));
    if (lo < 1 || hi < lo) throw el::ValidationError("--n-range needs 1 <= LO <= HI");
    for (int n = lo; n <= hi; ++n) ns.push_back(n);
  } else if (a.n > 0) {
    ns.push_back(a.n);
  } else if (!base.empty()) {
    ns.push_back(std::visit([](const auto& f) { return f.n(); }, base.front()));
  } else {
    throw el::ValidationError("--n is required with --characters");
  }

  RunManifest m{"correlate", {a.dist}, Json::object(), mc ? a.seed : std::nullopt};
  m.inputs.insert(m.inputs.end(), a.functions.begin(), a.functions.end());
  m.parameters = {{"mode", a.mode}, {"n", ns}, {"characters", a.characters}, {"threads", g.threads}};
  if (mc) m.parameters["samples"] = a.samples;
  if (theta) m.parameters["theta"] = io::rational_to_json(*theta);

  std::vector<el::CorrelationResult> results;
  std::vector<Json> group_ring;  // exact character sums, exponent -> coefficient
  for (int n : ns) {
    std::vector<el::AnyFunction> fs;
    if (witness) {
      for (int i = 0; i < d.arity(); ++i) fs.emplace_back(el::character_function(d, *witness, i, n, theta));
    } else {
      for (const auto& f : base) fs.push_back(at_arity(f, n));
    }
    results.push_back(mc ? el::mc_correlation(d, fs, n, a.samples, *a.seed, {.threads = g.threads})
                         : el::exact_correlation(d, fs, n));
    if (witness && !mc) {
      std::vector<el::PhaseProduct> phases;
      for (int i = 0; i < d.arity(); ++i) phases.push_back(el::character_phases(d, *witness, i, n, theta));
      const auto exact = el::exact_phase_correlation(d, phases, n);
      Json terms = Json::array();
      for (const auto& [e, c] : exact.coeffs) terms.push_back(Json{io::integer_to_json(e), io::rational_to_json(c)});
      group_ring.push_back(Json{{"modulus", io::integer_to_json(exact.modulus)}, {"terms", terms}, {"is_one", exact.is_one()}});
    }
  }

  if (a.csv) {
    std::string text = "n,re,im,abs,mode,samples,half_width\n";
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const auto& r = results[i];
      text += std::to_string(ns[i]) + "," + format_double(r.value.real()) + "," + format_double(r.value.imag()) + "," +
              format_double(std::abs(r.value)) + "," + el::to_string(r.mode) + "," + std::to_string(r.samples) + "," +
              format_double(r.half_width) + "\n";
    }
    emit(g, m, text);
    return;
  }
  if (results.size() == 1) {
    Json report = io::correlation_to_json(results.front());
    report["n"] = ns.front();
    if (!group_ring.empty()) report["exact_phase"] = group_ring.front();
    emit_json(g, m, report);
    return;
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    Json row{{"n", ns[i]}};
    for (auto& [k, v] : io::correlation_to_json(results[i]).items()) row[k] = v;
    if (!group_ring.empty()) row["exact_phase"] = group_ring[i];
    rows.push_back(row);
  }
  emit_json(g, m, Json{{"results", rows}});
}

// stability --------------------------------------------------------------------

struct StabilityArgs {
  std::string function;
  double rho = 1.0;
  std::string nu;
  bool decompose = false;
};

el::Measure read_measure(const std::string& spec, const el::Alphabet& alphabet) {
  if (spec.empty()) return el::Measure(static_cast<std::size_t>(alphabet.size()), 1.0 / alphabet.size());
  const bool inline_json = spec.front() == '[' || spec.front() == '{';
  return io::measure_from_json(inline_json ? io::parse_json(spec, "--nu") : io::read_json_file(spec), alphabet);
}

void run_stability(const Global& g, const StabilityArgs& a) {
  const auto f = io::function_from_json(io::read_json_file(a.function));
  const auto table = std::visit(
      [](const auto& h) {
        if constexpr (std::is_same_v<std::decay_t<decltype(h)>, el::ProductFunction>) {
          return h.to_table();
        } else {
          return h;
        }
      },
      f);
  if (!(a.rho >= 0.0 && a.rho <= 1.0)) throw el::ValidationError("--rho must lie in [0,1]");
  const auto nu = read_measure(a.nu, table.alphabet());
  Json report{{"n", table.n()}, {"rho", a.rho}, {"stability", el::stability(table, a.rho, nu)}};
  if (a.decompose) {
    const auto w = el::degree_weights(table, nu);
    report["degree_weights"] = w;
    report["degree"] = el::degree(table, nu);
  }
  emit_json(g, {"stability", {a.function}, Json{{"rho", a.rho}, {"nu", a.nu}, {"decompose", a.decompose}}, std::nullopt}, report);
}

// reduce -----------------------------------------------------------------------

struct ReduceArgs {
  std::string dist;
  std::string op;
  std::string p_star = "1/10";
  std::string p_nu;
  std::string rate;
  std::vector<std::string> functions;
  std::string emit_dir;
  bool resolve = false;
};

// Writes `body` to DIR/name when --emit is set and returns what goes into
// the report: the file path, or the body itself.
Json attach(const ReduceArgs& a, const std::string& name, const Json& body) {
  if (a.emit_dir.empty()) return body;
  std::filesystem::create_directories(a.emit_dir);
  const auto path = (std::filesystem::path(a.emit_dir) / name).string();
  write_file(path, body.dump(2) + "\n");
  return path;
}

void run_reduce(const Global& g, const ReduceArgs& a) {
  const auto d = io::distribution_from_json(io::read_json_file(a.dist));
  RunManifest m{"reduce", {a.dist}, Json{{"op", a.op}}, std::nullopt};
  m.inputs.insert(m.inputs.end(), a.functions.begin(), a.functions.end());
  if (!a.emit_dir.empty()) m.parameters["emit"] = a.emit_dir;
  Json report{{"op", a.op}};

  if (a.op == "mu-mk-mk") {
    const auto mix = el::alpha_squared_mixture(d);
    report["alpha"] = io::rational_to_json(mix.alpha);
    report["mixture_weight"] = io::rational_to_json(mix.c);
    report["diagonal_dominance"] = el::check_diagonal_dominance(d).holds;
    report["symmetric"] = [&] {
      const int half = d.arity() - 1;
      for (const auto& [x, p] : mix.mu_mk_mk.atoms()) {
        el::Atom swapped(x.begin() + half, x.end());
        swapped.insert(swapped.end(), x.begin(), x.begin() + half);
        if (mix.mu_mk_mk.mass(swapped) != p) return false;
      }
      return true;
    }();
    report["mu_mk_mk"] = attach(a, "mu_mk_mk.json", io::distribution_to_json(mix.mu_mk_mk));
    report["diagonal"] = attach(a, "diagonal.json", io::distribution_to_json(mix.diagonal));
    report["nu"] = attach(a, "nu.json", io::distribution_to_json(mix.nu));
  } else if (a.op == "xi") {
    const auto p_star = io::rational_from_string(a.p_star);
    auto params = el::xi_params_from(d, p_star);
    if (!a.p_nu.empty()) params.p_nu = io::rational_from_string(a.p_nu);
    m.parameters["p_star"] = io::rational_to_json(params.p_star);
    m.parameters["p_nu"] = io::rational_to_json(params.p_nu);
    const auto xi = el::build_xi(params);
    report["p_nu"] = io::rational_to_json(params.p_nu);
    report["p_star"] = io::rational_to_json(params.p_star);
    report["pairwise_connected"] = el::pairwise_connected(xi).connected;
    report["min_atom_mass"] = io::rational_to_json(el::min_atom_mass(xi));
    report["branch_mass_bound"] = io::rational_to_json(el::xi_branch_mass_bound(params));
    if (a.p_nu.empty()) {
      const auto mass = el::xi_mass_report(d, p_star);
      report["alpha_cubed_bound"] = io::rational_to_json(mass.alpha_cubed_bound);
      report["alpha_cubed_bound_holds"] = mass.alpha_cubed_bound_holds;
      report["alpha_squared_p_star"] = io::rational_to_json(mass.alpha_squared_bound);
      report["alpha_squared_p_star_holds"] = mass.alpha_squared_bound_holds;
    }
    report["nu1"] = attach(a, "nu1.json", io::distribution_to_json(params.nu1));
    report["xi"] = attach(a, "xi.json", io::distribution_to_json(xi));
  } else if (a.op == "tilde-f") {
    std::vector<el::TableFunction> fs;
    for (const auto& path : a.functions) {
      const auto f = io::function_from_json(io::read_json_file(path));
      fs.push_back(std::visit([](const auto& h) -> el::TableFunction {
        if constexpr (std::is_same_v<std::decay_t<decltype(h)>, el::ProductFunction>) {
          return h.to_table();
        } else {
          return h;
        }
      }, f));
    }
    const auto t = el::tilde_f(d, fs);
    report["tilde_f"] = attach(a, "tilde_f.json", io::function_to_json(t));
    report["norm_squared"] = el::norm_squared(t, d.coordinate_measure(d.arity() - 1));
  } else if (a.op == "obs34") {
    if (a.functions.size() != 1) throw el::ValidationError("obs34 needs exactly one --fn (f1)");
    const auto f = io::function_from_json(io::read_json_file(a.functions.front()));
    const auto* table = std::get_if<el::TableFunction>(&f);
    const auto f1 = table ? *table : std::get<el::ProductFunction>(f).to_table();
    const auto p_star = io::rational_from_string(a.p_star);
    const auto params = el::xi_params_from(d, p_star);
    const el::Rational rate = a.rate.empty() ? params.p_nu : io::rational_from_string(a.rate);
    m.parameters["p_star"] = io::rational_to_json(p_star);
    m.parameters["rate"] = io::rational_to_json(rate);
    const auto r = el::check_obs34(params, f1, rate);
    report["n"] = f1.n();
    report["rate"] = io::rational_to_json(rate);
    report["lhs"] = io::complex_to_json(r.lhs);
    report["rhs"] = r.rhs;
    report["gap"] = r.gap;
    if (a.resolve) {
      if (f1.n() != 1) throw el::ValidationError("--resolve runs at n = 1");
      const auto res = el::resolve_obs34_rate(d, f1, p_star);
      report["resolution"] = Json{{"rate_one_minus_alpha_squared", io::rational_to_json(res.rate_alpha_squared)},
                                  {"gap_one_minus_alpha_squared", res.gap_alpha_squared},
                                  {"rate_one_minus_alpha", io::rational_to_json(res.rate_alpha)},
                                  {"gap_one_minus_alpha", res.gap_alpha},
                                  {"candidates_matching", res.candidates_matching}};
    }
  } else {
    throw el::ValidationError("--op must be one of mu-mk-mk, xi, tilde-f, obs34");
  }
  emit_json(g, m, report);
}

// dicttest ---------------------------------------------------------------------

struct DictArgs {
  std::string instance;
  std::string function;
  std::string mode = "exact";
  std::uint64_t samples = 10000;
  std::optional<std::uint64_t> seed;
};

void run_dicttest(const Global& g, const DictArgs& a) {
  const auto inst = io::instance_from_json(io::read_json_file(a.instance));
  const auto f = io::symbol_function_from_json(io::read_json_file(a.function));
  if (a.mode != "exact" && a.mode != "mc") throw el::ValidationError("--mode must be exact or mc");
  const bool mc = a.mode == "mc";
  if (mc) require_seed(a.seed, "dicttest --mode mc");
  const auto v = el::validate_instance(inst);
  if (!v.valid) throw el::ValidationError("invalid instance: " + v.violations.front());
  Json constraints = Json::array();
  for (const auto& c : v.constraints) {
    constraints.push_back(Json{{"admits_embedding", c.admits_embedding}, {"connected", c.connected}, {"pairwise_connected", c.pairwise_connected}});
  }
  Json report{{"mode", mc ? "monte-carlo" : "exact"}, {"n", f.n()}};
  RunManifest m{"dicttest", {a.instance, a.function}, Json{{"mode", a.mode}, {"threads", g.threads}}, mc ? a.seed : std::nullopt};
  if (mc) {
    m.parameters["samples"] = a.samples;
    const auto e = el::run_test_mc(inst, f, a.samples, *a.seed, {.threads = g.threads});
    report["acceptance"] = e.estimate;
    report["accepted"] = e.accepted;
    report["samples"] = e.samples;
    report["half_width"] = e.half_width;
  } else {
    const auto acc = el::run_test_exact(inst, f);
    report["acceptance"] = io::rational_to_json(acc);
    report["acceptance_float"] = el::to_double(acc);
  }
  report["no_embedding"] = v.no_embedding;
  report["constraints"] = constraints;
  emit_json(g, m, report);
}

// verify -----------------------------------------------------------------------

bool run_verify(const Global& g, const std::string& suite) {
  const auto results = el::verify::run(suite);
  Json rows = Json::array();
  bool ok = true;
  for (const auto& r : results) {
    rows.push_back(Json{{"suite", r.name},
                        {"criterion", r.criterion},
                        {"passed", r.passed},
                        {"checks", r.checks},
                        {"failures", r.failures},
                        {"notes", r.notes},
                        {"failed", r.failed}});
    ok = ok && r.passed;
  }
  // Timings vary run to run, so they stay out of the report.
  emit_json(g, {"verify", {}, Json{{"suite", suite}}, std::nullopt}, Json{{"passed", ok}, {"suites", rows}});
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"embedlens: Abelian embeddings, correlation and reduction tools for finite distributions"};
  app.set_version_flag("--version", std::string(EMBEDLENS_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--threads", g.threads, "Worker cap for Monte Carlo sampling")->check(CLI::Range(1u, 256u));
  app.add_option("-o,--out", g.out, "Write the report to this file instead of stdout");
  app.add_option("--manifest", g.manifest, "Write a run manifest (inputs, parameters, seed, output digest) here");

  AnalyzeArgs analyze;
  auto* c_analyze = app.add_subcommand("analyze", "Embedding verdict, witness, SNF divisors and connectivity");
  c_analyze->add_option("dist", analyze.dist, "Distribution file")->required();

  CorrelateArgs corr;
  auto* c_corr = app.add_subcommand("correlate", "E[prod f_i(x_i)] under mu^n");
  c_corr->add_option("dist", corr.dist, "Distribution file")->required();
  c_corr->add_option("functions", corr.functions, "One function file per coordinate");
  c_corr->add_flag("--characters", corr.characters, "Use the character functions of the detected embedding");
  c_corr->add_option("--theta", corr.theta, "Phase for Z-valued witnesses (rational)");
  c_corr->add_option("--n", corr.n, "Power n");
  c_corr->add_option("--n-range", corr.n_range, "Sweep LO:HI (one-factor products or --characters)");
  c_corr->add_option("--mode", corr.mode, "exact or mc");
  c_corr->add_option("--samples", corr.samples, "Monte Carlo samples");
  c_corr->add_option("--seed", corr.seed, "Seed (required for --mode mc)");
  c_corr->add_flag("--csv", corr.csv, "Emit CSV rows instead of JSON");

  StabilityArgs stab;
  auto* c_stab = app.add_subcommand("stability", "Noise stability and optional degree weights");
  c_stab->add_option("function", stab.function, "Function file")->required();
  c_stab->add_option("--rho", stab.rho, "Correlation rho in [0,1]");
  c_stab->add_option("--nu", stab.nu, "Measure: JSON file, or an inline JSON list/object (default uniform)");
  c_stab->add_flag("--decompose", stab.decompose, "Include Efron-Stein degree weights");

  ReduceArgs red;
  auto* c_red = app.add_subcommand("reduce", "Arity-reduction constructions and checks");
  c_red->add_option("dist", red.dist, "Distribution file")->required();
  c_red->add_option("--op", red.op, "mu-mk-mk, xi, tilde-f or obs34")->required();
  c_red->add_option("--p-star", red.p_star, "Star probability for xi (rational)");
  c_red->add_option("--p-nu", red.p_nu, "Override the nu branch weight (default 1 - alpha^2)");
  c_red->add_option("--rate", red.rate, "Restriction rate for obs34 (default 1 - alpha^2)");
  c_red->add_option("--fn", red.functions, "Function files (tilde-f: k-1 tables; obs34: f1)");
  c_red->add_option("--emit", red.emit_dir, "Write constructed distributions/functions into this directory");
  c_red->add_flag("--resolve", red.resolve, "obs34 at n = 1: compare the two candidate rates");

  DictArgs dict;
  auto* c_dict = app.add_subcommand("dicttest", "Acceptance probability of the dictatorship test");
  c_dict->add_option("instance", dict.instance, "Instance file")->required();
  c_dict->add_option("function", dict.function, "Sigma^n -> Sigma function file")->required();
  c_dict->add_option("--mode", dict.mode, "exact or mc");
  c_dict->add_option("--samples", dict.samples, "Monte Carlo samples");
  c_dict->add_option("--seed", dict.seed, "Seed (required for --mode mc)");

  std::string suite;
  auto* c_verify = app.add_subcommand("verify", "Run a property suite (or 'all')");
  c_verify->add_option("suite", suite, "Suite name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (c_analyze->parsed()) run_analyze(g, analyze);
    if (c_corr->parsed()) run_correlate(g, corr);
    if (c_stab->parsed()) run_stability(g, stab);
    if (c_red->parsed()) run_reduce(g, red);
    if (c_dict->parsed()) run_dicttest(g, dict);
    if (c_verify->parsed() && !run_verify(g, suite)) return kExitSuiteFailed;
  } catch (const el::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const el::SizeGuardError& e) {
    std::cerr << "size guard: " << e.what() << "\n";
    return kExitSizeGuard;
  } catch (const el::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: bad numeric argument (" << e.what() << ")\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    std::cerr << "validation error: numeric argument out of range (" << e.what() << ")\n";
    return kExitValidation;
  }
  return 0;
}
