#include "oligodyn/cli.hpp"

#include <cmath>
#include <cstddef>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "oligodyn/errors.hpp"
#include "oligodyn/io.hpp"
#include "oligodyn/lbd_model.hpp"
#include "oligodyn/market_sim.hpp"
#include "oligodyn/predation_model.hpp"
#include "oligodyn/scalar_root.hpp"
#include "oligodyn/shock_dist.hpp"
#include "oligodyn/switching_model.hpp"

namespace oligodyn::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

struct FlagSpec {
  const char* name;  // without the leading "--"
  bool takes_value;
  const char* def;  // default literal, nullptr if none
  bool required;
  const char* help;
};

// Output-path flags are excluded from the echoed config so that a written
// meta.config block can be fed back through --config byte for byte.
bool is_output_path_key(const std::string& key) {
  return key == "config" || key == "out" || key == "json-out" ||
         key == "trajectories";
}

const std::vector<FlagSpec> kCommonTail = {
    {"dist", true, "normal", false,
     "shock distribution: normal, logistic, or a CSV file path"},
    {"tol", true, "1e-10", false, "root-finder residual tolerance"},
    {"bracket-width", true, "1", false, "initial bracket half width"},
    {"max-bracket", true, "1000", false, "bracket expansion cap"},
    {"skip-uniqueness", false, "false", false,
     "skip the pre-solve sign-change scan"},
    {"config", true, nullptr, false,
     "key=value file; command-line flags override it"},
    {"json-out", true, nullptr, false,
     "write the JSON document here instead of stdout"},
    {"help", false, "false", false, "show this help and exit"},
};

struct Sub {
  const char* name;
  const char* summary;
  std::vector<FlagSpec> flags;  // specific flags; common tail appended
};

std::vector<Sub> subcommand_table() {
  std::vector<Sub> subs;
  subs.push_back(
      {"solve-lbd",
       "solve the learning-by-doing duopoly by backward induction",
       {
           {"m", true, nullptr, true, "experience cap (positive integer)"},
           {"costs", true, nullptr, true,
            "comma list of m+1 unit costs, nonincreasing"},
           {"delta", true, nullptr, true, "discount factor in [0,1)"},
           {"out", true, nullptr, false, "write the per-state CSV here"},
       }});
  subs.push_back({"solve-switching",
                  "solve the switching-cost duopoly",
                  {
                      {"s", true, nullptr, true, "switching cost, s >= 0"},
                      {"delta", true, nullptr, true,
                       "discount factor in [0,1)"},
                  }});
  subs.push_back(
      {"sweep-switching",
       "sweep the switching model over s and report price-curve shape",
       {
           {"delta", true, nullptr, true, "discount factor in [0,1)"},
           {"s-max", true, "10", false, "largest switching cost in the grid"},
           {"s-step", true, "0.25", false, "grid spacing, from s = 0"},
           {"out", true, nullptr, false, "write the per-point CSV here"},
       }});
  subs.push_back(
      {"sweep-hypercomp",
       "sweep the two-step duopoly over the low-cost level c1",
       {
           {"delta", true, nullptr, true, "discount factor in [0,1)"},
           {"c0", true, "1", false, "inexperienced unit cost"},
           {"c1-grid", true, nullptr, true,
            "comma list of experienced unit costs, increasing"},
           {"out", true, nullptr, false, "write the per-point CSV here"},
       }});
  subs.push_back(
      {"predation",
       "compare recoupment-driven and learning-driven low pricing",
       {
           {"costs", true, nullptr, true, "comma pair c0,c1 of unit costs"},
           {"delta", true, nullptr, true, "discount factor in [0,1)"},
           {"v-mono", true, nullptr, true,
            "monopoly continuation value after exit"},
           {"table", false, "false", false,
            "also print a plain-text table"},
       }});
  subs.push_back(
      {"simulate",
       "seeded Monte Carlo forward simulation of a solved model",
       {
           {"model", true, nullptr, true, "lbd or switching"},
           {"m", true, "1", false, "experience cap (lbd)"},
           {"costs", true, nullptr, false, "comma list of unit costs (lbd)"},
           {"s", true, nullptr, false, "switching cost (switching)"},
           {"delta", true, nullptr, true, "discount factor in [0,1)"},
           {"periods", true, "10", false, "periods per replication"},
           {"reps", true, "10000", false, "number of replications"},
           {"seed", true, "0", false, "master RNG seed"},
           {"initial", true, nullptr, false,
            "starting state i,j (default 0,0 for lbd, 1,0 for switching)"},
           {"xi-mode", false, "false", false,
            "draw shocks by inverse cdf instead of win probabilities"},
           {"trajectories", true, nullptr, false,
            "write per-period trajectory CSV here"},
       }});
  subs.push_back({"validate-dist",
                  "check a shock distribution against the model contract",
                  {}});
  for (auto& s : subs)
    s.flags.insert(s.flags.end(), kCommonTail.begin(), kCommonTail.end());
  return subs;
}

const FlagSpec* find_flag(const Sub& sub, const std::string& name) {
  for (const auto& f : sub.flags)
    if (name == f.name) return &f;
  return nullptr;
}

void print_global_help(std::ostream& out) {
  out << "oligodyn " << kVersion
      << "  dynamic duopoly pricing toolkit\n\n"
         "usage: oligodyn <subcommand> [--flag value ...]\n\n"
         "subcommands:\n";
  for (const auto& s : subcommand_table()) {
    out << "  " << s.name;
    for (std::size_t k = std::string(s.name).size(); k < 18; ++k) out << ' ';
    out << s.summary << "\n";
  }
  out << "\nRun `oligodyn <subcommand> --help` for the full flag list.\n";
}

void print_sub_help(const Sub& sub, std::ostream& out) {
  out << "usage: oligodyn " << sub.name << " [--flag value ...]\n\n"
      << sub.summary << "\n\nflags:\n";
  for (const auto& f : sub.flags) {
    std::string head = std::string("--") + f.name;
    if (f.takes_value) head += " <value>";
    out << "  " << head;
    for (std::size_t k = head.size(); k < 26; ++k) out << ' ';
    out << f.help;
    if (f.required)
      out << " (required)";
    else if (f.takes_value && f.def)
      out << " (default " << f.def << ")";
    out << "\n";
  }
}

// Applies a config file under the flag vocabulary of `sub`.  Lines are
// `key = value`, blank, or `#` comments; keys match flag names without the
// leading dashes.
void apply_config_file(const Sub& sub, const std::string& path,
                       std::map<std::string, std::string>& values) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidParams("config line " + std::to_string(lineno) +
                          " is not key=value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const FlagSpec* spec = find_flag(sub, key);
    if (spec == nullptr || std::string(spec->name) == "config")
      throw InvalidParams("config line " + std::to_string(lineno) +
                          ": unknown key '" + key + "'");
    if (!spec->takes_value && val != "true" && val != "false")
      throw InvalidParams("config key '" + key + "' must be true or false");
    values[key] = val;
  }
}

struct Parsed {
  const Sub* sub = nullptr;
  // Every applicable flag resolved to a literal string, defaults included.
  std::map<std::string, std::string> values;
  bool help = false;
};

Parsed parse_args(const std::vector<Sub>& subs,
                  const std::vector<std::string>& args) {
  Parsed p;
  for (const auto& s : subs)
    if (args[0] == s.name) p.sub = &s;
  if (p.sub == nullptr)
    throw InvalidParams("unknown subcommand '" + args[0] + "'; see --help");

  std::map<std::string, std::string> cli_values;
  std::optional<std::string> config_path;
  for (std::size_t k = 1; k < args.size(); ++k) {
    std::string tok = args[k];
    if (tok.rfind("--", 0) != 0)
      throw InvalidParams("expected a --flag, got '" + tok + "'");
    tok.erase(0, 2);
    std::string name = tok, val;
    bool has_val = false;
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      name = tok.substr(0, eq);
      val = tok.substr(eq + 1);
      has_val = true;
    }
    const FlagSpec* spec = find_flag(*p.sub, name);
    if (spec == nullptr)
      throw InvalidParams("unknown flag '--" + name + "' for " +
                          std::string(p.sub->name));
    if (spec->takes_value && !has_val) {
      if (k + 1 >= args.size())
        throw InvalidParams("flag '--" + name + "' needs a value");
      val = args[++k];
      has_val = true;
    }
    if (!spec->takes_value) {
      if (has_val) throw InvalidParams("flag '--" + name + "' takes no value");
      val = "true";
    }
    if (name == "help") {
      p.help = true;
      continue;
    }
    if (name == "config")
      config_path = val;
    else
      cli_values[name] = val;
  }
  if (p.help) return p;

  if (config_path) apply_config_file(*p.sub, *config_path, p.values);
  for (const auto& [k, v] : cli_values) p.values[k] = v;  // CLI wins

  for (const auto& f : p.sub->flags) {
    if (std::string(f.name) == "config" || std::string(f.name) == "help")
      continue;
    if (p.values.count(f.name)) continue;
    if (f.required)
      throw InvalidParams(std::string("missing required flag '--") + f.name +
                          "'");
    if (f.def) p.values[f.name] = f.def;
  }
  return p;
}

// Typed accessors over the resolved literal map.
double get_double(const Parsed& p, const std::string& key) {
  return parse_double(p.values.at(key), "--" + key);
}

long long get_long(const Parsed& p, const std::string& key) {
  return parse_long(p.values.at(key), "--" + key);
}

bool get_bool(const Parsed& p, const std::string& key) {
  const std::string& v = p.values.at(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw InvalidParams("--" + key + " must be true or false, got '" + v + "'");
}

bool has(const Parsed& p, const std::string& key) {
  return p.values.count(key) != 0;
}

std::vector<double> get_double_list(const Parsed& p, const std::string& key) {
  std::vector<double> out;
  for (const auto& piece : split(p.values.at(key), ','))
    out.push_back(parse_double(trim(piece), "--" + key));
  if (out.empty()) throw InvalidParams("--" + key + " is empty");
  return out;
}

ShockDistribution get_dist(const Parsed& p) {
  return ShockDistribution::from_name(p.values.at("dist"));
}

RootOptions get_root_options(const Parsed& p) {
  RootOptions r;
  r.tol = get_double(p, "tol");
  r.bracket_half_width = get_double(p, "bracket-width");
  r.max_bracket = get_double(p, "max-bracket");
  return r;
}

std::map<std::string, std::string> echo_config(const Parsed& p) {
  std::map<std::string, std::string> cfg;
  for (const auto& [k, v] : p.values)
    if (!is_output_path_key(k)) cfg[k] = v;
  return cfg;
}

std::map<std::string, double> echo_tolerances(const RootOptions& r) {
  return {{"tol", r.tol},
          {"bracket_width", r.bracket_half_width},
          {"max_bracket", r.max_bracket}};
}

void emit_json(const Parsed& p, const ojson& doc, std::ostream& out) {
  if (has(p, "json-out"))
    write_text_atomic(p.values.at("json-out"), json_text(doc));
  else
    out << json_text(doc);
}

void emit_csv(const Parsed& p, const std::string& csv) {
  if (has(p, "out")) write_text_atomic(p.values.at("out"), csv);
}

int run_solve_lbd(const Parsed& p, std::ostream& out) {
  LbdParams params;
  params.m = static_cast<int>(get_long(p, "m"));
  params.costs = get_double_list(p, "costs");
  params.delta = get_double(p, "delta");
  params.dist = get_dist(p);
  LbdOptions opt;
  opt.root = get_root_options(p);
  opt.uniqueness_check = !get_bool(p, "skip-uniqueness");
  const LbdEquilibrium eq = solve_backward(params, opt);
  const ojson meta =
      meta_json("solve-lbd", echo_config(p), echo_tolerances(opt.root));
  emit_json(p, equilibrium_json(eq, meta), out);
  emit_csv(p, equilibrium_csv(eq));
  return 0;
}

int run_solve_switching(const Parsed& p, std::ostream& out) {
  SwitchingParams params;
  params.s = get_double(p, "s");
  params.delta = get_double(p, "delta");
  params.dist = get_dist(p);
  SwitchingOptions opt;
  opt.root = get_root_options(p);
  opt.uniqueness_check = !get_bool(p, "skip-uniqueness");
  const SwitchingEq eq = solve_switching(params, opt);
  const ojson meta =
      meta_json("solve-switching", echo_config(p), echo_tolerances(opt.root));
  emit_json(p, switching_json(eq, meta), out);
  return 0;
}

int run_sweep_switching(const Parsed& p, std::ostream& out) {
  const double s_max = get_double(p, "s-max");
  const double s_step = get_double(p, "s-step");
  if (!(s_step > 0.0) || !(s_max > 0.0))
    throw InvalidParams("--s-max and --s-step must be positive");
  std::vector<double> grid;
  // k * step keeps the grid exactly uniform; the first point is exactly 0.
  for (long long k = 0;; ++k) {
    const double s = static_cast<double>(k) * s_step;
    if (s > s_max * (1.0 + 1e-12)) break;
    grid.push_back(s);
  }
  SwitchingOptions opt;
  opt.root = get_root_options(p);
  opt.uniqueness_check = !get_bool(p, "skip-uniqueness");
  const double delta = get_double(p, "delta");
  const ShockDistribution dist = get_dist(p);
  const SweepResult sw = sweep_s(grid, delta, dist, opt);
  const ojson meta =
      meta_json("sweep-switching", echo_config(p), echo_tolerances(opt.root));
  emit_json(p, sweep_json(sw, delta, dist, meta), out);
  emit_csv(p, sweep_csv(sw));
  return 0;
}

int run_sweep_hypercomp(const Parsed& p, std::ostream& out) {
  const RootOptions root = get_root_options(p);
  const double c0 = get_double(p, "c0");
  const double delta = get_double(p, "delta");
  const ShockDistribution dist = get_dist(p);
  const std::vector<HypercompRow> rows =
      hypercomp_sweep(get_double_list(p, "c1-grid"), c0, delta, dist, root);
  const ojson meta =
      meta_json("sweep-hypercomp", echo_config(p), echo_tolerances(root));
  emit_json(p, hypercomp_json(rows, c0, delta, dist, meta), out);
  emit_csv(p, hypercomp_csv(rows));
  return 0;
}

int run_predation(const Parsed& p, std::ostream& out) {
  PredationParams params;
  params.base.m = 1;
  params.base.costs = get_double_list(p, "costs");
  params.base.delta = get_double(p, "delta");
  params.base.dist = get_dist(p);
  params.v_mono = get_double(p, "v-mono");
  const RootOptions root = get_root_options(p);
  const PredationReport rep = predation_report(params, root);
  const ojson meta =
      meta_json("predation", echo_config(p), echo_tolerances(root));
  emit_json(p, predation_json(rep, params, meta), out);
  if (get_bool(p, "table")) out << format_table(rep);
  return 0;
}

int run_simulate(const Parsed& p, std::ostream& out) {
  const std::string model = p.values.at("model");
  if (model != "lbd" && model != "switching")
    throw InvalidParams("--model must be lbd or switching, got '" + model +
                        "'");
  SimConfig cfg;
  cfg.periods = static_cast<int>(get_long(p, "periods"));
  cfg.reps = get_long(p, "reps");
  cfg.seed = parse_u64(p.values.at("seed"), "--seed");
  cfg.xi_mode = get_bool(p, "xi-mode");
  cfg.record_trajectories = has(p, "trajectories");
  if (has(p, "initial")) {
    const auto parts = split(p.values.at("initial"), ',');
    if (parts.size() != 2) throw InvalidParams("--initial must be i,j");
    cfg.initial_i =
        static_cast<int>(parse_long(trim(parts[0]), "--initial"));
    cfg.initial_j =
        static_cast<int>(parse_long(trim(parts[1]), "--initial"));
  } else if (model == "switching") {
    cfg.initial_i = 1;
    cfg.initial_j = 0;
  }

  const RootOptions root = get_root_options(p);
  const bool uniq = !get_bool(p, "skip-uniqueness");

  SimResult res;
  if (model == "lbd") {
    if (!has(p, "costs"))
      throw InvalidParams("simulate --model lbd needs --costs");
    LbdParams params;
    params.m = static_cast<int>(get_long(p, "m"));
    params.costs = get_double_list(p, "costs");
    params.delta = get_double(p, "delta");
    params.dist = get_dist(p);
    LbdOptions opt;
    opt.root = root;
    opt.uniqueness_check = uniq;
    res = simulate_lbd(solve_backward(params, opt), cfg);
  } else {
    if (!has(p, "s"))
      throw InvalidParams("simulate --model switching needs --s");
    SwitchingParams params;
    params.s = get_double(p, "s");
    params.delta = get_double(p, "delta");
    params.dist = get_dist(p);
    SwitchingOptions opt;
    opt.root = root;
    opt.uniqueness_check = uniq;
    res = simulate_switching(solve_switching(params, opt), cfg);
  }
  const ojson meta =
      meta_json("simulate", echo_config(p), echo_tolerances(root));
  emit_json(p, sim_json(res, model, meta), out);
  if (has(p, "trajectories"))
    write_text_atomic(p.values.at("trajectories"), trajectory_csv(res));
  return 0;
}

int run_validate_dist(const Parsed& p, std::ostream& out) {
  const ShockDistribution d = get_dist(p);
  const std::vector<DistViolation> violations = d.validate();
  const ojson meta =
      meta_json("validate-dist", echo_config(p),
                {{"median_tol", 1e-9}, {"symmetry_tol", 1e-9}});
  emit_json(p, violations_json(d, violations, meta), out);
  return 0;  // violations are the report, not a process failure
}

int dispatch(const Parsed& p, std::ostream& out) {
  const std::string name = p.sub->name;
  if (name == "solve-lbd") return run_solve_lbd(p, out);
  if (name == "solve-switching") return run_solve_switching(p, out);
  if (name == "sweep-switching") return run_sweep_switching(p, out);
  if (name == "sweep-hypercomp") return run_sweep_hypercomp(p, out);
  if (name == "predation") return run_predation(p, out);
  if (name == "simulate") return run_simulate(p, out);
  return run_validate_dist(p, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    if (args.empty()) {
      err << "error: no subcommand given; run with --help\n";
      return 2;
    }
    if (args[0] == "--help" || args[0] == "help" || args[0] == "-h") {
      print_global_help(out);
      return 0;
    }
    if (args[0] == "--version") {
      out << "oligodyn " << kVersion << "\n";
      return 0;
    }
    const auto subs = subcommand_table();
    const Parsed p = parse_args(subs, args);
    if (p.help) {
      print_sub_help(*p.sub, out);
      return 0;
    }
    return dispatch(p, out);
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoSignChange& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const ConvergenceFailure& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, std::cout, std::cerr);
}

}  // namespace oligodyn::cli
