#include "oligodyn/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "oligodyn/errors.hpp"

namespace oligodyn {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw InvalidParams(what + ": empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    throw InvalidParams(what + ": not a finite number: \"" + text + "\"");
  return v;
}

long long parse_long(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw InvalidParams(what + ": empty integer");
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    throw InvalidParams(what + ": not an integer: \"" + text + "\"");
  return v;
}

unsigned long long parse_u64(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty() || t[0] == '-')
    throw InvalidParams(what + ": not an unsigned integer: \"" + text + "\"");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    throw InvalidParams(what + ": not an unsigned integer: \"" + text + "\"");
  return v;
}

std::string fmt_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path + ": " + std::strerror(errno));
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path);
  return os.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp + ": " + std::strerror(errno));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw IoError("write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot move " + tmp + " to " + path + ": " +
                  std::strerror(errno));
  }
}

// ---- CSV builders --------------------------------------------------------

std::string equilibrium_csv(const LbdEquilibrium& eq) {
  std::ostringstream os;
  os << "i,j,P,p,q,v,w,W,C,residual\n";
  for (int i = 0; i <= eq.m(); ++i) {
    for (int j = 0; j <= eq.m(); ++j) {
      os << i << ',' << j << ',' << fmt_g12(eq.P(i, j)) << ',' << fmt_g12(eq.p(i, j))
         << ',' << fmt_g12(eq.q(i, j)) << ',' << fmt_g12(eq.v(i, j)) << ','
         << fmt_g12(eq.w(i, j)) << ',' << fmt_g12(eq.W(i, j)) << ','
         << fmt_g12(eq.C(i, j)) << ',' << fmt_g12(eq.root_residual(i, j)) << '\n';
    }
  }
  return os.str();
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "s,x,q1,p1,p0,pbar,V,dpbar_ds\n";
  for (const SweepRow& r : sweep.rows) {
    os << fmt_g12(r.s) << ',' << fmt_g12(r.x) << ',' << fmt_g12(r.q1) << ','
       << fmt_g12(r.p1) << ',' << fmt_g12(r.p0) << ',' << fmt_g12(r.pbar) << ','
       << fmt_g12(r.V) << ',' << fmt_g12(r.dpbar_ds) << '\n';
  }
  return os.str();
}

std::string hypercomp_csv(const std::vector<HypercompRow>& rows) {
  std::ostringstream os;
  os << "c1,v00,P10\n";
  for (const HypercompRow& r : rows)
    os << fmt_g12(r.c1) << ',' << fmt_g12(r.v00) << ',' << fmt_g12(r.P10) << '\n';
  return os.str();
}

std::string trajectory_csv(const SimResult& sim) {
  std::ostringstream os;
  os << "rep,period,i,j,winner\n";
  for (const TrajectoryRow& r : sim.trajectories)
    os << r.rep << ',' << r.period << ',' << r.i << ',' << r.j << ',' << r.winner
       << '\n';
  return os.str();
}

// ---- JSON builders -------------------------------------------------------

std::string json_text(const ojson& doc) { return doc.dump(2) + "\n"; }

ojson meta_json(const std::string& subcommand,
                const std::map<std::string, std::string>& config,
                const std::map<std::string, double>& tolerances) {
  ojson meta;
  meta["tool"] = "oligodyn";
  meta["version"] = "0.1.0";
  meta["subcommand"] = subcommand;
  ojson cfg = ojson::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  meta["config"] = std::move(cfg);
  ojson tol = ojson::object();
  for (const auto& [k, v] : tolerances) tol[k] = v;
  meta["tolerances"] = std::move(tol);
  return meta;
}

ojson equilibrium_json(const LbdEquilibrium& eq, ojson meta) {
  ojson doc;
  doc["meta"] = std::move(meta);
  doc["m"] = eq.m();
  doc["delta"] = eq.params().delta;
  doc["costs"] = eq.params().costs;
  doc["dist"] = eq.params().dist.name();
  ojson states = ojson::array();
  for (int i = 0; i <= eq.m(); ++i) {
    for (int j = 0; j <= eq.m(); ++j) {
      ojson row;
      row["i"] = i;
      row["j"] = j;
      row["P"] = eq.P(i, j);
      row["p"] = eq.p(i, j);
      row["q"] = eq.q(i, j);
      row["v"] = eq.v(i, j);
      row["w"] = eq.w(i, j);
      row["W"] = eq.W(i, j);
      row["C"] = eq.C(i, j);
      row["residual"] = eq.root_residual(i, j);
      row["bellman_residual"] = eq.bellman_residual(i, j);
      states.push_back(std::move(row));
    }
  }
  doc["states"] = std::move(states);
  return doc;
}

ojson switching_json(const SwitchingEq& eq, ojson meta) {
  ojson doc;
  doc["meta"] = std::move(meta);
  doc["s"] = eq.s;
  doc["delta"] = eq.delta;
  doc["dist"] = eq.dist.name();
  doc["x"] = eq.x;
  doc["q1"] = eq.q1;
  doc["q0"] = eq.q0;
  doc["p1"] = eq.p1;
  doc["p0"] = eq.p0;
  doc["v1"] = eq.v1;
  doc["v0"] = eq.v0;
  doc["V"] = eq.V;
  doc["pbar"] = eq.pbar;
  doc["pbar_closed"] = eq.pbar_closed;
  doc["elasticity1"] = eq.elasticity1;
  doc["residual"] = eq.residual;
  return doc;
}

ojson sweep_json(const SweepResult& sweep, double delta,
                 const ShockDistribution& dist, ojson meta) {
  ojson doc;
  doc["meta"] = std::move(meta);
  doc["delta"] = delta;
  doc["dist"] = dist.name();
  doc["s_prime"] = sweep.s_prime;
  doc["s_doubleprime"] = sweep.s_doubleprime;
  doc["sign_changes"] = sweep.sign_changes;
  ojson rows = ojson::array();
  for (const SweepRow& r : sweep.rows) {
    ojson row;
    row["s"] = r.s;
    row["x"] = r.x;
    row["q1"] = r.q1;
    row["p1"] = r.p1;
    row["p0"] = r.p0;
    row["pbar"] = r.pbar;
    row["V"] = r.V;
    row["dpbar_ds"] = r.dpbar_ds;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

ojson hypercomp_json(const std::vector<HypercompRow>& rows, double c0,
                     double delta, const ShockDistribution& dist, ojson meta) {
  ojson doc;
  doc["meta"] = std::move(meta);
  doc["c0"] = c0;
  doc["delta"] = delta;
  doc["dist"] = dist.name();
  ojson arr = ojson::array();
  for (const HypercompRow& r : rows) {
    ojson row;
    row["c1"] = r.c1;
    row["v00"] = r.v00;
    row["P10"] = r.P10;
    arr.push_back(std::move(row));
  }
  doc["rows"] = std::move(arr);
  return doc;
}

ojson predation_json(const PredationReport& report, const PredationParams& params,
                     ojson meta) {
  ojson doc;
  doc["meta"] = std::move(meta);
  doc["costs"] = params.base.costs;
  doc["delta"] = params.base.delta;
  doc["v_mono"] = params.v_mono;
  doc["dist"] = params.base.dist.name();
  doc["v11"] = report.v11;
  doc["W_tilde"] = report.W_tilde;
  doc["P_tilde"] = report.P_tilde;
  doc["P_hat"] = report.P_hat;
  doc["p_tilde_10"] = report.p_tilde_10;
  doc["predation"] = report.predation;
  doc["entry"] = report.entry;
  doc["below_mc"] = report.below_cost;
  return doc;
}

ojson sim_json(const SimResult& sim, const std::string& model, ojson meta) {
  ojson doc;
  doc["meta"] = std::move(meta);
  doc["model"] = model;
  doc["reps"] = sim.reps;
  doc["periods"] = sim.periods;
  doc["first_period_win_rate"] = sim.first_period_win_rate;
  doc["dominance_prob"] = sim.dominance_prob;
  doc["mean_lead"] = sim.mean_lead;
  doc["retention_rate"] = sim.retention_rate;
  ojson tallies = ojson::array();
  for (std::size_t s = 0; s < sim.state_tallies.size(); ++s) {
    const StateTally& t = sim.state_tallies[s];
    ojson row;
    row["i"] = sim.state_labels[s].first;
    row["j"] = sim.state_labels[s].second;
    row["visits"] = t.visits;
    row["wins"] = t.wins;
    row["win_rate"] = t.visits > 0
                          ? static_cast<double>(t.wins) / static_cast<double>(t.visits)
                          : std::nan("");
    tallies.push_back(std::move(row));
  }
  doc["state_tallies"] = std::move(tallies);
  ojson final_occ = ojson::array();
  if (!sim.occupancy.empty()) {
    const auto& last = sim.occupancy.back();
    for (std::size_t s = 0; s < last.size(); ++s) {
      ojson row;
      row["i"] = sim.state_labels[s].first;
      row["j"] = sim.state_labels[s].second;
      row["share"] =
          static_cast<double>(last[s]) / static_cast<double>(sim.reps);
      final_occ.push_back(std::move(row));
    }
  }
  doc["final_occupancy"] = std::move(final_occ);
  return doc;
}

ojson violations_json(const ShockDistribution& dist,
                      const std::vector<DistViolation>& violations, ojson meta) {
  ojson doc;
  doc["meta"] = std::move(meta);
  doc["dist"] = dist.name();
  doc["violation_count"] = violations.size();
  ojson arr = ojson::array();
  for (const DistViolation& v : violations) {
    ojson row;
    row["property"] = v.property;
    row["x"] = v.x;
    row["detail"] = v.detail;
    arr.push_back(std::move(row));
  }
  doc["violations"] = std::move(arr);
  return doc;
}

}  // namespace oligodyn
