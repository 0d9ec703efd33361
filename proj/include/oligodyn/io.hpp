#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "oligodyn/lbd_model.hpp"
#include "oligodyn/market_sim.hpp"
#include "oligodyn/predation_model.hpp"
#include "oligodyn/shock_dist.hpp"
#include "oligodyn/switching_model.hpp"

namespace oligodyn {

using ojson = nlohmann::ordered_json;

// ---- string and number helpers ------------------------------------------

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

/** Strict full-string parses; `what` names the value in the error message. */
double parse_double(const std::string& text, const std::string& what);
long long parse_long(const std::string& text, const std::string& what);
unsigned long long parse_u64(const std::string& text, const std::string& what);

/** 12-significant-digit decimal formatting used by every CSV writer. */
std::string fmt_g12(double v);

// ---- files ---------------------------------------------------------------

std::string read_text_file(const std::string& path);

/** Writes via a sibling temp file and rename, so readers never observe a
    partially written artifact. */
void write_text_atomic(const std::string& path, const std::string& content);

// ---- CSV builders --------------------------------------------------------

std::string equilibrium_csv(const LbdEquilibrium& eq);
std::string sweep_csv(const SweepResult& sweep);
std::string hypercomp_csv(const std::vector<HypercompRow>& rows);
std::string trajectory_csv(const SimResult& sim);

// ---- JSON builders -------------------------------------------------------

/** Run header embedded in every JSON artifact.  `config` holds the resolved
    model and solver inputs (never output paths), so a run can be replayed
    byte-identically from its own metadata. */
ojson meta_json(const std::string& subcommand,
                const std::map<std::string, std::string>& config,
                const std::map<std::string, double>& tolerances);

ojson equilibrium_json(const LbdEquilibrium& eq, ojson meta);
ojson switching_json(const SwitchingEq& eq, ojson meta);
ojson sweep_json(const SweepResult& sweep, double delta,
                 const ShockDistribution& dist, ojson meta);
ojson hypercomp_json(const std::vector<HypercompRow>& rows, double c0,
                     double delta, const ShockDistribution& dist, ojson meta);
ojson predation_json(const PredationReport& report, const PredationParams& params,
                     ojson meta);
ojson sim_json(const SimResult& sim, const std::string& model, ojson meta);
ojson violations_json(const ShockDistribution& dist,
                      const std::vector<DistViolation>& violations, ojson meta);

/** dump(2) plus trailing newline; the single serialization point for
    artifacts, so byte-level output stays uniform. */
std::string json_text(const ojson& doc);

}  // namespace oligodyn
