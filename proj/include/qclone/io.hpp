#pragma once

// JSON and CSV encodings shared by the CLI and the Python module.
//
//   PureState      {"dim": d, "amps": [[re, im], ...]}
//   DensityMatrix  {"dim": d, "mat": [[[re, im], ...], ...]}
//   FockState      {"ports": P, "dim": d, "terms": [{"occ": [...], "amp": [re, im]}]}
//   cloning result {"d", "N", "M", "fidelity", "successProb", "cloneState"}
//   counts CSV     input,outcome,count

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "qclone/bosonic.hpp"
#include "qclone/cloning.hpp"
#include "qclone/experiment.hpp"
#include "qclone/hilbert.hpp"

namespace qclone {

using json = nlohmann::json;

json to_json(const PureState& psi);
json to_json(const DensityMatrix& rho);
json to_json(const FockState& state);
json to_json(const CloningOutcome& outcome, const CloningSpec& spec);
json to_json(const ExperimentConfig& config);
json to_json(const CountsTable& table);
json to_json(const EstimationResult& result);
json to_json(const Replication& rep);

PureState pure_state_from_json(const json& j);
DensityMatrix density_matrix_from_json(const json& j);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const json& j);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
/// Header "input,outcome,count", one row per outcome.
void write_counts_csv(std::ostream& os, const CountsTable& table, bool header = true);

}  // namespace qclone
