#include "qclone/io.hpp"

#include <ostream>
#include <set>
#include <stdexcept>

namespace qclone {

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("expected a [re, im] pair");
    }
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

json to_json(const PureState& psi) {
    json amps = json::array();
    for (int k = 0; k < psi.dim(); ++k) amps.push_back(complex_json(psi[k]));
    return {{"dim", psi.dim()}, {"amps", amps}};
}

json to_json(const DensityMatrix& rho) {
    json rows = json::array();
    for (int r = 0; r < rho.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < rho.dim(); ++c) row.push_back(complex_json(rho(r, c)));
        rows.push_back(row);
    }
    return {{"dim", rho.dim()}, {"mat", rows}};
}

json to_json(const FockState& state) {
    json terms = json::array();
    for (const auto& [occ, amp] : state.terms()) {
        json o = json::array();
        for (auto n : occ) o.push_back(static_cast<int>(n));
        terms.push_back({{"occ", o}, {"amp", complex_json(amp)}});
    }
    return {{"ports", state.ports()}, {"dim", state.dim()}, {"terms", terms}};
}

json to_json(const CloningOutcome& outcome, const CloningSpec& spec) {
    return {{"d", spec.d},
            {"N", spec.N},
            {"M", spec.M},
            {"fidelity", outcome.fidelity},
            {"successProb", outcome.success_prob},
            {"cloneState", to_json(outcome.clone_state)}};
}

json to_json(const ExperimentConfig& c) {
    return {{"shots", c.shots},
            {"v", c.v},
            {"ancillaWeights", c.ancilla_weights},
            {"ancillaBasis", c.ancilla_basis},
            {"prepFidelity", c.prep_fidelity},
            {"analysisFidelity", c.analysis_fidelity},
            {"seed", c.seed},
            {"swapDetectors", c.swap_detectors}};
}

json to_json(const CountsTable& t) {
    json counts = json::array();
    for (std::size_t i = 0; i < t.counts.size(); ++i) {
        counts.push_back({{"outcome", t.outcome_labels.at(i)}, {"count", t.counts[i]}});
    }
    return {{"input", t.input_label},     {"inputIndex", t.input_index},
            {"basis", t.basis_label},     {"counts", counts},
            {"trials", t.trials},         {"config", to_json(t.config)}};
}

json to_json(const EstimationResult& r) {
    return {{"probs", r.probs}, {"fidelity", r.fidelity}, {"stderr", r.std_error}};
}

json to_json(const Replication& rep) {
    json inputs = json::array();
    for (std::size_t k = 0; k < rep.tables.size(); ++k) {
        json entry = to_json(rep.results[k]);
        entry["input"] = rep.tables[k].input_label;
        entry["counts"] = rep.tables[k].counts;
        entry["trials"] = rep.tables[k].trials;
        inputs.push_back(entry);
    }
    return {{"basis", rep.basis_label},
            {"inputs", inputs},
            {"meanFidelity", rep.mean_fidelity},
            {"meanError", rep.mean_error}};
}

PureState pure_state_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const json& amps = j.at("amps");
    if (static_cast<int>(amps.size()) != dim) {
        throw std::invalid_argument("PureState JSON: amps length does not match dim");
    }
    Vector v(dim);
    for (int k = 0; k < dim; ++k) v(k) = complex_from(amps.at(k));
    return PureState(std::move(v));
}

DensityMatrix density_matrix_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const json& rows = j.at("mat");
    if (static_cast<int>(rows.size()) != dim) {
        throw std::invalid_argument("DensityMatrix JSON: row count does not match dim");
    }
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        if (static_cast<int>(rows.at(r).size()) != dim) {
            throw std::invalid_argument("DensityMatrix JSON: ragged row");
        }
        for (int c = 0; c < dim; ++c) m(r, c) = complex_from(rows.at(r).at(c));
    }
    return DensityMatrix(std::move(m));
}

ExperimentConfig config_from_json(const json& j) {
    static const std::set<std::string> known{"shots", "v", "ancillaWeights", "ancillaBasis",
                                             "prepFidelity", "analysisFidelity", "seed",
                                             "swapDetectors", "threads"};
    if (!j.is_object()) {
        throw std::invalid_argument("experiment config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw std::invalid_argument("experiment config: unknown key '" + key + "'");
        }
    }
    ExperimentConfig c;
    c.shots = j.value("shots", c.shots);
    c.v = j.value("v", c.v);
    c.ancilla_weights = j.value("ancillaWeights", c.ancilla_weights);
    c.ancilla_basis = j.value("ancillaBasis", c.ancilla_basis);
    c.prep_fidelity = j.value("prepFidelity", c.prep_fidelity);
    c.analysis_fidelity = j.value("analysisFidelity", c.analysis_fidelity);
    c.seed = j.value("seed", c.seed);
    c.swap_detectors = j.value("swapDetectors", c.swap_detectors);
    c.threads = j.value("threads", c.threads);
    return c;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

void write_counts_csv(std::ostream& os, const CountsTable& table, bool header) {
    if (header) os << "input,outcome,count\n";
    for (std::size_t i = 0; i < table.counts.size(); ++i) {
        os << csv_field(table.input_label) << ',' << csv_field(table.outcome_labels.at(i)) << ','
           << table.counts[i] << "\n";
    }
}

}  // namespace qclone
