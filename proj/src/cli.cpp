#include "qclone/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "qclone/bosonic.hpp"
#include "qclone/cloning.hpp"
#include "qclone/experiment.hpp"
#include "qclone/io.hpp"

namespace qclone::cli {

namespace {

constexpr const char* kOutDirEnv = "QCLONE_OUT_DIR";

std::string fmt6(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// "1", "-0.5", "0.5j", "0.3-0.2j", "1e-3+2e-1j"
cplx parse_complex(const std::string& raw) {
    const std::string tok = trim(raw);
    if (tok.empty()) throw std::invalid_argument("empty amplitude");
    const char* s = tok.c_str();
    char* end = nullptr;
    const double first = std::strtod(s, &end);
    if (end == s) {
        if (tok == "j" || tok == "+j") return {0.0, 1.0};
        if (tok == "-j") return {0.0, -1.0};
        throw std::invalid_argument("cannot parse amplitude '" + tok + "'");
    }
    std::string rest(end);
    if (rest.empty()) return {first, 0.0};
    if (rest == "j") return {0.0, first};
    const char* r = rest.c_str();
    char* rend = nullptr;
    double second = std::strtod(r, &rend);
    if (rend == r) {
        if (rest == "+j") second = 1.0, rend = const_cast<char*>(r) + 1;
        else if (rest == "-j") second = -1.0, rend = const_cast<char*>(r) + 1;
        else throw std::invalid_argument("cannot parse amplitude '" + tok + "'");
    }
    if (std::string(rend) != "j") {
        throw std::invalid_argument("cannot parse amplitude '" + tok + "'");
    }
    return {first, second};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

bool is_named_spec(const std::string& spec) { return spec.find(':') != std::string::npos; }

int amplitude_count(const std::string& spec) {
    return is_named_spec(spec) ? -1 : static_cast<int>(split(spec, ',').size());
}

std::string named_label(const std::string& spec) {
    const auto colon = spec.find(':');
    return spec.substr(0, colon);
}

std::vector<double> parse_weights(const std::string& s) {
    std::vector<double> w;
    for (const auto& part : split(s, ',')) {
        try {
            std::size_t used = 0;
            const std::string t = trim(part);
            w.push_back(std::stod(t, &used));
            if (used != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse ancilla weight '" + part + "'");
        }
    }
    return w;
}

std::filesystem::path output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutDirEnv)) return env;
    return {};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

struct FormulasArgs {
    int n = 1;
    int m = 2;
    int d = 4;
    bool json = false;
};

struct CloneArgs {
    std::string input = "I:1";
    int d = 4;
    std::string mode = "oracle";
    bool json = false;
};

struct HomArgs {
    std::string input_s = "I:4";
    std::string input_a;
    int d = 4;
    double tau_min = -600.0;
    double tau_max = 600.0;
    int steps = 61;
    double v = 1.0;
    double bandwidth_nm = 4.5;
    double wavelength_nm = 795.0;
    bool json = false;
};

struct ExperimentArgs {
    std::string basis = "I";
    std::string config_path;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 0;
    double v = 1.0;
    double prep_fid = 1.0;
    double analysis_fid = 1.0;
    std::string weights;
    std::string ancilla_basis = "I";
    unsigned threads = 0;
    bool swap = false;
    bool json = false;
    bool table = false;
    std::string out_dir;
};

struct CascadeArgs {
    int n = 1;
    int m = 2;
    int d = 4;
    std::string input = "I:1";
    int cap = kDefaultCascadeCap;
    bool json = false;
};

int cmd_formulas(const FormulasArgs& a, std::ostream& out) {
    const double fe = f_est(a.n, a.d);
    const double fc = f_clon(a.n, a.m, a.d);
    if (a.json) {
        out << json{{"N", a.n}, {"M", a.m}, {"d", a.d}, {"f_est", fe}, {"f_clon", fc},
                    {"gap", fc - fe}}
                   .dump(2)
            << "\n";
        return kOk;
    }
    out << "f_est(N=" << a.n << ", d=" << a.d << ") = " << fmt6(fe) << "\n";
    out << "f_clon(N=" << a.n << ", M=" << a.m << ", d=" << a.d << ") = " << fmt6(fc) << "\n";
    out << "gap = " << fmt6(fc - fe) << "\n";
    return kOk;
}

void print_matrix(std::ostream& out, const Matrix& m) {
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            const cplx z = m(r, c);
            out << "  " << fmt6(z.real());
            if (std::abs(z.imag()) > 1e-12) out << (z.imag() < 0 ? "-" : "+") << fmt6(std::abs(z.imag())) << "j";
        }
        out << "\n";
    }
}

int cmd_clone(const CloneArgs& a, bool d_given, std::ostream& out, std::ostream& err) {
    int d = a.d;
    if (!d_given && amplitude_count(a.input) > 0) d = amplitude_count(a.input);
    const PureState phi = parse_input_spec(a.input, d, err);
    LabeledBasis basis = is_named_spec(a.input) ? named_basis(named_label(a.input), d)
                                                : adapted_basis(phi);
    CloningOutcome outcome = a.mode == "analytic" ? clone_analytic(phi, basis) : clone_oracle(phi, d);
    const CloningSpec spec{d, 1, 2};
    if (a.json) {
        json j = to_json(outcome, spec);
        j["mode"] = a.mode;
        j["input"] = to_json(phi);
        out << j.dump(2) << "\n";
        return kOk;
    }
    out << "mode: " << a.mode << "\n";
    out << "d: " << d << "\n";
    out << "fidelity: " << fmt6(outcome.fidelity) << "\n";
    out << "successProb: " << fmt6(outcome.success_prob) << "\n";
    out << "cloneState (basis " << (is_named_spec(a.input) ? named_label(a.input) : "adapted")
        << " coordinates):\n";
    print_matrix(out, in_basis(outcome.clone_state, basis));
    return kOk;
}

int cmd_hom(const HomArgs& a, std::ostream& out, std::ostream& err) {
    if (a.steps < 1 || a.tau_min > a.tau_max || (a.steps == 1 && a.tau_min != a.tau_max)) {
        throw std::invalid_argument("invalid delay range (need tau-min <= tau-max and steps >= 1)");
    }
    const PureState s = parse_input_spec(a.input_s, a.d, err);
    const PureState anc = parse_input_spec(a.input_a.empty() ? a.input_s : a.input_a, a.d, err);
    DistinguishabilityModel model;
    model.v = a.v;
    model.bandwidth_nm = a.bandwidth_nm;
    model.wavelength_nm = a.wavelength_nm;
    std::vector<double> delays;
    for (int k = 0; k < a.steps; ++k) {
        delays.push_back(a.steps == 1 ? a.tau_min
                                      : a.tau_min + (a.tau_max - a.tau_min) * k / (a.steps - 1));
    }
    const auto curve = hom_curve(s, anc, delays, model);
    if (a.json) {
        json pts = json::array();
        for (const auto& p : curve) pts.push_back({{"delay_fs", p.delay_fs}, {"R", p.enhancement}});
        out << json{{"coherenceTimeFs", model.coherence_time_fs()}, {"points", pts}}.dump(2) << "\n";
        return kOk;
    }
    out << "delay_fs,R\n";
    for (const auto& p : curve) out << fmt6(p.delay_fs) << "," << fmt6(p.enhancement) << "\n";
    return kOk;
}

ExperimentConfig build_config(const ExperimentArgs& a, const CLI::App& sub) {
    ExperimentConfig c;
    if (!a.config_path.empty()) {
        std::ifstream f(a.config_path);
        if (!f) throw std::invalid_argument("cannot open config file " + a.config_path);
        json j;
        try {
            f >> j;
        } catch (const json::exception& e) {
            throw std::invalid_argument(std::string("config file is not valid JSON: ") + e.what());
        }
        c = config_from_json(j);
    }
    auto given = [&](const char* flag) { return sub.count(flag) > 0; };
    if (given("--shots")) c.shots = a.shots;
    if (given("--seed")) c.seed = a.seed;
    if (given("--v")) c.v = a.v;
    if (given("--prep-fid")) c.prep_fidelity = a.prep_fid;
    if (given("--analysis-fid")) c.analysis_fidelity = a.analysis_fid;
    if (given("--ancilla-weights")) c.ancilla_weights = parse_weights(a.weights);
    if (given("--ancilla-basis")) c.ancilla_basis = a.ancilla_basis;
    if (given("--threads")) c.threads = a.threads;
    if (given("--swap-detectors")) c.swap_detectors = a.swap;
    return c;
}

std::string experiment_csv(const Replication& rep) {
    std::ostringstream os;
    os << "input,outcome,count,p\n";
    for (std::size_t k = 0; k < rep.tables.size(); ++k) {
        const auto& t = rep.tables[k];
        for (std::size_t i = 0; i < t.counts.size(); ++i) {
            os << csv_field(t.input_label) << ',' << csv_field(t.outcome_labels[i]) << ','
               << t.counts[i] << ',' << fmt6(rep.results[k].probs[i]) << "\n";
        }
    }
    return os.str();
}

int cmd_experiment(const ExperimentArgs& a, const CLI::App& sub, std::ostream& out) {
    const ExperimentConfig config = build_config(a, sub);
    const Replication rep = replicate_table(a.basis, config);
    json summary = to_json(rep);
    summary["config"] = to_json(config);
    const std::string csv = experiment_csv(rep);

    const auto dir = output_dir(a.out_dir);
    if (!dir.empty()) {
        write_file(dir / ("experiment_" + a.basis + "_counts.csv"), csv);
        write_file(dir / ("experiment_" + a.basis + "_summary.json"), summary.dump(2) + "\n");
    }
    if (a.json) {
        out << summary.dump(2) << "\n";
    } else if (a.table) {
        out << format_replication(rep);
    } else {
        out << csv;
    }
    return kOk;
}

int cmd_cascade(const CascadeArgs& a, std::ostream& out, std::ostream& err) {
    const CloningSpec spec{a.d, a.n, a.m};
    spec.validate();
    if (a.m > a.cap) {
        throw std::invalid_argument("M=" + std::to_string(a.m) + " exceeds the Fock-space cap of " +
                                    std::to_string(a.cap) + "; raise it with --cap");
    }
    const PureState phi = parse_input_spec(a.input, a.d, err);
    const CloningOutcome outcome = cascade_clone(phi, spec, a.cap);
    const double formula = f_clon(a.n, a.m, a.d);
    if (a.json) {
        json j = to_json(outcome, spec);
        j["formulaFidelity"] = formula;
        j["difference"] = outcome.fidelity - formula;
        out << j.dump(2) << "\n";
        return kOk;
    }
    out << "cascade " << a.n << "->" << a.m << " d=" << a.d << "\n";
    out << "cascade fidelity: " << fmt6(outcome.fidelity) << "\n";
    out << "formula fidelity: " << fmt6(formula) << "\n";
    out << "difference: " << fmt6(outcome.fidelity - formula) << "\n";
    out << "successProb: " << fmt6(outcome.success_prob) << "\n";
    return kOk;
}

}  // namespace

PureState parse_input_spec(const std::string& spec, int dim, std::ostream& warn) {
    if (is_named_spec(spec)) {
        const std::string name = named_label(spec);
        const std::string idx = spec.substr(spec.find(':') + 1);
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(idx, &used);
            if (used != idx.size()) throw std::invalid_argument(idx);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad basis index in input spec '" + spec + "'");
        }
        const LabeledBasis basis = named_basis(name, dim);
        if (k < 1 || k > basis.size()) {
            throw std::invalid_argument("basis index out of range in input spec '" + spec + "'");
        }
        return basis[k - 1];
    }
    const auto parts = split(spec, ',');
    if (static_cast<int>(parts.size()) != dim) {
        throw std::invalid_argument("input spec has " + std::to_string(parts.size()) +
                                    " amplitudes but d=" + std::to_string(dim));
    }
    Vector v(dim);
    for (int k = 0; k < dim; ++k) v(k) = parse_complex(parts[k]);
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > 1e-6) {
        warn << "qclone: warning: input amplitudes have norm " << fmt6(norm) << "; normalizing\n";
    }
    return PureState::normalized(std::move(v));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal quantum cloning by photon symmetrization"};
    app.name("qclone");
    app.require_subcommand(1);

    FormulasArgs fa;
    auto* formulas = app.add_subcommand("formulas", "Optimal estimation and cloning fidelities");
    formulas->add_option("--n", fa.n, "Input copies N")->check(CLI::PositiveNumber);
    formulas->add_option("--m", fa.m, "Output copies M");
    formulas->add_option("--d", fa.d, "Dimension d");
    formulas->add_flag("--json", fa.json, "Full-precision JSON output");

    CloneArgs ca;
    auto* clone = app.add_subcommand("clone", "1->2 cloning of one input state");
    clone->add_option("--input", ca.input, "Basis element like I:1 / IV:3, or amplitudes re+imj,...");
    auto* clone_d = clone->add_option("--d", ca.d, "Dimension d");
    clone->add_option("--mode", ca.mode, "analytic or oracle")
        ->check(CLI::IsMember({"analytic", "oracle"}));
    clone->add_flag("--json", ca.json, "Full-precision JSON output");

    HomArgs ha;
    auto* hom = app.add_subcommand("hom", "Coalescence enhancement versus delay");
    hom->add_option("--input-s", ha.input_s, "Signal state spec");
    hom->add_option("--input-a", ha.input_a, "Ancilla state spec (defaults to the signal)");
    hom->add_option("--d", ha.d, "Dimension d");
    hom->add_option("--tau-min", ha.tau_min, "First delay [fs]");
    hom->add_option("--tau-max", ha.tau_max, "Last delay [fs]");
    hom->add_option("--steps", ha.steps, "Number of delay samples");
    hom->add_option("--v", ha.v, "Wavepacket overlap at zero delay")->check(CLI::Range(0.0, 1.0));
    hom->add_option("--bandwidth-nm", ha.bandwidth_nm, "Spectral FWHM [nm]");
    hom->add_option("--wavelength-nm", ha.wavelength_nm, "Central wavelength [nm]");
    hom->add_flag("--json", ha.json, "Full-precision JSON output");

    ExperimentArgs ea;
    auto* exp = app.add_subcommand("experiment", "Monte Carlo coincidence-count replication");
    exp->add_option("--basis", ea.basis, "I or IV")->check(CLI::IsMember({"I", "IV"}));
    exp->add_option("--config", ea.config_path, "JSON config file; flags override it");
    exp->add_option("--shots", ea.shots, "Post-selected coincidences per input");
    exp->add_option("--seed", ea.seed, "RNG seed");
    exp->add_option("--v", ea.v, "Wavepacket overlap")->check(CLI::Range(0.0, 1.0));
    exp->add_option("--prep-fid", ea.prep_fid, "Preparation fidelity")->check(CLI::Range(0.0, 1.0));
    exp->add_option("--analysis-fid", ea.analysis_fid, "Analysis fidelity")
        ->check(CLI::Range(0.0, 1.0));
    exp->add_option("--ancilla-weights", ea.weights, "Comma-separated ancilla probabilities");
    exp->add_option("--ancilla-basis", ea.ancilla_basis, "Ancilla randomization basis")
        ->check(CLI::IsMember({"I", "IV"}));
    exp->add_option("--threads", ea.threads, "Worker threads (0 = all cores)");
    exp->add_flag("--swap-detectors", ea.swap, "Filter on detector 2 instead of detector 1");
    exp->add_flag("--json", ea.json, "Print the JSON summary instead of CSV");
    exp->add_flag("--table", ea.table, "Print the fidelity table instead of CSV");
    exp->add_option("--out-dir", ea.out_dir,
                    std::string("Also write CSV and JSON here (default $") + kOutDirEnv + ")");

    CascadeArgs sa;
    auto* cascade = app.add_subcommand("cascade", "Cascaded N->M symmetrization cloner");
    cascade->add_option("--n", sa.n, "Input copies N");
    cascade->add_option("--m", sa.m, "Output copies M");
    cascade->add_option("--d", sa.d, "Dimension d");
    cascade->add_option("--input", sa.input, "Input state spec");
    cascade->add_option("--cap", sa.cap, "Largest M allowed");
    cascade->add_flag("--json", sa.json, "Full-precision JSON output");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "qclone: error[usage]: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*formulas) return cmd_formulas(fa, out);
        if (*clone) return cmd_clone(ca, clone_d->count() > 0, out, err);
        if (*hom) return cmd_hom(ha, out, err);
        if (*exp) return cmd_experiment(ea, *exp, out);
        if (*cascade) return cmd_cascade(sa, out, err);
    } catch (const std::invalid_argument& e) {
        err << "qclone: error[usage]: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "qclone: error[runtime]: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}

}  // namespace qclone::cli
