#include "qclone/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qclone/bosonic.hpp"

namespace qclone {

namespace {

constexpr std::uint64_t kBlockTrials = 16384;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void ExperimentConfig::validate(int dim) const {
    if (shots == 0) {
        throw std::invalid_argument("ExperimentConfig: shots must be positive");
    }
    if (!in_unit_interval(v)) {
        throw std::invalid_argument("ExperimentConfig: v must lie in [0, 1]");
    }
    if (!in_unit_interval(prep_fidelity) || !in_unit_interval(analysis_fidelity)) {
        throw std::invalid_argument("ExperimentConfig: fidelities must lie in [0, 1]");
    }
    if (!ancilla_weights.empty()) {
        if (static_cast<int>(ancilla_weights.size()) != dim) {
            throw std::invalid_argument("ExperimentConfig: ancilla weights need one entry per level");
        }
        double sum = 0.0;
        for (double w : ancilla_weights) {
            if (!(w >= 0.0)) {
                throw std::invalid_argument("ExperimentConfig: ancilla weights must be nonnegative");
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw std::invalid_argument("ExperimentConfig: ancilla weights must sum to 1");
        }
    }
}

std::vector<double> ExperimentConfig::weights(int dim) const {
    if (ancilla_weights.empty()) {
        return std::vector<double>(static_cast<std::size_t>(dim), 1.0 / dim);
    }
    return ancilla_weights;
}

DetectionDistribution detection_distribution(const PureState& signal, const PureState& ancilla,
                                             double overlap, const LabeledBasis& analysis) {
    const int d = signal.dim();
    if (ancilla.dim() != d || analysis.dim() != d) {
        throw std::invalid_argument("detection_distribution: dimension mismatch");
    }
    const int d2 = 2 * d;
    FockState in = product_state(
        2, d2, {{0, temporal_extension(signal, 1.0)}, {1, temporal_extension(ancilla, overlap)}});
    FockState bs1 = beam_splitter(in, 0, 1);

    // Both BS1 outputs hold the same pair up to a global phase; follow port 0 and
    // credit it with the coalescence probability of both.
    Projection same = postselect_same_port(bs1, 0);
    const double p_same = same.prob + postselect_same_port(bs1, 1).prob;

    DetectionDistribution dist{d, std::vector<double>(static_cast<std::size_t>(d * d), 0.0), 0.0};
    if (same.empty()) return dist;

    const int one_each[2] = {1, 1};
    Projection split = project_port_counts(beam_splitter(same.conditional, 0, 1), one_each);
    if (split.empty()) return dist;

    // Rotate each arm into the analysis basis; the temporal label is traced out.
    Matrix rot = Matrix::Zero(d2, d2);
    const Matrix b_adj = analysis.as_matrix().adjoint();
    rot.block(0, 0, d, d) = b_adj;
    rot.block(d, d, d, d) = b_adj;
    FockState measured = apply_internal(apply_internal(split.conditional, 0, rot), 1, rot);

    const double scale = p_same * split.prob;
    for (const auto& [occ, amp] : measured.terms()) {
        int j = -1;
        int i = -1;
        for (int k = 0; k < d2; ++k) {
            if (occ[k]) j = k % d;
            if (occ[d2 + k]) i = k % d;
        }
        const double p = scale * std::norm(amp);
        dist.joint[static_cast<std::size_t>(j * d + i)] += p;
        dist.total += p;
    }
    return dist;
}

DetectionModel::DetectionModel(const PureState& ancilla, double overlap,
                               const LabeledBasis& analysis)
    : dim_(ancilla.dim()) {
    const int d = dim_;
    const double h = 1.0 / std::sqrt(2.0);
    forms_.assign(static_cast<std::size_t>(d * d), Matrix::Zero(d, d));
    auto probe = [&](Vector v) {
        return detection_distribution(PureState(std::move(v)), ancilla, overlap, analysis);
    };
    std::vector<DetectionDistribution> diag;
    for (int k = 0; k < d; ++k) {
        diag.push_back(probe(Vector::Unit(d, k)));
        for (int c = 0; c < d * d; ++c) forms_[c](k, k) = diag[k].joint[c];
    }
    for (int k = 0; k < d; ++k) {
        for (int l = k + 1; l < d; ++l) {
            Vector plus = Vector::Zero(d);
            plus(k) = h;
            plus(l) = h;
            Vector phase = Vector::Zero(d);
            phase(k) = h;
            phase(l) = cplx(0.0, h);
            const auto p_plus = probe(plus);
            const auto p_phase = probe(phase);
            for (int c = 0; c < d * d; ++c) {
                const double mean = 0.5 * (diag[k].joint[c] + diag[l].joint[c]);
                const cplx q(p_plus.joint[c] - mean, mean - p_phase.joint[c]);
                forms_[c](k, l) = q;
                forms_[c](l, k) = std::conj(q);
            }
        }
    }
}

DetectionDistribution DetectionModel::evaluate(const PureState& signal) const {
    if (signal.dim() != dim_) {
        throw std::invalid_argument("DetectionModel: dimension mismatch");
    }
    DetectionDistribution dist{dim_, std::vector<double>(forms_.size(), 0.0), 0.0};
    for (std::size_t c = 0; c < forms_.size(); ++c) {
        const double p = std::max(0.0, signal.amps().dot(forms_[c] * signal.amps()).real());
        dist.joint[c] = p;
        dist.total += p;
    }
    return dist;
}

int sample_ancilla_index(SplitMix64& rng, const std::vector<double>& weights) {
    const double u = uniform01(rng);
    double acc = 0.0;
    int last = 0;
    for (int k = 0; k < static_cast<int>(weights.size()); ++k) {
        if (weights[k] <= 0.0) continue;
        acc += weights[k];
        last = k;
        if (u < acc) return k;
    }
    return last;
}

PureState randomize_ancilla(SplitMix64& rng, const ExperimentConfig& config,
                            const LabeledBasis& basis) {
    return basis[sample_ancilla_index(rng, config.weights(basis.dim()))];
}

PureState apply_infidelity(const PureState& psi, double f, SplitMix64& rng) {
    if (!in_unit_interval(f)) {
        throw std::invalid_argument("apply_infidelity: f must lie in [0, 1]");
    }
    if (f >= 1.0 || uniform01(rng) < f) return psi;
    return haar_orthogonal_state(psi, rng);
}

int apply_readout_error(int outcome, int dim, double f, SplitMix64& rng) {
    if (f >= 1.0 || uniform01(rng) < f) return outcome;
    const int other = static_cast<int>(uniform01(rng) * (dim - 1));
    return other < outcome ? other : other + 1;
}

CountsTable run_cloning_experiment(const LabeledBasis& basis, int phi_index,
                                   const ExperimentConfig& config) {
    const int d = basis.dim();
    config.validate(d);
    if (phi_index < 0 || phi_index >= d) {
        throw std::invalid_argument("run_cloning_experiment: input index out of range");
    }
    const LabeledBasis ancilla_basis = named_basis(config.ancilla_basis, d);
    const std::vector<double> weights = config.weights(d);
    const PureState& phi = basis[phi_index];

    std::vector<DetectionDistribution> ideal_signal;
    std::vector<DetectionModel> noisy_signal;
    for (const auto& a : ancilla_basis.states()) {
        ideal_signal.push_back(detection_distribution(phi, a, config.v, basis));
        if (config.prep_fidelity < 1.0) noisy_signal.emplace_back(a, config.v, basis);
    }

    // Outcome slot of trial t: the resolver's reading, or -1 when no count is recorded.
    auto trial = [&](std::uint64_t t) -> int {
        SplitMix64 rng = derive_stream(config.seed, t);
        const int a = sample_ancilla_index(rng, weights);
        DetectionDistribution fresh;
        const DetectionDistribution* dist = &ideal_signal[a];
        if (config.prep_fidelity < 1.0 && uniform01(rng) >= config.prep_fidelity) {
            fresh = noisy_signal[a].evaluate(haar_orthogonal_state(phi, rng));
            dist = &fresh;
        }
        const double u = uniform01(rng);
        if (u >= dist->total) return -1;
        double acc = 0.0;
        int cell = d * d - 1;
        for (int k = 0; k < d * d; ++k) {
            acc += dist->joint[k];
            if (u < acc) {
                cell = k;
                break;
            }
        }
        const int det1 = apply_readout_error(cell / d, d, config.analysis_fidelity, rng);
        const int det2 = apply_readout_error(cell % d, d, config.analysis_fidelity, rng);
        const int filter = config.swap_detectors ? det2 : det1;
        const int resolver = config.swap_detectors ? det1 : det2;
        return filter == phi_index ? resolver : -1;
    };

    CountsTable table;
    table.input_label = basis.labels()[phi_index];
    table.input_index = phi_index;
    table.outcome_labels = basis.labels();
    table.counts.assign(static_cast<std::size_t>(d), 0);
    table.config = config;

    unsigned workers = config.threads ? config.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, workers);
    const std::uint64_t trial_cap = 1000 * config.shots + 10'000'000;

    std::vector<int> slots(kBlockTrials);
    std::uint64_t collected = 0;
    std::uint64_t start = 0;
    while (collected < config.shots) {
        if (start >= trial_cap) {
            throw std::runtime_error("run_cloning_experiment: coincidence rate too low to reach shots");
        }
        const std::uint64_t chunk = (kBlockTrials + workers - 1) / workers;
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = w * chunk;
            const std::uint64_t hi = std::min<std::uint64_t>(kBlockTrials, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                for (std::uint64_t k = lo; k < hi; ++k) slots[k] = trial(start + k);
            });
        }
        pool.clear();
        for (std::uint64_t k = 0; k < kBlockTrials && collected < config.shots; ++k) {
            ++table.trials;
            if (slots[k] >= 0) {
                ++table.counts[slots[k]];
                ++collected;
            }
        }
        start += kBlockTrials;
    }
    return table;
}

EstimationResult estimate_probabilities(const CountsTable& table, int phi_index) {
    const int d = static_cast<int>(table.counts.size());
    if (phi_index < 0 || phi_index >= d) {
        throw std::invalid_argument("estimate_probabilities: input index out of range");
    }
    const double same = static_cast<double>(table.counts[phi_index]);
    double others = 0.0;
    for (int i = 0; i < d; ++i) {
        if (i != phi_index) others += static_cast<double>(table.counts[i]);
    }
    const double norm = same + 2.0 * others;
    if (!(norm > 0.0)) {
        throw std::invalid_argument("estimate_probabilities: all counts are zero");
    }
    EstimationResult r;
    r.probs.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        r.probs[i] = (i == phi_index) ? (same + others) / norm
                                      : static_cast<double>(table.counts[i]) / norm;
    }
    r.fidelity = r.probs[phi_index];
    // F = n / (2n - x) with x = N_pp ~ Binomial(n, x/n).
    const double n = same + others;
    const double q = same / n;
    r.std_error = n / (norm * norm) * std::sqrt(n * q * (1.0 - q));
    return r;
}

EstimationResult estimate_probabilities(const CountsTable& table) {
    return estimate_probabilities(table, table.input_index);
}

Replication replicate_table(const std::string& basis_name, const ExperimentConfig& config) {
    const LabeledBasis basis = named_basis(basis_name, 4);
    Replication rep;
    rep.basis_label = basis_name;
    double var = 0.0;
    for (int k = 0; k < basis.size(); ++k) {
        ExperimentConfig c = config;
        c.seed = derive_seed(config.seed, static_cast<std::uint64_t>(k));
        CountsTable t = run_cloning_experiment(basis, k, c);
        t.basis_label = basis_name;
        EstimationResult r = estimate_probabilities(t);
        rep.mean_fidelity += r.fidelity / basis.size();
        var += r.std_error * r.std_error;
        rep.tables.push_back(std::move(t));
        rep.results.push_back(std::move(r));
    }
    rep.mean_error = std::sqrt(var) / basis.size();
    return rep;
}

std::string format_replication(const Replication& rep) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3);
    os << "State | Fidelity\n";
    for (std::size_t k = 0; k < rep.results.size(); ++k) {
        os << "|" << (k + 1) << "_" << rep.basis_label << "> | (" << rep.results[k].fidelity
           << " +/- " << rep.results[k].std_error << ")\n";
    }
    os << "average | (" << rep.mean_fidelity << " +/- " << rep.mean_error << ")\n";
    return os.str();
}

}  // namespace qclone
