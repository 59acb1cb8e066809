#pragma once

// Monte Carlo model of the two-splitter cloning apparatus and its coincidence-count
// estimator.
//
// One trial: prepare the signal (with preparation error), draw the ancilla from the
// randomization basis, interfere them on BS1, keep same-port pairs, separate them on
// BS2, keep one photon per detector, and measure both detectors in the analysis basis.
// The filter detector must report the input state; the other detector's outcome is
// counted.

#include <cstdint>
#include <string>
#include <vector>

#include "qclone/hilbert.hpp"
#include "qclone/rng.hpp"

namespace qclone {

struct ExperimentConfig {
    std::uint64_t shots = 100000;  // post-selected coincidences to collect
    double v = 1.0;                // wavepacket overlap at zero delay
    std::vector<double> ancilla_weights;  // empty means uniform
    std::string ancilla_basis = "I";      // basis the ancilla is randomized over
    double prep_fidelity = 1.0;
    double analysis_fidelity = 1.0;
    std::uint64_t seed = 0;
    bool swap_detectors = false;  // detector 2 filters, detector 1 resolves
    unsigned threads = 0;         // 0 = hardware concurrency; never changes results

    /// Throws std::invalid_argument for out-of-range fields or a bad weight vector.
    void validate(int dim) const;
    std::vector<double> weights(int dim) const;
};

struct CountsTable {
    std::string input_label;
    std::string basis_label;
    int input_index = 0;
    std::vector<std::string> outcome_labels;
    std::vector<std::uint64_t> counts;  // N_{phi,i}
    std::uint64_t trials = 0;           // source pairs simulated
    ExperimentConfig config;
};

struct EstimationResult {
    std::vector<double> probs;  // p(i|phi)
    double fidelity = 0.0;
    double std_error = 0.0;
};

/// Joint detection probabilities for one signal/ancilla pair, P(filter = j, resolver = i),
/// including the post-selection losses; `total` is their sum.
struct DetectionDistribution {
    int dim = 0;
    std::vector<double> joint;  // row-major [j * dim + i]
    double total = 0.0;

    double at(int j, int i) const { return joint[static_cast<std::size_t>(j * dim + i)]; }
};

DetectionDistribution detection_distribution(const PureState& signal, const PureState& ancilla,
                                             double overlap, const LabeledBasis& analysis);

/// The same probabilities as quadratic forms in the signal amplitudes,
/// P(j, i | s) = s^dag Q_ji s, recovered exactly from d^2 engine evaluations on
/// probe states e_k, (e_k + e_l)/sqrt2 and (e_k + i e_l)/sqrt2.
class DetectionModel {
public:
    DetectionModel(const PureState& ancilla, double overlap, const LabeledBasis& analysis);

    DetectionDistribution evaluate(const PureState& signal) const;

private:
    int dim_;
    std::vector<Matrix> forms_;  // [j * dim + i]
};

int sample_ancilla_index(SplitMix64& rng, const std::vector<double>& weights);

PureState randomize_ancilla(SplitMix64& rng, const ExperimentConfig& config,
                            const LabeledBasis& basis);

/// Returns psi with probability f, otherwise a Haar-random state orthogonal to psi,
/// so the mean overlap |<psi|out>|^2 is exactly f.
PureState apply_infidelity(const PureState& psi, double f, SplitMix64& rng);

/// Records outcome k with probability f, otherwise a uniformly drawn other outcome.
int apply_readout_error(int outcome, int dim, double f, SplitMix64& rng);

CountsTable run_cloning_experiment(const LabeledBasis& basis, int phi_index,
                                   const ExperimentConfig& config);

/// N = N_pp + 2 sum_{i != p} N_pi;  p(i|p) = N_pi / N;  p(p|p) = (N_pp + sum_{i != p} N_pi) / N.
EstimationResult estimate_probabilities(const CountsTable& table, int phi_index);
EstimationResult estimate_probabilities(const CountsTable& table);

struct Replication {
    std::string basis_label;
    std::vector<CountsTable> tables;
    std::vector<EstimationResult> results;
    double mean_fidelity = 0.0;
    double mean_error = 0.0;
};

/// Clones every element of basis "I" or "IV"; input k runs with seed derive_seed(seed, k).
Replication replicate_table(const std::string& basis_name, const ExperimentConfig& config);

/// "State | Fidelity" table with one row per input plus the average.
std::string format_replication(const Replication& rep);

}  // namespace qclone
