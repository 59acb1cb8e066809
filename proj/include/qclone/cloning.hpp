#pragma once

// Optimal universal cloning: closed-form bounds and the symmetrization cloner
// simulated on the bosonic engine.

#include <vector>

#include "qclone/bosonic.hpp"
#include "qclone/hilbert.hpp"

namespace qclone {

inline constexpr int kDefaultCascadeCap = 6;

struct CloningSpec {
    int d = 4;
    int N = 1;
    int M = 2;

    void validate() const;
};

struct CloningOutcome {
    PureState input;
    double success_prob;
    DensityMatrix clone_state;  // logical coordinates
    double fidelity;
};

/// Optimal state-estimation fidelity from N copies, (N+1)/(N+d).
double f_est(int N, int d);

/// Optimal symmetric N -> M cloning fidelity, (M - N + N(M + d)) / (M(N + d)).
double f_clon(int N, int M, int d);

/// Closed-form 1 -> 2 outcome. `phi` must be an element of `basis`.
/// The clone is diag(F, (1-F)/(d-1), ...) in `basis` coordinates with F = 1/2 + 1/(d+1).
CloningOutcome clone_analytic(const PureState& phi, const LabeledBasis& basis);

/// 1 -> 2 symmetrization on the bosonic engine, ancilla written as the uniform
/// mixture over `ancilla_basis` (any orthonormal basis gives the same channel).
CloningOutcome clone_oracle(const PureState& phi, const LabeledBasis& ancilla_basis);
CloningOutcome clone_oracle(const PureState& phi, int d);

/// Relative weight of each ancilla branch among coalesced outcomes; sums to 1.
std::vector<double> ancilla_branch_weights(const PureState& phi, const LabeledBasis& ancilla_basis);

/// Cascaded N -> M cloner: M - N splitter stages, each adding a maximally mixed
/// ancilla and keeping only full coalescence. success_prob is the product of the
/// stage-conditional probabilities. Throws std::length_error when M exceeds `max_outputs`.
CloningOutcome cascade_clone(const PureState& phi, const CloningSpec& spec,
                             int max_outputs = kDefaultCascadeCap);
CloningOutcome cascade_clone(const PureState& phi, const CloningSpec& spec,
                             const LabeledBasis& ancilla_basis, int max_outputs = kDefaultCascadeCap);

}  // namespace qclone
