#include "qclone/cloning.hpp"

#include <stdexcept>
#include <string>

namespace qclone {

void CloningSpec::validate() const {
    if (d < 2) {
        throw std::invalid_argument("CloningSpec: d must be at least 2");
    }
    if (N < 1 || M <= N) {
        throw std::invalid_argument("CloningSpec: need 1 <= N < M (got N=" + std::to_string(N) +
                                    ", M=" + std::to_string(M) + ")");
    }
}

double f_est(int N, int d) {
    if (N < 1 || d < 2) {
        throw std::invalid_argument("f_est: need N >= 1 and d >= 2");
    }
    return (N + 1.0) / (static_cast<double>(N) + d);
}

double f_clon(int N, int M, int d) {
    CloningSpec{d, N, M}.validate();
    const double n = N;
    const double m = M;
    return (m - n + n * (m + d)) / (m * (n + d));
}

CloningOutcome clone_analytic(const PureState& phi, const LabeledBasis& basis) {
    const int idx = basis.index_of(phi);
    if (idx < 0) {
        throw std::invalid_argument("clone_analytic: input state is not an element of the basis");
    }
    const int d = basis.dim();
    const double fidelity = 0.5 + 1.0 / (d + 1.0);
    const double other = 1.0 / (2.0 * (d + 1.0));
    Matrix diag = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) diag(k, k) = (k == idx) ? fidelity : other;
    const Matrix b = basis.as_matrix();
    return CloningOutcome{basis[idx], (d + 1.0) / (2.0 * d), DensityMatrix(b * diag * b.adjoint()),
                          fidelity};
}

namespace {

struct CascadeAccumulator {
    Matrix weighted_rho;
    double weight = 0.0;
};

// One symmetrization stage per recursion level; ancilla mixtures are summed exactly.
void run_stages(const FockState& state, double weight, int remaining,
                const LabeledBasis& ancilla_basis, CascadeAccumulator& acc) {
    if (remaining == 0) {
        acc.weighted_rho += weight * reduced_single_photon(state, 0).mat();
        acc.weight += weight;
        return;
    }
    const double branch = 1.0 / ancilla_basis.size();
    for (const auto& ancilla : ancilla_basis.states()) {
        FockState out = beam_splitter(create_photon(state, 1, ancilla.amps()), 0, 1);
        Projection left = postselect_same_port(out, 0);
        // The other port carries the same conditional state up to a global phase.
        const double p = left.prob + postselect_same_port(out, 1).prob;
        if (left.empty()) continue;
        run_stages(left.conditional, weight * branch * p, remaining - 1, ancilla_basis, acc);
    }
}

}  // namespace

CloningOutcome cascade_clone(const PureState& phi, const CloningSpec& spec,
                             const LabeledBasis& ancilla_basis, int max_outputs) {
    spec.validate();
    if (phi.dim() != spec.d || ancilla_basis.dim() != spec.d) {
        throw std::invalid_argument("cascade_clone: state dimension does not match d");
    }
    if (spec.M > max_outputs) {
        throw std::length_error("cascade_clone: M=" + std::to_string(spec.M) +
                                " exceeds the Fock-space cap of " + std::to_string(max_outputs));
    }
    std::vector<std::pair<int, PureState>> photons(static_cast<std::size_t>(spec.N), {0, phi});
    const FockState initial = product_state(2, spec.d, photons);

    CascadeAccumulator acc{Matrix::Zero(spec.d, spec.d), 0.0};
    run_stages(initial, 1.0, spec.M - spec.N, ancilla_basis, acc);
    if (!(acc.weight > 0.0)) {
        throw std::runtime_error("cascade_clone: no coalescence outcome survived");
    }
    Matrix rho = acc.weighted_rho / acc.weight;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    DensityMatrix clone(std::move(rho));
    const double fid = fidelity_pure(clone, phi);
    return CloningOutcome{phi, acc.weight, std::move(clone), fid};
}

CloningOutcome cascade_clone(const PureState& phi, const CloningSpec& spec, int max_outputs) {
    return cascade_clone(phi, spec, computational_basis(spec.d), max_outputs);
}

CloningOutcome clone_oracle(const PureState& phi, const LabeledBasis& ancilla_basis) {
    return cascade_clone(phi, CloningSpec{phi.dim(), 1, 2}, ancilla_basis);
}

CloningOutcome clone_oracle(const PureState& phi, int d) {
    if (phi.dim() != d) {
        throw std::invalid_argument("clone_oracle: state dimension does not match d");
    }
    return clone_oracle(phi, computational_basis(d));
}

std::vector<double> ancilla_branch_weights(const PureState& phi, const LabeledBasis& ancilla_basis) {
    if (phi.dim() != ancilla_basis.dim()) {
        throw std::invalid_argument("ancilla_branch_weights: dimension mismatch");
    }
    std::vector<double> w;
    double total = 0.0;
    for (const auto& ancilla : ancilla_basis.states()) {
        FockState out = beam_splitter(product_state(2, phi.dim(), {{0, phi}, {1, ancilla}}), 0, 1);
        const double p = postselect_same_port(out, 0).prob + postselect_same_port(out, 1).prob;
        w.push_back(p);
        total += p;
    }
    for (auto& x : w) x /= total;
    return w;
}

}  // namespace qclone
