#include "qclone/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qclone {

namespace {

void require_same_dim(int a, int b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

PureState::PureState(Vector amps) : amps_(std::move(amps)) {
    if (amps_.size() < 2) {
        throw std::invalid_argument("PureState: dimension must be at least 2");
    }
    if (std::abs(amps_.squaredNorm() - 1.0) > kStructuralTol) {
        throw std::invalid_argument("PureState: amplitudes are not normalized");
    }
}

PureState PureState::normalized(Vector amps) {
    const double n = amps.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("PureState: cannot normalize a zero or non-finite vector");
    }
    amps /= n;
    return PureState(std::move(amps));
}

PureState PureState::basis_vector(int dim, int index) {
    if (index < 0 || index >= dim) {
        throw std::invalid_argument("PureState: basis index out of range");
    }
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(Matrix mat) : mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 2) {
        throw std::invalid_argument("DensityMatrix: must be square with dimension >= 2");
    }
    if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > kDensityTol) {
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (std::abs(mat_.trace() - cplx(1.0)) > kDensityTol) {
        throw std::invalid_argument("DensityMatrix: trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kEigenFloor) {
        throw std::invalid_argument("DensityMatrix: not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(psi.amps() * psi.amps().adjoint());
}

double DensityMatrix::purity() const {
    return (mat_ * mat_).trace().real();
}

LabeledBasis::LabeledBasis(std::vector<PureState> states, std::vector<std::string> labels)
    : states_(std::move(states)), labels_(std::move(labels)) {
    if (states_.empty()) {
        throw std::invalid_argument("LabeledBasis: empty");
    }
    const int d = states_.front().dim();
    if (static_cast<int>(states_.size()) != d || labels_.size() != states_.size()) {
        throw std::invalid_argument("LabeledBasis: need exactly d states and d labels");
    }
    for (int i = 0; i < d; ++i) {
        require_same_dim(states_[i].dim(), d, "LabeledBasis");
        for (int j = 0; j < d; ++j) {
            const double expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(std::abs(inner(states_[i], states_[j])) - expected) > kStructuralTol) {
                throw std::invalid_argument("LabeledBasis: states are not orthonormal");
            }
        }
    }
}

Matrix LabeledBasis::as_matrix() const {
    Matrix m(dim(), size());
    for (int j = 0; j < size(); ++j) {
        m.col(j) = states_[j].amps();
    }
    return m;
}

int LabeledBasis::index_of(const PureState& psi, double tol) const {
    if (psi.dim() != dim()) {
        return -1;
    }
    for (int i = 0; i < size(); ++i) {
        if (std::abs(std::abs(inner(states_[i], psi)) - 1.0) < tol) {
            return i;
        }
    }
    return -1;
}

cplx inner(const PureState& a, const PureState& b) {
    require_same_dim(a.dim(), b.dim(), "inner");
    return a.amps().dot(b.amps());
}

LabeledBasis basis_logical() {
    std::vector<PureState> s;
    for (int k = 0; k < 4; ++k) {
        s.push_back(PureState::basis_vector(4, k));
    }
    return LabeledBasis(std::move(s), {"R,+2", "R,-2", "L,+2", "L,-2"});
}

LabeledBasis basis_four() {
    const double h = 1.0 / std::sqrt(2.0);
    auto make = [](std::initializer_list<double> v) {
        Vector out(4);
        int k = 0;
        for (double x : v) out(k++) = x;
        return PureState(std::move(out));
    };
    std::vector<PureState> s{
        make({h, 0, 0, h}),
        make({h, 0, 0, -h}),
        make({0, h, h, 0}),
        make({0, -h, h, 0}),
    };
    return LabeledBasis(std::move(s), {"(R,+2 + L,-2)/√2", "(R,+2 - L,-2)/√2",
                                       "(L,+2 + R,-2)/√2", "(L,+2 - R,-2)/√2"});
}

LabeledBasis computational_basis(int dim) {
    if (dim < 2) {
        throw std::invalid_argument("computational_basis: dimension must be at least 2");
    }
    std::vector<PureState> s;
    std::vector<std::string> labels;
    for (int k = 0; k < dim; ++k) {
        s.push_back(PureState::basis_vector(dim, k));
        labels.push_back(std::to_string(k + 1));
    }
    return LabeledBasis(std::move(s), std::move(labels));
}

LabeledBasis adapted_basis(const PureState& phi) {
    const int d = phi.dim();
    std::vector<Vector> vecs{phi.amps()};
    // Unit vectors in order of increasing overlap with phi keep Gram-Schmidt well conditioned.
    std::vector<int> order(d);
    for (int k = 0; k < d; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(phi[a]) < std::abs(phi[b]); });
    for (int k : order) {
        if (static_cast<int>(vecs.size()) == d) break;
        Vector v = Vector::Unit(d, k);
        // Two passes of modified Gram-Schmidt.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : vecs) v -= u * u.dot(v);
        }
        if (v.norm() > 1e-8) vecs.push_back(v.normalized());
    }
    std::vector<PureState> states;
    std::vector<std::string> labels{"phi"};
    for (auto& v : vecs) states.push_back(PureState::normalized(v));
    for (int k = 1; k < d; ++k) labels.push_back("phi_perp" + std::to_string(k));
    return LabeledBasis(std::move(states), std::move(labels));
}

LabeledBasis named_basis(const std::string& name, int dim) {
    if (name == "I") {
        return dim == 4 ? basis_logical() : computational_basis(dim);
    }
    if (name == "IV") {
        if (dim != 4) {
            throw std::invalid_argument("basis IV is only defined for d = 4");
        }
        return basis_four();
    }
    throw std::invalid_argument("unknown basis '" + name + "' (expected I or IV)");
}

bool unbiasedness_check(const LabeledBasis& b1, const LabeledBasis& b2, double tol) {
    require_same_dim(b1.dim(), b2.dim(), "unbiasedness_check");
    const double target = 1.0 / b1.dim();
    for (const auto& a : b1.states()) {
        for (const auto& b : b2.states()) {
            if (std::abs(std::norm(inner(a, b)) - target) > tol) {
                return false;
            }
        }
    }
    return true;
}

DensityMatrix maximally_mixed(int dim) {
    if (dim < 2) {
        throw std::invalid_argument("maximally_mixed: dimension must be at least 2");
    }
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double fidelity_pure(const DensityMatrix& rho, const PureState& psi) {
    require_same_dim(rho.dim(), psi.dim(), "fidelity_pure");
    return psi.amps().dot(rho.mat() * psi.amps()).real();
}

Matrix in_basis(const DensityMatrix& rho, const LabeledBasis& basis) {
    require_same_dim(rho.dim(), basis.dim(), "in_basis");
    const Matrix b = basis.as_matrix();
    return b.adjoint() * rho.mat() * b;
}

}  // namespace qclone
