#pragma once

// Finite-dimensional state primitives and the spin-orbit ququart bases.
//
// Logical index convention for d = 4 (used by every other module):
//   0 = |R,+2>, 1 = |R,-2>, 2 = |L,+2>, 3 = |L,-2>

#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qclone {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kDensityTol = 1e-9;
inline constexpr double kEigenFloor = -1e-10;

/// Normalized state vector of a d-level system, d >= 2.
class PureState {
public:
    /// Throws std::invalid_argument unless `amps` has unit norm within 1e-12.
    explicit PureState(Vector amps);

    /// Rescales `amps` to unit norm. Throws on a zero vector.
    static PureState normalized(Vector amps);
    static PureState basis_vector(int dim, int index);

    int dim() const { return static_cast<int>(amps_.size()); }
    const Vector& amps() const { return amps_; }
    cplx operator[](int k) const { return amps_(k); }

private:
    Vector amps_;
};

/// Hermitian, unit-trace, positive semidefinite d x d matrix.
class DensityMatrix {
public:
    /// Validates hermiticity and trace at 1e-9, eigenvalues at -1e-10.
    explicit DensityMatrix(Matrix mat);

    static DensityMatrix from_pure(const PureState& psi);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& mat() const { return mat_; }
    cplx operator()(int r, int c) const { return mat_(r, c); }
    double purity() const;

private:
    Matrix mat_;
};

/// Orthonormal basis with a display label per element.
class LabeledBasis {
public:
    LabeledBasis(std::vector<PureState> states, std::vector<std::string> labels);

    int dim() const { return states_.front().dim(); }
    int size() const { return static_cast<int>(states_.size()); }
    const std::vector<PureState>& states() const { return states_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const PureState& operator[](int i) const { return states_[i]; }

    /// Columns are the basis vectors in logical coordinates.
    Matrix as_matrix() const;

    /// Index of the element equal to `psi` up to a global phase, or -1.
    int index_of(const PureState& psi, double tol = 1e-9) const;

private:
    std::vector<PureState> states_;
    std::vector<std::string> labels_;
};

cplx inner(const PureState& a, const PureState& b);

LabeledBasis basis_logical();
/// Entangled spin-orbit basis, ordered
/// (|R,+2> + |L,-2>), (|R,+2> - |L,-2>), (|L,+2> + |R,-2>), (|L,+2> - |R,-2>), all over sqrt2.
LabeledBasis basis_four();
/// Unit vectors of C^d labelled "1".."d".
LabeledBasis computational_basis(int dim);
/// Orthonormal basis whose first element is `phi` (Gram-Schmidt over the unit vectors).
LabeledBasis adapted_basis(const PureState& phi);

/// Looks up "I" or "IV" for d = 4; "I" is the computational basis for other d.
LabeledBasis named_basis(const std::string& name, int dim = 4);

bool unbiasedness_check(const LabeledBasis& b1, const LabeledBasis& b2, double tol);

DensityMatrix maximally_mixed(int dim);

double fidelity_pure(const DensityMatrix& rho, const PureState& psi);

/// Matrix elements <b_i|rho|b_j>.
Matrix in_basis(const DensityMatrix& rho, const LabeledBasis& basis);

/// Haar-distributed pure state.
template <class URBG>
PureState haar_random_state(int dim, URBG& gen) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(dim);
    for (int k = 0; k < dim; ++k) {
        double re = gauss(gen);
        double im = gauss(gen);
        v(k) = cplx(re, im);
    }
    return PureState::normalized(std::move(v));
}

/// Haar-distributed state in the orthogonal complement of `psi`.
template <class URBG>
PureState haar_orthogonal_state(const PureState& psi, URBG& gen) {
    for (;;) {
        Vector v = haar_random_state(psi.dim(), gen).amps();
        v -= psi.amps() * psi.amps().dot(v);
        if (v.norm() > 1e-6) {
            return PureState::normalized(std::move(v));
        }
    }
}

}  // namespace qclone
