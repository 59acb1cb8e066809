#include "qclone/bosonic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qclone {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double occupation_norm(const Occupation& occ) {
    double f = 1.0;
    for (auto n : occ) f *= factorial(n);
    return std::sqrt(f);
}

void require_port(const FockState& s, int port, const char* what) {
    if (port < 0 || port >= s.ports()) {
        throw std::invalid_argument(std::string(what) + ": port " + std::to_string(port) +
                                    " out of range");
    }
}

// Non-zero entries of each column of a mode matrix.
std::vector<std::vector<std::pair<int, cplx>>> sparse_columns(const Matrix& u) {
    std::vector<std::vector<std::pair<int, cplx>>> cols(u.cols());
    for (int m = 0; m < u.cols(); ++m) {
        for (int n = 0; n < u.rows(); ++n) {
            if (std::abs(u(n, m)) > 0.0) cols[m].emplace_back(n, u(n, m));
        }
    }
    return cols;
}

}  // namespace

FockState::FockState(int ports, int dim) : ports_(ports), dim_(dim) {
    if (ports < 1 || dim < 1) {
        throw std::invalid_argument("FockState: need at least one port and one level");
    }
}

FockState FockState::vacuum(int ports, int dim) {
    FockState s(ports, dim);
    s.add(Occupation(static_cast<std::size_t>(ports * dim), 0), 1.0);
    return s;
}

int FockState::mode(ModeIndex m) const {
    if (m.port < 0 || m.port >= ports_ || m.level < 0 || m.level >= dim_) {
        throw std::invalid_argument("FockState: mode index out of range");
    }
    return m.port * dim_ + m.level;
}

double FockState::norm_squared() const {
    double s = 0.0;
    for (const auto& [occ, amp] : terms_) s += std::norm(amp);
    return s;
}

void FockState::add(const Occupation& occ, cplx amp) {
    if (static_cast<int>(occ.size()) != modes()) {
        throw std::invalid_argument("FockState: occupation vector has wrong length");
    }
    int n = 0;
    for (auto k : occ) n += k;
    if (photons_ >= 0 && n != photons_) {
        throw std::invalid_argument("FockState: mixed photon numbers in one state");
    }
    photons_ = n;
    terms_[occ] += amp;
}

void FockState::prune(double eps) {
    std::erase_if(terms_, [eps](const auto& kv) { return std::abs(kv.second) < eps; });
    if (terms_.empty()) photons_ = -1;
}

FockState FockState::normalized() const {
    const double n = std::sqrt(norm_squared());
    if (!(n > 0.0)) {
        throw std::invalid_argument("FockState: cannot normalize an empty state");
    }
    FockState out(*this);
    for (auto& [occ, amp] : out.terms_) amp /= n;
    return out;
}

int FockState::photons_in_port(const Occupation& occ, int port) const {
    int n = 0;
    for (int k = 0; k < dim_; ++k) n += occ[port * dim_ + k];
    return n;
}

FockState create_photon(const FockState& state, int port, const Vector& amps) {
    require_port(state, port, "create_photon");
    if (amps.size() != state.dim()) {
        throw std::invalid_argument("create_photon: internal dimension mismatch");
    }
    FockState out(state.ports(), state.dim());
    for (const auto& [occ, amp] : state.terms()) {
        for (int k = 0; k < state.dim(); ++k) {
            if (amps(k) == cplx(0.0)) continue;
            Occupation next = occ;
            const int m = port * state.dim() + k;
            next[m] += 1;
            out.add(next, amp * amps(k) * std::sqrt(static_cast<double>(next[m])));
        }
    }
    out.prune();
    return out;
}

FockState single_photon(int ports, int port, const PureState& psi) {
    return create_photon(FockState::vacuum(ports, psi.dim()), port, psi.amps());
}

FockState product_state(int ports, int dim,
                        const std::vector<std::pair<int, PureState>>& photons) {
    FockState s = FockState::vacuum(ports, dim);
    for (const auto& [port, psi] : photons) {
        s = create_photon(s, port, psi.amps());
    }
    return s.normalized();
}

FockState linear_transform(const FockState& state, const Matrix& mode_unitary) {
    const int nmodes = state.modes();
    if (mode_unitary.rows() != nmodes || mode_unitary.cols() != nmodes) {
        throw std::invalid_argument("linear_transform: mode matrix has wrong shape");
    }
    const auto cols = sparse_columns(mode_unitary);
    FockState out(state.ports(), state.dim());

    // Each ket expands as a polynomial in creation operators; identical monomials merge as
    // photons are multiplied in one at a time.
    std::map<Occupation, cplx> poly;
    std::map<Occupation, cplx> next;
    for (const auto& [occ, amp] : state.terms()) {
        poly.clear();
        poly.emplace(Occupation(static_cast<std::size_t>(nmodes), 0), amp / occupation_norm(occ));
        for (int m = 0; m < nmodes; ++m) {
            for (int rep = 0; rep < occ[m]; ++rep) {
                next.clear();
                for (const auto& [mono, coef] : poly) {
                    for (const auto& [n, u] : cols[m]) {
                        Occupation o = mono;
                        o[n] += 1;
                        next[o] += coef * u;
                    }
                }
                poly.swap(next);
            }
        }
        for (const auto& [mono, coef] : poly) {
            out.add(mono, coef * occupation_norm(mono));
        }
    }
    out.prune();
    return out;
}

FockState beam_splitter(const FockState& state, int port_a, int port_b) {
    require_port(state, port_a, "beam_splitter");
    require_port(state, port_b, "beam_splitter");
    if (port_a == port_b) {
        throw std::invalid_argument("beam_splitter: ports must differ");
    }
    const int d = state.dim();
    const double h = 1.0 / std::numbers::sqrt2;
    const cplx ih(0.0, h);
    Matrix u = Matrix::Identity(state.modes(), state.modes());
    for (int k = 0; k < d; ++k) {
        const int a = port_a * d + k;
        const int b = port_b * d + k;
        u(a, a) = h;
        u(b, a) = ih;
        u(a, b) = ih;
        u(b, b) = h;
    }
    return linear_transform(state, u);
}

FockState apply_internal(const FockState& state, int port, const Matrix& level_unitary) {
    require_port(state, port, "apply_internal");
    const int d = state.dim();
    if (level_unitary.rows() != d || level_unitary.cols() != d) {
        throw std::invalid_argument("apply_internal: level matrix has wrong shape");
    }
    Matrix u = Matrix::Identity(state.modes(), state.modes());
    u.block(port * d, port * d, d, d) = level_unitary;
    return linear_transform(state, u);
}

Projection project_port_counts(const FockState& state, std::span<const int> counts) {
    if (static_cast<int>(counts.size()) != state.ports()) {
        throw std::invalid_argument("project_port_counts: need one count per port");
    }
    FockState kept(state.ports(), state.dim());
    for (const auto& [occ, amp] : state.terms()) {
        bool match = true;
        for (int p = 0; p < state.ports() && match; ++p) {
            match = state.photons_in_port(occ, p) == counts[p];
        }
        if (match) kept.add(occ, amp);
    }
    const double prob = kept.norm_squared();
    if (!(prob > 0.0)) {
        return {0.0, FockState(state.ports(), state.dim())};
    }
    return {prob, kept.normalized()};
}

Projection postselect_same_port(const FockState& state, int port) {
    require_port(state, port, "postselect_same_port");
    std::vector<int> counts(static_cast<std::size_t>(state.ports()), 0);
    counts[port] = std::max(state.photon_number(), 0);
    return project_port_counts(state, counts);
}

DensityMatrix reduced_single_photon(const FockState& state, int port) {
    require_port(state, port, "reduced_single_photon");
    if (state.empty()) {
        throw std::invalid_argument("reduced_single_photon: empty state");
    }
    const int d = state.dim();
    const int base = port * d;
    Matrix rho = Matrix::Zero(d, d);
    double photons = 0.0;
    for (const auto& [occ, amp] : state.terms()) {
        photons += std::norm(amp) * state.photons_in_port(occ, port);
        for (int k = 0; k < d; ++k) {
            const int nk = occ[base + k];
            if (nk == 0) continue;
            for (int l = 0; l < d; ++l) {
                // a^dag_l a_k |occ> = sqrt(n_k) sqrt(n_l' + 1) |occ - e_k + e_l>
                Occupation target = occ;
                target[base + k] -= 1;
                const double raise = std::sqrt(static_cast<double>(target[base + l] + 1));
                target[base + l] += 1;
                auto it = state.terms().find(target);
                if (it == state.terms().end()) continue;
                rho(k, l) += std::conj(it->second) * amp * std::sqrt(static_cast<double>(nk)) * raise;
            }
        }
    }
    if (!(photons > 0.0)) {
        throw std::invalid_argument("reduced_single_photon: no photons in port");
    }
    rho /= photons;
    // Symmetrize away rounding so the result satisfies the Hermitian check exactly.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
}

void DistinguishabilityModel::validate() const {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("DistinguishabilityModel: v must lie in [0, 1]");
    }
    if (!(bandwidth_nm > 0.0) || !(wavelength_nm > 0.0)) {
        throw std::invalid_argument("DistinguishabilityModel: bandwidth and wavelength must be positive");
    }
}

double DistinguishabilityModel::coherence_time_fs() const {
    constexpr double c_nm_per_fs = 299.792458;
    const double dnu = c_nm_per_fs * bandwidth_nm / (wavelength_nm * wavelength_nm);
    return 2.0 * std::sqrt(std::numbers::ln2) / (std::numbers::pi * dnu);
}

double DistinguishabilityModel::overlap_at(double tau_fs) const {
    const double x = tau_fs / coherence_time_fs();
    return v * std::exp(-x * x);
}

double DistinguishabilityModel::overlap() const {
    return delay_fs ? overlap_at(*delay_fs) : v;
}

PureState temporal_extension(const PureState& psi, double overlap) {
    if (!(overlap >= 0.0 && overlap <= 1.0)) {
        throw std::invalid_argument("temporal_extension: overlap must lie in [0, 1]");
    }
    const int d = psi.dim();
    Vector out(2 * d);
    out.head(d) = overlap * psi.amps();
    out.tail(d) = std::sqrt(std::max(0.0, 1.0 - overlap * overlap)) * psi.amps();
    return PureState::normalized(std::move(out));
}

double coalescence_probability(const PureState& signal, const PureState& ancilla, double overlap) {
    if (signal.dim() != ancilla.dim()) {
        throw std::invalid_argument("coalescence_probability: dimension mismatch");
    }
    const int d2 = 2 * signal.dim();
    FockState in = product_state(
        2, d2, {{0, temporal_extension(signal, 1.0)}, {1, temporal_extension(ancilla, overlap)}});
    FockState out = beam_splitter(in, 0, 1);
    return postselect_same_port(out, 0).prob + postselect_same_port(out, 1).prob;
}

double coalescence_enhancement(const PureState& signal, const PureState& ancilla,
                               const DistinguishabilityModel& model) {
    model.validate();
    return coalescence_probability(signal, ancilla, model.overlap()) /
           coalescence_probability(signal, ancilla, 0.0);
}

std::vector<HomPoint> hom_curve(const PureState& signal, const PureState& ancilla,
                                std::span<const double> delays_fs,
                                const DistinguishabilityModel& model) {
    model.validate();
    const double baseline = coalescence_probability(signal, ancilla, 0.0);
    std::vector<HomPoint> curve;
    curve.reserve(delays_fs.size());
    for (double tau : delays_fs) {
        curve.push_back({tau, coalescence_probability(signal, ancilla, model.overlap_at(tau)) / baseline});
    }
    return curve;
}

}  // namespace qclone
