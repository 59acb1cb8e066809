#pragma once

// Second-quantized few-photon states on (spatial port x internal level) modes.
//
// A basis ket with occupations (n_0, n_1, ...) is prod_k (a_k^dag)^{n_k} / sqrt(n_k!) |0>.
// Mode k = port * dim + level.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qclone/hilbert.hpp"

namespace qclone {

using Occupation = std::vector<std::uint8_t>;

inline constexpr double kPruneTol = 1e-14;

struct ModeIndex {
    int port = 0;
    int level = 0;
};

class FockState {
public:
    /// A state with no terms. Used as the "nothing survived" marker.
    FockState(int ports, int dim);

    static FockState vacuum(int ports, int dim);

    int ports() const { return ports_; }
    int dim() const { return dim_; }
    int modes() const { return ports_ * dim_; }
    int mode(ModeIndex m) const;

    const std::map<Occupation, cplx>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    /// Total photon number, or -1 for an empty state.
    int photon_number() const { return photons_; }
    double norm_squared() const;

    /// Accumulates `amp` onto the ket `occ`. All kets must carry the same photon number.
    void add(const Occupation& occ, cplx amp);
    void prune(double eps = kPruneTol);
    FockState normalized() const;

    /// Photons found in `port`, for any ket of the state.
    int photons_in_port(const Occupation& occ, int port) const;

private:
    int ports_;
    int dim_;
    int photons_ = -1;
    std::map<Occupation, cplx> terms_;
};

/// Applies the creation operator sum_k amps_k a^dag_{port,k}; the result is not renormalized.
FockState create_photon(const FockState& state, int port, const Vector& amps);

FockState single_photon(int ports, int port, const PureState& psi);

/// Normalized state of the listed photons, one creation operator per entry.
FockState product_state(int ports, int dim, const std::vector<std::pair<int, PureState>>& photons);

/// Passive linear-optics evolution a^dag_m -> sum_n U(n, m) a^dag_n over all modes.
FockState linear_transform(const FockState& state, const Matrix& mode_unitary);

/// 50/50 splitter, identical on every internal level:
///   a^dag_A -> (a^dag_A + i a^dag_B)/sqrt2,  a^dag_B -> (i a^dag_A + a^dag_B)/sqrt2.
FockState beam_splitter(const FockState& state, int port_a, int port_b);

/// Internal-level unitary acting on the photons of one port.
FockState apply_internal(const FockState& state, int port, const Matrix& level_unitary);

struct Projection {
    double prob = 0.0;
    FockState conditional;
    bool empty() const { return conditional.empty(); }
};

/// Component with exactly counts[p] photons in port p, renormalized.
Projection project_port_counts(const FockState& state, std::span<const int> counts);

/// Component with every photon in `port`. prob = 0 yields an empty conditional state.
Projection postselect_same_port(const FockState& state, int port);

/// One-photon density matrix rho_kl = <a^dag_l a_k> / n for the photons in `port`.
DensityMatrix reduced_single_photon(const FockState& state, int port);

/// Scalar wavepacket overlap with an optional Gaussian-spectrum delay dependence.
struct DistinguishabilityModel {
    double v = 1.0;  // overlap at zero delay
    std::optional<double> delay_fs;
    double bandwidth_nm = 4.5;
    double wavelength_nm = 795.0;

    void validate() const;
    /// 1/e half width of the overlap, 2 sqrt(ln 2) / (pi * bandwidth in frequency).
    double coherence_time_fs() const;
    double overlap_at(double delay_fs) const;
    /// Overlap at `delay_fs` when set, otherwise `v`.
    double overlap() const;
};

/// `psi` tensored with a two-level temporal mode: overlap |t0> + sqrt(1 - overlap^2) |t1>.
/// Levels are indexed level + dim * temporal.
PureState temporal_extension(const PureState& psi, double overlap);

/// Probability that the photons leave a 50/50 splitter through a common port
/// (either one), signal on port 0 and ancilla on port 1.
double coalescence_probability(const PureState& signal, const PureState& ancilla, double overlap);

/// Same-port pair rate relative to fully distinguishable photons. In [1, 2].
double coalescence_enhancement(const PureState& signal, const PureState& ancilla,
                               const DistinguishabilityModel& model);

struct HomPoint {
    double delay_fs;
    double enhancement;
};

std::vector<HomPoint> hom_curve(const PureState& signal, const PureState& ancilla,
                                std::span<const double> delays_fs,
                                const DistinguishabilityModel& model);

}  // namespace qclone
