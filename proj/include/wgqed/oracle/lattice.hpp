#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wgqed/model.hpp"

namespace wgqed::oracle {

// Gaussian even-mode packet. sigma is the spatial standard deviation of
// |psi|^2; launch is the initial centre (negative: upstream of the cavity).
struct WavePacket {
    double k1_center = 5.0;
    double k2_center = 5.0;
    double sigma = 80.0;
    double launch = -480.0;
};

// Extra modes on the same lattice: every stride-th k in [lo, hi]. A mode with
// stride s stands in for s lattice modes, so its coupling carries sqrt(s).
struct ModeWindow {
    double lo = 0.0;
    double hi = 0.0;
    int stride = 1;
};

// Discretized even-channel waveguide: modes k_j = k_min + j * 2 pi / length,
// j = 0 .. num_modes - 1, plus optional extra windows. Coarse wings keep the
// cavity self-energy flat across the core band at a fraction of the cost.
struct LatticeConfig {
    int num_modes = 300;
    double length = 960.0;
    double k_min = 0.0;
    double k_max = 0.0;
    std::vector<ModeWindow> extra_windows;
    WavePacket packet;
    double evolve_time = 0.0;  // <= 0: 2 |launch|, carrying the packet as far downstream
    int record_count = 16;     // norm checkpoints
    double norm_tol = 1e-8;
    unsigned threads = 1;

    double spacing() const;
    // Sorted integer lattice indices j (k = k_min + j * spacing()).
    std::vector<long> mode_indices() const;
    std::vector<double> modes() const;
    // Stride of each mode in mode_indices() order.
    std::vector<int> mode_strides() const;
    // Physical dimension: symmetric pairs + photon x {cavity, TLS} + two
    // doubly excited emitter states.
    std::size_t two_excitation_dimension() const;

    // Throws DomainError if the band does not match num_modes, the packet is
    // not spectrally narrow (sigma >= 10 / gamma_min), the packet overlaps the
    // cavity at launch, or the two-excitation dimension exceeds 3e5.
    void validate(const SystemParams& params) const;

    // Band of num_modes modes centred on the mean carrier, length =
    // length_factor * sigma, sigma = sigma_factor / gamma_min, launch = -launch_factor * sigma.
    static LatticeConfig centered(const SystemParams& params, double k1_center, double k2_center,
                                  int num_modes, double sigma_factor = 20.0,
                                  double length_factor = 12.0, double launch_factor = 6.0);

    // Coarse windows on both sides of the core band out to the carrier mean
    // +- half_width, clipped symmetrically to keep every mode at k > 0.
    void add_symmetric_wings(double half_width, int stride);
};

enum class ExcitationSector { one, two };

struct OutputRecord {
    ExcitationSector sector = ExcitationSector::one;
    SystemParams params;
    LatticeConfig config;
    std::vector<double> modes;
    std::vector<double> times;
    std::vector<double> norm_drift;  // |‖psi(t)‖ - 1| at each checkpoint
    double emitter_population = 0.0;  // weight left on cavity/TLS states at the end

    // Initial one-photon packet u_k (unit norm).
    std::vector<Complex> incident;
    // One-excitation run: outgoing even amplitude with free propagation removed.
    std::vector<Complex> scattered;
    double reflected = 0.0;
    double transmitted = 0.0;

    // Two-excitation run: even-even pair amplitude (row-major, num_modes^2)
    // with free propagation removed, and the symmetric input it came from.
    std::vector<Complex> pair_input;
    std::vector<Complex> pair_even;
    // Single-photon even-channel response of the same lattice, per mode.
    std::vector<Complex> lattice_t_even;

    nlohmann::json to_json() const;
};

// Builds the excitation-conserving sparse Hamiltonian of the chosen sector,
// launches the Gaussian packet and evolves it with a Chebyshev propagator
// until it has left the cavity. Throws ConvergenceFailure if the norm drifts
// by more than config.norm_tol.
OutputRecord lattice_evolve(const SystemParams& params, const LatticeConfig& config,
                            ExcitationSector sector);

// Reflected fraction of a one-excitation record predicted by the closed form:
// sum_k |u_k|^2 |r_k|^2 over the packet spectrum.
double analytic_reflected_fraction(const SystemParams& params, const OutputRecord& record);

// Reflected (LL) pair amplitude on the mode grid reconstructed from an
// even-even two-excitation record.
std::vector<Complex> reflected_pair_amplitude(const OutputRecord& record);

// Same quantity from the closed-form amplitudes: r_p r_p' psi_in(p, p') plus
// the bound part (dk / 8) sum_l iT(p, p'; k_l, p + p' - k_l) psi_in(k_l, .).
std::vector<Complex> analytic_reflected_pair_amplitude(const SystemParams& params,
                                                       const OutputRecord& record);

// Centre-integrated relative-coordinate density G(x) = int dx_c |psi(x_c + x/2, x_c - x/2)|^2
// of a pair amplitude on the mode grid.
std::vector<double> relative_density(const OutputRecord& record,
                                     std::span<const Complex> pair_amplitude,
                                     std::span<const double> x_grid);

}  // namespace wgqed::oracle
