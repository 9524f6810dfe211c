#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "wgqed/model.hpp"
#include "wgqed/sweep.hpp"

namespace wgqed {

// Two incident right-moving photons. Stored canonically with k1 >= k2.
class TwoPhotonIn {
public:
    TwoPhotonIn(double k1, double k2);
    // Equal-energy pair with energy e_half each.
    static TwoPhotonIn monochromatic(double e_half) { return {e_half, e_half}; }
    // From total energy and relative momentum k1 - k2.
    static TwoPhotonIn from_energy(double energy, double delta_k);

    double k1() const { return k1_; }
    double k2() const { return k2_; }
    double energy() const { return k1_ + k2_; }
    double delta_k() const { return k1_ - k2_; }

private:
    double k1_;
    double k2_;
};

enum class AmplitudeKind { t_matrix, bound_term, wf_RR, wf_LL, wf_LR };

struct TwoPhotonAmplitude {
    Complex value;
    double on_shell_energy = 0.0;
    AmplitudeKind kind = AmplitudeKind::t_matrix;
};

// Outgoing two-photon channel: both transmitted, both reflected, or one each.
enum class Channel { RR, LL, LR };

const char* to_string(Channel c);
Channel channel_from_string(const std::string& s);

// Connected two-photon T-matrix on the energy shell p1 + p2 = E. The returned
// value T multiplies the Dirac delta in the connected S-matrix,
//   S_conn(p1 p2; k1 k2) = i T delta(p1 + p2 - k1 - k2),
// so |T|^2 is the background fluorescence. Momenta are canonicalized before
// evaluation and the result is exactly symmetric under k1<->k2 and p1<->p2.
TwoPhotonAmplitude t_matrix_two(const SystemParams& params, const TwoPhotonIn& in, double p1);

// Exponentially localized bound term F(lambda, x); even in x.
Complex bound_term(const SystemParams& params, const TwoPhotonIn& in, double x);

// F(x) = sum_j coeff[j] * exp(i rate[j] |x|), with Im rate[j] > 0.
struct BoundTermExpansion {
    std::array<Complex, 2> coeff;
    std::array<Complex, 2> rate;

    Complex operator()(double x) const;
};

BoundTermExpansion bound_term_expansion(const SystemParams& params, const TwoPhotonIn& in);

// Outgoing two-photon wavefunction of one channel at photon positions
// (x1, x2). For LR, x1 is the reflected photon.
Complex wavefunction(const SystemParams& params, const TwoPhotonIn& in, Channel channel,
                     double x1, double x2);

struct ChannelWavefunction {
    Channel channel = Channel::RR;
    TwoPhotonIn input{1.0, 1.0};
    double center = 0.0;         // x_c held fixed while sampling
    std::vector<double> grid;    // relative coordinate x = x1 - x2
    std::vector<Complex> values;
};

// Samples the wavefunction along the relative coordinate at fixed centre.
ChannelWavefunction sample_wavefunction(const SystemParams& params, const TwoPhotonIn& in,
                                        Channel channel, std::span<const double> grid,
                                        double center = 0.0);

// min_s |Im(E/2 - lambda_{1,-s})|: decay rate of the bound term in |x|.
// Without the TLS (g = 0) the cavity rate v_tilde^2 / 2.
double bound_decay_rate(const SystemParams& params);

// Uniform grid over |x| <= span_factor / bound_decay_rate.
std::vector<double> default_relative_grid(const SystemParams& params, std::size_t points = 2048,
                                          double span_factor = 12.0);

// |T|^2 over (delta_k, delta_p) at fixed total energy. Both grids must be
// symmetric about zero and keep every implied momentum (E +- delta)/2 > 0.
SweepGrid fluorescence_map(const SystemParams& params, double energy,
                           std::span<const double> dk_grid, std::span<const double> dp_grid,
                           unsigned threads = 1);

}  // namespace wgqed
