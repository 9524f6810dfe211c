#pragma once

#include <span>
#include <vector>

#include "wgqed/scatter_two.hpp"
#include "wgqed/sweep.hpp"

namespace wgqed {

// How the pair density C(tau) is turned into g2(tau) = C(tau) / D.
//
// asymptotic: D is the uncorrelated plane-wave density |c0|^2 / (2 pi)^2 with
//   c0 = t_bar^2 (RR) or r_bar^2 (LL), so g2 -> 1 at large separation.
// box: D is the mean pair density of the full wavefunction over a relative
//   coordinate window of length l_reg, D = (2 pi)^-2 l_reg^-1
//   int_{-l_reg/2}^{l_reg/2} |c0 - F(x)|^2 dx. Defined even when c0 = 0, at the
//   price of an explicit dependence on l_reg.
struct Normalization {
    enum class Kind { asymptotic, box };
    Kind kind = Kind::asymptotic;
    double l_reg = 0.0;  // box only; <= 0 selects 1e3 / bound_decay_rate

    static Normalization asymptotic() { return {}; }
    static Normalization box(double length = 0.0) { return {Kind::box, length}; }
};

inline constexpr double kDefaultBackgroundTol = 1e-10;

struct G2Curve {
    Channel channel = Channel::LL;
    TwoPhotonIn input{1.0, 1.0};
    std::vector<double> tau_grid;
    std::vector<double> values;
    Normalization normalization;  // l_reg resolved to the value actually used
    double background = 0.0;      // D
};

// |psi(x, x + tau)|^2 for RR or LL; independent of x.
double pair_density(const SystemParams& params, const TwoPhotonIn& in, Channel channel, double x,
                    double tau);

// C(tau) = pair_density at x = 0. Requires tau >= 0 and channel RR or LL.
double correlation_numerator(const SystemParams& params, const TwoPhotonIn& in, Channel channel,
                             double tau);

// Normalization constant D for the given mode (see Normalization).
double background_density(const SystemParams& params, const TwoPhotonIn& in, Channel channel,
                          const Normalization& norm);

// g2 over a grid of non-negative delays. Only equal-energy inputs
// (delta_k == 0) are accepted. In asymptotic mode throws VanishingBackground
// when D < bg_tol * max C.
G2Curve g2(const SystemParams& params, const TwoPhotonIn& in, Channel channel,
           std::span<const double> tau_grid, const Normalization& norm = Normalization::asymptotic(),
           double bg_tol = kDefaultBackgroundTol);

struct ZeroDelaySweepOptions {
    double bg_tol = kDefaultBackgroundTol;
    double l_reg = 0.0;  // box fallback length; <= 0 selects the default
    unsigned threads = 1;
};

// g2(0) against the per-photon energy E/2. Cells that needed box
// normalization are flagged "box"; cells that failed carry "error: ..." and a
// zero value. Never throws for per-cell failures.
SweepGrid g2_zero_sweep(const SystemParams& params, std::span<const double> half_energy_grid,
                        Channel channel, const ZeroDelaySweepOptions& options = {});

}  // namespace wgqed
