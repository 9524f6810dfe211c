#include "wgqed/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wgqed/errors.hpp"
#include "wgqed/parallel.hpp"
#include "wgqed/scatter_one.hpp"

namespace wgqed {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kInvTwoPiSq = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

void require_density_channel(Channel channel, const char* where) {
    if (channel == Channel::LR) {
        throw DomainError(std::string(where) + ": channel must be RR or LL");
    }
}

// Plane-wave coefficient c0 multiplying cos(delta_k x) in the channel.
Complex plane_wave_coefficient(const SystemParams& params, const TwoPhotonIn& in,
                               Channel channel) {
    const OnePhotonAmplitudes a1 = one_photon(params, in.k1());
    const OnePhotonAmplitudes a2 = one_photon(params, in.k2());
    return channel == Channel::RR ? a1.t_bar * a2.t_bar : a1.r_bar * a2.r_bar;
}

// int_{-L/2}^{L/2} exp(i kappa |x|) dx for Im kappa >= 0.
Complex symmetric_exp_integral(Complex kappa, double length) {
    const double half = 0.5 * length;
    if (std::abs(kappa) * half < 1e-8) {
        return length * (1.0 + 0.5 * kI * kappa * half);
    }
    return 2.0 * (std::exp(kI * kappa * half) - 1.0) / (kI * kappa);
}

}  // namespace

double pair_density(const SystemParams& params, const TwoPhotonIn& in, Channel channel, double x,
                    double tau) {
    require_density_channel(channel, "pair_density");
    return std::norm(wavefunction(params, in, channel, x, x + tau));
}

double correlation_numerator(const SystemParams& params, const TwoPhotonIn& in, Channel channel,
                             double tau) {
    if (!(tau >= 0.0)) throw DomainError("correlation_numerator: tau must be >= 0");
    return pair_density(params, in, channel, 0.0, tau);
}

double background_density(const SystemParams& params, const TwoPhotonIn& in, Channel channel,
                          const Normalization& norm) {
    require_density_channel(channel, "background_density");
    const Complex c0 = plane_wave_coefficient(params, in, channel);
    if (norm.kind == Normalization::Kind::asymptotic) {
        return std::norm(c0) * kInvTwoPiSq;
    }

    const double length = norm.l_reg > 0.0 ? norm.l_reg : 1e3 / bound_decay_rate(params);
    if (in.delta_k() != 0.0) {
        throw DomainError("background_density: box normalization needs delta_k = 0");
    }
    const BoundTermExpansion f = bound_term_expansion(params, in);
    // |c0 - F|^2 = |c0|^2 - 2 Re(conj(c0) F) + |F|^2, each term integrated in closed form.
    double integral = std::norm(c0) * length;
    Complex cross{0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
        cross += f.coeff[j] * symmetric_exp_integral(f.rate[j], length);
    }
    integral -= 2.0 * (std::conj(c0) * cross).real();
    Complex self{0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
        for (int l = 0; l < 2; ++l) {
            self += f.coeff[j] * std::conj(f.coeff[l]) *
                    symmetric_exp_integral(f.rate[j] - std::conj(f.rate[l]), length);
        }
    }
    integral += self.real();
    return integral / length * kInvTwoPiSq;
}

G2Curve g2(const SystemParams& params, const TwoPhotonIn& in, Channel channel,
           std::span<const double> tau_grid, const Normalization& norm, double bg_tol) {
    require_density_channel(channel, "g2");
    if (in.delta_k() != 0.0) {
        throw DomainError("g2: only equal-energy photon pairs (delta_k = 0) are supported");
    }
    G2Curve curve;
    curve.channel = channel;
    curve.input = in;
    curve.normalization = norm;
    if (norm.kind == Normalization::Kind::box && norm.l_reg <= 0.0) {
        curve.normalization.l_reg = 1e3 / bound_decay_rate(params);
    }
    curve.tau_grid.assign(tau_grid.begin(), tau_grid.end());

    std::vector<double> numerators;
    numerators.reserve(tau_grid.size());
    double max_c = correlation_numerator(params, in, channel, 0.0);
    for (double tau : tau_grid) {
        numerators.push_back(correlation_numerator(params, in, channel, tau));
        max_c = std::max(max_c, numerators.back());
    }

    curve.background = background_density(params, in, channel, curve.normalization);
    if (norm.kind == Normalization::Kind::asymptotic && !(curve.background >= bg_tol * max_c)) {
        std::ostringstream os;
        os << "g2: uncorrelated background " << curve.background << " is below " << bg_tol
           << " x max C (" << max_c << ") for channel " << to_string(channel)
           << " at E/2 = " << 0.5 * in.energy() << "; use box normalization";
        throw VanishingBackground(os.str());
    }
    curve.values.reserve(numerators.size());
    for (double c : numerators) curve.values.push_back(c / curve.background);
    return curve;
}

SweepGrid g2_zero_sweep(const SystemParams& params, std::span<const double> half_energy_grid,
                        Channel channel, const ZeroDelaySweepOptions& options) {
    require_density_channel(channel, "g2_zero_sweep");
    SweepGrid grid;
    grid.axis_names = {"E_half"};
    grid.axes = {std::vector<double>(half_energy_grid.begin(), half_energy_grid.end())};
    grid.value_names = {"g2_0"};
    grid.allocate();

    double l_reg = options.l_reg;
    if (l_reg <= 0.0) {
        try {
            l_reg = 1e3 / bound_decay_rate(params);
        } catch (const Error&) {
            l_reg = 0.0;
        }
    }
    grid.metadata = {{"channel", to_string(channel)},
                     {"normalization", "asymptotic"},
                     {"box_fallback_l_reg", l_reg},
                     {"bg_tol", options.bg_tol}};

    const double zero = 0.0;
    parallel_for(half_energy_grid.size(), options.threads, [&](std::size_t i) {
        const double e_half = half_energy_grid[i];
        try {
            if (!(e_half > 0.0)) throw DomainError("E/2 must be > 0");
            const TwoPhotonIn in = TwoPhotonIn::monochromatic(e_half);
            try {
                grid.value(i) = g2(params, in, channel, {&zero, 1}, Normalization::asymptotic(),
                                   options.bg_tol)
                                    .values.front();
            } catch (const VanishingBackground&) {
                grid.value(i) =
                    g2(params, in, channel, {&zero, 1}, Normalization::box(l_reg)).values.front();
                grid.flags[i] = "box";
            }
        } catch (const Error& e) {
            grid.value(i) = 0.0;
            grid.flags[i] = std::string("error: ") + e.what();
        }
    });

    std::size_t boxed = 0;
    for (const auto& f : grid.flags) boxed += (f == "box");
    if (boxed > 0) {
        grid.metadata["warnings"] = {std::to_string(boxed) +
                                     " point(s) had a vanishing uncorrelated background and "
                                     "use box normalization"};
    }
    return grid;
}

}  // namespace wgqed
