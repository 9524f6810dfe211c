#include "wgqed/scatter_two.hpp"

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

struct Spectrum {
    DressedPair one;
    DressedPair two;
};

Spectrum spectrum_for(const SystemParams& params) {
    params.validate();
    Spectrum s{dressed_pair(params, 1), dressed_pair(params, 2)};
    for (const Complex& l : {s.one.lambda_plus, s.one.lambda_minus, s.two.lambda_plus,
                             s.two.lambda_minus}) {
        if (!(l.imag() < 0.0)) {
            throw NonFiniteResult("dressed eigenvalue without decay; real-axis pole");
        }
    }
    return s;
}

// prod_s (q - lambda_1s) for the momenta in qs, evaluated factor by factor.
Complex one_photon_poles(const DressedPair& one, std::initializer_list<double> qs) {
    Complex acc{1.0, 0.0};
    for (double q : qs) {
        acc *= (q - one.lambda_plus);
        acc *= (q - one.lambda_minus);
    }
    return acc;
}

Complex check_finite(Complex v, const char* where) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NonFiniteResult(std::string(where) + ": non-finite result");
    }
    return v;
}

bool is_symmetric(std::span<const double> grid) {
    if (grid.empty()) return false;
    double scale = 0.0;
    for (double v : grid) scale = std::max(scale, std::abs(v));
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(grid[i] + grid[n - 1 - i]) > 1e-12 * std::max(scale, 1.0)) return false;
    }
    return true;
}

}  // namespace

TwoPhotonIn::TwoPhotonIn(double k1, double k2) : k1_(std::max(k1, k2)), k2_(std::min(k1, k2)) {
    if (!(std::isfinite(k1) && std::isfinite(k2) && k2_ > 0.0)) {
        std::ostringstream os;
        os << "TwoPhotonIn: momenta must be finite and > 0 (got " << k1 << ", " << k2 << ")";
        throw DomainError(os.str());
    }
}

TwoPhotonIn TwoPhotonIn::from_energy(double energy, double delta_k) {
    return {0.5 * (energy + delta_k), 0.5 * (energy - delta_k)};
}

const char* to_string(Channel c) {
    switch (c) {
        case Channel::RR: return "RR";
        case Channel::LL: return "LL";
        case Channel::LR: return "LR";
    }
    return "?";
}

Channel channel_from_string(const std::string& s) {
    if (s == "RR") return Channel::RR;
    if (s == "LL") return Channel::LL;
    if (s == "LR") return Channel::LR;
    throw DomainError("unknown channel '" + s + "' (expected RR, LL or LR)");
}

TwoPhotonAmplitude t_matrix_two(const SystemParams& params, const TwoPhotonIn& in, double p1) {
    params.validate();
    const double energy = in.energy();
    if (!std::isfinite(p1)) throw DomainError("t_matrix_two: p1 must be finite");
    // Decoupled TLS: the bare pole at Omega sits on the real axis but carries g^4 = 0.
    if (params.g == 0.0) return {Complex{0.0, 0.0}, energy, AmplitudeKind::t_matrix};
    const Spectrum sp = spectrum_for(params);
    const double p2 = energy - p1;
    const double p_hi = std::max(p1, p2);
    const double p_lo = std::min(p1, p2);

    const Complex alpha = effective_alpha(params);
    const double v2 = params.v_tilde * params.v_tilde;
    const double g2 = params.g * params.g;

    const Complex numerator = (v2 * v2) * (g2 * g2) * (energy - alpha - params.Omega) *
                              ((energy - 2.0 * params.Omega) * (energy - 2.0 * alpha) - 4.0 * g2);
    Complex denominator = std::numbers::pi * (energy - sp.two.lambda_plus) *
                          (energy - sp.two.lambda_minus);
    denominator *= one_photon_poles(sp.one, {in.k1(), in.k2()});
    denominator *= one_photon_poles(sp.one, {p_hi, p_lo});

    return {check_finite(numerator / denominator, "t_matrix_two"), energy,
            AmplitudeKind::t_matrix};
}

BoundTermExpansion bound_term_expansion(const SystemParams& params, const TwoPhotonIn& in) {
    params.validate();
    const double energy = in.energy();
    if (params.g == 0.0) {
        const Complex rate = 0.5 * energy - effective_alpha(params);
        return {{Complex{0.0, 0.0}, Complex{0.0, 0.0}}, {rate, rate}};
    }
    const Spectrum sp = spectrum_for(params);
    const double v2 = params.v_tilde * params.v_tilde;
    const double g2 = params.g * params.g;
    const Complex lp = sp.one.lambda_plus;
    const Complex lm = sp.one.lambda_minus;

    Complex denominator = 4.0 * (lp - lm);
    denominator *= (energy - sp.two.lambda_plus) * (energy - sp.two.lambda_minus);
    denominator *= one_photon_poles(sp.one, {in.k1(), in.k2()});
    const Complex prefactor = (v2 * v2) * (g2 * g2) / denominator;

    // s = +: (E - 2 lambda_1+) exp[i(E/2 - lambda_1-)|x|]; s = -: opposite sign and roles.
    BoundTermExpansion f;
    f.coeff = {check_finite(prefactor * (energy - 2.0 * lp), "bound_term"),
               check_finite(-prefactor * (energy - 2.0 * lm), "bound_term")};
    f.rate = {0.5 * energy - lm, 0.5 * energy - lp};
    return f;
}

Complex BoundTermExpansion::operator()(double x) const {
    const double ax = std::abs(x);
    return coeff[0] * std::exp(kI * rate[0] * ax) + coeff[1] * std::exp(kI * rate[1] * ax);
}

Complex bound_term(const SystemParams& params, const TwoPhotonIn& in, double x) {
    return bound_term_expansion(params, in)(x);
}

Complex wavefunction(const SystemParams& params, const TwoPhotonIn& in, Channel channel,
                     double x1, double x2) {
    const double x = x1 - x2;
    const double xc = 0.5 * (x1 + x2);
    const double energy = in.energy();
    const double dk = in.delta_k();
    const OnePhotonAmplitudes a1 = one_photon(params, in.k1());
    const OnePhotonAmplitudes a2 = one_photon(params, in.k2());
    constexpr double inv_2pi = 0.5 / std::numbers::pi;

    switch (channel) {
        case Channel::RR:
            return inv_2pi * std::exp(kI * energy * xc) *
                   (a1.t_bar * a2.t_bar * std::cos(dk * x) - bound_term(params, in, x));
        case Channel::LL:
            return inv_2pi * std::exp(kI * energy * xc) *
                   (a1.r_bar * a2.r_bar * std::cos(dk * x) - bound_term(params, in, x));
        case Channel::LR: {
            const Complex plane = a1.t_bar * a2.r_bar * std::exp(2.0 * kI * dk * xc) +
                                  a2.t_bar * a1.r_bar * std::exp(-2.0 * kI * dk * xc);
            return inv_2pi * std::exp(kI * (0.5 * energy) * x) *
                   (plane - 2.0 * bound_term(params, in, 2.0 * xc));
        }
    }
    throw DomainError("wavefunction: unknown channel");
}

ChannelWavefunction sample_wavefunction(const SystemParams& params, const TwoPhotonIn& in,
                                        Channel channel, std::span<const double> grid,
                                        double center) {
    ChannelWavefunction wf;
    wf.channel = channel;
    wf.input = in;
    wf.center = center;
    wf.grid.assign(grid.begin(), grid.end());
    wf.values.reserve(grid.size());
    for (double x : grid) {
        wf.values.push_back(wavefunction(params, in, channel, center + 0.5 * x, center - 0.5 * x));
    }
    return wf;
}

double bound_decay_rate(const SystemParams& params) {
    // Without the TLS only the cavity pole decays.
    if (params.g == 0.0) return 0.5 * params.v_tilde * params.v_tilde;
    const DressedPair one = dressed_pair(params, 1);
    return std::min(std::abs(one.lambda_plus.imag()), std::abs(one.lambda_minus.imag()));
}

std::vector<double> default_relative_grid(const SystemParams& params, std::size_t points,
                                          double span_factor) {
    if (points < 2) throw DomainError("default_relative_grid: need at least two points");
    const double half = span_factor / bound_decay_rate(params);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

SweepGrid fluorescence_map(const SystemParams& params, double energy,
                           std::span<const double> dk_grid, std::span<const double> dp_grid,
                           unsigned threads) {
    params.validate();
    if (!is_symmetric(dk_grid) || !is_symmetric(dp_grid)) {
        throw DomainError("fluorescence_map: delta grids must be symmetric about 0");
    }
    auto check_positive = [energy](std::span<const double> grid, const char* name) {
        for (double d : grid) {
            if (!(0.5 * (energy - std::abs(d)) > 0.0)) {
                std::ostringstream os;
                os << "fluorescence_map: " << name << " = " << d << " implies a momentum <= 0 at E = "
                   << energy;
                throw DomainError(os.str());
            }
        }
    };
    check_positive(dk_grid, "delta_k");
    check_positive(dp_grid, "delta_p");

    SweepGrid grid;
    grid.axis_names = {"delta_k", "delta_p"};
    grid.axes = {std::vector<double>(dk_grid.begin(), dk_grid.end()),
                 std::vector<double>(dp_grid.begin(), dp_grid.end())};
    grid.value_names = {"T2"};
    grid.allocate();
    grid.metadata = {{"quantity", "|T|^2"},
                     {"energy", energy},
                     {"convention", "S_conn = i T delta(p1 + p2 - E), continuum normalization"}};

    const std::size_t cols = dp_grid.size();
    parallel_for(dk_grid.size(), threads, [&](std::size_t row) {
        const TwoPhotonIn in = TwoPhotonIn::from_energy(energy, dk_grid[row]);
        for (std::size_t c = 0; c < cols; ++c) {
            const double p1 = 0.5 * (energy + dp_grid[c]);
            grid.value(row * cols + c) = std::norm(t_matrix_two(params, in, p1).value);
        }
    });
    return grid;
}

}  // namespace wgqed
