#include "wgqed/oracle/lattice.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "wgqed/errors.hpp"
#include "wgqed/parallel.hpp"
#include "wgqed/scatter_one.hpp"
#include "wgqed/scatter_two.hpp"

namespace wgqed::oracle {

namespace {

using Eigen::VectorXcd;
constexpr Complex kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Hermitian operator applied matrix-free, with a rigorous spectral enclosure.
class SectorHamiltonian {
public:
    SectorHamiltonian(const SystemParams& params, std::vector<double> modes,
                      std::vector<double> couplings, double shift, ExcitationSector sector,
                      unsigned threads)
        : p_(params), k_(std::move(modes)), c_(std::move(couplings)), shift_(shift),
          sector_(sector), threads_(threads) {
        for (double c : c_) c_norm_ += c * c;
        c_norm_ = std::sqrt(c_norm_);
    }

    std::size_t size() const {
        const std::size_t m = k_.size();
        return sector_ == ExcitationSector::one ? m + 2 : m * m + 2 * m + 2;
    }

    void apply(const VectorXcd& in, VectorXcd& out) const {
        if (sector_ == ExcitationSector::one) {
            apply_one(in, out);
        } else {
            apply_two(in, out);
        }
    }

    // [lo, hi] containing the spectrum: diagonal range widened by a norm
    // bound on the off-diagonal couplings.
    std::pair<double, double> spectral_bounds() const {
        const auto [kmin, kmax] = std::minmax_element(k_.begin(), k_.end());
        double lo, hi, off;
        if (sector_ == ExcitationSector::one) {
            lo = std::min({*kmin, p_.omega_c, p_.Omega}) - shift_;
            hi = std::max({*kmax, p_.omega_c, p_.Omega}) - shift_;
            off = c_norm_ + p_.g;
        } else {
            lo = std::min({2.0 * *kmin, *kmin + std::min(p_.omega_c, p_.Omega), 2.0 * p_.omega_c,
                           p_.omega_c + p_.Omega}) -
                 2.0 * shift_;
            hi = std::max({2.0 * *kmax, *kmax + std::max(p_.omega_c, p_.Omega), 2.0 * p_.omega_c,
                           p_.omega_c + p_.Omega}) -
                 2.0 * shift_;
            off = (2.0 * std::sqrt(2.0) + 1.0) * c_norm_ + (1.0 + std::sqrt(2.0)) * p_.g;
        }
        return {lo - off, hi + off};
    }

private:
    // Layout: photon amplitudes u_k, cavity b, TLS e.
    void apply_one(const VectorXcd& in, VectorXcd& out) const {
        const std::size_t m = k_.size();
        const Complex b = in(m);
        const Complex e = in(m + 1);
        Complex sum{0.0, 0.0};
        for (std::size_t j = 0; j < m; ++j) {
            out(j) = (k_[j] - shift_) * in(j) + c_[j] * b;
            sum += c_[j] * in(j);
        }
        out(m) = (p_.omega_c - shift_) * b + sum + p_.g * e;
        out(m + 1) = (p_.Omega - shift_) * e + p_.g * b;
    }

    // Layout: pair amplitudes psi(k, q) (full symmetric M x M, row-major),
    // photon + cavity phi_q, photon + TLS chi_q, |2 g> beta, |1 e> eta.
    void apply_two(const VectorXcd& in, VectorXcd& out) const {
        const std::size_t m = k_.size();
        const std::size_t phi = m * m;
        const std::size_t chi = phi + m;
        const std::size_t beta = chi + m;
        const std::size_t eta = beta + 1;
        const double inv_root2 = 1.0 / std::sqrt(2.0);
        const double root2 = std::sqrt(2.0);
        const double two_shift = 2.0 * shift_;

        parallel_for(m, threads_, [&](std::size_t row) {
            const Complex phi_row = in(phi + row);
            const double c_row = c_[row];
            const std::size_t base = row * m;
            for (std::size_t col = 0; col < m; ++col) {
                out(base + col) = (k_[row] + k_[col] - two_shift) * in(base + col) +
                                  inv_root2 * (c_row * in(phi + col) + c_[col] * phi_row);
            }
        });
        // sum_k (psi_kq + psi_qk) for every q.
        parallel_for(m, threads_, [&](std::size_t q) {
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < m; ++k) acc += c_[k] * (in(k * m + q) + in(q * m + k));
            out(phi + q) = acc;
        });
        Complex sum_phi{0.0, 0.0};
        Complex sum_chi{0.0, 0.0};
        const Complex b = in(beta);
        const Complex e = in(eta);
        for (std::size_t q = 0; q < m; ++q) {
            const Complex ph = in(phi + q);
            const Complex ch = in(chi + q);
            sum_phi += c_[q] * ph;
            sum_chi += c_[q] * ch;
            out(phi + q) = inv_root2 * out(phi + q) + (k_[q] + p_.omega_c - two_shift) * ph +
                           p_.g * ch + root2 * c_[q] * b;
            out(chi + q) = (k_[q] + p_.Omega - two_shift) * ch + p_.g * ph + c_[q] * e;
        }
        out(beta) = (2.0 * p_.omega_c - two_shift) * b + root2 * sum_phi + root2 * p_.g * e;
        out(eta) = (p_.omega_c + p_.Omega - two_shift) * e + sum_chi + root2 * p_.g * b;
    }

    SystemParams p_;
    std::vector<double> k_;
    std::vector<double> c_;
    double c_norm_ = 0.0;
    double shift_;
    ExcitationSector sector_;
    unsigned threads_;
};

// J_0(x) .. J_order(x) by Miller's downward recurrence, normalized with
// J_0 + 2 sum J_2k = 1.
std::vector<double> bessel_sequence(int order, double x) {
    std::vector<double> j(order + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    const int start = order + 2 * static_cast<int>(std::sqrt(40.0 * (order + x))) + 20;
    double next = 0.0;
    double cur = 1e-300;
    double norm = 0.0;
    for (int n = start; n > 0; --n) {
        const double prev = 2.0 * n / x * cur - next;
        next = cur;
        cur = prev;  // J_{n-1}
        if (n - 1 <= order) j[n - 1] = cur;
        if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * cur;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            for (int k = n - 1; k <= order; ++k) j[k] *= 1e-250;
        }
    }
    norm += cur;
    for (double& v : j) v /= norm;
    return j;
}

// One Chebyshev step exp(-i H dt) applied to psi in place.
class ChebyshevPropagator {
public:
    ChebyshevPropagator(const SectorHamiltonian& h, double dt) : h_(h), dt_(dt) {
        const auto [lo, hi] = h.spectral_bounds();
        center_ = 0.5 * (hi + lo);
        half_width_ = 0.5 * (hi - lo) * 1.01 + 1e-12;
        const double x = half_width_ * dt;
        int order = static_cast<int>(x + 10.0 * std::cbrt(x) + 20.0);
        auto j = bessel_sequence(order + 5, x);
        while (order > 1 && std::abs(j[order]) < 1e-17) --order;
        coeff_.resize(order + 1);
        Complex phase{1.0, 0.0};
        for (int n = 0; n <= order; ++n) {
            coeff_[n] = (n == 0 ? 1.0 : 2.0) * phase * j[n];
            phase *= -kI;
        }
        global_ = std::exp(-kI * center_ * dt);
    }

    int terms() const { return static_cast<int>(coeff_.size()); }

    void step(VectorXcd& psi) const {
        const std::size_t n = h_.size();
        VectorXcd prev = psi;
        VectorXcd cur(n), next(n), work(n);
        VectorXcd acc = coeff_[0] * prev;
        h_.apply(prev, work);
        cur = (work - center_ * prev) / half_width_;
        acc += coeff_[1] * cur;
        for (std::size_t m = 2; m < coeff_.size(); ++m) {
            h_.apply(cur, work);
            next = 2.0 * (work - center_ * cur) / half_width_ - prev;
            acc += coeff_[m] * next;
            std::swap(prev, cur);
            std::swap(cur, next);
        }
        psi = global_ * acc;
    }

private:
    const SectorHamiltonian& h_;
    double dt_;
    double center_ = 0.0;
    double half_width_ = 1.0;
    std::vector<Complex> coeff_;
    Complex global_;
};

std::vector<Complex> gaussian_packet(const std::vector<double>& modes, double center, double sigma,
                                     double launch) {
    std::vector<Complex> u(modes.size());
    double norm = 0.0;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const double dk = modes[j] - center;
        u[j] = std::exp(-dk * dk * sigma * sigma) * std::exp(-kI * modes[j] * launch);
        norm += std::norm(u[j]);
    }
    for (auto& v : u) v /= std::sqrt(norm);
    return u;
}

struct Evolution {
    VectorXcd state;
    std::vector<double> times;
    std::vector<double> drift;
};

Evolution evolve(const SectorHamiltonian& h, VectorXcd state, double total_time, int records,
                 double norm_tol) {
    const auto [lo, hi] = h.spectral_bounds();
    const double half_width = 0.5 * (hi - lo);
    // About 60 Bessel orders per step keeps the recursion short and stable.
    int steps = std::max(records, static_cast<int>(std::ceil(half_width * total_time / 60.0)));
    steps = ((steps + records - 1) / records) * records;
    const double dt = total_time / steps;
    ChebyshevPropagator prop(h, dt);

    Evolution ev;
    const double norm0 = state.norm();
    for (int s = 1; s <= steps; ++s) {
        prop.step(state);
        if (s % (steps / records) == 0) {
            const double drift = std::abs(state.norm() / norm0 - 1.0);
            ev.times.push_back(s * dt);
            ev.drift.push_back(drift);
            if (!(drift <= norm_tol)) {
                std::ostringstream os;
                os << "lattice_evolve: norm drift " << drift << " at t = " << s * dt
                   << " exceeds " << norm_tol;
                throw ConvergenceFailure(os.str());
            }
        }
    }
    ev.state = std::move(state);
    return ev;
}

}  // namespace

double LatticeConfig::spacing() const { return kTwoPi / length; }

namespace {

// Lattice index -> stride; the finest window wins where windows overlap.
std::map<long, int> mode_table(const LatticeConfig& cfg) {
    std::map<long, int> table;
    for (long j = 0; j < cfg.num_modes; ++j) table[j] = 1;
    const double dk = cfg.spacing();
    for (const auto& w : cfg.extra_windows) {
        const long a = static_cast<long>(std::ceil((w.lo - cfg.k_min) / dk - 1e-9));
        const long b = static_cast<long>(std::floor((w.hi - cfg.k_min) / dk + 1e-9));
        if (w.stride < 1) throw DomainError("LatticeConfig: window stride must be >= 1");
        for (long j = a; j <= b; ++j) {
            if (((j % w.stride) + w.stride) % w.stride != 0) continue;
            auto [it, inserted] = table.emplace(j, w.stride);
            if (!inserted) it->second = std::min(it->second, w.stride);
        }
    }
    // A coarse mode whose cell reaches into the fine band would double count.
    for (auto it = table.begin(); it != table.end();) {
        const long half = it->second / 2;
        bool touches = false;
        for (long d = -half; d <= half && it->second > 1; ++d) {
            const auto nb = table.find(it->first + d);
            touches = touches || (d != 0 && nb != table.end() && nb->second == 1);
        }
        it = touches ? table.erase(it) : std::next(it);
    }
    return table;
}

}  // namespace

std::vector<long> LatticeConfig::mode_indices() const {
    std::vector<long> idx;
    for (const auto& [j, s] : mode_table(*this)) idx.push_back(j);
    return idx;
}

std::vector<int> LatticeConfig::mode_strides() const {
    std::vector<int> strides;
    for (const auto& [j, s] : mode_table(*this)) strides.push_back(s);
    return strides;
}

std::vector<double> LatticeConfig::modes() const {
    std::vector<double> k;
    const double dk = spacing();
    for (long j : mode_indices()) k.push_back(k_min + static_cast<double>(j) * dk);
    return k;
}

std::size_t LatticeConfig::two_excitation_dimension() const {
    const std::size_t m = mode_indices().size();
    return m * (m + 1) / 2 + 2 * m + 2;
}

void LatticeConfig::validate(const SystemParams& params) const {
    params.validate();
    auto fail = [](const std::string& msg) { throw DomainError("LatticeConfig: " + msg); };
    if (num_modes < 2) fail("num_modes must be >= 2");
    if (!(k_min + mode_indices().front() * spacing() > 0.0)) fail("all modes must have k > 0");
    if (!(length > 0.0)) fail("length must be > 0");
    const double dk = spacing();
    if (std::abs((k_max - k_min) - (num_modes - 1) * dk) > 0.5 * dk) {
        fail("k window does not match num_modes * 2 pi / length");
    }
    const double gamma = bound_decay_rate(params);
    if (!(packet.sigma >= 10.0 / gamma)) fail("packet sigma must be >= 10 / gamma_min");
    if (!(packet.launch <= -4.0 * packet.sigma)) fail("packet must start >= 4 sigma upstream");
    const double travel = evolve_time > 0.0 ? evolve_time : -2.0 * packet.launch;
    // Periodic box with the cavity at 0 == length: the packet must start and end
    // clear of it without wrapping.
    if (packet.launch - 4.0 * packet.sigma < -length) fail("box too short for the launch point");
    if (packet.launch + travel + 4.0 * packet.sigma > length) {
        fail("box too short: the outgoing packet would wrap around onto the cavity");
    }
    if (packet.launch + travel - 4.0 * packet.sigma < 0.0) {
        fail("evolve_time too short: the packet has not left the cavity");
    }
    if (two_excitation_dimension() > 300000) fail("two-excitation dimension exceeds 3e5");
    if (record_count < 1) fail("record_count must be >= 1");
}

LatticeConfig LatticeConfig::centered(const SystemParams& params, double k1_center,
                                      double k2_center, int num_modes, double sigma_factor,
                                      double length_factor, double launch_factor) {
    LatticeConfig cfg;
    const double gamma = bound_decay_rate(params);
    cfg.num_modes = num_modes;
    cfg.packet.k1_center = k1_center;
    cfg.packet.k2_center = k2_center;
    cfg.packet.sigma = sigma_factor / gamma;
    cfg.packet.launch = -launch_factor * cfg.packet.sigma;
    cfg.length = length_factor * cfg.packet.sigma;
    const double dk = cfg.spacing();
    const double mid = 0.5 * (k1_center + k2_center);
    cfg.k_min = mid - 0.5 * (num_modes - 1) * dk;
    cfg.k_max = cfg.k_min + (num_modes - 1) * dk;
    return cfg;
}

void LatticeConfig::add_symmetric_wings(double half_width, int stride) {
    const double mid = 0.5 * (k_min + k_max);
    const double reach = std::min(half_width, mid - 0.5 * spacing());
    if (!(reach > 0.5 * (k_max - k_min))) return;
    extra_windows.push_back({mid - reach, k_min, stride});
    extra_windows.push_back({k_max, mid + reach, stride});
}

nlohmann::json OutputRecord::to_json() const {
    auto complex_pairs = [](const std::vector<Complex>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& z : v) a.push_back({z.real(), z.imag()});
        return a;
    };
    nlohmann::json windows = nlohmann::json::array();
    for (const auto& w : config.extra_windows) {
        windows.push_back({{"lo", w.lo}, {"hi", w.hi}, {"stride", w.stride}});
    }
    nlohmann::json j;
    j["units"] = "v=1; energies and momenta in the frequency unit of params";
    j["sector"] = sector == ExcitationSector::one ? "one" : "two";
    j["params"] = {{"omega_c", params.omega_c},
                   {"Omega", params.Omega},
                   {"g", params.g},
                   {"v_tilde", params.v_tilde}};
    j["config"] = {{"num_modes", config.num_modes},
                   {"length", config.length},
                   {"k_window", {config.k_min, config.k_max}},
                   {"extra_windows", windows},
                   {"packet",
                    {{"k1_center", config.packet.k1_center},
                     {"k2_center", config.packet.k2_center},
                     {"sigma", config.packet.sigma},
                     {"launch", config.packet.launch}}},
                   {"evolve_time", config.evolve_time},
                   {"record_count", config.record_count},
                   {"norm_tol", config.norm_tol}};
    j["modes"] = modes;
    j["times"] = times;
    j["norm_drift"] = norm_drift;
    j["emitter_population"] = emitter_population;
    if (sector == ExcitationSector::one) {
        j["reflected"] = reflected;
        j["transmitted"] = transmitted;
        j["incident"] = complex_pairs(incident);
        j["scattered"] = complex_pairs(scattered);
    } else {
        j["pair_even"] = complex_pairs(pair_even);
        j["lattice_t_even"] = complex_pairs(lattice_t_even);
    }
    return j;
}

OutputRecord lattice_evolve(const SystemParams& params, const LatticeConfig& config,
                            ExcitationSector sector) {
    config.validate(params);
    OutputRecord rec;
    rec.sector = sector;
    rec.params = params;
    rec.config = config;
    rec.modes = config.modes();
    const std::size_t m = rec.modes.size();
    std::vector<double> coupling;
    for (int stride : config.mode_strides()) {
        coupling.push_back(params.v_tilde * std::sqrt(stride / config.length));
    }
    const double shift = 0.5 * (config.packet.k1_center + config.packet.k2_center);
    const double total_time =
        config.evolve_time > 0.0 ? config.evolve_time : -2.0 * config.packet.launch;

    auto free_phase = [&](double k) { return std::exp(-kI * (k - shift) * total_time); };

    // One-excitation run; in the two-excitation case it supplies the lattice's
    // own single-photon response at both carriers.
    auto run_one = [&](bool both_carriers) {
        auto u = gaussian_packet(rec.modes, config.packet.k1_center, config.packet.sigma,
                                 config.packet.launch);
        if (both_carriers && config.packet.k2_center != config.packet.k1_center) {
            const auto u2 = gaussian_packet(rec.modes, config.packet.k2_center,
                                            config.packet.sigma, config.packet.launch);
            double norm = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                u[j] += u2[j];
                norm += std::norm(u[j]);
            }
            for (auto& v : u) v /= std::sqrt(norm);
        }
        SectorHamiltonian h(params, rec.modes, coupling, shift, ExcitationSector::one, 1);
        VectorXcd psi = VectorXcd::Zero(static_cast<Eigen::Index>(m + 2));
        for (std::size_t j = 0; j < m; ++j) psi(j) = u[j];
        Evolution ev = evolve(h, psi, total_time, config.record_count, config.norm_tol);
        std::vector<Complex> out(m);
        for (std::size_t j = 0; j < m; ++j) out[j] = ev.state(j) / free_phase(rec.modes[j]);
        const double emitter = std::norm(ev.state(m)) + std::norm(ev.state(m + 1));
        return std::make_tuple(u, out, emitter, ev);
    };

    if (sector == ExcitationSector::one) {
        auto [u, out, emitter, ev] = run_one(false);
        rec.incident = u;
        rec.scattered = out;
        rec.emitter_population = emitter;
        rec.times = ev.times;
        rec.norm_drift = ev.drift;
        for (std::size_t j = 0; j < m; ++j) {
            rec.reflected += 0.25 * std::norm(out[j] - u[j]);
            rec.transmitted += 0.25 * std::norm(out[j] + u[j]);
        }
        return rec;
    }

    // Lattice single-photon response: ratio of outgoing to incident amplitude
    // wherever the probe packet has weight.
    {
        rec.lattice_t_even.assign(m, Complex{0.0, 0.0});
        const auto [u, out, emitter, ev] = run_one(true);
        (void)emitter;
        (void)ev;
        for (std::size_t j = 0; j < m; ++j) {
            rec.lattice_t_even[j] = std::abs(u[j]) > 1e-12 ? out[j] / u[j] : Complex{0.0, 0.0};
        }
    }

    const auto u1 = gaussian_packet(rec.modes, config.packet.k1_center, config.packet.sigma,
                                    config.packet.launch);
    const auto u2 = gaussian_packet(rec.modes, config.packet.k2_center, config.packet.sigma,
                                    config.packet.launch);
    rec.incident = u1;
    rec.pair_input.assign(m * m, Complex{0.0, 0.0});
    double norm = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            const Complex v = u1[a] * u2[b] + u2[a] * u1[b];
            rec.pair_input[a * m + b] = v;
            norm += std::norm(v);
        }
    }
    for (auto& v : rec.pair_input) v /= std::sqrt(norm);

    SectorHamiltonian h(params, rec.modes, coupling, shift, ExcitationSector::two, config.threads);
    VectorXcd psi = VectorXcd::Zero(static_cast<Eigen::Index>(h.size()));
    for (std::size_t i = 0; i < m * m; ++i) psi(i) = rec.pair_input[i];
    Evolution ev = evolve(h, psi, total_time, config.record_count, config.norm_tol);
    rec.times = ev.times;
    rec.norm_drift = ev.drift;
    rec.pair_even.resize(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            rec.pair_even[a * m + b] =
                ev.state(a * m + b) / (free_phase(rec.modes[a]) * free_phase(rec.modes[b]));
        }
    }
    double emitter = 0.0;
    for (Eigen::Index i = static_cast<Eigen::Index>(m * m); i < ev.state.size(); ++i) {
        emitter += std::norm(ev.state(i));
    }
    rec.emitter_population = emitter;
    return rec;
}

double analytic_reflected_fraction(const SystemParams& params, const OutputRecord& record) {
    if (record.sector != ExcitationSector::one) {
        throw DomainError("analytic_reflected_fraction: needs a one-excitation record");
    }
    double r = 0.0;
    for (std::size_t j = 0; j < record.modes.size(); ++j) {
        r += std::norm(record.incident[j]) * std::norm(one_photon(params, record.modes[j]).r_bar);
    }
    return r;
}

std::vector<Complex> reflected_pair_amplitude(const OutputRecord& record) {
    if (record.sector != ExcitationSector::two) {
        throw DomainError("reflected_pair_amplitude: needs a two-excitation record");
    }
    const std::size_t m = record.modes.size();
    std::vector<Complex> out(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            const Complex in = record.pair_input[a * m + b];
            out[a * m + b] = 0.25 * (record.pair_even[a * m + b] -
                                     (record.lattice_t_even[a] + record.lattice_t_even[b]) * in + in);
        }
    }
    return out;
}

std::vector<Complex> analytic_reflected_pair_amplitude(const SystemParams& params,
                                                       const OutputRecord& record) {
    if (record.sector != ExcitationSector::two) {
        throw DomainError("analytic_reflected_pair_amplitude: needs a two-excitation record");
    }
    const std::size_t m = record.modes.size();
    const auto idx = record.config.mode_indices();
    const double dk = record.config.spacing();
    std::map<long, std::size_t> position;
    for (std::size_t a = 0; a < m; ++a) position[idx[a]] = a;

    std::vector<Complex> r_bar(m);
    for (std::size_t a = 0; a < m; ++a) r_bar[a] = one_photon(params, record.modes[a]).r_bar;

    // Input weight is concentrated near the carriers; only those cells feed the bound part.
    double peak = 0.0;
    for (const auto& v : record.pair_input) peak = std::max(peak, std::abs(v));
    std::map<long, std::vector<std::pair<std::size_t, std::size_t>>> by_sum;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (std::abs(record.pair_input[a * m + b]) > 1e-13 * peak) {
                by_sum[idx[a] + idx[b]].emplace_back(a, b);
            }
        }
    }

    std::vector<Complex> out(m * m);
    parallel_for(m, record.config.threads, [&](std::size_t a) {
        for (std::size_t b = 0; b < m; ++b) {
            Complex v = r_bar[a] * r_bar[b] * record.pair_input[a * m + b];
            const auto it = by_sum.find(idx[a] + idx[b]);
            if (it != by_sum.end()) {
                Complex bound{0.0, 0.0};
                for (const auto& [l, r] : it->second) {
                    const TwoPhotonIn in(record.modes[l], record.modes[r]);
                    bound += kI * t_matrix_two(params, in, record.modes[a]).value *
                             record.pair_input[l * m + r];
                }
                v += dk / 8.0 * bound;
            }
            out[a * m + b] = v;
        }
    });
    return out;
}

std::vector<double> relative_density(const OutputRecord& record,
                                     std::span<const Complex> pair_amplitude,
                                     std::span<const double> x_grid) {
    const std::size_t m = record.modes.size();
    if (pair_amplitude.size() != m * m) {
        throw SchemaMismatch("relative_density: amplitude does not match the mode grid");
    }
    const auto idx = record.config.mode_indices();
    const long base = idx.front();
    const long span = idx.back() - base;
    std::vector<double> out(x_grid.size());
    parallel_for(x_grid.size(), record.config.threads, [&](std::size_t ix) {
        const double x = x_grid[ix];
        std::vector<Complex> w(m);
        for (std::size_t a = 0; a < m; ++a) w[a] = std::exp(0.5 * kI * record.modes[a] * x);
        std::vector<Complex> by_sum(static_cast<std::size_t>(2 * span + 1), Complex{0.0, 0.0});
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                const Complex v = pair_amplitude[a * m + b];
                if (v == Complex{0.0, 0.0}) continue;
                by_sum[static_cast<std::size_t>(idx[a] + idx[b] - 2 * base)] += v * w[a] * std::conj(w[b]);
            }
        }
        double acc = 0.0;
        for (const auto& s : by_sum) acc += std::norm(s);
        out[ix] = acc / record.config.length;
    });
    return out;
}

}  // namespace wgqed::oracle
