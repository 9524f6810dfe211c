#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "svg.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/oracle/compare.hpp"
#include "wgqed/oracle/lattice.hpp"
#include "wgqed/scatter_one.hpp"
#include "wgqed/scatter_two.hpp"
#include "wgqed/statistics.hpp"
#include "wgqed/sweep.hpp"

namespace wgqed::cli {

using nlohmann::json;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

// Writes every file with the run config embedded.
class Emitter {
public:
    Emitter(const RunConfig& cfg, RunResult& result)
        : cfg_(cfg), echo_(to_json(cfg)), result_(result) {
        std::filesystem::create_directories(cfg.output.dir);
    }

    void grid(const std::string& stem, const SweepGrid& g) {
        g.check();
        if (cfg_.wants("csv")) write(stem + ".csv", to_csv(g) + "# run_config: " + echo_.dump() + "\n");
        if (cfg_.wants("json")) {
            write(stem + ".json", json{{"run_config", echo_}, {"grid", to_json(g)}}.dump(1) + "\n");
        }
    }

    void document(const std::string& stem, const json& body) {
        write(stem + ".json", json{{"run_config", echo_}, {"result", body}}.dump(1) + "\n");
    }

    void text(const std::string& name, const std::string& body) { write(name, body); }

    void line_plot(const std::string& stem, PlotLabels labels, const std::vector<Series>& series,
                   bool log_y = false) {
        if (!cfg_.wants("plot")) return;
        labels.metadata = echo_.dump();
        write(stem + ".svg", line_plot_svg(labels, series, log_y));
    }

    void heatmap(const std::string& stem, PlotLabels labels, const SweepGrid& g) {
        if (!cfg_.wants("plot")) return;
        labels.metadata = echo_.dump();
        std::vector<double> v(g.cell_count());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.value(i);
        write(stem + ".svg", heatmap_svg(labels, g.axes[0], g.axes[1], v));
    }

private:
    void write(const std::string& name, const std::string& body) {
        const auto path = std::filesystem::path(cfg_.output.dir) / name;
        std::ofstream out(path, std::ios::binary);
        out << body;
        if (!out) throw ConfigError("cannot write '" + path.string() + "'");
        result_.files.push_back(path.string());
    }

    const RunConfig& cfg_;
    json echo_;
    RunResult& result_;
};

void run_spectrum(const RunConfig& cfg, Emitter& out) {
    SweepGrid g;
    g.axis_names = {"n", "branch"};
    g.axes = {{}, {1.0, -1.0}};
    for (int n = 1; n <= cfg.spectrum.n_max; ++n) g.axes[0].push_back(n);
    g.value_names = {"lambda_re", "lambda_im", "bare", "linewidth"};
    g.allocate();
    for (int n = 1; n <= cfg.spectrum.n_max; ++n) {
        const DressedPair pair = dressed_pair(cfg.params, n);
        for (int b = 0; b < 2; ++b) {
            const std::size_t cell = static_cast<std::size_t>((n - 1) * 2 + b);
            const Complex lam = b == 0 ? pair.lambda_plus : pair.lambda_minus;
            g.value(cell, 0) = lam.real();
            g.value(cell, 1) = lam.imag();
            g.value(cell, 2) = b == 0 ? pair.bare_plus : pair.bare_minus;
            g.value(cell, 3) = -2.0 * lam.imag();
        }
    }
    g.metadata = {{"quantity", "dressed eigenvalues lambda_n+- of the effective Hamiltonian"},
                  {"units", "v = 1"}};
    out.grid("spectrum", g);
}

void run_single(const RunConfig& cfg, Emitter& out) {
    const auto k = linspace(cfg.single.k_min, cfg.single.k_max, cfg.single.points);
    const auto amps = reflection_spectrum(cfg.params, k);
    SweepGrid g;
    g.axis_names = {"k"};
    g.axes = {k};
    g.value_names = {"r_re", "r_im", "t_re", "t_im", "R", "T", "delta"};
    g.allocate();
    Series r{"|r|^2", k, {}}, t{"|t|^2", k, {}};
    for (std::size_t i = 0; i < k.size(); ++i) {
        const auto& a = amps[i];
        const double vals[] = {a.r_bar.real(), a.r_bar.imag(), a.t_bar.real(), a.t_bar.imag(),
                               std::norm(a.r_bar), std::norm(a.t_bar), a.delta_k};
        for (std::size_t c = 0; c < 7; ++c) g.value(i, c) = vals[c];
        r.y.push_back(std::norm(a.r_bar));
        t.y.push_back(std::norm(a.t_bar));
    }
    g.metadata = {{"quantity", "single-photon reflection and transmission amplitudes"}};
    out.grid("single", g);
    out.line_plot("single", {"Single-photon scattering", "k", "probability", ""}, {r, t});
}

void run_wavefunction(const RunConfig& cfg, Emitter& out) {
    const double e_half = resolve_energy(cfg.wavefunction.e_half, cfg.params, "wavefunction.e_half");
    const TwoPhotonIn in = TwoPhotonIn::from_energy(2.0 * e_half, cfg.wavefunction.delta_k);
    const auto x = linspace(cfg.wavefunction.x_min, cfg.wavefunction.x_max, cfg.wavefunction.points);
    SweepGrid g;
    g.axis_names = {"x"};
    g.axes = {x};
    g.value_names.clear();
    for (const auto& ch : cfg.wavefunction.channels) {
        for (const char* suffix : {"_re", "_im", "_abs2"}) g.value_names.push_back(ch + suffix);
    }
    g.allocate();
    std::vector<Series> series;
    for (std::size_t c = 0; c < cfg.wavefunction.channels.size(); ++c) {
        const Channel ch = channel_from_string(cfg.wavefunction.channels[c]);
        const auto wf = sample_wavefunction(cfg.params, in, ch, x, cfg.wavefunction.center);
        Series s{std::string("|") + to_string(ch) + "|^2", x, {}};
        for (std::size_t i = 0; i < x.size(); ++i) {
            g.value(i, 3 * c) = wf.values[i].real();
            g.value(i, 3 * c + 1) = wf.values[i].imag();
            g.value(i, 3 * c + 2) = std::norm(wf.values[i]);
            s.y.push_back(std::norm(wf.values[i]));
        }
        series.push_back(std::move(s));
    }
    g.metadata = {{"quantity", "two-photon outgoing wavefunction at x1 = center + x/2, x2 = center - x/2"},
                  {"e_half", e_half},
                  {"k1", in.k1()},
                  {"k2", in.k2()},
                  {"center", cfg.wavefunction.center}};
    out.grid("wavefunction", g);
    out.line_plot("wavefunction", {"Two-photon wavefunction, E/2 = " + format_number(e_half), "x",
                                   "|psi|^2", ""},
                  series);
}

void run_fluorescence(const RunConfig& cfg, Emitter& out, RunResult& result) {
    const auto grid = linspace(-cfg.fluorescence.delta_max, cfg.fluorescence.delta_max,
                               cfg.fluorescence.points);
    for (std::size_t e = 0; e < cfg.fluorescence.energies.size(); ++e) {
        const auto& spec = cfg.fluorescence.energies[e];
        const double energy = resolve_energy(
            spec, cfg.params, "fluorescence.energies[" + std::to_string(e) + "]");
        if (!(energy > cfg.fluorescence.delta_max)) {
            throw ConfigError("fluorescence.delta_max: momenta (E +- delta)/2 must stay > 0 at E = " +
                              format_number(energy));
        }
        SweepGrid g = fluorescence_map(cfg.params, energy, grid, grid, cfg.threads);
        const auto peaks = strict_local_maxima(g);
        json where = json::array();
        for (std::size_t p : peaks) {
            const auto ij = g.unravel(p);
            where.push_back({g.axes[0][ij[0]], g.axes[1][ij[1]]});
        }
        g.metadata["energy_spec"] = spec;
        g.metadata["energy"] = energy;
        g.metadata["local_maxima"] = peaks.size();
        g.metadata["local_maxima_at"] = where;
        if (g.any_flag()) result.warnings.push_back("fluorescence: some cells are flagged");
        const std::string stem = "fluorescence_E" + format_number(energy);
        out.grid(stem, g);
        out.heatmap(stem, {"T2 at E = " + format_number(energy), "delta_k", "delta_p", ""}, g);
    }
}

void run_g2_zero(const RunConfig& cfg, Emitter& out, RunResult& result) {
    const auto e_half = linspace(cfg.g2.e_half_min, cfg.g2.e_half_max, cfg.g2.points);
    ZeroDelaySweepOptions opts;
    opts.bg_tol = cfg.g2.bg_tol;
    opts.l_reg = cfg.g2.l_reg;
    opts.threads = cfg.threads;
    std::vector<Series> series;
    for (const auto& name : cfg.g2.channels) {
        const SweepGrid g = g2_zero_sweep(cfg.params, e_half, channel_from_string(name), opts);
        std::size_t flagged = 0;
        for (const auto& f : g.flags) flagged += f.empty() ? 0 : 1;
        if (flagged > 0) {
            result.warnings.push_back("g2 " + name + ": " + std::to_string(flagged) +
                                      " cells flagged (see the flag column)");
        }
        out.grid("g2_zero_" + name, g);
        Series s{name, e_half, {}};
        for (std::size_t i = 0; i < e_half.size(); ++i) s.y.push_back(g.value(i));
        series.push_back(std::move(s));
    }
    out.line_plot("g2_zero", {"Zero-delay coherence", "E/2", "g2(0)", ""}, series, true);
}

void run_g2_curves(const RunConfig& cfg, Emitter& out, RunResult& result) {
    const auto tau = linspace(0.0, cfg.g2.tau_max, cfg.g2.tau_points);
    for (std::size_t i = 0; i < cfg.g2.curves.size(); ++i) {
        const auto& spec = cfg.g2.curves[i];
        const std::string field = "g2.curves[" + std::to_string(i) + "].e_half";
        const double e_half = resolve_energy(spec.e_half, cfg.params, field);
        const TwoPhotonIn in = TwoPhotonIn::monochromatic(e_half);
        const Channel ch = channel_from_string(spec.channel);
        json warnings = json::array();
        G2Curve curve;
        if (spec.normalization == "box") {
            curve = g2(cfg.params, in, ch, tau, Normalization::box(cfg.g2.l_reg), cfg.g2.bg_tol);
        } else {
            try {
                curve = g2(cfg.params, in, ch, tau, Normalization::asymptotic(), cfg.g2.bg_tol);
            } catch (const VanishingBackground& e) {
                if (spec.normalization == "asymptotic") throw;
                warnings.push_back(std::string(e.what()) + "; using box normalization");
                curve = g2(cfg.params, in, ch, tau, Normalization::box(cfg.g2.l_reg), cfg.g2.bg_tol);
            }
        }
        for (const auto& w : warnings) result.warnings.push_back(w.get<std::string>());
        SweepGrid g;
        g.axis_names = {"tau"};
        g.axes = {tau};
        g.value_names = {"g2"};
        g.allocate();
        for (std::size_t k = 0; k < tau.size(); ++k) g.value(k) = curve.values[k];
        const bool box = curve.normalization.kind == Normalization::Kind::box;
        g.metadata = {{"channel", spec.channel},
                      {"e_half_spec", spec.e_half},
                      {"e_half", e_half},
                      {"normalization", box ? "box" : "asymptotic"},
                      {"background", curve.background},
                      {"warnings", warnings}};
        if (box) g.metadata["l_reg"] = curve.normalization.l_reg;
        const std::string stem = "g2_tau_" + spec.channel + "_Ehalf" + format_number(e_half);
        out.grid(stem, g);
        out.line_plot(stem,
                      {"g2(tau), " + spec.channel + ", E/2 = " + format_number(e_half), "tau",
                       "g2", ""},
                      {{spec.channel, tau, curve.values}});
    }
}

int run_oracle_check(const RunConfig& cfg, Emitter& out) {
    oracle::ComparisonReport report;
    for (const auto& tc : cfg.oracle.t_matrix) {
        auto [closed, spectral] =
            oracle::t_matrix_samples(tc.params, tc.k1, tc.k2, tc.p1, cfg.threads);
        closed.name = spectral.name = "T:" + tc.label;
        report.quantities.push_back(
            oracle::compare_quantity(closed, spectral, cfg.oracle.t_tolerance));
    }

    const auto& l1 = cfg.oracle.lattice_one;
    if (l1.enabled) {
        oracle::SampledQuantity analytic{"R_lattice_one", {"carrier"}, {}, {}};
        oracle::SampledQuantity lattice = analytic;
        json records = json::array();
        for (double k : l1.carriers) {
            auto lc = oracle::LatticeConfig::centered(cfg.params, k, k, l1.modes);
            lc.threads = cfg.threads;
            const auto rec = oracle::lattice_evolve(cfg.params, lc, oracle::ExcitationSector::one);
            analytic.points.push_back({k});
            lattice.points.push_back({k});
            analytic.values.emplace_back(oracle::analytic_reflected_fraction(cfg.params, rec));
            lattice.values.emplace_back(rec.reflected);
            records.push_back(rec.to_json());
        }
        // Reflected fractions near transparency are tiny; errors are taken
        // relative to max(R, 0.01).
        report.quantities.push_back(
            oracle::compare_quantity(analytic, lattice, l1.tolerance, oracle::Metric::max_rel, 1e-2));
        out.document("lattice_one", records);
    }

    const auto& l2 = cfg.oracle.lattice_two;
    if (l2.enabled) {
        auto lc = oracle::LatticeConfig::centered(cfg.params, l2.carrier, l2.carrier, l2.modes);
        lc.add_symmetric_wings(l2.wing_half_width, l2.wing_stride);
        lc.threads = cfg.threads;
        const auto rec = oracle::lattice_evolve(cfg.params, lc, oracle::ExcitationSector::two);
        const auto x = linspace(-l2.x_max, l2.x_max, l2.x_points);
        const auto g_lat = oracle::relative_density(rec, oracle::reflected_pair_amplitude(rec), x);
        const auto g_an = oracle::relative_density(
            rec, oracle::analytic_reflected_pair_amplitude(cfg.params, rec), x);
        oracle::SampledQuantity analytic{"G_reflected_lattice_two", {"x"}, {}, {}};
        oracle::SampledQuantity lattice = analytic;
        SweepGrid g;
        g.axis_names = {"x"};
        g.axes = {x};
        g.value_names = {"analytic", "lattice"};
        g.allocate();
        for (std::size_t i = 0; i < x.size(); ++i) {
            analytic.points.push_back({x[i]});
            lattice.points.push_back({x[i]});
            analytic.values.emplace_back(g_an[i]);
            lattice.values.emplace_back(g_lat[i]);
            g.value(i, 0) = g_an[i];
            g.value(i, 1) = g_lat[i];
        }
        g.metadata = {{"quantity", "reflected pair density in the relative coordinate"},
                      {"modes", rec.modes.size()},
                      {"norm_drift", rec.norm_drift},
                      {"emitter_population", rec.emitter_population}};
        report.quantities.push_back(
            oracle::compare_quantity(analytic, lattice, l2.tolerance, oracle::Metric::l2_rel));
        out.grid("lattice_two_density", g);
        out.line_plot("lattice_two_density",
                      {"Reflected pair density", "x", "G(x)", ""},
                      {{"analytic", x, g_an}, {"lattice", x, g_lat}});
    }

    out.document("oracle_report", report.to_json());
    std::string csv = "quantity,metric,tolerance,max_rel_error,mean_rel_error,l2_rel_error,verdict\n";
    for (const auto& q : report.quantities) {
        csv += q.name + "," + (q.metric == oracle::Metric::max_rel ? "max_rel" : "l2_rel") + "," +
               format_number(q.tolerance) + "," + format_number(q.max_rel_error) + "," +
               format_number(q.mean_rel_error) + "," + format_number(q.l2_rel_error) + "," +
               (q.pass ? "pass" : "fail") + "\n";
    }
    if (cfg.wants("csv")) out.text("oracle_report.csv", csv);
    return report.pass() ? 0 : 4;
}

}  // namespace

RunResult run_command(const RunConfig& cfg) {
    RunResult result;
    Emitter out(cfg, result);
    switch (cfg.command) {
        case Command::spectrum: run_spectrum(cfg, out); break;
        case Command::single: run_single(cfg, out); break;
        case Command::wavefunction: run_wavefunction(cfg, out); break;
        case Command::fluorescence: run_fluorescence(cfg, out, result); break;
        case Command::g2:
            if (cfg.g2.mode == "curves") {
                run_g2_curves(cfg, out, result);
            } else {
                run_g2_zero(cfg, out, result);
            }
            break;
        case Command::oracle_check: result.exit_code = run_oracle_check(cfg, out); break;
    }
    return result;
}

}  // namespace wgqed::cli
