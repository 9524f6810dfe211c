#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "wgqed/model.hpp"

namespace wgqed::cli {

enum class Command { spectrum, single, wavefunction, fluorescence, g2, oracle_check };

const char* to_string(Command c);
Command command_from_string(const std::string& s);

// An energy given either as a number or as an expression over the bare
// spectrum: "[2*]NAME[/2]" with NAME one of omega_c, Omega, bare_lambda1+,
// bare_lambda1-, bare_lambda2+, bare_lambda2-.
double resolve_energy(const nlohmann::json& spec, const SystemParams& params,
                      const std::string& field);

struct SpectrumBlock {
    int n_max = 2;
};

struct SingleBlock {
    double k_min = 2.0;
    double k_max = 18.0;
    int points = 1601;
};

struct WavefunctionBlock {
    std::vector<std::string> channels{"RR", "LL", "LR"};
    nlohmann::json e_half = "Omega";
    double delta_k = 0.0;
    double x_min = -40.0;
    double x_max = 40.0;
    int points = 801;
    double center = 0.0;
};

struct FluorescenceBlock {
    std::vector<nlohmann::json> energies{"bare_lambda2+", "bare_lambda2-"};
    double delta_max = 10.0;
    int points = 201;
};

struct CurveSpec {
    std::string channel = "LL";
    nlohmann::json e_half = "Omega";
    // asymptotic | box | auto (asymptotic, box when the background vanishes)
    std::string normalization = "auto";
};

struct G2Block {
    std::string mode = "zero_delay";  // zero_delay | curves
    std::vector<std::string> channels{"LL", "RR"};
    double e_half_min = 2.0;
    double e_half_max = 28.0;
    int points = 1041;
    std::vector<CurveSpec> curves;
    double tau_max = 40.0;
    int tau_points = 401;
    double bg_tol = 1e-10;
    double l_reg = 0.0;
};

struct TMatrixCase {
    std::string label;
    SystemParams params;
    std::vector<double> k1;
    std::vector<double> k2;
    std::vector<double> p1;
};

struct LatticeOneCheck {
    bool enabled = false;
    std::vector<double> carriers{10.0, 14.993745};
    int modes = 300;
    double tolerance = 0.01;
};

struct LatticeTwoCheck {
    bool enabled = false;
    double carrier = 5.0;
    int modes = 300;
    double wing_half_width = 4.5;
    int wing_stride = 8;
    double x_max = 400.0;
    int x_points = 801;
    double tolerance = 0.02;
};

struct OracleBlock {
    std::vector<TMatrixCase> t_matrix;
    double t_tolerance = 1e-6;
    LatticeOneCheck lattice_one;
    LatticeTwoCheck lattice_two;
};

struct OutputBlock {
    std::string dir = "out";
    std::vector<std::string> formats{"csv", "json"};
};

struct RunConfig {
    Command command = Command::spectrum;
    std::string preset;  // informational
    SystemParams params = SystemParams::strong_coupling();
    SpectrumBlock spectrum;
    SingleBlock single;
    WavefunctionBlock wavefunction;
    FluorescenceBlock fluorescence;
    G2Block g2;
    OracleBlock oracle;
    OutputBlock output;
    unsigned threads = 1;

    bool wants(const std::string& format) const;
};

nlohmann::json to_json(const RunConfig& cfg);

// Strict parse: unknown keys, wrong types and out-of-range values throw
// ConfigError naming the offending field path. Missing keys keep defaults.
RunConfig config_from_json(const nlohmann::json& j, Command command);

// Reads a JSON file; parse errors report line and column.
nlohmann::json read_config_file(const std::string& path);

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
RunConfig preset(const std::string& name);

}  // namespace wgqed::cli
