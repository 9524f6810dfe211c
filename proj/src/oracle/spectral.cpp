#include "wgqed/oracle/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "wgqed/errors.hpp"

namespace wgqed::oracle {

namespace {

using Eigen::Matrix;
using Vec5 = Eigen::Matrix<Complex, 5, 1>;
using Mat5 = Eigen::Matrix<Complex, 5, 5>;

constexpr Complex kI{0.0, 1.0};

// Truncated Fock basis: |0g>, |1g>, |0e>, |2g>, |1e>.
constexpr std::array<int, 5> kExcitation{0, 1, 1, 2, 2};

struct Mode {
    Complex energy;
    Vec5 right;
    Vec5 left;  // row of the inverse eigenvector matrix: <lambda^*|
};

struct Sector {
    std::vector<Mode> modes;
};

Mat5 effective_hamiltonian(const SystemParams& p) {
    const Complex alpha{p.omega_c, -0.5 * p.v_tilde * p.v_tilde};
    Mat5 h = Mat5::Zero();
    h(1, 1) = alpha;
    h(2, 2) = p.Omega;
    h(1, 2) = h(2, 1) = p.g;
    h(3, 3) = 2.0 * alpha;
    h(4, 4) = alpha + p.Omega;
    h(3, 4) = h(4, 3) = std::sqrt(2.0) * p.g;
    return h;
}

Mat5 annihilator() {
    Mat5 a = Mat5::Zero();
    a(0, 1) = 1.0;             // |1g> -> |0g>
    a(1, 3) = std::sqrt(2.0);  // |2g> -> sqrt2 |1g>
    a(2, 4) = 1.0;             // |1e> -> |0e>
    return a;
}

Sector diagonalize_sector(const Mat5& h, int first, double max_condition) {
    const Eigen::Matrix2cd block = h.block<2, 2>(first, first);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(block);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("spectral_t_matrix: eigen-decomposition failed");
    }
    const Eigen::Matrix2cd right = solver.eigenvectors();
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(right);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(1);
    if (smin <= 0.0 || smax / smin > max_condition) {
        throw ConvergenceFailure("spectral_t_matrix: bi-orthogonal basis ill-conditioned");
    }
    const Eigen::Matrix2cd left = right.inverse();
    Sector s;
    for (int j = 0; j < 2; ++j) {
        Mode m;
        m.energy = solver.eigenvalues()(j);
        m.right = Vec5::Zero();
        m.left = Vec5::Zero();
        m.right.segment<2>(first) = right.col(j);
        m.left.segment<2>(first) = left.row(j).transpose();
        s.modes.push_back(m);
    }
    if (std::abs(s.modes[0].energy - s.modes[1].energy) < kDefaultDegTol) {
        throw DegenerateSpectrum("spectral_t_matrix: degenerate sector eigenvalues");
    }
    return s;
}

struct Operator {
    bool creation;
    double momentum;
};

}  // namespace

Complex spectral_t_matrix(const SystemParams& params, const TwoPhotonIn& in, double p1,
                          double max_condition) {
    params.validate();
    const double energy = in.energy();
    const double p2 = energy - p1;
    const Mat5 h = effective_hamiltonian(params);
    const Mat5 a = annihilator();
    const Mat5 a_dag = a.transpose();
    const std::array<Sector, 3> sectors{Sector{}, diagonalize_sector(h, 1, max_condition),
                                        diagonalize_sector(h, 3, max_condition)};

    Vec5 vacuum = Vec5::Zero();
    vacuum(0) = 1.0;

    // Two-point weights <0| a |lambda><lambda^*| a^dag |0> in the one-excitation sector.
    std::array<Complex, 2> pair_weight{};
    for (int j = 0; j < 2; ++j) {
        const Mode& m = sectors[1].modes[j];
        pair_weight[j] = (vacuum.transpose() * a * m.right).value() *
                         (m.left.transpose() * a_dag * vacuum).value();
    }

    const std::array<Operator, 4> ops{Operator{true, in.k1()}, Operator{true, in.k2()},
                                      Operator{false, p1}, Operator{false, p2}};
    std::array<int, 4> order{0, 1, 2, 3};
    Complex connected{0.0, 0.0};
    do {
        // Energy carried through each of the three inter-operator segments,
        // and the excitation number of the intermediate state.
        std::array<double, 3> omega{};
        std::array<int, 3> excitation{};
        double injected = 0.0;
        int n = 0;
        bool cluster = false;
        for (int j = 0; j < 3; ++j) {
            const Operator& op = ops[order[j]];
            injected += op.creation ? op.momentum : -op.momentum;
            n += op.creation ? 1 : -1;
            omega[j] = injected;
            excitation[j] = n;
            if (n <= 0) cluster = true;
        }
        // Annihilating the vacuum, or returning to it between operators: the
        // ordering factorizes completely and carries no connected part.
        if (cluster) continue;

        // Full ordered product: resolvent chain in the bi-orthogonal basis.
        Vec5 state = vacuum;
        for (int j = 0; j < 4; ++j) {
            const Operator& op = ops[order[j]];
            state = (op.creation ? a_dag : a) * state;
            if (j == 3) break;
            Vec5 next = Vec5::Zero();
            for (const Mode& m : sectors[excitation[j]].modes) {
                const Complex overlap = (m.left.transpose() * state).value();
                next += m.right * (overlap * kI / (omega[j] - m.energy));
            }
            state = next;
        }
        Complex full = (vacuum.transpose() * state)(0);

        // Disconnected pairings: (first creation, annihilator x) with
        // (second creation, the other annihilator).
        std::array<int, 4> position{};
        for (int j = 0; j < 4; ++j) position[order[j]] = j;
        Complex disconnected{0.0, 0.0};
        for (const auto& pairing : {std::array<int, 4>{0, 2, 1, 3}, std::array<int, 4>{0, 3, 1, 2}}) {
            const int c_a = pairing[0], x_a = pairing[1], c_b = pairing[2], x_b = pairing[3];
            if (position[x_a] < position[c_a] || position[x_b] < position[c_b]) continue;
            for (int la = 0; la < 2; ++la) {
                for (int lb = 0; lb < 2; ++lb) {
                    Complex term = pair_weight[la] * pair_weight[lb];
                    for (int j = 0; j < 3; ++j) {
                        Complex active{0.0, 0.0};
                        if (position[c_a] <= j && j < position[x_a]) active += sectors[1].modes[la].energy;
                        if (position[c_b] <= j && j < position[x_b]) active += sectors[1].modes[lb].energy;
                        term *= kI / (omega[j] - active);
                    }
                    disconnected += term;
                }
            }
        }
        connected += full - disconnected;
    } while (std::next_permutation(order.begin(), order.end()));

    // S_conn = (V^4 / (2 pi)^2) * 2 pi delta(E_out - E_in) * connected = i T delta.
    const double v4 = std::pow(params.v_tilde, 4);
    const Complex t = v4 / (2.0 * std::numbers::pi) * connected / kI;
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) {
        throw ConvergenceFailure("spectral_t_matrix: non-finite pole sum");
    }
    return t;
}

}  // namespace wgqed::oracle
