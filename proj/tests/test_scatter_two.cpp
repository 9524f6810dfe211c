#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "wgqed/errors.hpp"
#include "wgqed/oracle/spectral.hpp"
#include "wgqed/scatter_one.hpp"
#include "wgqed/scatter_two.hpp"
#include "wgqed/sweep.hpp"

using namespace wgqed;
using doctest::Approx;

namespace {

const SystemParams kStrong = SystemParams::strong_coupling();
const SystemParams kWeak = SystemParams::weak_coupling();
constexpr Complex kI{0.0, 1.0};

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

}  // namespace

TEST_CASE("TwoPhotonIn canonical order and validation") {
    const TwoPhotonIn in(4.0, 6.0);
    CHECK(in.k1() == 6.0);
    CHECK(in.k2() == 4.0);
    CHECK(in.energy() == 10.0);
    CHECK(in.delta_k() == 2.0);
    CHECK_THROWS_AS(TwoPhotonIn(-1.0, 3.0), DomainError);
    CHECK_THROWS_AS(TwoPhotonIn(0.0, 3.0), DomainError);
    const auto m = TwoPhotonIn::from_energy(12.0, 2.0);
    CHECK(m.k1() == 7.0);
    CHECK(m.k2() == 5.0);
}

TEST_CASE("T-matrix frozen values") {
    // Python time-ordering sum over the explicit 6-state Fock space
    const Complex t555 = t_matrix_two(kStrong, TwoPhotonIn(5, 5), 5).value;
    CHECK(std::abs(t555 - Complex(-2.384423930145992, 9.56625169579545)) < 1e-12 * std::abs(t555));
    const Complex t467 = t_matrix_two(kStrong, TwoPhotonIn(4, 6), 7).value;
    CHECK(std::abs(t467 - Complex(-0.003162930786131624, 0.008851425898730702)) <
          1e-12 * std::abs(t467));
    CHECK(t_matrix_two(kStrong, TwoPhotonIn(5, 5), 5).on_shell_energy == 10.0);
}

TEST_CASE("T-matrix vanishes without the emitter") {
    for (double p1 : {3.0, 5.0, 8.0}) {
        CHECK(t_matrix_two({10, 10, 0, 1}, TwoPhotonIn(4, 6), p1).value == Complex(0.0, 0.0));
    }
}

TEST_CASE("T-matrix exchange symmetry is exact") {
    const auto a = t_matrix_two(kStrong, TwoPhotonIn(4, 6), 7).value;
    const auto b = t_matrix_two(kStrong, TwoPhotonIn(6, 4), 7).value;
    const auto c = t_matrix_two(kStrong, TwoPhotonIn(4, 6), 3).value;
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("T-matrix in/out reciprocity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> k(2.0, 18.0);
    for (int i = 0; i < 200; ++i) {
        const double k1 = k(rng), k2 = k(rng);
        const double p1 = k(rng);
        const double p2 = k1 + k2 - p1;
        if (p2 <= 0.0) continue;
        const auto fwd = t_matrix_two(kStrong, TwoPhotonIn(k1, k2), p1).value;
        const auto rev = t_matrix_two(kStrong, TwoPhotonIn(p1, p2), k1).value;
        CHECK(std::abs(fwd - rev) <= 1e-13 * std::abs(fwd));
    }
}

TEST_CASE("closed form agrees with the spectral oracle") {
    CHECK(std::abs(t_matrix_two(kStrong, TwoPhotonIn(5, 5), 5).value -
                   oracle::spectral_t_matrix(kStrong, TwoPhotonIn(5, 5), 5)) <
          1e-6 * std::abs(t_matrix_two(kStrong, TwoPhotonIn(5, 5), 5).value));
    const auto w = t_matrix_two(kWeak, TwoPhotonIn(9.7, 10.3), 9.9).value;
    CHECK(std::abs(w - oracle::spectral_t_matrix(kWeak, TwoPhotonIn(9.7, 10.3), 9.9)) <
          1e-6 * std::abs(w));
}

TEST_CASE("dressed two-photon poles show up along E") {
    // At delta_k = 3 the single-photon double poles are detuned from the lambda_2 ones.
    const auto pair = dressed_pair(kStrong, 2);
    const auto e = linspace(8.0, 38.0, 30001);
    std::vector<double> v;
    for (double energy : e) {
        v.push_back(std::norm(t_matrix_two(kStrong, TwoPhotonIn::from_energy(energy, 3.0),
                                           0.5 * energy).value));
    }
    for (const Complex lam : {pair.lambda_plus, pair.lambda_minus}) {
        bool found = false;
        for (std::size_t i = 1; i + 1 < e.size(); ++i) {
            if (v[i] > v[i - 1] && v[i] > v[i + 1] &&
                std::abs(e[i] - lam.real()) <= std::abs(lam.imag())) {
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("bound term against direct Fourier quadrature of T") {
    // scipy quad of -(1/8) int dq iT(E/2 + q) exp(iqx)
    const Complex f0 = bound_term(kStrong, TwoPhotonIn(5, 5), 0.0);
    CHECK(std::abs(f0 - Complex(0.9251471826908554, 0.28034763110850497)) < 1e-9);
    const Complex f2 = bound_term(kStrong, TwoPhotonIn(6, 4), 2.0);
    CHECK(std::abs(f2 - Complex(0.03389893521376174, 0.011081005342670733)) < 1e-10);
    const Complex f10 = bound_term(kStrong, TwoPhotonIn(10, 10), 0.0);
    CHECK(std::abs(f10 - 1.0 / 101.0) < 1e-12);
}

TEST_CASE("bound term is the Fourier transform of T") {
    // int dx F(x) exp(-iqx) = -(2 pi / 8) iT(E/2 + q), trapezoid over |x| <= 160
    const TwoPhotonIn in(5.5, 4.5);
    const auto f = bound_term_expansion(kStrong, in);
    for (double q : {0.0, 0.3, -1.1}) {
        Complex acc{0.0, 0.0};
        const double h = 0.005;
        for (int i = -32000; i <= 32000; ++i) {
            const double x = i * h;
            const double w = (i == -32000 || i == 32000) ? 0.5 : 1.0;
            acc += w * h * f(x) * std::exp(-kI * q * x);
        }
        const Complex t = t_matrix_two(kStrong, in, 0.5 * in.energy() + q).value;
        const Complex expected = -2.0 * std::numbers::pi / 8.0 * kI * t;
        CHECK(std::abs(acc - expected) < 1e-4 * std::abs(expected));
    }
}

TEST_CASE("bound term is even and decays at the slowest pole rate") {
    const TwoPhotonIn in(5, 5);
    for (double x : {0.3, 2.0, 17.0}) {
        CHECK(bound_term(kStrong, in, x) == bound_term(kStrong, in, -x));
    }
    const double gamma = bound_decay_rate(kStrong);
    CHECK(gamma == Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(bound_term(kStrong, in, 40.0)) / std::abs(bound_term(kStrong, in, 0.0)) <=
          std::exp(-40.0 * gamma));
    // log-linear fit well beyond the fast component
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double x = 40.0; x <= 120.0; x += 1.0, ++n) {
        const double y = std::log(std::abs(bound_term(kStrong, in, x)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(-slope == Approx(gamma).epsilon(0.01));
}

TEST_CASE("reflected pair at E/2 = Omega is a pure bound state") {
    const TwoPhotonIn in = TwoPhotonIn::monochromatic(10.0);
    CHECK(std::abs(bound_term(kStrong, in, 0.0)) > 0.0);
    CHECK(std::abs(one_photon(kStrong, 10.0).r_bar) < 1e-10);
    for (double x : {0.0, 1.5, -4.0}) {
        for (double xc : {0.0, 2.5}) {
            const Complex v = wavefunction(kStrong, in, Channel::LL, xc + 0.5 * x, xc - 0.5 * x);
            const Complex expected =
                -std::exp(kI * 20.0 * xc) * bound_term(kStrong, in, x) / (2.0 * std::numbers::pi);
            CHECK(std::abs(v - expected) < 1e-12 * std::abs(expected));
        }
    }
}

TEST_CASE("transmitted pair without the emitter is a free product") {
    const SystemParams p{10, 10, 0, 1};
    const TwoPhotonIn in(10.4, 9.1);
    const auto a1 = one_photon(p, in.k1());
    const auto a2 = one_photon(p, in.k2());
    for (double x1 : {-3.0, 0.0, 2.2}) {
        for (double x2 : {-1.0, 4.0}) {
            const double x = x1 - x2;
            const double xc = 0.5 * (x1 + x2);
            const Complex expected = std::exp(kI * in.energy() * xc) * a1.t_bar * a2.t_bar *
                                     std::cos(in.delta_k() * x) / (2.0 * std::numbers::pi);
            CHECK(std::abs(wavefunction(p, in, Channel::RR, x1, x2) - expected) < 1e-15);
        }
    }
}

TEST_CASE("pair wavefunctions are symmetric under photon exchange") {
    const TwoPhotonIn in(5.0, 5.0);
    for (Channel c : {Channel::RR, Channel::LL}) {
        const Complex a = wavefunction(kStrong, in, c, 1.3, -0.4);
        const Complex b = wavefunction(kStrong, in, c, -0.4, 1.3);
        CHECK(std::abs(a - b) < 1e-14);
    }
}

TEST_CASE("sample_wavefunction and default grid") {
    const auto grid = default_relative_grid(kStrong);
    REQUIRE(grid.size() == 2048);
    CHECK(grid.front() == Approx(-48.0));
    CHECK(grid.back() == Approx(48.0));
    const auto wf = sample_wavefunction(kStrong, TwoPhotonIn(5, 5), Channel::LL, grid, 1.0);
    REQUIRE(wf.values.size() == grid.size());
    CHECK(wf.values[100] == wavefunction(kStrong, TwoPhotonIn(5, 5), Channel::LL,
                                         1.0 + 0.5 * grid[100], 1.0 - 0.5 * grid[100]));
    // bound part is below 1e-5 of its peak at the edge
    CHECK(std::abs(bound_term(kStrong, TwoPhotonIn(5, 5), grid.back())) <
          1e-5 * std::abs(bound_term(kStrong, TwoPhotonIn(5, 5), 0.0)));
}

TEST_CASE("channel names round-trip") {
    for (Channel c : {Channel::RR, Channel::LL, Channel::LR}) {
        CHECK(channel_from_string(to_string(c)) == c);
    }
    CHECK_THROWS_AS(channel_from_string("RL"), DomainError);
}

TEST_CASE("fluorescence peak topology") {
    const auto grid = linspace(-10.0, 10.0, 201);
    const auto strong2 = dressed_pair(kStrong, 2);
    for (double e : {strong2.bare_plus, strong2.bare_minus}) {
        CHECK(strict_local_maxima(fluorescence_map(kStrong, e, grid, grid)).size() == 4);
    }
    const auto weak2 = dressed_pair(kWeak, 2);
    for (double e : {weak2.bare_plus, weak2.bare_minus}) {
        const auto map = fluorescence_map(kWeak, e, grid, grid);
        const auto peaks = strict_local_maxima(map);
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0] == 100 * 201 + 100);
    }
    // single sharp peak at the origin for E/2 on a dressed one-photon level
    const auto map = fluorescence_map(kStrong, 2.0 * dressed_pair(kStrong, 1).bare_plus, grid, grid);
    const auto peaks = strict_local_maxima(map);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0] == 100 * 201 + 100);
}

TEST_CASE("fluorescence map validation") {
    const auto grid = linspace(-10.0, 10.0, 21);
    const auto skew = linspace(-10.0, 9.0, 21);
    CHECK_THROWS_AS(fluorescence_map(kStrong, 27.0, skew, grid), DomainError);
    CHECK_THROWS_AS(fluorescence_map(kStrong, 8.0, grid, grid), DomainError);
    const auto map = fluorescence_map(kStrong, 27.0, grid, grid, 3);
    const auto serial = fluorescence_map(kStrong, 27.0, grid, grid, 1);
    CHECK(map.values == serial.values);
}
