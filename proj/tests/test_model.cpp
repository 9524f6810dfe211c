#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "wgqed/errors.hpp"
#include "wgqed/model.hpp"

using namespace wgqed;
using doctest::Approx;

namespace {

// Explicit n-excitation block in the basis {|n-1>|e>, |n>|g>}.
std::array<Complex, 4> block(const SystemParams& p, int n) {
    const Complex a = effective_alpha(p);
    const double rn = std::sqrt(static_cast<double>(n));
    return {p.Omega + (n - 1.0) * a, rn * p.g, rn * p.g, static_cast<double>(n) * a};
}

}  // namespace

TEST_CASE("effective_alpha") {
    CHECK(effective_alpha({10, 10, 5, 1}) == Complex(10.0, -0.5));
    CHECK(effective_alpha({10, 10, 5, 0}) == Complex(10.0, 0.0));
    CHECK(effective_alpha({5, 10, 5, 2}) == Complex(5.0, -2.0));
}

TEST_CASE("dressed pair at the strong-coupling point") {
    const auto p1 = dressed_pair(SystemParams::strong_coupling(), 1);
    // numpy.linalg.eigvals of the explicit block
    CHECK(std::abs(p1.lambda_plus - Complex(14.993746088859542, -0.25)) < 1e-10);
    CHECK(std::abs(p1.lambda_minus - Complex(5.006253911140456, -0.25)) < 1e-10);
    CHECK(p1.bare_plus == Approx(15.0).epsilon(1e-14));
    CHECK(p1.bare_minus == Approx(5.0).epsilon(1e-14));

    const auto p2 = dressed_pair(SystemParams::strong_coupling(), 2);
    CHECK(std::abs(p2.lambda_plus - Complex(27.06664701255128, -0.75)) < 1e-10);
    CHECK(std::abs(p2.lambda_minus - Complex(12.933352987448712, -0.75)) < 1e-10);

    const auto bare2 = dressed_pair({10, 10, 5, 0}, 2);
    CHECK(bare2.lambda_plus.real() == Approx(27.071067811865476).epsilon(1e-14));
    CHECK(bare2.lambda_minus.real() == Approx(12.928932188134524).epsilon(1e-14));
    CHECK(bare2.lambda_plus.imag() == 0.0);
}

TEST_CASE("decoupled emitter and cavity") {
    const auto p = dressed_pair({10, 12, 0, 0}, 1);
    CHECK(p.lambda_plus == Complex(12.0, 0.0));
    CHECK(p.lambda_minus == Complex(10.0, 0.0));
}

TEST_CASE("invalid input") {
    CHECK_THROWS_AS(dressed_pair(SystemParams::strong_coupling(), 0), DomainError);
    CHECK_THROWS_AS(dressed_pair({10, 10, 0, 0}, 1), DegenerateSpectrum);
    CHECK_THROWS_AS(dressed_pair({10, 10, 5, -1}, 1), DomainError);
    CHECK_THROWS_AS(SystemParams({10, 10, 5, 0}).validate(), DomainError);
    CHECK_NOTHROW(SystemParams({10, 10, 5, 0}).validate_allow_closed());
}

TEST_CASE("trace and determinant over random parameters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> freq(1.0, 20.0), coup(0.0, 6.0), v(0.1, 2.0);
    for (int i = 0; i < 2000; ++i) {
        const SystemParams p{freq(rng), freq(rng), coup(rng), v(rng)};
        for (int n : {1, 2}) {
            const auto b = block(p, n);
            const auto pair = dressed_pair(p, n);
            const Complex tr = b[0] + b[3];
            const Complex det = b[0] * b[3] - b[1] * b[2];
            CHECK(std::abs(pair.lambda_plus + pair.lambda_minus - tr) <= 1e-12 * std::abs(tr));
            CHECK(std::abs(pair.lambda_plus * pair.lambda_minus - det) <=
                  1e-12 * std::max(1.0, std::abs(det)));
            CHECK(pair.lambda_plus.real() >= pair.lambda_minus.real());
        }
    }
}

TEST_CASE("branches are continuous along a coupling sweep") {
    SystemParams p{10, 11, 0.0, 1.0};
    Complex prev_plus, prev_minus;
    for (int i = 0; i <= 400; ++i) {
        p.g = 0.05 + 6.0 * i / 400.0;
        const auto pair = dressed_pair(p, 1);
        if (i > 0) {
            CHECK(std::abs(pair.lambda_plus - prev_plus) < 0.1);
            CHECK(std::abs(pair.lambda_minus - prev_minus) < 0.1);
        }
        prev_plus = pair.lambda_plus;
        prev_minus = pair.lambda_minus;
    }
}

TEST_CASE("closed-system limit is linear in v_tilde squared") {
    SystemParams p = SystemParams::strong_coupling();
    double prev = 0.0;
    for (double v : {0.2, 0.1, 0.05}) {
        p.v_tilde = v;
        const auto pair = dressed_pair(p, 1);
        const double dev = std::max(std::abs(pair.lambda_plus - pair.bare_plus),
                                    std::abs(pair.lambda_minus - pair.bare_minus));
        if (prev > 0.0) CHECK(prev / dev == Approx(4.0).epsilon(0.01));
        prev = dev;
    }
}

TEST_CASE("resonant strong coupling: Re = Omega +- g, Im = -v^2/4") {
    const auto pair = dressed_pair({10, 10, 5, 0.3}, 1);
    CHECK(pair.lambda_plus.real() == Approx(15.0).epsilon(1e-4));
    CHECK(pair.lambda_minus.real() == Approx(5.0).epsilon(1e-4));
    CHECK(pair.lambda_plus.imag() == Approx(-0.09 / 4).epsilon(1e-9));
    CHECK(pair.lambda_minus.imag() == Approx(-0.09 / 4).epsilon(1e-9));
}

TEST_CASE("biorthogonal states") {
    for (int n : {1, 2}) {
        const auto [plus, minus] = biorth_states(SystemParams::strong_coupling(), n);
        CHECK(std::abs(biorth_pairing(plus, minus)) < 1e-12);
        CHECK(std::abs(biorth_pairing(minus, plus)) < 1e-12);
        CHECK(std::abs(biorth_pairing(plus, plus) - 1.0) < 1e-12);
        CHECK(std::abs(biorth_pairing(minus, minus) - 1.0) < 1e-12);
        for (const auto& s : {plus, minus}) {
            const auto [he, hg] = apply_block(SystemParams::strong_coupling(), n, s.comp_e, s.comp_g);
            CHECK(std::abs(he - s.eigenvalue * s.comp_e) < 1e-12);
            CHECK(std::abs(hg - s.eigenvalue * s.comp_g) < 1e-12);
            CHECK(s.comp_g.real() > 0.0);
        }
    }
}

TEST_CASE("biorthogonal states without coupling are sector-pure") {
    for (int n : {1, 2, 3}) {
        const auto [plus, minus] = biorth_states({10, 12, 0, 1}, n);
        // One branch lives on |n-1>|e>, the other on |n>|g>.
        CHECK(std::min(std::abs(plus.comp_e), std::abs(plus.comp_g)) < 1e-15);
        CHECK(std::min(std::abs(minus.comp_e), std::abs(minus.comp_g)) < 1e-15);
        CHECK((std::abs(plus.comp_e) < 1e-15) != (std::abs(minus.comp_e) < 1e-15));
    }
}
