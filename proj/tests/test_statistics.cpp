#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "wgqed/errors.hpp"
#include "wgqed/scatter_one.hpp"
#include "wgqed/statistics.hpp"

using namespace wgqed;
using doctest::Approx;

namespace {

const SystemParams kStrong = SystemParams::strong_coupling();
const SystemParams kWeak = SystemParams::weak_coupling();

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

double g2_zero(const SystemParams& p, double e_half, Channel c,
               const Normalization& norm = Normalization::asymptotic()) {
    const std::vector<double> tau{0.0};
    return g2(p, TwoPhotonIn::monochromatic(e_half), c, tau, norm).values[0];
}

// Least-squares slope of log|g2 - 1| over [t0, t1].
double log_slope(const SystemParams& p, double e_half, Channel c, double t0, double t1) {
    const auto tau = linspace(t0, t1, 201);
    const auto curve = g2(p, TwoPhotonIn::monochromatic(e_half), c, tau);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double y = std::log(std::abs(curve.values[i] - 1.0));
        sx += tau[i];
        sy += y;
        sxx += tau[i] * tau[i];
        sxy += tau[i] * y;
    }
    const double n = static_cast<double>(tau.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("reflected anti-bunching at the dressed one-photon levels") {
    // numpy: |1 - F(0) / r^2|^2 at k1 = k2 = 5
    CHECK(g2_zero(kStrong, 5.0, Channel::LL) == Approx(0.08419773852910953).epsilon(1e-10));
    CHECK(g2_zero(kStrong, 15.0, Channel::LL) < 0.1);
    const auto tau = linspace(0.0, 200.0, 5);
    const auto curve = g2(kStrong, TwoPhotonIn::monochromatic(5.0), Channel::LL, tau);
    CHECK(curve.values[0] < 0.1);
    CHECK(std::abs(curve.values.back() - 1.0) < 1e-3);
}

TEST_CASE("numerator at E/2 = Omega is the bound term alone") {
    const TwoPhotonIn in = TwoPhotonIn::monochromatic(10.0);
    const double expected = std::norm(bound_term(kStrong, in, 0.0) / (2.0 * std::numbers::pi));
    CHECK(correlation_numerator(kStrong, in, Channel::LL, 0.0) == Approx(expected).epsilon(1e-12));
}

TEST_CASE("anti-bunched dip below the far background") {
    const TwoPhotonIn in = TwoPhotonIn::monochromatic(5.0);
    CHECK(correlation_numerator(kStrong, in, Channel::LL, 0.0) <
          0.1 * correlation_numerator(kStrong, in, Channel::LL, 200.0));
}

TEST_CASE("transmitted anti-bunching at E/2 = Omega") {
    const auto tau = linspace(0.0, 60.0, 121);
    const auto curve = g2(kStrong, TwoPhotonIn::monochromatic(10.0), Channel::RR, tau);
    CHECK(curve.values[0] < 1.0);
    CHECK(curve.values.back() > curve.values[0]);
    CHECK(std::abs(curve.values.back() - 1.0) < 1e-3);
}

TEST_CASE("pair density depends only on the separation") {
    const TwoPhotonIn in = TwoPhotonIn::monochromatic(5.0);
    for (Channel c : {Channel::RR, Channel::LL}) {
        for (double tau : {0.0, 0.37, 3.1, 12.0}) {
            const double a = pair_density(kStrong, in, c, 0.0, tau);
            CHECK(pair_density(kStrong, in, c, 7.3, tau) == Approx(a).epsilon(1e-12));
            CHECK(pair_density(kStrong, in, c, 0.0, -tau) == Approx(a).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(pair_density(kStrong, in, Channel::LR, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(correlation_numerator(kStrong, in, Channel::LL, -1.0), DomainError);
}

TEST_CASE("free photons are uncorrelated") {
    const SystemParams p{10, 10, 0, 1};
    const auto e = linspace(2.0, 28.0, 53);
    const auto sweep = g2_zero_sweep(p, e, Channel::RR);
    for (std::size_t i = 0; i < e.size(); ++i) {
        CHECK(sweep.flags[i].empty());
        CHECK(sweep.value(i) == Approx(1.0).epsilon(1e-12));
    }
    const auto tau = linspace(0.0, 30.0, 7);
    for (double v : g2(p, TwoPhotonIn::monochromatic(7.0), Channel::RR, tau).values) {
        CHECK(v == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("vanishing background needs box normalization") {
    const std::vector<double> tau{0.0, 1.0};
    const TwoPhotonIn in = TwoPhotonIn::monochromatic(10.0);
    CHECK_THROWS_AS(g2(kStrong, in, Channel::LL, tau), VanishingBackground);
    const auto curve = g2(kStrong, in, Channel::LL, tau, Normalization::box());
    CHECK(curve.normalization.l_reg == Approx(1e3 / 0.25));
    CHECK(curve.values[0] > 1.0);
}

TEST_CASE("g2 input validation") {
    const std::vector<double> tau{0.0};
    CHECK_THROWS_AS(g2(kStrong, TwoPhotonIn(5.5, 4.5), Channel::LL, tau), DomainError);
    CHECK_THROWS_AS(g2(kStrong, TwoPhotonIn(5, 5), Channel::LR, tau), DomainError);
}

TEST_CASE("box normalization reduces to the asymptotic one for long boxes") {
    const double a = g2_zero(kStrong, 5.0, Channel::LL);
    const double b = g2_zero(kStrong, 5.0, Channel::LL, Normalization::box(1e9));
    CHECK(b == Approx(a).epsilon(1e-6));
}

TEST_CASE("pure bound state: box g2(0) grows linearly with the box") {
    const double a = g2_zero(kStrong, 10.0, Channel::LL, Normalization::box(1e3));
    const double b = g2_zero(kStrong, 10.0, Channel::LL, Normalization::box(1e5));
    CHECK(b / a == Approx(100.0).epsilon(1e-6));
}

TEST_CASE("approach to the background at the single-pole rate") {
    // |g2 - 1| is dominated by the cross term 2 Re(F / c0) ~ exp(-gamma tau).
    const double gamma = bound_decay_rate(kStrong);
    CHECK(log_slope(kStrong, 5.0, Channel::LL, 20.0, 80.0) == Approx(-gamma).epsilon(0.05));
    CHECK(log_slope(kStrong, 10.0, Channel::RR, 20.0, 80.0) == Approx(-gamma).epsilon(0.05));
}

TEST_CASE("blockade dip fills in as the coupling weakens") {
    double prev = 0.0;
    for (double g : {5.0, 2.0, 1.0, 0.5}) {
        const SystemParams p{10, 10, g, 1};
        const double v = g2_zero(p, dressed_pair(p, 1).bare_minus, Channel::LL);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("strong-coupling zero-delay sweep shape") {
    const auto e = linspace(2.0, 28.0, 1041);
    const auto sweep = g2_zero_sweep(kStrong, e, Channel::LL);
    std::vector<double> minima, maxima;
    for (std::size_t i = 1; i + 1 < e.size(); ++i) {
        if (!sweep.flags[i - 1].empty() || !sweep.flags[i].empty() || !sweep.flags[i + 1].empty()) {
            continue;
        }
        const double v = sweep.value(i);
        if (v < sweep.value(i - 1) && v < sweep.value(i + 1)) minima.push_back(e[i]);
        if (v > sweep.value(i - 1) && v > sweep.value(i + 1)) maxima.push_back(e[i]);
    }
    const auto two = dressed_pair(kStrong, 2);
    auto near = [](const std::vector<double>& xs, double target, double tol) {
        for (double x : xs) {
            if (std::abs(x - target) <= tol) return true;
        }
        return false;
    };
    CHECK(near(minima, 5.0, 0.1));
    CHECK(near(minima, 15.0, 0.1));
    CHECK(near(maxima, 0.5 * two.bare_plus, 0.25));
    CHECK(near(maxima, 0.5 * two.bare_minus, 0.25));
    // the cell at E/2 = Omega falls back to box normalization and is flagged
    const std::size_t omega = 320;
    REQUIRE(e[omega] == Approx(10.0));
    CHECK(sweep.flags[omega] == "box");
    CHECK(sweep.value(omega - 4) > sweep.value(omega - 40));
    CHECK(sweep.value(omega + 4) > sweep.value(omega + 40));
}

TEST_CASE("weak-coupling zero-delay sweep has a single peak at Omega") {
    const auto e = linspace(2.0, 28.0, 1041);
    const auto sweep = g2_zero_sweep(kWeak, e, Channel::LL);
    int maxima = 0;
    for (std::size_t i = 1; i + 1 < e.size(); ++i) {
        if (!sweep.flags[i - 1].empty() || !sweep.flags[i].empty() || !sweep.flags[i + 1].empty()) {
            continue;
        }
        const double v = sweep.value(i);
        if (v > sweep.value(i - 1) && v > sweep.value(i + 1)) ++maxima;
    }
    CHECK(maxima == 0);  // the only peak is the flagged divergence at Omega
    CHECK(sweep.flags[320] == "box");
    CHECK(sweep.value(319) > 100.0);
}

TEST_CASE("sweep is independent of the worker count") {
    const auto e = linspace(2.0, 28.0, 261);
    ZeroDelaySweepOptions one, many;
    many.threads = 4;
    const auto a = g2_zero_sweep(kStrong, e, Channel::RR, one);
    const auto b = g2_zero_sweep(kStrong, e, Channel::RR, many);
    CHECK(a.values == b.values);
    CHECK(a.flags == b.flags);
}
