#include "wgqed/model.hpp"

#include <cmath>
#include <sstream>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

void require(bool ok, const char* field, const char* what, double value) {
    if (!ok) {
        std::ostringstream os;
        os << "SystemParams." << field << " " << what << " (got " << value << ")";
        throw DomainError(os.str());
    }
}

// Ordered pair from trace and discriminant root: larger real part first,
// ties broken by larger imaginary part.
std::pair<Complex, Complex> ordered_roots(Complex trace, Complex root) {
    Complex a = 0.5 * (trace + root);
    Complex b = 0.5 * (trace - root);
    if (a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag())) {
        std::swap(a, b);
    }
    return {a, b};
}

}  // namespace

void SystemParams::validate_allow_closed() const {
    require(std::isfinite(omega_c) && omega_c > 0.0, "omega_c", "must be > 0", omega_c);
    require(std::isfinite(Omega) && Omega > 0.0, "Omega", "must be > 0", Omega);
    require(std::isfinite(g) && g >= 0.0, "g", "must be >= 0", g);
    require(std::isfinite(v_tilde) && v_tilde >= 0.0, "v_tilde", "must be >= 0", v_tilde);
}

void SystemParams::validate() const {
    validate_allow_closed();
    require(v_tilde > 0.0, "v_tilde", "must be > 0", v_tilde);
}

SystemParams SystemParams::strong_coupling() { return {10.0, 10.0, 5.0, 1.0}; }

SystemParams SystemParams::weak_coupling() { return {10.0, 10.0, 0.5, 1.0}; }

ComplexEnergy effective_alpha(const SystemParams& params) {
    return {params.omega_c, -0.5 * params.v_tilde * params.v_tilde};
}

DressedPair dressed_pair(const SystemParams& params, int n, double deg_tol) {
    params.validate_allow_closed();
    if (n < 1) {
        throw DomainError("dressed_pair: excitation number must be >= 1");
    }
    const Complex alpha = effective_alpha(params);
    const double nn = static_cast<double>(n);
    const double g2 = params.g * params.g;

    const Complex detuning = params.Omega - alpha;
    const Complex root = std::sqrt(detuning * detuning + 4.0 * nn * g2);
    const Complex trace = params.Omega + (2.0 * nn - 1.0) * alpha;
    auto [plus, minus] = ordered_roots(trace, root);

    if (std::abs(plus - minus) < deg_tol) {
        std::ostringstream os;
        os << "dressed_pair: exceptional point in the n=" << n
           << " block (|lambda+ - lambda-| = " << std::abs(plus - minus) << ")";
        throw DegenerateSpectrum(os.str());
    }

    const double bare_det = params.Omega - params.omega_c;
    const double bare_root = std::sqrt(bare_det * bare_det + 4.0 * nn * g2);
    const double bare_trace = params.Omega + (2.0 * nn - 1.0) * params.omega_c;

    DressedPair pair;
    pair.n = n;
    pair.lambda_plus = plus;
    pair.lambda_minus = minus;
    pair.bare_plus = 0.5 * (bare_trace + bare_root);
    pair.bare_minus = 0.5 * (bare_trace - bare_root);
    return pair;
}

std::pair<Complex, Complex> apply_block(const SystemParams& params, int n, Complex comp_e,
                                        Complex comp_g) {
    const Complex alpha = effective_alpha(params);
    const double nn = static_cast<double>(n);
    const double coupling = std::sqrt(nn) * params.g;
    return {(params.Omega + (nn - 1.0) * alpha) * comp_e + coupling * comp_g,
            coupling * comp_e + nn * alpha * comp_g};
}

Complex biorth_pairing(const BiorthState& left, const BiorthState& right) {
    return left.comp_e * right.comp_e + left.comp_g * right.comp_g;
}

namespace {

BiorthState make_state(const SystemParams& params, int n, Branch branch, Complex lambda) {
    const Complex alpha = effective_alpha(params);
    const double nn = static_cast<double>(n);
    const double coupling = std::sqrt(nn) * params.g;

    // Two equivalent rows of (H - lambda) v = 0; the first is the textbook
    // form, the second survives the decoupled TLS branch where the first
    // vanishes identically.
    Complex e = -coupling;
    Complex gg = params.Omega + (nn - 1.0) * alpha - lambda;
    const Complex e_alt = nn * alpha - lambda;
    const Complex g_alt = -coupling;
    if (std::norm(e_alt) + std::norm(g_alt) > std::norm(e) + std::norm(gg)) {
        e = e_alt;
        gg = g_alt;
    }

    const Complex self = e * e + gg * gg;
    const double scale = std::norm(e) + std::norm(gg);
    if (scale == 0.0 || std::abs(self) < 1e-12 * scale) {
        throw DegenerateSpectrum("biorth_states: self-orthogonal eigenvector (exceptional point)");
    }
    Complex norm = 1.0 / std::sqrt(self);
    Complex ce = norm * e;
    Complex cg = norm * gg;
    const Complex lead = std::abs(cg) > 1e-14 * std::abs(ce) ? cg : ce;
    if (lead.real() < 0.0 || (lead.real() == 0.0 && lead.imag() < 0.0)) {
        norm = -norm;
        ce = -ce;
        cg = -cg;
    }
    return {n, branch, lambda, ce, cg, norm};
}

}  // namespace

std::pair<BiorthState, BiorthState> biorth_states(const SystemParams& params, int n,
                                                  double deg_tol) {
    const DressedPair pair = dressed_pair(params, n, deg_tol);
    return {make_state(params, n, Branch::plus, pair.lambda_plus),
            make_state(params, n, Branch::minus, pair.lambda_minus)};
}

}  // namespace wgqed
