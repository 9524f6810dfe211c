#pragma once

#include <complex>
#include <utility>

namespace wgqed {

using Complex = std::complex<double>;

// Complex energy of the effective Hamiltonian; the imaginary part is a decay
// rate (negative for every resonance once the waveguide coupling is on).
using ComplexEnergy = Complex;

// Physical constants of the side-coupled cavity + two-level system. All
// frequencies share one user-chosen unit and the waveguide group velocity is 1.
struct SystemParams {
    double omega_c = 10.0;  // cavity mode
    double Omega = 10.0;    // two-level transition
    double g = 5.0;         // TLS-cavity coupling
    double v_tilde = 1.0;   // even-mode waveguide-cavity coupling, sqrt(2) V

    // Throws DomainError unless omega_c > 0, Omega > 0, g >= 0, v_tilde > 0.
    void validate() const;
    // As validate() but also accepts v_tilde == 0 (closed Jaynes-Cummings limit).
    void validate_allow_closed() const;

    // Strong-coupling parameter set: omega_c = Omega = 10, v_tilde = 1, g = 5.
    static SystemParams strong_coupling();
    // Weak-coupling parameter set: same but g = 0.5.
    static SystemParams weak_coupling();

    bool operator==(const SystemParams&) const = default;
};

inline constexpr double kDefaultDegTol = 1e-9;

// omega_c - i v_tilde^2 / 2.
ComplexEnergy effective_alpha(const SystemParams& params);

enum class Branch { plus, minus };

// Eigenvalue pair of the n-excitation block of the effective Jaynes-Cummings
// Hamiltonian, spanned by {|n-1>|e>, |n>|g>}.
struct DressedPair {
    int n = 1;
    ComplexEnergy lambda_plus;
    ComplexEnergy lambda_minus;
    double bare_plus = 0.0;   // same pair at v_tilde = 0
    double bare_minus = 0.0;

    const ComplexEnergy& operator[](Branch b) const {
        return b == Branch::plus ? lambda_plus : lambda_minus;
    }
};

// Labels: "+" is the root with the larger real part (ties broken by the
// larger imaginary part). Throws DegenerateSpectrum when
// |lambda_plus - lambda_minus| < deg_tol and DomainError for n < 1.
DressedPair dressed_pair(const SystemParams& params, int n,
                         double deg_tol = kDefaultDegTol);

// Right eigenvector of the n-block, normalized so that the bilinear pairing
// with the left eigenvector of H_eff^* (the transpose, since the block is
// complex symmetric) equals one.
struct BiorthState {
    int n = 1;
    Branch branch = Branch::plus;
    ComplexEnergy eigenvalue;
    Complex comp_e;      // amplitude on |n-1>_cavity |e>
    Complex comp_g;      // amplitude on |n>_cavity |g>
    Complex norm_const;  // prefactor multiplying the unnormalized eigenvector
};

// Bilinear pairing <lambda_a^*|lambda_b> between two block eigenstates.
Complex biorth_pairing(const BiorthState& left, const BiorthState& right);

// Applies the n-th block of H_eff to (comp_e, comp_g).
std::pair<Complex, Complex> apply_block(const SystemParams& params, int n, Complex comp_e,
                                        Complex comp_g);

// {plus, minus} states. The residual sign freedom of the bilinear
// normalization is fixed by Re(comp_g) > 0 (Re(comp_e) > 0 if comp_g vanishes).
std::pair<BiorthState, BiorthState> biorth_states(const SystemParams& params, int n,
                                                  double deg_tol = kDefaultDegTol);

}  // namespace wgqed
