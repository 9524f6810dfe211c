#pragma once

#include <span>
#include <vector>

#include "wgqed/model.hpp"

namespace wgqed {

// Monochromatic single-photon response at momentum (= energy) k.
struct OnePhotonAmplitudes {
    double k = 0.0;
    double delta_k = 0.0;  // arg[(k - lambda_1+)(k - lambda_1-)], in (-pi, pi]
    Complex t_even;        // even-channel eigenvalue exp(-2i delta_k); odd channel is 1
    Complex r_bar;         // (t_even - 1) / 2
    Complex t_bar;         // (t_even + 1) / 2
};

// Throws DomainError for k <= 0 and DegenerateSpectrum at an exceptional point.
OnePhotonAmplitudes one_photon(const SystemParams& params, double k);

// one_photon over a strictly increasing grid of positive momenta. Errors carry
// the offending grid index.
std::vector<OnePhotonAmplitudes> reflection_spectrum(const SystemParams& params,
                                                     std::span<const double> k_grid);

}  // namespace wgqed
