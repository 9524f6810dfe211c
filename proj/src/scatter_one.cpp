#include "wgqed/scatter_one.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "wgqed/errors.hpp"

namespace wgqed {

OnePhotonAmplitudes one_photon(const SystemParams& params, double k) {
    params.validate();
    if (!(std::isfinite(k) && k > 0.0)) {
        std::ostringstream os;
        os << "one_photon: momentum must be finite and > 0 (got " << k << ")";
        throw DomainError(os.str());
    }
    const DressedPair pair = dressed_pair(params, 1);
    const Complex product = (k - pair.lambda_plus) * (k - pair.lambda_minus);

    OnePhotonAmplitudes out;
    out.k = k;
    out.delta_k = std::arg(product);
    out.t_even = std::polar(1.0, -2.0 * out.delta_k);
    out.r_bar = 0.5 * (out.t_even - 1.0);
    out.t_bar = 0.5 * (out.t_even + 1.0);
    return out;
}

std::vector<OnePhotonAmplitudes> reflection_spectrum(const SystemParams& params,
                                                     std::span<const double> k_grid) {
    std::vector<OnePhotonAmplitudes> out;
    out.reserve(k_grid.size());
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (i > 0 && !(k_grid[i] > k_grid[i - 1])) {
            throw DomainError("reflection_spectrum: k_grid[" + std::to_string(i) +
                              "] is not strictly increasing");
        }
        try {
            out.push_back(one_photon(params, k_grid[i]));
        } catch (const DomainError& e) {
            throw DomainError("k_grid[" + std::to_string(i) + "]: " + e.what());
        } catch (const DegenerateSpectrum& e) {
            throw DegenerateSpectrum("k_grid[" + std::to_string(i) + "]: " + e.what());
        }
    }
    return out;
}

}  // namespace wgqed
