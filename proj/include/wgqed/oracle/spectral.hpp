#pragma once

#include "wgqed/model.hpp"
#include "wgqed/scatter_two.hpp"

namespace wgqed::oracle {

// Connected two-photon T-matrix rebuilt from the time-ordered four-point
// function of the cavity field under H_eff. Each time ordering is a chain of
// resolvents expanded in the bi-orthogonal eigenbasis of the n = 1, 2
// sectors, with the disconnected (independent-photon) pairings subtracted.
// Same convention as t_matrix_two: S_conn = i T delta(p1 + p2 - E).
//
// Throws DegenerateSpectrum at an exceptional point and ConvergenceFailure
// when an eigenvector matrix is too ill-conditioned for the pole sum.
Complex spectral_t_matrix(const SystemParams& params, const TwoPhotonIn& in, double p1,
                          double max_condition = 1e8);

}  // namespace wgqed::oracle
