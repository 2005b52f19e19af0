#pragma once
#include <complex>
#include <vector>

#include "g1/arith.hpp"

namespace g1 {

struct RootOptions {
    int max_iterations = 400;
    double residual_factor = 1e-10; // |f(theta)| <= factor * coefficient scale
};

// All complex roots with multiplicity of sum coeffs[i] x^i (ascending,
// degree >= 1, nonzero leading coefficient).  Aberth-Ehrlich from a perturbed
// circle, Newton-polished; a second extended-precision polish runs when the
// double pass misses the residual target.  Conjugate-symmetric output for
// real input.
std::vector<std::complex<double>> poly_roots_complex(const std::vector<Rat>& coeffs,
                                                     const RootOptions& opts = {});

std::vector<std::complex<double>> poly_roots_complex(const std::vector<double>& coeffs,
                                                     const RootOptions& opts = {});

} // namespace g1
