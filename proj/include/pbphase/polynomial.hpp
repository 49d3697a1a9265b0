#pragma once

#include <span>
#include <vector>

#include "pbphase/fock.hpp"

namespace pbphase {

// Coefficient lists are ordered from the highest power down:
// {a_0, a_1, ..., a_n} is a_0 x^n + a_1 x^{n-1} + ... + a_n.

cplx poly_eval(std::span<const cplx> coeffs, cplx x);

/// Monic coefficients of Π (x - r_k).
std::vector<cplx> poly_from_roots(std::span<const cplx> roots);

/// Roots as eigenvalues of the companion matrix, polished with Newton steps
/// and sorted by (real, imaginary). Leading coefficient must be nonzero.
std::vector<cplx> companion_roots(std::span<const cplx> coeffs);

/// Aberth-Ehrlich simultaneous iteration; independent of the eigen route.
std::vector<cplx> aberth_roots(std::span<const cplx> coeffs, int max_iter = 500);

/// Sort by real part, ties (within 1e-12 relative) broken by imaginary part.
void canonical_root_order(std::vector<cplx>& roots);

/// max_k |p(r_k)| / max(1, max|a_i|).
double root_residual(std::span<const cplx> coeffs, std::span<const cplx> roots);

}  // namespace pbphase
