#pragma once

#include "subwave/spectral.hpp"

namespace subwave::detail {

// Scalar single-defect integrand, (det Cgen - w^2 Cgen_11) / det(Cgen - w^2 I),
// integrated over the zone; no band proximity check.
cplx scalar_J(cplx omega, const BandContext& ctx);

// T^k for several k sharing one sweep over the quadrature nodes.
std::vector<Mat2> toeplitz_blocks(const std::vector<int>& ks, cplx omega,
                                  const BandContext& ctx);

} // namespace subwave::detail
