#pragma once

#include <optional>
#include <vector>

#include "subwave/spectral.hpp"

namespace subwave {

struct SingleDesign {
    cplx omega;     // target frequency
    cplx V1_def;    // defect material on resonator 1
    cplx J;         // scalar block integral at the target
    double residual; // |characteristic_single| / |V1| after substitution
};

// Place one eigenfrequency with a single defect: V1_def = V1 (1 - 1/J).
SingleDesign design_single(cplx omega, const BandContext& ctx,
                           double band_tol = 1e-6, double design_tol = 1e-8);

struct DoubleDesignRoot {
    cplx V1_def, V2_def;
    double residual1, residual2; // relative to |V1 V2|
    double x2_consistency;       // |X2(omega1) - X2(omega2)|
};

struct DoubleDesign {
    cplx omega1, omega2;
    cplx A, B, C;                // quadratic in X1
    std::array<DoubleDesignRoot, 2> roots;
    int primary;                 // index of the smaller-perturbation root
};

// Place two eigenfrequencies by replacing both resonators of one cell.
DoubleDesign design_double(cplx omega1, cplx omega2, const BandContext& ctx,
                           double band_tol = 1e-6, double design_tol = 1e-8);

struct MultiDesign {
    std::vector<cplx> omegas;
    std::vector<DefectSite> sites;
    std::vector<cplx> V_def;       // per site
    std::vector<double> residuals; // |det(Id - X T_sub)| per target
    int iterations = 0;
};

// n defect sites, n targets: damped Newton on the site-restricted
// determinant conditions det(Id - X T_sub(omega_k)) = 0 in the unknowns
// x_s = V_def_s / V_s - 1. Seeded from the single/double designs when the
// site pattern allows, else from `seed` or zero.
MultiDesign design_defects(const std::vector<cplx>& omegas,
                           const std::vector<DefectSite>& sites,
                           const BandContext& ctx,
                           std::optional<std::vector<cplx>> seed = std::nullopt,
                           double band_tol = 1e-6, double tol = 1e-10,
                           int max_iter = 200);

} // namespace subwave
