#pragma once

#include "subwave/design.hpp"
#include "subwave/finite_oracle.hpp"

namespace subwave {

// Frequency jump across an instantaneous material switch:
//   omega+ / omega- = kappa+/kappa- = rho-/rho+ = b.
struct SnellCheck {
    bool ok = false;
    double res_kappa = 0.0; // |omega+/omega- - kappa_ratio|
    double res_rho = 0.0;   // |omega+/omega- - rho_ratio|
};

SnellCheck snell_check(cplx omega_minus, cplx omega_plus, cplx kappa_ratio,
                       cplx rho_ratio, double tol = 1e-12);

// Material data on both sides of a switch at t = 0. Only the ratios of the
// underlying kappa, rho are physical here; both equal b.
struct InstantSwitchMaterial {
    MaterialSpec pre, post;   // post.V = b^2 * pre.V
    DefectSpec pre_defects, post_defects;
    cplx b;

    cplx kappa_ratio() const { return b; }
    cplx rho_ratio() const { return b; }
};

// Scale every material parameter (background and defects) by b^2.
InstantSwitchMaterial make_switch(const MaterialSpec& pre,
                                  const DefectSpec& pre_defects, cplx b);

struct TemporalDesign {
    cplx omega_minus, omega_plus, b;
    SingleDesign stationary;       // design at omega- on the pre material
    InstantSwitchMaterial switched;
    double residual_pre, residual_post;
};

// Defect mode with frequency omega- before and omega+ after the switch:
// design at omega-, then scale the material by b^2, b = omega+/omega-.
// The post residual is evaluated on an independently scaled band context.
TemporalDesign design_temporal(cplx omega_minus, cplx omega_plus,
                               const BandContext& ctx,
                               double band_tol = 1e-6,
                               double design_tol = 1e-8);

struct SpatioTemporalDesign {
    TemporalDesign temporal;
    bool temporal_localized = false; // Im(omega-) > 0 > Im(omega+), by construction
    bool spatial_localized = false;  // >= 90% mass within 10 cells
    LocalizationReport localization; // from the finite-chain oracle
    cplx finite_eigenvalue;          // oracle eigenvalue matched to omega-^2
};

// Requires strictly Im(omega-) > 0 > Im(omega+) (throws WrongHalfPlane);
// runs the finite-chain oracle to certify spatial localization.
SpatioTemporalDesign design_spatiotemporal(cplx omega_minus, cplx omega_plus,
                                           const BandContext& ctx,
                                           int oracle_cells = 100,
                                           double band_tol = 1e-6,
                                           double design_tol = 1e-8);

// Trapezoid integral of |e^{-i omega(t) t}|^2 over [-T, T] with
// omega(t) = omega- for t < 0 and omega+ for t >= 0.
double envelope_integral(cplx omega_minus, cplx omega_plus, double T,
                         int samples = 20001);

} // namespace subwave
