#include "subwave/temporal.hpp"

#include <cmath>

namespace subwave {

SnellCheck snell_check(cplx omega_minus, cplx omega_plus, cplx kappa_ratio,
                       cplx rho_ratio, double tol) {
    if (omega_minus == cplx(0.0))
        throw Error(ErrorCode::ZeroFrequency, "pre-switch frequency is zero");
    cplx ratio = omega_plus / omega_minus;
    SnellCheck out;
    out.res_kappa = std::abs(ratio - kappa_ratio);
    out.res_rho = std::abs(ratio - rho_ratio);
    out.ok = out.res_kappa <= tol && out.res_rho <= tol;
    return out;
}

InstantSwitchMaterial make_switch(const MaterialSpec& pre,
                                  const DefectSpec& pre_defects, cplx b) {
    if (b == cplx(0.0))
        throw Error(ErrorCode::ZeroB, "switch ratio is zero");
    InstantSwitchMaterial out;
    out.pre = pre;
    out.pre_defects = pre_defects;
    out.b = b;
    cplx b2 = b * b;
    for (int i = 0; i < 2; ++i) out.post.V[i] = b2 * pre.V[i];
    out.post_defects = pre_defects;
    for (Defect& d : out.post_defects) d.V_def *= b2;
    return out;
}

TemporalDesign design_temporal(cplx omega_minus, cplx omega_plus,
                               const BandContext& ctx, double band_tol,
                               double design_tol) {
    if (omega_minus == cplx(0.0))
        throw Error(ErrorCode::ZeroFrequency, "pre-switch frequency is zero");
    TemporalDesign out;
    out.omega_minus = omega_minus;
    out.omega_plus = omega_plus;
    out.b = omega_plus / omega_minus;
    if (out.b == cplx(0.0))
        throw Error(ErrorCode::ZeroB, "post-switch frequency is zero");

    out.stationary = design_single(omega_minus, ctx, band_tol, design_tol);
    DefectSpec defects{Defect{DefectSite{0, 0}, out.stationary.V1_def}};
    out.switched = make_switch(ctx.material, defects, out.b);
    out.residual_pre = out.stationary.residual;

    // certify the post-switch mode on a context scaled independently of the
    // design step: the defect frequency must move to b * omega_minus
    BandContext post = ctx.scaled_material(out.b * out.b);
    cplx V1d_post = out.switched.post_defects[0].V_def;
    out.residual_post =
        std::abs(characteristic_single(omega_plus, V1d_post, post, band_tol)) /
        std::abs(post.material.V[0]);
    if (out.residual_post > design_tol)
        throw Error(ErrorCode::VerificationFailed,
                    "post-switch back-substitution residual too large");
    return out;
}

SpatioTemporalDesign design_spatiotemporal(cplx omega_minus, cplx omega_plus,
                                           const BandContext& ctx,
                                           int oracle_cells, double band_tol,
                                           double design_tol) {
    if (!(omega_minus.imag() > 0.0) || !(omega_plus.imag() < 0.0))
        throw Error(ErrorCode::WrongHalfPlane,
                    "need Im(omega-) > 0 > Im(omega+) for a decaying envelope");

    SpatioTemporalDesign out;
    out.temporal = design_temporal(omega_minus, omega_plus, ctx, band_tol, design_tol);
    out.temporal_localized = true; // enforced half-plane signs

    DefectSpec defects{Defect{DefectSite{0, 0}, out.temporal.stationary.V1_def}};
    FiniteSpectrum spec =
        finite_spectrum(oracle_cells, ctx.geometry, ctx.lattice, ctx.material,
                        defects, ctx.band_sample(), omega_minus * omega_minus);
    int idx = match_eigenvalue(spec, omega_minus * omega_minus);
    out.finite_eigenvalue = spec.eigenvalues[idx];
    out.localization = localization_report(spec, idx);
    out.spatial_localized = out.localization.mass_within.back() >= 0.9;
    return out;
}

double envelope_integral(cplx omega_minus, cplx omega_plus, double T,
                         int samples) {
    if (!(T > 0.0) || samples < 3)
        throw Error(ErrorCode::BadInput, "need T > 0 and at least 3 samples");
    auto density = [&](double t) {
        double im = t < 0.0 ? omega_minus.imag() : omega_plus.imag();
        return std::exp(2.0 * im * t);
    };
    const double h = 2.0 * T / (samples - 1);
    double acc = 0.5 * (density(-T) + density(T));
    for (int k = 1; k < samples - 1; ++k) acc += density(-T + k * h);
    return acc * h;
}

} // namespace subwave
