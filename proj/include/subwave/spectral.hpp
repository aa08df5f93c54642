#pragma once

#include <functional>
#include <vector>

#include "subwave/capacitance.hpp"

namespace subwave {

// Block-Toeplitz symbol integral:
//   T^k(omega) = -(1/|Y*|) int e^{i alpha k L} Cgen (Cgen - omega^2 I)^{-1} dalpha.
Mat2 toeplitz_block(int k, cplx omega, const BandContext& ctx,
                    double band_tol = 1e-6);

// I(omega) = -T^0(omega); the single-defect scalar is J = I_11.
Mat2 bz_block_integral(cplx omega, const BandContext& ctx,
                       double band_tol = 1e-6);

enum class Characteristic { PTLoss, PTGain, SingleGeneral, DoubleGeneral };

struct CharacteristicValue {
    cplx omega;
    cplx value;
    Characteristic which;
};

// PT chain with one resonator's parameter conjugated. Requires a
// PT-symmetric background; PTLoss expects Im V1 >= 0, PTGain Im V1 <= 0.
// Zeros (off the bands) are the defect-mode frequencies. For Im V1 = 0 the
// value degenerates to |Y*|.
cplx characteristic_pt_loss(cplx omega, const BandContext& ctx,
                            double band_tol = 1e-6);
cplx characteristic_pt_gain(cplx omega, const BandContext& ctx,
                            double band_tol = 1e-6);

// General single defect on resonator 1 of one cell:
//   value = V1 + (V1_def - V1) * J(omega).
cplx characteristic_single(cplx omega, cplx V1_def, const BandContext& ctx,
                           double band_tol = 1e-6);

// Both resonators of one cell replaced:
//   value = X1 X2 det I + X1 V2 I11 + X2 V1 I22 + V1 V2,  X_i = V_i_def - V_i.
cplx characteristic_double(cplx omega, cplx V1_def, cplx V2_def,
                           const BandContext& ctx, double band_tol = 1e-6);

struct HeatmapWindow {
    double re_min, re_max, im_min, im_max;
    int nx = 100, ny = 100;
};

struct HeatmapResult {
    HeatmapWindow window;
    double clip = 0.0;                  // 0 = no clipping
    std::vector<double> values;         // row-major |value|, clipped
    std::vector<unsigned char> on_band; // per-pixel flags
    std::vector<cplx> band_overlay;     // sampled band frequencies
};

HeatmapResult heatmap(const std::function<cplx(cplx)>& characteristic,
                      const HeatmapWindow& win, double clip,
                      const BandContext& ctx);

struct RootResult {
    cplx root;
    cplx value;
    int iterations = 0;
};

// Complex secant iteration with a finite-step derivative restart when the
// secant denominator degenerates. Converges when |f| < tol; throws
// NoConvergence after max_iter, RootOnBand if iterates hit the bands.
RootResult find_root(const std::function<cplx(cplx)>& f, cplx seed,
                     double tol = 1e-10, int max_iter = 100);

} // namespace subwave
