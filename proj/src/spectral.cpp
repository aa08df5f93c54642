#include "subwave/spectral.hpp"

#include <cmath>

#include "parallel_util.hpp"
#include "spectral_detail.hpp"

namespace subwave {

namespace detail {

cplx scalar_J(cplx omega, const BandContext& ctx) {
    const cplx w2 = omega * omega;
    cplx acc = 0.0;
    for (std::size_t k = 0; k < ctx.nodes.size(); ++k) {
        if (ctx.weights[k] == 0.0) continue;
        const Mat2& G = ctx.Cgen[k];
        cplx det = G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
        cplx den = det - w2 * (G(0, 0) + G(1, 1)) + w2 * w2;
        acc += ctx.weights[k] * (det - w2 * G(0, 0)) / den;
    }
    return acc / ctx.dual_measure();
}

std::vector<Mat2> toeplitz_blocks(const std::vector<int>& ks, cplx omega,
                                  const BandContext& ctx) {
    const cplx w2 = omega * omega;
    const double L = ctx.lattice.period;
    std::vector<Mat2> acc(ks.size(), Mat2::Zero());
    for (std::size_t n = 0; n < ctx.nodes.size(); ++n) {
        const double w = ctx.weights[n];
        if (w == 0.0) continue;
        Mat2 M = ctx.Cgen[n] - w2 * Mat2::Identity();
        Mat2 W = ctx.Cgen[n] * M.inverse();
        const double theta = ctx.nodes[n] * L;
        for (std::size_t j = 0; j < ks.size(); ++j) {
            cplx phase = std::polar(1.0, theta * ks[j]);
            acc[j] += (w * phase) * W;
        }
    }
    for (Mat2& T : acc) T /= -ctx.dual_measure();
    return acc;
}

} // namespace detail

Mat2 toeplitz_block(int k, cplx omega, const BandContext& ctx, double band_tol) {
    ctx.require_off_band(omega, band_tol);
    return detail::toeplitz_blocks({k}, omega, ctx)[0];
}

Mat2 bz_block_integral(cplx omega, const BandContext& ctx, double band_tol) {
    ctx.require_off_band(omega, band_tol);
    return -detail::toeplitz_blocks({0}, omega, ctx)[0];
}

namespace {

// PT backgrounds have equal radii and V2 = conj(V1).
void require_pt(const BandContext& ctx) {
    const double R1 = ctx.geometry.radii[0], R2 = ctx.geometry.radii[1];
    bool ok = std::abs(R1 - R2) <= 1e-12 * std::max(R1, R2) &&
              std::abs(ctx.material.V[1] - std::conj(ctx.material.V[0])) <=
                  1e-12 * std::max(1.0, std::abs(ctx.material.V[0]));
    if (!ok)
        throw Error(ErrorCode::NotPTSymmetric,
                    "requires equal radii and V2 = conj(V1)");
}

// Shared loss/gain integrand: the defected resonator keeps |V1| but flips
// the sign of its imaginary part; `coef` is the replacement parameter.
cplx pt_characteristic(cplx omega, cplx coef, const BandContext& ctx,
                       double band_tol) {
    require_pt(ctx);
    ctx.require_off_band(omega, band_tol);
    const double a = ctx.material.V[0].real();
    const double b = ctx.material.V[0].imag();
    const double vol = ctx.geometry.volume(0);
    const cplx w2 = omega * omega;
    cplx acc = 0.0;
    for (std::size_t k = 0; k < ctx.nodes.size(); ++k) {
        if (ctx.weights[k] == 0.0) continue;
        const Mat2& C = ctx.C[k];
        cplx c11 = C(0, 0) / vol;
        cplx detc = (C(0, 0) * C(1, 1) - C(0, 1) * C(1, 0)) / (vol * vol);
        cplx num = w2 * w2 - 2.0 * coef * c11 * w2 + coef * coef * detc;
        cplx den = w2 * w2 - 2.0 * a * c11 * w2 + (a * a + b * b) * detc;
        acc += ctx.weights[k] * num / den;
    }
    return acc;
}

} // namespace

cplx characteristic_pt_loss(cplx omega, const BandContext& ctx, double band_tol) {
    cplx V1 = ctx.material.V[0];
    return pt_characteristic(omega, std::conj(V1), ctx, band_tol);
}

cplx characteristic_pt_gain(cplx omega, const BandContext& ctx, double band_tol) {
    cplx V1 = ctx.material.V[0];
    return pt_characteristic(omega, V1, ctx, band_tol);
}

cplx characteristic_single(cplx omega, cplx V1_def, const BandContext& ctx,
                           double band_tol) {
    ctx.require_off_band(omega, band_tol);
    cplx V1 = ctx.material.V[0];
    return V1 + (V1_def - V1) * detail::scalar_J(omega, ctx);
}

cplx characteristic_double(cplx omega, cplx V1_def, cplx V2_def,
                           const BandContext& ctx, double band_tol) {
    Mat2 I = bz_block_integral(omega, ctx, band_tol);
    cplx V1 = ctx.material.V[0], V2 = ctx.material.V[1];
    cplx X1 = V1_def - V1, X2 = V2_def - V2;
    cplx detI = I(0, 0) * I(1, 1) - I(0, 1) * I(1, 0);
    return X1 * X2 * detI + X1 * V2 * I(0, 0) + X2 * V1 * I(1, 1) + V1 * V2;
}

HeatmapResult heatmap(const std::function<cplx(cplx)>& characteristic,
                      const HeatmapWindow& win, double clip,
                      const BandContext& ctx) {
    if (!(win.re_max > win.re_min) || !(win.im_max > win.im_min) ||
        win.nx < 2 || win.ny < 2)
        throw Error(ErrorCode::BadInput, "degenerate heatmap window");

    HeatmapResult out;
    out.window = win;
    out.clip = clip;
    out.values.assign(static_cast<std::size_t>(win.nx) * win.ny, 0.0);
    out.on_band.assign(out.values.size(), 0);

    const double dre = (win.re_max - win.re_min) / (win.nx - 1);
    const double dim = (win.im_max - win.im_min) / (win.ny - 1);
    detail::parallel_for(static_cast<std::size_t>(win.ny), [&](std::size_t iy) {
        for (int ix = 0; ix < win.nx; ++ix) {
            cplx omega(win.re_min + ix * dre, win.im_min + iy * dim);
            std::size_t at = iy * win.nx + ix;
            try {
                double v = std::abs(characteristic(omega));
                out.values[at] = (clip > 0.0) ? std::min(v, clip) : v;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::OnBand) throw;
                out.on_band[at] = 1;
                out.values[at] = clip > 0.0 ? clip : 0.0;
            }
        }
    });

    BandSample bands = ctx.band_sample();
    out.band_overlay.reserve(2 * bands.omega.size());
    for (const auto& pair : bands.omega) {
        out.band_overlay.push_back(pair[0]);
        out.band_overlay.push_back(pair[1]);
    }
    return out;
}

RootResult find_root(const std::function<cplx(cplx)>& f, cplx seed,
                     double tol, int max_iter) {
    auto eval = [&](cplx z) -> cplx {
        try {
            return f(z);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::OnBand)
                throw Error(ErrorCode::RootOnBand, "iterate hit the sampled bands");
            throw;
        }
    };

    cplx z0 = seed;
    cplx f0 = eval(z0);
    if (std::abs(f0) < tol) return {z0, f0, 0};
    cplx z1 = z0 + 1e-4 * std::max(1.0, std::abs(z0));
    cplx f1 = eval(z1);

    for (int it = 1; it <= max_iter; ++it) {
        if (std::abs(f1) < tol) return {z1, f1, it};
        cplx step;
        cplx df = f1 - f0;
        if (std::abs(df) < 1e-300 || !std::isfinite(std::abs(df))) {
            // secant direction lost: one-sided difference derivative
            double h = 1e-7 * std::max(1.0, std::abs(z1));
            cplx fd = (eval(z1 + h) - f1) / h;
            if (std::abs(fd) < 1e-300)
                throw Error(ErrorCode::NoConvergence, "derivative vanished");
            step = -f1 / fd;
        } else {
            step = -f1 * (z1 - z0) / df;
        }
        double cap = std::max(1.0, std::abs(z1));
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        z0 = z1;
        f0 = f1;
        z1 = z1 + step;
        if (!std::isfinite(z1.real()) || !std::isfinite(z1.imag()) ||
            std::abs(z1) > 1e8)
            throw Error(ErrorCode::NoConvergence, "iteration diverged");
        f1 = eval(z1);
    }
    throw Error(ErrorCode::NoConvergence, "root not found within iteration budget");
}

} // namespace subwave
