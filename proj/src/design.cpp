#include "subwave/design.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spectral_detail.hpp"

namespace subwave {

SingleDesign design_single(cplx omega, const BandContext& ctx,
                           double band_tol, double design_tol) {
    ctx.require_off_band(omega, band_tol);
    SingleDesign out;
    out.omega = omega;
    out.J = detail::scalar_J(omega, ctx);
    if (std::abs(out.J) < 1e-13)
        throw Error(ErrorCode::ZeroIntegral, "block integral vanishes at the target");
    cplx V1 = ctx.material.V[0];
    out.V1_def = V1 * (1.0 - 1.0 / out.J);
    out.residual = std::abs(characteristic_single(omega, out.V1_def, ctx, band_tol)) /
                   std::abs(V1);
    if (out.residual > design_tol)
        throw Error(ErrorCode::VerificationFailed,
                    "single-defect back-substitution residual too large");
    return out;
}

DoubleDesign design_double(cplx omega1, cplx omega2, const BandContext& ctx,
                           double band_tol, double design_tol) {
    Mat2 Ia = bz_block_integral(omega1, ctx, band_tol);
    Mat2 Ib = bz_block_integral(omega2, ctx, band_tol);
    const cplx V1 = ctx.material.V[0], V2 = ctx.material.V[1];
    const cplx detA = Ia(0, 0) * Ia(1, 1) - Ia(0, 1) * Ia(1, 0);
    const cplx detB = Ib(0, 0) * Ib(1, 1) - Ib(0, 1) * Ib(1, 0);

    DoubleDesign out;
    out.omega1 = omega1;
    out.omega2 = omega2;
    // quadratic A X1^2 + B X1 + C = 0 from eliminating X2 between the two
    // determinant conditions
    out.A = Ia(0, 0) * detB - Ib(0, 0) * detA;
    out.B = V1 * (detB - detA + Ia(0, 0) * Ib(1, 1) - Ib(0, 0) * Ia(1, 1));
    out.C = V1 * V1 * (Ib(1, 1) - Ia(1, 1));

    const double sA = std::abs(Ia(0, 0) * detB) + std::abs(Ib(0, 0) * detA);
    const double sC = std::abs(V1 * V1) *
                      (std::abs(Ib(1, 1)) + std::abs(Ia(1, 1)));
    if (std::abs(out.A) <= 1e-11 * sA)
        throw Error(ErrorCode::DegenerateQuadratic,
                    "leading coefficient cancels (coincident targets?)");

    cplx disc = std::sqrt(out.B * out.B - 4.0 * out.A * out.C);
    cplx q = (std::abs(out.B + disc) >= std::abs(out.B - disc))
                 ? -(out.B + disc) / 2.0
                 : -(out.B - disc) / 2.0;
    if (std::abs(q) <= 1e-14 * (std::abs(out.B) + std::abs(disc)) &&
        std::abs(out.C) <= 1e-11 * sC)
        throw Error(ErrorCode::DegenerateQuadratic, "all coefficients cancel");
    std::array<cplx, 2> X1s{q / out.A, std::abs(q) > 0 ? out.C / q : q / out.A};

    for (int r = 0; r < 2; ++r) {
        cplx X1 = X1s[r];
        cplx den1 = X1 * detA + V1 * Ia(1, 1);
        cplx den2 = X1 * detB + V1 * Ib(1, 1);
        double dscale = std::abs(X1) * std::abs(detA) + std::abs(V1 * Ia(1, 1));
        if (std::abs(den1) <= 1e-13 * dscale || std::abs(den2) == 0.0)
            throw Error(ErrorCode::ZeroDenominator,
                        "second-resonator back-substitution denominator vanishes");
        cplx X2 = -V2 * (V1 + Ia(0, 0) * X1) / den1;
        cplx X2b = -V2 * (V1 + Ib(0, 0) * X1) / den2;

        DoubleDesignRoot& root = out.roots[r];
        root.V1_def = V1 + X1;
        root.V2_def = V2 + X2;
        root.x2_consistency = std::abs(X2 - X2b);
        double scale = std::abs(V1 * V2);
        root.residual1 =
            std::abs(characteristic_double(omega1, root.V1_def, root.V2_def, ctx,
                                           band_tol)) / scale;
        root.residual2 =
            std::abs(characteristic_double(omega2, root.V1_def, root.V2_def, ctx,
                                           band_tol)) / scale;
    }

    auto pert = [&](const DoubleDesignRoot& r) {
        return std::abs(r.V1_def - V1) + std::abs(r.V2_def - V2);
    };
    out.primary = pert(out.roots[1]) < pert(out.roots[0]) ? 1 : 0;
    const DoubleDesignRoot& p = out.roots[out.primary];
    if (p.residual1 > design_tol || p.residual2 > design_tol)
        throw Error(ErrorCode::VerificationFailed,
                    "double-defect back-substitution residual too large");
    return out;
}

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// F_k(x) = det(Id - diag(x) Tsub_k) and its gradient rows.
cplx multi_det(const MatrixXcd& Tsub, const VectorXcd& x, MatrixXcd* adj_out) {
    const auto n = Tsub.rows();
    MatrixXcd M = MatrixXcd::Identity(n, n) - x.asDiagonal() * Tsub;
    Eigen::PartialPivLU<MatrixXcd> lu(M);
    cplx det = lu.determinant();
    if (adj_out) *adj_out = det * lu.inverse();
    return det;
}

} // namespace

MultiDesign design_defects(const std::vector<cplx>& omegas,
                           const std::vector<DefectSite>& sites,
                           const BandContext& ctx,
                           std::optional<std::vector<cplx>> seed,
                           double band_tol, double tol, int max_iter) {
    const std::size_t n = omegas.size();
    if (n == 0 || sites.size() != n)
        throw Error(ErrorCode::DimensionMismatch,
                    "need one site per target frequency");
    if (seed && seed->size() != n)
        throw Error(ErrorCode::DimensionMismatch, "seed size mismatch");
    std::set<std::pair<int, int>> unique_sites;
    for (const DefectSite& s : sites) {
        if (s.resonator < 0 || s.resonator > 1)
            throw Error(ErrorCode::DefectOutOfRange, "resonator index out of range");
        if (!unique_sites.insert({s.cell, s.resonator}).second)
            throw Error(ErrorCode::BadInput, "duplicate defect site");
    }

    // site-restricted Toeplitz samples, one multi-offset sweep per target
    std::vector<int> offsets;
    for (const DefectSite& t : sites)
        for (const DefectSite& s : sites)
            offsets.push_back(t.cell - s.cell);
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

    std::vector<MatrixXcd> Tsub(n, MatrixXcd(n, n));
    for (std::size_t k = 0; k < n; ++k) {
        ctx.require_off_band(omegas[k], band_tol);
        std::vector<Mat2> blocks = detail::toeplitz_blocks(offsets, omegas[k], ctx);
        auto block_at = [&](int off) -> const Mat2& {
            auto it = std::lower_bound(offsets.begin(), offsets.end(), off);
            return blocks[static_cast<std::size_t>(it - offsets.begin())];
        };
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = 0; t < n; ++t)
                Tsub[k](s, t) = block_at(sites[t].cell - sites[s].cell)(
                    sites[s].resonator, sites[t].resonator);
    }

    VectorXcd x = VectorXcd::Zero(n);
    bool seeded = false;
    if (seed) {
        for (std::size_t s = 0; s < n; ++s)
            x[s] = (*seed)[s] / ctx.material.V[sites[s].resonator] - 1.0;
        seeded = true;
    } else if (n == 2 && sites[0].cell == sites[1].cell &&
               sites[0].resonator + sites[1].resonator == 1) {
        try {
            DoubleDesign dd = design_double(omegas[0], omegas[1], ctx, band_tol, 1e-6);
            const DoubleDesignRoot& p = dd.roots[dd.primary];
            for (std::size_t s = 0; s < 2; ++s) {
                cplx vd = sites[s].resonator == 0 ? p.V1_def : p.V2_def;
                x[s] = vd / ctx.material.V[sites[s].resonator] - 1.0;
            }
            seeded = true;
        } catch (const Error&) {
            // fall through to the diagonal-assignment seed
        }
    }
    if (!seeded) {
        // At x = 0 the Jacobian entry for (target k, site s) is
        // -T^0(omega_k) evaluated at site s's resonator type, which does not
        // depend on the cell: two sites of the same type give identical
        // columns and a structurally singular first step.  Pair each site
        // with its own target instead — x[s] = 1/Tsub[s](s,s) solves target s
        // exactly if site s were acting alone (and is exact for n = 1).
        for (std::size_t s = 0; s < n; ++s)
            if (std::abs(Tsub[s](s, s)) > 1e-13) x[s] = 1.0 / Tsub[s](s, s);
    }

    auto eval_F = [&](const VectorXcd& xv) {
        VectorXcd F(n);
        for (std::size_t k = 0; k < n; ++k)
            F[k] = multi_det(Tsub[k], xv, nullptr);
        return F;
    };

    MultiDesign out;
    out.omegas = omegas;
    out.sites = sites;
    VectorXcd F = eval_F(x);
    int it = 0;
    for (; it < max_iter && F.lpNorm<Eigen::Infinity>() >= tol; ++it) {
        MatrixXcd Jac(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            MatrixXcd adj;
            multi_det(Tsub[k], x, &adj);
            MatrixXcd TA = Tsub[k] * adj;
            for (std::size_t s = 0; s < n; ++s) Jac(k, s) = -TA(s, s);
        }
        Eigen::FullPivLU<MatrixXcd> lu(Jac);
        if (!lu.isInvertible())
            throw Error(ErrorCode::SingularJacobian,
                        "defect-condition Jacobian is singular");
        VectorXcd delta = lu.solve(-F);

        double base = F.norm();
        double t = 1.0;
        bool moved = false;
        for (; t >= 1.0 / (1 << 20); t *= 0.5) {
            VectorXcd xt = x + t * delta;
            VectorXcd Ft = eval_F(xt);
            if (Ft.norm() <= (1.0 - 0.25 * t) * base) {
                x = xt;
                F = Ft;
                moved = true;
                break;
            }
        }
        if (!moved)
            throw Error(ErrorCode::NoConvergence, "line search stalled");
    }
    if (F.lpNorm<Eigen::Infinity>() >= tol)
        throw Error(ErrorCode::NoConvergence,
                    "defect conditions not met within iteration budget");

    out.iterations = it;
    out.V_def.resize(n);
    out.residuals.resize(n);
    for (std::size_t s = 0; s < n; ++s)
        out.V_def[s] = ctx.material.V[sites[s].resonator] * (1.0 + x[s]);
    for (std::size_t k = 0; k < n; ++k) out.residuals[k] = std::abs(F[k]);
    return out;
}

} // namespace subwave
