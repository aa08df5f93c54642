#include "subwave/capacitance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subwave/lattice_sum.hpp"
#include "parallel_util.hpp"

namespace subwave {

namespace {

// 4-point Gauss-Legendre on [-1, 1]
constexpr double gl_x[4] = {-0.8611363115940526, -0.3399810435848563,
                            0.3399810435848563, 0.8611363115940526};
constexpr double gl_w[4] = {0.34785484513745385, 0.6521451548625461,
                            0.6521451548625461, 0.34785484513745385};

Mat2 invert2(const Mat2& M, const char* what) {
    cplx det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    double scale = std::max({std::abs(M(0, 0)), std::abs(M(0, 1)),
                             std::abs(M(1, 0)), std::abs(M(1, 1))});
    if (std::abs(det) <= 1e-14 * scale * scale)
        throw Error(ErrorCode::SingularSystem, what);
    Mat2 inv;
    inv << M(1, 1), -M(0, 1), -M(1, 0), M(0, 0);
    return inv / det;
}

} // namespace

CapacitanceMatrix assemble_capacitance(double alpha, const Geometry& geom,
                                       const Lattice& lat, double tol) {
    const double L = lat.period;
    const double theta = alpha * L;
    if (std::abs(std::sin(theta / 2.0)) < 1e-300)
        throw Error(ErrorCode::OnSingularPoint, "alpha on the dual lattice");

    CapacitanceMatrix out;
    out.alpha = alpha;
    try {
        const double diag_tail = translate_diag_sum(alpha, lat);
        for (int i = 0; i < 2; ++i)
            out.S(i, i) = -1.0 / (4.0 * pi * geom.radii[i]) - diag_tail / (4.0 * pi);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                if (i == j) continue;
                Vec3 d = geom.centers[i] - geom.centers[j];
                out.S(i, j) = greens_alpha(d, alpha, lat, tol).value;
            }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoConvergence)
            throw Error(ErrorCode::GreenEvalFailed, e.what());
        throw;
    }
    out.C = -invert2(out.S, "single-layer matrix not invertible");
    return out;
}

Mat2 generalized(const Mat2& C, const MaterialSpec& mat, const Geometry& geom) {
    Mat2 G;
    for (int i = 0; i < 2; ++i) {
        cplx w = mat.V[i] / geom.volume(i);
        G(i, 0) = w * C(i, 0);
        G(i, 1) = w * C(i, 1);
    }
    return G;
}

std::array<cplx, 2> eig2(const Mat2& M) {
    cplx tr = M(0, 0) + M(1, 1);
    cplx det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    cplx disc = std::sqrt(tr * tr / 4.0 - det);
    std::array<cplx, 2> lam{tr / 2.0 - disc, tr / 2.0 + disc};
    if (lam[1].real() < lam[0].real() ||
        (lam[1].real() == lam[0].real() && lam[1].imag() < lam[0].imag()))
        std::swap(lam[0], lam[1]);
    return lam;
}

BandSample band_structure(int grid_size, const Geometry& geom,
                          const Lattice& lat, const MaterialSpec& mat,
                          double tol) {
    if (grid_size < 1)
        throw Error(ErrorCode::BadInput, "grid size must be at least 1");
    const double h = lat.dual_measure() / grid_size;
    BandSample bands;
    bands.alphas.resize(grid_size);
    bands.lambda.resize(grid_size);
    bands.omega.resize(grid_size);
    for (int k = 0; k < grid_size; ++k) bands.alphas[k] = (k + 0.5) * h;
    detail::parallel_for(grid_size, [&](std::size_t k) {
        CapacitanceMatrix cap = assemble_capacitance(bands.alphas[k], geom, lat, tol);
        bands.lambda[k] = eig2(generalized(cap.C, mat, geom));
        for (int b = 0; b < 2; ++b) bands.omega[k][b] = std::sqrt(bands.lambda[k][b]);
    });
    return bands;
}

// Composite Brillouin-zone rule. The capacitance entries vary like
// ln|2 sin(alpha L / 2)| near the zone edge, so a constant-step rule stalls
// at O(1/n); the innermost cells on each side are excised (weight zero, the
// nodes stay for band sampling) and re-integrated by dyadic log-spaced
// Gauss-Legendre panels down to theta = 1e-12 plus a closing sliver.
static void build_quadrature(int n, double L, std::vector<double>& nodes,
                             std::vector<double>& weights) {
    const int m_excise = std::min(8, n / 4);
    const double h = 2.0 * pi / n; // in theta = alpha * L
    const double theta_min = 1e-12;

    nodes.clear();
    weights.clear();
    for (int k = 0; k < n; ++k) {
        nodes.push_back((k + 0.5) * h / L);
        bool excised = (k < m_excise || k >= n - m_excise);
        weights.push_back(excised ? 0.0 : h / L);
    }
    if (m_excise == 0) return;

    const double Delta = m_excise * h;
    for (int side = 0; side < 2; ++side) {
        double u_hi = std::log(Delta);
        while (std::exp(u_hi) > theta_min) {
            double u_lo = u_hi - std::log(2.0);
            double um = 0.5 * (u_hi + u_lo), uh = 0.5 * (u_hi - u_lo);
            for (int q = 0; q < 4; ++q) {
                double u = um + uh * gl_x[q];
                double th = std::exp(u);
                nodes.push_back((side == 0 ? th : 2.0 * pi - th) / L);
                weights.push_back(gl_w[q] * uh * th / L); // du -> dtheta jacobian
            }
            u_hi = u_lo;
        }
        double th = std::exp(u_hi); // sliver [0, th]: integrand ~ constant
        nodes.push_back((side == 0 ? th : 2.0 * pi - th) / L);
        weights.push_back(th / L);
    }
}

double BandContext::band_distance_sq(cplx omega_sq) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pair : lambda)
        for (const cplx& lam : pair)
            best = std::min(best, std::abs(lam - omega_sq));
    return best;
}

void BandContext::require_off_band(cplx omega, double band_tol) const {
    cplx w2 = omega * omega;
    if (band_distance_sq(w2) <= band_tol * std::max(1.0, std::abs(w2)))
        throw Error(ErrorCode::OnBand, "omega^2 within band_tol of the sampled spectrum");
}

BandContext BandContext::scaled_material(cplx s) const {
    if (s == cplx(0.0))
        throw Error(ErrorCode::ZeroMaterialParameter, "material scale is zero");
    BandContext out = *this;
    for (int i = 0; i < 2; ++i) out.material.V[i] *= s;
    for (auto& G : out.Cgen) G *= s;
    for (auto& pair : out.lambda)
        for (cplx& lam : pair) lam *= s;
    return out;
}

BandSample BandContext::band_sample() const {
    BandSample bands;
    bands.alphas.assign(nodes.begin(), nodes.begin() + base_count);
    bands.lambda.assign(lambda.begin(), lambda.begin() + base_count);
    bands.omega.resize(base_count);
    for (std::size_t k = 0; k < base_count; ++k)
        for (int b = 0; b < 2; ++b)
            bands.omega[k][b] = std::sqrt(bands.lambda[k][b]);
    return bands;
}

BandContext make_band_context(const Geometry& geom, const Lattice& lat,
                              const MaterialSpec& mat, int grid_size,
                              double tol) {
    if (grid_size < 1)
        throw Error(ErrorCode::BadInput, "grid size must be at least 1");
    BandContext ctx;
    ctx.lattice = lat;
    ctx.geometry = geom;
    ctx.material = mat;
    ctx.grid_size = grid_size;
    build_quadrature(grid_size, lat.period, ctx.nodes, ctx.weights);
    ctx.base_count = static_cast<std::size_t>(grid_size);

    const std::size_t n = ctx.nodes.size();
    ctx.C.resize(n);
    ctx.Cgen.resize(n);
    ctx.lambda.resize(n);
    detail::parallel_for(n, [&](std::size_t k) {
        CapacitanceMatrix cap = assemble_capacitance(ctx.nodes[k], geom, lat, tol);
        ctx.C[k] = cap.C;
        ctx.Cgen[k] = generalized(cap.C, mat, geom);
        ctx.lambda[k] = eig2(ctx.Cgen[k]);
    });
    return ctx;
}

Eigen::MatrixXcd finite_chain_matrix(int num_cells, const Geometry& geom,
                                     const Lattice& lat, const MaterialSpec& mat,
                                     const DefectSpec& defects) {
    if (num_cells < 1)
        throw Error(ErrorCode::BadInput, "need at least one cell");
    const int lo = -(num_cells / 2);
    const int hi = (num_cells + 1) / 2;
    const int n2 = 2 * num_cells;

    std::vector<Vec3> pos(n2);
    for (int m = lo; m < hi; ++m)
        for (int i = 0; i < 2; ++i) {
            Vec3 p = geom.centers[i];
            p[0] += m * lat.period;
            pos[2 * (m - lo) + i] = p;
        }

    Eigen::MatrixXd S(n2, n2);
    for (int r = 0; r < n2; ++r)
        for (int s = 0; s < n2; ++s) {
            if (r == s) {
                S(r, s) = -1.0 / (4.0 * pi * geom.radii[r % 2]);
            } else {
                double d = (pos[r] - pos[s]).norm();
                if (d <= 0.0)
                    throw Error(ErrorCode::OverlappingResonators, "coincident centers");
                S(r, s) = -1.0 / (4.0 * pi * d);
            }
        }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
    Eigen::MatrixXd Cf = -lu.inverse();
    if (!Cf.allFinite())
        throw Error(ErrorCode::SingularSystem, "finite single-layer matrix not invertible");

    std::vector<cplx> row_w(n2);
    for (int r = 0; r < n2; ++r)
        row_w[r] = mat.V[r % 2] / geom.volume(r % 2);
    std::vector<char> seen(n2, 0);
    for (const Defect& df : defects) {
        if (df.site.cell < lo || df.site.cell >= hi)
            throw Error(ErrorCode::DefectOutOfRange,
                        "defect cell " + std::to_string(df.site.cell) +
                        " outside the truncated chain");
        if (df.site.resonator < 0 || df.site.resonator > 1)
            throw Error(ErrorCode::DefectOutOfRange, "resonator index out of range");
        if (df.V_def == cplx(0.0))
            throw Error(ErrorCode::ZeroMaterialParameter, "defect V is zero");
        int r = 2 * (df.site.cell - lo) + df.site.resonator;
        if (seen[r]++)
            throw Error(ErrorCode::BadInput, "duplicate defect site");
        row_w[r] = df.V_def / geom.volume(df.site.resonator);
    }

    Eigen::MatrixXcd G(n2, n2);
    for (int r = 0; r < n2; ++r)
        G.row(r) = row_w[r] * Cf.row(r).cast<cplx>();
    return G;
}

} // namespace subwave
