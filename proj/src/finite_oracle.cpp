#include "subwave/finite_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace subwave {

namespace {

double band_set_distance(cplx lam, const BandSample& bands) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pair : bands.lambda)
        for (const cplx& b : pair) best = std::min(best, std::abs(lam - b));
    return best;
}

double band_set_scale(const BandSample& bands) {
    double s = 0.0;
    for (const auto& pair : bands.lambda)
        for (const cplx& b : pair) s = std::max(s, std::abs(b));
    return s;
}

} // namespace

FiniteSpectrum finite_spectrum(int num_cells, const Geometry& geom,
                               const Lattice& lat, const MaterialSpec& mat,
                               const DefectSpec& defects,
                               const BandSample& bands,
                               std::optional<cplx> reference_sq) {
    Eigen::MatrixXcd G = finite_chain_matrix(num_cells, geom, lat, mat, defects);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(G, true);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::EigenFailure, "finite-chain eigensolver failed");

    const int n2 = 2 * num_cells;
    FiniteSpectrum out;
    out.num_cells = num_cells;
    const int lo = -(num_cells / 2);
    out.cells.resize(num_cells);
    std::iota(out.cells.begin(), out.cells.end(), lo);

    // deterministic (Re, Im) ordering
    std::vector<int> order(n2);
    std::iota(order.begin(), order.end(), 0);
    const auto& raw = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (raw[a].real() != raw[b].real()) return raw[a].real() < raw[b].real();
        return raw[a].imag() < raw[b].imag();
    });
    out.eigenvalues.resize(n2);
    out.eigenvectors.resize(n2, n2);
    for (int k = 0; k < n2; ++k) {
        out.eigenvalues[k] = raw[order[k]];
        out.eigenvectors.col(k) = solver.eigenvectors().col(order[k]);
    }

    if (reference_sq) {
        out.gap_margin =
            std::max(1e-3, 0.5 * band_set_distance(*reference_sq, bands));
    } else {
        // no target to calibrate against: require clearance beyond the
        // O(1/N) truncation smearing of the band edges
        out.gap_margin =
            std::max(1e-3, 8.0 * band_set_scale(bands) / num_cells);
    }

    out.band_dist.resize(n2);
    out.classes.resize(n2);
    const int outer = std::min(5, num_cells);
    for (int k = 0; k < n2; ++k) {
        out.band_dist[k] = band_set_distance(out.eigenvalues[k], bands);
        if (out.band_dist[k] <= out.gap_margin) {
            out.classes[k] = ModeClass::Bulk;
            continue;
        }
        double total = 0.0, ends = 0.0;
        for (int r = 0; r < n2; ++r) {
            double m = std::norm(out.eigenvectors(r, k));
            total += m;
            int cell_pos = r / 2;
            if (cell_pos < outer || cell_pos >= num_cells - outer) ends += m;
        }
        out.classes[k] = (ends > 0.5 * total) ? ModeClass::Edge : ModeClass::Defect;
    }
    return out;
}

LocalizationReport localization_report(const FiniteSpectrum& spec, int index) {
    const int n2 = static_cast<int>(spec.eigenvalues.size());
    if (index < 0 || index >= n2)
        throw Error(ErrorCode::BadInput, "eigenvalue index out of range");
    const int N = spec.num_cells;

    std::vector<double> mass(N, 0.0);
    double total = 0.0;
    for (int r = 0; r < n2; ++r) {
        double m = std::norm(spec.eigenvectors(r, index));
        mass[r / 2] += m;
        total += m;
    }
    if (total <= 0.0)
        throw Error(ErrorCode::EigenFailure, "zero eigenvector");
    for (double& m : mass) m /= total;

    LocalizationReport out;
    out.eigenvalue = spec.eigenvalues[index];
    int center_pos =
        static_cast<int>(std::max_element(mass.begin(), mass.end()) - mass.begin());
    out.center_cell = spec.cells[center_pos];

    double sq = 0.0;
    for (double m : mass) sq += m * m;
    out.participation_ratio = 1.0 / sq; // mass already normalized

    out.mass_within.assign(11, 0.0);
    for (int c = 0; c < N; ++c) {
        int d = std::abs(c - center_pos);
        for (int r = d; r <= 10; ++r) out.mass_within[r] += mass[c];
    }

    // least-squares fit of ln(mass) vs cell distance, away from the center
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int pts = 0;
    double cut = 1e-13 * *std::max_element(mass.begin(), mass.end());
    std::vector<double> xs, ys;
    for (int c = 0; c < N; ++c) {
        int d = std::abs(c - center_pos);
        if (d < 1 || mass[c] < cut) continue;
        double x = d, y = std::log(mass[c]);
        xs.push_back(x);
        ys.push_back(y);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++pts;
    }
    if (pts >= 2) {
        double denom = pts * sxx - sx * sx;
        double slope = (pts * sxy - sx * sy) / denom;
        double icept = (sy - slope * sx) / pts;
        out.decay_rate = -slope / 2.0; // mass ~ e^{-2 rate d}
        double rss = 0.0;
        for (int k = 0; k < pts; ++k) {
            double e = ys[k] - (icept + slope * xs[k]);
            rss += e * e;
        }
        out.decay_fit_residual = std::sqrt(rss / pts);
    }
    return out;
}

int match_eigenvalue(const FiniteSpectrum& spec, cplx target_sq) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(spec.eigenvalues.size()); ++k) {
        double d = std::abs(spec.eigenvalues[k] - target_sq);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    if (best < 0 || spec.classes[best] != ModeClass::Defect)
        throw Error(ErrorCode::NoDefectMode,
                    "nearest finite eigenvalue is not defect-classified");
    return best;
}

} // namespace subwave
