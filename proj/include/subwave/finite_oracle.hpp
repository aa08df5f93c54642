#pragma once

#include <vector>

#include "subwave/capacitance.hpp"

namespace subwave {

enum class ModeClass { Bulk, Defect, Edge };

struct FiniteSpectrum {
    int num_cells = 0;
    std::vector<int> cells;          // cell index per matrix row / 2
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd eigenvectors;   // columns
    std::vector<ModeClass> classes;
    std::vector<double> band_dist;   // distance to the sampled band set
    double gap_margin = 0.0;
};

// Eigen-decomposition of the truncated-chain generalized capacitance matrix,
// with each eigenvalue classified against the infinite-chain band samples:
// further than gap_margin from every band sample => defect candidate;
// candidates with > 50% mass in the outer 5 cells per end => edge artifacts.
// gap_margin defaults to half the distance of reference_sq (when given) to
// the band set, floored at 1e-3.
FiniteSpectrum finite_spectrum(int num_cells, const Geometry& geom,
                               const Lattice& lat, const MaterialSpec& mat,
                               const DefectSpec& defects,
                               const BandSample& bands,
                               std::optional<cplx> reference_sq = std::nullopt);

struct LocalizationReport {
    cplx eigenvalue;
    int center_cell = 0;             // mass-weighted center
    double participation_ratio = 0;  // (sum m)^2 / sum m^2, m = |v|^2 per cell
    std::vector<double> mass_within; // cumulative mass within r cells, r=0..10
    double decay_rate = 0;           // exponential fit of cell mass vs distance
    double decay_fit_residual = 0;
};

// Localization diagnostics for one eigenvector of a finite spectrum.
LocalizationReport localization_report(const FiniteSpectrum& spec, int index);

// Index of the eigenvalue nearest to target_sq; throws NoDefectMode if that
// eigenvalue is not classified Defect.
int match_eigenvalue(const FiniteSpectrum& spec, cplx target_sq);

} // namespace subwave
