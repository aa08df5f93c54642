#pragma once

#include <vector>

#include <Eigen/Dense>

#include "subwave/types.hpp"

namespace subwave {

using Mat2 = Eigen::Matrix2cd;

// Quasiperiodic capacitance matrix C^alpha = -S^{-1} in the monopole
// approximation; S holds the regularized single-layer interactions.
struct CapacitanceMatrix {
    double alpha = 0.0;
    Mat2 S;
    Mat2 C;
};

CapacitanceMatrix assemble_capacitance(double alpha, const Geometry& geom,
                                       const Lattice& lat, double tol = 1e-10);

// Row scaling by V_i / |D_i|.
Mat2 generalized(const Mat2& C, const MaterialSpec& mat, const Geometry& geom);

// Eigenvalues of a 2x2 matrix by the explicit quadratic formula,
// ordered by (Re, Im) lexicographically.
std::array<cplx, 2> eig2(const Mat2& M);

// Band data sampled over the Brillouin zone.
struct BandSample {
    std::vector<double> alphas;              // base grid, (0, 2pi/L)
    std::vector<std::array<cplx, 2>> lambda; // eigenvalues of generalized C
    std::vector<std::array<cplx, 2>> omega;  // principal sqrt branch
};

BandSample band_structure(int grid_size, const Geometry& geom,
                          const Lattice& lat, const MaterialSpec& mat,
                          double tol = 1e-10);

// Precomputed quadrature data shared by every Brillouin-zone integral:
// base half-offset grid (alpha=0 excluded) plus log-space Gauss-Legendre
// refinement panels where the capacitance entries vary logarithmically.
struct BandContext {
    Lattice lattice;
    Geometry geometry;
    MaterialSpec material;
    int grid_size = 199;

    std::vector<double> nodes;   // quadrature nodes in (0, 2pi/L)
    std::vector<double> weights; // matching weights, sum = 2pi/L
    std::vector<Mat2> C;         // bare capacitance per node
    std::vector<Mat2> Cgen;      // generalized capacitance per node
    std::vector<std::array<cplx, 2>> lambda; // eigenvalues of Cgen
    std::size_t base_count = 0;  // nodes[0..base_count) form the base grid

    double dual_measure() const { return lattice.dual_measure(); }

    // Distance from omega^2 to the sampled spectrum of generalized C.
    double band_distance_sq(cplx omega_sq) const;
    // Throws OnBand if omega^2 comes within band_tol of a sampled eigenvalue.
    void require_off_band(cplx omega, double band_tol = 1e-6) const;

    // Same geometry, material scaled by s (no new lattice sums).
    BandContext scaled_material(cplx s) const;

    BandSample band_sample() const;
};

BandContext make_band_context(const Geometry& geom, const Lattice& lat,
                              const MaterialSpec& mat, int grid_size = 199,
                              double tol = 1e-10);

// Generalized capacitance matrix of a finite chain of num_cells cells
// (centered: cells -floor(n/2) .. ceil(n/2)-1) with free-space monopole
// interactions and per-site defect overrides. Size 2*num_cells.
Eigen::MatrixXcd finite_chain_matrix(int num_cells, const Geometry& geom,
                                     const Lattice& lat, const MaterialSpec& mat,
                                     const DefectSpec& defects);

} // namespace subwave
