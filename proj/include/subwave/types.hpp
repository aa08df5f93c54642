#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subwave/errors.hpp"

namespace subwave {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

constexpr double pi = 3.14159265358979323846;

// One-dimensional lattice of period L along e1; dual cell Y* = (-pi/L, pi/L].
struct Lattice {
    double period = 1.0;
    double dual_measure() const { return 2.0 * pi / period; }
};

// Two spherical resonators per unit cell.
struct Geometry {
    std::array<Vec3, 2> centers;
    std::array<double, 2> radii;

    double volume(int i) const { return 4.0 / 3.0 * pi * radii[i] * radii[i] * radii[i]; }
};

// Per-resonator material parameter V_i = delta_i v_i^2 (complex).
struct MaterialSpec {
    std::array<cplx, 2> V;
};

// Single-site override of the background material.
struct DefectSite {
    int cell = 0;
    int resonator = 0; // 0-based internally
};

struct Defect {
    DefectSite site;
    cplx V_def;
};

using DefectSpec = std::vector<Defect>;

// Full model description as read from a config file.
struct Config {
    Lattice lattice;
    Geometry geometry;
    MaterialSpec material;
    DefectSpec defects;
};

// Throws on invalid geometry/material: overlapping or touching spheres
// (including across cell boundaries), nonpositive radii or period, zero V.
void validate_config(const Config& cfg);

// True if the material is PT-symmetric for this geometry: equal radii and
// V2 == conj(V1) within tol (relative to |V1|).
bool is_pt_symmetric(const Config& cfg, double tol = 1e-12);

struct PTParams {
    double a; // Re V1
    double b; // Im V1
};

// PT decomposition V1 = a + i b; throws NotPTSymmetric otherwise.
PTParams pt_params(const Config& cfg, double tol = 1e-12);

} // namespace subwave
