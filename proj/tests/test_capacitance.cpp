#include <doctest.h>

#include <cmath>

#include "subwave/capacitance.hpp"
#include "subwave/spectral.hpp"
#include "fixtures.hpp"

using namespace subwave;

TEST_CASE("single-layer and capacitance entries at alpha = 0.7") {
    Config cfg = pt_config();
    CapacitanceMatrix cap = assemble_capacitance(0.7, cfg.geometry, cfg.lattice, 1e-12);
    CHECK(cap.S(0, 0).real() == doctest::Approx(-0.59054584339404296871).epsilon(1e-13));
    CHECK(std::abs(cap.S(0, 0).imag()) < 1e-14);
    cplx s21(-0.259046832936590066, -0.094559475517431921113);
    CHECK(std::abs(cap.S(1, 0) - s21) < 1e-13 * std::abs(s21));
    CHECK(std::abs(cap.S(0, 1) - std::conj(s21)) < 1e-13 * std::abs(s21));
    CHECK(cap.C(0, 0).real() == doctest::Approx(2.1655700786624846181).epsilon(1e-12));
    CHECK(std::abs(cap.C(0, 0).imag()) < 1e-13);
    cplx c21(-0.94994161190876598485, -0.34675575677184415635);
    CHECK(std::abs(cap.C(1, 0) - c21) < 1e-12 * std::abs(c21));
}

TEST_CASE("capacitance is hermitian and conjugate-symmetric in alpha") {
    Config cfg = pt_config();
    for (double alpha : {0.4, 1.9, 4.5}) {
        CapacitanceMatrix cap = assemble_capacitance(alpha, cfg.geometry, cfg.lattice);
        CAPTURE(alpha);
        CHECK(std::abs(cap.C(0, 1) - std::conj(cap.C(1, 0))) < 1e-12);
        CHECK(std::abs(cap.C(0, 0).imag()) < 1e-12);
        CHECK(std::abs(cap.C(1, 1).imag()) < 1e-12);
        CapacitanceMatrix neg = assemble_capacitance(-alpha, cfg.geometry, cfg.lattice);
        CHECK((neg.C - cap.C.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("generalized eigenvalues at the zone edge") {
    Config cfg = pt_config();
    CapacitanceMatrix cap = assemble_capacitance(pi, cfg.geometry, cfg.lattice, 1e-12);
    CHECK(cap.C(0, 0).real() == doctest::Approx(2.3798266272169497632).epsilon(1e-12));
    Mat2 G = generalized(cap.C, cfg.material, cfg.geometry);
    auto lam = eig2(G);
    cplx lo(168.33829841035149119, -101.00297904621089471);
    cplx hi(168.33829841035149119, 101.00297904621089471);
    CHECK(std::abs(lam[0] - lo) < 1e-11 * std::abs(lo));
    CHECK(std::abs(lam[1] - hi) < 1e-11 * std::abs(hi));
}

TEST_CASE("eig2 agrees with hand-computed spectra") {
    Mat2 M;
    M << cplx(3, 0), cplx(1, 0), cplx(0, 0), cplx(5, 0);
    auto lam = eig2(M);
    CHECK(lam[0] == cplx(3, 0));
    CHECK(lam[1] == cplx(5, 0));
    M << cplx(0, 0), cplx(1, 0), cplx(-1, 0), cplx(0, 0); // rotation: +-i
    lam = eig2(M);
    CHECK(std::abs(lam[0] - cplx(0, -1)) < 1e-15);
    CHECK(std::abs(lam[1] - cplx(0, 1)) < 1e-15);
}

TEST_CASE("band structure ranges and grid validation") {
    Config cfg = pt_config();
    BandSample bands = band_structure(199, cfg.geometry, cfg.lattice, cfg.material);
    REQUIRE(bands.alphas.size() == 199);
    double lo = 1e30, hi = -1e30, im_max = 0;
    for (const auto& pair : bands.lambda) {
        for (const cplx& l : pair) {
            lo = std::min(lo, l.real());
            hi = std::max(hi, l.real());
            im_max = std::max(im_max, std::abs(l.imag()));
        }
    }
    CHECK(lo == doctest::Approx(49.872122651).epsilon(1e-8));
    CHECK(hi == doctest::Approx(212.536851745).epsilon(1e-8));
    CHECK(im_max > 50.0); // PT-broken pairs away from the exceptional points
    for (std::size_t k = 0; k < bands.omega.size(); ++k)
        for (int b = 0; b < 2; ++b)
            CHECK(std::abs(bands.omega[k][b] * bands.omega[k][b] - bands.lambda[k][b]) <
                  1e-10 * std::abs(bands.lambda[k][b]));

    CHECK(thrown_code([&] {
              band_structure(0, cfg.geometry, cfg.lattice, cfg.material);
          }) == ErrorCode::BadInput);
    // minimal grid still runs
    CHECK(band_structure(2, cfg.geometry, cfg.lattice, cfg.material).alphas.size() == 2);
}

TEST_CASE("band context quadrature structure") {
    const BandContext& ctx = pt_context();
    CHECK(ctx.base_count == 199);
    CHECK(ctx.nodes.size() > ctx.base_count); // refinement panels appended
    double wsum = 0;
    for (double w : ctx.weights) {
        CHECK(w >= 0.0);
        wsum += w;
    }
    // the log-spaced endpoint panels carry the 4-point rule's own ~2e-11
    // relative error on the exponential jacobian, so the weight total is
    // accurate to ~1e-11, not machine precision
    CHECK(std::abs(wsum - ctx.dual_measure()) < 1e-10);
    BandSample bands = ctx.band_sample();
    CHECK(bands.alphas.size() == 199);
    CHECK(bands.alphas[0] == doctest::Approx(0.5 * 2.0 * pi / 199));

    // tiny grids shed the refinement rather than overlap the zone
    const BandContext& tiny = pt_context(2);
    CHECK(tiny.nodes.size() == 2);
}

TEST_CASE("material scaling reuses the lattice sums exactly") {
    const BandContext& ctx = pt_context();
    cplx s(0.81, -0.35);
    BandContext scaled = ctx.scaled_material(s);
    for (std::size_t k = 0; k < ctx.nodes.size(); k += 37) {
        CHECK((scaled.Cgen[k] - s * ctx.Cgen[k]).cwiseAbs().maxCoeff() == 0.0);
        for (int b = 0; b < 2; ++b)
            CHECK(scaled.lambda[k][b] == s * ctx.lambda[k][b]);
    }
    CHECK(thrown_code([&] { ctx.scaled_material(0.0); }) ==
          ErrorCode::ZeroMaterialParameter);
}

TEST_CASE("band proximity refusal") {
    const BandContext& ctx = pt_context();
    cplx on_band = std::sqrt(ctx.lambda[50][0]);
    CHECK(thrown_code([&] { ctx.require_off_band(on_band); }) == ErrorCode::OnBand);
    ctx.require_off_band(cplx(1.0, -0.4)); // deep in the gap: no throw
    CHECK(ctx.band_distance_sq(cplx(49.872122651, 0.0)) < 1e-6);
}

TEST_CASE("finite chain matrix assembly") {
    Config cfg = pt_config();
    Eigen::MatrixXcd G =
        finite_chain_matrix(7, cfg.geometry, cfg.lattice, cfg.material, {});
    REQUIRE(G.rows() == 14);
    REQUIRE(G.cols() == 14);

    // row scaling: doubling V1 doubles exactly the resonator-1 rows
    MaterialSpec doubled = cfg.material;
    doubled.V[0] *= 2.0;
    Eigen::MatrixXcd G2 =
        finite_chain_matrix(7, cfg.geometry, cfg.lattice, doubled, {});
    for (int r = 0; r < 14; ++r) {
        double diff = (G2.row(r) - (r % 2 == 0 ? 2.0 : 1.0) * G.row(r)).cwiseAbs().maxCoeff();
        CHECK(diff < 1e-14 * G.row(r).cwiseAbs().maxCoeff());
    }

    // a defect touches exactly its own row
    DefectSpec defects{{DefectSite{0, 0}, cplx(0.01, -0.007)}};
    Eigen::MatrixXcd Gd =
        finite_chain_matrix(7, cfg.geometry, cfg.lattice, cfg.material, defects);
    int defect_row = 2 * 3; // cell 0 sits at position 3 of -3..3
    for (int r = 0; r < 14; ++r) {
        double diff = (Gd.row(r) - G.row(r)).cwiseAbs().maxCoeff();
        if (r == defect_row)
            CHECK(diff > 1e-3);
        else
            CHECK(diff == 0.0);
    }

    CHECK(thrown_code([&] {
              finite_chain_matrix(7, cfg.geometry, cfg.lattice, cfg.material,
                                  {{DefectSite{9, 0}, cplx(1, 0)}});
          }) == ErrorCode::DefectOutOfRange);
    CHECK(thrown_code([&] {
              finite_chain_matrix(7, cfg.geometry, cfg.lattice, cfg.material,
                                  {{DefectSite{0, 0}, cplx(1, 0)},
                                   {DefectSite{0, 0}, cplx(2, 0)}});
          }) == ErrorCode::BadInput);
    CHECK(thrown_code([&] {
              finite_chain_matrix(7, cfg.geometry, cfg.lattice, cfg.material,
                                  {{DefectSite{0, 1}, cplx(0, 0)}});
          }) == ErrorCode::ZeroMaterialParameter);
}

TEST_CASE("context grid doubling leaves gap integrals stable") {
    // quick version of the convergence gate at a design-region frequency
    const BandContext& a = pt_context(199);
    const BandContext& b = pt_context(398);
    cplx om(1.0, -0.4);
    cplx Ja = bz_block_integral(om, a)(0, 0);
    cplx Jb = bz_block_integral(om, b)(0, 0);
    CHECK(std::abs(Ja - Jb) < 1e-6 * std::abs(Ja));
}
