#include <doctest.h>

#include <cmath>

#include "subwave/design.hpp"
#include "subwave/finite_oracle.hpp"
#include "fixtures.hpp"

using namespace subwave;

TEST_CASE("single-defect placement and back-substitution") {
    const BandContext& ctx = pt_context();
    SingleDesign d = design_single(cplx(1.0, -0.4), ctx);
    CHECK(d.residual < 1e-12);
    // pinned regression value for the reference chain
    cplx expect(0.00630556745479483, -0.006016345708045162);
    CHECK(std::abs(d.V1_def - expect) < 1e-9 * std::abs(expect));
    // the defect parameter solves V1 + (V- V1) J = 0 by construction
    cplx V1 = ctx.material.V[0];
    CHECK(std::abs(V1 + (d.V1_def - V1) * d.J) < 1e-13);
}

TEST_CASE("single design refuses band frequencies") {
    const BandContext& ctx = pt_context();
    cplx on_band = std::sqrt(ctx.lambda[80][0]);
    CHECK(thrown_code([&] { design_single(on_band, ctx); }) == ErrorCode::OnBand);
}

TEST_CASE("double-defect placement solves both targets") {
    const BandContext& ctx = pt_context();
    cplx om1(1.2, -1.0), om2(1.05, -0.7);
    DoubleDesign d = design_double(om1, om2, ctx);
    for (const DoubleDesignRoot& r : d.roots) {
        CHECK(r.residual1 < 1e-12);
        CHECK(r.residual2 < 1e-12);
        CHECK(r.x2_consistency < 1e-9);
    }

    // both roots really solve the quadratic
    for (const DoubleDesignRoot& r : d.roots) {
        cplx X1 = r.V1_def - ctx.material.V[0];
        cplx val = d.A * X1 * X1 + d.B * X1 + d.C;
        double scale = std::abs(d.A * X1 * X1) + std::abs(d.B * X1) + std::abs(d.C);
        CHECK(std::abs(val) < 1e-12 * scale);
    }

    // swapping the targets permutes nothing essential: same root set
    DoubleDesign swapped = design_double(om2, om1, ctx);
    auto close = [](cplx a, cplx b) { return std::abs(a - b) < 1e-9; };
    bool direct = close(swapped.roots[0].V1_def, d.roots[0].V1_def) ||
                  close(swapped.roots[0].V1_def, d.roots[1].V1_def);
    CHECK(direct);
}

TEST_CASE("coincident double targets are refused") {
    const BandContext& ctx = pt_context();
    CHECK(thrown_code([&] { design_double(cplx(1.2, -1.0), cplx(1.2, -1.0), ctx); }) ==
          ErrorCode::DegenerateQuadratic);
}

TEST_CASE("multi-site design reduces to the closed forms") {
    const BandContext& ctx = pt_context();
    cplx om(1.0, -0.4);

    SingleDesign sd = design_single(om, ctx);
    MultiDesign md = design_defects({om}, {DefectSite{0, 0}}, ctx);
    CHECK(md.residuals[0] < 1e-10);
    CHECK(std::abs(md.V_def[0] - sd.V1_def) < 1e-10 * std::abs(sd.V1_def));
    // cell index is irrelevant for one site
    MultiDesign md5 = design_defects({om}, {DefectSite{5, 0}}, ctx);
    CHECK(std::abs(md5.V_def[0] - md.V_def[0]) < 1e-12 * std::abs(md.V_def[0]));

    cplx om2(1.15, -0.8);
    DoubleDesign dd = design_double(om, om2, ctx);
    MultiDesign m2 = design_defects({om, om2}, {DefectSite{0, 0}, DefectSite{0, 1}}, ctx);
    const DoubleDesignRoot& p = dd.roots[dd.primary];
    CHECK(std::abs(m2.V_def[0] - p.V1_def) < 1e-8 * std::abs(p.V1_def));
    CHECK(std::abs(m2.V_def[1] - p.V2_def) < 1e-8 * std::abs(p.V2_def));
}

TEST_CASE("multi-site design handles separated cells") {
    const BandContext& ctx = pt_context();
    std::vector<cplx> targets{cplx(0.95, -0.35), cplx(1.1, -0.55)};
    std::vector<DefectSite> sites{DefectSite{-1, 0}, DefectSite{1, 0}};
    MultiDesign md = design_defects(targets, sites, ctx);
    CHECK(md.residuals[0] < 1e-10);
    CHECK(md.residuals[1] < 1e-10);

    // and the truncated-chain oracle sees both modes
    Config cfg = pt_config();
    DefectSpec defects;
    for (std::size_t s = 0; s < sites.size(); ++s)
        defects.push_back({sites[s], md.V_def[s]});
    FiniteSpectrum spec = finite_spectrum(80, cfg.geometry, cfg.lattice, cfg.material,
                                          defects, ctx.band_sample(),
                                          targets[0] * targets[0]);
    for (cplx t : targets) {
        int idx = match_eigenvalue(spec, t * t);
        cplx omf = std::sqrt(spec.eigenvalues[idx]);
        CHECK(std::abs(omf - t) < 0.02 * std::abs(t));
    }
}

TEST_CASE("three sites, three targets") {
    const BandContext& ctx = pt_context();
    std::vector<cplx> targets{cplx(0.9, -0.3), cplx(1.05, -0.5), cplx(1.25, -0.75)};
    std::vector<DefectSite> sites{DefectSite{-2, 0}, DefectSite{0, 1}, DefectSite{3, 0}};
    MultiDesign md = design_defects(targets, sites, ctx);
    for (double r : md.residuals) CHECK(r < 1e-10);
    CHECK(md.iterations < 60);
}

TEST_CASE("multi-site input validation") {
    const BandContext& ctx = pt_context();
    CHECK(thrown_code([&] { design_defects({}, {}, ctx); }) ==
          ErrorCode::DimensionMismatch);
    CHECK(thrown_code([&] {
              design_defects({cplx(1, -0.4)}, {DefectSite{0, 0}, DefectSite{1, 0}}, ctx);
          }) == ErrorCode::DimensionMismatch);
    CHECK(thrown_code([&] {
              design_defects({cplx(1, -0.4), cplx(1.1, -0.5)},
                             {DefectSite{0, 0}, DefectSite{0, 0}}, ctx);
          }) == ErrorCode::BadInput);
    CHECK(thrown_code([&] {
              design_defects({cplx(1, -0.4)}, {DefectSite{0, 2}}, ctx);
          }) == ErrorCode::DefectOutOfRange);
}
