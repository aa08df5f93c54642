#include <doctest.h>

#include <cmath>

#include "subwave/config.hpp"
#include "subwave/types.hpp"
#include "fixtures.hpp"

using namespace subwave;

TEST_CASE("config validation accepts the reference chain") {
    Config cfg = pt_config();
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("config validation rejects bad geometry") {
    Config bad = pt_config();
    bad.lattice.period = 0.0;
    CHECK(thrown_code([&] { validate_config(bad); }) == ErrorCode::BadInput);

    bad = pt_config();
    bad.geometry.radii[0] = -0.1;
    CHECK(thrown_code([&] { validate_config(bad); }) == ErrorCode::BadInput);

    // same-cell overlap
    bad = pt_config();
    bad.geometry.radii = {0.3, 0.3};
    CHECK(thrown_code([&] { validate_config(bad); }) ==
          ErrorCode::OverlappingResonators);

    // touching across the cell boundary: centers 0.25 and 0.75, L = 1, so the
    // second sphere's translate sits at -0.25 and 2R = 0.5 means contact
    bad = pt_config();
    bad.geometry.radii = {0.25, 0.25};
    CHECK(thrown_code([&] { validate_config(bad); }) ==
          ErrorCode::OverlappingResonators);

    // diameter filling the whole period
    bad = pt_config();
    bad.geometry.radii[0] = 0.5;
    CHECK(thrown_code([&] { validate_config(bad); }) ==
          ErrorCode::OverlappingResonators);
}

TEST_CASE("config validation rejects degenerate material") {
    Config bad = pt_config();
    bad.material.V[1] = 0.0;
    CHECK(thrown_code([&] { validate_config(bad); }) ==
          ErrorCode::ZeroMaterialParameter);

    bad = pt_config();
    bad.defects.push_back({DefectSite{0, 0}, cplx(0, 0)});
    CHECK(thrown_code([&] { validate_config(bad); }) ==
          ErrorCode::ZeroMaterialParameter);

    bad = pt_config();
    bad.defects.push_back({DefectSite{0, 3}, cplx(1, 0)});
    CHECK(thrown_code([&] { validate_config(bad); }) ==
          ErrorCode::DefectOutOfRange);
}

TEST_CASE("balanced gain and loss is detected exactly") {
    Config cfg = pt_config();
    CHECK(is_pt_symmetric(cfg));
    PTParams p = pt_params(cfg);
    CHECK(p.a == doctest::Approx(1.0));
    CHECK(p.b == doctest::Approx(0.6));

    Config off = pt_config();
    off.material.V[1] = cplx(1.0, -0.55);
    CHECK(!is_pt_symmetric(off));
    CHECK(thrown_code([&] { pt_params(off); }) == ErrorCode::NotPTSymmetric);

    Config radii = pt_config();
    radii.geometry.radii[1] = 0.14;
    CHECK(!is_pt_symmetric(radii));
}

TEST_CASE("config JSON round trip") {
    Config cfg = pt_config();
    cfg.defects.push_back({DefectSite{2, 0}, cplx(0.006, -0.006)});
    std::string text = config_to_json(cfg);
    Config back = parse_config(text);
    CHECK(back.lattice.period == cfg.lattice.period);
    for (int i = 0; i < 2; ++i) {
        CHECK(back.geometry.radii[i] == cfg.geometry.radii[i]);
        CHECK((back.geometry.centers[i] - cfg.geometry.centers[i]).norm() == 0.0);
        CHECK(back.material.V[i] == cfg.material.V[i]);
    }
    REQUIRE(back.defects.size() == 1);
    CHECK(back.defects[0].site.cell == 2);
    CHECK(back.defects[0].site.resonator == 0);
    CHECK(back.defects[0].V_def == cfg.defects[0].V_def);
}

TEST_CASE("resonator indices are one-based in config files") {
    std::string text = R"({
        "lattice": {"period": 1.0},
        "geometry": {"centers": [[0.25,0,0],[0.75,0,0]], "radii": [0.15,0.15]},
        "material": {"V": [[1.0,0.6],[1.0,-0.6]]},
        "defects": [{"cell": -1, "resonator": 2, "V_def": [0.01,-0.007]}]
    })";
    Config cfg = parse_config(text);
    CHECK(cfg.defects[0].site.resonator == 1); // 0-based internally
    CHECK(cfg.defects[0].site.cell == -1);

    // and the emitted form restores the 1-based label
    std::string out = config_to_json(cfg);
    CHECK(out.find("\"resonator\": 2") != std::string::npos);
}

TEST_CASE("malformed config text is refused") {
    CHECK(thrown_code([&] { parse_config("{"); }) == ErrorCode::BadInput);
    CHECK(thrown_code([&] { parse_config("{}"); }) == ErrorCode::BadInput);
    CHECK(thrown_code([&] {
              parse_config(R"({"lattice": {"period": 1.0},
                  "geometry": {"centers": [[0.25,0,0]], "radii": [0.15,0.15]},
                  "material": {"V": [[1,0.6],[1,-0.6]]}})");
          }) == ErrorCode::BadInput);
    CHECK(thrown_code([&] {
              parse_config(R"({"lattice": {"period": 1.0},
                  "geometry": {"centers": [[0.25,0,0],[0.75,0,0]], "radii": [0.15,0.15]},
                  "material": {"V": [[1,0.6],[1,-0.6]]},
                  "defects": [{"cell": 0, "resonator": 0, "V_def": [1,0]}]})");
          }) == ErrorCode::DefectOutOfRange); // resonator labels start at 1
    CHECK(thrown_code([&] { load_config("/nonexistent/path.json"); }) ==
          ErrorCode::BadInput);
}

TEST_CASE("complex scalars in CLI notation") {
    CHECK(parse_complex("1.2-0.4i") == cplx(1.2, -0.4));
    CHECK(parse_complex("0.5i") == cplx(0.0, 0.5));
    CHECK(parse_complex("-3") == cplx(-3.0, 0.0));
    CHECK(parse_complex("1e-2+7i") == cplx(0.01, 7.0));
    CHECK(parse_complex("i") == cplx(0.0, 1.0));
    CHECK(parse_complex("-i") == cplx(0.0, -1.0));
    CHECK(parse_complex(" 2.5 ") == cplx(2.5, 0.0));
    CHECK(parse_complex("1.5e-3-2.5e-4i") == cplx(1.5e-3, -2.5e-4));

    CHECK(thrown_code([&] { parse_complex(""); }) == ErrorCode::BadInput);
    CHECK(thrown_code([&] { parse_complex("1+2"); }) == ErrorCode::BadInput);
    CHECK(thrown_code([&] { parse_complex("abc"); }) == ErrorCode::BadInput);
    CHECK(thrown_code([&] { parse_complex("1.2i+3"); }) == ErrorCode::BadInput);

    // format/parse round trip
    for (cplx z : {cplx(1.2, -0.4), cplx(0, 0.5), cplx(-3, 0), cplx(0.01, 7),
                   cplx(0, 0), cplx(-0.25, -1e-5)}) {
        CHECK(parse_complex(format_complex(z)) == z);
    }
}

TEST_CASE("failure categories map onto process exit codes") {
    CHECK(exit_code_for(ErrorCode::BadInput) == 2);
    CHECK(exit_code_for(ErrorCode::OverlappingResonators) == 2);
    CHECK(exit_code_for(ErrorCode::OnBand) == 3);
    CHECK(exit_code_for(ErrorCode::NotPTSymmetric) == 3);
    CHECK(exit_code_for(ErrorCode::NoDefectMode) == 3);
    CHECK(exit_code_for(ErrorCode::WrongHalfPlane) == 4);
    CHECK(exit_code_for(ErrorCode::NoConvergence) == 5);
    CHECK(exit_code_for(ErrorCode::VerificationFailed) == 5);

    Error e(ErrorCode::OnBand, "probe");
    CHECK(e.code() == ErrorCode::OnBand);
    CHECK(e.exit_code() == 3);
    CHECK(std::string(e.what()).find("OnBand") == 0);
}
