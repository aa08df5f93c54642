#include "subwave/types.hpp"
#include "subwave/config.hpp"
#include "subwave/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace subwave {

using ordered_json = nlohmann::ordered_json;

namespace {

bool finite3(const Vec3& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

} // namespace

void validate_config(const Config& cfg) {
    const double L = cfg.lattice.period;
    if (!std::isfinite(L) || L <= 0.0)
        throw Error(ErrorCode::BadInput, "lattice period must be positive");

    for (int i = 0; i < 2; ++i) {
        double R = cfg.geometry.radii[i];
        if (!std::isfinite(R) || R <= 0.0)
            throw Error(ErrorCode::BadInput, "radius must be positive");
        if (!finite3(cfg.geometry.centers[i]))
            throw Error(ErrorCode::BadInput, "center coordinates must be finite");
        // the sphere must clear its own lattice translates
        if (2.0 * R >= L)
            throw Error(ErrorCode::OverlappingResonators,
                        "sphere diameter exceeds the lattice period");
    }

    // pairwise clearance across nearby cells (centers need not lie in [0, L))
    const Vec3 d0 = cfg.geometry.centers[0] - cfg.geometry.centers[1];
    const double rsum = cfg.geometry.radii[0] + cfg.geometry.radii[1];
    for (int m = -3; m <= 3; ++m) {
        Vec3 d = d0;
        d[0] -= m * L;
        if (d.norm() <= rsum)
            throw Error(ErrorCode::OverlappingResonators,
                        "resonators overlap (cell offset " + std::to_string(m) + ")");
    }

    for (int i = 0; i < 2; ++i) {
        cplx V = cfg.material.V[i];
        if (!std::isfinite(V.real()) || !std::isfinite(V.imag()))
            throw Error(ErrorCode::BadInput, "material parameter must be finite");
        if (V == cplx(0.0))
            throw Error(ErrorCode::ZeroMaterialParameter,
                        "background V" + std::to_string(i + 1) + " is zero");
    }

    for (const Defect& df : cfg.defects) {
        if (df.site.resonator < 0 || df.site.resonator > 1)
            throw Error(ErrorCode::DefectOutOfRange, "resonator index out of range");
        if (!std::isfinite(df.V_def.real()) || !std::isfinite(df.V_def.imag()))
            throw Error(ErrorCode::BadInput, "defect parameter must be finite");
        if (df.V_def == cplx(0.0))
            throw Error(ErrorCode::ZeroMaterialParameter, "defect V is zero");
    }
}

bool is_pt_symmetric(const Config& cfg, double tol) {
    const double R1 = cfg.geometry.radii[0], R2 = cfg.geometry.radii[1];
    if (std::abs(R1 - R2) > tol * std::max(R1, R2)) return false;
    const cplx V1 = cfg.material.V[0], V2 = cfg.material.V[1];
    return std::abs(V2 - std::conj(V1)) <= tol * std::max(1.0, std::abs(V1));
}

PTParams pt_params(const Config& cfg, double tol) {
    if (!is_pt_symmetric(cfg, tol))
        throw Error(ErrorCode::NotPTSymmetric,
                    "requires equal radii and V2 = conj(V1)");
    return PTParams{cfg.material.V[0].real(), cfg.material.V[0].imag()};
}

// config ------------------------------------------------------------------

namespace {

cplx json_complex(const ordered_json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorCode::BadInput,
                    std::string(what) + " must be a [re, im] pair");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

Vec3 json_vec3(const ordered_json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw Error(ErrorCode::BadInput, std::string(what) + " must have 3 coordinates");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

} // namespace

Config parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::BadInput, std::string("config is not valid JSON: ") + e.what());
    }

    Config cfg;
    try {
        if (j.contains("lattice"))
            cfg.lattice.period = j["lattice"].value("period", 1.0);
        const auto& g = j.at("geometry");
        for (int i = 0; i < 2; ++i) {
            cfg.geometry.centers[i] = json_vec3(g.at("centers").at(i), "center");
            cfg.geometry.radii[i] = g.at("radii").at(i).get<double>();
        }
        const auto& m = j.at("material");
        for (int i = 0; i < 2; ++i)
            cfg.material.V[i] = json_complex(m.at("V").at(i), "material V");
        if (j.contains("defects")) {
            for (const auto& d : j["defects"]) {
                Defect df;
                df.site.cell = d.at("cell").get<int>();
                df.site.resonator = d.at("resonator").get<int>() - 1; // 1-based in file
                df.V_def = json_complex(d.at("V_def"), "V_def");
                cfg.defects.push_back(df);
            }
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::BadInput, std::string("config schema: ") + e.what());
    }
    validate_config(cfg);
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::BadInput, "cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const Config& cfg) {
    ordered_json j;
    j["lattice"] = {{"period", cfg.lattice.period}};
    ordered_json centers = ordered_json::array();
    ordered_json radii = ordered_json::array();
    for (int i = 0; i < 2; ++i) {
        const Vec3& c = cfg.geometry.centers[i];
        centers.push_back({c[0], c[1], c[2]});
        radii.push_back(cfg.geometry.radii[i]);
    }
    j["geometry"] = {{"centers", centers}, {"radii", radii}};
    ordered_json vs = ordered_json::array();
    for (int i = 0; i < 2; ++i)
        vs.push_back({cfg.material.V[i].real(), cfg.material.V[i].imag()});
    j["material"] = {{"V", vs}};
    ordered_json defects = ordered_json::array();
    for (const Defect& d : cfg.defects) {
        defects.push_back({{"cell", d.site.cell},
                           {"resonator", d.site.resonator + 1},
                           {"V_def", {d.V_def.real(), d.V_def.imag()}}});
    }
    j["defects"] = defects;
    return j.dump(2) + "\n";
}

// complex scalars ---------------------------------------------------------

cplx parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty())
        throw Error(ErrorCode::BadInput, "empty complex literal");

    auto parse_part = [&](std::string p, bool imag_unit) -> double {
        if (imag_unit) {
            if (p == "+" || p.empty()) p = "1";
            else if (p == "-") p = "-1";
        }
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(p, &used);
        } catch (const std::exception&) {
            throw Error(ErrorCode::BadInput, "bad complex literal: " + text);
        }
        if (used != p.size())
            throw Error(ErrorCode::BadInput, "bad complex literal: " + text);
        return v;
    };

    // split before the last +/- that is not an exponent sign and not leading
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }

    const bool has_i = (s.back() == 'i' || s.back() == 'I' || s.back() == 'j');
    if (!has_i) {
        if (split != std::string::npos) // "1+2" with no unit
            throw Error(ErrorCode::BadInput, "bad complex literal: " + text);
        return cplx(parse_part(s, false), 0.0);
    }

    std::string im_str = s.substr(split == std::string::npos ? 0 : split);
    im_str.pop_back(); // strip the unit
    if (split == std::string::npos)
        return cplx(0.0, parse_part(im_str, true));
    return cplx(parse_part(s.substr(0, split), false), parse_part(im_str, true));
}

std::string format_complex(cplx z) {
    if (z.imag() == 0.0) return format_double(z.real());
    std::string im = format_double(std::abs(z.imag())) + "i";
    std::string sign = std::signbit(z.imag()) ? "-" : "+";
    if (z.real() == 0.0) return (sign == "-" ? "-" : "") + im;
    return format_double(z.real()) + sign + im;
}

} // namespace subwave
