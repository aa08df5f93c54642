#include "subwave/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace subwave {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::BadInput, "cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string s = buf.str();
    return fnv1a64(s.data(), s.size());
}

namespace {

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

void append_cplx(std::string& row, cplx z) {
    row += ',';
    row += format_double(z.real());
    row += ',';
    row += format_double(z.imag());
}

} // namespace

std::string band_csv(const BandSample& bands) {
    std::string out = "alpha,re_lambda1,im_lambda1,re_lambda2,im_lambda2,"
                      "re_omega1,im_omega1,re_omega2,im_omega2\n";
    for (std::size_t k = 0; k < bands.alphas.size(); ++k) {
        std::string row = format_double(bands.alphas[k]);
        append_cplx(row, bands.lambda[k][0]);
        append_cplx(row, bands.lambda[k][1]);
        append_cplx(row, bands.omega[k][0]);
        append_cplx(row, bands.omega[k][1]);
        out += row;
        out += '\n';
    }
    return out;
}

std::string heatmap_csv(const HeatmapResult& hm) {
    std::string out;
    for (int iy = 0; iy < hm.window.ny; ++iy) {
        std::string row;
        for (int ix = 0; ix < hm.window.nx; ++ix) {
            if (ix) row += ',';
            row += format_double(hm.values[static_cast<std::size_t>(iy) * hm.window.nx + ix]);
        }
        out += row;
        out += '\n';
    }
    return out;
}

std::string heatmap_meta_json(const HeatmapResult& hm, const std::string& which) {
    ordered_json j;
    j["characteristic"] = which;
    j["window"] = {{"re_min", hm.window.re_min}, {"re_max", hm.window.re_max},
                   {"im_min", hm.window.im_min}, {"im_max", hm.window.im_max}};
    j["resolution"] = {hm.window.nx, hm.window.ny};
    j["clip"] = hm.clip;
    ordered_json flagged = ordered_json::array();
    for (int iy = 0; iy < hm.window.ny; ++iy)
        for (int ix = 0; ix < hm.window.nx; ++ix)
            if (hm.on_band[static_cast<std::size_t>(iy) * hm.window.nx + ix])
                flagged.push_back({ix, iy});
    j["on_band_pixels"] = flagged;
    ordered_json overlay = ordered_json::array();
    for (cplx w : hm.band_overlay) overlay.push_back({w.real(), w.imag()});
    j["band_overlay"] = overlay;
    return j.dump(2) + "\n";
}

namespace {

const char* class_name(ModeClass c) {
    switch (c) {
    case ModeClass::Bulk: return "bulk";
    case ModeClass::Defect: return "defect";
    case ModeClass::Edge: return "edge";
    }
    return "?";
}

} // namespace

std::string spectrum_csv(const FiniteSpectrum& spec) {
    std::string out = "index,cell,resonator,re_lambda,im_lambda,"
                      "re_omega,im_omega,class,band_dist\n";
    const int n2 = static_cast<int>(spec.eigenvalues.size());
    for (int k = 0; k < n2; ++k) {
        // dominant site of the eigenvector
        int r_max = 0;
        double m_max = -1.0;
        for (int r = 0; r < n2; ++r) {
            double m = std::norm(spec.eigenvectors(r, k));
            if (m > m_max) {
                m_max = m;
                r_max = r;
            }
        }
        cplx lam = spec.eigenvalues[k];
        cplx om = std::sqrt(lam);
        std::string row = std::to_string(k);
        row += ',' + std::to_string(spec.cells[r_max / 2]);
        row += ',' + std::to_string(r_max % 2 + 1);
        append_cplx(row, lam);
        append_cplx(row, om);
        row += ',';
        row += class_name(spec.classes[k]);
        row += ',';
        row += format_double(spec.band_dist[k]);
        out += row;
        out += '\n';
    }
    return out;
}

std::string mode_csv(const FiniteSpectrum& spec, int index) {
    if (index < 0 || index >= static_cast<int>(spec.eigenvalues.size()))
        throw Error(ErrorCode::BadInput, "eigenvalue index out of range");
    std::string out = "cell,resonator,re,im\n";
    const int n2 = static_cast<int>(spec.eigenvalues.size());
    for (int r = 0; r < n2; ++r) {
        cplx v = spec.eigenvectors(r, index);
        std::string row = std::to_string(spec.cells[r / 2]);
        row += ',' + std::to_string(r % 2 + 1);
        append_cplx(row, v);
        out += row;
        out += '\n';
    }
    return out;
}

std::string manifest_json(const RunManifest& m) {
    ordered_json j;
    j["command"] = m.command;
    j["config"] = m.config_path;
    j["arguments"] = m.arguments;
    ordered_json tols = ordered_json::object();
    for (const auto& [k, v] : m.tolerances) tols[k] = v;
    j["tolerances"] = tols;
    ordered_json outs = ordered_json::object();
    for (const auto& [name, sum] : m.outputs) outs[name] = "fnv1a64:" + hex16(sum);
    j["outputs"] = outs;
    j["wall_seconds"] = m.wall_seconds;
    j["version"] = m.version;
    return j.dump(2) + "\n";
}

void emit_file(const std::string& dir, const std::string& name,
               const std::string& content, RunManifest& m) {
    std::filesystem::create_directories(dir);
    std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::BadInput, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out)
        throw Error(ErrorCode::BadInput, "short write to " + path.string());
    m.outputs[name] = fnv1a64(content.data(), content.size());
}

std::vector<std::string> verify_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::BadInput, "cannot open manifest: " + manifest_path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::BadInput, std::string("bad manifest: ") + e.what());
    }
    std::filesystem::path dir = std::filesystem::path(manifest_path).parent_path();
    std::vector<std::string> bad;
    for (const auto& [name, val] : j.at("outputs").items()) {
        std::string expect = val.get<std::string>();
        std::filesystem::path file = dir / name;
        std::error_code ec;
        if (!std::filesystem::exists(file, ec)) {
            bad.push_back(name);
            continue;
        }
        std::uint64_t sum = fnv1a64_file(file.string());
        if (expect != "fnv1a64:" + hex16(sum)) bad.push_back(name);
    }
    return bad;
}

} // namespace subwave
