#include <chrono>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subwave/config.hpp"
#include "subwave/design.hpp"
#include "subwave/finite_oracle.hpp"
#include "subwave/io.hpp"
#include "subwave/spectral.hpp"
#include "subwave/temporal.hpp"

namespace {

using namespace subwave;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

ordered_json json_cplx(cplx z) { return {z.real(), z.imag()}; }

ordered_json json_defect(int cell, int resonator0, cplx V) {
    return {{"cell", cell}, {"resonator", resonator0 + 1}, {"V_def", json_cplx(V)}};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_doubles(const std::string& s, std::size_t want,
                                  const char* what) {
    auto parts = split(s, ',');
    if (parts.size() != want)
        throw Error(ErrorCode::BadInput,
                    std::string(what) + ": expected " + std::to_string(want) +
                        " comma-separated numbers");
    std::vector<double> out;
    for (const auto& p : parts) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(p, &used));
            if (used != p.size()) throw std::invalid_argument(p);
        } catch (const std::exception&) {
            throw Error(ErrorCode::BadInput, std::string(what) + ": bad number " + p);
        }
    }
    return out;
}

struct OracleReport {
    ordered_json matches = ordered_json::array();
    FiniteSpectrum spectrum;
    std::vector<int> matched_indices;
};

// One finite-chain eigen run validating a set of designed defects against
// their targets; the reference for the classification margin is the target
// closest to the bands.
OracleReport run_oracle(int cells, const BandContext& ctx, const DefectSpec& defects,
                        const std::vector<cplx>& targets) {
    cplx ref = targets[0];
    double best = std::numeric_limits<double>::infinity();
    for (cplx t : targets) {
        double d = ctx.band_distance_sq(t * t);
        if (d < best) {
            best = d;
            ref = t;
        }
    }
    OracleReport rep;
    rep.spectrum = finite_spectrum(cells, ctx.geometry, ctx.lattice, ctx.material,
                                   defects, ctx.band_sample(), ref * ref);
    for (cplx t : targets) {
        int idx = match_eigenvalue(rep.spectrum, t * t);
        LocalizationReport loc = localization_report(rep.spectrum, idx);
        cplx omf = std::sqrt(rep.spectrum.eigenvalues[idx]);
        ordered_json m;
        m["target"] = json_cplx(t);
        m["finite_omega"] = json_cplx(omf);
        m["rel_error"] = std::abs(omf - t) / std::abs(t);
        m["band_dist"] = rep.spectrum.band_dist[idx];
        m["participation_ratio"] = loc.participation_ratio;
        m["mass_within_10"] = loc.mass_within.back();
        m["decay_rate"] = loc.decay_rate;
        rep.matches.push_back(m);
        rep.matched_indices.push_back(idx);
    }
    return rep;
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    int grid = 199;
    double sum_tol = 1e-10;
    double band_tol = 1e-6;
    double design_tol = 1e-8;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "model description (JSON)")
        ->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--grid", o.grid, "Brillouin-zone grid size");
    cmd->add_option("--sum-tol", o.sum_tol, "lattice-sum tolerance");
    cmd->add_option("--band-tol", o.band_tol, "band proximity refusal margin");
    cmd->add_option("--design-tol", o.design_tol, "back-substitution gate");
}

RunManifest start_manifest(const std::string& command, const CommonOpts& o,
                           int argc, char** argv) {
    RunManifest m;
    m.command = command;
    m.config_path = o.config_path;
    for (int i = 1; i < argc; ++i) m.arguments.push_back(argv[i]);
    m.tolerances["sum_tol"] = format_double(o.sum_tol);
    m.tolerances["band_tol"] = format_double(o.band_tol);
    m.tolerances["design_tol"] = format_double(o.design_tol);
    m.version = kVersion;
    return m;
}

void finish_manifest(RunManifest& m, const CommonOpts& o,
                     std::chrono::steady_clock::time_point t0) {
    m.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string text = manifest_json(m);
    RunManifest scratch;
    emit_file(o.out_dir, "manifest.json", text, scratch);
    std::cout << "wrote " << o.out_dir << "/manifest.json ("
              << m.outputs.size() << " outputs)\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subwavelength resonator-chain spectra and defect design"};
    app.footer("Environment: SUBWAVE_THREADS overrides the worker-thread count.");
    app.require_subcommand(0, 1);

    std::string check_path;
    app.add_option("--check", check_path,
                   "verify the checksums of a previous run's manifest");

    // band ---------------------------------------------------------------
    CommonOpts band_o;
    CLI::App* band_cmd = app.add_subcommand("band", "band structure over the Brillouin zone");
    add_common(band_cmd, band_o);

    // heatmap ------------------------------------------------------------
    CommonOpts hm_o;
    std::string hm_which = "single", hm_window, hm_res = "100,100", hm_v1def, hm_v2def;
    double hm_clip = 0.0;
    CLI::App* hm_cmd = app.add_subcommand("heatmap", "|characteristic| over a frequency window");
    add_common(hm_cmd, hm_o);
    hm_cmd->add_option("--which", hm_which, "pt-loss | pt-gain | single | double")
        ->check(CLI::IsMember({"pt-loss", "pt-gain", "single", "double"}));
    hm_cmd->add_option("--window", hm_window, "re_min,re_max,im_min,im_max")->required();
    hm_cmd->add_option("--res", hm_res, "nx,ny grid resolution");
    hm_cmd->add_option("--clip", hm_clip, "clip |value| at this level (0 = off)");
    hm_cmd->add_option("--v1def", hm_v1def, "defect V on resonator 1 (e.g. 1.2-0.4i)");
    hm_cmd->add_option("--v2def", hm_v2def, "defect V on resonator 2 (double only)");

    // design -------------------------------------------------------------
    CommonOpts ds_o;
    std::string ds_targets, ds_mode = "auto", ds_sites;
    int ds_validate = 0;
    CLI::App* ds_cmd = app.add_subcommand("design", "defect parameters for target frequencies");
    add_common(ds_cmd, ds_o);
    ds_cmd->add_option("--targets", ds_targets,
                       "comma-separated complex frequencies (e.g. 1-0.4i,1.2-1i)")
        ->required();
    ds_cmd->add_option("--mode", ds_mode, "single | double | n (default: by target count)")
        ->check(CLI::IsMember({"auto", "single", "double", "n"}));
    ds_cmd->add_option("--sites", ds_sites,
                       "defect sites as cell:resonator,... (n mode; resonator 1-based)");
    ds_cmd->add_option("--validate", ds_validate,
                       "run the finite-chain oracle with this many cells");

    // temporal -----------------------------------------------------------
    CommonOpts tp_o;
    std::string tp_minus, tp_plus;
    bool tp_st = false;
    int tp_cells = 100;
    CLI::App* tp_cmd = app.add_subcommand("temporal", "defect design across a material switch");
    add_common(tp_cmd, tp_o);
    tp_cmd->add_option("--omega-minus", tp_minus, "pre-switch frequency")->required();
    tp_cmd->add_option("--omega-plus", tp_plus, "post-switch frequency")->required();
    tp_cmd->add_flag("--spatiotemporal", tp_st,
                     "enforce half-plane signs and certify spatial localization");
    tp_cmd->add_option("--cells", tp_cells, "oracle chain length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (!check_path.empty()) {
            std::vector<std::string> bad = verify_manifest(check_path);
            if (bad.empty()) {
                std::cout << "manifest OK\n";
                return 0;
            }
            for (const auto& name : bad)
                std::cerr << "checksum mismatch: " << name << "\n";
            throw Error(ErrorCode::VerificationFailed,
                        std::to_string(bad.size()) + " output(s) changed");
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 2;
        }

        if (band_cmd->parsed()) {
            Config cfg = load_config(band_o.config_path);
            BandSample bands = band_structure(band_o.grid, cfg.geometry, cfg.lattice,
                                              cfg.material, band_o.sum_tol);
            RunManifest m = start_manifest("band", band_o, argc, argv);
            emit_file(band_o.out_dir, "band.csv", band_csv(bands), m);
            finish_manifest(m, band_o, t0);
            return 0;
        }

        if (hm_cmd->parsed()) {
            Config cfg = load_config(hm_o.config_path);
            auto w = parse_doubles(hm_window, 4, "--window");
            auto res = split(hm_res, ',');
            HeatmapWindow win;
            win.re_min = w[0];
            win.re_max = w[1];
            win.im_min = w[2];
            win.im_max = w[3];
            try {
                win.nx = std::stoi(res[0]);
                win.ny = std::stoi(res.size() > 1 ? res[1] : res[0]);
            } catch (const std::exception&) {
                throw Error(ErrorCode::BadInput, "--res: bad resolution");
            }

            BandContext ctx = make_band_context(cfg.geometry, cfg.lattice,
                                                cfg.material, hm_o.grid, hm_o.sum_tol);
            std::function<cplx(cplx)> fn;
            if (hm_which == "pt-loss" || hm_which == "pt-gain") {
                if (!hm_v1def.empty() || !hm_v2def.empty())
                    throw Error(ErrorCode::BadInput,
                                hm_which + " fixes the defect; drop --v1def/--v2def");
                bool loss = hm_which == "pt-loss";
                fn = [&, loss](cplx om) {
                    return loss ? characteristic_pt_loss(om, ctx, hm_o.band_tol)
                                : characteristic_pt_gain(om, ctx, hm_o.band_tol);
                };
            } else if (hm_which == "single") {
                if (hm_v1def.empty())
                    throw Error(ErrorCode::BadInput, "single needs --v1def");
                cplx v1 = parse_complex(hm_v1def);
                fn = [&, v1](cplx om) {
                    return characteristic_single(om, v1, ctx, hm_o.band_tol);
                };
            } else {
                if (hm_v1def.empty() || hm_v2def.empty())
                    throw Error(ErrorCode::BadInput, "double needs --v1def and --v2def");
                cplx v1 = parse_complex(hm_v1def), v2 = parse_complex(hm_v2def);
                fn = [&, v1, v2](cplx om) {
                    return characteristic_double(om, v1, v2, ctx, hm_o.band_tol);
                };
            }
            HeatmapResult hm = heatmap(fn, win, hm_clip, ctx);
            RunManifest m = start_manifest("heatmap", hm_o, argc, argv);
            emit_file(hm_o.out_dir, "heatmap.csv", heatmap_csv(hm), m);
            emit_file(hm_o.out_dir, "heatmap_meta.json", heatmap_meta_json(hm, hm_which), m);
            finish_manifest(m, hm_o, t0);
            return 0;
        }

        if (ds_cmd->parsed()) {
            Config cfg = load_config(ds_o.config_path);
            std::vector<cplx> targets;
            for (const auto& t : split(ds_targets, ','))
                targets.push_back(parse_complex(t));
            std::string mode = ds_mode;
            if (mode == "auto")
                mode = targets.size() == 1 ? "single"
                     : targets.size() == 2 ? "double"
                                           : "n";
            if (ds_validate != 0 && ds_validate < 10)
                throw Error(ErrorCode::BadInput, "--validate needs at least 10 cells");

            BandContext ctx = make_band_context(cfg.geometry, cfg.lattice,
                                                cfg.material, ds_o.grid, ds_o.sum_tol);
            ordered_json j;
            j["mode"] = mode;
            ordered_json tj = ordered_json::array();
            for (cplx t : targets) tj.push_back(json_cplx(t));
            j["targets"] = tj;

            DefectSpec defects;
            if (mode == "single") {
                if (targets.size() != 1)
                    throw Error(ErrorCode::BadInput, "single mode takes one target");
                SingleDesign d = design_single(targets[0], ctx, ds_o.band_tol,
                                               ds_o.design_tol);
                j["block_integral"] = json_cplx(d.J);
                j["residual"] = d.residual;
                j["defects"] = {json_defect(0, 0, d.V1_def)};
                defects.push_back({DefectSite{0, 0}, d.V1_def});
            } else if (mode == "double") {
                if (targets.size() != 2)
                    throw Error(ErrorCode::BadInput, "double mode takes two targets");
                DoubleDesign d = design_double(targets[0], targets[1], ctx,
                                               ds_o.band_tol, ds_o.design_tol);
                ordered_json roots = ordered_json::array();
                for (const DoubleDesignRoot& r : d.roots) {
                    roots.push_back({{"V1_def", json_cplx(r.V1_def)},
                                     {"V2_def", json_cplx(r.V2_def)},
                                     {"residual1", r.residual1},
                                     {"residual2", r.residual2},
                                     {"x2_consistency", r.x2_consistency}});
                }
                j["roots"] = roots;
                j["primary"] = d.primary;
                const DoubleDesignRoot& p = d.roots[d.primary];
                j["defects"] = {json_defect(0, 0, p.V1_def), json_defect(0, 1, p.V2_def)};
                defects.push_back({DefectSite{0, 0}, p.V1_def});
                defects.push_back({DefectSite{0, 1}, p.V2_def});
            } else {
                if (ds_sites.empty())
                    throw Error(ErrorCode::BadInput, "n mode needs --sites");
                std::vector<DefectSite> sites;
                for (const auto& s : split(ds_sites, ',')) {
                    auto parts = split(s, ':');
                    if (parts.size() != 2)
                        throw Error(ErrorCode::BadInput, "--sites: expected cell:resonator");
                    try {
                        sites.push_back(DefectSite{std::stoi(parts[0]),
                                                   std::stoi(parts[1]) - 1});
                    } catch (const std::exception&) {
                        throw Error(ErrorCode::BadInput, "--sites: bad index in " + s);
                    }
                }
                MultiDesign d = design_defects(targets, sites, ctx, std::nullopt,
                                               ds_o.band_tol);
                ordered_json dj = ordered_json::array();
                for (std::size_t s = 0; s < sites.size(); ++s) {
                    dj.push_back(json_defect(sites[s].cell, sites[s].resonator,
                                             d.V_def[s]));
                    defects.push_back({sites[s], d.V_def[s]});
                }
                j["defects"] = dj;
                j["residuals"] = d.residuals;
                j["iterations"] = d.iterations;
            }

            RunManifest m = start_manifest("design", ds_o, argc, argv);
            if (ds_validate > 0) {
                OracleReport rep = run_oracle(ds_validate, ctx, defects, targets);
                j["oracle"] = {{"cells", ds_validate}, {"matches", rep.matches}};
                emit_file(ds_o.out_dir, "oracle_spectrum.csv",
                          spectrum_csv(rep.spectrum), m);
                for (std::size_t k = 0; k < rep.matched_indices.size(); ++k)
                    emit_file(ds_o.out_dir,
                              "oracle_mode_" + std::to_string(k + 1) + ".csv",
                              mode_csv(rep.spectrum, rep.matched_indices[k]), m);
            }
            emit_file(ds_o.out_dir, "design.json", j.dump(2) + "\n", m);
            finish_manifest(m, ds_o, t0);
            return 0;
        }

        if (tp_cmd->parsed()) {
            Config cfg = load_config(tp_o.config_path);
            cplx om_minus = parse_complex(tp_minus);
            cplx om_plus = parse_complex(tp_plus);
            BandContext ctx = make_band_context(cfg.geometry, cfg.lattice,
                                                cfg.material, tp_o.grid, tp_o.sum_tol);
            ordered_json j;
            j["omega_minus"] = json_cplx(om_minus);
            j["omega_plus"] = json_cplx(om_plus);

            RunManifest m = start_manifest("temporal", tp_o, argc, argv);
            TemporalDesign td;
            if (tp_st) {
                SpatioTemporalDesign sd = design_spatiotemporal(
                    om_minus, om_plus, ctx, tp_cells, tp_o.band_tol, tp_o.design_tol);
                td = sd.temporal;
                j["spatiotemporal"] = {
                    {"temporal_localized", sd.temporal_localized},
                    {"spatial_localized", sd.spatial_localized},
                    {"finite_eigenvalue", json_cplx(sd.finite_eigenvalue)},
                    {"finite_omega", json_cplx(std::sqrt(sd.finite_eigenvalue))},
                    {"participation_ratio", sd.localization.participation_ratio},
                    {"mass_within_10", sd.localization.mass_within.back()},
                    {"decay_rate", sd.localization.decay_rate},
                };
                DefectSpec defects{Defect{DefectSite{0, 0}, td.stationary.V1_def}};
                FiniteSpectrum spec = finite_spectrum(
                    tp_cells, ctx.geometry, ctx.lattice, ctx.material, defects,
                    ctx.band_sample(), om_minus * om_minus);
                int idx = match_eigenvalue(spec, om_minus * om_minus);
                emit_file(tp_o.out_dir, "oracle_spectrum.csv", spectrum_csv(spec), m);
                emit_file(tp_o.out_dir, "oracle_mode.csv", mode_csv(spec, idx), m);
            } else {
                td = design_temporal(om_minus, om_plus, ctx, tp_o.band_tol,
                                     tp_o.design_tol);
            }
            SnellCheck snell = snell_check(om_minus, om_plus,
                                           td.switched.kappa_ratio(),
                                           td.switched.rho_ratio());
            j["b"] = json_cplx(td.b);
            j["pre"] = {{"V", {json_cplx(td.switched.pre.V[0]),
                               json_cplx(td.switched.pre.V[1])}},
                        {"defects", {json_defect(0, 0, td.stationary.V1_def)}}};
            j["post"] = {{"V", {json_cplx(td.switched.post.V[0]),
                                json_cplx(td.switched.post.V[1])}},
                         {"defects", {json_defect(0, 0, td.switched.post_defects[0].V_def)}}};
            j["residual_pre"] = td.residual_pre;
            j["residual_post"] = td.residual_post;
            j["snell"] = {{"ok", snell.ok},
                          {"res_kappa", snell.res_kappa},
                          {"res_rho", snell.res_rho}};
            emit_file(tp_o.out_dir, "temporal.json", j.dump(2) + "\n", m);
            finish_manifest(m, tp_o, t0);
            return 0;
        }

        std::cerr << app.help();
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
}
