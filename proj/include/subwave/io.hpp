#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subwave/capacitance.hpp"
#include "subwave/finite_oracle.hpp"
#include "subwave/spectral.hpp"

namespace subwave {

// Shortest round-trip decimal formatting; identical input => identical bytes.
std::string format_double(double x);

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);

// CSV exports ------------------------------------------------------------

// Columns: alpha, re/im lambda1, re/im lambda2, re/im omega1, re/im omega2.
std::string band_csv(const BandSample& bands);

// Row-major grid of |value| (clipped); one CSV row per im-axis line.
std::string heatmap_csv(const HeatmapResult& hm);
std::string heatmap_meta_json(const HeatmapResult& hm, const std::string& which);

// Columns: index, cell, resonator, re/im lambda, re/im omega, class, band_dist.
std::string spectrum_csv(const FiniteSpectrum& spec);

// Columns: cell, resonator, re/im component (one eigenvector).
std::string mode_csv(const FiniteSpectrum& spec, int index);

// Run manifest -----------------------------------------------------------

struct RunManifest {
    std::string command;
    std::string config_path;
    std::vector<std::string> arguments;
    std::map<std::string, std::string> tolerances;
    std::map<std::string, std::uint64_t> outputs; // file -> checksum
    double wall_seconds = 0.0;
    std::string version;
};

std::string manifest_json(const RunManifest& m);

// Writes content to dir/name and records its checksum in the manifest.
void emit_file(const std::string& dir, const std::string& name,
               const std::string& content, RunManifest& m);

// Recompute checksums of every file listed in a manifest; returns the names
// that mismatch or are missing.
std::vector<std::string> verify_manifest(const std::string& manifest_path);

} // namespace subwave
