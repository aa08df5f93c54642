#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "subwave/capacitance.hpp"
#include "subwave/config.hpp"

// Reference chain used throughout: PT-symmetric dimer, R = 0.15,
// centers at 0.25/0.75, L = 1, V = 1 +- 0.6i.
inline subwave::Config pt_config() {
    subwave::Config cfg;
    cfg.lattice.period = 1.0;
    cfg.geometry.centers = {subwave::Vec3(0.25, 0, 0), subwave::Vec3(0.75, 0, 0)};
    cfg.geometry.radii = {0.15, 0.15};
    cfg.material.V = {subwave::cplx(1.0, 0.6), subwave::cplx(1.0, -0.6)};
    return cfg;
}

inline const subwave::BandContext& pt_context(int grid = 199) {
    static std::map<int, subwave::BandContext> cache;
    auto it = cache.find(grid);
    if (it == cache.end()) {
        subwave::Config cfg = pt_config();
        it = cache.emplace(grid, subwave::make_band_context(cfg.geometry, cfg.lattice,
                                                            cfg.material, grid))
                 .first;
    }
    return it->second;
}

template <typename F>
std::optional<subwave::ErrorCode> thrown_code(F&& f) {
    try {
        f();
    } catch (const subwave::Error& e) {
        return e.code();
    } catch (...) {
        return std::nullopt;
    }
    return std::nullopt;
}

// Deterministic LCG so random-property tests are reproducible.
struct TestRng {
    std::uint64_t s;
    explicit TestRng(std::uint64_t seed) : s(seed) {}
    double next() { // uniform in [0, 1)
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(s >> 11) / 9007199254740992.0;
    }
    double range(double lo, double hi) { return lo + (hi - lo) * next(); }
};
