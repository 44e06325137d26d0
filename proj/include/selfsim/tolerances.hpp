#pragma once

namespace selfsim {

// Central record of every floating-point tolerance used by the library.
// Exact algebraic identities (round trips, group laws) are held to
// algebraic_rel; geometric and linear-algebra decisions carry their own
// documented bands.
struct Tolerances {
    double algebraic_rel = 1e-12;     // relative, for exact algebraic identities
    double unit_norm_abs = 1e-12;     // spectral atom norms, weight sums
    double symmetry_abs = 1e-12;      // matrix symmetry check
    double psd_floor = -1e-10;        // eigenvalue floor for PSD acceptance
    double rank_rel = 1e-10;          // singular values below rank_rel * max count as zero
    double lp_interior = 1e-10;       // separating-direction LP decision band
    double grid_match_rel = 1e-12;    // matching a requested time to a grid entry
    double min_radius_guard = 1e-9;   // default winding guard radius
};

inline const Tolerances& tolerances() {
    static const Tolerances t;
    return t;
}

}  // namespace selfsim
