#pragma once

#include <cstddef>
#include <vector>

#include "backhaul/link_budget.hpp"
#include "backhaul/raster_io.hpp"

namespace backhaul {

inline constexpr double earth_radius_km = 6371.0;
inline constexpr double effective_earth_radius_km = 4.0 / 3.0 * earth_radius_km;

struct ProfileSample {
    double along_km = 0.0;
    double ground_m = 0.0;
};

// Ground cross-section between two antennas, first sample at 0 and last at total_km.
struct TerrainProfile {
    double total_km = 0.0;
    std::vector<ProfileSample> samples;

    double endpoint_a_ground_m() const { return samples.front().ground_m; }
    double endpoint_b_ground_m() const { return samples.back().ground_m; }

    // Throws ContractViolation when ordering or endpoint invariants fail.
    void validate() const;
    TerrainProfile reversed() const;
};

// Samples the DEM every step_m (evenly spaced, never coarser than step_m)
// from a to b inclusive. Nodata samples take the nearest valid sample value.
TerrainProfile extract_profile(const RasterGrid& dem, Point a, Point b, double step_m);
inline TerrainProfile extract_profile(const RasterGrid& dem, Point a, Point b) {
    return extract_profile(dem, a, b, dem.cellsize());
}

struct LosOptions {
    bool curvature = true;
    // Strict mode: lower the sight line by this fraction of the first Fresnel
    // radius (0.6 for the usual 60% rule). Requires frequency_ghz > 0.
    double fresnel_fraction = 0.0;
    double frequency_ghz = 0.0;
};

struct LosResult {
    bool visible = true;
    double max_intrusion_m = 0.0;
    double intrusion_at_km = 0.0;
};

// Earth bulge at a point d1/d2 km from the ends, metres.
double curvature_bulge_m(double d1_km, double d2_km);

// Amount (metres) by which effective terrain rises above the sight line at
// every sample; endpoints are always 0. Positive values intrude.
std::vector<double> intrusion_profile(const TerrainProfile& profile, double h_a_m, double h_b_m,
                                      const LosOptions& options);

// Visible iff effective terrain never rises above the sight line (grazing
// contact counts as visible).
LosResult line_of_sight(const TerrainProfile& profile, double h_a_m, double h_b_m, const LosOptions& options);
inline LosResult line_of_sight(const TerrainProfile& profile, double h_a_m, double h_b_m, bool curvature) {
    return line_of_sight(profile, h_a_m, h_b_m, LosOptions{curvature, 0.0, 0.0});
}

struct ObstructionCluster {
    double start_km = 0.0;
    double end_km = 0.0;
    double peak_km = 0.0;
    double peak_intrusion_m = 0.0;
    std::size_t peak_index = 0;
};

inline constexpr std::size_t default_cluster_merge_gap = 2;

// Maximal runs of intruding samples; runs separated by fewer than
// merge_gap clear samples are merged.
std::vector<ObstructionCluster> obstruction_clusters(const TerrainProfile& profile, double h_a_m, double h_b_m,
                                                     bool curvature,
                                                     std::size_t merge_gap = default_cluster_merge_gap);

struct KnifeEdge {
    bool eligible = false;
    std::size_t cluster_count = 0;
    double peak_km = 0.0;
    double deviation_deg = 0.0;  // at the worst cluster peak
};

// Deviation angle at `peak` between the rays antenna_a->peak and
// peak->antenna_b, in degrees, in the (along-metres, height) plane.
double deviation_angle_deg(double a_height_m, double peak_km, double peak_height_m, double total_km,
                           double b_height_m);

// Single-obstacle diffraction test. Throws ContractViolation on a visible profile.
KnifeEdge knife_edge_eligible(const TerrainProfile& profile, double h_a_m, double h_b_m, const NlosMargins& margins,
                              bool curvature, std::size_t merge_gap = default_cluster_merge_gap);

}  // namespace backhaul
