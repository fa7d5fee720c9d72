#include "backhaul/viewshed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "backhaul/errors.hpp"
#include "backhaul/format.hpp"

namespace backhaul {

void TerrainProfile::validate() const {
    if (samples.size() < 2) throw ContractViolation("terrain profile needs at least two samples");
    if (samples.front().along_km != 0.0 || samples.back().along_km != total_km) {
        throw ContractViolation("terrain profile must start at 0 and end at total_km");
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].along_km < samples[i - 1].along_km) throw ContractViolation("terrain profile samples unsorted");
    }
}

TerrainProfile TerrainProfile::reversed() const {
    TerrainProfile out;
    out.total_km = total_km;
    out.samples.reserve(samples.size());
    for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
        out.samples.push_back({total_km - it->along_km, it->ground_m});
    }
    out.samples.front().along_km = 0.0;
    out.samples.back().along_km = total_km;
    return out;
}

TerrainProfile extract_profile(const RasterGrid& dem, Point a, Point b, double step_m) {
    if (!(step_m > 0.0)) throw ContractViolation("profile step must be positive");
    const double length_m = distance_m(a, b);
    if (!(length_m > 0.0)) throw ContractViolation("profile endpoints coincide");
    for (Point p : {a, b}) {
        if (!dem.header().contains(p)) {
            throw OutOfBoundsError("profile endpoint (" + format_number(p.x) + ", " + format_number(p.y) +
                                   ") lies outside the DEM");
        }
    }

    const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(length_m / step_m - 1e-9)));
    const double n = static_cast<double>(intervals);
    std::vector<std::optional<double>> raw(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double t = static_cast<double>(i) / n;
        const Point p = i == intervals ? b : Point{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
        raw[i] = dem.sample_at(p);
    }

    TerrainProfile profile;
    profile.total_km = length_m / 1000.0;
    profile.samples.resize(raw.size());
    bool any_valid = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        profile.samples[i].along_km = i == intervals ? profile.total_km : profile.total_km * static_cast<double>(i) / n;
        if (raw[i]) {
            profile.samples[i].ground_m = *raw[i];
            any_valid = true;
            continue;
        }
        // nearest valid sample along the profile, earlier one on ties
        for (std::size_t off = 1; off < raw.size(); ++off) {
            if (off <= i && raw[i - off]) {
                profile.samples[i].ground_m = *raw[i - off];
                break;
            }
            if (i + off < raw.size() && raw[i + off]) {
                profile.samples[i].ground_m = *raw[i + off];
                break;
            }
        }
    }
    if (!any_valid) throw MissingDataError("terrain profile crosses only nodata cells");
    return profile;
}

double curvature_bulge_m(double d1_km, double d2_km) { return d1_km * d2_km / (2.0 * effective_earth_radius_km) * 1000.0; }

std::vector<double> intrusion_profile(const TerrainProfile& profile, double h_a_m, double h_b_m,
                                      const LosOptions& options) {
    if (h_a_m < 0.0 || h_b_m < 0.0) throw ContractViolation("tower heights must be non-negative");
    if (options.fresnel_fraction > 0.0 && !(options.frequency_ghz > 0.0)) {
        throw ContractViolation("Fresnel-strict line of sight needs a frequency");
    }
    const auto& s = profile.samples;
    const double total = profile.total_km;
    const double top_a = profile.endpoint_a_ground_m() + h_a_m;
    const double top_b = profile.endpoint_b_ground_m() + h_b_m;

    std::vector<double> out(s.size(), 0.0);
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const double d1 = s[i].along_km;
        const double d2 = total - d1;
        double line = top_a + (top_b - top_a) * (d1 / total);
        if (options.fresnel_fraction > 0.0) {
            line -= options.fresnel_fraction * fresnel_radius_at({total, options.frequency_ghz}, std::clamp(d1, 0.0, total));
        }
        const double terrain = s[i].ground_m + (options.curvature ? curvature_bulge_m(d1, d2) : 0.0);
        out[i] = terrain - line;
    }
    return out;
}

LosResult line_of_sight(const TerrainProfile& profile, double h_a_m, double h_b_m, const LosOptions& options) {
    const auto intrusion = intrusion_profile(profile, h_a_m, h_b_m, options);
    LosResult result;
    for (std::size_t i = 0; i < intrusion.size(); ++i) {
        if (intrusion[i] > result.max_intrusion_m) {
            result.visible = false;
            result.max_intrusion_m = intrusion[i];
            result.intrusion_at_km = profile.samples[i].along_km;
        }
    }
    return result;
}

std::vector<ObstructionCluster> obstruction_clusters(const TerrainProfile& profile, double h_a_m, double h_b_m,
                                                     bool curvature, std::size_t merge_gap) {
    const auto intrusion = intrusion_profile(profile, h_a_m, h_b_m, LosOptions{curvature, 0.0, 0.0});
    std::vector<ObstructionCluster> clusters;
    std::size_t last_hit = 0;
    bool open = false;
    for (std::size_t i = 0; i < intrusion.size(); ++i) {
        if (!(intrusion[i] > 0.0)) continue;
        const double km = profile.samples[i].along_km;
        const bool extend = open && (i - last_hit - 1) < merge_gap;
        if (!extend) {
            clusters.push_back({km, km, km, intrusion[i], i});
            open = true;
        } else {
            auto& c = clusters.back();
            c.end_km = km;
            if (intrusion[i] > c.peak_intrusion_m) {
                c.peak_intrusion_m = intrusion[i];
                c.peak_km = km;
                c.peak_index = i;
            }
        }
        last_hit = i;
    }
    return clusters;
}

double deviation_angle_deg(double a_height_m, double peak_km, double peak_height_m, double total_km,
                           double b_height_m) {
    const double ux = peak_km * 1000.0;
    const double uy = peak_height_m - a_height_m;
    const double vx = (total_km - peak_km) * 1000.0;
    const double vy = b_height_m - peak_height_m;
    const double cross = ux * vy - uy * vx;
    const double dot = ux * vx + uy * vy;
    return std::atan2(std::abs(cross), dot) * 180.0 / std::numbers::pi;
}

KnifeEdge knife_edge_eligible(const TerrainProfile& profile, double h_a_m, double h_b_m, const NlosMargins& margins,
                              bool curvature, std::size_t merge_gap) {
    const auto clusters = obstruction_clusters(profile, h_a_m, h_b_m, curvature, merge_gap);
    if (clusters.empty()) throw ContractViolation("knife-edge test called on a visible profile");

    const auto worst = std::max_element(clusters.begin(), clusters.end(), [](const auto& l, const auto& r) {
        return l.peak_intrusion_m < r.peak_intrusion_m;
    });
    const auto& s = profile.samples[worst->peak_index];
    const double peak_height = s.ground_m + (curvature ? curvature_bulge_m(s.along_km, profile.total_km - s.along_km) : 0.0);

    KnifeEdge out;
    out.cluster_count = clusters.size();
    out.peak_km = worst->peak_km;
    out.deviation_deg = deviation_angle_deg(profile.endpoint_a_ground_m() + h_a_m, s.along_km, peak_height,
                                            profile.total_km, profile.endpoint_b_ground_m() + h_b_m);
    out.eligible = clusters.size() == 1 && out.deviation_deg <= margins.max_deviation_deg;
    return out;
}

}  // namespace backhaul
