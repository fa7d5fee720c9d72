#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace backhaul {

// Transmitter/receiver chain. Power in dBm, gains and losses in dB.
struct RadioParams {
    double power_dbm = 0.0;
    double tx_gain_db = 0.0;
    double tx_loss_db = 0.0;
    double rx_gain_db = 0.0;
    double rx_loss_db = 0.0;

    // 20 W transmitter, 20 dB / 4 dB antennas at both ends.
    static RadioParams reference();
    void validate() const;
};

struct LinkGeometry {
    double distance_km = 0.0;
    double frequency_ghz = 0.0;

    void validate() const;
};

enum class RainClass { high, moderate, low };
enum class LinkMode { clos, nlos };
enum class Confidence { p50, p90, p99 };

std::string_view to_string(RainClass rain);
std::string_view to_string(LinkMode mode);
std::string_view to_string(Confidence confidence);
RainClass parse_rain_class(std::string_view text);
Confidence parse_confidence(std::string_view text);

// The more restrictive (shorter-range) of two rain classes.
RainClass worst_rain(RainClass a, RainClass b);

struct NlosMargins {
    static constexpr double max_diffraction_loss_db = 25.0;

    double diffraction_loss_db = 25.0;
    double planning_margin_db = 10.0;
    double max_deviation_deg = 3.0;

    double total_extra_loss_db() const { return diffraction_loss_db + planning_margin_db; }
    void validate() const;
};

inline constexpr double default_viability_threshold_dbm = -55.0;

double watts_to_dbm(double watts);

double eirp(const RadioParams& radio);
double fspl(const LinkGeometry& geom);
double received_power(const RadioParams& radio, const LinkGeometry& geom, double extra_loss_db = 0.0);
// Inclusive: rp == threshold is viable.
bool clos_viable(double rp_dbm, double threshold_dbm = default_viability_threshold_dbm);

// Radius of the first Fresnel zone at mid-path, 8.66·sqrt(D/f) metres.
double fresnel_max_radius(const LinkGeometry& geom);
// First-zone radius at d1 km from one antenna, 17.31·sqrt(d1·d2/(f·D)) metres.
double fresnel_radius_at(const LinkGeometry& geom, double d1_km);

double assign_frequency(double distance_km, LinkMode mode);
double max_link_distance(RainClass rain, LinkMode mode);

// Clearance heights above ground, indexed [distance bucket][frequency bucket][confidence].
struct FresnelClearanceTable {
    static constexpr std::array<std::string_view, 3> distance_labels = {"<10", "10-25", "25-45"};
    static constexpr std::array<double, 4> distance_edges_km = {0.0, 10.0, 25.0, 45.0};
    static constexpr std::array<std::string_view, 3> frequency_labels = {"6-8", "11-15", "15-18"};
    static constexpr std::array<std::array<std::array<double, 3>, 3>, 3> metres = {{
        {{{6.7, 9.4, 10.4}, {6.1, 7.5, 8.1}, {4.7, 6.6, 6.9}}},
        {{{13.2, 15.7, 17.0}, {10.1, 11.9, 12.6}, {9.0, 10.2, 11.0}}},
        {{{18.7, 21.0, 22.4}, {14.2, 16.1, 17.3}, {12.1, 13.3, 14.3}}},
    }};
};

// [0,10) -> 0, [10,25) -> 1, [25,45] -> 2. Throws RangeError outside (0,45].
std::size_t clearance_distance_bucket(double distance_km);
// [6,8] -> 0, [11,15] -> 1, (15,18] -> 2. Throws LookupError otherwise.
std::size_t clearance_frequency_bucket(double frequency_ghz);
double fresnel_clearance_lookup(double distance_km, double frequency_ghz, Confidence confidence);

}  // namespace backhaul
