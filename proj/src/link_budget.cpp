#include "backhaul/link_budget.hpp"

#include <cmath>
#include <string>

#include "backhaul/errors.hpp"
#include "backhaul/format.hpp"

namespace backhaul {

RadioParams RadioParams::reference() {
    return RadioParams{watts_to_dbm(20.0), 20.0, 4.0, 20.0, 4.0};
}

void RadioParams::validate() const {
    if (!std::isfinite(power_dbm)) throw ConfigError("transmit power must be finite");
    if (tx_gain_db < 0 || tx_loss_db < 0 || rx_gain_db < 0 || rx_loss_db < 0) {
        throw ConfigError("antenna gains and losses must be non-negative");
    }
}

void LinkGeometry::validate() const {
    if (!(distance_km > 0.0)) throw RangeError("link distance must be positive, got " + format_number(distance_km));
    if (!(frequency_ghz > 0.0)) throw RangeError("frequency must be positive, got " + format_number(frequency_ghz));
}

void NlosMargins::validate() const {
    if (diffraction_loss_db < 0 || planning_margin_db < 0 || max_deviation_deg < 0) {
        throw ConfigError("NLOS margins must be non-negative");
    }
    if (diffraction_loss_db > max_diffraction_loss_db) throw ConfigError("diffraction loss is capped at 25 dB");
}

std::string_view to_string(RainClass rain) {
    switch (rain) {
        case RainClass::high: return "high";
        case RainClass::moderate: return "moderate";
        case RainClass::low: return "low";
    }
    return "?";
}

std::string_view to_string(LinkMode mode) { return mode == LinkMode::clos ? "clos" : "nlos"; }

std::string_view to_string(Confidence confidence) {
    switch (confidence) {
        case Confidence::p50: return "p50";
        case Confidence::p90: return "p90";
        case Confidence::p99: return "p99";
    }
    return "?";
}

RainClass parse_rain_class(std::string_view text) {
    if (text == "high") return RainClass::high;
    if (text == "moderate") return RainClass::moderate;
    if (text == "low") return RainClass::low;
    throw ParseError("unknown rain class '" + std::string(text) + "'");
}

Confidence parse_confidence(std::string_view text) {
    if (text == "p50") return Confidence::p50;
    if (text == "p90") return Confidence::p90;
    if (text == "p99") return Confidence::p99;
    throw ConfigError("unknown confidence level '" + std::string(text) + "' (expected p50, p90 or p99)");
}

RainClass worst_rain(RainClass a, RainClass b) {
    // enum order is most to least restrictive
    return static_cast<int>(a) < static_cast<int>(b) ? a : b;
}

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

double eirp(const RadioParams& radio) { return radio.power_dbm + radio.tx_gain_db - radio.tx_loss_db; }

double fspl(const LinkGeometry& geom) {
    return 20.0 * std::log10(geom.distance_km) + 20.0 * std::log10(geom.frequency_ghz) + 32.44;
}

double received_power(const RadioParams& radio, const LinkGeometry& geom, double extra_loss_db) {
    return eirp(radio) - fspl(geom) + radio.rx_gain_db - radio.rx_loss_db - extra_loss_db;
}

bool clos_viable(double rp_dbm, double threshold_dbm) { return rp_dbm >= threshold_dbm; }

double fresnel_max_radius(const LinkGeometry& geom) { return 8.66 * std::sqrt(geom.distance_km / geom.frequency_ghz); }

double fresnel_radius_at(const LinkGeometry& geom, double d1_km) {
    if (d1_km < 0.0 || d1_km > geom.distance_km) {
        throw RangeError("fresnel_radius_at: d1 " + format_number(d1_km) + " km outside [0, " +
                         format_number(geom.distance_km) + "]");
    }
    const double d2_km = geom.distance_km - d1_km;
    return 17.31 * std::sqrt(d1_km * d2_km / (geom.frequency_ghz * geom.distance_km));
}

double assign_frequency(double distance_km, LinkMode mode) {
    if (!(distance_km > 0.0)) throw RangeError("link distance must be positive");
    if (mode == LinkMode::clos) {
        if (distance_km > 45.0) throw InfeasibleLinkError("CLOS link of " + format_number(distance_km) + " km exceeds 45 km");
        if (distance_km < 10.0) return 18.0;
        if (distance_km < 25.0) return 15.0;
        return 8.0;
    }
    if (distance_km > 15.0) throw InfeasibleLinkError("NLOS link of " + format_number(distance_km) + " km exceeds 15 km");
    if (distance_km < 5.0) return 18.0;
    if (distance_km < 10.0) return 15.0;
    return 8.0;
}

double max_link_distance(RainClass rain, LinkMode mode) {
    static constexpr double clos[] = {15.0, 30.0, 45.0};
    static constexpr double nlos[] = {5.0, 10.0, 15.0};
    const auto i = static_cast<std::size_t>(rain);
    return mode == LinkMode::clos ? clos[i] : nlos[i];
}

std::size_t clearance_distance_bucket(double distance_km) {
    if (!(distance_km > 0.0) || distance_km > 45.0) {
        throw RangeError("clearance lookup distance " + format_number(distance_km) + " km outside (0, 45]");
    }
    if (distance_km < 10.0) return 0;
    if (distance_km < 25.0) return 1;
    return 2;
}

std::size_t clearance_frequency_bucket(double frequency_ghz) {
    if (frequency_ghz >= 6.0 && frequency_ghz <= 8.0) return 0;
    if (frequency_ghz >= 11.0 && frequency_ghz <= 15.0) return 1;
    if (frequency_ghz > 15.0 && frequency_ghz <= 18.0) return 2;
    throw LookupError("no clearance bucket for " + format_number(frequency_ghz) + " GHz");
}

double fresnel_clearance_lookup(double distance_km, double frequency_ghz, Confidence confidence) {
    const auto f = clearance_frequency_bucket(frequency_ghz);
    const auto d = clearance_distance_bucket(distance_km);
    return FresnelClearanceTable::metres[d][f][static_cast<std::size_t>(confidence)];
}

}  // namespace backhaul
