#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "backhaul/demand.hpp"
#include "backhaul/link_budget.hpp"
#include "backhaul/raster_io.hpp"
#include "backhaul/terrain_analysis.hpp"

namespace backhaul {

struct SiteNode {
    std::size_t id = 0;
    Point location;
};

struct RouteEdge {
    std::size_t a = 0;  // tree side
    std::size_t b = 0;
    double length_km = 0.0;
};

struct RouteGraph {
    std::vector<SiteNode> nodes;
    std::vector<RouteEdge> edges;

    double total_km() const;
};

// Prim's algorithm on the complete Euclidean graph, grown from `anchor`.
// Equal-length candidates are ordered by their (low id, high id) pair.
RouteGraph build_mst(std::vector<SiteNode> nodes, std::size_t anchor);

enum class Strategy { clos_only, hybrid };
enum class LosSource { explicit_viewshed, probabilistic_lookup };
enum class ProbabilisticNlosPolicy { accept, reject };

std::string_view to_string(Strategy s);
std::string_view to_string(LosSource s);
Strategy parse_strategy(std::string_view text);

struct StrategyConfig {
    Strategy strategy = Strategy::hybrid;
    std::uint64_t seed = 42;
    double min_segment_km = 1.0;
    Confidence confidence = Confidence::p90;
    bool curvature = true;
    std::size_t repetitions = 1;
    double tower_m = 30.0;
    NlosMargins margins;
    ProbabilisticNlosPolicy probabilistic_nlos = ProbabilisticNlosPolicy::accept;
    std::size_t cluster_merge_gap = 2;

    void validate() const;
};

struct BackhaulLink {
    std::size_t region_id = 0;
    std::size_t edge_id = 0;
    std::size_t a = 0;
    std::size_t b = 0;
    double distance_km = 0.0;
    LinkMode kind = LinkMode::clos;
    double frequency_ghz = 0.0;
    LosSource los_source = LosSource::explicit_viewshed;
};

struct RelaySite {
    std::size_t id = 0;
    Point location;
    std::size_t parent_edge = 0;
};

struct EdgePlan {
    std::vector<BackhaulLink> links;
    std::vector<RelaySite> relays;
};

// Everything plan_edge needs besides the edge itself.
struct PlanContext {
    const RasterGrid& dem;
    const LosLookupTable& lookup;
    const ModelingRegion& region;
    const StrategyConfig& cfg;
};

struct EdgeEndpoint {
    std::size_t site_id = 0;
    Point location;
};

// Plans one route edge: relay splits for over-length edges, explicit viewshed
// on the original edge, lookup-driven Bernoulli LOS on segments touching new
// relays, NLOS as a last resort under the hybrid strategy, midpoint relays
// otherwise. New relay ids are taken from `next_relay_id`.
EdgePlan plan_edge(std::size_t edge_id, EdgeEndpoint p, EdgeEndpoint q, const PlanContext& ctx,
                   std::size_t& next_relay_id);

struct RegionPlan {
    std::size_t region_id = 0;
    RouteGraph graph;
    std::vector<std::size_t> edge_ids;  // global id of each graph edge
    std::vector<BackhaulLink> links;
    std::vector<RelaySite> relays;
};

struct IdBases {
    std::size_t next_edge_id = 0;
    std::size_t next_relay_id = 0;
};

// MST over the region's settlements, then plan_edge on every edge in order.
// Relays closer than one DEM cell are merged.
RegionPlan assess_region(const ModelingRegion& region, const std::vector<Settlement>& settlements,
                         const RasterGrid& dem, const LosLookupTable& lookup, const StrategyConfig& cfg, IdBases& ids);

}  // namespace backhaul
