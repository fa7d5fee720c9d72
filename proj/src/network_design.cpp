#include "backhaul/network_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "backhaul/errors.hpp"
#include "backhaul/random.hpp"
#include "backhaul/viewshed.hpp"

namespace backhaul {

double RouteGraph::total_km() const {
    double sum = 0.0;
    for (const auto& e : edges) sum += e.length_km;
    return sum;
}

RouteGraph build_mst(std::vector<SiteNode> nodes, std::size_t anchor) {
    std::sort(nodes.begin(), nodes.end(), [](const SiteNode& l, const SiteNode& r) { return l.id < r.id; });
    RouteGraph g;
    g.nodes = nodes;
    const std::size_t n = nodes.size();
    if (n == 0) return g;

    const auto anchor_it =
        std::find_if(nodes.begin(), nodes.end(), [&](const SiteNode& s) { return s.id == anchor; });
    if (anchor_it == nodes.end()) throw ContractViolation("MST anchor is not among the nodes");

    using Key = std::tuple<double, std::size_t, std::size_t>;  // length, low id, high id
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<char> in_tree(n, 0);
    std::vector<Key> best(n, Key{inf, 0, 0});
    std::vector<std::size_t> parent(n, n);
    auto relax = [&](std::size_t u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            const double d = distance_m(nodes[u].location, nodes[v].location) / 1000.0;
            const Key k{d, std::min(nodes[u].id, nodes[v].id), std::max(nodes[u].id, nodes[v].id)};
            if (k < best[v]) {
                best[v] = k;
                parent[v] = u;
            }
        }
    };

    std::size_t current = static_cast<std::size_t>(anchor_it - nodes.begin());
    in_tree[current] = 1;
    relax(current);
    for (std::size_t added = 1; added < n; ++added) {
        std::size_t next = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v] && (next == n || best[v] < best[next])) next = v;
        }
        in_tree[next] = 1;
        g.edges.push_back({nodes[parent[next]].id, nodes[next].id, std::get<0>(best[next])});
        relax(next);
    }
    return g;
}

std::string_view to_string(Strategy s) { return s == Strategy::clos_only ? "clos_only" : "hybrid"; }

std::string_view to_string(LosSource s) {
    return s == LosSource::explicit_viewshed ? "explicit_viewshed" : "probabilistic_lookup";
}

Strategy parse_strategy(std::string_view text) {
    if (text == "clos" || text == "clos_only") return Strategy::clos_only;
    if (text == "hybrid") return Strategy::hybrid;
    throw ConfigError("unknown strategy '" + std::string(text) + "' (expected clos or hybrid)");
}

void StrategyConfig::validate() const {
    if (!(min_segment_km > 0.0)) throw ConfigError("min_segment_km must be positive");
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (tower_m < 0.0) throw ConfigError("viewshed tower height must be non-negative");
    margins.validate();
}

namespace {

struct SegmentPlanner {
    const PlanContext& ctx;
    std::size_t edge_id;
    std::size_t& next_relay_id;
    EdgePlan plan;
    double max_clos;
    double max_nlos;

    void emit(const EdgeEndpoint& p, const EdgeEndpoint& q, double d_km, LinkMode kind, LosSource source) {
        BackhaulLink link;
        link.region_id = ctx.region.region_id;
        link.edge_id = edge_id;
        link.a = p.site_id;
        link.b = q.site_id;
        link.distance_km = d_km;
        link.kind = kind;
        link.frequency_ghz = assign_frequency(d_km, kind);
        link.los_source = source;
        plan.links.push_back(link);
    }

    EdgeEndpoint new_relay(Point at) {
        RelaySite r{next_relay_id++, at, edge_id};
        plan.relays.push_back(r);
        return {r.id, at};
    }

    static Point lerp(Point p, Point q, double t) { return {p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t}; }

    // `key` identifies this segment within the edge's recursion tree, so its
    // LOS draw is the same whichever strategy or evaluation order reaches it.
    void segment(const EdgeEndpoint& p, const EdgeEndpoint& q, bool first_order, std::uint64_t key) {
        const double d_km = distance_m(p.location, q.location) / 1000.0;

        if (d_km > max_clos * (1.0 + 1e-12)) {
            const auto parts = static_cast<std::size_t>(std::ceil(d_km / max_clos - 1e-12));
            EdgeEndpoint prev = p;
            for (std::size_t i = 1; i <= parts; ++i) {
                const EdgeEndpoint next =
                    i == parts ? q : new_relay(lerp(p.location, q.location, static_cast<double>(i) / static_cast<double>(parts)));
                segment(prev, next, false, splitmix64(key ^ (0x5100ULL + i)));
                prev = next;
            }
            return;
        }

        const auto& cfg = ctx.cfg;
        bool los = false;
        bool nlos_ok = false;
        const LosSource source = first_order ? LosSource::explicit_viewshed : LosSource::probabilistic_lookup;
        if (first_order) {
            const auto profile = extract_profile(ctx.dem, p.location, q.location);
            los = line_of_sight(profile, cfg.tower_m, cfg.tower_m, cfg.curvature).visible;
            if (!los && cfg.strategy == Strategy::hybrid && d_km <= max_nlos) {
                nlos_ok = knife_edge_eligible(profile, cfg.tower_m, cfg.tower_m, cfg.margins, cfg.curvature,
                                              cfg.cluster_merge_gap)
                              .eligible;
            }
        } else {
            const double p_los = lookup_probability(ctx.lookup, ctx.region.mean_decile, d_km);
            los = RandomStream(key).bernoulli(p_los);
            nlos_ok = cfg.strategy == Strategy::hybrid && d_km <= max_nlos &&
                      cfg.probabilistic_nlos == ProbabilisticNlosPolicy::accept;
        }

        if (los) {
            emit(p, q, d_km, LinkMode::clos, source);
        } else if (nlos_ok) {
            emit(p, q, d_km, LinkMode::nlos, source);
        } else if (d_km / 2.0 < cfg.min_segment_km) {
            // short hops are taken as buildable with a standard tower
            emit(p, q, d_km, LinkMode::clos, source);
        } else {
            const EdgeEndpoint mid = new_relay(lerp(p.location, q.location, 0.5));
            segment(p, mid, false, splitmix64(key ^ 0xb1ULL));
            segment(mid, q, false, splitmix64(key ^ 0xb2ULL));
        }
    }
};

}  // namespace

EdgePlan plan_edge(std::size_t edge_id, EdgeEndpoint p, EdgeEndpoint q, const PlanContext& ctx,
                   std::size_t& next_relay_id) {
    if (!(distance_m(p.location, q.location) > 0.0)) throw ContractViolation("route edge has zero length");
    SegmentPlanner planner{ctx,
                           edge_id,
                           next_relay_id,
                           {},
                           max_link_distance(ctx.region.rain, LinkMode::clos),
                           max_link_distance(ctx.region.rain, LinkMode::nlos)};
    const std::uint64_t key = derive_seed(ctx.cfg.seed, {ctx.region.region_id, edge_id});
    planner.segment(p, q, true, key);
    return std::move(planner.plan);
}

RegionPlan assess_region(const ModelingRegion& region, const std::vector<Settlement>& settlements,
                         const RasterGrid& dem, const LosLookupTable& lookup, const StrategyConfig& cfg, IdBases& ids) {
    cfg.validate();
    RegionPlan out;
    out.region_id = region.region_id;

    std::vector<SiteNode> nodes;
    for (auto id : region.settlements) nodes.push_back({id, settlements.at(id).location});
    out.graph = build_mst(std::move(nodes), region.anchor);

    std::map<std::size_t, Point> where;
    for (const auto& n : out.graph.nodes) where.emplace(n.id, n.location);

    const PlanContext ctx{dem, lookup, region, cfg};
    std::size_t next_relay = ids.next_relay_id;
    for (const auto& e : out.graph.edges) {
        const std::size_t edge_id = ids.next_edge_id++;
        out.edge_ids.push_back(edge_id);
        auto plan = plan_edge(edge_id, {e.a, where.at(e.a)}, {e.b, where.at(e.b)}, ctx, next_relay);
        out.links.insert(out.links.end(), plan.links.begin(), plan.links.end());
        out.relays.insert(out.relays.end(), plan.relays.begin(), plan.relays.end());
    }

    // merge relays that fall within one DEM cell of an earlier relay, then
    // renumber the survivors densely
    std::map<std::size_t, std::size_t> remap;
    std::vector<RelaySite> kept;
    for (const auto& r : out.relays) {
        const auto twin = std::find_if(kept.begin(), kept.end(), [&](const RelaySite& k) {
            return distance_m(k.location, r.location) < dem.cellsize();
        });
        if (twin != kept.end()) {
            remap[r.id] = twin->id;
        } else {
            remap[r.id] = r.id;
            kept.push_back(r);
        }
    }
    std::map<std::size_t, std::size_t> dense;
    for (auto& r : kept) {
        dense[r.id] = ids.next_relay_id + dense.size();
        r.id = dense[r.id];
    }
    auto final_id = [&](std::size_t site) {
        const auto it = remap.find(site);
        return it == remap.end() ? site : dense.at(it->second);
    };
    std::vector<BackhaulLink> links;
    for (auto link : out.links) {
        link.a = final_id(link.a);
        link.b = final_id(link.b);
        if (link.a != link.b) links.push_back(link);
    }
    out.links = std::move(links);
    out.relays = std::move(kept);
    ids.next_relay_id += out.relays.size();
    return out;
}

}  // namespace backhaul
