#pragma once

// Independent reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

// Visibility by slope comparison: the target is visible when no intermediate
// sample subtends a steeper elevation slope from A than the target does.
inline bool visible_by_slopes(const std::vector<double>& ground, double spacing_km, double h_a, double h_b,
                              bool curvature) {
    const std::size_t n = ground.size();
    const double total = spacing_km * static_cast<double>(n - 1);
    const double eye = ground.front() + h_a;
    const double target_slope = (ground.back() + h_b - eye) / total;
    constexpr double k_radius_m = 4.0 / 3.0 * 6371.0 * 1000.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d1 = spacing_km * static_cast<double>(i);
        const double d2 = total - d1;
        const double bulge = curvature ? (d1 * 1000.0) * (d2 * 1000.0) / (2.0 * k_radius_m) : 0.0;
        if ((ground[i] + bulge - eye) / d1 > target_slope) return false;
    }
    return true;
}

// Minimum spanning tree weight by enumerating every labelled tree through its
// Pruefer sequence. Exponential; fine for n <= 8.
inline double mst_weight_exhaustive(const std::vector<std::vector<double>>& w) {
    const std::size_t n = w.size();
    if (n < 2) return 0.0;
    if (n == 2) return w[0][1];
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> seq(n - 2, 0);
    while (true) {
        std::vector<std::size_t> degree(n, 1);
        for (auto v : seq) ++degree[v];
        double sum = 0.0;
        for (auto v : seq) {
            std::size_t leaf = 0;
            while (degree[leaf] != 1) ++leaf;
            sum += w[leaf][v];
            --degree[leaf];
            --degree[v];
        }
        std::size_t u = n, x = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (degree[i] == 1) (u == n ? u : x) = i;
        }
        sum += w[u][x];
        best = std::min(best, sum);

        std::size_t k = 0;
        while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
        if (k == seq.size()) break;
    }
    return best;
}

// Percentile by the "C = 1" definition: rank h = (n-1)p over sorted values,
// interpolating between the two neighbouring order statistics.
inline double percentile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = static_cast<std::size_t>(std::ceil(h));
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace oracle
