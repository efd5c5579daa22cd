#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "zmc/complex_util.hpp"
#include "zmc/errors.hpp"
#include "zmc/geometry2d.hpp"

namespace zmc {

struct LinearConnectivityReport {
    double M = 1.0;  // estimated sup of (inner path length / straight distance)
    int resolution = 0;
    std::size_t inside_cells = 0;
};

namespace detail {

struct Raster {
    double x0 = 0, y0 = 0, cell = 1;
    int nx = 0, ny = 0;
    std::vector<std::uint8_t> inside;
    bool in(int ix, int iy) const {
        return ix >= 0 && iy >= 0 && ix < nx && iy < ny && inside[std::size_t(iy) * nx + ix];
    }
    cplx center(int ix, int iy) const { return {x0 + (ix + 0.5) * cell, y0 + (iy + 0.5) * cell}; }
    int cell_x(cplx p) const { return int(std::floor((p.real() - x0) / cell)); }
    int cell_y(cplx p) const { return int(std::floor((p.imag() - y0) / cell)); }
};

inline bool point_in_polygon(const std::vector<cplx>& loop, cplx p) {
    bool in = false;
    for (std::size_t i = 0, j = loop.size() - 1; i < loop.size(); j = i++) {
        const cplx a = loop[i], b = loop[j];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x = a.real() + (p.imag() - a.imag()) / (b.imag() - a.imag()) *
                                            (b.real() - a.real());
            if (p.real() < x) in = !in;
        }
    }
    return in;
}

/// Even-odd scanline fill over cell centers.
inline Raster rasterize(const std::vector<cplx>& loop, int resolution) {
    double xlo = loop[0].real(), xhi = xlo, ylo = loop[0].imag(), yhi = ylo;
    for (cplx p : loop) {
        xlo = std::min(xlo, p.real());
        xhi = std::max(xhi, p.real());
        ylo = std::min(ylo, p.imag());
        yhi = std::max(yhi, p.imag());
    }
    const double w = xhi - xlo, h = yhi - ylo;
    if (!(w > 0.0) || !(h > 0.0)) throw NonSimplePolyline("degenerate region");
    Raster r;
    r.cell = std::max(w, h) / resolution;
    const double pad = 1.5 * r.cell;
    r.x0 = xlo - pad;
    r.y0 = ylo - pad;
    r.nx = int(std::ceil((w + 2 * pad) / r.cell));
    r.ny = int(std::ceil((h + 2 * pad) / r.cell));
    r.inside.assign(std::size_t(r.nx) * r.ny, 0);
    std::vector<double> xs;
    for (int iy = 0; iy < r.ny; ++iy) {
        const double y = r.y0 + (iy + 0.5) * r.cell;
        xs.clear();
        for (std::size_t i = 0, j = loop.size() - 1; i < loop.size(); j = i++) {
            const cplx a = loop[i], b = loop[j];
            if ((a.imag() > y) != (b.imag() > y))
                xs.push_back(a.real() + (y - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real()));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            int i0 = int(std::ceil((xs[k] - r.x0) / r.cell - 0.5));
            int i1 = int(std::floor((xs[k + 1] - r.x0) / r.cell - 0.5));
            for (int ix = std::max(i0, 0); ix <= std::min(i1, r.nx - 1); ++ix)
                r.inside[std::size_t(iy) * r.nx + ix] = 1;
        }
    }
    return r;
}

/// Segment visibility in the rasterized region. Samples falling in an outside
/// cell get one exact polygon test before the segment is declared blocked, so
/// boundary-hugging chords of convex regions stay visible.
inline bool line_of_sight(const Raster& r, const std::vector<cplx>& loop, cplx a, cplx b) {
    const double len = std::abs(b - a);
    const int n = std::max(2, int(std::ceil(len / (r.cell / 3.0))));
    for (int k = 1; k < n; ++k) {
        const cplx p = a + (b - a) * (double(k) / n);
        if (r.in(r.cell_x(p), r.cell_y(p))) continue;
        if (!point_in_polygon(loop, p)) return false;
    }
    return true;
}

} // namespace detail

/// Estimate the linear-connectivity distortion of the region bounded by a
/// simple closed polyline: the sup over point pairs of (shortest inner path) /
/// (straight-line distance). Pipeline: scanline raster, 8-connected Dijkstra
/// from farthest-point-sampled boundary sources, then line-of-sight smoothing
/// of the worst discrete paths (raw 8-connected lengths overshoot by up to
/// ~8 percent even on convex regions, so smoothing is not optional).
inline LinearConnectivityReport estimate_linear_connectivity(const std::vector<cplx>& boundary,
                                                             int resolution = 512) {
    if (resolution < 64) throw ResolutionTooLow("linear connectivity needs resolution >= 64");
    if (auto x = first_proper_crossing(boundary))
        throw NonSimplePolyline("region boundary crosses itself");
    const detail::Raster r = detail::rasterize(boundary, resolution);
    const int nx = r.nx, ny = r.ny;
    const std::size_t ncells = std::size_t(nx) * ny;

    std::vector<int> inside_cells;
    std::vector<int> rim_cells;  // inside cells with an outside 8-neighbor
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            if (!r.in(ix, iy)) continue;
            const int id = iy * nx + ix;
            inside_cells.push_back(id);
            bool rim = false;
            for (int dy = -1; dy <= 1 && !rim; ++dy)
                for (int dx = -1; dx <= 1 && !rim; ++dx)
                    if ((dx || dy) && !r.in(ix + dx, iy + dy)) rim = true;
            if (rim) rim_cells.push_back(id);
        }
    LinearConnectivityReport rep;
    rep.resolution = resolution;
    rep.inside_cells = inside_cells.size();
    if (inside_cells.size() < 16) throw ResolutionTooLow("region rasterizes to too few cells");

    // Farthest-point sampling of Dijkstra sources along the rim.
    std::vector<int> sources;
    {
        const std::size_t want = std::min<std::size_t>(24, rim_cells.size());
        sources.push_back(rim_cells.front());
        std::vector<double> mind(rim_cells.size(), 1e300);
        while (sources.size() < want) {
            const cplx last = r.center(sources.back() % nx, sources.back() / nx);
            int best = -1;
            double bestd = -1.0;
            for (std::size_t k = 0; k < rim_cells.size(); ++k) {
                const cplx p = r.center(rim_cells[k] % nx, rim_cells[k] / nx);
                mind[k] = std::min(mind[k], std::abs(p - last));
                if (mind[k] > bestd) {
                    bestd = mind[k];
                    best = int(k);
                }
            }
            if (best < 0 || bestd <= 0.0) break;
            sources.push_back(rim_cells[std::size_t(best)]);
        }
    }

    std::vector<double> dist(ncells);
    std::vector<int> prev(ncells);
    const double SQ2 = std::sqrt(2.0);
    double worst = 1.0;

    for (int src : sources) {
        std::fill(dist.begin(), dist.end(), 1e300);
        std::fill(prev.begin(), prev.end(), -1);
        using QN = std::pair<double, int>;
        std::priority_queue<QN, std::vector<QN>, std::greater<QN>> q;
        dist[std::size_t(src)] = 0.0;
        q.push({0.0, src});
        while (!q.empty()) {
            auto [d, id] = q.top();
            q.pop();
            if (d > dist[std::size_t(id)]) continue;
            const int ix = id % nx, iy = id / nx;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!dx && !dy) continue;
                    if (!r.in(ix + dx, iy + dy)) continue;
                    // no squeezing through a pinched diagonal
                    if (dx && dy && !r.in(ix + dx, iy) && !r.in(ix, iy + dy)) continue;
                    const int nid = (iy + dy) * nx + (ix + dx);
                    const double nd = d + (dx && dy ? SQ2 : 1.0) * r.cell;
                    if (nd < dist[std::size_t(nid)]) {
                        dist[std::size_t(nid)] = nd;
                        prev[std::size_t(nid)] = id;
                        q.push({nd, nid});
                    }
                }
        }

        const cplx ps = r.center(src % nx, src / nx);
        struct Scored {
            double ratio;
            int id;
        };
        std::vector<Scored> scored;
        for (int id : inside_cells) {
            if (dist[std::size_t(id)] >= 1e300) continue;
            const cplx pt = r.center(id % nx, id / nx);
            const double straight = std::abs(pt - ps);
            if (straight < 2.0 * r.cell) continue;
            scored.push_back({dist[std::size_t(id)] / straight, id});
        }
        const std::size_t keep = std::min<std::size_t>(64, scored.size());
        std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                          [](const Scored& a, const Scored& b) { return a.ratio > b.ratio; });
        scored.resize(keep);

        for (const Scored& sc : scored) {
            if (sc.ratio <= worst) break;  // sorted: smoothing only shrinks
            std::vector<cplx> path;
            for (int id = sc.id; id != -1; id = prev[std::size_t(id)])
                path.push_back(r.center(id % nx, id / nx));
            std::reverse(path.begin(), path.end());
            // greedy farthest-visible smoothing with geometric shrink
            double len = 0.0;
            std::size_t i = 0;
            while (i + 1 < path.size()) {
                std::size_t j = path.size() - 1;
                while (j > i + 1 && !detail::line_of_sight(r, boundary, path[i], path[j]))
                    j = i + (j - i + 1) / 2;
                len += std::abs(path[j] - path[i]);
                i = j;
            }
            const cplx pt = r.center(sc.id % nx, sc.id / nx);
            const double ratio = len / std::abs(pt - ps);
            worst = std::max(worst, ratio);
        }
    }
    rep.M = std::max(1.0, worst);
    return rep;
}

} // namespace zmc
