#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "zmc/complex_util.hpp"
#include "zmc/errors.hpp"

namespace zmc {

/// Strict proper crossing: the open interiors of [a,b] and [c,d] meet at a
/// single point. Shared endpoints and collinear overlap do not count.
inline std::optional<cplx> proper_crossing(cplx a, cplx b, cplx c, cplx d) {
    const cplx r = b - a, s = d - c;
    const double denom = cross2(r, s);
    if (denom == 0.0) return std::nullopt;
    const double t = cross2(c - a, s) / denom;
    const double u = cross2(c - a, r) / denom;
    const double eps = 1e-12;
    if (t <= eps || t >= 1.0 - eps || u <= eps || u >= 1.0 - eps) return std::nullopt;
    return a + t * r;
}

struct SegCross {
    size_t i, j;  // indices of the crossing edges
    cplx point;
};

/// First proper self-crossing of the closed polyline, found by an x-interval
/// sweep over the edges. Zero-length edges are skipped.
inline std::optional<SegCross> first_proper_crossing(const std::vector<cplx>& loop) {
    const size_t n = loop.size();
    if (n < 4) return std::nullopt;
    struct Edge {
        size_t idx;
        cplx a, b;
        double x0, x1;
    };
    std::vector<Edge> edges;
    edges.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        cplx a = loop[i], b = loop[(i + 1) % n];
        if (a == b) continue;
        edges.push_back({i, a, b, std::min(a.real(), b.real()), std::max(a.real(), b.real())});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& p, const Edge& q) { return p.x0 < q.x0; });
    for (size_t i = 0; i < edges.size(); ++i) {
        for (size_t j = i + 1; j < edges.size() && edges[j].x0 <= edges[i].x1; ++j) {
            const Edge &e = edges[i], &f = edges[j];
            if (std::min(e.a.imag(), e.b.imag()) > std::max(f.a.imag(), f.b.imag())) continue;
            if (std::max(e.a.imag(), e.b.imag()) < std::min(f.a.imag(), f.b.imag())) continue;
            if (auto p = proper_crossing(e.a, e.b, f.a, f.b)) {
                size_t lo = std::min(e.idx, f.idx), hi = std::max(e.idx, f.idx);
                return SegCross{lo, hi, *p};
            }
        }
    }
    return std::nullopt;
}

inline double signed_area(const std::vector<cplx>& loop) {
    double a = 0.0;
    for (size_t i = 0; i < loop.size(); ++i) {
        cplx p = loop[i], q = loop[(i + 1) % loop.size()];
        a += cross2(p, q);
    }
    return 0.5 * a;
}

enum class ImageShape { Convex, StarlikeNotConvex, Neither };

struct ImageClassification {
    ImageShape shape = ImageShape::Neither;
    std::optional<cplx> starlike_center;  // a kernel point when starlike
};

namespace detail {

inline std::vector<cplx> dedup_loop(const std::vector<cplx>& pts) {
    if (pts.empty()) return {};
    double scale = 0.0;
    double xlo = pts[0].real(), xhi = xlo, ylo = pts[0].imag(), yhi = ylo;
    for (cplx p : pts) {
        xlo = std::min(xlo, p.real());
        xhi = std::max(xhi, p.real());
        ylo = std::min(ylo, p.imag());
        yhi = std::max(yhi, p.imag());
    }
    scale = std::hypot(xhi - xlo, yhi - ylo);
    const double tol = 1e-12 * (scale > 0.0 ? scale : 1.0);
    std::vector<cplx> out;
    for (cplx p : pts)
        if (out.empty() || std::abs(p - out.back()) > tol) out.push_back(p);
    while (out.size() > 1 && std::abs(out.front() - out.back()) <= tol) out.pop_back();
    return out;
}

/// Kernel membership for a ccw simple polygon: the point must lie on or left
/// of every directed edge line.
inline bool in_kernel(const std::vector<cplx>& loop, cplx p, double tol) {
    for (size_t i = 0; i < loop.size(); ++i) {
        cplx a = loop[i], b = loop[(i + 1) % loop.size()];
        if (cross2(b - a, p - a) < -tol) return false;
    }
    return true;
}

} // namespace detail

/// Classify the region bounded by a closed boundary trace. Throws
/// NonSimplePolyline when the trace properly crosses itself. Convexity is
/// decided by edge turning; starlikeness by a kernel search over a bounding
/// box candidate grid (the kernel of a simple polygon is the intersection of
/// the half-planes left of its ccw edges).
inline ImageClassification classify_image(const std::vector<cplx>& boundary) {
    std::vector<cplx> loop = detail::dedup_loop(boundary);
    if (loop.size() < 3) throw NonSimplePolyline("boundary trace has fewer than 3 distinct points");
    if (auto x = first_proper_crossing(loop))
        throw NonSimplePolyline("boundary trace crosses itself near (" +
                                std::to_string(x->point.real()) + ", " +
                                std::to_string(x->point.imag()) + ")");
    if (signed_area(loop) < 0.0) std::reverse(loop.begin(), loop.end());

    double xlo = loop[0].real(), xhi = xlo, ylo = loop[0].imag(), yhi = ylo;
    for (cplx p : loop) {
        xlo = std::min(xlo, p.real());
        xhi = std::max(xhi, p.real());
        ylo = std::min(ylo, p.imag());
        yhi = std::max(yhi, p.imag());
    }
    const double scale = std::hypot(xhi - xlo, yhi - ylo);
    const double tol = 1e-9 * scale * scale;

    bool convex = true;
    for (size_t i = 0; i < loop.size() && convex; ++i) {
        cplx a = loop[i];
        cplx b = loop[(i + 1) % loop.size()];
        cplx c = loop[(i + 2) % loop.size()];
        if (cross2(b - a, c - b) < -tol) convex = false;
    }
    if (convex) {
        cplx centroid = std::accumulate(loop.begin(), loop.end(), cplx{0, 0}) / cplx(double(loop.size()), 0.0);
        return {ImageShape::Convex, centroid};
    }

    const int k = 17;
    std::vector<cplx> candidates;
    candidates.push_back(std::accumulate(loop.begin(), loop.end(), cplx{0, 0}) / cplx(double(loop.size()), 0.0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            candidates.emplace_back(xlo + (xhi - xlo) * (i + 0.5) / k, ylo + (yhi - ylo) * (j + 0.5) / k);
    for (cplx p : candidates)
        if (detail::in_kernel(loop, p, tol)) return {ImageShape::StarlikeNotConvex, p};
    return {ImageShape::Neither, std::nullopt};
}

/// Area of the convex hull of a point set (Andrew monotone chain). Comparing
/// it with the polygon area gives a jitter-tolerant convexity test for
/// regions whose boundary traces carry discretization noise.
inline double convex_hull_area(std::vector<cplx> pts) {
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const size_t n = pts.size();
    if (n < 3) return 0.0;
    std::vector<cplx> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : 0);
    return std::abs(signed_area(hull));
}

inline const char* image_shape_name(ImageShape s) {
    switch (s) {
        case ImageShape::Convex: return "convex";
        case ImageShape::StarlikeNotConvex: return "starlike_not_convex";
        case ImageShape::Neither: return "neither";
    }
    return "neither";
}

} // namespace zmc
