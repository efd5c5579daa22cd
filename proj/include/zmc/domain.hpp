#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "zmc/complex_util.hpp"
#include "zmc/errors.hpp"

namespace zmc {

enum class DomainShape { Disk, HalfPlaneRect, Polygon };

/// Simply connected parameter domain with an interior basepoint.
///
/// Disk: |w| < radius, centered at the origin.
/// HalfPlaneRect: the truncation [-width, -inset] x [-height, height] of the
///   left half-plane Re w < 0; `inset` keeps the imaginary axis at arm's length.
/// Polygon: a simple positively oriented vertex loop.
///
/// The boundary sampler walks the boundary once, positively oriented, and can
/// pull samples inward (toward the basepoint) for maps that blow up on the rim.
class DomainSpec {
public:
    static DomainSpec disk(double radius, cplx basepoint = {0.0, 0.0}) {
        if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
        DomainSpec d;
        d.shape_ = DomainShape::Disk;
        d.radius_ = radius;
        d.base_ = basepoint;
        if (!d.contains(basepoint)) throw std::invalid_argument("basepoint not interior");
        return d;
    }

    static DomainSpec half_plane(double width = 6.0, double height = 6.0, double inset = 1e-3,
                                 cplx basepoint = {-1.0, 0.0}) {
        if (!(width > inset) || !(inset > 0.0) || !(height > 0.0))
            throw std::invalid_argument("bad half-plane truncation");
        DomainSpec d;
        d.shape_ = DomainShape::HalfPlaneRect;
        d.width_ = width;
        d.height_ = height;
        d.inset_ = inset;
        d.base_ = basepoint;
        if (!d.contains(basepoint)) throw std::invalid_argument("basepoint not interior");
        return d;
    }

    static DomainSpec polygon(std::vector<cplx> vertices, cplx basepoint) {
        if (vertices.size() < 3) throw std::invalid_argument("polygon needs 3+ vertices");
        DomainSpec d;
        d.shape_ = DomainShape::Polygon;
        d.verts_ = std::move(vertices);
        // Normalize to positive orientation.
        double area2 = 0.0;
        for (size_t i = 0; i < d.verts_.size(); ++i) {
            cplx p = d.verts_[i], q = d.verts_[(i + 1) % d.verts_.size()];
            area2 += cross2(p, q);
        }
        if (area2 < 0.0) std::reverse(d.verts_.begin(), d.verts_.end());
        d.base_ = basepoint;
        if (!d.contains(basepoint)) throw std::invalid_argument("basepoint not interior");
        return d;
    }

    DomainShape shape() const { return shape_; }
    cplx basepoint() const { return base_; }
    double disk_radius() const { return radius_; }
    double half_plane_width() const { return width_; }
    double half_plane_height() const { return height_; }
    double half_plane_inset() const { return inset_; }
    const std::vector<cplx>& polygon_vertices() const { return verts_; }
    bool truncated() const { return shape_ == DomainShape::HalfPlaneRect; }

    bool contains(cplx w) const {
        switch (shape_) {
            case DomainShape::Disk:
                return std::abs(w) < radius_;
            case DomainShape::HalfPlaneRect:
                return w.real() > -width_ && w.real() < -inset_ &&
                       w.imag() > -height_ && w.imag() < height_;
            case DomainShape::Polygon:
                return winding_contains(w);
        }
        return false;
    }

    double diameter() const {
        switch (shape_) {
            case DomainShape::Disk: return 2.0 * radius_;
            case DomainShape::HalfPlaneRect:
                return std::hypot(width_ - inset_, 2.0 * height_);
            case DomainShape::Polygon: {
                double lox = verts_[0].real(), hix = lox, loy = verts_[0].imag(), hiy = loy;
                for (cplx v : verts_) {
                    lox = std::min(lox, v.real()); hix = std::max(hix, v.real());
                    loy = std::min(loy, v.imag()); hiy = std::max(hiy, v.imag());
                }
                return std::hypot(hix - lox, hiy - loy);
            }
        }
        return 0.0;
    }

    /// Distance from an interior point to the boundary (0 outside).
    double boundary_distance(cplx w) const {
        switch (shape_) {
            case DomainShape::Disk:
                return std::max(0.0, radius_ - std::abs(w));
            case DomainShape::HalfPlaneRect: {
                if (!contains(w)) return 0.0;
                double d = w.real() + width_;
                d = std::min(d, -inset_ - w.real());
                d = std::min(d, height_ - w.imag());
                d = std::min(d, w.imag() + height_);
                return std::max(0.0, d);
            }
            case DomainShape::Polygon: {
                if (!contains(w)) return 0.0;
                double best = diameter();
                for (size_t i = 0; i < verts_.size(); ++i)
                    best = std::min(best, segment_distance(w, verts_[i],
                                                           verts_[(i + 1) % verts_.size()]));
                return best;
            }
        }
        return 0.0;
    }

    /// Positively oriented closed boundary polyline with `count` samples
    /// (closing edge implicit). inset_rel > 0 shrinks the loop toward the
    /// basepoint by that relative amount; all three shapes are star-shaped
    /// about their basepoint, so the shrunk loop stays interior.
    std::vector<cplx> boundary_polyline(int count, double inset_rel = 0.0) const {
        if (count < 3) throw ResolutionTooLow("boundary polyline needs 3+ samples");
        std::vector<cplx> pts;
        pts.reserve(static_cast<size_t>(count));
        switch (shape_) {
            case DomainShape::Disk: {
                for (int k = 0; k < count; ++k)
                    pts.push_back(radius_ * unit(2.0 * pi * k / count));
                break;
            }
            case DomainShape::HalfPlaneRect: {
                const std::vector<cplx> corner = {
                    {-width_, -height_}, {-inset_, -height_}, {-inset_, height_}, {-width_, height_}};
                sample_loop(corner, count, pts);
                break;
            }
            case DomainShape::Polygon:
                sample_loop(verts_, count, pts);
                break;
        }
        if (inset_rel != 0.0)
            for (auto& p : pts) p = base_ + (1.0 - inset_rel) * (p - base_);
        return pts;
    }

    /// About n*n strictly interior census points. Disks get a polar layout
    /// (n rings x n spokes), boxes a uniform cell-center lattice, polygons a
    /// bounding-box lattice filtered by containment.
    std::vector<cplx> interior_grid(int n) const {
        if (n < 1) throw ResolutionTooLow("interior grid needs n >= 1");
        std::vector<cplx> pts;
        switch (shape_) {
            case DomainShape::Disk: {
                pts.reserve(static_cast<size_t>(n) * n);
                for (int i = 0; i < n; ++i) {
                    double r = radius_ * (i + 1.0) / (n + 1.0);
                    for (int j = 0; j < n; ++j)
                        pts.push_back(r * unit(2.0 * pi * j / n));
                }
                break;
            }
            case DomainShape::HalfPlaneRect: {
                pts.reserve(static_cast<size_t>(n) * n);
                for (int i = 0; i < n; ++i) {
                    double x = -width_ + (i + 0.5) * (width_ - inset_) / n;
                    for (int j = 0; j < n; ++j) {
                        double y = -height_ + (j + 0.5) * (2.0 * height_) / n;
                        pts.push_back({x, y});
                    }
                }
                break;
            }
            case DomainShape::Polygon: {
                double lox = verts_[0].real(), hix = lox, loy = verts_[0].imag(), hiy = loy;
                for (cplx v : verts_) {
                    lox = std::min(lox, v.real()); hix = std::max(hix, v.real());
                    loy = std::min(loy, v.imag()); hiy = std::max(hiy, v.imag());
                }
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        cplx w{lox + (i + 0.5) * (hix - lox) / n,
                               loy + (j + 0.5) * (hiy - loy) / n};
                        if (contains(w)) pts.push_back(w);
                    }
                break;
            }
        }
        return pts;
    }

    /// Sample set used to vet expressions bound to this domain: an interior
    /// lattice plus a near-boundary loop (the true rim may carry poles).
    std::vector<cplx> validation_samples() const {
        std::vector<cplx> pts = interior_grid(24);
        auto rim = boundary_polyline(192, 1e-6);
        pts.insert(pts.end(), rim.begin(), rim.end());
        return pts;
    }

private:
    static double segment_distance(cplx p, cplx a, cplx b) {
        cplx ab = b - a;
        double len2 = std::norm(ab);
        double t = len2 > 0.0 ? std::clamp(dot2(p - a, ab) / len2, 0.0, 1.0) : 0.0;
        return std::abs(p - (a + t * ab));
    }

    bool winding_contains(cplx w) const {
        // Even-odd ray cast; boundary points count as outside.
        bool in = false;
        size_t m = verts_.size();
        for (size_t i = 0; i < m; ++i) {
            cplx a = verts_[i], b = verts_[(i + 1) % m];
            if (segment_distance(w, a, b) == 0.0) return false;
            bool cross = (a.imag() > w.imag()) != (b.imag() > w.imag());
            if (cross) {
                double x = a.real() + (w.imag() - a.imag()) / (b.imag() - a.imag()) *
                                          (b.real() - a.real());
                if (w.real() < x) in = !in;
            }
        }
        return in;
    }

    static void sample_loop(const std::vector<cplx>& loop, int count, std::vector<cplx>& out) {
        size_t m = loop.size();
        std::vector<double> len(m);
        double per = 0.0;
        for (size_t i = 0; i < m; ++i) {
            len[i] = std::abs(loop[(i + 1) % m] - loop[i]);
            per += len[i];
        }
        // Corner vertices are always emitted so straight edges stay exact.
        for (size_t i = 0; i < m; ++i) {
            int steps = std::max(1, static_cast<int>(std::lround(count * len[i] / per)));
            for (int k = 0; k < steps; ++k)
                out.push_back(loop[i] + (loop[(i + 1) % m] - loop[i]) *
                                            (static_cast<double>(k) / steps));
        }
    }

    DomainShape shape_ = DomainShape::Disk;
    double radius_ = 1.0;
    double width_ = 6.0, height_ = 6.0, inset_ = 1e-3;
    std::vector<cplx> verts_;
    cplx base_{0.0, 0.0};
};

} // namespace zmc
