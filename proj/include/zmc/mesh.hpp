#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "zmc/complex_util.hpp"
#include "zmc/domain.hpp"
#include "zmc/errors.hpp"
#include "zmc/weierstrass.hpp"

namespace zmc {

struct SurfaceMesh {
    std::vector<std::array<double, 3>> vertices;       // x, y, height
    std::vector<std::array<int, 3>> faces;             // 1-based vertex indices
    std::vector<std::pair<int, cplx>> singular;        // 1-based index, domain point
    std::vector<std::string> metadata;                 // emitted as # header lines
};

namespace detail {

inline bool mark_singular(const WeierstrassData& data, const DeformParams& p, cplx w,
                          double f_scale) {
    const double s = 1.0 + p.c * p.lambda * p.lambda * std::norm(heval(data.G(), w));
    if (std::abs(s) <= 1e-9) return true;
    return std::abs(heval(data.F(), w)) <= 1e-13 * (1.0 + f_scale);
}

} // namespace detail

/// Tessellate the surface over the domain. Disks get a polar mesh (rings x
/// spokes with a center fan), boxes a structured lattice (rings rows x spokes
/// columns), polygons a masked lattice. `truncation` pulls the outermost
/// samples inward relative to the domain size, since potentials often blow up
/// on the true rim. Degenerate domain triangles are skipped; vertices where
/// the induced metric degenerates are listed in `singular`.
inline SurfaceMesh build_surface_mesh(const WeierstrassData& data, const DeformParams& p,
                                      int rings = 96, int spokes = 256,
                                      double truncation = 1e-3) {
    if (rings < 2 || spokes < 3) throw ResolutionTooLow("mesh needs rings >= 2 and spokes >= 3");
    if (!(truncation >= 0.0) || truncation >= 1.0)
        throw std::invalid_argument("truncation must lie in [0, 1)");
    const DomainSpec& dom = data.domain();
    const Potentials pots = potentials(data);

    double f_scale = 0.0;
    for (cplx w : dom.interior_grid(8)) f_scale = std::max(f_scale, std::abs(heval(data.F(), w)));

    SurfaceMesh mesh;
    std::vector<cplx> wpts;

    auto emit_vertex = [&](cplx w) {
        const SurfacePoint s = surface_point(pots, p, w);
        mesh.vertices.push_back({s.horizontal.real(), s.horizontal.imag(), s.height});
        wpts.push_back(w);
        return static_cast<int>(mesh.vertices.size());  // 1-based
    };
    const double area_tol = 1e-14 * dom.diameter() * dom.diameter();
    auto emit_face = [&](int a, int b, int c) {
        const cplx pa = wpts[a - 1], pb = wpts[b - 1], pc = wpts[c - 1];
        if (std::abs(cross2(pb - pa, pc - pa)) * 0.5 <= area_tol) return;
        mesh.faces.push_back({a, b, c});
    };

    switch (dom.shape()) {
        case DomainShape::Disk: {
            const double R = dom.disk_radius() * (1.0 - truncation);
            const int center = emit_vertex({0.0, 0.0});
            std::vector<std::vector<int>> ring_idx(static_cast<size_t>(rings));
            for (int i = 0; i < rings; ++i) {
                const double r = R * (i + 1.0) / rings;
                for (int j = 0; j < spokes; ++j)
                    ring_idx[static_cast<size_t>(i)].push_back(
                        emit_vertex(r * unit(2.0 * pi * j / spokes)));
            }
            for (int j = 0; j < spokes; ++j)
                emit_face(center, ring_idx[0][static_cast<size_t>(j)],
                          ring_idx[0][static_cast<size_t>((j + 1) % spokes)]);
            for (int i = 0; i + 1 < rings; ++i)
                for (int j = 0; j < spokes; ++j) {
                    const int a = ring_idx[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    const int b = ring_idx[static_cast<size_t>(i)][static_cast<size_t>((j + 1) % spokes)];
                    const int c = ring_idx[static_cast<size_t>(i + 1)][static_cast<size_t>(j)];
                    const int d = ring_idx[static_cast<size_t>(i + 1)][static_cast<size_t>((j + 1) % spokes)];
                    emit_face(a, b, c);
                    emit_face(b, d, c);
                }
            break;
        }
        case DomainShape::HalfPlaneRect:
        case DomainShape::Polygon: {
            // lattice over the bounding box, shrunk toward the basepoint
            double lox, hix, loy, hiy;
            if (dom.shape() == DomainShape::HalfPlaneRect) {
                lox = -dom.half_plane_width();
                hix = -dom.half_plane_inset();
                loy = -dom.half_plane_height();
                hiy = dom.half_plane_height();
            } else {
                const auto& vs = dom.polygon_vertices();
                lox = hix = vs[0].real();
                loy = hiy = vs[0].imag();
                for (cplx v : vs) {
                    lox = std::min(lox, v.real());
                    hix = std::max(hix, v.real());
                    loy = std::min(loy, v.imag());
                    hiy = std::max(hiy, v.imag());
                }
            }
            const cplx base = dom.basepoint();
            std::vector<std::vector<int>> idx(static_cast<size_t>(rings) + 1,
                                              std::vector<int>(static_cast<size_t>(spokes) + 1, 0));
            for (int i = 0; i <= rings; ++i)
                for (int j = 0; j <= spokes; ++j) {
                    cplx w{lox + (hix - lox) * j / double(spokes),
                           loy + (hiy - loy) * i / double(rings)};
                    w = base + (1.0 - truncation) * (w - base);
                    if (dom.shape() == DomainShape::Polygon && !dom.contains(w)) continue;
                    idx[static_cast<size_t>(i)][static_cast<size_t>(j)] = emit_vertex(w);
                }
            for (int i = 0; i < rings; ++i)
                for (int j = 0; j < spokes; ++j) {
                    const int a = idx[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    const int b = idx[static_cast<size_t>(i)][static_cast<size_t>(j + 1)];
                    const int c = idx[static_cast<size_t>(i + 1)][static_cast<size_t>(j)];
                    const int d = idx[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)];
                    if (a && b && c) emit_face(a, b, c);
                    if (b && d && c) emit_face(b, d, c);
                }
            break;
        }
    }

    for (size_t i = 0; i < wpts.size(); ++i)
        if (detail::mark_singular(data, p, wpts[i], f_scale))
            mesh.singular.push_back({static_cast<int>(i) + 1, wpts[i]});
    return mesh;
}

/// Plain text mesh: # metadata header, then "v x y height" and "f i j k"
/// lines (1-based), 17 significant digits, LF terminated.
inline void write_mesh(std::ostream& os, const SurfaceMesh& mesh) {
    for (const std::string& line : mesh.metadata) os << "# " << line << "\n";
    os << "# vertices: " << mesh.vertices.size() << " faces: " << mesh.faces.size() << "\n";
    for (const auto& v : mesh.vertices)
        os << "v " << fmt17(v[0]) << " " << fmt17(v[1]) << " " << fmt17(v[2]) << "\n";
    for (const auto& f : mesh.faces) os << "f " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

/// Sidecar listing vertices where the metric degenerates: "index re im".
inline void write_singular_sidecar(std::ostream& os, const SurfaceMesh& mesh) {
    for (const auto& [idx, w] : mesh.singular)
        os << idx << " " << fmt17(w.real()) << " " << fmt17(w.imag()) << "\n";
}

} // namespace zmc
