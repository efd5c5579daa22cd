#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "zmc/complex_util.hpp"
#include "zmc/domain.hpp"
#include "zmc/errors.hpp"
#include "zmc/geometry2d.hpp"
#include "zmc/holo.hpp"
#include "zmc/weierstrass.hpp"

namespace zmc {

/// One evaluation of a planar map: the value and, when the caller can supply
/// them exactly, the Wirtinger derivatives [f_w, f_wbar].
struct PlanarMapSample {
    cplx value;
    std::optional<std::array<cplx, 2>> wirtinger;
};

using PlanarMapFn = std::function<PlanarMapSample(cplx)>;

/// Planar factor of the deformation family with exact derivatives:
/// f = h + c lambda^2 e^{-2 i theta} conj(g), f_w = F, f_wbar = k conj(-G^2 F).
inline PlanarMapFn planar_map_fn(const WeierstrassData& data, const DeformParams& p,
                                 double tol = default_quad_tol()) {
    Potentials pots = potentials(data, tol);
    HoloExpr F = data.F(), G = data.G();
    const cplx k = detail::gbar_factor(p);
    return [pots, F, G, k](cplx w) {
        PlanarMapSample s;
        s.value = pots.h(w) + k * std::conj(pots.g(w));
        const cplx fw = heval(F, w), gw = heval(G, w);
        s.wirtinger = std::array<cplx, 2>{fw, k * std::conj(-gw * gw * fw)};
        return s;
    };
}

/// Wrap a holomorphic expression as a planar map (f_wbar = 0).
inline PlanarMapFn holomorphic_map_fn(const HoloExpr& phi) {
    HoloExpr d = derivative(phi);
    return [phi, d](cplx w) {
        return PlanarMapSample{heval(phi, w), std::array<cplx, 2>{heval(d, w), cplx{0.0, 0.0}}};
    };
}

enum class Verdict { Univalent, NotUnivalent, Inconclusive };
enum class JacobianSign { Positive, Negative, Mixed, Zero };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Univalent: return "univalent";
        case Verdict::NotUnivalent: return "not_univalent";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

inline const char* jacobian_sign_name(JacobianSign s) {
    switch (s) {
        case JacobianSign::Positive: return "positive";
        case JacobianSign::Negative: return "negative";
        case JacobianSign::Mixed: return "mixed";
        case JacobianSign::Zero: return "zero";
    }
    return "mixed";
}

/// Two interior points with (numerically) equal images.
struct CollisionWitness {
    cplx w1, w2;
    double image_distance = 0.0;
};

struct UnivalenceReport {
    Verdict verdict = Verdict::Inconclusive;
    JacobianSign jacobian_sign = JacobianSign::Mixed;
    std::optional<CollisionWitness> witness;
    bool boundary_simple = false;
    int resolution = 0;
    std::string note;
};

struct BoundaryTrace {
    std::vector<cplx> domain_pts;
    std::vector<cplx> image_pts;
    bool truncated = false;  // domain is a truncation of an unbounded region
};

/// Image of the (optionally inset) domain boundary under the map.
inline BoundaryTrace boundary_image(const PlanarMapFn& f, const DomainSpec& dom, int samples,
                                    double inset_rel = 0.0) {
    BoundaryTrace t;
    t.domain_pts = dom.boundary_polyline(samples, inset_rel);
    t.image_pts.reserve(t.domain_pts.size());
    for (cplx w : t.domain_pts) t.image_pts.push_back(f(w).value);
    t.truncated = dom.truncated();
    return t;
}

namespace detail {

struct Wirt {
    cplx fw, fwb;
};

/// Exact Wirtinger derivatives when the sample carries them, otherwise
/// central differences with a step kept inside the domain.
inline Wirt wirt_of(const PlanarMapFn& f, const DomainSpec& dom, cplx w,
                    const PlanarMapSample* pre = nullptr) {
    PlanarMapSample s = pre ? *pre : f(w);
    if (s.wirtinger) return {(*s.wirtinger)[0], (*s.wirtinger)[1]};
    const double step = std::min(1e-5 * dom.diameter(), 0.45 * dom.boundary_distance(w));
    const cplx h{step, 0.0}, ih{0.0, step};
    const cplx fx = (f(w + h).value - f(w - h).value) / (2.0 * step);
    const cplx fy = (f(w + ih).value - f(w - ih).value) / (2.0 * step);
    return {0.5 * (fx - cplx{0.0, 1.0} * fy), 0.5 * (fx + cplx{0.0, 1.0} * fy)};
}

inline double jacobian_of(const Wirt& d) { return std::norm(d.fw) - std::norm(d.fwb); }

/// Constrained Gauss-Newton refinement of a collision candidate: minimize
/// |f(x) - f(y)| while keeping |x - y| >= delta_sep and both points interior
/// with boundary distance >= min_bdist. Returns a witness only when the
/// refined image distance drops below witness_abs. The rim margin matters:
/// maps that collapse boundary arcs (so nearby rim points have nearly equal
/// images) would otherwise let the iteration slide to the rim and fake a
/// collision; discretization artifacts away from the rim instead stall well
/// above the threshold.
inline std::optional<CollisionWitness> refine_collision(const PlanarMapFn& f,
                                                        const DomainSpec& dom, cplx x, cplx y,
                                                        double delta_sep, double witness_abs,
                                                        double min_bdist) {
    auto ok = [&](cplx p) { return dom.contains(p) && dom.boundary_distance(p) >= min_bdist; };
    auto separate = [&](cplx& a, cplx& b) {
        const double d = std::abs(a - b);
        if (d >= delta_sep) return true;
        const cplx mid = 0.5 * (a + b);
        cplx dir = d > 1e-300 ? (a - b) / d : cplx{1.0, 0.0};
        cplx a2 = mid + 0.5 * delta_sep * dir, b2 = mid - 0.5 * delta_sep * dir;
        if (!ok(a2) || !ok(b2)) return false;
        a = a2;
        b = b2;
        return true;
    };
    if (!ok(x) || !ok(y)) return std::nullopt;
    if (!separate(x, y)) return std::nullopt;

    double best = std::abs(f(x).value - f(y).value);
    for (int iter = 0; iter < 60; ++iter) {
        const PlanarMapSample sx = f(x), sy = f(y);
        const cplx r = sx.value - sy.value;
        if (std::abs(r) <= 1e-3 * witness_abs) break;
        const Wirt dx = wirt_of(f, dom, x, &sx), dy = wirt_of(f, dom, y, &sy);
        // real 2x4 Jacobian of r over (Re x, Im x, Re y, Im y)
        const cplx ax = dx.fw + dx.fwb, bx = cplx{0.0, 1.0} * (dx.fw - dx.fwb);
        const cplx ay = dy.fw + dy.fwb, by = cplx{0.0, 1.0} * (dy.fw - dy.fwb);
        const double J[2][4] = {{ax.real(), bx.real(), -ay.real(), -by.real()},
                                {ax.imag(), bx.imag(), -ay.imag(), -by.imag()}};
        double m00 = 0, m01 = 0, m11 = 0;
        for (int k = 0; k < 4; ++k) {
            m00 += J[0][k] * J[0][k];
            m01 += J[0][k] * J[1][k];
            m11 += J[1][k] * J[1][k];
        }
        const double det = m00 * m11 - m01 * m01;
        if (!(std::abs(det) > 1e-300)) break;
        const double rhs0 = -r.real(), rhs1 = -r.imag();
        const double u0 = (m11 * rhs0 - m01 * rhs1) / det;
        const double u1 = (m00 * rhs1 - m01 * rhs0) / det;
        double step[4];
        double len2 = 0.0;
        for (int k = 0; k < 4; ++k) {
            step[k] = J[0][k] * u0 + J[1][k] * u1;
            len2 += step[k] * step[k];
        }
        double scale = 1.0;
        const double cap = 0.25 * delta_sep;
        if (len2 > cap * cap) scale = cap / std::sqrt(len2);

        bool improved = false;
        for (int bt = 0; bt < 12 && !improved; ++bt, scale *= 0.5) {
            cplx x2 = x + scale * cplx{step[0], step[1]};
            cplx y2 = y + scale * cplx{step[2], step[3]};
            if (!ok(x2) || !ok(y2)) continue;
            if (!separate(x2, y2)) continue;
            const double v = std::abs(f(x2).value - f(y2).value);
            if (v < best) {
                x = x2;
                y = y2;
                best = v;
                improved = true;
            }
        }
        if (!improved) break;
    }
    if (best <= witness_abs) return CollisionWitness{x, y, best};
    return std::nullopt;
}

struct ChainCross {
    std::size_t ia, ib;  // crossing edge indices within the chains
    cplx p, q;           // domain-side points under the crossing
};

/// Brute-force proper-crossing scan between two chains (or within one when
/// `self` is set, skipping adjacent edge pairs).
inline std::optional<ChainCross> chains_crossing(const std::vector<cplx>& domA,
                                                 const std::vector<cplx>& imgA,
                                                 const std::vector<cplx>& domB,
                                                 const std::vector<cplx>& imgB, bool self) {
    for (std::size_t i = 0; i + 1 < imgA.size(); ++i) {
        const std::size_t j0 = self ? i + 2 : 0;
        for (std::size_t j = j0; j + 1 < imgB.size(); ++j) {
            const cplx a = imgA[i], b = imgA[i + 1], c = imgB[j], d = imgB[j + 1];
            const cplx r = b - a, s = d - c;
            const double denom = cross2(r, s);
            if (denom == 0.0) continue;
            const double t = cross2(c - a, s) / denom;
            const double u = cross2(c - a, r) / denom;
            const double eps = 1e-12;
            if (t <= eps || t >= 1.0 - eps || u <= eps || u >= 1.0 - eps) continue;
            const cplx p = domA[i] + t * (domA[i + 1] - domA[i]);
            const cplx q = domB[j] + u * (domB[j + 1] - domB[j]);
            return ChainCross{i, j, p, q};
        }
    }
    return std::nullopt;
}

/// Extract a window of `halo` edges either side of edge `e` from a chain,
/// subdividing each edge by `factor`. `closed` treats the chain as a loop.
inline void subdivide_window(const PlanarMapFn& f, const std::vector<cplx>& dom_chain,
                             std::size_t e, int halo, int factor, bool closed,
                             std::vector<cplx>& dom_out, std::vector<cplx>& img_out) {
    const std::size_t m = dom_chain.size();
    dom_out.clear();
    img_out.clear();
    const long lo = static_cast<long>(e) - halo;
    const long hi = static_cast<long>(e) + halo;
    for (long s = lo; s <= hi; ++s) {
        long i = s;
        if (closed) {
            i = ((s % static_cast<long>(m)) + static_cast<long>(m)) % static_cast<long>(m);
        } else if (s < 0 || s + 1 >= static_cast<long>(m)) {
            continue;
        }
        const cplx a = dom_chain[static_cast<std::size_t>(i)];
        const cplx b = dom_chain[(static_cast<std::size_t>(i) + 1) % m];
        for (int k = 0; k < factor; ++k) {
            const cplx w = a + (b - a) * (double(k) / factor);
            if (!dom_out.empty() && w == dom_out.back()) continue;
            dom_out.push_back(w);
        }
        if (s == hi) dom_out.push_back(b);
    }
    img_out.reserve(dom_out.size());
    for (cplx w : dom_out) img_out.push_back(f(w).value);
}

/// Decide whether a raw polyline crossing survives successive local
/// refinement. Chord artifacts near high-curvature or collapsing arcs die out
/// once the chains are subdivided; a genuine self-intersection of the true
/// curve keeps producing a proper crossing at every depth. Returns the
/// domain-side point pair from the deepest round when it persists.
inline std::optional<std::array<cplx, 2>> persistent_boundary_crossing(
    const PlanarMapFn& f, const std::vector<cplx>& loop, std::size_t i, std::size_t j,
    int rounds) {
    const std::size_t m = loop.size();
    const std::size_t gap = std::min(j - i, m - (j - i));
    std::vector<cplx> dA, iA, dB, iB;
    bool merged = gap <= 12;
    if (merged) {
        subdivide_window(f, loop, i, static_cast<int>(gap) + 4, 16, true, dA, iA);
    } else {
        subdivide_window(f, loop, i, 3, 16, true, dA, iA);
        subdivide_window(f, loop, j, 3, 16, true, dB, iB);
    }
    std::optional<ChainCross> cc = merged ? chains_crossing(dA, iA, dA, iA, true)
                                          : chains_crossing(dA, iA, dB, iB, false);
    for (int r = 1; cc && r < rounds; ++r) {
        std::vector<cplx> dA2, iA2, dB2, iB2;
        if (merged) {
            // stay in self-test mode on the merged chain
            const std::size_t sep = cc->ib - cc->ia;
            if (sep > 12) {
                subdivide_window(f, dA, cc->ia, 3, 16, false, dA2, iA2);
                subdivide_window(f, dA, cc->ib, 3, 16, false, dB2, iB2);
                merged = false;
                dA = dA2; iA = iA2; dB = dB2; iB = iB2;
                cc = chains_crossing(dA, iA, dB, iB, false);
            } else {
                subdivide_window(f, dA, cc->ia, static_cast<int>(sep) + 4, 16, false, dA2, iA2);
                dA = dA2; iA = iA2;
                cc = chains_crossing(dA, iA, dA, iA, true);
            }
        } else {
            subdivide_window(f, dA, cc->ia, 3, 16, false, dA2, iA2);
            subdivide_window(f, dB, cc->ib, 3, 16, false, dB2, iB2);
            dA = dA2; iA = iA2; dB = dB2; iB = iB2;
            cc = chains_crossing(dA, iA, dB, iB, false);
        }
    }
    if (!cc) return std::nullopt;
    return std::array<cplx, 2>{cc->p, cc->q};
}

} // namespace detail

/// Three-stage numerical univalence decision on the domain interior:
///  1. Jacobian sign census on an n x n interior grid; a sign change or a
///     vanishing Jacobian already refutes univalence.
///  2. Spatial-hash search for distant grid points with nearby images; every
///     candidate must be confirmed by constrained Gauss-Newton refinement
///     (with a rim margin) before it counts, since near-cusp geometry and
///     collapsing boundary arcs produce false candidates.
///  3. Self-intersection scan of the inset boundary image; raw polyline
///     crossings must survive local refinement and then the same confirmation.
///     Crossings that persist but cannot be confirmed leave the verdict
///     inconclusive.
inline UnivalenceReport univalence_oracle(const PlanarMapFn& f, const DomainSpec& dom,
                                          int resolution = 128) {
    if (resolution < 64)
        throw ResolutionTooLow("univalence oracle needs resolution >= 64, got " +
                               std::to_string(resolution));
    UnivalenceReport rep;
    rep.resolution = resolution;

    const std::vector<cplx> grid = dom.interior_grid(resolution);
    std::vector<cplx> values(grid.size());
    std::vector<double> jac(grid.size());
    double jmax = 0.0;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (size_t i = 0; i < grid.size(); ++i) {
        const PlanarMapSample s = f(grid[i]);
        values[i] = s.value;
        const detail::Wirt d = detail::wirt_of(f, dom, grid[i], &s);
        jac[i] = detail::jacobian_of(d);
        jmax = std::max(jmax, std::abs(jac[i]));
        xlo = std::min(xlo, s.value.real());
        xhi = std::max(xhi, s.value.real());
        ylo = std::min(ylo, s.value.imag());
        yhi = std::max(yhi, s.value.imag());
    }
    const double image_diam = std::max(std::hypot(xhi - xlo, yhi - ylo), 1e-300);
    const double witness_abs = 1e-9 * image_diam;
    const double rim_margin = 1e-3 * dom.diameter();
    const double jtol = 1e-12 * std::max(1.0, jmax);
    size_t pos = 0, neg = 0, zero = 0;
    for (double j : jac) {
        if (j > jtol) ++pos;
        else if (j < -jtol) ++neg;
        else ++zero;
    }
    bool stage1_clean = false;
    if (zero == grid.size()) {
        rep.jacobian_sign = JacobianSign::Zero;
        rep.verdict = Verdict::NotUnivalent;
        rep.note = "jacobian vanishes on the whole grid";
    } else if (zero > 0 || (pos > 0 && neg > 0)) {
        rep.jacobian_sign = JacobianSign::Mixed;
        rep.verdict = Verdict::NotUnivalent;
        rep.note = "jacobian changes sign or vanishes at " +
                   std::to_string(zero + std::min(pos, neg)) + " grid points";
    } else {
        rep.jacobian_sign = pos > 0 ? JacobianSign::Positive : JacobianSign::Negative;
        stage1_clean = true;
    }

    // Stage 2: interior collision candidates, confirmed or dismissed one by one.
    if (stage1_clean) {
        const double cell = image_diam / (8.0 * resolution);
        const double delta_sep = 4.0 * dom.diameter() / resolution;
        std::unordered_map<long long, std::vector<int>> hash;
        hash.reserve(grid.size() * 2);
        auto key_of = [&](double x, double y) {
            const long long ix = static_cast<long long>(std::floor(x / cell));
            const long long iy = static_cast<long long>(std::floor(y / cell));
            return (ix << 32) ^ (iy & 0xffffffffLL);
        };
        struct Candidate {
            int i, j;
            double gap;
        };
        std::vector<Candidate> cands;
        for (size_t i = 0; i < values.size(); ++i) {
            const double x = values[i].real(), y = values[i].imag();
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    auto it = hash.find(key_of(x + dx * cell, y + dy * cell));
                    if (it == hash.end()) continue;
                    for (int j : it->second) {
                        const double gap = std::abs(values[i] - values[j]);
                        if (gap > cell) continue;
                        if (std::abs(grid[i] - grid[j]) < delta_sep) continue;
                        cands.push_back({static_cast<int>(i), j, gap});
                    }
                }
            hash[key_of(x, y)].push_back(static_cast<int>(i));
        }
        std::sort(cands.begin(), cands.end(),
                  [](const Candidate& a, const Candidate& b) { return a.gap < b.gap; });
        if (cands.size() > 256) cands.resize(256);
        for (const Candidate& c : cands) {
            if (auto w = detail::refine_collision(f, dom, grid[c.i], grid[c.j], delta_sep,
                                                  witness_abs, rim_margin)) {
                rep.witness = w;
                rep.verdict = Verdict::NotUnivalent;
                rep.note = "interior collision confirmed by refinement";
                break;
            }
        }
    }

    // Stage 3: boundary-image simplicity (always run; it feeds the report even
    // when earlier stages already decided).
    const int m = std::max(256, 4 * resolution);
    const BoundaryTrace trace = boundary_image(f, dom, m, 1e-6);
    bool ambiguous = false;
    bool genuine_crossing = false;
    std::vector<SegCross> raw;
    {
        // collect up to 64 proper crossings of the image loop
        const std::vector<cplx>& loop = trace.image_pts;
        const size_t n = loop.size();
        for (size_t i = 0; i < n && raw.size() < 64; ++i) {
            for (size_t j = i + 2; j < n && raw.size() < 64; ++j) {
                if (i == 0 && j == n - 1) continue;  // adjacent around the seam
                const cplx a = loop[i], b = loop[(i + 1) % n];
                const cplx c = loop[j], d = loop[(j + 1) % n];
                if (std::min(a.real(), b.real()) > std::max(c.real(), d.real())) continue;
                if (std::max(a.real(), b.real()) < std::min(c.real(), d.real())) continue;
                if (std::min(a.imag(), b.imag()) > std::max(c.imag(), d.imag())) continue;
                if (std::max(a.imag(), b.imag()) < std::min(c.imag(), d.imag())) continue;
                if (auto p = proper_crossing(a, b, c, d)) raw.push_back({i, j, *p});
            }
        }
    }
    const double delta_sep_b = 4.0 * dom.diameter() / m;
    for (const SegCross& sc : raw) {
        if (genuine_crossing) break;
        auto pair = detail::persistent_boundary_crossing(f, trace.domain_pts, sc.i, sc.j, 3);
        if (!pair) continue;  // discretization artifact
        const double sep = std::max(std::min(delta_sep_b, 0.5 * std::abs((*pair)[0] - (*pair)[1])),
                                    1e-12 * dom.diameter());
        // no rim margin here: genuine boundary-trace collisions live near the rim
        if (auto w = detail::refine_collision(f, dom, (*pair)[0], (*pair)[1], sep, witness_abs,
                                              0.0)) {
            genuine_crossing = true;
            if (!rep.witness) rep.witness = w;
            rep.note = "boundary image self-intersects";
        } else {
            ambiguous = true;
        }
    }
    rep.boundary_simple = raw.empty() || (!genuine_crossing && !ambiguous);

    if (genuine_crossing) {
        rep.verdict = Verdict::NotUnivalent;
    } else if (ambiguous && rep.verdict != Verdict::NotUnivalent) {
        rep.verdict = Verdict::Inconclusive;
        rep.note = "boundary crossing persists under refinement but cannot be confirmed";
    } else if (stage1_clean && !rep.witness && rep.boundary_simple &&
               rep.verdict != Verdict::NotUnivalent) {
        rep.verdict = Verdict::Univalent;
    }
    return rep;
}

} // namespace zmc
