#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zmc/complex_util.hpp"
#include "zmc/convexity.hpp"
#include "zmc/domain.hpp"
#include "zmc/errors.hpp"
#include "zmc/geometry2d.hpp"
#include "zmc/holo.hpp"
#include "zmc/linear_connectivity.hpp"
#include "zmc/univalence.hpp"
#include "zmc/weierstrass.hpp"

namespace zmc {

/// Extremal moduli of G over the domain closure. The sup is attained on the
/// rim (maximum modulus); the inf drops to zero when G has an interior zero.
struct NormEstimates {
    double sup_abs_G = 0.0;
    double inf_abs_G = 0.0;
};

namespace detail {

template <typename Fn>
inline double golden_max(const Fn& f, double a, double b, int iters = 60) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

} // namespace detail

inline NormEstimates estimate_norms(const WeierstrassData& data) {
    const DomainSpec& dom = data.domain();
    const HoloExpr G = data.G();
    auto abs_G = [&](cplx w) { return std::abs(heval(G, w)); };

    std::vector<cplx> rim = dom.boundary_polyline(4096, 0.0);
    std::vector<double> rim_abs(rim.size());
    try {
        for (size_t i = 0; i < rim.size(); ++i) rim_abs[i] = abs_G(rim[i]);
    } catch (const PoleOrBranchCut&) {
        rim = dom.boundary_polyline(4096, 1e-9);
        for (size_t i = 0; i < rim.size(); ++i) rim_abs[i] = abs_G(rim[i]);
    }
    size_t k = 0;
    for (size_t i = 1; i < rim.size(); ++i)
        if (rim_abs[i] > rim_abs[k]) k = i;
    double sup = rim_abs[k];

    // Golden-section refinement on the two rim arcs adjoining the argmax.
    // Disk rims refine along the circle itself; polygonal rims along the edge.
    const size_t m = rim.size();
    const cplx prev = rim[(k + m - 1) % m], at = rim[k], next = rim[(k + 1) % m];
    try {
        if (dom.shape() == DomainShape::Disk) {
            const double r0 = std::abs(at);
            double a0 = std::arg(prev), a1 = std::arg(at), a2 = std::arg(next);
            while (a1 < a0) a1 += 2.0 * pi;
            while (a2 < a1) a2 += 2.0 * pi;
            auto on_circle = [&](double t) { return abs_G(r0 * unit(t)); };
            sup = std::max(sup, detail::golden_max(on_circle, a0, a1));
            sup = std::max(sup, detail::golden_max(on_circle, a1, a2));
        } else {
            auto chord = [&](cplx a, cplx b) {
                return detail::golden_max([&](double t) { return abs_G(a + t * (b - a)); }, 0.0, 1.0);
            };
            sup = std::max(sup, chord(prev, at));
            sup = std::max(sup, chord(at, next));
        }
    } catch (const PoleOrBranchCut&) {
        // refinement stepped onto a singular point; the sample sup stands
    }

    double inf = sup;
    for (double v : rim_abs) inf = std::min(inf, v);
    const std::vector<cplx> grid = dom.interior_grid(64);
    std::vector<std::pair<double, cplx>> small;
    for (cplx w : grid) {
        const double v = abs_G(w);
        inf = std::min(inf, v);
        if (v < 0.05 * std::max(sup, 1e-30)) small.push_back({v, w});
    }
    // Newton sweep for interior zeros of G: any zero pins the inf at 0.
    if (!small.empty()) {
        std::sort(small.begin(), small.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (small.size() > 32) small.resize(32);
        const HoloExpr dG = derivative(G);
        for (const auto& [v0, w0] : small) {
            cplx w = w0;
            for (int it = 0; it < 50; ++it) {
                const cplx g = heval(G, w);
                if (std::abs(g) < 1e-13 * (1.0 + sup)) {
                    if (dom.contains(w)) inf = 0.0;
                    break;
                }
                const cplx d = heval(dG, w);
                if (!(std::abs(d) > 1e-300)) break;
                const cplx step = g / d;
                if (!finite(step)) break;
                w -= step;
                if (!dom.contains(w)) break;
            }
            if (inf == 0.0) break;
        }
    }
    return {sup, inf};
}

enum class CertificateKind { Isotropic, Seeded, RestrictedDisk, Schwarz, LinearConnectivity };

inline const char* certificate_id(CertificateKind k) {
    switch (k) {
        case CertificateKind::Isotropic: return "isotropic";
        case CertificateKind::Seeded: return "seeded";
        case CertificateKind::RestrictedDisk: return "restricted";
        case CertificateKind::Schwarz: return "schwarz";
        case CertificateKind::LinearConnectivity: return "linear_connectivity";
    }
    return "isotropic";
}

/// Certified graph interval on the rho = |c| lambda^2 axis: [0, rho_max],
/// half-open when open_end is set. Valid for every theta simultaneously.
struct GraphCertificate {
    CertificateKind kind = CertificateKind::Isotropic;
    double rho_max = 0.0;
    bool open_end = false;
    std::string note;
};

/// Interior point where the induced metric degenerates at the given rho:
/// rho |G(w)|^2 = 1 up to the stated residual.
struct JacobianZeroWitness {
    cplx w;
    double rho = 0.0;
    double residual = 0.0;
};

/// Open interval of rho where the planar map cannot be univalent because the
/// Jacobian changes sign inside the domain.
struct NongraphCertificate {
    double rho_lo = 0.0;
    double rho_hi = std::numeric_limits<double>::infinity();
    std::optional<JacobianZeroWitness> witness;
};

/// Locate w with |G(w)| = 1/sqrt(rho) by bisection along basepoint-anchored
/// segments between the sampled extrema of |G|. All three domain shapes are
/// star-shaped about their basepoint, so the path stays inside.
inline JacobianZeroWitness jacobian_zero_witness(const WeierstrassData& data, double rho) {
    if (!(rho > 0.0)) throw HypothesisFailed("jacobian zero witness needs rho > 0");
    const DomainSpec& dom = data.domain();
    const HoloExpr G = data.G();
    const double target = 1.0 / std::sqrt(rho);
    auto val = [&](cplx w) { return std::abs(heval(G, w)) - target; };

    std::vector<cplx> pts = dom.interior_grid(64);
    auto rim = dom.boundary_polyline(1024, 1e-6);
    pts.insert(pts.end(), rim.begin(), rim.end());
    cplx lo = pts[0], hi = pts[0];
    double vlo = val(lo), vhi = vlo;
    for (cplx w : pts) {
        const double v = val(w);
        if (v < vlo) {
            vlo = v;
            lo = w;
        }
        if (v > vhi) {
            vhi = v;
            hi = w;
        }
    }
    if (!(vlo < 0.0 && vhi > 0.0))
        throw HypothesisFailed("no metric degeneracy at rho = " + std::to_string(rho));

    // pick the anchored segment that brackets the sign change
    cplx a = lo, b = data.basepoint();
    if (!((val(a) < 0.0) != (val(b) < 0.0))) {
        a = b;
        b = hi;
    }
    double va = val(a);
    for (int i = 0; i < 200; ++i) {
        const cplx mid = 0.5 * (a + b);
        const double vm = val(mid);
        if (std::abs(vm) < 1e-13) {
            a = mid;
            break;
        }
        if ((va < 0.0) == (vm < 0.0)) {
            a = mid;
            va = vm;
        } else {
            b = mid;
        }
        if (std::abs(b - a) < 1e-16 * dom.diameter()) break;
    }
    JacobianZeroWitness w;
    w.w = a;
    w.rho = rho;
    w.residual = std::abs(rho * std::norm(heval(G, a)) - 1.0);
    return w;
}

namespace detail {

/// Numerical "univalent onto a convex region" check for an arbitrary planar
/// map: oracle verdict plus convexity of the boundary trace. Traces of maps
/// that collapse boundary arcs carry jitter, so a convex-hull area comparison
/// backs up the pointwise test.
inline void require_graph_over_convex(const PlanarMapFn& f, const DomainSpec& dom, int oracle_res,
                                      const char* who) {
    const UnivalenceReport rep = univalence_oracle(f, dom, oracle_res);
    if (rep.verdict != Verdict::Univalent)
        throw HypothesisFailed(std::string(who) + " planar map not verified univalent (oracle: " +
                               verdict_name(rep.verdict) + ")");
    const BoundaryTrace t = boundary_image(f, dom, 1024, 1e-6);
    bool convex = false;
    try {
        convex = classify_image(t.image_pts).shape == ImageShape::Convex;
    } catch (const NonSimplePolyline&) {
        convex = false;
    }
    if (!convex) {
        const double pa = std::abs(signed_area(t.image_pts));
        const double ha = convex_hull_area(t.image_pts);
        convex = pa > 0.0 && ha <= pa * (1.0 + 1e-4);
    }
    if (!convex) throw HypothesisFailed(std::string(who) + " image not convex");
}

} // namespace detail

/// Closed certificate [0, 1/sup|G|^2] from the isotropic map: requires the
/// isotropic planar map (rho = 0, which is h itself) to be univalent onto a
/// convex region. On disks that is decided by the convexity operator census;
/// elsewhere by the numerical oracle plus boundary classification.
inline GraphCertificate region_isotropic(const WeierstrassData& data, int oracle_res = 128) {
    const DomainSpec& dom = data.domain();
    if (dom.shape() == DomainShape::Disk) {
        ConvexityReport rep;
        try {
            rep = weierstrass_convexity(data);
        } catch (const DerivativeVanishes& e) {
            throw HypothesisFailed(std::string("isotropic map not locally injective: ") + e.what());
        }
        if (!rep.convex) throw HypothesisFailed("isotropic image not convex");
    } else {
        detail::require_graph_over_convex(planar_map_fn(data, DeformParams(0.0, 1.0, 0.0)), dom,
                                          oracle_res, "isotropic");
    }
    const NormEstimates n = estimate_norms(data);
    GraphCertificate cert;
    cert.kind = CertificateKind::Isotropic;
    cert.rho_max = n.sup_abs_G > 0.0 ? 1.0 / (n.sup_abs_G * n.sup_abs_G)
                                     : std::numeric_limits<double>::infinity();
    cert.open_end = false;
    cert.note = "isotropic map univalent onto a convex image";
    return cert;
}

/// Closed certificate [0, |c0| lambda0^2] from a verified seed graph: the seed
/// planar map must be univalent onto a convex region and its rho must not
/// exceed the 1/sup|G|^2 bound (SeedOutsideBound otherwise).
inline GraphCertificate region_seeded(const WeierstrassData& data, const DeformParams& seed,
                                      int oracle_res = 128) {
    const NormEstimates n = estimate_norms(data);
    const double rho0 = std::abs(seed.c) * seed.lambda * seed.lambda;
    const double bound = n.sup_abs_G > 0.0 ? 1.0 / (n.sup_abs_G * n.sup_abs_G)
                                           : std::numeric_limits<double>::infinity();
    if (!(rho0 <= bound * (1.0 + 1e-9)))
        throw SeedOutsideBound("seed rho " + std::to_string(rho0) +
                               " exceeds the certifiable bound " + std::to_string(bound));
    detail::require_graph_over_convex(planar_map_fn(data, seed), data.domain(), oracle_res,
                                      "seed");
    GraphCertificate cert;
    cert.kind = CertificateKind::Seeded;
    cert.rho_max = rho0;
    cert.open_end = false;
    cert.note = "seed graph verified; certificate extends down to the isotropic end";
    return cert;
}

/// Open interval (1/sup|G|^2, 1/inf|G|^2) where the Jacobian vanishes inside
/// the domain, with a located witness. The top end is +inf when G has an
/// interior zero.
inline NongraphCertificate region_nongraph(const WeierstrassData& data) {
    const NormEstimates n = estimate_norms(data);
    if (!(n.sup_abs_G > 0.0)) throw HypothesisFailed("G vanishes identically: no nongraph interval");
    NongraphCertificate cert;
    cert.rho_lo = 1.0 / (n.sup_abs_G * n.sup_abs_G);
    cert.rho_hi = n.inf_abs_G > 0.0 ? 1.0 / (n.inf_abs_G * n.inf_abs_G)
                                    : std::numeric_limits<double>::infinity();
    if (!(cert.rho_hi > cert.rho_lo * (1.0 + 1e-12)))
        throw HypothesisFailed("|G| is constant: the nongraph interval is empty");
    const double rho_w = std::isfinite(cert.rho_hi) ? std::sqrt(cert.rho_lo * cert.rho_hi)
                                                    : 2.0 * cert.rho_lo;
    try {
        cert.witness = jacobian_zero_witness(data, rho_w);
    } catch (const HypothesisFailed&) {
        cert.witness.reset();
    }
    return cert;
}

/// Closed certificate for the restriction to the concentric subdisk of radius
/// R: [0, 1/sup_{|w|<=R}|G|^2], with the isotropic hypothesis checked on the
/// subdisk.
inline GraphCertificate region_restricted(const WeierstrassData& data, double R) {
    const DomainSpec& dom = data.domain();
    if (dom.shape() != DomainShape::Disk)
        throw std::invalid_argument("restricted certificate requires a disk domain");
    if (!(R > 0.0) || R > dom.disk_radius())
        throw std::invalid_argument("restriction radius must lie in (0, radius]");
    const cplx base = std::abs(dom.basepoint()) < R ? dom.basepoint() : cplx{0.0, 0.0};
    WeierstrassData sub(data.F(), data.G(), DomainSpec::disk(R, base));
    ConvexityReport rep;
    try {
        rep = weierstrass_convexity(sub);
    } catch (const DerivativeVanishes& e) {
        throw HypothesisFailed(std::string("restricted isotropic map not locally injective: ") +
                               e.what());
    }
    if (!rep.convex) throw HypothesisFailed("restricted isotropic image not convex");
    const NormEstimates n = estimate_norms(sub);
    GraphCertificate cert;
    cert.kind = CertificateKind::RestrictedDisk;
    cert.rho_max = n.sup_abs_G > 0.0 ? 1.0 / (n.sup_abs_G * n.sup_abs_G)
                                     : std::numeric_limits<double>::infinity();
    cert.open_end = false;
    cert.note = "restriction to the subdisk of radius " + std::to_string(R);
    return cert;
}

/// Closed certificate for the subdisk of radius R from the growth bound for
/// maps vanishing at the center: G(0) = 0 gives sup_{|w|<=R}|G| <= sup|G| R /
/// radius, hence [0, (radius / (sup|G| R))^2]. Never better than the direct
/// restricted certificate, but needs no norm estimate on the subdisk.
inline GraphCertificate region_schwarz(const WeierstrassData& data, double R) {
    const DomainSpec& dom = data.domain();
    if (dom.shape() != DomainShape::Disk)
        throw std::invalid_argument("schwarz certificate requires a disk domain");
    if (!(R > 0.0) || R > dom.disk_radius())
        throw std::invalid_argument("restriction radius must lie in (0, radius]");
    const NormEstimates n = estimate_norms(data);
    const double g0 = std::abs(heval(data.G(), cplx{0.0, 0.0}));
    if (!(g0 <= 1e-12 * (1.0 + n.sup_abs_G)))
        throw HypothesisFailed("growth bound needs G(0) = 0");
    const cplx base = std::abs(dom.basepoint()) < R ? dom.basepoint() : cplx{0.0, 0.0};
    WeierstrassData sub(data.F(), data.G(), DomainSpec::disk(R, base));
    ConvexityReport rep;
    try {
        rep = weierstrass_convexity(sub);
    } catch (const DerivativeVanishes& e) {
        throw HypothesisFailed(std::string("restricted isotropic map not locally injective: ") +
                               e.what());
    }
    if (!rep.convex) throw HypothesisFailed("restricted isotropic image not convex");
    if (!(n.sup_abs_G > 0.0)) throw HypothesisFailed("G vanishes identically");
    const double ratio = dom.disk_radius() / (n.sup_abs_G * R);
    GraphCertificate cert;
    cert.kind = CertificateKind::Schwarz;
    cert.rho_max = ratio * ratio;
    cert.open_end = false;
    cert.note = "growth bound on the subdisk of radius " + std::to_string(R);
    return cert;
}

/// Half-open certificate [0, 1/(M sup|G|^2)) from linear connectivity of the
/// isotropic image: convexity is not required, only a univalent isotropic map
/// onto an M-linearly-connected region. M defaults to a rasterized estimate.
inline GraphCertificate region_linear_conn(const WeierstrassData& data,
                                           std::optional<double> M_given = std::nullopt,
                                           int oracle_res = 128, int raster_res = 512) {
    const DomainSpec& dom = data.domain();
    const PlanarMapFn h = planar_map_fn(data, DeformParams(0.0, 1.0, 0.0));
    const UnivalenceReport rep = univalence_oracle(h, dom, oracle_res);
    if (rep.verdict != Verdict::Univalent)
        throw HypothesisFailed(std::string("isotropic map not verified univalent (oracle: ") +
                               verdict_name(rep.verdict) + ")");
    double M;
    if (M_given) {
        if (!(*M_given >= 1.0)) throw std::invalid_argument("linear connectivity constant must be >= 1");
        M = *M_given;
    } else {
        const BoundaryTrace t = boundary_image(h, dom, 1024, 1e-6);
        M = estimate_linear_connectivity(t.image_pts, raster_res).M;
    }
    const NormEstimates n = estimate_norms(data);
    GraphCertificate cert;
    cert.kind = CertificateKind::LinearConnectivity;
    cert.rho_max = n.sup_abs_G > 0.0 ? 1.0 / (M * n.sup_abs_G * n.sup_abs_G)
                                     : std::numeric_limits<double>::infinity();
    cert.open_end = true;
    cert.note = "open at the top end; at M = 1 the image is convex and the closed "
                "isotropic certificate applies instead";
    return cert;
}

/// Everything the region analysis produced for one data set: zero or more
/// graph certificates, at most one nongraph interval, the norms they came
/// from, and whether the domain is a truncation (which makes the top of the
/// nongraph interval an artifact of the cut).
struct RegionClassification {
    std::vector<GraphCertificate> graph;
    std::optional<NongraphCertificate> nongraph;
    NormEstimates norms;
    bool truncation_caveat = false;
};

inline std::string classify_rho(const RegionClassification& rc, double rho) {
    rho = std::abs(rho);
    for (const auto& g : rc.graph) {
        const double tol = 1e-12 * std::max(1.0, std::isfinite(g.rho_max) ? g.rho_max : 1.0);
        const bool covered = g.open_end ? rho < g.rho_max : rho <= g.rho_max + tol;
        if (covered) return std::string("graph:") + certificate_id(g.kind);
    }
    if (rc.nongraph) {
        const auto& n = *rc.nongraph;
        if (rho > n.rho_lo * (1.0 + 1e-12) && rho < n.rho_hi) return "nongraph";
    }
    return "undetermined";
}

/// Standard classification pipeline: isotropic certificate if its hypothesis
/// holds, otherwise the seeded fallback when a seed is supplied; plus the
/// nongraph interval when |G| is nonconstant.
inline RegionClassification default_classification(const WeierstrassData& data,
                                                   std::optional<DeformParams> seed = std::nullopt,
                                                   int oracle_res = 128) {
    RegionClassification rc;
    rc.norms = estimate_norms(data);
    rc.truncation_caveat = data.domain().truncated();
    try {
        rc.graph.push_back(region_isotropic(data, oracle_res));
    } catch (const HypothesisFailed&) {
        if (seed) rc.graph.push_back(region_seeded(data, *seed, oracle_res));
    }
    try {
        rc.nongraph = region_nongraph(data);
    } catch (const HypothesisFailed&) {
        rc.nongraph.reset();
    }
    return rc;
}

struct SweepRow {
    double theta = 0.0;
    double rho = 0.0;
    int c_sign = 1;
    std::string certificate;
    std::string oracle;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::size_t> contradictions;  // indices into rows
};

/// Cross-validate the certificates against the oracle over a (theta, rho,
/// sign) lattice at lambda = 1, c = sign * rho. A contradiction is a
/// certified graph the oracle refutes or a certified nongraph the oracle
/// confirms univalent; inconclusive and skipped rows never contradict.
inline SweepResult sweep_validate(const WeierstrassData& data, const RegionClassification& rc,
                                  const std::vector<double>& thetas,
                                  const std::vector<double>& rhos, int oracle_res) {
    SweepResult out;
    for (double th : thetas)
        for (double rho : rhos)
            for (int sgn : {1, -1}) {
                SweepRow row;
                row.theta = th;
                row.rho = rho;
                row.c_sign = sgn;
                row.certificate = classify_rho(rc, rho);
                row.oracle = "skipped";
                if (oracle_res > 0) {
                    const DeformParams p(th, 1.0, sgn * rho);
                    const UnivalenceReport rep =
                        univalence_oracle(planar_map_fn(data, p), data.domain(), oracle_res);
                    row.oracle = verdict_name(rep.verdict);
                }
                const bool graph_cert = row.certificate.rfind("graph:", 0) == 0;
                const bool contra = (graph_cert && row.oracle == "not_univalent") ||
                                    (row.certificate == "nongraph" && row.oracle == "univalent");
                if (contra) out.contradictions.push_back(out.rows.size());
                out.rows.push_back(std::move(row));
            }
    return out;
}

} // namespace zmc
