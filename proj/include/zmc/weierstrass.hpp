#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zmc/complex_util.hpp"
#include "zmc/domain.hpp"
#include "zmc/errors.hpp"
#include "zmc/holo.hpp"
#include "zmc/holo_domain.hpp"
#include "zmc/quadrature.hpp"

namespace zmc {

/// Deformation parameters (theta, lambda, c): associate-family angle,
/// positive dilation, and ambient metric parameter. theta is kept in [0, 2pi).
struct DeformParams {
    double theta = 0.0;
    double lambda = 1.0;
    double c = 1.0;

    DeformParams() = default;
    DeformParams(double th, double la, double cc) : theta(wrap(th)), lambda(la), c(cc) {
        if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    }

    static double wrap(double th) {
        double t = std::fmod(th, 2.0 * pi);
        return t < 0.0 ? t + 2.0 * pi : t;
    }
};

inline DeformParams conjugate(const DeformParams& p) {
    return {p.theta + pi / 2.0, p.lambda, p.c};
}

inline DeformParams bonnet(const DeformParams& p, double angle) {
    return {p.theta + angle, p.lambda, p.c};
}

inline DeformParams lopez_ros(const DeformParams& p, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("lopez_ros factor must be positive");
    return {p.theta, mu * p.lambda, p.c};
}

inline DeformParams c_shift(const DeformParams& p, double c_new) {
    return {p.theta, p.lambda, c_new};
}

struct SurfacePoint {
    cplx horizontal;  // first two coordinates as x + iy
    double height;    // third coordinate
};

/// Basepoint-normalized antiderivatives h' = F, g' = -G^2 F, T' = 2 G F.
struct Potentials {
    std::function<cplx(cplx)> h, g, T;
    bool symbolic = false;
    std::optional<HoloExpr> h_expr, g_expr, T_expr;
};

/// Weierstrass data (F, G) bound to a domain. F must not vanish identically;
/// both expressions must evaluate finitely on the domain's sample set and keep
/// their branch cuts off it. Optional closed-form potentials, when attached,
/// are cross-checked against F and G before being trusted.
class WeierstrassData {
public:
    WeierstrassData(HoloExpr F, HoloExpr G, DomainSpec domain)
        : F_(std::move(F)), G_(std::move(G)), domain_(std::move(domain)) {
        validate_holo_on_domain(F_, domain_, "F");
        validate_holo_on_domain(G_, domain_, "G");
        double fmax = 0.0;
        for (cplx w : domain_.interior_grid(16)) fmax = std::max(fmax, std::abs(heval(F_, w)));
        if (!(fmax > 1e-14)) throw std::invalid_argument("F vanishes identically");
    }

    const HoloExpr& F() const { return F_; }
    const HoloExpr& G() const { return G_; }
    const DomainSpec& domain() const { return domain_; }
    cplx basepoint() const { return domain_.basepoint(); }

    bool has_closed_potentials() const { return static_cast<bool>(h_); }
    const HoloExpr& closed_h() const { return h_; }
    const HoloExpr& closed_g() const { return g_; }
    const HoloExpr& closed_T() const { return T_; }

    /// Attach closed-form potentials; their derivatives must reproduce
    /// F, -G^2 F, 2 G F at interior samples (relative 1e-8) or we refuse.
    WeierstrassData& with_closed_potentials(HoloExpr h, HoloExpr g, HoloExpr T) {
        HoloExpr dh = derivative(h), dg = derivative(g), dT = derivative(T);
        for (cplx w : domain_.interior_grid(5)) {
            cplx f = heval(F_, w), gg = heval(G_, w);
            auto close = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-8 * (1.0 + std::abs(b)); };
            if (!close(heval(dh, w), f) || !close(heval(dg, w), -gg * gg * f) ||
                !close(heval(dT, w), 2.0 * gg * f))
                throw std::invalid_argument("closed-form potentials inconsistent with data");
        }
        h_ = std::move(h);
        g_ = std::move(g);
        T_ = std::move(T);
        return *this;
    }

private:
    HoloExpr F_, G_;
    DomainSpec domain_;
    HoloExpr h_, g_, T_;
};

/// Potentials evaluator: closed forms when available, otherwise adaptive
/// quadrature along basepoint-rooted segments. Values vanish at the basepoint.
inline Potentials potentials(const WeierstrassData& data, double tol = default_quad_tol()) {
    Potentials p;
    const cplx base = data.basepoint();
    if (data.has_closed_potentials()) {
        p.symbolic = true;
        p.h_expr = data.closed_h();
        p.g_expr = data.closed_g();
        p.T_expr = data.closed_T();
        const cplx h0 = heval(*p.h_expr, base);
        const cplx g0 = heval(*p.g_expr, base);
        const cplx T0 = heval(*p.T_expr, base);
        HoloExpr he = *p.h_expr, ge = *p.g_expr, Te = *p.T_expr;
        p.h = [he, h0](cplx w) { return heval(he, w) - h0; };
        p.g = [ge, g0](cplx w) { return heval(ge, w) - g0; };
        p.T = [Te, T0](cplx w) { return heval(Te, w) - T0; };
        return p;
    }
    const DomainSpec dom = data.domain();
    const HoloExpr F = data.F(), G = data.G();
    const HoloExpr gI = hprod({hlit(-1.0), G, G, F});
    const HoloExpr TI = hprod({hlit(2.0), G, F});
    p.h = [F, base, dom, tol](cplx w) { return path_antiderivative(F, base, w, dom, tol); };
    p.g = [gI, base, dom, tol](cplx w) { return path_antiderivative(gI, base, w, dom, tol); };
    p.T = [TI, base, dom, tol](cplx w) { return path_antiderivative(TI, base, w, dom, tol); };
    return p;
}

namespace detail {
inline cplx gbar_factor(const DeformParams& p) {
    // coefficient of conj(g) in the planar representation
    return p.c * p.lambda * p.lambda * unit(-2.0 * p.theta);
}
} // namespace detail

/// Planar harmonic map f = h + c lambda^2 e^{-2 i theta} conj(g).
inline cplx planar_map(const Potentials& pots, const DeformParams& p, cplx w) {
    return pots.h(w) + detail::gbar_factor(p) * std::conj(pots.g(w));
}

inline cplx planar_map(const WeierstrassData& data, const DeformParams& p, cplx w) {
    return planar_map(potentials(data), p, w);
}

/// Surface point: horizontal = (e^{i theta}/lambda) f(w), height = Re(e^{i theta} T(w)).
inline SurfacePoint surface_point(const Potentials& pots, const DeformParams& p, cplx w) {
    const cplx rot = unit(p.theta);
    SurfacePoint s;
    s.horizontal = (rot / p.lambda) * planar_map(pots, p, w);
    s.height = (rot * pots.T(w)).real();
    return s;
}

inline SurfacePoint surface_point(const WeierstrassData& data, const DeformParams& p, cplx w) {
    return surface_point(potentials(data), p, w);
}

/// Second Beltrami coefficient of the planar map: omega = -c lambda^2 e^{2 i theta} G^2.
inline cplx dilatation(const WeierstrassData& data, const DeformParams& p, cplx w) {
    cplx g = heval(data.G(), w);
    return -p.c * p.lambda * p.lambda * unit(2.0 * p.theta) * g * g;
}

/// Jacobian of the planar map: |F|^2 (1 - c^2 lambda^4 |G|^4).
inline double jacobian(const WeierstrassData& data, const DeformParams& p, cplx w) {
    double f2 = std::norm(heval(data.F(), w));
    double g2 = std::norm(heval(data.G(), w));
    double cl2 = p.c * p.lambda * p.lambda;
    return f2 * (1.0 - cl2 * cl2 * g2 * g2);
}

/// Conformal factor of the induced metric: (|F|/lambda)^2 (1 + c lambda^2 |G|^2)^2.
/// theta cancels identically, so it is not consulted.
inline double metric_coeff(const WeierstrassData& data, const DeformParams& p, cplx w) {
    double af = std::abs(heval(data.F(), w)) / p.lambda;
    double s = 1.0 + p.c * p.lambda * p.lambda * std::norm(heval(data.G(), w));
    return af * af * s * s;
}

/// Points where the metric degenerates: zeros of 1 + c lambda^2 |G|^2 (grid
/// edges bisected) plus interior zeros of F (Newton-refined). Sorted for
/// reproducibility; empty when the locus is empty.
inline std::vector<cplx> singular_locus(const WeierstrassData& data, const DeformParams& p,
                                        int n = 64, double tol = 1e-10) {
    if (n < 8) throw ResolutionTooLow("singular locus grid needs n >= 8");
    const DomainSpec& dom = data.domain();
    const double cl2 = p.c * p.lambda * p.lambda;
    auto s = [&](cplx w) { return 1.0 + cl2 * std::norm(heval(data.G(), w)); };

    std::vector<cplx> found;
    auto bisect = [&](cplx a, cplx b) {
        double sa = s(a);
        for (int i = 0; i < 80; ++i) {
            cplx m = 0.5 * (a + b);
            double sm = s(m);
            if (std::abs(sm) < 1e-13 || std::abs(b - a) < 1e-15 * dom.diameter()) {
                found.push_back(m);
                return;
            }
            if ((sa < 0.0) == (sm < 0.0)) { a = m; sa = sm; }
            else b = m;
        }
        found.push_back(0.5 * (a + b));
    };

    auto grid = dom.interior_grid(n);
    auto edge = [&](size_t i, size_t j) {
        double si = s(grid[i]), sj = s(grid[j]);
        if (std::abs(si) < tol) found.push_back(grid[i]);
        if ((si < 0.0) != (sj < 0.0)) bisect(grid[i], grid[j]);
    };
    if (dom.shape() == DomainShape::Disk) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                size_t k = static_cast<size_t>(i) * n + j;
                if (i + 1 < n) edge(k, k + n);
                edge(k, static_cast<size_t>(i) * n + (j + 1) % n);
            }
    } else if (dom.shape() == DomainShape::HalfPlaneRect) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                size_t k = static_cast<size_t>(i) * n + j;
                if (i + 1 < n) edge(k, k + n);
                if (j + 1 < n) edge(k, k + 1);
            }
    } else {
        for (cplx w : grid)
            if (std::abs(s(w)) < tol) found.push_back(w);
    }

    // Interior zeros of F degenerate the metric for every parameter choice.
    HoloExpr dF = derivative(data.F());
    double med = 0.0;
    {
        std::vector<double> mags;
        for (cplx w : grid) mags.push_back(std::abs(heval(data.F(), w)));
        std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
        med = mags[mags.size() / 2];
    }
    for (cplx w0 : grid) {
        if (std::abs(heval(data.F(), w0)) > 0.05 * med) continue;
        cplx w = w0;
        bool ok = false;
        for (int it = 0; it < 40; ++it) {
            cplx f = heval(data.F(), w);
            if (std::abs(f) < 1e-13 * (1.0 + med)) { ok = true; break; }
            cplx df = heval(dF, w);
            if (df == cplx{0.0, 0.0}) break;
            cplx step = f / df;
            if (!finite(step)) break;
            w -= step;
            if (!dom.contains(w)) { ok = false; break; }
        }
        if (ok && dom.contains(w)) found.push_back(w);
    }

    std::sort(found.begin(), found.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    // collapse bisection duplicates
    std::vector<cplx> out;
    const double sep = 1e-7 * dom.diameter();
    for (cplx w : found) {
        bool dup = false;
        for (cplx u : out)
            if (std::abs(w - u) < sep) { dup = true; break; }
        if (!dup) out.push_back(w);
    }
    return out;
}

/// Dual surface point: (Re psi1, Re psi2, -Im psi3) from the same potentials.
/// Equals the quarter-turn J (multiplication by -i on the horizontal part) of
/// the conjugate surface with c negated.
inline SurfacePoint dual_point(const Potentials& pots, const DeformParams& p, cplx w) {
    const cplx rot = unit(p.theta);
    const double cl2 = p.c * p.lambda * p.lambda;
    const cplx h = pots.h(w), g = pots.g(w);
    const cplx psi1 = (rot / p.lambda) * (h + cl2 * g);
    const cplx psi2 = cplx{0.0, -1.0} * (rot / p.lambda) * (h - cl2 * g);
    const cplx psi3 = rot * pots.T(w);
    return {cplx{psi1.real(), psi2.real()}, -psi3.imag()};
}

inline SurfacePoint dual_point(const WeierstrassData& data, const DeformParams& p, cplx w) {
    return dual_point(potentials(data), p, w);
}

/// Rescale data to |c| = 1: (F, G) -> (F, sqrt|c| G). Returns the new data and
/// sign(c); heights of the original surface scale by sqrt|c| under the swap.
inline std::pair<WeierstrassData, int> normalize_to_unit_c(const WeierstrassData& data, double c) {
    if (c == 0.0) throw ZeroC("c = 0 admits no unit-|c| normalization");
    const double s = std::sqrt(std::abs(c));
    WeierstrassData out(data.F(), hprod({hlit(s), data.G()}), data.domain());
    if (data.has_closed_potentials())
        out.with_closed_potentials(data.closed_h(),
                                   hprod({hlit(std::abs(c)), data.closed_g()}),
                                   hprod({hlit(s), data.closed_T()}));
    return {out, c > 0.0 ? 1 : -1};
}

/// |phi1^2 + phi2^2 + c phi3^2| for the three coordinate integrands; zero in
/// exact arithmetic for every parameter choice.
inline double conformality_residual(const WeierstrassData& data, const DeformParams& p, cplx w) {
    const cplx e = unit(p.theta) / p.lambda;
    const cplx F = heval(data.F(), w);
    const cplx G = heval(data.G(), w);
    const cplx cl2G2 = p.c * p.lambda * p.lambda * G * G;
    const cplx phi1 = e * (1.0 - cl2G2) * F;
    const cplx phi2 = e * cplx{0.0, -1.0} * (1.0 + cl2G2) * F;
    const cplx phi3 = e * 2.0 * p.lambda * G * F;
    return std::abs(phi1 * phi1 + phi2 * phi2 + p.c * phi3 * phi3);
}

} // namespace zmc
