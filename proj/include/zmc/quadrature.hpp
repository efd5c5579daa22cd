#pragma once

#include <cstdlib>
#include <functional>
#include <vector>

#include "zmc/complex_util.hpp"
#include "zmc/domain.hpp"
#include "zmc/errors.hpp"
#include "zmc/holo.hpp"

namespace zmc {

/// Default absolute quadrature tolerance; ZMC_DEFAULT_TOL overrides it.
inline double default_quad_tol() {
    static const double tol = [] {
        if (const char* s = std::getenv("ZMC_DEFAULT_TOL")) {
            char* end = nullptr;
            double v = std::strtod(s, &end);
            if (end != s && v > 0.0) return v;
        }
        return 1e-10;
    }();
    return tol;
}

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1]; positive abscissae, symmetric.
inline constexpr double gk_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gk_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    cplx kronrod;
    double err;
};

template <class F>
PanelResult gk15(const F& f, double t0, double t1) {
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    cplx gauss{0.0, 0.0}, kron{0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        if (i == 7) {
            cplx v = f(mid);
            kron += gk_wk[7] * v;
            gauss += gk_wg[3] * v;
            break;
        }
        cplx lo = f(mid - half * gk_x[i]);
        cplx hi = f(mid + half * gk_x[i]);
        kron += gk_wk[i] * (lo + hi);
        if (i % 2 == 1) gauss += gk_wg[i / 2] * (lo + hi);
    }
    kron *= half;
    gauss *= half;
    return {kron, std::abs(kron - gauss)};
}

} // namespace detail

/// Adaptive Gauss-Kronrod integral of f along the straight segment [z0, z1],
/// absolute error <= tol. Throws QuadratureNoConvergence when the panel budget
/// or the minimum panel width is exhausted first.
template <class F>
cplx integrate_segment(const F& f, cplx z0, cplx z1, double tol) {
    if (z0 == z1) return {0.0, 0.0};
    const cplx dz = z1 - z0;
    auto g = [&](double t) { return f(z0 + t * dz) * dz; };

    struct Panel {
        double t0, t1;
    };
    std::vector<Panel> stack{{0.0, 1.0}};
    cplx total{0.0, 0.0};
    int budget = 4000;
    while (!stack.empty()) {
        if (--budget < 0)
            throw QuadratureNoConvergence("panel budget exhausted");
        auto [t0, t1] = stack.back();
        stack.pop_back();
        auto r = detail::gk15(g, t0, t1);
        if (r.err <= tol * (t1 - t0) || r.err <= 1e-16 * std::abs(r.kronrod)) {
            total += r.kronrod;
            continue;
        }
        if (t1 - t0 < 1e-12)
            throw QuadratureNoConvergence("panel width underflow without convergence");
        double mid = 0.5 * (t0 + t1);
        stack.push_back({t0, mid});
        stack.push_back({mid, t1});
    }
    return total;
}

/// Integral of the expression from `base` to `w` along a straight segment that
/// must stay inside `dom` (our domains are all star-shaped about the basepoint,
/// so basepoint-rooted segments are the canonical routes). The endpoint may sit
/// on the closure; strictly interior sample points are enforced in between.
inline cplx path_antiderivative(const HoloExpr& e, cplx base, cplx w, const DomainSpec& dom,
                                double tol = default_quad_tol()) {
    if (w == base) return {0.0, 0.0};
    if (!dom.contains(base)) throw PathExitsDomain("path start not interior");
    const double slack = 2e-9 * dom.diameter();
    if (!dom.contains(w) && dom.boundary_distance(w) > slack) {
        // boundary_distance is 0 outside; re-test by nudging toward the base.
        cplx probe = w + 1e-9 * (base - w);
        if (!dom.contains(probe)) throw PathExitsDomain("path endpoint outside domain");
    }
    for (int k = 0; k < 128; ++k) {
        double t = (k + 0.5) / 128.0;
        if (!dom.contains(base + t * (w - base)))
            throw PathExitsDomain("segment leaves domain");
    }
    return integrate_segment([&](cplx z) { return heval(e, z); }, base, w, tol);
}

} // namespace zmc
