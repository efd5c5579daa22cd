#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "zmc/complex_util.hpp"
#include "zmc/domain.hpp"
#include "zmc/errors.hpp"
#include "zmc/holo.hpp"
#include "zmc/weierstrass.hpp"

namespace zmc {

struct ConvexityReport {
    bool convex = false;
    double min_value = 0.0;  // min of Re(1 + w phi''/phi') over the samples
    cplx argmin;
};

namespace detail {

/// Sign census of the convexity operator Re(1 + w d2/d1) on an origin-centered
/// disk, sampled on an interior grid plus a near-boundary rim. d1 and d2 are
/// the first two derivatives of the map under test.
inline ConvexityReport convexity_census(const HoloExpr& d1e, const HoloExpr& d2e,
                                        const DomainSpec& dom, int n) {
    if (dom.shape() != DomainShape::Disk)
        throw std::invalid_argument("convexity operator requires an origin-centered disk domain");
    if (n < 8) throw ResolutionTooLow("convexity census needs n >= 8");
    std::vector<cplx> samples = dom.interior_grid(n);
    auto rim = dom.boundary_polyline(4 * n, 1e-6);
    samples.insert(samples.end(), rim.begin(), rim.end());

    double d1max = 0.0;
    std::vector<cplx> d1v(samples.size()), d2v(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        d1v[i] = heval(d1e, samples[i]);
        d2v[i] = heval(d2e, samples[i]);
        d1max = std::max(d1max, std::abs(d1v[i]));
    }
    ConvexityReport rep;
    rep.min_value = 1e300;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (std::abs(d1v[i]) < 1e-13 * (1.0 + d1max))
            throw DerivativeVanishes("derivative vanishes near (" +
                                     std::to_string(samples[i].real()) + ", " +
                                     std::to_string(samples[i].imag()) + ")");
        const double v = (1.0 + samples[i] * d2v[i] / d1v[i]).real();
        if (v < rep.min_value) {
            rep.min_value = v;
            rep.argmin = samples[i];
        }
    }
    rep.convex = rep.min_value > -1e-9;
    return rep;
}

} // namespace detail

/// Convexity of the image phi(disk) for a locally injective holomorphic phi.
inline ConvexityReport analytic_convexity(const HoloExpr& phi, const DomainSpec& dom, int n = 64) {
    HoloExpr d1 = derivative(phi);
    return detail::convexity_census(d1, derivative(d1), dom, n);
}

/// Convexity of the image of the holomorphic potential h with h' = F, decided
/// directly from the data (the operator only consults F and F').
inline ConvexityReport weierstrass_convexity(const WeierstrassData& data, int n = 64) {
    return detail::convexity_census(data.F(), derivative(data.F()), data.domain(), n);
}

} // namespace zmc
