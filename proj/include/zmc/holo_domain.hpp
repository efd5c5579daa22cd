#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "zmc/domain.hpp"
#include "zmc/holo.hpp"

namespace zmc {

/// Vets an expression against a domain: finite evaluation on the sample set,
/// no pole guard vanishing there, and no log branch cut touching or crossing
/// the (slightly inset) boundary sample polyline. Throws PoleOrBranchCut.
inline void validate_holo_on_domain(const HoloExpr& e, const DomainSpec& dom,
                                    const std::string& label) {
    const auto samples = dom.validation_samples();
    for (cplx w : samples) {
        try {
            (void)heval(e, w);
        } catch (const PoleOrBranchCut& err) {
            throw PoleOrBranchCut(label + " singular inside domain near w=(" +
                                  fmt17(w.real()) + "," + fmt17(w.imag()) + "): " + err.what());
        }
    }
    const auto guards = singular_guards(e);
    if (guards.empty()) return;

    const auto rim = dom.boundary_polyline(512, 1e-6);
    const double scale = dom.diameter();
    for (const auto& g : guards) {
        std::vector<cplx> vals;
        vals.reserve(rim.size());
        for (cplx w : rim) vals.push_back(heval(g.inner, w));
        for (size_t i = 0; i < vals.size(); ++i) {
            cplx v = vals[i];
            if (!g.is_log) {
                if (std::abs(v) < 1e-13 * (1.0 + scale))
                    throw PoleOrBranchCut(label + ": pole guard vanishes on boundary polyline");
                continue;
            }
            // Principal-branch cut is (-inf, 0]; reject on-cut values and
            // crossings between consecutive rim samples.
            if (v.real() <= 0.0 && std::abs(v.imag()) < 1e-13 * (1.0 + std::abs(v.real())))
                throw PoleOrBranchCut(label + ": log branch cut meets boundary polyline");
            cplx u = vals[(i + 1) % vals.size()];
            if (v.real() < 0.0 && u.real() < 0.0 &&
                ((v.imag() < 0.0) != (u.imag() < 0.0)))
                throw PoleOrBranchCut(label + ": log branch cut crosses boundary polyline");
        }
        if (g.is_log) {
            for (cplx w : samples) {
                cplx v = heval(g.inner, w);
                if (v.real() <= 0.0 && std::abs(v.imag()) < 1e-13 * (1.0 + std::abs(v.real())))
                    throw PoleOrBranchCut(label + ": log branch cut meets interior sample");
            }
        }
    }
}

} // namespace zmc
