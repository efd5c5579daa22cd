#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "zmc/holo.hpp"
#include "zmc/domain.hpp"
#include "zmc/weierstrass.hpp"

namespace zmc {

/// A named example with closed-form potentials attached, ready for exact
/// evaluation and for cross-checking the quadrature path.
struct ExampleSpec {
    std::string id;
    int n;
    std::string description;
    WeierstrassData data;
};

namespace detail {
inline HoloExpr frac(HoloExpr num, HoloExpr den) {
    return hprod({std::move(num), hrecip(std::move(den))});
}
inline HoloExpr one_plus(HoloExpr e) { return hsum({hlit(1.0), std::move(e)}); }
inline HoloExpr one_minus(HoloExpr e) { return hsum({hlit(1.0), hprod({hlit(-1.0), std::move(e)})}); }
} // namespace detail

/// Data (1, w^n) on the unit disk, basepoint 0.
/// h = w, g = -w^{2n+1}/(2n+1), T = 2 w^{n+1}/(n+1).
inline ExampleSpec make_enneper(int n = 1) {
    if (n < 1) throw std::invalid_argument("enneper order must be >= 1");
    const cplx W{0.0, 0.0};
    WeierstrassData data(hlit(1.0), hpow(hvar(), n), DomainSpec::disk(1.0, W));
    data.with_closed_potentials(
        hvar(),
        hprod({hlit(-1.0 / (2.0 * n + 1.0)), hpow(hvar(), 2 * n + 1)}),
        hprod({hlit(2.0 / (n + 1.0)), hpow(hvar(), n + 1)}));
    return {"enneper", n, "polynomial data (1, w^n) on the unit disk", std::move(data)};
}

/// Data (1, e^{n w}) on a truncated left half-plane, basepoint -1.
/// h = w, g = -e^{2 n w}/(2n), T = (2/n) e^{n w}; the evaluator rebases all
/// three to vanish at the basepoint.
inline ExampleSpec make_exponential(int n = 1) {
    if (n < 1) throw std::invalid_argument("exponential order must be >= 1");
    WeierstrassData data(hlit(1.0), hexp(hprod({hlit(double(n)), hvar()})), DomainSpec::half_plane());
    data.with_closed_potentials(
        hvar(),
        hprod({hlit(-1.0 / (2.0 * n)), hexp(hprod({hlit(2.0 * n), hvar()}))}),
        hprod({hlit(2.0 / n), hexp(hprod({hlit(double(n)), hvar()}))}));
    return {"exponential", n, "data (1, e^{nw}) on a truncated left half-plane", std::move(data)};
}

/// Disk-restricted variant of the exponential data, for rendering only:
/// |G| exceeds 1 on part of the disk, so no unit region is certified.
inline ExampleSpec make_exponential_disk(int n = 1) {
    if (n < 1) throw std::invalid_argument("exponential order must be >= 1");
    WeierstrassData data(hlit(1.0), hexp(hprod({hlit(double(n)), hvar()})),
                         DomainSpec::disk(1.0, cplx{0.0, 0.0}));
    data.with_closed_potentials(
        hvar(),
        hprod({hlit(-1.0 / (2.0 * n)), hexp(hprod({hlit(2.0 * n), hvar()}))}),
        hprod({hlit(2.0 / n), hexp(hprod({hlit(double(n)), hvar()}))}));
    return {"exponential-disk", n, "data (1, e^{nw}) restricted to the unit disk", std::move(data)};
}

/// Data (4/(1-w^4), w) on the unit disk, basepoint 0. All three potentials are
/// logarithmic; each argument stays in the right half-plane on the disk, so the
/// principal branch is safe.
inline ExampleSpec make_scherk() {
    using detail::frac;
    using detail::one_minus;
    using detail::one_plus;
    HoloExpr W = hvar();
    HoloExpr iW = hprod({hlit(cplx{0.0, 1.0}), hvar()});
    HoloExpr W2 = hpow(hvar(), 2);
    HoloExpr F = hprod({hlit(4.0), hrecip(one_minus(hpow(hvar(), 4)))});
    WeierstrassData data(F, hvar(), DomainSpec::disk(1.0, cplx{0.0, 0.0}));
    HoloExpr log_ratio = hlog(frac(one_minus(iW), one_plus(iW)));  // = -2i arctan(w)
    data.with_closed_potentials(
        hsum({hlog(frac(one_plus(W), one_minus(W))), hprod({hlit(cplx{0.0, 1.0}), log_ratio})}),
        hsum({hlog(frac(one_minus(W), one_plus(W))), hprod({hlit(cplx{0.0, 1.0}), log_ratio})}),
        hprod({hlit(2.0), hlog(frac(one_plus(W2), one_minus(W2)))}));
    return {"scherk", 0, "data (4/(1-w^4), w) on the unit disk", std::move(data)};
}

/// Catalog dispatch. Unknown ids raise ParseError so the CLI can map them to
/// its usage exit code.
inline ExampleSpec catalog_make(const std::string& id, int n = 1) {
    if (id == "enneper") return make_enneper(n);
    if (id == "exponential") return make_exponential(n);
    if (id == "exponential-disk") return make_exponential_disk(n);
    if (id == "scherk") return make_scherk();
    throw ParseError("unknown example id: " + id);
}

struct CatalogEntry {
    std::string id;
    bool takes_n;
    std::string description;
};

inline std::vector<CatalogEntry> catalog_list() {
    return {
        {"enneper", true, "polynomial data (1, w^n) on the unit disk"},
        {"exponential", true, "data (1, e^{nw}) on a truncated left half-plane"},
        {"exponential-disk", true, "data (1, e^{nw}) restricted to the unit disk (render only)"},
        {"scherk", false, "data (4/(1-w^4), w) on the unit disk"},
    };
}

} // namespace zmc
