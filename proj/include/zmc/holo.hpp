#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "zmc/complex_util.hpp"
#include "zmc/errors.hpp"

namespace zmc {

// Closed expression grammar for holomorphic functions of one complex variable.
// Every node is immutable; HoloExpr is a cheap shared handle, so derivatives and
// rewrites share structure freely.
enum class HoloKind {
    Variable,    // w
    Constant,    // a
    Sum,         // k0 + k1 + ...
    Product,     // k0 * k1 * ...
    IntPower,    // k0^n, integer n
    Reciprocal,  // 1 / k0
    Exp,         // exp(k0)
    Log,         // principal log(k0)
    Affine       // k0(a*w + b), composition with an affine map
};

class HoloExpr;

namespace detail {
struct HoloNode {
    HoloKind kind;
    cplx a{0.0, 0.0};  // Constant value, or the affine slope
    cplx b{0.0, 0.0};  // affine offset
    long power = 0;
    std::vector<HoloExpr> kids;
};
} // namespace detail

class HoloExpr {
public:
    HoloExpr() = default;
    explicit HoloExpr(std::shared_ptr<const detail::HoloNode> n) : node_(std::move(n)) {}

    explicit operator bool() const { return static_cast<bool>(node_); }
    const detail::HoloNode& node() const { return *node_; }
    HoloKind kind() const { return node_->kind; }

private:
    std::shared_ptr<const detail::HoloNode> node_;
};

namespace detail {
inline HoloExpr make_node(HoloNode n) {
    return HoloExpr(std::make_shared<const HoloNode>(std::move(n)));
}
} // namespace detail

inline HoloExpr hvar() {
    return detail::make_node({HoloKind::Variable});
}

inline HoloExpr hlit(cplx value) {
    detail::HoloNode n{HoloKind::Constant};
    n.a = value;
    return detail::make_node(std::move(n));
}

inline HoloExpr hlit(double value) { return hlit(cplx{value, 0.0}); }

inline bool is_const(const HoloExpr& e, cplx value) {
    return e.kind() == HoloKind::Constant && e.node().a == value;
}

inline bool is_const(const HoloExpr& e) { return e.kind() == HoloKind::Constant; }

// Smart constructors fold constants and drop units so derivative trees stay small.

inline HoloExpr hsum(std::vector<HoloExpr> terms) {
    std::vector<HoloExpr> out;
    cplx acc{0.0, 0.0};
    for (auto& t : terms) {
        if (!t) continue;
        if (t.kind() == HoloKind::Sum) {
            for (const auto& k : t.node().kids) {
                if (is_const(k)) acc += k.node().a;
                else out.push_back(k);
            }
        } else if (is_const(t)) {
            acc += t.node().a;
        } else {
            out.push_back(std::move(t));
        }
    }
    if (acc != cplx{0.0, 0.0} || out.empty()) out.push_back(hlit(acc));
    if (out.size() == 1) return out.front();
    detail::HoloNode n{HoloKind::Sum};
    n.kids = std::move(out);
    return detail::make_node(std::move(n));
}

inline HoloExpr hprod(std::vector<HoloExpr> factors) {
    std::vector<HoloExpr> out;
    cplx acc{1.0, 0.0};
    for (auto& f : factors) {
        if (!f) continue;
        if (f.kind() == HoloKind::Product) {
            for (const auto& k : f.node().kids) {
                if (is_const(k)) acc *= k.node().a;
                else out.push_back(k);
            }
        } else if (is_const(f)) {
            acc *= f.node().a;
        } else {
            out.push_back(std::move(f));
        }
    }
    if (acc == cplx{0.0, 0.0}) return hlit(0.0);
    if (acc != cplx{1.0, 0.0} || out.empty()) out.insert(out.begin(), hlit(acc));
    if (out.size() == 1) return out.front();
    detail::HoloNode n{HoloKind::Product};
    n.kids = std::move(out);
    return detail::make_node(std::move(n));
}

inline HoloExpr hpow(HoloExpr base, long n) {
    if (n == 0) return hlit(1.0);
    if (n == 1) return base;
    if (is_const(base)) return hlit(ipow(base.node().a, n));
    detail::HoloNode node{HoloKind::IntPower};
    node.power = n;
    node.kids = {std::move(base)};
    return detail::make_node(std::move(node));
}

inline HoloExpr hrecip(HoloExpr e) {
    if (is_const(e) && e.node().a != cplx{0.0, 0.0}) return hlit(1.0 / e.node().a);
    if (e.kind() == HoloKind::Reciprocal) return e.node().kids.front();
    detail::HoloNode n{HoloKind::Reciprocal};
    n.kids = {std::move(e)};
    return detail::make_node(std::move(n));
}

inline HoloExpr hexp(HoloExpr e) {
    if (is_const(e)) return hlit(std::exp(e.node().a));
    detail::HoloNode n{HoloKind::Exp};
    n.kids = {std::move(e)};
    return detail::make_node(std::move(n));
}

inline HoloExpr hlog(HoloExpr e) {
    if (is_const(e) && e.node().a != cplx{0.0, 0.0}) return hlit(std::log(e.node().a));
    detail::HoloNode n{HoloKind::Log};
    n.kids = {std::move(e)};
    return detail::make_node(std::move(n));
}

/// e(a*w + b); nested affine compositions collapse into one.
inline HoloExpr haffine(HoloExpr e, cplx a, cplx b) {
    if (a == cplx{1.0, 0.0} && b == cplx{0.0, 0.0}) return e;
    if (is_const(e)) return e;
    if (e.kind() == HoloKind::Affine) {
        cplx a2 = e.node().a, b2 = e.node().b;
        detail::HoloNode n{HoloKind::Affine};
        n.a = a2 * a;
        n.b = a2 * b + b2;
        n.kids = {e.node().kids.front()};
        return detail::make_node(std::move(n));
    }
    detail::HoloNode n{HoloKind::Affine};
    n.a = a;
    n.b = b;
    n.kids = {std::move(e)};
    return detail::make_node(std::move(n));
}

inline HoloExpr operator+(HoloExpr l, HoloExpr r) { return hsum({std::move(l), std::move(r)}); }
inline HoloExpr operator-(HoloExpr l, HoloExpr r) {
    return hsum({std::move(l), hprod({hlit(-1.0), std::move(r)})});
}
inline HoloExpr operator*(HoloExpr l, HoloExpr r) { return hprod({std::move(l), std::move(r)}); }
inline HoloExpr operator*(cplx l, HoloExpr r) { return hprod({hlit(l), std::move(r)}); }
inline HoloExpr operator*(double l, HoloExpr r) { return hprod({hlit(l), std::move(r)}); }
inline HoloExpr operator/(HoloExpr l, HoloExpr r) { return hprod({std::move(l), hrecip(std::move(r))}); }
inline HoloExpr operator-(HoloExpr e) { return hprod({hlit(-1.0), std::move(e)}); }

/// Point evaluation. Throws PoleOrBranchCut at poles, branch points, and non-finite results.
inline cplx heval(const HoloExpr& e, cplx w) {
    const auto& n = e.node();
    switch (n.kind) {
        case HoloKind::Variable: return w;
        case HoloKind::Constant: return n.a;
        case HoloKind::Sum: {
            cplx s{0.0, 0.0};
            for (const auto& k : n.kids) s += heval(k, w);
            return s;
        }
        case HoloKind::Product: {
            cplx p{1.0, 0.0};
            for (const auto& k : n.kids) p *= heval(k, w);
            return p;
        }
        case HoloKind::IntPower: {
            cplx v = heval(n.kids.front(), w);
            if (n.power < 0 && v == cplx{0.0, 0.0})
                throw PoleOrBranchCut("negative power of zero");
            return ipow(v, n.power);
        }
        case HoloKind::Reciprocal: {
            cplx v = heval(n.kids.front(), w);
            if (v == cplx{0.0, 0.0}) throw PoleOrBranchCut("reciprocal of zero");
            return 1.0 / v;
        }
        case HoloKind::Exp: {
            cplx v = std::exp(heval(n.kids.front(), w));
            if (!finite(v)) throw PoleOrBranchCut("exp overflow");
            return v;
        }
        case HoloKind::Log: {
            cplx v = heval(n.kids.front(), w);
            if (v == cplx{0.0, 0.0}) throw PoleOrBranchCut("log of zero");
            return std::log(v);
        }
        case HoloKind::Affine:
            return heval(n.kids.front(), n.a * w + n.b);
    }
    throw PoleOrBranchCut("corrupt expression node");
}

/// Exact symbolic derivative.
inline HoloExpr derivative(const HoloExpr& e) {
    const auto& n = e.node();
    switch (n.kind) {
        case HoloKind::Variable: return hlit(1.0);
        case HoloKind::Constant: return hlit(0.0);
        case HoloKind::Sum: {
            std::vector<HoloExpr> terms;
            terms.reserve(n.kids.size());
            for (const auto& k : n.kids) terms.push_back(derivative(k));
            return hsum(std::move(terms));
        }
        case HoloKind::Product: {
            std::vector<HoloExpr> terms;
            for (size_t i = 0; i < n.kids.size(); ++i) {
                std::vector<HoloExpr> factors;
                for (size_t j = 0; j < n.kids.size(); ++j)
                    factors.push_back(i == j ? derivative(n.kids[j]) : n.kids[j]);
                terms.push_back(hprod(std::move(factors)));
            }
            return hsum(std::move(terms));
        }
        case HoloKind::IntPower:
            return hprod({hlit(static_cast<double>(n.power)),
                          hpow(n.kids.front(), n.power - 1), derivative(n.kids.front())});
        case HoloKind::Reciprocal:
            return hprod({hlit(-1.0), derivative(n.kids.front()),
                          hrecip(hpow(n.kids.front(), 2))});
        case HoloKind::Exp:
            return hprod({derivative(n.kids.front()), e});
        case HoloKind::Log:
            return hprod({derivative(n.kids.front()), hrecip(n.kids.front())});
        case HoloKind::Affine:
            return hprod({hlit(n.a), haffine(derivative(n.kids.front()), n.a, n.b)});
    }
    throw PoleOrBranchCut("corrupt expression node");
}

inline bool depends_on_w(const HoloExpr& e) {
    const auto& n = e.node();
    if (n.kind == HoloKind::Variable) return true;
    for (const auto& k : n.kids)
        if (depends_on_w(k)) return true;
    return false;
}

/// Sub-expressions whose zeros (or, for logs, negative-real-axis values) make the
/// parent expression singular; the domain validator samples each of these.
struct SingularGuard {
    HoloExpr inner;
    bool is_log;
};

inline void collect_singular_guards(const HoloExpr& e, std::vector<SingularGuard>& out,
                                    cplx scale = {1.0, 0.0}, cplx shift = {0.0, 0.0}) {
    const auto& n = e.node();
    // Track affine rewrites so guards are expressed in the original variable.
    if (n.kind == HoloKind::Affine) {
        collect_singular_guards(n.kids.front(), out, n.a * scale, n.a * shift + n.b);
        return;
    }
    auto rebased = [&](const HoloExpr& inner) {
        return (scale == cplx{1.0, 0.0} && shift == cplx{0.0, 0.0})
                   ? inner
                   : haffine(inner, scale, shift);
    };
    if (n.kind == HoloKind::Reciprocal || (n.kind == HoloKind::IntPower && n.power < 0))
        out.push_back({rebased(n.kids.front()), false});
    if (n.kind == HoloKind::Log)
        out.push_back({rebased(n.kids.front()), true});
    for (const auto& k : n.kids) collect_singular_guards(k, out, scale, shift);
}

inline std::vector<SingularGuard> singular_guards(const HoloExpr& e) {
    std::vector<SingularGuard> out;
    collect_singular_guards(e, out);
    return out;
}

inline std::string to_string(const HoloExpr& e) {
    const auto& n = e.node();
    auto num = [](cplx z) {
        if (z.imag() == 0.0) return fmt17(z.real());
        return "(" + fmt17(z.real()) + "+" + fmt17(z.imag()) + "i)";
    };
    switch (n.kind) {
        case HoloKind::Variable: return "w";
        case HoloKind::Constant: return num(n.a);
        case HoloKind::Sum: {
            std::string s = "(";
            for (size_t i = 0; i < n.kids.size(); ++i)
                s += (i ? " + " : "") + to_string(n.kids[i]);
            return s + ")";
        }
        case HoloKind::Product: {
            std::string s = "(";
            for (size_t i = 0; i < n.kids.size(); ++i)
                s += (i ? "*" : "") + to_string(n.kids[i]);
            return s + ")";
        }
        case HoloKind::IntPower:
            return to_string(n.kids.front()) + "^" + std::to_string(n.power);
        case HoloKind::Reciprocal: return "1/" + to_string(n.kids.front());
        case HoloKind::Exp: return "exp(" + to_string(n.kids.front()) + ")";
        case HoloKind::Log: return "log(" + to_string(n.kids.front()) + ")";
        case HoloKind::Affine:
            return to_string(n.kids.front()) + "@(" + num(n.a) + "w+" + num(n.b) + ")";
    }
    return "?";
}

} // namespace zmc
