#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "zmc/complex_util.hpp"
#include "zmc/domain.hpp"
#include "zmc/errors.hpp"
#include "zmc/holo.hpp"
#include "zmc/weierstrass.hpp"

namespace zmc {

namespace detail {

/// Recursive-descent parser for holomorphic expressions:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := ('+'|'-')* power
///   power  := atom ('^' ('-'? digits))?
///   atom   := number | 'w' | 'i' | 'pi' | 'exp' '(' expr ')' | 'log' '(' expr ')' | '(' expr ')'
class ExprParser {
public:
    explicit ExprParser(const std::string& src) : s_(src) {}

    HoloExpr parse() {
        HoloExpr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("expression error at offset " + std::to_string(pos_) + ": " + what);
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    HoloExpr expr() {
        std::vector<HoloExpr> terms;
        terms.push_back(term());
        for (;;) {
            if (eat('+')) terms.push_back(term());
            else if (eat('-')) terms.push_back(hprod({hlit(-1.0), term()}));
            else break;
        }
        return hsum(std::move(terms));
    }

    HoloExpr term() {
        std::vector<HoloExpr> factors;
        factors.push_back(factor());
        for (;;) {
            if (eat('*')) factors.push_back(factor());
            else if (eat('/')) factors.push_back(hrecip(factor()));
            else break;
        }
        return hprod(std::move(factors));
    }

    HoloExpr factor() {
        int sign = 1;
        for (;;) {
            if (eat('+')) continue;
            if (eat('-')) {
                sign = -sign;
                continue;
            }
            break;
        }
        HoloExpr e = power();
        return sign < 0 ? hprod({hlit(-1.0), std::move(e)}) : e;
    }

    HoloExpr power() {
        HoloExpr base = atom();
        if (eat('^')) {
            skip_ws();
            bool negexp = eat('-');
            skip_ws();
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("exponent must be an integer");
            long n = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                n = n * 10 + (s_[pos_++] - '0');
            return hpow(std::move(base), negexp ? -n : n);
        }
        return base;
    }

    HoloExpr atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            HoloExpr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<size_t>(end - begin);
            return hlit(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '_'))
                ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "w") return hvar();
            if (name == "i") return hlit(cplx{0.0, 1.0});
            if (name == "pi") return hlit(pi);
            if (name == "exp" || name == "log") {
                if (!eat('(')) fail("expected '(' after " + name);
                HoloExpr arg = expr();
                if (!eat(')')) fail("expected ')'");
                return name == "exp" ? hexp(std::move(arg)) : hlog(std::move(arg));
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

inline cplx json_point(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(std::string(what) + " must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace detail

/// Parse one holomorphic expression in the variable w.
inline HoloExpr parse_holo(const std::string& src) { return detail::ExprParser(src).parse(); }

/// Parse a data file:
///   {"F": "<expr>", "G": "<expr>",
///    "domain": {"type": "disk", "radius": 1.0, "base": [0,0]}
///            | {"type": "half_plane", "width": 6, "height": 6, "inset": 1e-3, "base": [-1,0]}
///            | {"type": "polygon", "vertices": [[x,y],...], "base": [x,y]},
///    "potentials": {"h": "<expr>", "g": "<expr>", "T": "<expr>"}}   (optional)
/// The domain defaults to the unit disk about 0. Malformed input raises
/// ParseError; domain validation errors propagate from construction.
inline WeierstrassData parse_data_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("F") || !j.contains("G") || !j["F"].is_string() ||
        !j["G"].is_string())
        throw ParseError("data file needs string fields F and G");
    HoloExpr F = parse_holo(j["F"].get<std::string>());
    HoloExpr G = parse_holo(j["G"].get<std::string>());

    DomainSpec dom = DomainSpec::disk(1.0);
    if (j.contains("domain")) {
        const auto& d = j["domain"];
        if (!d.is_object() || !d.contains("type") || !d["type"].is_string())
            throw ParseError("domain needs a type");
        const std::string type = d["type"].get<std::string>();
        if (type == "disk") {
            const double radius = d.value("radius", 1.0);
            const cplx base = d.contains("base") ? detail::json_point(d["base"], "base")
                                                 : cplx{0.0, 0.0};
            dom = DomainSpec::disk(radius, base);
        } else if (type == "half_plane") {
            const double width = d.value("width", 6.0);
            const double height = d.value("height", 6.0);
            const double inset = d.value("inset", 1e-3);
            const cplx base = d.contains("base") ? detail::json_point(d["base"], "base")
                                                 : cplx{-1.0, 0.0};
            dom = DomainSpec::half_plane(width, height, inset, base);
        } else if (type == "polygon") {
            if (!d.contains("vertices") || !d["vertices"].is_array() || !d.contains("base"))
                throw ParseError("polygon domain needs vertices and base");
            std::vector<cplx> verts;
            for (const auto& v : d["vertices"]) verts.push_back(detail::json_point(v, "vertex"));
            dom = DomainSpec::polygon(std::move(verts), detail::json_point(d["base"], "base"));
        } else {
            throw ParseError("unknown domain type: " + type);
        }
    }

    WeierstrassData data(std::move(F), std::move(G), std::move(dom));
    if (j.contains("potentials")) {
        const auto& p = j["potentials"];
        if (!p.is_object() || !p.contains("h") || !p.contains("g") || !p.contains("T"))
            throw ParseError("potentials need h, g and T");
        data.with_closed_potentials(parse_holo(p["h"].get<std::string>()),
                                    parse_holo(p["g"].get<std::string>()),
                                    parse_holo(p["T"].get<std::string>()));
    }
    return data;
}

} // namespace zmc
