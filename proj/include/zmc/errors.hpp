#pragma once

#include <stdexcept>
#include <string>

namespace zmc {

/// Evaluation hit a pole, a branch point, or a branch cut of the expression.
struct PoleOrBranchCut : std::runtime_error {
    explicit PoleOrBranchCut(const std::string& msg) : std::runtime_error(msg) {}
};

/// Adaptive quadrature exhausted its subdivision budget without meeting the tolerance.
struct QuadratureNoConvergence : std::runtime_error {
    explicit QuadratureNoConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

/// An integration path left the domain it was supposed to stay inside.
struct PathExitsDomain : std::runtime_error {
    explicit PathExitsDomain(const std::string& msg) : std::runtime_error(msg) {}
};

/// A grid-based routine was asked to run below its minimum resolution.
struct ResolutionTooLow : std::runtime_error {
    explicit ResolutionTooLow(const std::string& msg) : std::runtime_error(msg) {}
};

/// classify_image was handed a self-intersecting polyline.
struct NonSimplePolyline : std::runtime_error {
    explicit NonSimplePolyline(const std::string& msg) : std::runtime_error(msg) {}
};

/// A convexity criterion needs phi' != 0 and found a vanishing derivative instead.
struct DerivativeVanishes : std::runtime_error {
    explicit DerivativeVanishes(const std::string& msg) : std::runtime_error(msg) {}
};

/// A certification hypothesis failed an explicit check; the message says which one.
struct HypothesisFailed : std::runtime_error {
    explicit HypothesisFailed(const std::string& msg) : std::runtime_error(msg) {}
};

/// A seed deformation lies outside the parameter bound its theorem allows.
struct SeedOutsideBound : std::runtime_error {
    explicit SeedOutsideBound(const std::string& msg) : std::runtime_error(msg) {}
};

/// c = 0 has no unit-|c| normalization.
struct ZeroC : std::runtime_error {
    explicit ZeroC(const std::string& msg) : std::runtime_error(msg) {}
};

/// Expression or data-file text failed to parse.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace zmc
