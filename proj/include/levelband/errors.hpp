#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levelband {

/// Base class for all levelband errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- field ---
struct UnknownField : Error {
    explicit UnknownField(const std::string& name)
        : Error("unknown builtin field: " + name) {}
};
struct BadParamArity : Error {
    using Error::Error;
};
struct GridTooSmall : Error {
    using Error::Error;
};
struct NonFiniteSample : Error {
    using Error::Error;
};

// --- exprlang ---
struct SyntaxError : Error {
    SyntaxError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
    std::size_t offset;
};
struct UnknownFunction : Error {
    UnknownFunction(const std::string& name, std::size_t offset)
        : Error("unknown function: " + name + " (at offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};
struct UnknownVariable : Error {
    UnknownVariable(const std::string& name, std::size_t offset)
        : Error("unknown variable: " + name + " (at offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};
struct DomainFault : Error {
    DomainFault(const std::string& what, std::size_t offset, double px, double py)
        : Error(what + " (subexpression at offset " + std::to_string(offset) + ", point (" +
                std::to_string(px) + ", " + std::to_string(py) + "))"),
          offset(offset), px(px), py(py) {}
    std::size_t offset;
    double px, py;
};

// --- diffgeo ---
struct NearCriticalPoint : Error {
    explicit NearCriticalPoint(double grad_norm)
        : Error("gradient magnitude " + std::to_string(grad_norm) +
                " below tolerance; level frame undefined"),
          grad_norm(grad_norm) {}
    NearCriticalPoint(double grad_norm, double px, double py)
        : Error("gradient magnitude " + std::to_string(grad_norm) +
                " below tolerance at (" + std::to_string(px) + ", " + std::to_string(py) +
                "); level frame undefined"),
          grad_norm(grad_norm) {}
    double grad_norm;
};
struct NonUnitDirection : Error {
    using Error::Error;
};

// --- contour ---
struct AmbiguousSaddleCell : Error {
    AmbiguousSaddleCell(int cx, int cy)
        : Error("ambiguous saddle cell (" + std::to_string(cx) + ", " + std::to_string(cy) +
                "): center value within level tolerance"),
          cx(cx), cy(cy) {}
    int cx, cy;
};
struct InconsistentSigma : Error {
    using Error::Error;
};
struct OpenContour : Error {
    using Error::Error;
};

// --- band ---
struct BandEmpty : Error {
    using Error::Error;
};
struct SigmaUnknown : Error {
    using Error::Error;
};
struct NonCompactLevel : Error {
    using Error::Error;
};

// --- i/o plumbing ---
struct FileFormatError : Error {
    using Error::Error;
};

} // namespace levelband
