#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace p1glue {

// All library errors carry a stable machine-readable code; the CLI maps
// codes to exit codes, so the set below is part of the tool's contract.
class Error : public std::runtime_error {
   public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

   private:
    std::string code_;
};

struct MixedRingsError : Error {
    explicit MixedRingsError(const std::string& msg = "operands belong to different rings")
        : Error("mixed_rings", msg) {}
};

struct NotAUnitError : Error {
    explicit NotAUnitError(const std::string& msg = "element is not invertible")
        : Error("not_a_unit", msg) {}
};

struct NotInvertibleError : Error {
    explicit NotInvertibleError(const std::string& msg = "matrix is not invertible")
        : Error("not_invertible", msg) {}
};

struct SingularMatrixError : Error {
    explicit SingularMatrixError(const std::string& msg = "matrix has zero determinant")
        : Error("singular_matrix", msg) {}
};

struct PrecisionExhaustedError : Error {
    explicit PrecisionExhaustedError(const std::string& msg)
        : Error("precision_exhausted", msg) {}
};

struct UndecidableError : Error {
    explicit UndecidableError(const std::string& msg = "known coefficient window is insufficient")
        : Error("undecidable", msg) {}
};

struct CapExceededError : Error {
    explicit CapExceededError(const std::string& msg)
        : Error("cap_exceeded", msg) {}
};

struct UnsupportedRingError : Error {
    explicit UnsupportedRingError(const std::string& msg)
        : Error("unsupported_ring", msg) {}
};

struct UnsupportedTransitionError : Error {
    explicit UnsupportedTransitionError(const std::string& msg)
        : Error("unsupported_transition", msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse_error", msg) {}
};

}  // namespace p1glue
