#pragma once

#include <stdexcept>
#include <string>

namespace volchain {

struct WrongComplexError : std::runtime_error {
    explicit WrongComplexError(const std::string& m) : std::runtime_error("wrong-complex: " + m) {}
};

struct InvalidIsometryError : std::runtime_error {
    explicit InvalidIsometryError(const std::string& m) : std::runtime_error("invalid-isometry: " + m) {}
};

struct InvalidPointError : std::runtime_error {
    explicit InvalidPointError(const std::string& m) : std::runtime_error("invalid-point: " + m) {}
};

// Quadrature could not reach the requested tolerance; carries the best estimate.
struct ToleranceNotMetError : std::runtime_error {
    ToleranceNotMetError(const std::string& m, double best_estimate, double achieved)
        : std::runtime_error("tolerance-not-met: " + m + " (best estimate " +
                             std::to_string(best_estimate) + ", error est " +
                             std::to_string(achieved) + ")"),
          best(best_estimate), error_estimate(achieved) {}
    double best;
    double error_estimate;
};

struct MalformedWordError : std::runtime_error {
    explicit MalformedWordError(const std::string& m) : std::runtime_error("malformed-word: " + m) {}
};

struct MalformedDecompositionError : std::runtime_error {
    explicit MalformedDecompositionError(const std::string& m)
        : std::runtime_error("malformed-decomposition: " + m) {}
};

struct MarkingMismatchError : std::runtime_error {
    explicit MarkingMismatchError(const std::string& m)
        : std::runtime_error("marking-mismatch: " + m) {}
};

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& m)
        : std::runtime_error("precondition-violation: " + m) {}
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& m, int line_no, int col_no = 0)
        : std::runtime_error("parse error at line " + std::to_string(line_no) +
                             (col_no > 0 ? ", column " + std::to_string(col_no) : std::string{}) +
                             ": " + m),
          line(line_no), col(col_no) {}
    int line;
    int col;
};

}  // namespace volchain
