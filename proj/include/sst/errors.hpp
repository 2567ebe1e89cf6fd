#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sst {

// Syntax failure while parsing an expression.  `offset` is the byte offset
// into the source text; `expected` lists what the parser would have accepted.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t offset, std::vector<std::string> expected = {})
        : std::runtime_error(std::move(msg)), offset(offset), expected(std::move(expected)) {}

    std::size_t offset;
    std::vector<std::string> expected;
};

// Domain failure while evaluating an expression (log of a non-positive value,
// division by zero, |x| at 0 under differentiation, ...).  `offset` points at
// the subexpression that failed.
class EvalError : public std::runtime_error {
public:
    EvalError(std::string msg, std::size_t offset)
        : std::runtime_error(std::move(msg)), offset(offset) {}

    std::size_t offset;
};

// Raised when an expression references a coordinate absent from the chart it
// is being bound against, or when shapes/names don't line up.
class BindError : public std::runtime_error {
public:
    explicit BindError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Geometry-level failure: degenerate metric, bad signature, dimension cap.
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Manifest / configuration validation failure (maps to CLI exit code 3).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

} // namespace sst
