#pragma once

#include <stdexcept>
#include <string>

namespace l2lab {

// Bad input: malformed JSON, shape mismatches, out-of-range words,
// inconsistent kernel dimensions. CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A configured cap was hit: support-size limit, quotient level beyond the
// supported range, grid too large. CLI maps this to exit code 3.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Closed-form oracle could not certify its answer (e.g. generic-rank
// sampling disagreed across points).
class OracleError : public std::runtime_error {
public:
    explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace l2lab
