#pragma once

#include <stdexcept>
#include <string>

namespace poshawk {

/// File / CSV / configuration problems. CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Model or numeric failures (non-convergence, invalid arguments, domain
/// violations). CLI exit code 1.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace poshawk
