#pragma once

#include <stdexcept>
#include <string>

namespace gsing {

/// Broad failure classes. The C API and the CLI exit codes are derived from
/// these, so keep the numbering stable.
enum class ErrorKind {
    input = 2,        ///< malformed file, missing field, bad argument
    consistency = 3,  ///< two independent computations disagree (a bug)
    degenerate = 4,   ///< architecture/orientation outside the generic case
    domain = 5,       ///< operation undefined at the given point
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace gsing
