#pragma once

#include <stdexcept>
#include <string>

namespace mrsim {

enum class ErrorCode {
    InvalidArgument,
    Parse,
    Config,
    Io,
    Runtime,
};

/// Library-wide exception. Carries a coarse code so the C boundary can map
/// failures to status values without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, what);
}

[[noreturn]] inline void throw_config(const std::string& what) {
    throw Error(ErrorCode::Config, what);
}

[[noreturn]] inline void throw_runtime(const std::string& what) {
    throw Error(ErrorCode::Runtime, what);
}

} // namespace mrsim
