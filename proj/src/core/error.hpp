#pragma once

#include <stdexcept>
#include <string>

namespace misfire {

enum class errc {
    invalid_argument,  // bad parameter or violated operation precondition
    io,                // filesystem failure
    parse,             // malformed file content
    internal
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace misfire
