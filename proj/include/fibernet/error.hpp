#pragma once

#include <stdexcept>
#include <string>

namespace fibernet {

enum class ErrorCode {
    invalid_parameter,
    singular_conversion,
    singular_system,
    loop_singular,
    unsupported_model,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void throw_invalid(const std::string& what);

}  // namespace fibernet
