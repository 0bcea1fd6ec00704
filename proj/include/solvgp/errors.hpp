#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace solvgp {

// Domain error with a stable machine-readable code. The code string doubles
// as the "error" field of the CLI's JSON error object.
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string detail)
        : std::runtime_error(code + ": " + detail),
          code_(std::move(code)),
          detail_(std::move(detail)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string code_;
    std::string detail_;
};

[[noreturn]] inline void raise(std::string code, const std::string& detail) {
    throw Error(std::move(code), detail);
}

}  // namespace solvgp
