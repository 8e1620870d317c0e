#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace shiftcalc {

// All recoverable failures carry a `kind` tag mirroring the operation
// contracts (DivisionByZero, CtxMismatch, GuardTripped, ...). The CLI maps
// kinds onto exit codes, and tests match on them.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const char* kind, const std::string& msg) {
    throw Error(kind, msg);
}

// Guard kinds mean "input too big for the engine", not "input malformed".
inline bool is_guard_kind(const std::string& k) {
    return k == "TooLarge" || k == "GuardTripped" || k == "BoundExhausted";
}

} // namespace shiftcalc
