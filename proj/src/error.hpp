#pragma once

#include <stdexcept>
#include <string>

namespace spl {

// Error codes. Values match the spl_status enum in include/sumprodlab.h;
// capi.cpp static_asserts the correspondence.
enum class Errc : int {
    ok = 0,
    invalid_argument = 1,
    not_prime = 2,
    too_large = 3,
    bad_parameter = 4,
    size_too_large = 5,
    zero_inverse = 6,
    zero_dilation = 7,
    field_mismatch = 8,
    overflow_guard = 9,
    empty_set = 10,
    zero_in_set = 11,
    budget_exceeded = 12,
    not_affine_image = 13,
    validation = 14,
    io = 15,
    all_trials_failed = 16,
    buffer_too_small = 17,
    internal = 18,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace spl
