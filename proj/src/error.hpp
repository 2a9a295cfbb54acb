// error.hpp - error codes and the exception type shared by the toolkit
#pragma once

#include <stdexcept>
#include <string>

namespace snspd {

enum class ErrorCode {
  invalid_argument = 1,
  invariant_violation,
  empty_input,
  insufficient_counts,
  fit_not_converged,
  level_not_reached,
  negative_radicand,
  never_reaches,
  empty_region,
  too_few_points,
  division_domain,
  parse_error,
  missing_field,
  io_error,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

} // namespace snspd
