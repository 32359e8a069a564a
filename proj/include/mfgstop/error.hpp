#pragma once

#include <stdexcept>
#include <string>

namespace mfgstop {

// Failure categories, mapped to distinct CLI exit codes.
enum class ErrorCategory {
    config = 2,  // invalid or inconsistent input parameters
    model = 3,   // a model invariant failed at run time
    solver = 4,  // LP infeasible/unbounded, iteration limits, divergence
    io = 5,      // file system and parse errors on data files
};

const char* category_name(ErrorCategory c);

class MfgError : public std::runtime_error {
  public:
    MfgError(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const { return category_; }
    int exit_code() const { return static_cast<int>(category_); }

  private:
    ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what) {
    throw MfgError(category, what);
}

}  // namespace mfgstop
