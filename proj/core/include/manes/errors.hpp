#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace manes {

/// Failure taxonomy shared by all modules.  what() carries the diagnostic,
/// name() the stable identifier surfaced verbatim by the CLI on exit code 3.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& msg)
      : std::runtime_error(name + ": " + msg), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define MANES_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& msg) : Error(#Name, msg) {}  \
  }

MANES_DEFINE_ERROR(ConstraintViolation);
MANES_DEFINE_ERROR(NonCritical);
MANES_DEFINE_ERROR(NearSingular);
MANES_DEFINE_ERROR(NonConvergence);
MANES_DEFINE_ERROR(InsufficientQuotes);
MANES_DEFINE_ERROR(OptimizerFailure);
MANES_DEFINE_ERROR(CFLViolation);
MANES_DEFINE_ERROR(UnstableStep);
MANES_DEFINE_ERROR(InsufficientBranch);
MANES_DEFINE_ERROR(CriticalDivergence);

#undef MANES_DEFINE_ERROR

}  // namespace manes
