#pragma once

#include <stdexcept>
#include <string>

namespace ipme {

// Stable numeric codes; the CLI prints them as "IPME-E<code>:".
enum class ErrorCode : int {
  Domain = 1,
  Range = 2,
  Singular = 3,
  Parameter = 4,
  Instability = 5,
  Numeric = 6,
  Parse = 7,
  Io = 8,
  Ordering = 9,
  Truncation = 10,
  Fit = 11,
  Config = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define IPME_DEFINE_ERROR(Name, Code)                                   \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
  };

IPME_DEFINE_ERROR(DomainError, Domain)
IPME_DEFINE_ERROR(RangeError, Range)
IPME_DEFINE_ERROR(SingularPointError, Singular)
IPME_DEFINE_ERROR(ParameterError, Parameter)
IPME_DEFINE_ERROR(InstabilityError, Instability)
IPME_DEFINE_ERROR(NumericError, Numeric)
IPME_DEFINE_ERROR(ParseError, Parse)
IPME_DEFINE_ERROR(IoError, Io)
IPME_DEFINE_ERROR(OrderingViolation, Ordering)
IPME_DEFINE_ERROR(TruncationError, Truncation)
IPME_DEFINE_ERROR(FitError, Fit)
IPME_DEFINE_ERROR(ConfigError, Config)

#undef IPME_DEFINE_ERROR

}  // namespace ipme
