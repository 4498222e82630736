#pragma once

#include <stdexcept>
#include <string>

namespace nsdyn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NSDYN_DECLARE_ERROR(Name)            \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

NSDYN_DECLARE_ERROR(DimensionMismatch);
NSDYN_DECLARE_ERROR(NonFiniteInput);
NSDYN_DECLARE_ERROR(NonFiniteState);
NSDYN_DECLARE_ERROR(InvalidArgument);
NSDYN_DECLARE_ERROR(OutOfHorizon);
NSDYN_DECLARE_ERROR(HorizonMismatch);
NSDYN_DECLARE_ERROR(InvalidQuery);
NSDYN_DECLARE_ERROR(NotConvex);
NSDYN_DECLARE_ERROR(OnNullSet);
NSDYN_DECLARE_ERROR(PreconditionViolated);
NSDYN_DECLARE_ERROR(IoError);

#undef NSDYN_DECLARE_ERROR

}  // namespace nsdyn
