#pragma once

#include <stdexcept>
#include <string>

namespace ccm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define CCM_ERROR_TYPE(NAME) \
  struct NAME : Error {      \
    using Error::Error;      \
  };

CCM_ERROR_TYPE(OverflowError)
CCM_ERROR_TYPE(MixedGroups)
CCM_ERROR_TYPE(InvalidTable)
CCM_ERROR_TYPE(InvalidAction)
CCM_ERROR_TYPE(InvalidPairing)
CCM_ERROR_TYPE(UnsupportedForClass)
CCM_ERROR_TYPE(EnumerationExhausted)
CCM_ERROR_TYPE(NotAPartition)
CCM_ERROR_TYPE(AtomTooSmall)
CCM_ERROR_TYPE(HypothesisFails)
CCM_ERROR_TYPE(NotNormal)
CCM_ERROR_TYPE(QuotientTooLarge)
CCM_ERROR_TYPE(ParseError)
CCM_ERROR_TYPE(SchemaError)
CCM_ERROR_TYPE(IoError)

#undef CCM_ERROR_TYPE

}  // namespace ccm
