#pragma once

#include <stdexcept>
#include <string>

namespace worb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WORB_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(std::string const& what) : Error(#Name ": " + what) {} \
  }

WORB_DEFINE_ERROR(NotAGroup);
WORB_DEFINE_ERROR(BoundExceeded);
WORB_DEFINE_ERROR(NotASubgroup);
WORB_DEFINE_ERROR(InvalidAction);
WORB_DEFINE_ERROR(GroupMismatch);
WORB_DEFINE_ERROR(InvalidPartition);
WORB_DEFINE_ERROR(NotInvariant);
WORB_DEFINE_ERROR(ClassCrossesOrbit);
WORB_DEFINE_ERROR(EmptyWitnessSet);
WORB_DEFINE_ERROR(WitnessMismatch);
WORB_DEFINE_ERROR(NotTransitive);
WORB_DEFINE_ERROR(NotAnEquivalence);
WORB_DEFINE_ERROR(InvalidLattice);
WORB_DEFINE_ERROR(ClosureBudgetExceeded);
WORB_DEFINE_ERROR(HypothesisNotMet);
WORB_DEFINE_ERROR(NotAgreeable);
WORB_DEFINE_ERROR(NotOrbital);
WORB_DEFINE_ERROR(NotWeaklyOrbital);
WORB_DEFINE_ERROR(UnsupportedField);
WORB_DEFINE_ERROR(ParseError);

#undef WORB_DEFINE_ERROR

}  // namespace worb
