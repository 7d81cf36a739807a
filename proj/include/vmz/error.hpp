#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vmz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define VMZ_DEFINE_ERROR(Name)            \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  };

VMZ_DEFINE_ERROR(DivisionByZero)
VMZ_DEFINE_ERROR(PrecisionLoss)
VMZ_DEFINE_ERROR(DomainError)
VMZ_DEFINE_ERROR(ParseError)
VMZ_DEFINE_ERROR(DecayNotCertified)
VMZ_DEFINE_ERROR(SingularStep)
VMZ_DEFINE_ERROR(ConvergenceNotCertified)
VMZ_DEFINE_ERROR(AnnihilationFailure)
VMZ_DEFINE_ERROR(RootCheckFailed)
VMZ_DEFINE_ERROR(TooLarge)
VMZ_DEFINE_ERROR(NoSolutionInBudget)
VMZ_DEFINE_ERROR(UncertifiedDecomposition)
VMZ_DEFINE_ERROR(MissingTModuleSpec)
VMZ_DEFINE_ERROR(AssertionFailure)

#undef VMZ_DEFINE_ERROR

// Carries the residual valuation of a failed certification.
class CertificationFailed : public Error {
 public:
  CertificationFailed(const std::string& what, std::int64_t residual_ord)
      : Error(what), residual_ord_(residual_ord) {}
  std::int64_t residual_ord() const { return residual_ord_; }

 private:
  std::int64_t residual_ord_;
};

}  // namespace vmz
