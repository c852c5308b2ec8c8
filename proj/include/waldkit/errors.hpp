#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace waldkit {

// Every failure the library reports is one of these kinds. Validation
// functions throw Error; callers (tests, the CLI) dispatch on kind().
enum class ErrorKind {
  // fincat
  NonAssociative,
  MissingIdentity,
  IllTypedComposite,
  MissingComposite,
  NotComposable,
  NonUniqueMediator,
  EnumerationLimitExceeded,
  InvalidFunctor,
  InvalidNatTrans,
  // simpset
  TruncationTooLow,
  Disconnected,
  SimplicialIdentityViolated,
  // wald
  MissingIso,
  NotClosedUnderComposition,
  NoZeroObject,
  ZeroMapNotIngressive,
  MissingPushout,
  PushoutNotIngressive,
  ZeroNotPreserved,
  CofNotPreserved,
  PushoutNotPreserved,
  GluingAxiomViolated,
  BudgetTooSmallForWedge,
  NotASubcategory,
  UnknownZoo,
  ParamTooLarge,
  // sconstr
  PushoutOutOfBudget,
  // kzero
  RelationNotPreserved,
  // cli
  SyntaxError,
  UnresolvedReference,
  UsageError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace waldkit
