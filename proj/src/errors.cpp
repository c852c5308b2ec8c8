#include "waldkit/errors.hpp"

namespace waldkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonAssociative: return "NonAssociative";
    case ErrorKind::MissingIdentity: return "MissingIdentity";
    case ErrorKind::IllTypedComposite: return "IllTypedComposite";
    case ErrorKind::MissingComposite: return "MissingComposite";
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::NonUniqueMediator: return "NonUniqueMediator";
    case ErrorKind::EnumerationLimitExceeded: return "EnumerationLimitExceeded";
    case ErrorKind::InvalidFunctor: return "InvalidFunctor";
    case ErrorKind::InvalidNatTrans: return "InvalidNatTrans";
    case ErrorKind::TruncationTooLow: return "TruncationTooLow";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::SimplicialIdentityViolated: return "SimplicialIdentityViolated";
    case ErrorKind::MissingIso: return "MissingIso";
    case ErrorKind::NotClosedUnderComposition: return "NotClosedUnderComposition";
    case ErrorKind::NoZeroObject: return "NoZeroObject";
    case ErrorKind::ZeroMapNotIngressive: return "ZeroMapNotIngressive";
    case ErrorKind::MissingPushout: return "MissingPushout";
    case ErrorKind::PushoutNotIngressive: return "PushoutNotIngressive";
    case ErrorKind::ZeroNotPreserved: return "ZeroNotPreserved";
    case ErrorKind::CofNotPreserved: return "CofNotPreserved";
    case ErrorKind::PushoutNotPreserved: return "PushoutNotPreserved";
    case ErrorKind::GluingAxiomViolated: return "GluingAxiomViolated";
    case ErrorKind::BudgetTooSmallForWedge: return "BudgetTooSmallForWedge";
    case ErrorKind::NotASubcategory: return "NotASubcategory";
    case ErrorKind::UnknownZoo: return "UnknownZoo";
    case ErrorKind::ParamTooLarge: return "ParamTooLarge";
    case ErrorKind::PushoutOutOfBudget: return "PushoutOutOfBudget";
    case ErrorKind::RelationNotPreserved: return "RelationNotPreserved";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnresolvedReference: return "UnresolvedReference";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace waldkit
