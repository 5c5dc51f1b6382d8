#include "trustgate/error.hpp"

namespace trustgate {
namespace {

constexpr EnumNames<ErrorKind, 34> kErrorNames{{
    {ErrorKind::ParseError, "ParseError"},
    {ErrorKind::ValidationError, "ValidationError"},
    {ErrorKind::InvalidArgument, "InvalidArgument"},
    {ErrorKind::GateOutOfRange, "GateOutOfRange"},
    {ErrorKind::UnknownControl, "UnknownControl"},
    {ErrorKind::NonPositiveAppetite, "NonPositiveAppetite"},
    {ErrorKind::MetExceedsTotal, "MetExceedsTotal"},
    {ErrorKind::ScoreOutOfRange, "ScoreOutOfRange"},
    {ErrorKind::WeightSumInvalid, "WeightSumInvalid"},
    {ErrorKind::ValueOutOfRange, "ValueOutOfRange"},
    {ErrorKind::MissingPillar, "MissingPillar"},
    {ErrorKind::UnacceptableTier, "UnacceptableTier"},
    {ErrorKind::IncompleteAssessment, "IncompleteAssessment"},
    {ErrorKind::AuthorityInsufficient, "AuthorityInsufficient"},
    {ErrorKind::UpgradeForbidden, "UpgradeForbidden"},
    {ErrorKind::MissingRemediationPlan, "MissingRemediationPlan"},
    {ErrorKind::ReReviewOutOfWindow, "ReReviewOutOfWindow"},
    {ErrorKind::ApproverInsufficient, "ApproverInsufficient"},
    {ErrorKind::ExpiryTooLate, "ExpiryTooLate"},
    {ErrorKind::MissingPlan, "MissingPlan"},
    {ErrorKind::WrongPhase, "WrongPhase"},
    {ErrorKind::MissingColumn, "MissingColumn"},
    {ErrorKind::SingleGroup, "SingleGroup"},
    {ErrorKind::EmptyGroup, "EmptyGroup"},
    {ErrorKind::MissingMeasurement, "MissingMeasurement"},
    {ErrorKind::NotImplemented, "NotImplemented"},
    {ErrorKind::StoreCorrupt, "StoreCorrupt"},
    {ErrorKind::WriteFailed, "WriteFailed"},
    {ErrorKind::UnknownSystem, "UnknownSystem"},
    {ErrorKind::UnknownScope, "UnknownScope"},
    {ErrorKind::DuplicateId, "DuplicateId"},
    {ErrorKind::BindFailed, "BindFailed"},
    {ErrorKind::AuthConfigMissing, "AuthConfigMissing"},
    {ErrorKind::Unauthorized, "Unauthorized"},
}};

}  // namespace

std::string_view to_string(ErrorKind kind) { return enum_name(kErrorNames, kind); }

Json Error::to_json() const {
  Json j;
  j["code"] = std::string(to_string(kind_));
  j["message"] = what();
  j["details"] = details_;
  return j;
}

}  // namespace trustgate
