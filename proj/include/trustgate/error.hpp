#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "trustgate/json.hpp"

namespace trustgate {

// Every failure the engine reports carries one of these kinds. The HTTP layer
// maps kinds onto status codes and the CLI onto exit codes, so the set is part
// of the public contract.
enum class ErrorKind {
  ParseError,
  ValidationError,
  InvalidArgument,
  GateOutOfRange,
  UnknownControl,
  NonPositiveAppetite,
  MetExceedsTotal,
  ScoreOutOfRange,
  WeightSumInvalid,
  ValueOutOfRange,
  MissingPillar,
  UnacceptableTier,
  IncompleteAssessment,
  AuthorityInsufficient,
  UpgradeForbidden,
  MissingRemediationPlan,
  ReReviewOutOfWindow,
  ApproverInsufficient,
  ExpiryTooLate,
  MissingPlan,
  WrongPhase,
  MissingColumn,
  SingleGroup,
  EmptyGroup,
  MissingMeasurement,
  NotImplemented,
  StoreCorrupt,
  WriteFailed,
  UnknownSystem,
  UnknownScope,
  DuplicateId,
  BindFailed,
  AuthConfigMissing,
  Unauthorized,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, Json details = Json::object())
      : std::runtime_error(message), kind_(kind), details_(std::move(details)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const Json& details() const noexcept { return details_; }

  // {code, message, details}; the shape used by the HTTP API error bodies.
  Json to_json() const;

 private:
  ErrorKind kind_;
  Json details_;
};

}  // namespace trustgate
