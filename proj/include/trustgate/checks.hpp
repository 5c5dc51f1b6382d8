#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trustgate/catalog.hpp"
#include "trustgate/json.hpp"
#include "trustgate/scoring.hpp"
#include "trustgate/time.hpp"

namespace trustgate {

enum class ColumnKind { Text, Number, Category, Boolean };

std::string_view to_string(ColumnKind k);
std::optional<ColumnKind> parse_column_kind(std::string_view name);

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::Text;
};

struct TabularDataset {
  std::vector<Column> columns;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column_index(std::string_view name) const;
};

inline constexpr std::size_t kMaxCategoryValues = 32;

// Kind inference over non-empty cells, first match wins: every value in
// {0,1,true,false} -> boolean; every value numeric -> number; at most 32
// distinct values -> category; otherwise text. Columns with no values are text.
ColumnKind infer_column_kind(std::span<const std::string> values);

// Reads a CSV dataset. `sidecar_schema`, when given, is JSON of the form
// {"columns": {"<name>": "text|number|category|boolean"}} and overrides inference.
TabularDataset load_dataset_csv(std::string_view csv, std::optional<std::string_view> sidecar_schema = std::nullopt);

enum class PiiType { Ssn, Phone, Email, CreditCard, MedicalRecord };

inline constexpr std::array<PiiType, 5> kAllPiiTypes{PiiType::Ssn, PiiType::Phone, PiiType::Email,
                                                     PiiType::CreditCard, PiiType::MedicalRecord};

std::string_view to_string(PiiType t);  // SSN, PHONE, EMAIL, CREDIT_CARD, MEDICAL_RECORD
std::optional<PiiType> parse_pii_type(std::string_view name);

struct DemographicParityParams {
  std::string protected_column = "race";
  std::string prediction_column = "prediction";
  double threshold = 0.05;
  // Groups that must be present; a listed group with no rows is an error.
  std::vector<std::string> expected_groups;
};

struct RobustnessParams {
  std::map<std::string, double> min_accuracy{{"FGSM", 0.85}, {"PGD", 0.80}};
};

struct PiiParams {
  std::set<PiiType> allowed_types;
  std::set<PiiType> detectors{kAllPiiTypes.begin(), kAllPiiTypes.end()};
  // Medical record numbers are organization specific: prefix then a digit run.
  std::string medical_record_prefix = "MRN";
  int medical_record_min_digits = 6;
  int medical_record_max_digits = 10;
};

struct CheckSpec {
  CheckKind kind = CheckKind::DemographicParity;
  std::string bound_control;
  DemographicParityParams parity;
  RobustnessParams robustness;
  PiiParams pii;

  // Thresholds in (0,1) and the bound control present in the catalog.
  void validate(const FrameworkConfig& config) const;
};

struct CheckResult {
  CheckSpec spec;
  bool passed = false;
  Json measured;
  std::string message;
  Timestamp executed_at;
};

CheckResult demographic_parity(const TabularDataset& data, const DemographicParityParams& params,
                               std::string_view bound_control = "GRC-11", Timestamp now = Timestamp::now());

CheckResult robustness_threshold(const std::map<std::string, double>& accuracies,
                                 const std::map<std::string, double>& thresholds,
                                 std::string_view bound_control = "MDS-02", Timestamp now = Timestamp::now());

struct PiiHit {
  PiiType type;
  std::size_t row;  // 0-based data row
  std::size_t column;
  std::string column_name;
  std::size_t offset;  // byte offset within the cell
  std::size_t length;
  bool allowed = false;

  bool operator==(const PiiHit&) const = default;
};

// Detector pass over one string; exposed for fixture tests.
std::vector<PiiHit> detect_pii(std::string_view text, const PiiParams& params);
bool luhn_valid(std::string_view digits);

CheckResult pii_scan(const TabularDataset& data, const PiiParams& params, std::string_view bound_control = "DSP-11",
                     Timestamp now = Timestamp::now());

struct ApplyReport {
  std::vector<ControlStatus> statuses;
  // Passing checks whose bound control is not fully implemented; not applied.
  std::vector<std::string> not_implemented;
};

// `result_ids[i]` is the registry record id of `results[i]` and is appended to
// the bound control's evidence. Throws UnknownControl.
ApplyReport apply_results(std::span<const CheckResult> results, std::span<const std::string> result_ids,
                          std::vector<ControlStatus> statuses);

}  // namespace trustgate
