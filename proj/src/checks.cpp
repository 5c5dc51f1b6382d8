#include "trustgate/checks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <regex>
#include <sstream>

#include "trustgate/csv.hpp"
#include "trustgate/error.hpp"

namespace trustgate {
namespace {

constexpr EnumNames<ColumnKind, 4> kColumnKindNames{{
    {ColumnKind::Text, "text"},
    {ColumnKind::Number, "number"},
    {ColumnKind::Category, "category"},
    {ColumnKind::Boolean, "boolean"},
}};

constexpr EnumNames<PiiType, 5> kPiiNames{{
    {PiiType::Ssn, "SSN"},
    {PiiType::Phone, "PHONE"},
    {PiiType::Email, "EMAIL"},
    {PiiType::CreditCard, "CREDIT_CARD"},
    {PiiType::MedicalRecord, "MEDICAL_RECORD"},
}};

bool is_boolean_token(std::string_view v) {
  return v == "0" || v == "1" || v == "true" || v == "false" || v == "TRUE" || v == "FALSE" || v == "True" ||
         v == "False";
}

std::optional<bool> prediction_value(std::string_view v) {
  if (v == "1" || v == "true" || v == "TRUE" || v == "True") return true;
  if (v == "0" || v == "false" || v == "FALSE" || v == "False") return false;
  return std::nullopt;
}

bool is_number(std::string_view v) {
  double d = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, d);
  return ec == std::errc() && ptr == last && std::isfinite(d);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", v * 100.0);
  return buf;
}

std::string decimal(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) {
  return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Runs `re` over `text`, keeping matches whose neighbours pass `boundary_ok`.
template <typename Boundary>
void scan(std::string_view text, const std::regex& re, PiiType type, Boundary boundary_ok,
          std::vector<PiiHit>& out) {
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
    const auto pos = static_cast<std::size_t>(it->position());
    const auto len = static_cast<std::size_t>(it->length());
    const char before = pos > 0 ? s[pos - 1] : '\0';
    const char after = pos + len < s.size() ? s[pos + len] : '\0';
    if (!boundary_ok(before, after, s.substr(pos, len))) continue;
    out.push_back(PiiHit{type, 0, 0, {}, pos, len, false});
  }
}

std::string regex_escape(std::string_view s) {
  static const std::string kSpecial = R"(\^$.|?*+()[]{}-)";
  std::string out;
  for (char c : s) {
    if (kSpecial.find(c) != std::string::npos) out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string_view to_string(ColumnKind k) { return enum_name(kColumnKindNames, k); }
std::optional<ColumnKind> parse_column_kind(std::string_view name) { return enum_from_name(kColumnKindNames, name); }
std::string_view to_string(PiiType t) { return enum_name(kPiiNames, t); }
std::optional<PiiType> parse_pii_type(std::string_view name) { return enum_from_name(kPiiNames, name); }

std::optional<std::size_t> TabularDataset::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  return std::nullopt;
}

ColumnKind infer_column_kind(std::span<const std::string> values) {
  std::set<std::string_view> distinct;
  bool all_boolean = true;
  bool all_numeric = true;
  bool any = false;
  for (const auto& v : values) {
    if (v.empty()) continue;
    any = true;
    all_boolean = all_boolean && is_boolean_token(v);
    all_numeric = all_numeric && is_number(v);
    distinct.insert(v);
  }
  if (!any) return ColumnKind::Text;
  if (all_boolean) return ColumnKind::Boolean;
  if (all_numeric) return ColumnKind::Number;
  if (distinct.size() <= kMaxCategoryValues) return ColumnKind::Category;
  return ColumnKind::Text;
}

TabularDataset load_dataset_csv(std::string_view csv, std::optional<std::string_view> sidecar_schema) {
  auto table = parse_csv(csv);
  TabularDataset data;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    std::vector<std::string> values;
    values.reserve(table.rows.size());
    for (const auto& row : table.rows) values.push_back(row[c]);
    data.columns.push_back(Column{table.header[c], infer_column_kind(values)});
  }
  data.rows = std::move(table.rows);

  if (sidecar_schema) {
    Json schema;
    try {
      schema = Json::parse(sidecar_schema->begin(), sidecar_schema->end());
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::ParseError, std::string("dataset schema: ") + e.what());
    }
    if (!schema.is_object() || !schema.contains("columns") || !schema["columns"].is_object()) {
      throw Error(ErrorKind::ParseError, "dataset schema must be {\"columns\": {name: kind}}");
    }
    for (const auto& [name, kind] : schema["columns"].items()) {
      auto idx = data.column_index(name);
      if (!idx) {
        throw Error(ErrorKind::MissingColumn, "dataset schema names unknown column '" + name + "'",
                    Json{{"column", name}});
      }
      auto k = kind.is_string() ? parse_column_kind(kind.get<std::string>()) : std::nullopt;
      if (!k) throw Error(ErrorKind::ParseError, "dataset schema: bad kind for column '" + name + "'");
      data.columns[*idx].kind = *k;
    }
  }
  return data;
}

void CheckSpec::validate(const FrameworkConfig& config) const {
  if (!config.find_control(bound_control)) {
    throw Error(ErrorKind::UnknownControl, "check bound to unknown control '" + bound_control + "'",
                Json{{"control", bound_control}});
  }
  auto in_unit = [](double t) { return t > 0.0 && t < 1.0; };
  switch (kind) {
    case CheckKind::DemographicParity:
      if (!in_unit(parity.threshold)) {
        throw Error(ErrorKind::ValueOutOfRange, "parity threshold must lie in (0,1)");
      }
      break;
    case CheckKind::RobustnessThreshold:
      for (const auto& [attack, t] : robustness.min_accuracy) {
        if (!in_unit(t)) {
          throw Error(ErrorKind::ValueOutOfRange, "robustness threshold for '" + attack + "' must lie in (0,1)");
        }
      }
      break;
    case CheckKind::PiiScan:
      if (pii.medical_record_min_digits < 1 || pii.medical_record_max_digits < pii.medical_record_min_digits) {
        throw Error(ErrorKind::ValueOutOfRange, "medical record digit range is empty");
      }
      break;
  }
}

CheckResult demographic_parity(const TabularDataset& data, const DemographicParityParams& params,
                               std::string_view bound_control, Timestamp now) {
  const auto group_col = data.column_index(params.protected_column);
  if (!group_col) {
    throw Error(ErrorKind::MissingColumn, "protected column '" + params.protected_column + "' not found",
                Json{{"column", params.protected_column}});
  }
  const auto pred_col = data.column_index(params.prediction_column);
  if (!pred_col) {
    throw Error(ErrorKind::MissingColumn, "prediction column '" + params.prediction_column + "' not found",
                Json{{"column", params.prediction_column}});
  }

  struct Tally {
    std::size_t positive = 0;
    std::size_t total = 0;
  };
  std::map<std::string, Tally> groups;
  for (const auto& g : params.expected_groups) groups.try_emplace(g);
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    const auto& row = data.rows[r];
    const auto pred = prediction_value(row[*pred_col]);
    if (!pred) {
      throw Error(ErrorKind::InvalidArgument,
                  "prediction '" + row[*pred_col] + "' in row " + std::to_string(r) +
                      " is not binary; multi-class predictions are not supported",
                  Json{{"row", r}});
    }
    auto& t = groups[row[*group_col]];
    ++t.total;
    if (*pred) ++t.positive;
  }
  if (groups.size() < 2) {
    throw Error(ErrorKind::SingleGroup,
                "demographic parity needs at least two groups in '" + params.protected_column + "'",
                Json{{"groups", groups.size()}});
  }
  for (const auto& [g, t] : groups) {
    if (t.total == 0) {
      throw Error(ErrorKind::EmptyGroup, "protected group '" + g + "' has no rows", Json{{"group", g}});
    }
  }

  Json rates = Json::object();
  Json sizes = Json::object();
  double lo = 1.0;
  double hi = 0.0;
  for (const auto& [g, t] : groups) {
    const double rate = static_cast<double>(t.positive) / static_cast<double>(t.total);
    rates[g] = rate;
    sizes[g] = t.total;
    lo = std::min(lo, rate);
    hi = std::max(hi, rate);
  }
  const double disparity = hi - lo;

  CheckResult res;
  res.spec.kind = CheckKind::DemographicParity;
  res.spec.bound_control = std::string(bound_control);
  res.spec.parity = params;
  res.passed = disparity < params.threshold;
  res.measured = Json{{"disparity", disparity}, {"threshold", params.threshold}, {"positive_rates", rates},
                      {"group_sizes", sizes}};
  res.message = std::string(bound_control) + (res.passed ? " PASS: demographic parity disparity "
                                                         : " FAIL: Demographic parity violation ") +
                percent(disparity) + " (threshold " + percent(params.threshold) + ")";
  res.executed_at = now;
  return res;
}

CheckResult robustness_threshold(const std::map<std::string, double>& accuracies,
                                 const std::map<std::string, double>& thresholds, std::string_view bound_control,
                                 Timestamp now) {
  Json failing = Json::array();
  std::string detail;
  for (const auto& [attack, min_acc] : thresholds) {
    const auto it = accuracies.find(attack);
    if (it == accuracies.end()) {
      throw Error(ErrorKind::MissingMeasurement, "no measured accuracy for attack '" + attack + "'",
                  Json{{"attack", attack}});
    }
    if (!(it->second > min_acc)) {
      failing.push_back(attack);
      if (!detail.empty()) detail += ", ";
      detail += attack + " " + decimal(it->second) + " <= " + decimal(min_acc);
    }
  }

  CheckResult res;
  res.spec.kind = CheckKind::RobustnessThreshold;
  res.spec.bound_control = std::string(bound_control);
  res.spec.robustness.min_accuracy = thresholds;
  res.passed = failing.empty();
  Json acc = Json::object();
  for (const auto& [k, v] : accuracies) acc[k] = v;
  Json thr = Json::object();
  for (const auto& [k, v] : thresholds) thr[k] = v;
  res.measured = Json{{"accuracies", acc}, {"thresholds", thr}, {"failing", failing}};
  res.message = res.passed ? std::string(bound_control) + " PASS: adversarial robustness above all thresholds"
                           : std::string(bound_control) + " FAIL: Adversarial robustness below threshold (" + detail + ")";
  res.executed_at = now;
  return res;
}

bool luhn_valid(std::string_view digits) {
  if (digits.empty()) return false;
  int sum = 0;
  bool double_it = false;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (!is_digit(*it)) return false;
    int d = *it - '0';
    if (double_it) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
    double_it = !double_it;
  }
  return sum % 10 == 0;
}

std::vector<PiiHit> detect_pii(std::string_view text, const PiiParams& params) {
  static const std::regex kSsn(R"(\d{3}-\d{2}-\d{4})");
  static const std::regex kPhone(R"((?:\+?1[-. ]?)?(?:\(\d{3}\) ?|\d{3}[-. ])\d{3}[-. ]\d{4})");
  static const std::regex kEmail(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,})");
  static const std::regex kCard(R"(\d(?:[ -]?\d){12,18})");

  std::vector<PiiHit> hits;
  auto wants = [&](PiiType t) { return params.detectors.count(t) > 0; };

  if (wants(PiiType::Ssn)) {
    scan(text, kSsn, PiiType::Ssn,
         [](char b, char a, const std::string&) { return !is_digit(b) && b != '-' && !is_digit(a) && a != '-'; },
         hits);
  }
  if (wants(PiiType::Phone)) {
    scan(text, kPhone, PiiType::Phone,
         [](char b, char a, const std::string&) { return !is_alnum(b) && !is_digit(a) && a != '-'; }, hits);
  }
  if (wants(PiiType::Email)) {
    scan(text, kEmail, PiiType::Email, [](char, char a, const std::string&) { return !is_alnum(a); }, hits);
  }
  if (wants(PiiType::CreditCard)) {
    scan(text, kCard, PiiType::CreditCard,
         [](char b, char a, const std::string& m) {
           if (is_digit(b) || is_digit(a)) return false;
           std::string digits;
           for (char c : m) {
             if (is_digit(c)) digits += c;
           }
           return digits.size() >= 13 && digits.size() <= 16 && luhn_valid(digits);
         },
         hits);
  }
  if (wants(PiiType::MedicalRecord) && !params.medical_record_prefix.empty()) {
    const std::regex mrn(regex_escape(params.medical_record_prefix) + "[-:# ]?\\d{" +
                             std::to_string(params.medical_record_min_digits) + "," +
                             std::to_string(params.medical_record_max_digits) + "}",
                         std::regex::icase);
    scan(text, mrn, PiiType::MedicalRecord,
         [](char b, char a, const std::string&) { return !is_alnum(b) && !is_digit(a); }, hits);
  }
  std::sort(hits.begin(), hits.end(), [](const PiiHit& x, const PiiHit& y) {
    return std::tie(x.offset, x.type) < std::tie(y.offset, y.type);
  });
  return hits;
}

CheckResult pii_scan(const TabularDataset& data, const PiiParams& params, std::string_view bound_control,
                     Timestamp now) {
  std::vector<PiiHit> hits;
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    for (std::size_t c = 0; c < data.columns.size(); ++c) {
      for (auto hit : detect_pii(data.rows[r][c], params)) {
        hit.row = r;
        hit.column = c;
        hit.column_name = data.columns[c].name;
        hit.allowed = params.allowed_types.count(hit.type) > 0;
        hits.push_back(std::move(hit));
      }
    }
  }

  std::size_t unexpected = 0;
  Json list = Json::array();
  for (const auto& h : hits) {
    if (!h.allowed) ++unexpected;
    list.push_back(Json{{"type", to_string(h.type)},
                        {"row", h.row},
                        {"column", h.column_name},
                        {"offset", h.offset},
                        {"length", h.length},
                        {"allowed", h.allowed}});
  }

  CheckResult res;
  res.spec.kind = CheckKind::PiiScan;
  res.spec.bound_control = std::string(bound_control);
  res.spec.pii = params;
  res.passed = unexpected == 0;
  res.measured = Json{{"hits", list}, {"unexpected", unexpected}, {"allowed", hits.size() - unexpected}};
  res.message = std::string(bound_control) + (res.passed ? " PASS: " : " FAIL: ") + std::to_string(unexpected) +
                " unexpected PII instances" +
                (hits.size() > unexpected ? " (" + std::to_string(hits.size() - unexpected) + " allowed)" : "");
  res.executed_at = now;
  return res;
}

ApplyReport apply_results(std::span<const CheckResult> results, std::span<const std::string> result_ids,
                          std::vector<ControlStatus> statuses) {
  if (result_ids.size() != results.size()) {
    throw Error(ErrorKind::InvalidArgument, "one record id is required per check result");
  }
  ApplyReport report;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    auto it = std::find_if(statuses.begin(), statuses.end(),
                           [&](const ControlStatus& s) { return s.control_id == res.spec.bound_control; });
    if (it == statuses.end()) {
      throw Error(ErrorKind::UnknownControl, "no status recorded for control '" + res.spec.bound_control + "'",
                  Json{{"control", res.spec.bound_control}});
    }
    if (res.passed && it->implementation.kind != ImplementationKind::Implemented) {
      report.not_implemented.push_back(res.spec.bound_control);
      continue;
    }
    it->effectiveness = res.passed ? Effectiveness::ValidatedEffective : Effectiveness::ValidatedIneffective;
    it->evidence_refs.push_back(result_ids[i]);
  }
  report.statuses = std::move(statuses);
  return report;
}

}  // namespace trustgate
