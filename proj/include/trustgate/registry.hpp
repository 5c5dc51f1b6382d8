#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trustgate/checks.hpp"
#include "trustgate/json.hpp"
#include "trustgate/lifecycle.hpp"
#include "trustgate/risk.hpp"
#include "trustgate/scoring.hpp"
#include "trustgate/time.hpp"

namespace trustgate {

enum class EventKind {
  SystemRegistered,
  StatusUpdated,
  AssessmentRecorded,
  GateDecided,
  ExceptionGranted,
  ExceptionExpired,
  TriggerFired,
  RiskUpserted,
  CheckExecuted,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view name);

struct AuditEvent {
  std::uint64_t sequence = 0;
  Timestamp timestamp;
  std::string actor;
  EventKind kind = EventKind::SystemRegistered;
  Json payload;
  std::string prev_digest;  // lowercase hex SHA-256 of the preceding line

  bool operator==(const AuditEvent&) const = default;
};

Json encode(const AuditEvent& e);
AuditEvent decode_event(const Json& j);
// One log line, without the trailing newline.
std::string canonical_line(const AuditEvent& e);

std::string sha256_hex(std::string_view bytes);

struct AssessmentRecord {
  std::string system_id;
  int gate = 0;
  PillarMap<PillarAssessment> assessments;
  TrustIndexResult trust_index;
  std::uint64_t sequence = 0;
  Timestamp recorded_at;

  bool operator==(const AssessmentRecord&) const = default;
};

struct CheckRecord {
  std::string result_id;
  std::string system_id;
  CheckResult result;
  std::vector<std::string> not_implemented;
};

struct TriggerRecord {
  std::string system_id;
  RevalidationTrigger trigger = RevalidationTrigger::RetrainSignificantData;
  std::uint64_t sequence = 0;
  Timestamp fired_at;

  bool operator==(const TriggerRecord&) const = default;
};

struct SystemState {
  AiSystem system;
  std::map<std::string, ControlStatus> statuses;
  std::optional<AssessmentRecord> assessment;
  std::vector<ExceptionRecord> exceptions;
  std::vector<GateDecision> decisions;
  std::vector<CheckRecord> checks;
  std::vector<TriggerRecord> triggers;
  std::uint64_t last_sequence = 0;

  std::vector<ControlStatus> status_list() const;
  // Exceptions not yet expired; overdue permanent ones are still open.
  std::vector<ExceptionRecord> open_exceptions() const;
};

struct RegistryState {
  std::uint64_t sequence = 0;
  std::optional<Timestamp> last_timestamp;
  std::map<std::string, SystemState> systems;
  std::map<std::string, RiskItem> risks;

  // Throws UnknownSystem.
  const SystemState& system(std::string_view id) const;
  std::vector<RiskItem> risks_for(std::string_view project) const;
};

// Payload shape of every event names its system under "system_id", except
// RiskUpserted which names it under "project".
std::optional<std::string> event_system(const AuditEvent& e);

// Applies one event. Throws StoreCorrupt when the event does not fit the state.
void apply_event(RegistryState& state, const AuditEvent& event);
RegistryState fold(std::span<const AuditEvent> events);

Json encode(const SystemState& s, const RegistryState& registry);
Json encode_check_record(const CheckRecord& c);
Json encode_assessment_record(const AssessmentRecord& a);

struct VerifyReport {
  bool ok = true;
  std::uint64_t events = 0;
  std::optional<std::uint64_t> first_broken;
  std::string message;
};

// Reads the log and head files under `dir` and checks the chain end to end.
VerifyReport verify_store(const std::filesystem::path& dir);

class Store {
 public:
  enum class Mode { ReadOnly, ReadWrite };

  // Opening for writing creates the store when absent and takes an exclusive
  // lock held until destruction. Opening a missing store read-only throws
  // InvalidArgument; otherwise throws StoreCorrupt or WriteFailed.
  static std::unique_ptr<Store> open(const std::filesystem::path& dir, Mode mode = Mode::ReadWrite);
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  using Builder = std::function<Json(std::uint64_t sequence, const RegistryState& state)>;

  // Builds the payload under the writer lock, with the sequence the event will
  // receive, then persists it durably before returning. An exception thrown by
  // `build` aborts the append.
  AuditEvent append_with(EventKind kind, const std::string& actor, Timestamp timestamp, const Builder& build);
  AuditEvent append(EventKind kind, Json payload, const std::string& actor, Timestamp timestamp);

  RegistryState state() const;
  RegistryState state_at(std::uint64_t sequence) const;
  SystemState snapshot(std::string_view system_id) const;
  std::uint64_t sequence() const;
  std::vector<AuditEvent> events(std::uint64_t since = 0) const;

  // Log lines in their stored form; per-system when `system_id` is given.
  std::string export_log(const std::optional<std::string>& system_id = std::nullopt) const;

  const std::filesystem::path& dir() const { return dir_; }
  bool writable() const { return mode_ == Mode::ReadWrite; }

 private:
  Store(std::filesystem::path dir, Mode mode);

  std::filesystem::path dir_;
  Mode mode_;
  int lock_fd_ = -1;
  std::shared_ptr<const RegistryState> current() const;

  std::mutex write_mutex_;
  mutable std::mutex state_mutex_;
  std::vector<AuditEvent> events_;
  std::vector<std::string> lines_;
  std::shared_ptr<const RegistryState> state_;
};

}  // namespace trustgate
