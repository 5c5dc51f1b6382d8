#include "trustgate/registry.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "trustgate/codec.hpp"
#include "trustgate/error.hpp"

namespace trustgate {
namespace fs = std::filesystem;

namespace {

constexpr EnumNames<EventKind, 9> kEventKindNames{{
    {EventKind::SystemRegistered, "SystemRegistered"},
    {EventKind::StatusUpdated, "StatusUpdated"},
    {EventKind::AssessmentRecorded, "AssessmentRecorded"},
    {EventKind::GateDecided, "GateDecided"},
    {EventKind::ExceptionGranted, "ExceptionGranted"},
    {EventKind::ExceptionExpired, "ExceptionExpired"},
    {EventKind::TriggerFired, "TriggerFired"},
    {EventKind::RiskUpserted, "RiskUpserted"},
    {EventKind::CheckExecuted, "CheckExecuted"},
}};

const char* const kLogFile = "events.log";
const char* const kHeadFile = "head.json";
const char* const kLockFile = "writer.lock";

[[noreturn]] void corrupt(std::uint64_t sequence, const std::string& message) {
  throw Error(ErrorKind::StoreCorrupt, "event " + std::to_string(sequence) + ": " + message,
              Json{{"sequence", sequence}});
}

SystemState& system_mut(RegistryState& state, const std::string& id, std::uint64_t seq) {
  auto it = state.systems.find(id);
  if (it == state.systems.end()) corrupt(seq, "refers to unregistered system '" + id + "'");
  return it->second;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(int fd, std::string_view bytes, const fs::path& path) {
  while (!bytes.empty()) {
    const ssize_t n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::WriteFailed, "write to " + path.string() + " failed: " + std::strerror(errno));
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

void sync_fd(int fd, const fs::path& path) {
  if (::fsync(fd) != 0) {
    throw Error(ErrorKind::WriteFailed, "fsync of " + path.string() + " failed: " + std::strerror(errno));
  }
}

void append_durably(const fs::path& path, std::string_view bytes) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorKind::WriteFailed, "cannot open " + path.string() + ": " + std::strerror(errno));
  try {
    write_all(fd, bytes, path);
    sync_fd(fd, path);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

void replace_durably(const fs::path& path, std::string_view bytes) {
  const fs::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_TRUNC | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorKind::WriteFailed, "cannot open " + tmp.string() + ": " + std::strerror(errno));
  try {
    write_all(fd, bytes, tmp);
    sync_fd(fd, tmp);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    throw Error(ErrorKind::WriteFailed, "cannot replace " + path.string() + ": " + std::strerror(errno));
  }
  const int dfd = ::open(path.parent_path().c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (dfd >= 0) {
    ::fsync(dfd);
    ::close(dfd);
  }
}

std::string head_text(std::uint64_t sequence, const std::string& digest) {
  return Json{{"sequence", sequence}, {"digest", digest}}.dump() + "\n";
}

struct LoadedChain {
  VerifyReport report;
  std::vector<AuditEvent> events;
  std::vector<std::string> lines;
};

LoadedChain load_chain(const fs::path& dir) {
  LoadedChain out;
  auto& rep = out.report;
  const fs::path log_path = dir / kLogFile;
  const fs::path head_path = dir / kHeadFile;
  if (!fs::is_directory(dir)) {
    rep.ok = false;
    rep.message = "no store at " + dir.string();
    return out;
  }

  const std::string bytes = fs::exists(log_path) ? read_file(log_path) : std::string();
  std::vector<std::string> lines;
  bool unterminated = false;
  {
    std::size_t start = 0;
    while (start < bytes.size()) {
      const auto nl = bytes.find('\n', start);
      if (nl == std::string::npos) {
        lines.push_back(bytes.substr(start));
        unterminated = true;
        break;
      }
      lines.push_back(bytes.substr(start, nl - start));
      start = nl + 1;
    }
  }
  const std::uint64_t n = lines.size();
  rep.events = n;

  // bad_line[i]: line i (1-based) fails to parse, is not canonical, or is out of sequence.
  // link_ok[i]: line i's prev_digest matches line i-1; link n+1 is the head file.
  std::vector<bool> bad_line(n + 2, false);
  std::vector<bool> link_ok(n + 2, false);
  std::vector<std::string> reasons(n + 2);
  std::vector<std::string> digests(n + 1);
  digests[0] = sha256_hex("");
  for (std::uint64_t i = 1; i <= n; ++i) digests[i] = sha256_hex(lines[i - 1]);

  for (std::uint64_t i = 1; i <= n; ++i) {
    const std::string& line = lines[i - 1];
    try {
      auto ev = decode_event(Json::parse(line));
      if (canonical_line(ev) != line) {
        bad_line[i] = true;
        reasons[i] = "not in canonical form";
      } else if (ev.sequence != i) {
        bad_line[i] = true;
        reasons[i] = "sequence " + std::to_string(ev.sequence) + " out of order";
      }
      link_ok[i] = ev.prev_digest == digests[i - 1];
      if (!link_ok[i] && reasons[i].empty()) reasons[i] = "prev_digest does not match the preceding event";
      out.events.push_back(std::move(ev));
    } catch (const std::exception& e) {
      bad_line[i] = true;
      reasons[i] = std::string("unreadable: ") + e.what();
      out.events.emplace_back();
    }
  }
  if (unterminated && n > 0) {
    bad_line[n] = true;
    reasons[n] = "truncated line";
  }

  std::string head_reason;
  std::uint64_t head_at = n;
  if (fs::exists(head_path)) {
    try {
      const auto head = Json::parse(read_file(head_path));
      const auto seq = head.at("sequence").get<std::uint64_t>();
      const auto digest = head.at("digest").get<std::string>();
      link_ok[n + 1] = seq == n && digest == digests[n];
      if (seq != n) head_at = std::min(seq, n) + 1;
      if (!link_ok[n + 1]) {
        head_reason = seq != n ? "head records " + std::to_string(seq) + " events, log holds " + std::to_string(n)
                               : "last event does not match the head digest";
      }
    } catch (const std::exception& e) {
      head_reason = std::string("head file unreadable: ") + e.what();
    }
  } else {
    link_ok[n + 1] = n == 0;
    if (n != 0) head_reason = "head file missing";
  }

  std::optional<std::uint64_t> broken;
  std::string why;
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (bad_line[i]) {
      broken = i;
      why = reasons[i];
      break;
    }
  }
  for (std::uint64_t i = 1; i <= n + 1; ++i) {
    if (link_ok[i]) continue;
    // A broken link means either the earlier event changed, or this one did
    // (its own prev_digest); the latter also breaks the following link.
    std::uint64_t at = i;
    if (i == n + 1) {
      at = head_at;
    } else if (i > 1 && (i + 1 > n + 1 || link_ok[i + 1])) {
      at = i - 1;
    }
    if (!broken || at < *broken) {
      broken = at;
      why = i == n + 1 ? head_reason : "chain broken between events " + std::to_string(i - 1) + " and " + std::to_string(i);
    }
    break;
  }

  if (broken) {
    rep.ok = false;
    rep.first_broken = broken;
    rep.message = "event " + std::to_string(*broken) + ": " + why;
  } else {
    rep.message = std::to_string(n) + " events verified";
    out.lines = std::move(lines);
  }
  return out;
}

}  // namespace

std::string_view to_string(EventKind k) { return enum_name(kEventKindNames, k); }
std::optional<EventKind> parse_event_kind(std::string_view name) { return enum_from_name(kEventKindNames, name); }

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::WriteFailed, "SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

Json encode(const AuditEvent& e) {
  return Json{{"sequence", e.sequence},
              {"timestamp", e.timestamp.to_string()},
              {"actor", e.actor},
              {"event_kind", to_string(e.kind)},
              {"payload", e.payload},
              {"prev_digest", e.prev_digest}};
}

AuditEvent decode_event(const Json& j) {
  if (!j.is_object() || j.size() != 6) throw Error(ErrorKind::ParseError, "audit event must have six fields");
  AuditEvent e;
  e.sequence = j.at("sequence").get<std::uint64_t>();
  e.timestamp = Timestamp::parse(j.at("timestamp").get<std::string>());
  e.actor = j.at("actor").get<std::string>();
  const auto kind = j.at("event_kind").get<std::string>();
  auto k = parse_event_kind(kind);
  if (!k) throw Error(ErrorKind::ParseError, "unknown event kind '" + kind + "'");
  e.kind = *k;
  e.payload = j.at("payload");
  e.prev_digest = j.at("prev_digest").get<std::string>();
  return e;
}

std::string canonical_line(const AuditEvent& e) { return encode(e).dump(); }

std::vector<ControlStatus> SystemState::status_list() const {
  std::vector<ControlStatus> out;
  out.reserve(statuses.size());
  for (const auto& [id, s] : statuses) out.push_back(s);
  return out;
}

std::vector<ExceptionRecord> SystemState::open_exceptions() const {
  std::vector<ExceptionRecord> out;
  for (const auto& e : exceptions) {
    if (e.state != ExceptionState::Expired) out.push_back(e);
  }
  return out;
}

const SystemState& RegistryState::system(std::string_view id) const {
  auto it = systems.find(std::string(id));
  if (it == systems.end()) {
    throw Error(ErrorKind::UnknownSystem, "unknown system '" + std::string(id) + "'",
                Json{{"system_id", std::string(id)}});
  }
  return it->second;
}

std::vector<RiskItem> RegistryState::risks_for(std::string_view project) const {
  std::vector<RiskItem> out;
  for (const auto& [id, r] : risks) {
    if (r.project == project) out.push_back(r);
  }
  return out;
}

std::optional<std::string> event_system(const AuditEvent& e) {
  const char* key = e.kind == EventKind::RiskUpserted ? "project" : "system_id";
  auto it = e.payload.find(key);
  if (it == e.payload.end() || !it->is_string() || it->get<std::string>().empty()) return std::nullopt;
  return it->get<std::string>();
}

void apply_event(RegistryState& state, const AuditEvent& ev) {
  const auto seq = ev.sequence;
  if (seq != state.sequence + 1) corrupt(seq, "expected sequence " + std::to_string(state.sequence + 1));
  const Json& p = ev.payload;
  try {
    switch (ev.kind) {
      case EventKind::SystemRegistered: {
        auto sys = decode_system(p);
        if (state.systems.count(sys.system_id)) corrupt(seq, "system '" + sys.system_id + "' registered twice");
        SystemState st;
        st.system = std::move(sys);
        state.systems.emplace(st.system.system_id, std::move(st));
        break;
      }
      case EventKind::StatusUpdated: {
        auto& st = system_mut(state, p.at("system_id").get<std::string>(), seq);
        for (const auto& s : p.at("statuses")) {
          auto status = decode_status(s);
          st.statuses[status.control_id] = std::move(status);
        }
        break;
      }
      case EventKind::AssessmentRecorded: {
        AssessmentRecord rec;
        rec.system_id = p.at("system_id").get<std::string>();
        rec.gate = p.at("gate").get<int>();
        for (const auto& [k, v] : p.at("assessments").items()) {
          auto a = decode_assessment(v);
          rec.assessments[a.pillar] = a;
        }
        rec.trust_index = decode_trust_index(p.at("trust_index"));
        rec.sequence = seq;
        rec.recorded_at = ev.timestamp;
        auto& st = system_mut(state, rec.system_id, seq);
        st.assessment = std::move(rec);
        break;
      }
      case EventKind::GateDecided: {
        auto d = decode_decision(p);
        auto& st = system_mut(state, d.system_id, seq);
        st.system = apply_decision(st.system, d);
        st.decisions.push_back(std::move(d));
        break;
      }
      case EventKind::ExceptionGranted: {
        auto e = decode_exception(p);
        auto& st = system_mut(state, e.system_id, seq);
        st.exceptions.push_back(std::move(e));
        break;
      }
      case EventKind::ExceptionExpired: {
        auto& st = system_mut(state, p.at("system_id").get<std::string>(), seq);
        const auto id = p.at("exception_id").get<std::string>();
        auto it = std::find_if(st.exceptions.begin(), st.exceptions.end(),
                               [&](const ExceptionRecord& e) { return e.exception_id == id; });
        if (it == st.exceptions.end()) corrupt(seq, "unknown exception '" + id + "'");
        auto s = parse_exception_state(p.at("state").get<std::string>());
        if (!s) corrupt(seq, "bad exception state");
        it->state = *s;
        break;
      }
      case EventKind::TriggerFired: {
        TriggerRecord t;
        t.system_id = p.at("system_id").get<std::string>();
        auto trig = parse_revalidation_trigger(p.at("trigger").get<std::string>());
        if (!trig) corrupt(seq, "unknown trigger");
        t.trigger = *trig;
        t.sequence = seq;
        t.fired_at = ev.timestamp;
        auto& st = system_mut(state, t.system_id, seq);
        st.system = apply_trigger(st.system, t.trigger);
        st.triggers.push_back(std::move(t));
        break;
      }
      case EventKind::RiskUpserted: {
        auto r = decode_risk(p);
        state.risks[r.risk_id] = std::move(r);
        break;
      }
      case EventKind::CheckExecuted: {
        CheckRecord c;
        c.result_id = p.at("result_id").get<std::string>();
        c.system_id = p.at("system_id").get<std::string>();
        c.result = decode_check_result(p.at("result"));
        for (const auto& s : p.at("not_implemented")) c.not_implemented.push_back(s.get<std::string>());
        auto& st = system_mut(state, c.system_id, seq);
        for (const auto& s : p.at("statuses")) {
          auto status = decode_status(s);
          st.statuses[status.control_id] = std::move(status);
        }
        st.checks.push_back(std::move(c));
        break;
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::StoreCorrupt) throw;
    corrupt(seq, e.what());
  } catch (const nlohmann::json::exception& e) {
    corrupt(seq, std::string("malformed payload: ") + e.what());
  }
  if (auto id = event_system(ev); id && ev.kind != EventKind::RiskUpserted) {
    state.systems.at(*id).last_sequence = seq;
  }
  state.sequence = seq;
  state.last_timestamp = ev.timestamp;
}

RegistryState fold(std::span<const AuditEvent> events) {
  RegistryState state;
  for (const auto& e : events) apply_event(state, e);
  return state;
}

Json encode_assessment_record(const AssessmentRecord& a) {
  Json per = Json::object();
  for (const auto& [p, v] : a.assessments) per[std::string(to_string(p))] = encode(v);
  return Json{{"system_id", a.system_id},
              {"gate", a.gate},
              {"assessments", per},
              {"trust_index", encode(a.trust_index)},
              {"sequence", a.sequence},
              {"recorded_at", a.recorded_at.to_string()}};
}

Json encode_check_record(const CheckRecord& c) {
  return Json{{"result_id", c.result_id},
              {"system_id", c.system_id},
              {"result", encode(c.result)},
              {"not_implemented", c.not_implemented}};
}

Json encode(const SystemState& s, const RegistryState& registry) {
  Json statuses = Json::array();
  for (const auto& [id, st] : s.statuses) statuses.push_back(encode(st));
  Json exceptions = Json::array();
  for (const auto& e : s.exceptions) exceptions.push_back(encode(e));
  Json decisions = Json::array();
  for (const auto& d : s.decisions) decisions.push_back(encode(d));
  Json checks = Json::array();
  for (const auto& c : s.checks) checks.push_back(encode_check_record(c));
  Json triggers = Json::array();
  for (const auto& t : s.triggers) {
    triggers.push_back(Json{{"trigger", to_string(t.trigger)}, {"sequence", t.sequence}, {"fired_at", t.fired_at.to_string()}});
  }
  Json risks = Json::array();
  for (const auto& r : registry.risks_for(s.system.system_id)) risks.push_back(encode(r));
  return Json{{"system", encode(s.system)},
              {"statuses", statuses},
              {"assessment", s.assessment ? encode_assessment_record(*s.assessment) : Json(nullptr)},
              {"exceptions", exceptions},
              {"decisions", decisions},
              {"checks", checks},
              {"triggers", triggers},
              {"risks", risks},
              {"last_sequence", s.last_sequence},
              {"audit_sequence", registry.sequence}};
}

VerifyReport verify_store(const fs::path& dir) { return load_chain(dir).report; }

Store::Store(fs::path dir, Mode mode) : dir_(std::move(dir)), mode_(mode) {}

Store::~Store() {
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

std::unique_ptr<Store> Store::open(const fs::path& dir, Mode mode) {
  std::unique_ptr<Store> store(new Store(dir, mode));
  if (mode == Mode::ReadWrite) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::WriteFailed, "cannot create store " + dir.string() + ": " + ec.message());
    const fs::path lock_path = dir / kLockFile;
    store->lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (store->lock_fd_ < 0) {
      throw Error(ErrorKind::WriteFailed, "cannot open " + lock_path.string() + ": " + std::strerror(errno));
    }
    if (::flock(store->lock_fd_, LOCK_EX | LOCK_NB) != 0) {
      throw Error(ErrorKind::WriteFailed, "store " + dir.string() + " is locked by another writer");
    }
  } else if (!fs::is_directory(dir)) {
    throw Error(ErrorKind::InvalidArgument, "no store at " + dir.string(), Json{{"path", dir.string()}});
  }

  auto chain = load_chain(dir);
  if (!chain.report.ok) {
    Json details{{"path", dir.string()}};
    if (chain.report.first_broken) details["sequence"] = *chain.report.first_broken;
    throw Error(ErrorKind::StoreCorrupt, "audit log verification failed: " + chain.report.message, details);
  }
  store->state_ = std::make_shared<const RegistryState>(fold(chain.events));
  store->events_ = std::move(chain.events);
  store->lines_ = std::move(chain.lines);
  return store;
}

AuditEvent Store::append_with(EventKind kind, const std::string& actor, Timestamp timestamp, const Builder& build) {
  std::lock_guard writer(write_mutex_);
  if (mode_ != Mode::ReadWrite) throw Error(ErrorKind::WriteFailed, "store is open read-only");

  AuditEvent ev;
  const RegistryState& current = *state_;
  ev.sequence = current.sequence + 1;
  ev.timestamp = timestamp;
  ev.actor = actor;
  ev.kind = kind;
  ev.payload = build(ev.sequence, current);
  ev.prev_digest = lines_.empty() ? sha256_hex("") : sha256_hex(lines_.back());

  auto next = std::make_shared<RegistryState>(current);
  apply_event(*next, ev);

  std::string line = canonical_line(ev);
  append_durably(dir_ / kLogFile, line + "\n");
  replace_durably(dir_ / kHeadFile, head_text(ev.sequence, sha256_hex(line)));

  std::lock_guard lock(state_mutex_);
  state_ = std::move(next);
  events_.push_back(ev);
  lines_.push_back(std::move(line));
  return ev;
}

AuditEvent Store::append(EventKind kind, Json payload, const std::string& actor, Timestamp timestamp) {
  return append_with(kind, actor, timestamp, [&](std::uint64_t, const RegistryState&) { return payload; });
}

std::shared_ptr<const RegistryState> Store::current() const {
  std::lock_guard lock(state_mutex_);
  return state_;
}

RegistryState Store::state() const { return *current(); }

RegistryState Store::state_at(std::uint64_t sequence) const {
  std::vector<AuditEvent> prefix;
  {
    std::lock_guard lock(state_mutex_);
    if (sequence > state_->sequence) {
      throw Error(ErrorKind::InvalidArgument, "sequence " + std::to_string(sequence) + " is beyond the log end " +
                                                  std::to_string(state_->sequence));
    }
    prefix.assign(events_.begin(), events_.begin() + static_cast<std::ptrdiff_t>(sequence));
  }
  return fold(prefix);
}

SystemState Store::snapshot(std::string_view system_id) const { return current()->system(system_id); }

std::uint64_t Store::sequence() const { return current()->sequence; }

std::vector<AuditEvent> Store::events(std::uint64_t since) const {
  std::lock_guard lock(state_mutex_);
  if (since >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(since), events_.end()};
}

std::string Store::export_log(const std::optional<std::string>& system_id) const {
  std::lock_guard lock(state_mutex_);
  std::string out;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (system_id && event_system(events_[i]) != system_id) continue;
    out += lines_[i];
    out += '\n';
  }
  return out;
}

}  // namespace trustgate
