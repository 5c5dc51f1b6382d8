#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "trustgate/engine.hpp"
#include "trustgate/error.hpp"

namespace trustgate {

struct Principal {
  std::string actor;
  std::vector<ApprovalRole> roles;
};

// {"tokens": {"<bearer token>": {"actor": "...", "roles": ["AiCoE", ...]}}}
struct AuthConfig {
  std::map<std::string, Principal> tokens;
};

AuthConfig parse_auth_config(std::string_view text);
// Throws AuthConfigMissing when the file is absent or defines no tokens.
AuthConfig load_auth_config(const std::filesystem::path& path);

int http_status(ErrorKind kind);

class ApiServer {
 public:
  ApiServer(Engine& engine, AuthConfig auth);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws BindFailed.
  int bind(const std::string& host, int port);
  // Serves until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace trustgate
