#pragma once

#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cookiepilot {

// JSON-lines record of every exploration and probe action:
// {domain, view, tag, action, outcome, reason}. Shared by the worker
// threads of a measurement run.
class AuditLog {
 public:
  AuditLog() = default;
  explicit AuditLog(const std::string& path);

  void record(const std::string& domain, int view, const std::string& tag,
              const std::string& action, const nlohmann::json& outcome,
              const std::string& reason = {});

  std::vector<nlohmann::json> entries() const;

 private:
  mutable std::mutex mu_;
  std::ofstream out_;
  std::vector<nlohmann::json> entries_;
};

}  // namespace cookiepilot
