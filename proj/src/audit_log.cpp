#include "cookiepilot/audit_log.hpp"

#include "cookiepilot/error.hpp"

namespace cookiepilot {

AuditLog::AuditLog(const std::string& path) : out_(path, std::ios::app) {
  if (!out_) throw Error(ErrorCode::kConfig, "cannot open audit log " + path);
}

void AuditLog::record(const std::string& domain, int view, const std::string& tag,
                      const std::string& action, const nlohmann::json& outcome,
                      const std::string& reason) {
  nlohmann::json j = {{"domain", domain}, {"view", view},       {"tag", tag},
                      {"action", action}, {"outcome", outcome}, {"reason", reason}};
  std::lock_guard lock(mu_);
  if (out_.is_open()) out_ << j.dump() << '\n' << std::flush;
  entries_.push_back(std::move(j));
}

std::vector<nlohmann::json> AuditLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

}  // namespace cookiepilot
