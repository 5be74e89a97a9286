#include "cloakbound/report.hpp"

namespace cloakbound {

using nlohmann::json;

std::string status_string(MarginTable::Status s) {
  switch (s) {
    case MarginTable::Status::Pass: return "pass";
    case MarginTable::Status::Fail: return "fail";
    case MarginTable::Status::SkippedPremise: return "skipped-premise";
  }
  return "unknown";
}

json margin_table_json(const MarginTable& table) {
  json j;
  j["name"] = table.name;
  j["status"] = status_string(table.status);
  j["min_margin"] = table.min_margin;
  j["at"] = table.at;
  if (table.potential >= 0) j["potential"] = table.potential;
  if (!table.detail.empty()) j["detail"] = table.detail;
  return j;
}

void Report::add(CheckResult result) { checks_.push_back(std::move(result)); }

void Report::add(const MarginTable& table) {
  CheckResult r;
  r.name = table.name;
  r.status = status_string(table.status);
  r.margin = table.min_margin;
  r.details = margin_table_json(table);
  checks_.push_back(std::move(r));
}

bool Report::any_failed() const {
  for (const auto& c : checks_)
    if (c.status == "fail") return true;
  return false;
}

int Report::num_failed() const {
  int n = 0;
  for (const auto& c : checks_)
    if (c.status == "fail") ++n;
  return n;
}

json Report::to_json() const {
  json j;
  j["provenance"] = provenance_;
  json arr = json::array();
  for (const auto& c : checks_) {
    json cj;
    cj["name"] = c.name;
    cj["status"] = c.status;
    cj["margin"] = c.margin;
    cj["details"] = c.details;
    arr.push_back(cj);
  }
  j["checks"] = arr;
  j["summary"] = {{"total", num_checks()}, {"failed", num_failed()}};
  j["timing"] = {{"seconds", timing_seconds_}};
  return j;
}

}  // namespace cloakbound
