#ifndef CLOAKBOUND_REPORT_HPP
#define CLOAKBOUND_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "cloakbound/cloaking.hpp"

namespace cloakbound {

/// One executed check. Failures carry the violating frequency/potential.
struct CheckResult {
  std::string name;
  std::string status;  // "pass" | "fail" | "skipped-premise"
  double margin = 0.0;
  nlohmann::json details;
};

/// Machine-readable run ledger. Timing lives in a single top-level field so
/// determinism comparisons can strip it.
class Report {
 public:
  void set_provenance(const nlohmann::json& p) { provenance_ = p; }
  void add(CheckResult result);
  void add(const MarginTable& table);

  bool any_failed() const;
  int num_checks() const { return static_cast<int>(checks_.size()); }
  int num_failed() const;

  void set_timing_seconds(double s) { timing_seconds_ = s; }
  nlohmann::json to_json() const;

 private:
  std::vector<CheckResult> checks_;
  nlohmann::json provenance_;
  double timing_seconds_ = 0.0;
};

nlohmann::json margin_table_json(const MarginTable& table);
std::string status_string(MarginTable::Status s);

}  // namespace cloakbound

#endif
