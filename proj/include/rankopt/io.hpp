#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankopt/bestx.hpp"
#include "rankopt/instance.hpp"
#include "rankopt/multi_purchase.hpp"
#include "rankopt/sim.hpp"

namespace rankopt {

// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance file:
//   {"products": [{"id": "a", "price": 9, "lambda": 0.1, "cont_prob": 0.5}, ...],
//    "span": {"type": "explicit", "tail": [1, 0.1]}}
// cont_prob is optional but must be given for all products or none. Unknown
// fields are rejected.
struct InstanceData {
  std::vector<GeneralProduct> products;
  bool has_cont_prob = false;
  std::optional<SpanSpec> span;
};

nlohmann::json read_json(const std::filesystem::path& path);
InstanceData parse_instance(const nlohmann::json& doc);
InstanceData load_instance(const std::filesystem::path& path);

Catalog to_catalog(const InstanceData& data);
// Uses cont_prob when present, c = 1 - lambda otherwise.
GeneralCatalog to_general(const InstanceData& data);
SpanDistribution to_distribution(const InstanceData& data);

// {"type": "explicit" | "geometric" | "linear_tail", "tail": [...], "alpha": a, "M": m, "truncate": k}
SpanSpec parse_span(const nlohmann::json& doc);
nlohmann::json span_to_json(const SpanDistribution& dist);
nlohmann::json instance_to_json(const Catalog& catalog, const SpanDistribution& dist);

OfflineConfig parse_offline_config(const nlohmann::json& doc);
BanditConfig parse_bandit_config(const nlohmann::json& doc);

// Shortest round-trip decimal form.
std::string format_number(double v);

// ratios.csv, histogram.csv and summary.json.
void write_offline_report(const OfflineReport& report, const std::filesystem::path& dir);
// rounds.csv, regret.csv and summary.json.
void write_bandit_report(const BanditReport& report, const std::filesystem::path& dir);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace rankopt
