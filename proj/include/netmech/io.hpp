#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "netmech/data.hpp"
#include "netmech/network.hpp"

namespace netmech {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two integer ids per line, separated by whitespace or a comma. '#' starts a comment line and a
// non-numeric first line (e.g. "node_1,node_2") is skipped as a header.
// Ids are compacted to 0..N-1 in first-seen order; duplicate edges are dropped.
// Self-loops keep their unit but add no edge.
struct EdgeList {
  FriendshipNetwork network;
  std::vector<std::int64_t> original_ids;  // original_ids[compact id]
};

EdgeList read_edge_list(std::istream& in);
EdgeList load_edge_list_with_ids(const std::filesystem::path& path);
FriendshipNetwork load_edge_list(const std::filesystem::path& path);
// Reloading with load_edge_list reproduces the same ids, isolated units included.
void save_edge_list(const std::filesystem::path& path, const FriendshipNetwork& net);

// CSV with header "unit,L,A,Y" and one row per unit in id order.
// L is flagged continuous when any value is not 0 or 1.
NetworkData read_data_csv(std::istream& in);
NetworkData load_data_csv(const std::filesystem::path& path);
void write_data_csv(std::ostream& out, const NetworkData& data);
void save_data_csv(const std::filesystem::path& path, const NetworkData& data);

// A 0/1 vector, one value per line (optionally "unit,a" with a header).
std::vector<int> load_treatment(const std::filesystem::path& path, std::size_t n_units);

// One row of an experiment: a trial at a given size, for one series (layer, estimator, ...).
struct TrialRecord {
  std::size_t trial = 0;
  std::size_t size = 0;
  std::string series;
  std::string status = "ok";
  double value = 0.0;    // LR statistic, effect estimate or set size
  double p_value = 0.0;  // NaN when not a test
  int decision = -1;     // 1 reject, 0 retain, -1 none

  bool operator==(const TrialRecord& other) const;
};

struct SummaryRow {
  std::size_t size = 0;
  std::string series;
  std::size_t n = 0;
  std::size_t n_failed = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  double rejection_rate = 0.0;  // over decided records
};

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

struct ExperimentReport {
  std::string kind;  // test-calibration | test-power | estimation-consistency | network-analysis
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  std::vector<TrialRecord> records;
  nlohmann::json extra = nlohmann::json::object();  // kind-specific derived values

  nlohmann::json to_json() const;  // config, seed, summary and extra; records go to CSV
};

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records_csv(std::istream& in);

// Writes <out>.json and <out>.csv, or JSON to stdout and no CSV when out is empty.
void save_report(const ExperimentReport& report, const std::string& out);

nlohmann::json summary_json(const std::vector<SummaryRow>& rows);

}  // namespace netmech
