#include "netmech/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace netmech {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, std::size_t line, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(std::string("invalid ") + what + " '" + std::string(s) + "'", line);
  }
  return value;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

EdgeList read_edge_list(std::istream& in) {
  std::unordered_map<std::int64_t, UnitId> compact;
  std::vector<std::int64_t> original;
  std::vector<std::pair<UnitId, UnitId>> edges;
  auto id_of = [&](std::int64_t raw) {
    auto [it, inserted] = compact.try_emplace(raw, static_cast<UnitId>(original.size()));
    if (inserted) original.push_back(raw);
    return it->second;
  };

  auto numeric = [](const std::string& t) {
    return !t.empty() && (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '-');
  };
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    std::string buf(s);
    for (char& c : buf) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(buf);
    std::string a, b, rest;
    if (!(fields >> a >> b) || (fields >> rest)) {
      throw ParseError("expected exactly two ids, got '" + std::string(s) + "'", line_no);
    }
    // CSV exports such as "node_1,node_2" carry a header.
    const bool header = first && !numeric(a) && !numeric(b);
    first = false;
    if (header) continue;
    const UnitId u = id_of(parse_number<std::int64_t>(a, line_no, "node id"));
    const UnitId v = id_of(parse_number<std::int64_t>(b, line_no, "node id"));
    if (u != v) edges.emplace_back(u, v);
  }
  return {FriendshipNetwork(original.size(), edges), std::move(original)};
}

EdgeList load_edge_list_with_ids(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_edge_list(in);
}

FriendshipNetwork load_edge_list(const std::filesystem::path& path) {
  return load_edge_list_with_ids(path).network;
}

void save_edge_list(const std::filesystem::path& path, const FriendshipNetwork& net) {
  // Lines are ordered so that first-seen compaction on reload reproduces the ids: unit u first
  // appears as the second id of an edge to a lower neighbour, or in a "u u" declaration when it
  // has none (self-loops register the unit and add no edge).
  auto out = open_out(path);
  out << "# units " << net.n_units() << " edges " << net.n_edges() << '\n';
  for (UnitId u = 0; u < net.n_units(); ++u) {
    bool declared = false;
    for (UnitId v : net.neighbors(u)) {
      if (v >= u) break;
      out << v << ' ' << u << '\n';
      declared = true;
    }
    if (!declared) out << u << ' ' << u << '\n';
  }
}

NetworkData read_data_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  NetworkData data;
  while (std::getline(in, line)) {
    ++line_no;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto cells = split_csv(s);
    if (!header) {
      if (cells.size() != 4 || cells[0] != "unit" || cells[1] != "L" || cells[2] != "A" ||
          cells[3] != "Y") {
        throw ParseError("expected header 'unit,L,A,Y'", line_no);
      }
      header = true;
      continue;
    }
    if (cells.size() != 4) throw ParseError("expected 4 columns", line_no);
    const auto unit = parse_number<std::size_t>(cells[0], line_no, "unit id");
    if (unit != data.L.size()) {
      throw ParseError("unit ids must be 0..N-1 in order (expected " +
                           std::to_string(data.L.size()) + ")",
                       line_no);
    }
    data.L.push_back(parse_number<double>(cells[1], line_no, "L value"));
    const int a = parse_number<int>(cells[2], line_no, "A value");
    const int y = parse_number<int>(cells[3], line_no, "Y value");
    if ((a != 0 && a != 1) || (y != 0 && y != 1)) throw ParseError("A and Y must be 0 or 1", line_no);
    data.A.push_back(a);
    data.Y.push_back(y);
  }
  if (!header) throw ParseError("missing header 'unit,L,A,Y'");
  for (double v : data.L) {
    if (v != 0.0 && v != 1.0) data.continuous_L = true;
  }
  return data;
}

NetworkData load_data_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_data_csv(in);
}

void write_data_csv(std::ostream& out, const NetworkData& data) {
  out << "unit,L,A,Y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << i << ',' << format_double(data.L[i]) << ',' << data.A[i] << ',' << data.Y[i] << '\n';
  }
}

void save_data_csv(const std::filesystem::path& path, const NetworkData& data) {
  auto out = open_out(path);
  write_data_csv(out, data);
}

std::vector<int> load_treatment(const std::filesystem::path& path, std::size_t n_units) {
  auto in = open_in(path);
  std::vector<int> a;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto cells = split_csv(s);
    if (cells.size() == 2 && cells[0] == "unit") continue;
    const auto cell = cells.back();
    const int v = parse_number<int>(cell, line_no, "treatment");
    if (v != 0 && v != 1) throw ParseError("treatment must be 0 or 1", line_no);
    a.push_back(v);
  }
  if (a.size() != n_units) {
    throw ArgumentError("treatment file has " + std::to_string(a.size()) + " values, network has " +
                        std::to_string(n_units) + " units");
  }
  return a;
}

bool TrialRecord::operator==(const TrialRecord& o) const {
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return trial == o.trial && size == o.size && series == o.series && status == o.status &&
         same(value, o.value) && same(p_value, o.p_value) && decision == o.decision;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  struct Acc {
    std::vector<double> values;
    std::size_t failed = 0, decided = 0, rejected = 0;
  };
  std::map<std::pair<std::size_t, std::string>, Acc> groups;
  for (const auto& r : records) {
    auto& g = groups[{r.size, r.series}];
    if (r.status != "ok") {
      ++g.failed;
      continue;
    }
    g.values.push_back(r.value);
    if (r.decision >= 0) {
      ++g.decided;
      g.rejected += r.decision == 1;
    }
  }
  std::vector<SummaryRow> rows;
  for (const auto& [key, g] : groups) {
    SummaryRow row;
    row.size = key.first;
    row.series = key.second;
    row.n = g.values.size();
    row.n_failed = g.failed;
    if (!g.values.empty()) {
      double sum = 0.0;
      row.min = row.max = g.values.front();
      for (double v : g.values) {
        sum += v;
        row.min = std::min(row.min, v);
        row.max = std::max(row.max, v);
      }
      row.mean = sum / static_cast<double>(row.n);
      double ss = 0.0;
      for (double v : g.values) ss += (v - row.mean) * (v - row.mean);
      row.sd = row.n > 1 ? std::sqrt(ss / static_cast<double>(row.n - 1)) : 0.0;
    }
    row.rejection_rate = g.decided ? static_cast<double>(g.rejected) / g.decided : 0.0;
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json summary_json(const std::vector<SummaryRow>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"size", r.size},
                   {"series", r.series},
                   {"n", r.n},
                   {"n_failed", r.n_failed},
                   {"mean", r.mean},
                   {"sd", r.sd},
                   {"min", r.min},
                   {"max", r.max},
                   {"rejection_rate", r.rejection_rate}});
  }
  return out;
}

nlohmann::json ExperimentReport::to_json() const {
  return {{"kind", kind},
          {"seed", seed},
          {"config", config},
          {"n_records", records.size()},
          {"summary", summary_json(summarize(records))},
          {"extra", extra}};
}

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial,size,series,status,value,p_value,decision\n";
  for (const auto& r : records) {
    if (r.series.find(',') != std::string::npos || r.status.find(',') != std::string::npos) {
      throw ArgumentError("series and status labels must not contain commas");
    }
    out << r.trial << ',' << r.size << ',' << r.series << ',' << r.status << ','
        << format_double(r.value) << ',' << format_double(r.p_value) << ',' << r.decision << '\n';
  }
}

std::vector<TrialRecord> read_records_csv(std::istream& in) {
  std::vector<TrialRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto s = trim(line);
    if (s.empty()) continue;
    const auto cells = split_csv(s);
    if (!header) {
      if (s != "trial,size,series,status,value,p_value,decision") {
        throw ParseError("unexpected records header", line_no);
      }
      header = true;
      continue;
    }
    if (cells.size() != 7) throw ParseError("expected 7 columns", line_no);
    TrialRecord r;
    r.trial = parse_number<std::size_t>(cells[0], line_no, "trial");
    r.size = parse_number<std::size_t>(cells[1], line_no, "size");
    r.series = std::string(cells[2]);
    r.status = std::string(cells[3]);
    r.value = parse_number<double>(cells[4], line_no, "value");
    r.p_value = parse_number<double>(cells[5], line_no, "p_value");
    r.decision = parse_number<int>(cells[6], line_no, "decision");
    out.push_back(std::move(r));
  }
  return out;
}

void save_report(const ExperimentReport& report, const std::string& out) {
  const auto doc = report.to_json();
  if (out.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  {
    auto f = open_out(out + ".json");
    f << doc.dump(2) << '\n';
  }
  auto f = open_out(out + ".csv");
  write_records_csv(f, report.records);
}

}  // namespace netmech
