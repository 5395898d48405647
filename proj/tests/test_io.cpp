#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "netmech/dgp.hpp"
#include "netmech/io.hpp"

using namespace netmech;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "netmech_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t parse_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_edge_list(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("edge lists") {
  std::istringstream in("# friends\n10 20\n20,30\n\n10 20\n30 30\n40\t10\n");
  const auto el = read_edge_list(in);
  CHECK(el.network.n_units() == 4);
  CHECK(el.network.n_edges() == 3);
  CHECK(el.original_ids == std::vector<std::int64_t>{10, 20, 30, 40});
  CHECK(el.network.adjacent(0, 1));
  CHECK(el.network.adjacent(1, 2));
  CHECK(el.network.adjacent(3, 0));

  std::istringstream csv("node_1,node_2\n0,1\n1,2\n");
  CHECK(read_edge_list(csv).network.n_edges() == 2);

  std::istringstream loop("5 5\n");
  const auto only = read_edge_list(loop);
  CHECK(only.network.n_units() == 1);
  CHECK(only.network.n_edges() == 0);
}

TEST_CASE("malformed edge lists report the line") {
  CHECK(parse_line("1 2\n3\n") == 2);
  CHECK(parse_line("1 2\n2 3\n3 4 5\n") == 3);
  CHECK(parse_line("# c\n1 x\n") == 2);
  CHECK(parse_line("1 2\n") == 0);
  CHECK(parse_line("1 2\nnode_1,node_2\n") == 2);  // only a first line can be a header
  CHECK_THROWS_AS(load_edge_list(scratch("does-not-exist.edges")), IoError);
}

TEST_CASE("saved edge lists reload with the same ids") {
  const auto path = scratch("fig.edges");
  const auto net = fixtures::figure1a();
  save_edge_list(path, net);
  const auto back = load_edge_list(path);
  CHECK(back.n_units() == net.n_units());
  CHECK(back.edges() == net.edges());

  const auto big = generate_network(3000, DegreeRule::mean_max(2, 6), 5);
  save_edge_list(path, big);
  CHECK(load_edge_list(path).edges() == big.edges());
}

TEST_CASE("data files") {
  const auto net = generate_network(200, DegreeRule::range(1, 4), 1);
  for (const char* preset : {"h1-UUU", "h3-BBB"}) {
    const auto data = generate_data(net, dgp_preset(preset), 2);
    std::stringstream buf;
    write_data_csv(buf, data);
    const auto back = read_data_csv(buf);
    CHECK(back.L == data.L);
    CHECK(back.A == data.A);
    CHECK(back.Y == data.Y);
    CHECK(back.continuous_L == data.continuous_L);
  }
  auto bad = [](const std::string& text) {
    std::istringstream in(text);
    return read_data_csv(in);
  };
  CHECK_THROWS_AS(bad("u,L,A,Y\n0,1,0,1\n"), ParseError);
  CHECK_THROWS_AS(bad("unit,L,A,Y\n1,1,0,1\n"), ParseError);
  CHECK_THROWS_AS(bad("unit,L,A,Y\n0,1,0\n"), ParseError);
  CHECK_THROWS_AS(bad("unit,L,A,Y\n0,1,2,1\n"), ParseError);
  CHECK(bad("unit,L,A,Y\n0,0.5,0,1\n1,1,1,0\n").continuous_L);
  CHECK_FALSE(bad("unit,L,A,Y\n0,0,0,1\n1,1,1,0\n").continuous_L);
}

TEST_CASE("treatment files") {
  const auto path = scratch("a.txt");
  std::ofstream(path) << "1\n0\n1\n";
  CHECK(load_treatment(path, 3) == std::vector<int>{1, 0, 1});
  CHECK_THROWS(load_treatment(path, 4));
  std::ofstream(path) << "unit,a\n0,1\n1,1\n";
  CHECK(load_treatment(path, 2) == std::vector<int>{1, 1});
  std::ofstream(path) << "1\n3\n";
  CHECK_THROWS(load_treatment(path, 2));
}

TEST_CASE("trial records round-trip and summarise") {
  std::vector<TrialRecord> records{
      {0, 200, "Y", "ok", 3.5, 0.06, 0},
      {1, 200, "Y", "ok", 5.5, 0.01, 1},
      {2, 200, "Y", "fit-failed", 0.0, std::nan(""), -1},
      {0, 500, "ours", "ok", 0.12, std::nan(""), -1},
  };
  std::stringstream buf;
  write_records_csv(buf, records);
  CHECK(read_records_csv(buf) == records);

  const auto rows = summarize(records);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].size == 200);
  CHECK(rows[0].series == "Y");
  CHECK(rows[0].n == 2);
  CHECK(rows[0].n_failed == 1);
  CHECK(rows[0].mean == doctest::Approx(4.5));
  CHECK(rows[0].sd == doctest::Approx(std::sqrt(2.0)));
  CHECK(rows[0].min == 3.5);
  CHECK(rows[0].max == 5.5);
  CHECK(rows[0].rejection_rate == doctest::Approx(0.5));

  ExperimentReport report;
  report.kind = "test-calibration";
  report.seed = 3;
  report.records = records;
  const auto j = report.to_json();
  CHECK(j["kind"] == "test-calibration");
  CHECK(j["summary"].size() == 2);

  const auto prefix = scratch("report").string();
  save_report(report, prefix);
  CHECK(fs::exists(prefix + ".json"));
  std::ifstream csv(prefix + ".csv");
  CHECK(read_records_csv(csv) == records);
}
