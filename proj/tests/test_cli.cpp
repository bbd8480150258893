#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "heisenclone/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "heisenclone");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = heisenclone::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& body) {
  auto path = fs::temp_directory_path() / ("heisenclone_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("replicate 100 -> 1000") {
  auto r = run({"replicate", "--n", "100", "--m", "1000", "--filter", "super"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(std::abs(j["fidelity"].get<double>() - 0.9986) <= 5e-4);
  CHECK(j["delta_e0"] == 450);
  CHECK(r.err.empty());
}

TEST_CASE("replicate N = M and explicit spectrum") {
  auto path = write_temp("qubit.json", R"({"levels":[{"energy":"-1/2","prob":0.5},{"energy":"1/2","prob":0.5}]})");
  auto r = run({"replicate", "--spectrum", path, "--n", "10", "--m", "10", "--filter", "super"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["fidelity"] == 1.0);
  CHECK(j["p_yes"] == 1.0);
  auto csv = run({"replicate", "--n", "10", "--m", "10", "--format", "csv", "--spectrum", path});
  CHECK(csv.out == "n,m,fidelity,p_yes,filter_kind,delta_e0\n10,10,1,1,super,0\n");
}

TEST_CASE("error paths exit with the mapped code and one JSON object") {
  auto bad = write_temp("bad.json", R"({"levels":[{"energy":"1/0","prob":1.0}]})");
  auto r = run({"replicate", "--spectrum", bad, "--n", "1", "--m", "2"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  auto e = json::parse(r.err);
  CHECK(e["error"].contains("kind"));

  auto garbage = write_temp("garbage.json", "{not json");
  CHECK(run({"validate", "--spectrum", garbage}).code == 2);
  CHECK(run({"replicate", "--n", "10"}).code == 2);
  CHECK(json::parse(run({"replicate", "--n", "10"}).err).contains("error"));
  CHECK(run({"replicate", "--n", "10", "--m", "5"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);

  auto cap = run({"replicate", "--n", "100", "--m", "1000", "--support-cap", "50"});
  CHECK(cap.code == 3);
  CHECK(json::parse(cap.err)["error"]["kind"] == "resource");
}

TEST_CASE("HEISENCLONE_CAP overrides the default cap") {
  setenv("HEISENCLONE_CAP", "50", 1);
  CHECK(run({"replicate", "--n", "100", "--m", "1000"}).code == 3);
  CHECK(run({"replicate", "--n", "100", "--m", "1000", "--support-cap", "5000"}).code == 0);
  setenv("HEISENCLONE_CAP", "abc", 1);
  CHECK(run({"replicate", "--n", "10", "--m", "20"}).code == 2);
  unsetenv("HEISENCLONE_CAP");
}

TEST_CASE("sweep --fig2") {
  auto r = run({"sweep", "--fig2"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "N,M,F_super,F_det,F_lower,F_upper,p_yes");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 20);
  CHECK(run({"sweep", "--fig2"}).out == r.out);
}

TEST_CASE("sweep --alpha 1.5 --fit pyes") {
  auto r = run({"sweep", "--alpha", "1.5", "--fit", "pyes", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["rows"].size() == 11);
  CHECK(std::abs(j["fit"]["slope"].get<double>() + std::log(2.0)) <= 0.1 * std::log(2.0));
  CHECK(j["spec"]["alpha"] == 1.5);
  auto csv = run({"sweep", "--alpha", "1.5", "--fit", "pyes"});
  CHECK(csv.out.find("# fit column=neg_log_pyes transform=vs_n slope=") != std::string::npos);
}

TEST_CASE("sweep --alpha 2.5 --bound lemma1 gives a decreasing upper column") {
  auto r = run({"sweep", "--alpha", "2.5", "--bound", "lemma1", "--n-values", "20,30,40", "--format", "json"});
  REQUIRE(r.code == 0);
  auto rows = json::parse(r.out)["rows"];
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i]["F_upper"] < rows[i - 1]["F_upper"]);
  CHECK(run({"sweep", "--bound", "hoeffding"}).code == 2);
}

TEST_CASE("bounds") {
  auto r = run({"bounds", "--n", "100", "--m", "1000"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["lower"] <= j["exact"]);
  CHECK(j["exact"] <= j["upper"]);
  CHECK(run({"bounds", "--n", "10", "--m", "20", "--p-yes", "0"}).code == 2);
}

TEST_CASE("metrology subcommands") {
  auto hl = run({"metrology", "hl", "--n", "10"});
  REQUIRE(hl.code == 0);
  CHECK(json::parse(hl.out)["bound"] == 0.01);

  auto pq = run({"metrology", "prob-qfi", "--epsilon", "0.01"});
  REQUIRE(pq.code == 0);
  auto pj = json::parse(pq.out);
  CHECK(pj["relative_error"].get<double>() < 1e-9);
  CHECK(std::abs(pj["prob_qfi"].get<double>() - 1e4) < 1e-4);

  auto avg = run({"metrology", "avg-bound", "--samples", "1000", "--seed", "7"});
  REQUIRE(avg.code == 0);
  auto aj = json::parse(avg.out);
  CHECK(aj["holds"] == true);
  CHECK(aj["max_observed"].get<double>() <= 1.0 + 1e-9);
  CHECK(std::abs(aj["noon"].get<double>() - 1.0) < 1e-9);
  CHECK(run({"metrology", "avg-bound", "--samples", "50", "--seed", "7"}).out ==
        run({"metrology", "avg-bound", "--samples", "50", "--seed", "7"}).out);

  auto q = run({"metrology", "qfi"});
  CHECK(json::parse(q.out)["qfi"] == 1.0);

  auto tw = run({"metrology", "twirl", "--sigma", "1000"});
  REQUIRE(tw.code == 0);
  CHECK(json::parse(tw.out)["distance_to_diag"].get<double>() <= 1e-10);

  auto dec = run({"metrology", "decompose", "--samples", "20", "--dim", "3", "--seed", "1"});
  REQUIRE(dec.code == 0);
  CHECK(json::parse(dec.out)["max_choi_error"].get<double>() < 1e-10);
  CHECK(run({"metrology"}).code == 2);
}

TEST_CASE("validate") {
  auto spec = write_temp("three.json",
                         R"({"levels":[{"energy":"0","prob":0.2},{"energy":"1/3","prob":0.3},{"energy":"1","prob":0.5}]})");
  auto r = run({"validate", "--spectrum", spec});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["spectrum"]["grid_unit"] == "1/3");
  auto sys = write_temp("sys.json", R"({"dim":2,"hamiltonian":[[[0,0],[0,0]],[[0,0],[1,0]]],"psi":[[1,0],[0,0]]})");
  CHECK(run({"validate", "--system", sys}).code == 0);
  auto badsys = write_temp("badsys.json", R"({"dim":2,"hamiltonian":[[[0,0],[1,0]],[[0,0],[1,0]]],"psi":[[1,0],[0,0]]})");
  CHECK(run({"validate", "--system", badsys}).code == 2);
  CHECK(run({"validate"}).code == 2);
}
