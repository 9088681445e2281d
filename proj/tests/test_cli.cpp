#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "discordkit/cli.hpp"
#include "discordkit/state_file.hpp"

using namespace discordkit;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "discordkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

const char* kBell =
    R"({"matrix": [[[0.5,0],[0,0],[0,0],[0.5,0]],
                  [[0,0],[0,0],[0,0],[0,0]],
                  [[0,0],[0,0],[0,0],[0,0]],
                  [[0.5,0],[0,0],[0,0],[0.5,0]]]})";

}  // namespace

TEST_CASE("discord on a Bell state file") {
  write_file("bell.json", kBell);
  const Outcome o = run_cli({"discord", "--state", "bell.json"});
  CHECK(o.code == 0);
  CHECK(o.out.find("delta_ab=1.000000") != std::string::npos);
  CHECK(o.out.find("E=1.000000") != std::string::npos);
  CHECK(o.out.find("rank=1") != std::string::npos);

  const Outcome p = run_cli({"discord", "--state", "bell.json", "--measured", "A", "--povm", "4"});
  CHECK(p.code == 0);
  CHECK(p.out.find("discord_povm=1.000000") != std::string::npos);
}

TEST_CASE("invalid state files") {
  write_file("trace.json", R"({"matrix": [[[1.01,0],[0,0],[0,0],[0,0]],
                                         [[0,0],[0,0],[0,0],[0,0]],
                                         [[0,0],[0,0],[0,0],[0,0]],
                                         [[0,0],[0,0],[0,0],[0,0]]]})");
  Outcome o = run_cli({"discord", "--state", "trace.json"});
  CHECK(o.code == 1);
  CHECK(o.err.find("TraceNotOne") != std::string::npos);

  write_file("shape.json", R"({"matrix": [[[1,0],[0,0],[0,0],[0,0]],
                                         [[0,0],[0,0],[0,0],[0,0]],
                                         [[0,0],[0,0],[0,0],[0,0]]]})");
  o = run_cli({"discord", "--state", "shape.json"});
  CHECK(o.code == 1);
  CHECK(o.err.find("SchemaError") != std::string::npos);

  o = run_cli({"discord", "--state", "does-not-exist.json"});
  CHECK(o.code == 1);
  CHECK(o.err.find("FileNotFound") != std::string::npos);
}

TEST_CASE("state JSON round trip") {
  const TwoQubitState rho = parse_state_json(kBell);
  const Matrix4 back = parse_matrix_json(state_to_json(rho.matrix()));
  CHECK((back - rho.matrix()).norm() == 0.0);
  CHECK_THROWS_AS(parse_matrix_json("{\"rows\": []}"), Error);
  CHECK_THROWS_AS(parse_matrix_json("not json"), Error);
}

TEST_CASE("family subcommand") {
  Outcome o = run_cli({"family", "--cusp"});
  CHECK(o.code == 0);
  CHECK(o.out.find("delta_ab=0.333333") != std::string::npos);
  CHECK(o.out.find("delta_ba=0.333333") != std::string::npos);
  CHECK(o.out.find("E=0.000000") != std::string::npos);

  o = run_cli({"family", "--r2", "--epsilon", "0.6", "--p", "0.3", "--out", "r2.json"});
  CHECK(o.code == 0);
  const Outcome again = run_cli({"discord", "--state", "r2.json"});
  CHECK(again.code == 0);
  CHECK(o.out.find(again.out.substr(0, again.out.find("purity"))) != std::string::npos);

  CHECK(run_cli({"family"}).code == 2);
  CHECK(run_cli({"family", "--r2", "--r3"}).code == 2);
  CHECK(run_cli({"family", "--r3", "--epsilon", "1.5"}).code == 1);
}

TEST_CASE("survey and hist") {
  Outcome o = run_cli({"survey", "--rank", "3", "--samples", "200", "--seed", "11", "--out", "recs.csv"});
  CHECK(o.code == 0);
  CHECK(o.out.find("rank=3 n=200 seed=11") != std::string::npos);
  std::ifstream in("recs.csv");
  std::string first;
  std::getline(in, first);
  CHECK(first == "# rank=3 n=200 seed=11");

  o = run_cli({"hist", "--records", "recs.csv", "--quantity", "E", "--bins", "20", "--out", "h.csv",
               "--grid-out", "g.csv"});
  CHECK(o.code == 0);
  CHECK(o.out.find("records=200") != std::string::npos);
  std::ifstream h("h.csv");
  std::getline(h, first);
  CHECK(first == "# rank=3 n=200 seed=11 quantity=E");
  std::getline(h, first);
  CHECK(first == "bin_lo,bin_hi,density");

  CHECK(run_cli({"survey", "--rank", "5"}).code == 2);
  CHECK(run_cli({"hist", "--records", "missing.csv"}).code == 1);
  CHECK(run_cli({"hist", "--records", "recs.csv", "--quantity", "bogus"}).code == 2);
}

TEST_CASE("usage errors and help") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({"discord"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("installed binary exit codes") {
  write_file("bell.json", kBell);
  const std::string exe = DISCORDKIT_CLI_PATH;
  CHECK(std::system((exe + " discord --state bell.json > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((exe + " discord --state trace.json 2> /dev/null").c_str())) == 1);
  CHECK(WEXITSTATUS(std::system((exe + " nonsense 2> /dev/null > /dev/null").c_str())) == 2);
}
