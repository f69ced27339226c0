#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dgsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  Result exec(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const std::string cmd = std::string(DGSIM_CLI) + " " + args + " > " + out.string() + " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
  }

  std::string circuit(const std::string& x) {
    return write("c" + x + ".json", R"({"schema": "dgsim.circuit/1", "n": 2, "input": {"lambdas": [1, 1]}, "gates": [],
      "measure": {"lines": [1, 2], "x": ")" + x + R"("}})");
  }

  fs::path dir_;
};

std::string fixture(const std::string& name) { return std::string(DGSIM_FIXTURES) + "/" + name; }

}  // namespace

TEST_F(Cli, Version) {
  const auto r = exec("version");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "dgsim 0.1.0\n");
}

TEST_F(Cli, RunBasisExpectations) {
  auto r = exec("run " + circuit("00"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["value"].get<double>(), 1.0);
  r = exec("run " + circuit("01"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["value"].get<double>(), 0.0);
}

TEST_F(Cli, RunMatchesCommittedFixture) {
  const auto r = exec("run " + fixture("random3.circuit.json"));
  ASSERT_EQ(r.code, 0);
  std::ifstream in(fixture("random3.verify.json"));
  const json verify = json::parse(in);
  double want = 0.0;
  for (const auto& c : verify["checkpoints"])
    if (c["name"] == "probability") want = c["dense"].get<double>();
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), want, 1e-8);
}

TEST_F(Cli, SamplingIsByteIdentical) {
  const std::string c = circuit("00");
  const auto a = exec("run " + c + " --shots 500 --seed 9");
  const auto b = exec("run " + c + " --shots 500 --seed 9");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["counts"]["00"].get<int>(), 500);
  EXPECT_EQ(exec("run " + c + " --seed 9").code, 2);
}

TEST_F(Cli, OutFileMatchesStdout) {
  const std::string c = fixture("random3.circuit.json");
  const auto a = exec("run " + c);
  const std::string path = (dir_ / "result.json").string();
  ASSERT_EQ(exec("run " + c + " --out " + path).code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), a.out);
}

TEST_F(Cli, CompileEmptyAndFixture) {
  const std::string zero = write("h.json", R"({"schema": "dgsim.hamiltonian/1", "n": 2, "h": [0,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,0], "d": [0,0,0,0]})");
  auto r = exec("compile " + zero);
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["gates"].empty());
  EXPECT_EQ(json::parse(r.out)["stats"]["count"].get<int>(), 0);

  const std::string block = write("b.json", R"({"schema": "dgsim.hamiltonian/1", "n": 2, "h": [0,0.3,0,0, -0.3,0,0,0, 0,0,0,0, 0,0,0,0], "d": [0,0,0,0]})");
  r = exec("compile " + block);
  ASSERT_EQ(r.code, 0);
  EXPECT_LE(json::parse(r.out)["gates"].size(), 2u);
  EXPECT_EQ(exec("test-unitary " + write("small.json", r.out)).code, 0);

  r = exec("compile " + fixture("random4.hamiltonian.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_LT(json::parse(r.out)["stats"]["residual"].get<double>(), 1e-7);

  // the displaced test on 4 lines needs a 10-qubit Choi state
  EXPECT_EQ(exec("test-unitary " + write("gates.json", r.out)).code, 4);
}

TEST_F(Cli, OracleVerify) {
  const std::string empty = write("e.json", R"({"schema": "dgsim.circuit/1", "n": 3, "input": {"lambdas": [1, 0.2, -1]}, "gates": [],
      "measure": {"lines": [2], "x": "1"}})");
  auto r = exec("oracle-verify " + empty);
  ASSERT_EQ(r.code, 0);
  EXPECT_LT(json::parse(r.out)["max_deviation"].get<double>(), 1e-15);

  r = exec("oracle-verify " + fixture("random3.circuit.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["pass"].get<bool>());

  r = exec("oracle-verify " + fixture("random3.circuit.json") + " --corrupt-gate 0");
  EXPECT_EQ(r.code, 1);
  EXPECT_GT(json::parse(r.out)["max_deviation"].get<double>(), 1e-3);

  EXPECT_EQ(exec("oracle-verify " + fixture("random3.circuit.json") + " --n-max 2").code, 4);
  EXPECT_EQ(exec("oracle-verify " + fixture("random3.circuit.json") + " --n-max 40").code, 4);
}

TEST_F(Cli, GaussianityVerdicts) {
  const std::string cat = write("cat.json", R"({"schema": "dgsim.dense/1", "n": 4, "kind": "vector",
      "re": [1,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,1]})");
  auto r = exec("test-state " + cat);
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(json::parse(r.out)["gaussian"].get<bool>());

  const std::string zero = write("z.json", R"({"schema": "dgsim.state/1", "n": 2, "lambdas": [1, -1]})");
  r = exec("test-state " + zero);
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["overlap"].get<double>(), 1.0, 1e-12);

  const std::string embedded = (dir_ / "embedded.json").string();
  EXPECT_EQ(exec("embed " + fixture("random3.circuit.json") + " --out " + embedded).code, 0);
  EXPECT_EQ(exec("embed " + zero + " --out " + embedded).code, 0);
  EXPECT_EQ(exec("test-state " + embedded).code, 0);
}

TEST_F(Cli, ErrorExitCodes) {
  EXPECT_EQ(exec("").code, 2);
  EXPECT_EQ(exec("frobnicate").code, 2);
  EXPECT_EQ(exec("run").code, 2);
  EXPECT_EQ(exec("run /nonexistent.json").code, 2);

  const std::string broken = write("broken.json", "{\"schema\": \"dgsim.circuit/1\",\n  \"n\": }");
  auto r = exec("run " + broken);
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());

  const std::string unknown = write("unknown.json", R"({"schema": "dgsim.circuit/1", "n": 1, "input": {"lambdas": [1]}, "gates": [],
      "measure": {"lines": [1], "x": "0"}, "colour": "blue"})");
  EXPECT_EQ(exec("run " + unknown).code, 2);

  const std::string bad_state = write("bad.json", R"({"schema": "dgsim.state/1", "n": 1, "M": [0, -1.5, 1.5, 0], "mu": [0, 0]})");
  EXPECT_EQ(exec("embed " + bad_state).code, 3);

  const std::string wide = write("wide.json", R"({"schema": "dgsim.dense/1", "n": 5, "kind": "vector",
      "re": [1,0,0,0,0,0,0,0, 0,0,0,0,0,0,0,0, 0,0,0,0,0,0,0,0, 0,0,0,0,0,0,0,0]})");
  EXPECT_EQ(exec("test-state " + wide).code, 4);
}
