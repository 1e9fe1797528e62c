#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = NONVANISH_CLI;
const std::string kData = NONVANISH_DATA;

struct CliRun {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nonvanish_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) {
    auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    std::string cmd = kCli + " " + args + " >" + out.string() + " 2>" + err.string();
    int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  std::string data(const std::string& name) const { return kData + "/" + name; }
  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ApproxExpOnDisc) {
  auto r = run("approx --region " + data("unit_disc.json") + " --function " + data("fn_exp.json") +
               " --epsilon 1e-4 --out " + tmp("rep.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(slurp(tmp("rep.json")));
  EXPECT_EQ(j["status"], "ok");
  EXPECT_LT(j["sup_error"].get<double>(), 1e-4);
  EXPECT_GT(j["min_modulus"].get<double>(), 0.0);
  EXPECT_EQ(j["function"], "exp");
}

TEST_F(CliTest, ApproxInteriorZeroIsPipelineError) {
  auto r = run("approx --region " + data("unit_disc.json") + " --function " + data("fn_z.json") +
               " --epsilon 1e-2 --out " + tmp("rep.json"));
  EXPECT_EQ(r.code, 2);
  auto j = json::parse(slurp(tmp("rep.json")));
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["error"], "InteriorZero");
}

TEST_F(CliTest, MalformedJsonIsUsageError) {
  auto r = run("approx --region " + data("malformed.json") + " --function " + data("fn_exp.json") +
               " --epsilon 1e-2 --out " + tmp("rep.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("malformed"), std::string::npos) << r.err;
}

TEST_F(CliTest, BadArgumentsAreUsageErrors) {
  EXPECT_EQ(run("approx --region " + data("unit_disc.json") + " --function " + data("fn_exp.json") +
                " --epsilon 0")
                .code,
            1);
  EXPECT_EQ(run("scan --region " + data("strip_disc.json") + " --function " + data("fn_const2.json") +
                " --epsilon 0.1 --t-min 0 --t-max 10 --t-step 0 --out " + tmp("s.csv"))
                .code,
            1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST_F(CliTest, ApproxWritesPlotAndIsDeterministic) {
  std::string base = "approx --region " + data("tangent_discs.json") + " --function " + data("fn_z_plus_2.json") +
                     " --epsilon 1e-2 --seed 7";
  ASSERT_EQ(run(base + " --out " + tmp("a.json") + " --plot " + tmp("a.svg")).code, 0);
  ASSERT_EQ(run(base + " --out " + tmp("b.json")).code, 0);
  EXPECT_EQ(slurp(tmp("a.json")), slurp(tmp("b.json")));
  auto svg = slurp(tmp("a.svg"));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST_F(CliTest, VerifyAcceptsFreshReport) {
  std::string inputs = " --region " + data("disc_filament_point.json") + " --function " + data("fn_exp.json");
  ASSERT_EQ(run("approx" + inputs + " --epsilon 1e-3 --out " + tmp("rep.json")).code, 0);
  auto r = run("verify" + inputs + " --report " + tmp("rep.json"));
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(json::parse(r.out)["status"], "ok");
}

TEST_F(CliTest, VerifyRejectsTamperedReport) {
  std::string inputs = " --region " + data("unit_disc.json") + " --function " + data("fn_exp.json");
  ASSERT_EQ(run("approx" + inputs + " --epsilon 1e-3 --out " + tmp("rep.json")).code, 0);
  auto j = json::parse(slurp(tmp("rep.json")));
  j["sup_error"] = j["sup_error"].get<double>() * 1e-3;
  std::ofstream(tmp("bad.json")) << j.dump();
  EXPECT_EQ(run("verify" + inputs + " --report " + tmp("bad.json")).code, 3);

  ASSERT_EQ(run("approx --region " + data("unit_disc.json") + " --function " + data("fn_z.json") +
                " --epsilon 1e-2 --out " + tmp("err.json"))
                .code,
            2);
  EXPECT_EQ(run("verify" + inputs + " --report " + tmp("err.json")).code, 3);
}

TEST_F(CliTest, ScanSelfMatchRow) {
  auto r = run("scan --region " + data("strip_disc.json") + " --function " + data("fn_zeta_shift.json") +
               " --epsilon 1e-3 --t-min 25 --t-max 35 --t-step 1 --out " + tmp("s.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto summary = json::parse(r.out);
  EXPECT_EQ(summary["points"], 11);
  EXPECT_TRUE(summary["complete"].get<bool>());
  EXPECT_GT(summary["density"].get<double>(), 0.0);
  std::istringstream csv(slurp(tmp("s.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,d_t,zero_free,min_modulus");
  bool found = false;
  while (std::getline(csv, line)) {
    if (line.rfind("30,", 0) != 0) continue;
    found = true;
    double d = std::stod(line.substr(3, line.find(',', 3) - 3));
    EXPECT_LE(d, 1e-8);
  }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, ScanResumeIsByteIdentical) {
  std::string base = "scan --region " + data("strip_disc.json") + " --function " + data("fn_const2.json") +
                     " --epsilon 0.5 --t-min 0 --t-max 20 --t-step 1 --checkpoint-every 3";
  ASSERT_EQ(run(base + " --out " + tmp("full.csv")).code, 0);
  auto partial = run(base + " --stop-after 8 --out " + tmp("part.csv"));
  ASSERT_EQ(partial.code, 0);
  EXPECT_FALSE(json::parse(partial.out)["complete"].get<bool>());
  ASSERT_EQ(run(base + " --resume --out " + tmp("part.csv")).code, 0);
  EXPECT_EQ(slurp(tmp("part.csv")), slurp(tmp("full.csv")));
}

TEST_F(CliTest, ZerosRectangle) {
  auto r = run("zeros --rect 2 3 0 10 --out " + tmp("z.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(slurp(tmp("z.json")))["count"], 0);
  auto one = run("zeros --rect 0.3 0.9 10 20");
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(json::parse(one.out)["count"], 1);
}

TEST_F(CliTest, ExtractRequiresHeight) {
  auto r = run("extract --region " + data("k_disc.json") + " --t 1 --epsilon 0.1 --out " + tmp("e.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(slurp(tmp("e.json")))["error"], "OutOfValidity");
  auto ok = run("extract --region " + data("k_disc.json") + " --t 50 --epsilon 0.1 --out " + tmp("ok.json"));
  ASSERT_EQ(ok.code, 0) << ok.err;
  auto j = json::parse(slurp(tmp("ok.json")));
  EXPECT_LE(j["taylor_gap"].get<double>(), j["budget"].get<double>());
}
