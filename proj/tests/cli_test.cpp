#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "atcg/cli.hpp"
#include "support.hpp"

using namespace atcg;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  const int code = cli::run(args, out, err, in);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("atcg_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const std::string kLoginTests =
    "Model-Level Tests\n1. enterName(UID), enterPassword(PSWD), login(UID, PSWD)\n";

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"tests"}).code, cli::kUsage);
  EXPECT_EQ(run({"reach", test::fixture("login-net.xml"), "--max-depth", "0"}).code, cli::kUsage);
}

TEST(Cli, ParseAndIoErrors) {
  EXPECT_EQ(run({"tests", "/nonexistent/net.xml"}).code, cli::kParseError);
  const auto dir = scratch("parse");
  const auto bad = (dir / "bad.xml").string();
  {
    std::ofstream(bad) << "<pnml><net";
  }
  Result r = run({"compile", bad});
  EXPECT_EQ(r.code, cli::kParseError);
  EXPECT_NE(r.err.find("xml-syntax"), std::string::npos) << r.err;
}

TEST(Cli, CompileBrokenNet) {
  Result r = run({"compile", test::fixture("broken-net.xml")});
  EXPECT_EQ(r.code, cli::kInvalid);
  EXPECT_NE(r.err.find("P9"), std::string::npos) << r.err;
  EXPECT_EQ(run({"compile", test::fixture("login-net.xml")}).code, cli::kOk);
}

TEST(Cli, BoundsExceeded) {
  Result r = run({"tree", test::fixture("coffee-net.xml"), "--max-depth", "2"});
  EXPECT_EQ(r.code, cli::kBoundsExceeded);
  EXPECT_NE(r.out.find("[depth-bound]"), std::string::npos);
  EXPECT_EQ(run({"reach", test::fixture("coffee-net.xml"), "--max-states", "3"}).code,
            cli::kBoundsExceeded);
}

TEST(Cli, TestsFromNetAndFromModel) {
  Result from_net = run({"tests", test::fixture("login-net.xml")});
  EXPECT_EQ(from_net.code, 0) << from_net.err;
  EXPECT_EQ(from_net.out, kLoginTests);
  EXPECT_EQ(run({"tests", test::fixture("login.xml")}).out, kLoginTests);
}

TEST(Cli, BuildThenTestsEqualsOneShot) {
  const auto dir = scratch("build");
  const auto net = (dir / "login-net.xml").string();
  ASSERT_EQ(run({"build", test::fixture("login.xml"), "-o", net}).code, 0);
  EXPECT_EQ(test::read_file(net), test::read_file(test::fixture("login-net.xml")));
  EXPECT_EQ(run({"tests", net}).out, run({"tests", test::fixture("login.xml")}).out);
}

TEST(Cli, ValidateReportsProblems) {
  EXPECT_EQ(run({"validate", test::fixture("login.xml")}).code, 0);
  const auto dir = scratch("validate");
  std::string doc = test::read_file(test::fixture("login.xml"));
  const std::string from = "enterPassword";
  doc.replace(doc.rfind(from), from.size(), "enterPasswrd");
  const auto path = (dir / "m.xml").string();
  {
    std::ofstream(path) << doc;
  }
  Result r = run({"validate", path});
  EXPECT_EQ(r.code, cli::kInvalid);
}

TEST(Cli, SimulateTranscriptIsDeterministic) {
  const std::string script = "0\n0\nundo\n0\n0\nhistory\nquit\n";
  Result a = run({"simulate", test::fixture("login.xml")}, script);
  Result b = run({"simulate", test::fixture("login-net.xml")}, script);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("fired login(UID, PSWD)"), std::string::npos) << a.out;
  EXPECT_NE(a.out.find("enabled: none"), std::string::npos) << a.out;
  Result bad = run({"simulate", test::fixture("login.xml")}, "5\nquit\n");
  EXPECT_NE(bad.err.find("bad-choice"), std::string::npos) << bad.err;
}

TEST(Cli, CodeWritesIntoDirectory) {
  const auto dir = scratch("code");
  ASSERT_EQ(run({"code", test::fixture("login.xml"), "-o", dir.string()}).code, 0);
  EXPECT_EQ(test::read_file((dir / "loginTester_RT.cs").string()),
            test::read_file(test::golden("loginTester_RT.cs")));
  EXPECT_EQ(run({"code", test::fixture("login.xml"), "--template", "nope"}).code, cli::kParseError);
}
