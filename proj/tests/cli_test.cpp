#include <qknow/cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace qknow {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string model(const std::string& name) { return std::string(QKNOW_MODELS_DIR) + "/" + name; }

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempModel {
 public:
  TempModel(const std::string& name, const std::string& text)
      : path_(std::filesystem::temp_directory_path() / ("qknow_cli_" + name)) {
    std::ofstream(path_) << text;
  }
  ~TempModel() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

TEST(Cli, KnowsMh17) {
  const Result r = run({"knows", model("mh17.json"), "--agent", "1", "--state", "psi", "--event", "E_K"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "false\n");
  EXPECT_EQ(run({"knows", model("mh17.json"), "--agent", "1", "--state", "psi", "--event", "E_D"}).out, "false\n");
  EXPECT_EQ(run({"knows", model("mh17.json"), "--agent", "1", "--state", "psi_K", "--event", "E_K"}).out, "true\n");
}

TEST(Cli, EvalTopKnowledgeIsFullSpace) {
  const Result r = run({"eval", model("mh17.json"), "--formula", "K1 top"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "rank: 2\n[1, 0]\n[0, 1]\n");
}

TEST(Cli, EvalWithStateReportsMembershipAndProbability) {
  const Result r = run({"eval", model("mh17.json"), "--formula", "E_K", "--state", "psi"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "rank: 1\n[1, 0]\nmember: false\nprobability: 1/2\n");
  EXPECT_EQ(run({"eval", model("example3.json"), "--formula", "E2", "--state", "psi"}).out,
            "rank: 1\n[1, i]\nmember: false\nprobability: 1/2\n");
}

TEST(Cli, Example2Schemes) {
  const std::vector<std::string> base{"knows", model("example2.json"), "--agent", "1", "--state", "psi", "--event", "E"};
  auto with = [&](const std::string& scheme) {
    auto args = base;
    args.insert(args.end(), {"--scheme", scheme});
    return run(args);
  };
  const Result vn = with("von-neumann");
  EXPECT_EQ(vn.code, 0);
  EXPECT_EQ(vn.out, "true\n");
  const Result eo = with("either-or");
  EXPECT_EQ(eo.code, 0);
  EXPECT_EQ(eo.out, "false\n");
  const Result single = run(base);
  EXPECT_EQ(single.code, 2);
  EXPECT_NE(single.err.find("question families"), std::string::npos);
}

TEST(Cli, Example3Schemes) {
  const std::vector<std::string> base{"knows", model("example3.json"), "--agent", "1", "--state", "psi", "--event", "E1"};
  auto with = [&](const std::string& scheme) {
    auto args = base;
    args.insert(args.end(), {"--scheme", scheme});
    return run(args);
  };
  EXPECT_EQ(with("either-or").out, "true\n");
  const Result vn = with("von-neumann");
  EXPECT_EQ(vn.code, 2);
  EXPECT_NE(vn.err.find("do not commute"), std::string::npos);
}

TEST(Cli, CommonWithTrace) {
  const Result r = run({"common", model("mh17.json"), "--formula", "E_K", "--trace"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "M0\n  rank: 1\n  [1, 0]\n"
            "M1\n  rank: 1\n  [1, 0]\n"
            "stabilized at n = 0\n"
            "rank: 1\n[1, 0]\n");
  EXPECT_EQ(run({"common", model("mh17.json"), "--formula", "E_K"}).out, "rank: 1\n[1, 0]\n");
  EXPECT_EQ(run({"common", model("classical_demo.json"), "--formula", "E"}).out, "rank: 0\n");
}

TEST(Cli, CommonRefusesMultiQuestionModels) {
  const Result r = run({"common", model("example2.json"), "--formula", "E"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("multi-question"), std::string::npos);
}

TEST(Cli, CompareClassical) {
  const Result r = run({"compare-classical", model("classical_demo.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("check", 0), 0u);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find(" 0 failed\n"), std::string::npos);
  EXPECT_NE(r.out.find("{1,2}"), std::string::npos) << "block events are generated for small spaces";
  EXPECT_EQ(run({"compare-classical", model("mh17.json")}).code, 2);
}

TEST(Cli, Validate) {
  const Result ok = run({"validate", model("mh17.json")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "valid\n");

  const TempModel bad("bad.json", R"({"dimension": 2, "agents": [{"id": "1", "questions": [{"blocks": [
      {"label": "a", "vectors": [[["1","0"],["0","0"]]]}]}]}], "states": {"z": [["0","0"],["0","0"]]}})");
  const Result r = run({"validate", bad.path()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out,
            "error /agents/0/questions/0: family is incomplete: block ranks sum to 1, dimension is 2\n"
            "error /states/z: state must be nonzero\n");

  const TempModel malformed("malformed.json", "{\"dimension\": [");
  const Result m = run({"validate", malformed.path()});
  EXPECT_EQ(m.code, 1);
  EXPECT_EQ(m.out.rfind("error /: malformed JSON", 0), 0u);
}

TEST(Cli, ErrorsNameTheOffendingInput) {
  const std::string mh17 = model("mh17.json");
  auto expect = [](const Result& r, int code, const std::string& needle) {
    EXPECT_EQ(r.code, code) << r.err;
    EXPECT_NE(r.err.find(needle), std::string::npos) << r.err;
  };
  expect(run({"knows", mh17, "--agent", "1", "--state", "psi", "--event", "Nope"}), 2, "Nope");
  expect(run({"knows", mh17, "--agent", "1", "--state", "chi", "--event", "E_K"}), 2, "chi");
  expect(run({"knows", mh17, "--agent", "3", "--state", "psi", "--event", "E_K"}), 2, "3");
  expect(run({"eval", mh17, "--formula", "Missing & E_K"}), 2, "Missing");
  expect(run({"eval", mh17, "--formula", "E_K &"}), 2, "syntax error");
  expect(run({"eval", mh17, "--formula", "K7 E_K"}), 2, "7");
  expect(run({"eval", mh17, "--formula", "E_K", "--state", "chi"}), 2, "chi");
  expect(run({"knows", mh17, "--agent", "1", "--state", "psi", "--event", "E_K", "--scheme", "either-or"}), 2,
         "question families");
  expect(run({"validate", "/nonexistent/model.json"}), 2, "/nonexistent/model.json");
}

TEST(Cli, ExitCodeMatrix) {
  const TempModel invalid("invalid.json", R"({"dimension": 0})");
  const std::string mh17 = model("mh17.json");
  const std::vector<std::pair<std::vector<std::string>, int>> matrix{
      {{"validate", mh17}, 0},
      {{"validate", invalid.path()}, 1},
      {{"eval", mh17, "--formula", "C ~E_D"}, 0},
      {{"eval", invalid.path(), "--formula", "top"}, 1},
      {{"knows", invalid.path(), "--agent", "1", "--state", "psi", "--event", "E"}, 1},
      {{"common", invalid.path(), "--formula", "top"}, 1},
      {{"compare-classical", invalid.path()}, 1},
      {{"compare-classical", model("classical_demo.json")}, 0},
      {{"knows", model("classical_demo.json"), "--agent", "2", "--state", "w1", "--event", "F"}, 0},
      {{"knows", mh17, "--agent", "1", "--state", "psi", "--event", "E_K", "--scheme", "quantum"}, 2},
      {{"knows", mh17, "--agent", "x", "--state", "psi", "--event", "E_K"}, 2},
      {{"knows", mh17, "--state", "psi", "--event", "E_K"}, 2},
      {{"eval", mh17}, 2},
      {{"frobnicate", mh17}, 2},
      {{}, 2},
      {{"--help"}, 0},
      {{"eval", "--help"}, 0},
  };
  for (const auto& [args, code] : matrix) {
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    EXPECT_EQ(run(args).code, code) << joined;
  }
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::vector<std::string>> invocations{
      {"eval", model("example3.json"), "--formula", "~E2 | K1 E1", "--state", "phi"},
      {"common", model("classical_demo.json"), "--formula", "E | F", "--trace"},
      {"compare-classical", model("classical_demo.json")},
      {"validate", model("example2.json")},
  };
  for (const auto& args : invocations) {
    const Result a = run(args), b = run(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.err, b.err);
  }
}

}  // namespace
}  // namespace qknow
