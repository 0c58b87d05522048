#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string kCli = BELLMAN_CLI_PATH;
const std::string kData = BELLMAN_DATA_DIR;

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "bellman_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = "\"" + kCli + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, VerifyExitCodesFollowTheFixtures) {
    EXPECT_EQ(run("verify " + kData + "/box_picking.sys"), 0);
    EXPECT_EQ(run("verify " + kData + "/box_picking_classical.sys"), 2);
    EXPECT_EQ(run("verify " + kData + "/empty_controls.sys"), 0);
    EXPECT_EQ(run("verify " + kData + "/peek_or_bet.sys"), 0);
}

TEST(Cli, VerifyWritesTheSameReportTwice) {
    const auto a = scratch() / "a.json";
    const auto b = scratch() / "b.json";
    ASSERT_EQ(run("verify " + kData + "/box_picking.sys --out " + a.string()), 0);
    ASSERT_EQ(run("verify " + kData + "/box_picking.sys --out " + b.string()), 0);
    const auto text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    EXPECT_NE(text.find("\"7/6\""), std::string::npos);
}

TEST(Cli, BadInputsAreUsageErrors) {
    EXPECT_EQ(run("verify /nonexistent/file.sys"), 1);
    const auto bad = scratch() / "float.sys";
    {
        std::ofstream out(bad);
        out << R"({"outcomes": ["a"], "horizon": 0, "controls": [{"id": "c", "measure": ["1"], "payoff": [0.5],)"
            << R"( "filtration": [[[0]]]}], "times": [{"id": "0", "value": 0}], "classes": {"0": [["c"]]}})";
    }
    EXPECT_EQ(run("verify " + bad.string()), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("mc switching --dt 0.1 --eps 0.2 --paths 10"), 1);
    EXPECT_EQ(run("mc verify-lemma --order 7"), 1);
}

TEST(Cli, GalmarinoCampaign) {
    EXPECT_EQ(run("galmarino --campaign 0"), 0);
    EXPECT_EQ(run("galmarino --campaign 50 --seed 3"), 0);
    EXPECT_EQ(run("galmarino --campaign 200 --allow-nonstopping"), 2);
}

TEST(Cli, VerificationLemma) {
    EXPECT_EQ(run("mc verify-lemma --case a"), 0);
    EXPECT_EQ(run("mc verify-lemma --case b --alpha 0.5"), 0);
    EXPECT_EQ(run("mc verify-lemma --case b --perturb 0.01"), 2);
}

TEST(Cli, SmallSwitchingAndPoissonRuns) {
    const auto json = scratch() / "sw.json";
    EXPECT_EQ(run("mc switching --case a --x 1 --paths 4000 --tolerance 0.1 --json " + json.string()), 0);
    EXPECT_NE(slurp(json).find("\"estimate\""), std::string::npos);
    EXPECT_EQ(run("mc poisson --paths 20000 --tolerance 0.02"), 0);
}

TEST(Cli, Examples) {
    EXPECT_EQ(run("example box-picking"), 0);
    EXPECT_EQ(run("example snell --instances 5"), 0);
    EXPECT_EQ(run("example nothing"), 1);
}
