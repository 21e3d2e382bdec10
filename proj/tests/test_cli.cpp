#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "maxent/io.hpp"

using namespace maxent;
namespace fs = std::filesystem;

namespace {

const fs::path kData = MAXENT_DATA_DIR;

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string("\"") + MAXENT_CLI + "\" " + args + " 2>/dev/null";
    Run r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
    int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const char* f) { return "\"" + (kData / f).string() + "\""; }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("maxent_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string out() const { return "\"" + dir_.string() + "\""; }
    fs::path dir_;
};

}  // namespace

TEST(Cli, HelpExitsZero) {
    auto r = run("--help");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("synthesize-ltl"), std::string::npos);
}

TEST(Cli, UsageErrorsExit64) {
    EXPECT_EQ(run("").code, 64);
    EXPECT_EQ(run("no-such-command").code, 64);
    EXPECT_EQ(run("synthesize").code, 64);
    EXPECT_EQ(run("synthesize " + data("fig1a.json") + " --gamma -3").code, 64);
    EXPECT_EQ(run("synthesize-ltl " + data("grid11.json") + " --dra " + data("reach_avoid.hoa") + " --beta 1.5").code, 64);
}

TEST(Cli, MissingFileExits1) {
    EXPECT_EQ(run("classify /nonexistent/model.json").code, 1);
}

TEST(Cli, Classify) {
    auto r = run("classify " + data("fig2a.json"));
    ASSERT_EQ(r.code, 0);
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["format"], kFormatTag);
    EXPECT_EQ(j["class"], "unbounded");
    EXPECT_EQ(Json::parse(run("classify " + data("fig2b.json")).out)["class"], "infinite");
    EXPECT_EQ(Json::parse(run("classify " + data("fig4a.json")).out)["class"], "finite");
}

TEST(Cli, AnalyzeListsMecs) {
    auto r = run("analyze " + data("fig2b.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("s1"), std::string::npos);
}

TEST_F(CliTest, SynthesizeWritesArtifacts) {
    auto r = run("synthesize " + data("fig1a.json") + " -o " + out());
    ASSERT_EQ(r.code, 0);
    auto pol = read_json_file((dir_ / "fig1a.policy.json").string());
    EXPECT_NEAR(pol["s0"]["a1"].get<double>(), 0.5, 1e-6);
    EXPECT_TRUE(fs::exists(dir_ / "fig1a.certificate.json"));
    auto csv = read_text_file((dir_ / "fig1a.residence.csv").string());
    EXPECT_EQ(csv.rfind("state,xi,local_entropy\n", 0), 0u);
}

TEST_F(CliTest, UnboundedWithoutCapExits1) {
    EXPECT_EQ(run("synthesize " + data("fig2a.json") + " -o " + out()).code, 1);
    EXPECT_EQ(run("synthesize " + data("fig2a.json") + " --gamma 10 -o " + out()).code, 0);
    EXPECT_EQ(run("synthesize " + data("fig2a.json") + " --ell 5 -o " + out()).code, 0);
}

TEST_F(CliTest, EntropyAndObserve) {
    ASSERT_EQ(run("synthesize " + data("fig4a.json") + " -o " + out()).code, 0);
    std::string pol = "\"" + (dir_ / "fig4a.policy.json").string() + "\"";
    auto e = run("entropy " + data("fig4a.json") + " " + pol);
    ASSERT_EQ(e.code, 0);
    EXPECT_NEAR(Json::parse(e.out)["entropy"].get<double>(), 1.584962500721, 1e-5);
    auto o = run("observe " + data("fig4a.json") + " " + pol);
    ASSERT_EQ(o.code, 0);
    EXPECT_NEAR(Json::parse(o.out)["o_avg"].get<double>(), 5.0 / 3, 1e-4);
    auto p = run("paths-entropy " + data("fig4a.json") + " " + pol);
    EXPECT_EQ(p.code, 0);
    auto s = run("simulate " + data("fig4a.json") + " " + pol + " --runs 100 --seed 5");
    ASSERT_EQ(s.code, 0);
    EXPECT_EQ(Json::parse(s.out)["seed"], 5);
}

TEST_F(CliTest, SynthesizeLtlOnGrid) {
    auto r = run("synthesize-ltl " + data("grid11.json") + " --dra " + data("reach_avoid.hoa") +
                 " --beta 1 --gamma 20 -o " + out());
    ASSERT_EQ(r.code, 0);
    auto j = read_json_file((dir_ / "grid11.ltl.json").string());
    EXPECT_TRUE(j.contains("controller"));
    EXPECT_EQ(run("synthesize-ltl " + data("grid11.json") + " --dra " + data("reach_avoid.hoa") + " -o " + out()).code,
              1);
}

TEST_F(CliTest, GridworldCommand) {
    Json g{{"format", kFormatTag}, {"width", 3}, {"height", 2}, {"initial", {0, 0}}, {"absorbing", {{2, 1}}}};
    write_text_file((dir_ / "g.json").string(), g.dump());
    std::string mdp = "\"" + (dir_ / "g.mdp.json").string() + "\"";
    ASSERT_EQ(run("gridworld \"" + (dir_ / "g.json").string() + "\" -o " + mdp).code, 0);
    auto m = read_json_file((dir_ / "g.mdp.json").string());
    EXPECT_EQ(m["states"].size(), 6u);
}

TEST_F(CliTest, SweepCommand) {
    Json j{{"format", kFormatTag}, {"model", (kData / "fig2a.json").string()}, {"output", dir_.string()}};
    j["sweep"] = {{"variable", "gamma"}, {"values", {2, 4}}};
    write_text_file((dir_ / "exp.json").string(), j.dump());
    ASSERT_EQ(run("sweep \"" + (dir_ / "exp.json").string() + "\"").code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "results.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "timings.csv"));
}
