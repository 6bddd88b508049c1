#include <json.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

std::string data(const std::string& name) { return std::string(CTLF_DATA) + "/" + name; }

// Runs the tool through the shell; stderr is discarded.
Run ctlf(const std::string& args, const std::string& stdin_text = "") {
    std::string cmd;
    if (!stdin_text.empty()) cmd = "printf '" + stdin_text + "' | ";
    cmd += std::string(CTLF_BIN) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json js(const Run& r) { return nlohmann::json::parse(r.out); }

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ctlf_cli_" + name)).string();
}

} // namespace

TEST(Cli, SatText) {
    auto r = ctlf("sat 'EX p & EX !p'");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "sat\n");
    auto u = ctlf("sat 'AG p & EF !p'");
    EXPECT_EQ(u.code, 0);
    EXPECT_EQ(u.out, "unsat\n");
}

TEST(Cli, SatJson) {
    auto r = ctlf("--format json --no-timing sat 'p & EX !p'");
    ASSERT_EQ(r.code, 0);
    auto j = js(r);
    EXPECT_EQ(j["status"], "sat");
    EXPECT_EQ(j["engine"], "flat");
    EXPECT_GE(j["size"].get<int>(), 2);
    EXPECT_EQ(j["extent"], 1);
    EXPECT_FALSE(j["stats"].contains("millis"));
    EXPECT_TRUE(j["stats"].contains("nodes"));
}

TEST(Cli, SatEngineSelection) {
    EXPECT_EQ(js(ctlf("--format json sat --engine general 'AF p'"))["engine"], "general");
    EXPECT_EQ(js(ctlf("--format json sat --engine brute --max-worlds 2 'EX p & EX !p'"))["status"], "sat");
    auto bad = ctlf("sat --engine flat 'AX AX p'");
    EXPECT_EQ(bad.code, 1);
    EXPECT_EQ(ctlf("sat --engine warp p").code, 1);
}

TEST(Cli, SatStdinLines) {
    auto r = ctlf("sat", "p\\n# comment\\n\\np & !p\\n");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "sat\nunsat\n");
}

TEST(Cli, SatBoundedUnsatIsNotExhaustive) {
    auto r = ctlf("--format json sat --engine brute --max-worlds 1 'EX p & EX !p'");
    EXPECT_EQ(r.code, 0);
    auto j = js(r);
    EXPECT_EQ(j["status"], "unsat");
    EXPECT_EQ(j["exhaustive"], false);
    EXPECT_EQ(js(ctlf("--format json sat 'p & !p'"))["exhaustive"], true);
}

TEST(Cli, SatBudgetFromEnvironment) {
    auto r = ctlf("sat --engine general 'A[p U (q & EX r)] & EG !q & AG EF r'");
    EXPECT_EQ(r.code, 0);
    setenv("CTLF_BUDGET_NODES", "3", 1);
    auto u = ctlf("sat --engine general 'A[p U (q & EX r)] & EG !q & AG EF r'");
    unsetenv("CTLF_BUDGET_NODES");
    EXPECT_EQ(u.code, 2);
}

TEST(Cli, SatWitnessFile) {
    auto path = tmp("witness.kri");
    auto r = ctlf("sat --witness " + path + " 'EX p & EX !p'");
    ASSERT_EQ(r.code, 0);
    auto mc = ctlf("mc " + path + " 'EX p & EX !p'");
    EXPECT_EQ(mc.out, "true\n");
    std::filesystem::remove(path);
}

TEST(Cli, SatDot) {
    auto r = ctlf("--format dot sat 'p & EX !p'");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("digraph"), std::string::npos);
    EXPECT_NE(r.out.find("->"), std::string::npos);
}

TEST(Cli, ParseErrorExitsOne) {
    EXPECT_EQ(ctlf("sat 'p &'").code, 1);
    EXPECT_EQ(ctlf("nonsense").code, 1);
}

TEST(Cli, ModelCheck) {
    EXPECT_EQ(ctlf("mc " + data("chain.kri") + " 'p & AX AG q'").out, "true\n");
    EXPECT_EQ(ctlf("mc " + data("chain.kri") + " 'EF p & EX p'").out, "false\n");
    EXPECT_EQ(js(ctlf("--format json mc " + data("loop_p.kri") + " 'AG p'"))["result"], true);
    EXPECT_EQ(ctlf("mc " + data("missing.kri") + " p").code, 1);
}

TEST(Cli, ReduceQbf) {
    auto af = ctlf("--format json reduce qbf-af 'E x : x'");
    ASSERT_EQ(af.code, 0);
    auto j = js(af);
    EXPECT_EQ(j["depth"], 2);
    auto sat = ctlf("sat '" + j["formula"].get<std::string>() + "'");
    EXPECT_EQ(sat.out, "sat\n");
    auto ag = ctlf("reduce qbf-ag", "A x : x");
    ASSERT_EQ(ag.code, 0);
    std::string f = ag.out.substr(0, ag.out.size() - 1);
    EXPECT_EQ(ctlf("sat '" + f + "'").out, "unsat\n");
    EXPECT_EQ(ctlf("reduce qbf-af 'A x : y'").code, 1);
}

TEST(Cli, ReduceAtm) {
    auto r = ctlf("reduce atm " + data("first_a.atm") + " a --variant ag_ax");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(ctlf("sat '" + r.out.substr(0, r.out.size() - 1) + "'").out, "sat\n");
    EXPECT_EQ(ctlf("reduce atm " + data("first_a.atm") + " c --variant ag_ax").code, 1);
    EXPECT_EQ(ctlf("reduce atm " + data("first_a.atm") + " a --variant nope").code, 1);
    EXPECT_EQ(ctlf("reduce atm " + data("accept.atm") + " - --variant au").code, 0);
}

TEST(Cli, Gen) {
    auto r = ctlf("--format json gen flat_axag --m 3");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(js(r)["depth"], 1);
    EXPECT_EQ(ctlf("gen nope").code, 1);
    EXPECT_EQ(ctlf("gen ax --m 0").code, 1);
}

TEST(Cli, Translate) {
    EXPECT_EQ(ctlf("translate base --target " + data("nimpl.base") + " 'p & q'").code, 1);  // not complete
    auto ag = ctlf("--format json translate ag 'AF p'");
    ASSERT_EQ(ag.code, 0);
    EXPECT_EQ(js(ag)["depth"], 2);
    EXPECT_EQ(ctlf("translate s1 'p'").code, 1);  // needs --target
}

TEST(Cli, Measure) {
    EXPECT_EQ(ctlf("measure size --cap 3 'EX p & EX !p'").out, "2\n");
    EXPECT_EQ(ctlf("measure extent --cap 3 'p & EX !p'").out, "1\n");
    auto none = ctlf("measure size --cap 2 'p & !p'");
    EXPECT_EQ(none.code, 0);
    EXPECT_EQ(none.out, "none up to 2 worlds\n");
    auto j = js(ctlf("--format json measure extent --cap 3 'AG p'"));
    EXPECT_EQ(j["minimum"], 0);
    EXPECT_EQ(j["exhaustive"], true);
    EXPECT_EQ(ctlf("measure size --cap 12 'p & q & r & s & t'").code, 2);
}

TEST(Cli, Quasi) {
    auto ok = ctlf("quasi check " + data("loop_af.quasi") + " 'AF p & !p'");
    EXPECT_EQ(ok.code, 0);
    EXPECT_NE(ok.out.find("violations"), std::string::npos);  // AF p is never fulfilled on the loop
    auto from = ctlf("quasi from-model " + data("chain.kri") + " 'p & AX q'");
    ASSERT_EQ(from.code, 0);
    EXPECT_NE(from.out.find("label a"), std::string::npos);
    auto path = tmp("chain.quasi");
    std::ofstream(path) << from.out;
    auto back = ctlf("--format json quasi check " + path + " 'p & AX q'");
    EXPECT_EQ(js(back)["ok"], true);
    std::filesystem::remove(path);
}
