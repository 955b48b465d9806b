#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "levyruin/commands.hpp"
#include "levyruin/csv.hpp"

using namespace levyruin;
using namespace levyruin::cli;

namespace {

std::string config_path(const char* name) { return std::string(LEVYRUIN_CONFIG_DIR) + "/" + name + ".cfg"; }

ModelOptions perturbed_flags() {
    ModelOptions m;
    m.model = "perturbed";
    m.p = 2.0;
    m.sigma2 = 1.0;
    m.beta = 1.0;
    m.alpha = 1.0;
    return m;
}

ModelOptions from_config(const char* name) {
    ModelOptions m;
    m.config = config_path(name);
    return m;
}

std::string classify_text(const ModelOptions& m, bool summary = false) {
    ClassifyOptions o;
    o.model = m;
    o.summary_only = summary;
    std::ostringstream out;
    RunManifest man;
    EXPECT_EQ(run_classify(o, out, man), exit_ok);
    return out.str();
}

}  // namespace

TEST(Classify, PerturbedFlagsSummary) {
    const auto s = classify_text(perturbed_flags(), true);
    EXPECT_EQ(s.rfind("case=B rate=0.438447", 0), 0u) << s;
}

TEST(Classify, FlagsAndConfigAreByteIdentical) {
    EXPECT_EQ(classify_text(perturbed_flags()), classify_text(from_config("perturbed")));
}

TEST(Classify, NegativeDriftConfig) {
    const auto s = classify_text(from_config("negative_drift"), true);
    EXPECT_EQ(s.rfind("case=A rate=0 ", 0), 0u) << s;
}

TEST(Classify, ReportEndsWithSummaryAndShowsCrossCheck) {
    const auto s = classify_text(perturbed_flags());
    EXPECT_NE(s.find("agreement:      yes"), std::string::npos) << s;
    EXPECT_NE(s.find("\ncase=B rate="), std::string::npos);
}

TEST(Classify, UsageErrors) {
    ModelOptions none;
    EXPECT_THROW(load_model(none), UsageError);
    auto bad = perturbed_flags();
    bad.beta = -1.0;
    EXPECT_THROW(load_model(bad), UsageError);
    auto both = perturbed_flags();
    both.config = config_path("perturbed");
    EXPECT_THROW(load_model(both), UsageError);
    ClassifyOptions o;
    o.model = perturbed_flags();
    o.mode = "fast";
    std::ostringstream out;
    RunManifest man;
    EXPECT_THROW(run_classify(o, out, man), UsageError);
}

TEST(PsiCurve, FirstRowIsOrigin) {
    PsiCurveOptions o;
    o.model = perturbed_flags();
    o.n = 100;
    std::ostringstream out;
    RunManifest man;
    ASSERT_EQ(run_psi_curve(o, out, man), exit_ok);
    std::istringstream in(out.str());
    const auto t = read_csv(in);
    ASSERT_EQ(t.rows.size(), 100u);
    EXPECT_EQ(t.rows[0][0], "0");
    EXPECT_EQ(t.rows[0][1], "0");
    int sign_changes = 0;
    for (std::size_t i = 2; i < t.rows.size(); ++i)
        sign_changes += (std::stod(t.rows[i - 1][1]) < 0) != (std::stod(t.rows[i][1]) < 0);
    EXPECT_EQ(sign_changes, 1);
}

TEST(Certify, OutputIndependentOfWorkerCount) {
    SimulationOptions o;
    o.paths = 2000;
    o.seed = 9;
    o.horizon = 200.0;
    std::string first;
    for (unsigned w : {1u, 4u}) {
        o.workers = w;
        std::ostringstream out, info;
        RunManifest man;
        EXPECT_EQ(run_certify(perturbed_flags(), o, out, info, man), exit_ok);
        if (first.empty())
            first = out.str();
        else
            EXPECT_EQ(out.str(), first);
    }
    std::istringstream in(first);
    const auto t = read_csv(in);
    EXPECT_EQ(t.rows.size(), 5u);
    for (const auto& r : t.rows) EXPECT_EQ(r[t.column("verdict")], "certified");
}

TEST(Certify, WritesCsvAndManifest) {
    const auto dir = std::filesystem::temp_directory_path() / "levyruin_test_certify";
    std::filesystem::create_directories(dir);
    SimulationOptions o;
    o.paths = 200;
    o.horizon = 50.0;
    o.out_path = (dir / "out.csv").string();
    std::ostringstream out, info;
    RunManifest man;
    EXPECT_EQ(run_certify(from_config("cramer_lundberg"), o, out, info, man), exit_ok);
    EXPECT_TRUE(info.str().empty());
    EXPECT_NE(out.str().find("certification:  PASS"), std::string::npos) << out.str();
    std::ifstream csv(o.out_path);
    ASSERT_TRUE(csv);
    EXPECT_EQ(read_csv(csv).rows.size(), 5u);
    std::ifstream mf(o.out_path + ".manifest.json");
    ASSERT_TRUE(mf);
    const auto j = nlohmann::json::parse(mf);
    EXPECT_EQ(j["subcommand"], "certify");
    EXPECT_EQ(j["seed"], 1);
    EXPECT_EQ(j["parameters"]["paths"], 200);
    std::filesystem::remove_all(dir);
}

TEST(Simulate, WithoutBoundIsInconclusive) {
    // no u given and no default grid for simulate
    SimulationOptions o;
    o.paths = 10;
    std::ostringstream out, info;
    RunManifest man;
    EXPECT_THROW(run_simulate(perturbed_flags(), o, out, info, man), UsageError);
    EXPECT_EQ(verdict_exit_code({}, false), exit_inconclusive);
}

TEST(Gallery, CoversAllFourCases) {
    SimulationOptions o;
    o.paths = 300;
    o.horizon = 100.0;
    std::ostringstream out, info;
    RunManifest man;
    EXPECT_EQ(run_gallery(o, out, info, man), exit_ok) << info.str();
    std::istringstream in(out.str());
    const auto t = read_csv(in);
    std::set<std::string> cases;
    for (const auto& r : t.rows) {
        cases.insert(r[t.column("case")]);
        EXPECT_EQ(r[t.column("verdict")], "certified") << r[0];
    }
    EXPECT_EQ(cases, (std::set<std::string>{"A", "B", "C", "D"}));
}
