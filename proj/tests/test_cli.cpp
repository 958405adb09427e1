#include "ehl/cli_app.hpp"

#include "ehl/pipeline/preprocess.hpp"
#include "ehl/util.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

using namespace ehl;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"ehl"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ehl_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

const char* kBrightScenario =
    "[places]\n"
    "desk 520 40 10 100\n"
    "[activities]\n"
    "sitting static 0.02 1.2 0.0 0.0\n"
    "walking dynamic 0.5 1.9 0.3 1.9\n"
    "[timeline]\n"
    "desk sitting 60\n"
    "desk walking 60\n";

} // namespace

TEST_CASE("missing scenario file exits 2") {
    CHECK(run_cli({"simulate", "--scenario", "/nonexistent/file.txt", "--out-log", "/tmp/a",
                   "--out-trace", "/tmp/b"}) == 2);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli({"simulate"}) == 2);                       // missing required options
    CHECK(run_cli({"frobnicate"}) == 2);                     // unknown subcommand
    CHECK(run_cli({"zero-energy", "--trace", "/nope"}) == 2); // unreadable input
}

TEST_CASE("simulate produces deterministic outputs and prints stats") {
    TempDir tmp;
    write_file(tmp.file("scenario.txt"), kBrightScenario);

    auto args = [&](const std::string& suffix) {
        return std::vector<std::string>{
            "simulate",     "--scenario",               tmp.file("scenario.txt"),
            "--seed",       "5",                        "--out-log",
            tmp.file("log" + suffix + ".csv"),          "--out-trace",
            tmp.file("trace" + suffix + ".csv"),        "--out-truth",
            tmp.file("truth" + suffix + ".csv")};
    };
    REQUIRE(run_cli(args("1")) == 0);
    REQUIRE(run_cli(args("2")) == 0);
    CHECK(read_file(tmp.file("log1.csv")) == read_file(tmp.file("log2.csv")));
    CHECK(read_file(tmp.file("trace1.csv")) == read_file(tmp.file("trace2.csv")));
    CHECK(read_file(tmp.file("truth1.csv")) == read_file(tmp.file("truth2.csv")));

    // a different seed changes the bytes
    auto other = args("3");
    other[4] = "6";
    REQUIRE(run_cli(other) == 0);
    CHECK(read_file(tmp.file("log1.csv")) != read_file(tmp.file("log3.csv")));

    CHECK(run_cli({"zero-energy", "--trace", tmp.file("trace1.csv")}) == 0);
}

TEST_CASE("features and evaluate round out the pipeline") {
    TempDir tmp;
    write_file(tmp.file("scenario.txt"), kBrightScenario);
    REQUIRE(run_cli({"simulate", "--scenario", tmp.file("scenario.txt"), "--seed", "5",
                     "--out-log", tmp.file("log.csv"), "--out-trace", tmp.file("trace.csv"),
                     "--out-truth", tmp.file("truth.csv")}) == 0);

    SUBCASE("unknown channel exits 2") {
        CHECK(run_cli({"features", "--log", tmp.file("log.csv"), "--truth",
                       tmp.file("truth.csv"), "--channels", "sc1,tachyon", "--out",
                       tmp.file("f.csv")}) == 2);
    }

    SUBCASE("a log too short for any window yields a header-only table") {
        write_file(tmp.file("tiny.csv"), "session,t_ms,sc1_mv,sc2_mv,piezo_mv\n"
                                         "# session 0 power_on_t_ms 0\n"
                                         "0,1000,1,2,3\n"
                                         "0,2000,1,2,3\n");
        REQUIRE(run_cli({"features", "--log", tmp.file("tiny.csv"), "--truth",
                         tmp.file("truth.csv"), "--out", tmp.file("tiny_f.csv")}) == 0);
        FeatureTable t = parse_features_csv(read_file(tmp.file("tiny_f.csv")));
        CHECK(t.n() == 0);
    }

    SUBCASE("window count follows the hop arithmetic") {
        REQUIRE(run_cli({"features", "--log", tmp.file("log.csv"), "--truth",
                         tmp.file("truth.csv"), "--out", tmp.file("f.csv")}) == 0);
        FeatureTable table = parse_features_csv(read_file(tmp.file("f.csv")));
        REQUIRE(table.n() > 0);
        CHECK(table.features[0].size() == 4 * kFeaturesPerChannel);

        RecordLog log = import_csv(read_file(tmp.file("log.csv")),
                                   std::numeric_limits<std::uint64_t>::max());
        size_t expected = 0;
        for (const auto& sess : preprocess(log).sessions) {
            size_t n = resample_linear(sess.sc1, kPipelineFs).t.size();
            if (n >= kWindowSamples) expected += (n - kWindowSamples) / kWindowHop + 1;
        }
        CHECK(table.n() == expected);
    }

    SUBCASE("evaluate runs PD on the generated features") {
        REQUIRE(run_cli({"features", "--log", tmp.file("log.csv"), "--truth",
                         tmp.file("truth.csv"), "--out", tmp.file("f.csv")}) == 0);
        CHECK(run_cli({"evaluate", "--features", tmp.file("f.csv"), "--model", "gnb",
                       "--scheme", "pd", "--target", "activity2", "--folds", "3",
                       "--out-confusion", tmp.file("cm.csv")}) == 0);
        CHECK(fs::exists(tmp.file("cm.csv")));
        // PI needs at least two users
        CHECK(run_cli({"evaluate", "--features", tmp.file("f.csv"), "--model", "gnb",
                       "--scheme", "pi", "--target", "activity2", "--out-confusion",
                       tmp.file("cm2.csv")}) == 2);
    }
}

TEST_CASE("features CSV round-trips through parse") {
    TempDir tmp;
    write_file(tmp.file("scenario.txt"), kBrightScenario);
    REQUIRE(run_cli({"simulate", "--scenario", tmp.file("scenario.txt"), "--seed", "2",
                     "--out-log", tmp.file("log.csv"), "--out-trace", tmp.file("trace.csv"),
                     "--out-truth", tmp.file("truth.csv")}) == 0);
    REQUIRE(run_cli({"features", "--log", tmp.file("log.csv"), "--truth", tmp.file("truth.csv"),
                     "--channels", "sc2,sr", "--user", "3", "--out", tmp.file("f.csv")}) == 0);
    FeatureTable t = parse_features_csv(read_file(tmp.file("f.csv")));
    REQUIRE(t.n() > 0);
    CHECK(t.channels.to_string() == "sc2,sr");
    CHECK(t.features[0].size() == 2 * kFeaturesPerChannel);
    for (int u : t.user) CHECK(u == 3);
    std::string again = features_to_csv(t);
    CHECK(again == read_file(tmp.file("f.csv")));
}

TEST_CASE("truth timeline lookup") {
    TruthTimeline tl = parse_truth_csv("t_s,place,activity\n0,lab,sitting\n60,hall,walking\n");
    CHECK(tl.labels_at(0.0).first == "lab");
    CHECK(tl.labels_at(59.9).second == "sitting");
    CHECK(tl.labels_at(60.0).first == "hall");
    CHECK(tl.labels_at(1e9).second == "walking");
    CHECK_THROWS_AS(parse_truth_csv("nope\n"), ParseError);
    CHECK_THROWS_AS(parse_truth_csv("t_s,place,activity\n5,a,b\n3,c,d\n"), ParseError);
}
