#include <cstdlib>
#include <sys/wait.h>

#include "doctest.h"
#include "fixtures.hpp"

#include "mssg/ingest.hpp"
#include "mssg/io.hpp"
#include "mssg/service.hpp"

using namespace mssg;
using namespace mssg::fixtures;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run_cli(const std::string& args) {
    const auto out = temp_path("cli.out");
    const auto err = temp_path("cli.err");
    const std::string cmd = std::string("\"") + MSSG_CLI_PATH + "\" " + args + " >\"" + out + "\" 2>\"" + err + "\"";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_text(out);
    r.err = read_text(err);
    return r;
}

std::string saved(const Timeline& t, const std::string& name) {
    const auto path = temp_path(name);
    save_timeline(t, path);
    return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sync a timeline with itself") {
    const auto t = saved(three_frame_timeline("three"), "cli_three.jsonl");
    const auto r = run_cli("sync " + t + " " + t + " --weights uniform");
    REQUIRE(r.code == 0);
    CHECK(r.err.find("total cost: 0\n") != std::string::npos);
    CHECK(json::parse(r.out).at("total_cost") == 0.0);

    const auto doc = temp_path("cli_align.json");
    const auto r2 = run_cli("sync " + t + " " + t + " --weights uniform --out " + doc);
    REQUIRE(r2.code == 0);
    CHECK(r2.out.find("path length: 3") != std::string::npos);
    CHECK(read_text(doc) == r.out);

    const auto tl = three_frame_timeline("three");
    const auto w = *WeightProfile::preset("uniform");
    CHECK(r.out == alignment_document(sync_timelines(tl, tl, w), tl, tl, w));
}

TEST_CASE("exit codes") {
    const auto t = saved(three_frame_timeline("three"), "cli_three.jsonl");
    CHECK(run_cli("sync /nonexistent/a.jsonl " + t).code == 2);
    CHECK(run_cli("report " + t + " 0 7").code == 4);
    CHECK(run_cli("bev " + t + " 9999").code == 4);
    CHECK(run_cli("sync " + t + " " + t + " --weights nope").code == 2);

    const auto empty = saved(Timeline("empty", {}, 8.0, {}), "cli_empty.jsonl");
    const auto r = run_cli("sync " + empty + " " + t);
    CHECK(r.code == 3);
    CHECK(r.err.find("error: ") == 0);

    const auto bad = temp_path("cli_bad.jsonl");
    io::write_file(bad, "{\"record\":\"header\"}\n");
    CHECK(run_cli("validate " + bad).code == 2);
}

TEST_CASE("report and bev") {
    const auto t = saved(three_frame_timeline("three"), "cli_three.jsonl");
    const auto same = run_cli("report " + t + " 0 0");
    CHECK(same.code == 0);
    CHECK(same.out.empty());

    const auto changed = run_cli("report " + t + " 0 1");
    CHECK(changed.out.find("Patient entered the scene.\n") == 0);
    CHECK(json::parse(run_cli("report " + t + " 0 1 --json").out).at("factor_changes").size() == 1);

    const auto svg = run_cli("bev " + t + " 2");
    CHECK(svg.code == 0);
    CHECK(svg.out == frame_svg(three_frame_timeline("three"), 2, StyleConfig::defaults()));
    CHECK(json::parse(run_cli("bev " + t + " 2 --layout").out).at("placements").size() == 3);
}

TEST_CASE("synth, warp and validate") {
    const auto a = run_cli("synth --seed 7");
    const auto b = run_cli("synth --seed 7");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(parse_timeline(a.out) == synth_procedure(ProcedureScript::vertebroplasty_demo(), 7));

    const auto demo = temp_path("cli_demo.jsonl");
    io::write_file(demo, a.out);
    const auto warped = temp_path("cli_warped.jsonl");
    const auto truth = temp_path("cli_truth.json");
    REQUIRE(run_cli("warp " + demo + " --seed 3 --out " + warped + " --truth " + truth).code == 0);
    const auto tj = json::parse(read_text(truth));
    CHECK(tj.at("format") == "mssg-warp-truth");
    CHECK(tj.at("pairs")[0] == json::array({0, 0}));
    const auto v = run_cli("validate " + warped);
    CHECK(v.code == 0);
    CHECK(v.out.find("vertebroplasty-demo-warped: ") == 0);
}

}  // TEST_SUITE
