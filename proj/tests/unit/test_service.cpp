#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "expect.hpp"
#include "fixtures.hpp"

#include "mssg/ingest.hpp"
#include "mssg/io.hpp"
#include "mssg/service.hpp"

using namespace mssg;
using namespace mssg::fixtures;
using nlohmann::json;

namespace {

Api make_api(ServiceConfig cfg = {}) {
    auto store = std::make_shared<TimelineStore>();
    store->add(three_frame_timeline("three"));
    store->add(Timeline("empty", {}, 8.0, {}));
    return Api(store, std::move(cfg));
}

std::string error_code(const ApiResponse& r) { return json::parse(r.body).at("error").at("code").get<std::string>(); }

}  // namespace

TEST_SUITE("service") {

TEST_CASE("listing and frame lookup") {
    const auto api = make_api();
    const auto list = json::parse(api.list_timelines().body);
    REQUIRE(list.at("timelines").size() == 2);
    CHECK(list.at("timelines")[0].at("id") == "empty");
    CHECK(list.at("timelines")[1].at("frames") == 3);
    CHECK(list.at("timelines")[0].at("start_time").is_null());

    const auto frame = api.get_frame("three", "2");
    REQUIRE(frame.status == 200);
    const auto j = json::parse(frame.body);
    CHECK(j.at("nodes").size() == 3);
    CHECK(j.at("features").at("c_arm") == true);
    CHECK(j.at("timeline") == "three");

    CHECK(api.get_frame("three", "3").status == 404);
    CHECK(error_code(api.get_frame("three", "3")) == "unknown_frame");
    CHECK(api.get_frame("three", "x").status == 404);
    CHECK(error_code(api.get_frame("nope", "0")) == "unknown_timeline");

    const auto svg = api.get_svg("three", "1");
    CHECK(svg.status == 200);
    CHECK(svg.content_type == "image/svg+xml");
    CHECK(svg.body == frame_svg(three_frame_timeline("three"), 1, StyleConfig::defaults()));
    CHECK(json::parse(api.get_layout("three", "1").body).at("placements").size() == 2);
}

TEST_CASE("distance endpoint") {
    const auto api = make_api();
    const auto r = api.post_distance(R"({"a": {"timeline": "three", "frame": 0}, "b": {"timeline": "three", "frame": 2}})");
    REQUIRE(r.status == 200);
    const auto j = json::parse(r.body);
    // patient and c_arm presence differ; the acquisition time delta is 2 s of 3600.
    CHECK(j.at("distance").get<double>() == doctest::Approx(1 + 1 + 1 + 2.0 / 3600));
    CHECK(j.at("deltas").at("c_arm") == 1.0);

    const auto inline_graph = io::to_json(three_frame_timeline().frame(0));
    json body = {{"a", {{"graph", inline_graph}}}, {"b", {{"timeline", "three"}, {"frame", 0}}}};
    CHECK(json::parse(api.post_distance(body.dump()).body).at("distance") == 0.0);

    body["weights"] = {{"weights", {{"c_arm", -1.0}}}};
    const auto bad = api.post_distance(body.dump());
    CHECK(bad.status == 422);
    CHECK(error_code(bad) == "invalid_weights");

    CHECK(api.post_distance("{oops").status == 400);
    CHECK(error_code(api.post_distance("{oops")) == "malformed_body");
    CHECK(api.post_distance(R"({"a": {"timeline": "three"}, "b": {}})").status == 400);
    CHECK(api.post_distance(R"({"a": {"timeline": "three", "frame": 9}, "b": {"timeline": "three", "frame": 0}})").status == 404);
}

TEST_CASE("sync endpoint") {
    const auto api = make_api();
    const auto r = api.post_sync(R"({"a": "three", "b": "three", "weights": "uniform"})");
    REQUIRE(r.status == 200);
    const auto j = json::parse(r.body);
    CHECK(j.at("total_cost") == 0.0);
    CHECK(j.at("path_length") == 3);
    CHECK(j.at("format") == "mssg-alignment");

    // Cached responses are byte-identical.
    CHECK(api.post_sync(R"({"a": "three", "b": "three", "weights": "uniform"})").body == r.body);

    const auto t = three_frame_timeline("three");
    const auto w = *WeightProfile::preset("uniform");
    CHECK(r.body == alignment_document(sync_timelines(t, t, w), t, t, w));

    CHECK(api.post_sync(R"({"a": "three", "b": "empty"})").status == 422);
    CHECK(api.post_sync(R"({"a": "three", "b": "missing"})").status == 404);
    CHECK(api.post_sync(R"({"a": "three"})").status == 400);
    CHECK(api.post_sync(R"({"a": "three", "b": "three", "weights": "heavy"})").status >= 400);

    ServiceConfig small;
    small.max_sync_cells = 8;
    const auto limited = make_api(small);
    const auto too_big = limited.post_sync(R"({"a": "three", "b": "three"})");
    CHECK(too_big.status == 413);
    CHECK(error_code(too_big) == "too_large");
}

TEST_CASE("report endpoint") {
    const auto api = make_api();
    const auto r = api.post_report(R"({"a": {"timeline": "three", "frame": 0}, "b": {"timeline": "three", "frame": 1}})");
    REQUIRE(r.status == 200);
    const auto j = json::parse(r.body);
    CHECK(j.at("sentences")[0] == "Patient entered the scene.");
    CHECK(j.at("sentences").size() == j.at("changes").at("node_changes").size() + j.at("changes").at("factor_changes").size() +
                                          j.at("changes").at("edge_changes").size());
    const auto same = api.post_report(R"({"a": {"timeline": "three", "frame": 1}, "b": {"timeline": "three", "frame": 1}})");
    CHECK(json::parse(same.body).at("sentences").empty());
}

TEST_CASE("timeline upload") {
    auto api = make_api();
    const auto doc = write_timeline(three_frame_timeline("uploaded"));
    const auto created = api.post_timeline(doc);
    CHECK(created.status == 201);
    CHECK(json::parse(created.body).at("id") == "uploaded");
    CHECK(api.get_frame("uploaded", "0").status == 200);
    CHECK(api.post_timeline(doc).status == 409);
    CHECK(api.post_timeline("not a timeline").status == 400);

    const auto derived = api.post_timeline(write_timeline(three_frame_timeline("derived")), true);
    REQUIRE(derived.status == 201);
    const auto frame = json::parse(api.get_frame("derived", "1").body);
    CHECK_FALSE(frame.at("edges").empty());
}

TEST_CASE("store loads a directory in sorted order") {
    const auto dir = temp_path("store");
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    save_timeline(three_frame_timeline("b-one"), dir + "/b.jsonl");
    save_timeline(three_frame_timeline("a-one"), dir + "/a.jsonl");
    std::ofstream(dir + "/notes.txt") << "ignored";
    const auto store = TimelineStore::load_directory(dir);
    const auto all = store->list();
    REQUIRE(all.size() == 2);
    CHECK(all[0]->id() == "a-one");
    CHECK(TimelineStore::load_directory("")->list().empty());
    CHECK(testing::caught([] { TimelineStore::load_directory("/nonexistent/dir"); })->code() == ErrorCode::IoError);
}

TEST_CASE("service config") {
    const auto cfg = ServiceConfig::load(std::string(MSSG_DATA_DIR) + "/service.json");
    CHECK(cfg.port == 8080);
    CHECK(cfg.timeline_dir == (std::filesystem::path(MSSG_DATA_DIR) / "timelines").string());
    CHECK(cfg.templates.entries() == TemplateTable::defaults().entries());

    const auto path = temp_path("service.json");
    std::ofstream(path) << R"({"port": 9000, "style": {"scale": 30}, "templates": {"staff_count": "Staff {old} -> {new}"}})";
    const auto inline_cfg = ServiceConfig::load(path);
    CHECK(inline_cfg.style.scale == 30.0);
    CHECK(inline_cfg.templates.get("staff_count") == "Staff {old} -> {new}");

    ::setenv("MSSG_PORT", "9123", 1);
    CHECK(ServiceConfig::load(path).port == 9123);
    ::setenv("MSSG_PORT", "abc", 1);
    CHECK(testing::caught([&] { ServiceConfig::load(path); })->code() == ErrorCode::InvalidConfig);
    ::unsetenv("MSSG_PORT");

    std::ofstream(path) << R"({"relations": {"tau_near": -3}})";
    CHECK(testing::caught([&] { ServiceConfig::load(path); })->code() == ErrorCode::InvalidConfig);
}

}  // TEST_SUITE
