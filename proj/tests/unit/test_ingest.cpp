#include <numbers>

#include "doctest.h"
#include "expect.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

#include "mssg/distance.hpp"
#include "mssg/ingest.hpp"
#include "mssg/io.hpp"

using namespace mssg;
using namespace mssg::fixtures;
using nlohmann::json;

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

const std::string kMinimal =
    R"({"record":"header","schema_version":1,"timeline_id":"mini","room_extent":8.0})"
    "\n"
    R"({"record":"frame","frame_index":0,"timestamp":0.0,"nodes":[{"id":"m","class":"monitor","kind":"real","pose":{"type":"object","center":[1,1,1],"half_extents":[0.2,0.2,0.2],"yaw":0}}],"edges":[]})"
    "\n";

std::vector<std::string> coco_joint_names() {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < kJointCount; ++i) names.emplace_back(kJointNames[i]);
    return names;
}

json keypoints_of(const HumanPose& pose) {
    json out = json::array();
    for (const auto& k : pose.keypoints) {
        if (k) out.insert(out.end(), {k->x, k->y, k->z, 1.0});
        else out.insert(out.end(), {0.0, 0.0, 0.0, 0.0});
    }
    return out;
}

AnnotationMapping identity_mapping() {
    AnnotationMapping m;
    for (const auto& n : coco_joint_names()) m.joint_map[n] = n;
    m.label_map = {{"OR_table", "operating_table"}, {"carm", "c_arm"}};
    return m;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("timeline document round trip") {
    const auto t = three_frame_timeline();
    const auto doc = write_timeline(t);
    CHECK(parse_timeline(doc) == t);
    CHECK(write_timeline(parse_timeline(doc)) == doc);

    const auto path = temp_path("roundtrip.jsonl");
    save_timeline(t, path);
    CHECK(load_timeline(path) == t);
}

TEST_CASE("minimal hand-written document") {
    const auto t = parse_timeline(kMinimal);
    CHECK(t.id() == "mini");
    CHECK(t.size() == 1);
    CHECK(t.frame(0).find("m")->cls == NodeClass(ClassId::monitor));
}

TEST_CASE("document errors carry the line number") {
    const std::string header = kMinimal.substr(0, kMinimal.find('\n') + 1);
    const std::string frame0 = kMinimal.substr(kMinimal.find('\n') + 1);
    std::string frame1 = frame0;
    frame1.replace(frame1.find("\"frame_index\":0"), 15, "\"frame_index\":1");

    // Timestamp not increasing.
    auto err = testing::caught([&] { parse_timeline(header + frame0 + frame1); });
    REQUIRE(err);
    CHECK(err->code() == ErrorCode::MalformedRecord);
    CHECK(err->line() == std::optional<std::size_t>{3});

    std::string v2 = header;
    v2.replace(v2.find("\"schema_version\":1"), 18, "\"schema_version\":2");
    err = testing::caught([&] { parse_timeline(v2 + frame0); });
    REQUIRE(err);
    CHECK(err->code() == ErrorCode::SchemaVersionMismatch);
    CHECK(err->line() == std::optional<std::size_t>{1});

    err = testing::caught([&] { parse_timeline(header + "{not json\n"); });
    REQUIRE(err);
    CHECK(err->code() == ErrorCode::MalformedRecord);
    CHECK(err->line() == std::optional<std::size_t>{2});

    std::string dangling = frame0;
    dangling.replace(dangling.find("\"edges\":[]"), 10, R"("edges":[{"source":"m","relation":"near","target":"x","kind":"spatial"}])");
    err = testing::caught([&] { parse_timeline(header + dangling); });
    REQUIRE(err);
    CHECK(err->code() == ErrorCode::DanglingEdgeEndpoint);
    CHECK(err->element() == "x");
    CHECK(err->line() == std::optional<std::size_t>{2});

    CHECK(testing::caught([] { parse_timeline(""); })->code() == ErrorCode::MalformedRecord);
}

TEST_CASE("property: random timelines round trip") {
    testgen::Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = testgen::random_timeline(rng, 1 + trial % 6, "rt" + std::to_string(trial));
        CHECK(parse_timeline(write_timeline(t)) == t);
    }
}

TEST_CASE("annotation adapter") {
    const HumanPose a = standing_pose({2.0, 2.0, 0.0}, 0.0);
    const HumanPose b = standing_pose({5.0, 5.0, 0.0}, 1.0);
    json ann = {{"dataset", "toy"},
                {"joint_names", coco_joint_names()},
                {"frames",
                 json::array({{{"timestamp", 0.5},
                               {"annotations_3d",
                                json::array({{{"person_id", "p1"}, {"keypoints3D", keypoints_of(a)}},
                                             {{"person_id", "p2"}, {"keypoints3D", keypoints_of(b)}}})}}})}};
    auto t = adapt_annotations(ann, identity_mapping());
    REQUIRE(t.size() == 1);
    CHECK(extract_features(t.frame(0)).staff_count == 2);
    CHECK(t.frame(0).timestamp() == 0.5);
    CHECK(t.metadata().at("source") == "toy");

    // A joint the mapping does not mention.
    auto m = identity_mapping();
    m.joint_map.erase("left_ankle");
    CHECK_MSSG_ERROR(adapt_annotations(ann, m), ErrorCode::UnmappedJoint, "left_ankle");

    // 2D-only person.
    json ann2d = ann;
    ann2d["frames"][0]["annotations_2d"] = json::array({{{"person_id", "p3"}, {"keypoints2D", json::array()}}});
    CHECK_MSSG_ERROR(adapt_annotations(ann2d, identity_mapping()), ErrorCode::MissingCameraMetadata, "p3");

    json unknown = ann;
    unknown["frames"][0]["objects"] = json::array({{{"track_id", "x"}, {"label", "cart"}, {"center", {1, 1, 1}},
                                                     {"half_extents", {0.2, 0.2, 0.2}}}});
    CHECK_MSSG_ERROR(adapt_annotations(unknown, identity_mapping()), ErrorCode::UnmappedLabel, "cart");
}

TEST_CASE("adapter derives lying_on and applies the room transform") {
    // Source frame is in millimetres and rotated a quarter turn: room = (-y, x, z).
    const HumanPose patient = lying_pose({4.0, 4.0, 1.05}, 0.0);
    HumanPose source;
    for (std::size_t i = 0; i < kJointCount; ++i) {
        if (const auto& k = patient.keypoints[i]) source.keypoints[i] = Vec3{k->y * 1000, -k->x * 1000, k->z * 1000};
    }
    json ann = {{"joint_names", coco_joint_names()},
                {"frames", json::array({{{"annotations_3d", json::array({{{"person_id", "pat"}, {"keypoints3D", keypoints_of(source)}}})},
                                         {"objects", json::array({{{"track_id", "table"},
                                                                    {"label", "OR_table"},
                                                                    {"center", {4000, -4000, 450}},
                                                                    {"half_extents", {1000, 350, 450}},
                                                                    {"yaw", -std::numbers::pi / 2}}})}}})}};
    auto m = identity_mapping();
    m.patient_ids = {"pat"};
    m.scale = 0.001;
    m.rotation = {0, -1, 0, 1, 0, 0, 0, 0, 1};
    const auto t = adapt_annotations(ann, m);
    const auto& g = t.frame(0);
    CHECK(g.has_edge("pat", "lying_on", "table"));
    const auto& box = std::get<ObjectPose>(*g.find("table")->pose);
    CHECK(box.center.x == doctest::Approx(4.0));
    CHECK(box.center.y == doctest::Approx(4.0));
    CHECK(box.half_extents.x == doctest::Approx(1.0));
    CHECK(box.yaw == doctest::Approx(0.0));

    const auto mapping = AnnotationMapping::from_json(json{{"joint_map", {{"nose", "nose"}, {"extra", nullptr}}}, {"scale", 2}});
    CHECK(mapping.joint_map.at("extra") == std::nullopt);
    CHECK(testing::caught([] { AnnotationMapping::from_json(json{{"joint_map", json::object()}, {"scale", 0}}); })->code() ==
          ErrorCode::InvalidConfig);
}

TEST_CASE("synthetic generator") {
    const auto script = ProcedureScript::vertebroplasty_demo();
    const auto a = synth_procedure(script, 7);
    const auto b = synth_procedure(script, 7);
    CHECK(a == b);
    CHECK(a.size() == script.total_frames());
    CHECK_FALSE(synth_procedure(script, 8) == a);

    bool scanned = false;
    bool operating = false;
    for (const auto& f : a.frames()) {
        for (const auto& e : f.edges()) {
            scanned = scanned || e.relation == "getting_scanned";
            operating = operating || e.relation == "operating_on_torso";
        }
    }
    CHECK(scanned);
    CHECK(operating);
    CHECK(ProcedureScript::from_json(script.to_json()).to_json() == script.to_json());

    ProcedureScript one;
    one.name = "single";
    one.phases.push_back({"only", 5, {NodeTemplate{"m", NodeClass(ClassId::monitor), NodeKind::real,
                                                    {PoseTemplate::Shape::box, 0.0, {0.2, 0.2, 0.2}, std::nullopt},
                                                    {1, 1, 1}, std::nullopt, {}}},
                          {}});
    const auto t = synth_procedure(one, 1);
    CHECK(t.size() == 5);
    CHECK(t.frame(4).timestamp() == 4.0);

    ProcedureScript empty;
    empty.name = "nothing";
    CHECK_MSSG_ERROR(synth_procedure(empty, 1), ErrorCode::EmptyScript, "nothing");
    one.phases[0].frames = 0;
    CHECK_MSSG_ERROR(synth_procedure(one, 1), ErrorCode::EmptyScript, "only");
}

TEST_CASE("time warps with ground truth") {
    const auto t = three_frame_timeline();
    const auto id = apply_time_warp(t, WarpSpec::identity(3));
    CHECK(id.truth.pairs() == Pairs{{0, 0}, {1, 1}, {2, 2}});
    CHECK(id.timeline.size() == 3);

    WarpSpec twice;
    for (std::size_t i = 0; i < 3; ++i) twice.runs.push_back({i, 2});
    const auto dup = apply_time_warp(t, twice);
    CHECK(dup.timeline.size() == 6);
    CHECK(dup.truth.pairs() == Pairs{{0, 0}, {0, 1}, {1, 2}, {1, 3}, {2, 4}, {2, 5}});
    CHECK_FALSE(check_path(dup.truth, 3, 6).has_value());
    CHECK(dup.timeline.frame(3).nodes() == t.frame(1).nodes());

    WarpSpec dropped = WarpSpec::identity(3);
    dropped.drops = {1};
    const auto d = apply_time_warp(t, dropped);
    CHECK(d.truth.pairs() == Pairs{{0, 0}, {1, 0}, {2, 1}});

    WarpSpec bad = WarpSpec::identity(3);
    bad.drops = {0};
    CHECK_MSSG_ERROR(apply_time_warp(t, bad), ErrorCode::WarpCoverageError, "drop 0");
    bad = WarpSpec::identity(2);
    CHECK(testing::caught([&] { apply_time_warp(t, bad); })->code() == ErrorCode::WarpCoverageError);
    bad = WarpSpec::identity(3);
    bad.runs[1].repeat = 0;
    CHECK(testing::caught([&] { apply_time_warp(t, bad); })->code() == ErrorCode::WarpCoverageError);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto w = apply_time_warp(t, WarpSpec::random(3, seed, 0.3));
        CHECK_FALSE(check_path(w.truth, 3, w.timeline.size()).has_value());
    }
}

}  // TEST_SUITE
