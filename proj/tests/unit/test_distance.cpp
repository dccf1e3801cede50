#include <cmath>

#include "doctest.h"
#include "expect.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

#include "mssg/distance.hpp"

using namespace mssg;
using namespace mssg::fixtures;

namespace {

double delta_of(const FactorDeltas& d, Factor f) { return d[static_cast<std::size_t>(f)]; }

SceneNode object_patient(double x, double y) {
    return {"patient", ClassId::patient, NodeKind::real, Pose{ObjectPose{{x, y, 1.0}, {0.9, 0.25, 0.15}, 0.0}}, {}};
}

}  // namespace

TEST_SUITE("distance") {

TEST_CASE("feature extraction counts classes") {
    const auto g = build_graph({{patient_at("p", 1, 1), staff("s1", 2, 2), staff("s2", 3, 3), staff("s3", 4, 4),
                                 box("c_arm", ClassId::c_arm, 2, 3)},
                                {}},
                               3.5);
    const auto fv = extract_features(g);
    CHECK(fv.has_patient);
    CHECK(fv.has_staff);
    CHECK(fv.staff_count == 3);
    CHECK(fv.has_c_arm);
    CHECK_FALSE(fv.has_monitor);
    CHECK_FALSE(fv.has_ct);
    CHECK_FALSE(fv.has_patient_monitoring);
    CHECK_FALSE(fv.has_endoscopic_vis);
    CHECK(fv.surgery_site == SurgerySite::none);
    CHECK(fv.acquisition_time == 3.5);

    const auto empty = extract_features(build_graph({}, 0.0));
    CHECK(empty == FeatureVector{});
}

TEST_CASE("scanning does not alter presence flags") {
    auto ct = box("ct", ClassId::ct, 2, 2);
    ct.attributes["state"] = "acquiring";
    const auto g = build_graph({{ct, patient_at("p", 2.5, 2)}, {{"p", "getting_scanned", "ct", EdgeKind::semantic}}}, 0.0);
    const auto fv = extract_features(g);
    CHECK(fv.has_ct);
    CHECK_FALSE(fv.has_c_arm);
    CHECK(fv.has_patient);
}

TEST_CASE("patient position is the median keypoint or the object center") {
    HumanPose p;
    p.keypoints[0] = Vec3{1, 5, 1};
    p.keypoints[1] = Vec3{2, 7, 0};
    p.keypoints[2] = Vec3{9, 6, 2};
    const auto g = build_graph({{{"p", ClassId::patient, NodeKind::real, Pose{p}, {}}}, {}}, 0.0);
    CHECK(*extract_features(g).patient_position == Vec3{2, 6, 1});

    const auto g2 = build_graph({{object_patient(3, 4)}, {}}, 0.0);
    CHECK(*extract_features(g2).patient_position == Vec3{3, 4, 1});
}

TEST_CASE("multiple patients are rejected") {
    const auto g = build_graph({{patient_at("p1", 1, 1), patient_at("p2", 2, 2)}, {}}, 0.0);
    CHECK_MSSG_ERROR(extract_features(g), ErrorCode::MultiplePatients, "p2");
}

TEST_CASE("factor deltas") {
    const WeightProfile w;
    FeatureVector a;
    CHECK(factor_delta(a, a, w) == FactorDeltas{});

    FeatureVector b = a;
    a.staff_count = 2;
    b.staff_count = 3;
    a.has_staff = b.has_staff = true;
    CHECK(delta_of(factor_delta(a, b, w), Factor::staff_count) == doctest::Approx(1.0 / 3.0));

    FeatureVector pa, pb;
    pa.has_patient = pb.has_patient = true;
    pa.patient_position = Vec3{1, 1, 1};
    pb.patient_position = Vec3{2, 1, 1};
    CHECK(delta_of(factor_delta(pa, pb, w), Factor::patient_position) == doctest::Approx(0.1));
    pb.patient_position = Vec3{40, 1, 1};
    CHECK(delta_of(factor_delta(pa, pb, w), Factor::patient_position) == 1.0);

    FeatureVector none;
    const auto d = factor_delta(pa, none, w);
    CHECK(delta_of(d, Factor::patient) == 1.0);
    CHECK(delta_of(d, Factor::patient_position) == 1.0);
    CHECK(delta_of(factor_delta(none, none, w), Factor::patient_position) == 0.0);

    FeatureVector t1, t2;
    t2.acquisition_time = 1800.0;
    CHECK(delta_of(factor_delta(t1, t2, w), Factor::acquisition_time) == 0.5);
    t2.acquisition_time = 1e6;
    CHECK(delta_of(factor_delta(t1, t2, w), Factor::acquisition_time) == 1.0);
}

TEST_CASE("spec distance examples") {
    const auto g = build_graph({{staff("s1", 1, 1), staff("s2", 2, 1)}, {}}, 0.0);
    CHECK(mssg_distance(g, g, WeightProfile::uniform()) == 0.0);

    const auto with_c_arm = build_graph({{staff("s1", 1, 1), staff("s2", 2, 1), box("c_arm", ClassId::c_arm, 3, 3)}, {}}, 0.0);
    WeightProfile w2;
    w2[Factor::c_arm] = 2.0;
    CHECK(mssg_distance(g, with_c_arm, w2) == 2.0);

    // c_arm presence differs (1) and staff 2 vs 4 (2/4): 1 + 0.5.
    const auto four = build_graph({{staff("s1", 1, 1), staff("s2", 2, 1), staff("s3", 3, 1), staff("s4", 4, 1),
                                    box("c_arm", ClassId::c_arm, 3, 3)},
                                   {}},
                                  0.0);
    CHECK(mssg_distance(g, four, WeightProfile::uniform()) == 1.5);
}

TEST_CASE("weight presets and validation") {
    CHECK(WeightProfile::preset("uniform")->total_weight() == 11.0);
    CHECK((*WeightProfile::preset("sync-default"))[Factor::acquisition_time] == 0.0);
    CHECK_FALSE(WeightProfile::preset("heavy").has_value());
    WeightProfile w;
    w[Factor::ct] = -1.0;
    CHECK_MSSG_ERROR(w.validate(), ErrorCode::InvalidWeights, "ct");
    for (const auto f : kAllFactors) CHECK(parse_factor(factor_key(f)) == f);
}

TEST_CASE("property: metric axioms on random graph pairs") {
    testgen::Rng rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const auto g1 = testgen::random_graph(rng, testgen::uniform(rng, 0, 4000));
        const auto g2 = testgen::chance(rng, 0.5) ? testgen::mutate(rng, g1) : testgen::random_graph(rng, testgen::uniform(rng, 0, 4000));
        WeightProfile w;
        for (auto& x : w.weights) x = testgen::chance(rng, 0.2) ? 0.0 : testgen::uniform(rng, 0.0, 5.0);

        const double d12 = mssg_distance(g1, g2, w);
        CHECK(d12 == mssg_distance(g2, g1, w));
        CHECK(mssg_distance(g1, g1, w) == 0.0);
        CHECK(d12 >= 0.0);
        CHECK(d12 <= w.total_weight());
        for (const double delta : factor_delta(extract_features(g1), extract_features(g2), w)) {
            CHECK(delta >= 0.0);
            CHECK(delta <= 1.0);
        }
        const double alpha = testgen::uniform(rng, 0.01, 10.0);
        const double scaled = mssg_distance(g1, g2, w.scaled(alpha));
        CHECK(std::abs(scaled - alpha * d12) <= 1e-12 * std::max(1.0, std::abs(alpha * d12)));
    }
}

}  // TEST_SUITE
