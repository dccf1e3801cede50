#include <algorithm>

#include "doctest.h"
#include "expect.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

#include "mssg/io.hpp"
#include "mssg/reporter.hpp"

using namespace mssg;
using namespace mssg::fixtures;

namespace {

using Strings = std::vector<std::string>;

// diff(B, A) predicted from diff(A, B).
ChangeSet inverted(const ChangeSet& cs) {
    ChangeSet out;
    out.from_time = cs.to_time;
    out.to_time = cs.from_time;
    for (const auto& f : cs.factor_changes) out.factor_changes.push_back({f.factor, f.new_value, f.old_value});
    for (auto n : cs.node_changes) {
        if (n.change == NodeChangeKind::appeared) n.change = NodeChangeKind::disappeared;
        else if (n.change == NodeChangeKind::disappeared) n.change = NodeChangeKind::appeared;
        out.node_changes.push_back(n);
    }
    for (const auto& e : cs.edge_changes) out.edge_changes.push_back({!e.appeared, e.edge});
    // A kind change is reported as (disappeared, appeared) of the same triple; keep that order.
    std::stable_sort(out.edge_changes.begin(), out.edge_changes.end(), [](const EdgeChange& a, const EdgeChange& b) {
        const auto ka = std::tie(a.edge.source, a.edge.relation, a.edge.target);
        const auto kb = std::tie(b.edge.source, b.edge.relation, b.edge.target);
        if (ka != kb) return ka < kb;
        return !a.appeared && b.appeared;
    });
    return out;
}

bool same_changes(const ChangeSet& a, const ChangeSet& b) {
    if (a.factor_changes != b.factor_changes || a.edge_changes != b.edge_changes) return false;
    if (a.node_changes.size() != b.node_changes.size()) return false;
    for (std::size_t k = 0; k < a.node_changes.size(); ++k) {
        const auto& x = a.node_changes[k];
        const auto& y = b.node_changes[k];
        if (x.change != y.change || x.id != y.id || x.displacement != y.displacement) return false;
        if (x.change != NodeChangeKind::moved && (x.cls != y.cls || x.kind != y.kind)) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("reporter") {

TEST_CASE("identical graphs produce no changes") {
    const auto g = six_node_scene();
    const auto cs = diff_graphs(g, g);
    CHECK(cs.empty());
    CHECK(render_report(cs).empty());
}

TEST_CASE("staff count change") {
    const auto a = build_graph({{staff("s1", 1, 1), staff("s2", 2, 2)}, {}}, 1.0);
    const auto b = build_graph({{staff("s1", 1, 1), staff("s2", 2, 2), staff("s3", 3, 3)}, {}}, 2.0);
    const auto cs = diff_graphs(a, b);
    REQUIRE(cs.factor_changes.size() == 1);
    CHECK(cs.factor_changes[0] == FactorChange{Factor::staff_count, "2", "3"});
    REQUIRE(cs.node_changes.size() == 1);
    CHECK(cs.node_changes[0].change == NodeChangeKind::appeared);
    CHECK(cs.node_changes[0].id == "s3");
    CHECK(render_report(cs) == Strings{"Number of medical staff changed from 2 to 3.", "Medical staff 's3' appeared."});
}

TEST_CASE("patient leaves between t=1 and t=20") {
    const auto a = build_graph({{patient_at("patient", 2, 2), staff("s1", 1, 1)}, {}}, 1.0);
    const auto b = build_graph({{staff("s1", 1, 1)}, {}}, 20.0);
    const auto cs = diff_graphs(a, b);
    REQUIRE(cs.factor_changes.size() == 1);
    CHECK(cs.factor_changes[0] == FactorChange{Factor::patient, "1", "0"});
    REQUIRE(cs.node_changes.size() == 1);
    CHECK(cs.node_changes[0].change == NodeChangeKind::disappeared);
    CHECK(cs.from_time == 1.0);
    CHECK(cs.to_time == 20.0);
    CHECK(render_report(cs) == Strings{"Patient left the scene.", "Patient 'patient' disappeared."});
}

TEST_CASE("C-arm entering the scene") {
    const auto a = build_graph({{staff("s1", 1, 1)}, {}}, 1.0);
    const auto b = build_graph({{staff("s1", 1, 1), box("c_arm", ClassId::c_arm, 3, 3)}, {}}, 2.0);
    const auto report = render_report(diff_graphs(a, b));
    REQUIRE(report.size() == 2);
    CHECK(report[0] == "C-arm entered the scene.");
}

TEST_CASE("edge and movement statements") {
    const auto a = build_graph({{staff("s1", 1, 1), staff("s2", 1.5, 1)}, {{"s1", "near", "s2", EdgeKind::spatial}}}, 0.0);
    const auto b = build_graph({{staff("s1", 1, 1), staff("s2", 4, 1)}, {}}, 1.0);
    CHECK(render_report(diff_graphs(a, b)) == Strings{"Relation 'near' between s1 and s2 ended."});
    CHECK(render_report(diff_graphs(b, a)) == Strings{"Relation 'near' between s1 and s2 started."});
    CHECK(render_report(diff_graphs(a, b, {2.0})) ==
          Strings{"Medical staff 's2' moved 2.50 m.", "Relation 'near' between s1 and s2 ended."});
    CHECK(render_report(diff_graphs(a, b, {3.0})).size() == 1);
}

TEST_CASE("template table") {
    const auto custom = TemplateTable::from_json(R"({"staff_count": "Staff: {old} -> {new}"})");
    CHECK(custom.get("staff_count") == "Staff: {old} -> {new}");
    CHECK(custom.get("edge_appeared") == TemplateTable::defaults().get("edge_appeared"));
    CHECK(testing::caught([] { TemplateTable::from_json(R"({"bogus": "x"})"); })->code() == ErrorCode::InvalidConfig);

    // The shipped data file is the same table as the built-in one.
    CHECK(TemplateTable::load(std::string(MSSG_DATA_DIR) + "/report_templates.json").entries() ==
          TemplateTable::defaults().entries());
}

TEST_CASE("property: identity, inversion, composition and report length") {
    testgen::Rng rng(4242);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = testgen::random_graph(rng, 1.0);
        auto b = testgen::chance(rng, 0.7) ? testgen::mutate(rng, a) : testgen::random_graph(rng, 2.0);
        if (testgen::chance(rng, 0.5)) b = testgen::mutate(rng, b);

        CHECK(diff_graphs(a, a).empty());
        const DiffOptions opts = testgen::chance(rng, 0.5) ? DiffOptions{0.5} : DiffOptions{};
        const auto ab = diff_graphs(a, b, opts);
        const auto ba = diff_graphs(b, a, opts);
        CHECK(same_changes(ba, inverted(ab)));
        CHECK(render_report(ab).size() == ab.size());

        const auto c = testgen::chance(rng, 0.5) ? testgen::mutate(rng, b) : b.restamped(3.0, 0);
        if (ab.empty() && diff_graphs(b, c, opts).empty()) CHECK(diff_graphs(a, c, opts).empty());
    }
}

TEST_CASE("structured export") {
    const auto a = build_graph({{staff("s1", 1, 1)}, {}}, 1.0);
    const auto b = build_graph({{staff("s1", 1, 1), staff("s2", 2, 2)}, {}}, 2.0);
    const auto j = io::to_json(diff_graphs(a, b));
    CHECK(j.at("factor_changes").size() == 1);
    CHECK(j.at("factor_changes")[0].at("factor") == "staff_count");
    CHECK(j.at("node_changes")[0].at("change") == "appeared");
}

}  // TEST_SUITE
