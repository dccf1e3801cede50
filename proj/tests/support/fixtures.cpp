#include "fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mssg/ingest.hpp"

namespace mssg::fixtures {

SceneNode staff(const std::string& id, double x, double y) {
    return {id, ClassId::medical_staff, NodeKind::real, Pose{standing_pose({x, y, 0.0}, 0.0)}, {}};
}

SceneNode patient_at(const std::string& id, double x, double y) {
    return {id, ClassId::patient, NodeKind::real, Pose{standing_pose({x, y, 0.0}, 0.0)}, {}};
}

SceneNode box(const std::string& id, NodeClass cls, double x, double y, double z) {
    return {id, std::move(cls), NodeKind::real, Pose{ObjectPose{{x, y, z}, {0.3, 0.3, 0.3}, 0.0}}, {}};
}

SceneNode virtual_node(const std::string& id, NodeClass cls) { return {id, std::move(cls), NodeKind::virtual_, std::nullopt, {}}; }

SceneGraph six_node_scene() {
    GraphSpec spec;
    spec.nodes.push_back({"table", ClassId::operating_table, NodeKind::real,
                          Pose{ObjectPose{{4.0, 4.0, 0.45}, {1.0, 0.35, 0.45}, 0.0}}, {}});
    spec.nodes.push_back({"patient", ClassId::patient, NodeKind::real, Pose{lying_pose({4.0, 4.0, 1.05}, 0.0)}, {}});
    spec.nodes.push_back({"surgeon", ClassId::medical_staff, NodeKind::real, Pose{standing_pose({4.2, 3.3, 0.0}, 1.5708)}, {}});
    spec.nodes.push_back({"c_arm", ClassId::c_arm, NodeKind::real, Pose{ObjectPose{{4.3, 4.9, 0.9}, {0.4, 0.6, 0.9}, 0.3}},
                          {{"state", "acquiring"}}});
    spec.nodes.push_back(virtual_node("timer", ClassId::timer));
    spec.nodes.push_back(virtual_node("xray_image", ClassId::xray_image));
    spec.edges = {
        {"patient", "lying_on", "table", EdgeKind::semantic},
        {"patient", "getting_scanned", "c_arm", EdgeKind::semantic},
        {"c_arm", "near", "patient", EdgeKind::spatial},
        {"patient", "near", "surgeon", EdgeKind::spatial},
        {"c_arm", "acquisition_displayed_as", "xray_image", EdgeKind::virtual_},
    };
    return build_graph(std::move(spec), 12.0, 0);
}

Timeline three_frame_timeline(const std::string& id) {
    std::vector<SceneGraph> frames;
    frames.push_back(build_graph({{staff("nurse", 1.0, 1.0)}, {}}, 0.0, 0));
    frames.push_back(build_graph({{staff("nurse", 1.0, 1.0), patient_at("patient", 2.0, 2.0)}, {}}, 1.0, 1));
    frames.push_back(build_graph(
        {{staff("nurse", 1.0, 1.0), patient_at("patient", 3.0, 2.0), box("c_arm", ClassId::c_arm, 3.5, 3.0)}, {}}, 2.0, 2));
    return Timeline(id, {{"procedure", "fixture"}}, 8.0, std::move(frames));
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "mssg-tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace mssg::fixtures
