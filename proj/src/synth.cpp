#include <cmath>
#include <numbers>
#include <random>

#include "mssg/ingest.hpp"

namespace mssg {

using nlohmann::json;

namespace {

// Body-frame offsets (forward, left, up) for a standing person, in meters.
struct Offset {
    std::string_view joint;
    double fwd, left, up;
};

constexpr std::array<Offset, kJointCount> kStanding = {{
    {"nose", 0.10, 0.00, 1.62},          {"left_eye", 0.08, 0.03, 1.66},     {"right_eye", 0.08, -0.03, 1.66},
    {"left_ear", 0.00, 0.08, 1.63},      {"right_ear", 0.00, -0.08, 1.63},   {"left_shoulder", 0.00, 0.20, 1.42},
    {"right_shoulder", 0.00, -0.20, 1.42}, {"left_elbow", 0.02, 0.24, 1.12}, {"right_elbow", 0.02, -0.24, 1.12},
    {"left_wrist", 0.05, 0.25, 0.85},    {"right_wrist", 0.05, -0.25, 0.85}, {"left_hip", 0.00, 0.12, 0.95},
    {"right_hip", 0.00, -0.12, 0.95},    {"left_knee", 0.02, 0.12, 0.50},    {"right_knee", 0.02, -0.12, 0.50},
    {"left_ankle", 0.00, 0.12, 0.08},    {"right_ankle", 0.00, -0.12, 0.08},
}};

// (along head axis, left, up) relative to the body center for a supine person.
constexpr std::array<Offset, kJointCount> kLying = {{
    {"nose", 0.80, 0.00, 0.10},          {"left_eye", 0.78, 0.03, 0.12},     {"right_eye", 0.78, -0.03, 0.12},
    {"left_ear", 0.75, 0.08, 0.02},      {"right_ear", 0.75, -0.08, 0.02},   {"left_shoulder", 0.55, 0.20, 0.00},
    {"right_shoulder", 0.55, -0.20, 0.00}, {"left_elbow", 0.30, 0.25, 0.00}, {"right_elbow", 0.30, -0.25, 0.00},
    {"left_wrist", 0.05, 0.25, 0.00},    {"right_wrist", 0.05, -0.25, 0.00}, {"left_hip", 0.00, 0.12, 0.00},
    {"right_hip", 0.00, -0.12, 0.00},    {"left_knee", -0.40, 0.10, 0.00},   {"right_knee", -0.40, -0.10, 0.00},
    {"left_ankle", -0.80, 0.10, 0.00},   {"right_ankle", -0.80, -0.10, 0.00},
}};

HumanPose place(const std::array<Offset, kJointCount>& table, const Vec3& origin, double yaw) {
    const Vec3 fwd{std::cos(yaw), std::sin(yaw), 0.0};
    const Vec3 left{-std::sin(yaw), std::cos(yaw), 0.0};
    HumanPose pose;
    for (const auto& o : table) {
        pose.keypoints[*joint_index(o.joint)] = origin + fwd * o.fwd + left * o.left + Vec3{0, 0, o.up};
    }
    return pose;
}

// Seeded gaussian sampler with a platform-independent transform.
class Jitter {
public:
    Jitter(std::uint64_t seed, double sigma) : engine_(seed), sigma_(sigma) {}

    double gaussian() {
        if (spare_) {
            const double v = *spare_;
            spare_.reset();
            return v;
        }
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    Vec3 offset() {
        const double x = gaussian() * sigma_;
        const double y = gaussian() * sigma_;
        const double z = gaussian() * sigma_;
        return {x, y, z};
    }

private:
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    std::mt19937_64 engine_;
    double sigma_;
    std::optional<double> spare_;
};

std::string shape_name(PoseTemplate::Shape s) {
    switch (s) {
        case PoseTemplate::Shape::none: return "none";
        case PoseTemplate::Shape::standing: return "standing";
        case PoseTemplate::Shape::lying: return "lying";
        case PoseTemplate::Shape::box: return "box";
    }
    return "none";
}

PoseTemplate::Shape parse_shape(const std::string& s) {
    if (s == "none") return PoseTemplate::Shape::none;
    if (s == "standing") return PoseTemplate::Shape::standing;
    if (s == "lying") return PoseTemplate::Shape::lying;
    if (s == "box") return PoseTemplate::Shape::box;
    throw Error(ErrorCode::InvalidConfig, s, "unknown pose shape");
}

json vec(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
Vec3 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

NodeTemplate staff(std::string id, Vec3 floor, double yaw, std::optional<Vec3> end = std::nullopt,
                   std::optional<Vec3> hands = std::nullopt) {
    NodeTemplate n{std::move(id), ClassId::medical_staff, NodeKind::real, {}, floor, end, {}};
    n.pose.shape = PoseTemplate::Shape::standing;
    n.pose.yaw = yaw;
    n.pose.hands = hands;
    return n;
}

NodeTemplate object(std::string id, NodeClass cls, Vec3 center, Vec3 half, std::optional<Vec3> end = std::nullopt,
                    std::map<std::string, std::string> attributes = {}) {
    NodeTemplate n{std::move(id), std::move(cls), NodeKind::real, {}, center, end, std::move(attributes)};
    n.pose.shape = PoseTemplate::Shape::box;
    n.pose.half_extents = half;
    return n;
}

NodeTemplate patient(Vec3 center, std::optional<Vec3> end = std::nullopt) {
    NodeTemplate n{"patient", ClassId::patient, NodeKind::real, {}, center, end, {}};
    n.pose.shape = PoseTemplate::Shape::lying;
    n.pose.yaw = 0.0;
    return n;
}

NodeTemplate virtual_node(std::string id, NodeClass cls) {
    return {std::move(id), std::move(cls), NodeKind::virtual_, {}, {}, std::nullopt, {}};
}

}  // namespace

HumanPose standing_pose(const Vec3& floor_point, double yaw, const std::optional<Vec3>& hands) {
    HumanPose pose = place(kStanding, floor_point, yaw);
    if (hands) {
        const Vec3 left{-std::sin(yaw), std::cos(yaw), 0.0};
        const auto lw = *joint_index("left_wrist");
        const auto rw = *joint_index("right_wrist");
        pose.keypoints[lw] = *hands + left * 0.05;
        pose.keypoints[rw] = *hands - left * 0.05;
        for (const auto& [shoulder, elbow, wrist] : {std::tuple{"left_shoulder", "left_elbow", lw},
                                                     std::tuple{"right_shoulder", "right_elbow", rw}}) {
            const Vec3 s = *pose.keypoints[*joint_index(shoulder)];
            pose.keypoints[*joint_index(elbow)] = (s + *pose.keypoints[wrist]) * 0.5;
        }
    }
    return pose;
}

HumanPose lying_pose(const Vec3& body_center, double yaw) { return place(kLying, body_center, yaw); }

std::size_t ProcedureScript::total_frames() const {
    std::size_t n = 0;
    for (const auto& p : phases) n += p.frames;
    return n;
}

ProcedureScript ProcedureScript::vertebroplasty_demo() {
    constexpr double pi = std::numbers::pi;
    ProcedureScript s;
    s.name = "vertebroplasty-demo";
    s.room_extent = 8.0;
    s.frame_interval = 1.0;
    s.jitter = 0.01;

    const auto table = object("table", ClassId::operating_table, {4.0, 4.0, 0.45}, {1.0, 0.35, 0.45});
    const auto monitor = object("monitor1", ClassId::monitor, {6.5, 6.5, 1.2}, {0.3, 0.1, 0.25});
    const auto vitals = object("vitals", ClassId::patient_monitoring, {6.0, 2.0, 1.0}, {0.2, 0.2, 0.3});
    const auto timer = virtual_node("timer", ClassId::timer);
    const auto anesthesia = virtual_node("anesthetic_data", ClassId::anesthetic_data);
    const SceneEdge vitals_feed{"vitals", "signal_displayed_as", "anesthetic_data", EdgeKind::virtual_};
    const Vec3 bed_half{0.95, 0.30, 0.35};
    const Vec3 on_bed_start{0.8, 2.9, 0.85};
    const Vec3 on_bed_end{4.0, 2.9, 0.85};
    const Vec3 on_table{4.0, 4.0, 1.05};
    const Vec3 torso{4.275, 4.0, 1.10};

    const auto base = [&]() { return std::vector<NodeTemplate>{table, monitor, vitals, timer, anesthesia}; };

    PhaseScript entry{"patient_entry", 24, base(), {vitals_feed}};
    entry.nodes.push_back(object("transporter", ClassId::transporter_bed, {0.8, 2.9, 0.35}, bed_half,
                                 Vec3{4.0, 2.9, 0.35}));
    entry.nodes.push_back(patient(on_bed_start, on_bed_end));
    entry.nodes.push_back(staff("nurse1", {0.8, 2.2, 0.0}, 0.0, Vec3{4.0, 2.2, 0.0}));
    entry.nodes.push_back(staff("anesthetist", {3.0, 5.3, 0.0}, -pi / 2));

    PhaseScript positioning{"positioning", 24, base(), {vitals_feed}};
    positioning.nodes.push_back(object("transporter", ClassId::transporter_bed, {4.0, 2.9, 0.35}, bed_half));
    positioning.nodes.push_back(patient(on_bed_end, on_table));
    positioning.nodes.push_back(staff("nurse1", {4.0, 2.2, 0.0}, pi / 2));
    positioning.nodes.push_back(staff("anesthetist", {3.0, 5.3, 0.0}, -pi / 2));
    positioning.nodes.push_back(staff("surgeon", {6.0, 5.5, 0.0}, pi, Vec3{4.3, 4.8, 0.0}));

    const auto c_arm = [&](const char* state) {
        return object("c_arm", ClassId::c_arm, {4.3, 4.9, 0.9}, {0.4, 0.3, 0.9}, std::nullopt, {{"state", state}});
    };
    const SceneEdge xray_feed{"c_arm", "acquisition_displayed_as", "xray_image", EdgeKind::virtual_};

    PhaseScript acquiring{"c_arm_acquiring", 24, base(), {vitals_feed, xray_feed}};
    acquiring.nodes.push_back(patient(on_table));
    acquiring.nodes.push_back(c_arm("acquiring"));
    acquiring.nodes.push_back(virtual_node("xray_image", ClassId::xray_image));
    acquiring.nodes.push_back(staff("nurse1", {3.0, 3.0, 0.0}, pi / 2));
    acquiring.nodes.push_back(staff("anesthetist", {3.0, 5.3, 0.0}, -pi / 2));
    acquiring.nodes.push_back(staff("surgeon", {3.3, 4.9, 0.0}, -pi / 2));
    acquiring.nodes.push_back(staff("radiographer", {5.4, 5.7, 0.0}, pi));

    PhaseScript operating{"operating_on_torso", 30, base(), {vitals_feed, xray_feed}};
    operating.nodes.push_back(patient(on_table));
    operating.nodes.push_back(c_arm("on"));
    operating.nodes.push_back(virtual_node("xray_image", ClassId::xray_image));
    operating.nodes.push_back(staff("nurse1", {3.0, 3.0, 0.0}, pi / 2));
    operating.nodes.push_back(staff("anesthetist", {3.0, 5.3, 0.0}, -pi / 2));
    operating.nodes.push_back(staff("surgeon", {4.3, 3.4, 0.0}, pi / 2, std::nullopt, torso));
    operating.nodes.push_back(staff("radiographer", {5.4, 5.7, 0.0}, pi));

    PhaseScript exit{"patient_exit", 24, base(), {vitals_feed}};
    exit.nodes.push_back(object("transporter", ClassId::transporter_bed, {4.0, 2.9, 0.35}, bed_half,
                                Vec3{0.8, 2.9, 0.35}));
    exit.nodes.push_back(patient(on_bed_end, on_bed_start));
    exit.nodes.push_back(staff("nurse1", {4.0, 2.2, 0.0}, pi, Vec3{0.8, 2.2, 0.0}));
    exit.nodes.push_back(staff("anesthetist", {3.0, 5.3, 0.0}, -pi / 2));

    s.phases = {entry, positioning, acquiring, operating, exit};
    return s;
}

Timeline synth_procedure(const ProcedureScript& script, std::uint64_t seed, const RelationConfig& relations) {
    if (script.phases.empty()) throw Error(ErrorCode::EmptyScript, script.name, "script has no phases");
    for (const auto& phase : script.phases) {
        if (phase.frames == 0) throw Error(ErrorCode::EmptyScript, phase.name, "phase duration must be > 0");
    }
    if (!(script.frame_interval > 0.0)) throw Error(ErrorCode::InvalidConfig, "frame_interval", "must be > 0");

    Jitter jitter(seed, script.jitter);
    std::vector<SceneGraph> frames;
    for (const auto& phase : script.phases) {
        for (std::size_t k = 0; k < phase.frames; ++k) {
            const double progress = phase.frames > 1 ? static_cast<double>(k) / static_cast<double>(phase.frames - 1) : 0.0;
            GraphSpec spec;
            for (const auto& tmpl : phase.nodes) {
                const Vec3 origin = tmpl.end ? tmpl.start + (*tmpl.end - tmpl.start) * progress : tmpl.start;
                SceneNode node{tmpl.id, tmpl.cls, tmpl.kind, std::nullopt, tmpl.attributes};
                switch (tmpl.pose.shape) {
                    case PoseTemplate::Shape::none: break;
                    case PoseTemplate::Shape::standing:
                    case PoseTemplate::Shape::lying: {
                        std::optional<Vec3> hands = tmpl.pose.hands;
                        if (hands) *hands = *hands + (origin - tmpl.start);
                        HumanPose pose = tmpl.pose.shape == PoseTemplate::Shape::standing
                                             ? standing_pose(origin, tmpl.pose.yaw, hands)
                                             : lying_pose(origin, tmpl.pose.yaw);
                        for (auto& kp : pose.keypoints) {
                            if (kp) *kp = *kp + jitter.offset();
                        }
                        node.pose = pose;
                        break;
                    }
                    case PoseTemplate::Shape::box:
                        node.pose = ObjectPose{origin + jitter.offset(), tmpl.pose.half_extents, tmpl.pose.yaw};
                        break;
                }
                spec.nodes.push_back(std::move(node));
            }
            spec.edges = phase.virtual_edges;
            const double t = static_cast<double>(frames.size()) * script.frame_interval;
            try {
                frames.push_back(with_derived_relations(build_graph(std::move(spec), t, frames.size()), relations));
            } catch (const Error& e) {
                throw e.with_context("phase '" + phase.name + "'");
            }
        }
    }
    return Timeline(script.name, {{"procedure", script.name}, {"source", "synthetic"}, {"seed", std::to_string(seed)}},
                    script.room_extent, std::move(frames));
}

ProcedureScript ProcedureScript::from_json(const json& j) {
    ProcedureScript s;
    try {
        s.name = j.at("name").get<std::string>();
        s.room_extent = j.value("room_extent", 8.0);
        s.frame_interval = j.value("frame_interval", 1.0);
        s.jitter = j.value("jitter", 0.01);
        for (const auto& pj : j.at("phases")) {
            PhaseScript p;
            p.name = pj.at("name").get<std::string>();
            const auto frames = pj.at("frames").get<long long>();
            p.frames = frames > 0 ? static_cast<std::size_t>(frames) : 0;
            for (const auto& nj : pj.value("nodes", json::array())) {
                NodeTemplate n;
                n.id = nj.at("id").get<std::string>();
                n.cls = NodeClass::parse(nj.at("class").get<std::string>());
                n.kind = parse_node_kind(nj.value("kind", "real"));
                if (nj.contains("pose")) {
                    const auto& pose = nj.at("pose");
                    n.pose.shape = parse_shape(pose.at("shape").get<std::string>());
                    n.pose.yaw = pose.value("yaw", 0.0);
                    if (pose.contains("half_extents")) n.pose.half_extents = vec_from(pose.at("half_extents"));
                    if (pose.contains("hands")) n.pose.hands = vec_from(pose.at("hands"));
                }
                if (nj.contains("start")) n.start = vec_from(nj.at("start"));
                if (nj.contains("end")) n.end = vec_from(nj.at("end"));
                if (nj.contains("attributes")) n.attributes = nj.at("attributes").get<std::map<std::string, std::string>>();
                p.nodes.push_back(std::move(n));
            }
            for (const auto& ej : pj.value("virtual_edges", json::array())) {
                p.virtual_edges.push_back({ej.at("source").get<std::string>(), ej.at("relation").get<std::string>(),
                                           ej.at("target").get<std::string>(), EdgeKind::virtual_});
            }
            s.phases.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "script", e.what());
    }
    return s;
}

json ProcedureScript::to_json() const {
    json phases_j = json::array();
    for (const auto& p : phases) {
        json nodes = json::array();
        for (const auto& n : p.nodes) {
            json nj = {{"id", n.id}, {"class", n.cls.name()}, {"kind", std::string(mssg::to_string(n.kind))}};
            if (n.pose.shape != PoseTemplate::Shape::none) {
                json pose = {{"shape", shape_name(n.pose.shape)}, {"yaw", n.pose.yaw}};
                if (n.pose.shape == PoseTemplate::Shape::box) pose["half_extents"] = vec(n.pose.half_extents);
                if (n.pose.hands) pose["hands"] = vec(*n.pose.hands);
                nj["pose"] = pose;
                nj["start"] = vec(n.start);
            }
            if (n.end) nj["end"] = vec(*n.end);
            if (!n.attributes.empty()) nj["attributes"] = n.attributes;
            nodes.push_back(nj);
        }
        json edges = json::array();
        for (const auto& e : p.virtual_edges) {
            edges.push_back({{"source", e.source}, {"relation", e.relation}, {"target", e.target}});
        }
        phases_j.push_back({{"name", p.name}, {"frames", p.frames}, {"nodes", nodes}, {"virtual_edges", edges}});
    }
    return {{"name", name},
            {"room_extent", room_extent},
            {"frame_interval", frame_interval},
            {"jitter", jitter},
            {"phases", phases_j}};
}

}  // namespace mssg
