#include "mssg/io.hpp"

#include <fstream>
#include <sstream>

namespace mssg::io {

namespace {

json vec(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j, const std::string& element) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number()) {
        throw Error(ErrorCode::MalformedRecord, element, "expected [x, y, z]");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename T>
T field(const json& j, const char* key, const std::string& element) {
    if (!j.is_object() || !j.contains(key)) {
        throw Error(ErrorCode::MalformedRecord, element, std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::MalformedRecord, element, std::string("field '") + key + "' has the wrong type");
    }
}

json kind_name(EdgeKind k) { return std::string(to_string(k)); }

}  // namespace

json to_json(const Pose& pose) {
    if (const auto* human = std::get_if<HumanPose>(&pose)) {
        json kps = json::array();
        for (const auto& k : human->keypoints) kps.push_back(k ? vec(*k) : json(nullptr));
        return {{"type", "human"}, {"keypoints", kps}};
    }
    const auto& obj = std::get<ObjectPose>(pose);
    return {{"type", "object"}, {"center", vec(obj.center)}, {"half_extents", vec(obj.half_extents)}, {"yaw", obj.yaw}};
}

Pose pose_from_json(const json& j, const std::string& node_id) {
    const auto type = field<std::string>(j, "type", node_id);
    if (type == "human") {
        const auto& kps = j.contains("keypoints") ? j.at("keypoints") : json();
        if (!kps.is_array() || kps.size() != kJointCount) {
            throw Error(ErrorCode::InvalidPose, node_id,
                        "human pose must list exactly " + std::to_string(kJointCount) + " keypoints");
        }
        HumanPose h;
        for (std::size_t i = 0; i < kJointCount; ++i) {
            if (!kps[i].is_null()) h.keypoints[i] = vec_from(kps[i], node_id);
        }
        return h;
    }
    if (type == "object") {
        ObjectPose o;
        o.center = vec_from(j.value("center", json()), node_id);
        o.half_extents = vec_from(j.value("half_extents", json()), node_id);
        o.yaw = field<double>(j, "yaw", node_id);
        return o;
    }
    throw Error(ErrorCode::InvalidPose, node_id, "unknown pose type '" + type + "'");
}

json to_json(const SceneNode& node) {
    json j = {{"id", node.id}, {"class", node.cls.name()}, {"kind", std::string(to_string(node.kind))}};
    if (node.pose) j["pose"] = to_json(*node.pose);
    if (!node.attributes.empty()) j["attributes"] = node.attributes;
    return j;
}

SceneNode node_from_json(const json& j) {
    SceneNode n;
    n.id = field<std::string>(j, "id", "node");
    n.cls = NodeClass::parse(field<std::string>(j, "class", n.id));
    n.kind = parse_node_kind(field<std::string>(j, "kind", n.id));
    if (j.contains("pose") && !j.at("pose").is_null()) n.pose = pose_from_json(j.at("pose"), n.id);
    if (j.contains("attributes")) n.attributes = field<std::map<std::string, std::string>>(j, "attributes", n.id);
    return n;
}

json to_json(const SceneEdge& edge) {
    return {{"source", edge.source}, {"relation", edge.relation}, {"target", edge.target}, {"kind", kind_name(edge.kind)}};
}

SceneEdge edge_from_json(const json& j) {
    SceneEdge e;
    e.source = field<std::string>(j, "source", "edge");
    e.relation = field<std::string>(j, "relation", "edge");
    e.target = field<std::string>(j, "target", "edge");
    e.kind = parse_edge_kind(field<std::string>(j, "kind", "edge"));
    return e;
}

json to_json(const SceneGraph& graph) {
    json nodes = json::array();
    for (const auto& n : graph.nodes()) nodes.push_back(to_json(n));
    json edges = json::array();
    for (const auto& e : graph.edges()) edges.push_back(to_json(e));
    return {{"frame_index", graph.frame_index()}, {"timestamp", graph.timestamp()}, {"nodes", nodes}, {"edges", edges}};
}

SceneGraph graph_from_json(const json& j) {
    GraphSpec spec;
    const auto nodes = field<json>(j, "nodes", "frame");
    const auto edges = field<json>(j, "edges", "frame");
    if (!nodes.is_array() || !edges.is_array()) throw Error(ErrorCode::MalformedRecord, "frame", "nodes/edges must be arrays");
    for (const auto& n : nodes) spec.nodes.push_back(node_from_json(n));
    for (const auto& e : edges) spec.edges.push_back(edge_from_json(e));
    return build_graph(std::move(spec), field<double>(j, "timestamp", "frame"),
                       field<std::size_t>(j, "frame_index", "frame"));
}

json to_json(const FeatureVector& fv) {
    json j;
    for (const Factor f : kAllFactors) {
        const std::string key(factor_key(f));
        switch (f) {
            case Factor::staff_count: j[key] = fv.staff_count; break;
            case Factor::surgery_site: j[key] = std::string(to_string(fv.surgery_site)); break;
            case Factor::patient_position: j[key] = fv.patient_position ? vec(*fv.patient_position) : json(nullptr); break;
            case Factor::acquisition_time: j[key] = fv.acquisition_time; break;
            default: j[key] = fv.presence(f); break;
        }
    }
    return j;
}

json deltas_to_json(const FactorDeltas& deltas) {
    json j = json::object();
    for (const Factor f : kAllFactors) j[std::string(factor_key(f))] = deltas[static_cast<std::size_t>(f)];
    return j;
}

json to_json(const WeightProfile& w) {
    json weights = json::object();
    for (const Factor f : kAllFactors) weights[std::string(factor_key(f))] = w[f];
    return {{"weights", weights}, {"room_extent", w.room_extent}, {"time_scale", w.time_scale}};
}

WeightProfile weights_from_json(const json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (auto p = WeightProfile::preset(name)) return *p;
        throw Error(ErrorCode::InvalidWeights, name, "unknown preset");
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidWeights, "weights", "expected a preset name or an object");
    WeightProfile w;
    try {
        if (j.contains("preset")) w = weights_from_json(j.at("preset"));
        if (j.contains("weights")) {
            const auto& ws = j.at("weights");
            if (!ws.is_object()) throw Error(ErrorCode::InvalidWeights, "weights", "expected an object");
            for (const auto& [key, value] : ws.items()) {
                const auto f = parse_factor(key);
                if (!f) throw Error(ErrorCode::InvalidWeights, key, "unknown factor");
                if (!value.is_number()) throw Error(ErrorCode::InvalidWeights, key, "weight must be a number");
                w[*f] = value.get<double>();
            }
        }
        if (j.contains("room_extent")) w.room_extent = j.at("room_extent").get<double>();
        if (j.contains("time_scale")) w.time_scale = j.at("time_scale").get<double>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidWeights, "weights", e.what());
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "preset" && key != "weights" && key != "room_extent" && key != "time_scale") {
            throw Error(ErrorCode::InvalidWeights, key, "unknown field");
        }
    }
    w.validate();
    return w;
}

WeightProfile load_weights(const std::string& preset_or_path) {
    if (auto p = WeightProfile::preset(preset_or_path)) return *p;
    return weights_from_json(parse_json(read_file(preset_or_path), preset_or_path));
}

json to_json(const RelationConfig& cfg) {
    const auto names = [](const std::vector<std::size_t>& joints) {
        json a = json::array();
        for (const auto j : joints) a.push_back(std::string(kJointNames[j]));
        return a;
    };
    return {{"tau_near", cfg.tau_near},
            {"tau_touch", cfg.tau_touch},
            {"lying_band", cfg.lying_band},
            {"operating_margin", cfg.operating_margin},
            {"direction_deadband", cfg.direction_deadband},
            {"torso_joints", names(cfg.torso_joints)},
            {"head_joints", names(cfg.head_joints)},
            {"hand_joints", names(cfg.hand_joints)},
            {"right_axis", vec(cfg.right_axis)},
            {"up_axis", vec(cfg.up_axis)}};
}

RelationConfig relation_config_from_json(const json& j) {
    RelationConfig cfg;
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "relations", "expected an object");
    const auto joints = [](const json& a, const std::string& key) {
        std::vector<std::size_t> out;
        if (!a.is_array()) throw Error(ErrorCode::InvalidConfig, key, "expected a list of joint names");
        for (const auto& name : a) {
            const auto idx = name.is_string() ? joint_index(name.get<std::string>()) : std::nullopt;
            if (!idx) throw Error(ErrorCode::InvalidConfig, key, "unknown joint " + name.dump());
            out.push_back(*idx);
        }
        return out;
    };
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "tau_near") cfg.tau_near = value.get<double>();
            else if (key == "tau_touch") cfg.tau_touch = value.get<double>();
            else if (key == "lying_band") cfg.lying_band = value.get<double>();
            else if (key == "operating_margin") cfg.operating_margin = value.get<double>();
            else if (key == "direction_deadband") cfg.direction_deadband = value.get<double>();
            else if (key == "torso_joints") cfg.torso_joints = joints(value, key);
            else if (key == "head_joints") cfg.head_joints = joints(value, key);
            else if (key == "hand_joints") cfg.hand_joints = joints(value, key);
            else if (key == "right_axis") cfg.right_axis = vec_from(value, key);
            else if (key == "up_axis") cfg.up_axis = vec_from(value, key);
            else throw Error(ErrorCode::InvalidConfig, key, "unknown relation setting");
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidConfig, key, e.what());
        } catch (const Error& e) {
            if (e.code() == ErrorCode::MalformedRecord) throw Error(ErrorCode::InvalidConfig, key, e.detail());
            throw;
        }
    }
    cfg.validate();
    return cfg;
}

json alignment_to_json(const AlignmentPath& path, const std::string& timeline_a, const std::string& timeline_b,
                       std::size_t rows, std::size_t cols, const WeightProfile& w) {
    json steps = json::array();
    for (const auto& s : path.steps) steps.push_back(json::array({s.i, s.j, s.cost}));
    return {{"format", "mssg-alignment"},
            {"version", 1},
            {"timeline_a", timeline_a},
            {"timeline_b", timeline_b},
            {"rows", rows},
            {"cols", cols},
            {"weights", to_json(w)},
            {"steps", steps},
            {"path_length", path.steps.size()},
            {"total_cost", path.total_cost}};
}

AlignmentPath alignment_from_json(const json& j) {
    AlignmentPath p;
    const auto steps = field<json>(j, "steps", "alignment");
    for (const auto& s : steps) {
        if (!s.is_array() || s.size() != 3) throw Error(ErrorCode::MalformedRecord, "alignment", "step must be [i, j, cost]");
        p.steps.push_back({s[0].get<std::size_t>(), s[1].get<std::size_t>(), s[2].get<double>()});
    }
    p.total_cost = field<double>(j, "total_cost", "alignment");
    return p;
}

json to_json(const ChangeSet& changes) {
    json factors = json::array();
    for (const auto& fc : changes.factor_changes) {
        factors.push_back({{"factor", std::string(factor_key(fc.factor))}, {"old", fc.old_value}, {"new", fc.new_value}});
    }
    json nodes = json::array();
    for (const auto& nc : changes.node_changes) {
        const char* change = nc.change == NodeChangeKind::appeared      ? "appeared"
                             : nc.change == NodeChangeKind::disappeared ? "disappeared"
                                                                        : "moved";
        json n = {{"change", change}, {"id", nc.id}, {"class", nc.cls.name()}, {"kind", std::string(to_string(nc.kind))}};
        if (nc.change == NodeChangeKind::moved) n["displacement"] = nc.displacement;
        nodes.push_back(n);
    }
    json edges = json::array();
    for (const auto& ec : changes.edge_changes) {
        json e = to_json(ec.edge);
        e["change"] = ec.appeared ? "appeared" : "disappeared";
        edges.push_back(e);
    }
    return {{"from_time", changes.from_time},
            {"to_time", changes.to_time},
            {"factor_changes", factors},
            {"node_changes", nodes},
            {"edge_changes", edges}};
}

json to_json(const BevLayout& layout) {
    json placements = json::array();
    for (const auto& p : layout.placements) {
        json fp;
        if (p.footprint.shape == Footprint::Shape::point) {
            fp = {{"shape", "point"}, {"radius", p.footprint.radius}};
        } else {
            fp = {{"shape", "rectangle"},
                  {"half_extents", json::array({p.footprint.half_extents.x, p.footprint.half_extents.y})},
                  {"yaw", p.footprint.yaw}};
        }
        placements.push_back({{"id", p.id},
                              {"class", p.cls.name()},
                              {"kind", std::string(to_string(p.kind))},
                              {"position", json::array({p.position.x, p.position.y})},
                              {"footprint", fp}});
    }
    json anchors = json::array();
    for (const auto& a : layout.anchors) anchors.push_back({{"id", a.id}, {"class", a.cls.name()}, {"slot", a.slot}});
    json edges = json::array();
    for (const auto& e : layout.edges) edges.push_back(to_json(e));
    return {{"placements", placements},
            {"anchors", anchors},
            {"edges", edges},
            {"bounds", {{"min", json::array({layout.bounds.min.x, layout.bounds.min.y})},
                        {"max", json::array({layout.bounds.max.x, layout.bounds.max.y})}}}};
}

json parse_json(std::string_view text, const std::string& element) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, element, e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, path, "cannot write file");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoError, path, "write failed");
}

}  // namespace mssg::io
