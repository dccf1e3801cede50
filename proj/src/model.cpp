#include "mssg/model.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace mssg {

namespace {

constexpr std::array<std::string_view, 14> kClassNames = {
    "patient",        "medical_staff", "c_arm",      "ct",         "monitor",
    "patient_monitoring", "endoscopic_visualization", "operating_table", "transporter_bed",
    "timer",          "xray_image",    "ecg_signal", "ct_display", "anesthetic_data",
};

constexpr std::array<std::string_view, 14> kClassLabels = {
    "Patient",        "Medical staff", "C-arm",      "CT",         "Monitor",
    "Patient monitoring", "Endoscopic visualization", "Operating table", "Transporter bed",
    "Timer",          "X-ray image",   "ECG signal", "CT display", "Anesthetic data",
};

void check_node(const SceneNode& node) {
    if (node.id.empty()) throw Error(ErrorCode::InvalidNode, "<empty id>", "node id must be nonempty");
    if (node.cls.id() == ClassId::other && node.cls.tag().empty()) {
        throw Error(ErrorCode::InvalidNode, node.id, "other class requires a nonempty tag");
    }
    for (const auto& [key, value] : node.attributes) {
        if (!is_snake_token(key)) {
            throw Error(ErrorCode::InvalidNode, node.id, "attribute key '" + key + "' is not snake_case");
        }
    }
    if (node.pose) validate_pose(*node.pose, node.id);
}

std::string triple_name(const SceneEdge& e) {
    return "(" + e.source + ", " + e.relation + ", " + e.target + ")";
}

}  // namespace

// --- NodeClass --------------------------------------------------------------

NodeClass::NodeClass(ClassId id) : id_(id), tag_() {
    if (id == ClassId::other) tag_ = "unknown";
}

NodeClass NodeClass::other(std::string tag) {
    NodeClass c;
    c.id_ = ClassId::other;
    c.tag_ = std::move(tag);
    return c;
}

NodeClass NodeClass::parse(std::string_view text) {
    for (std::size_t i = 0; i < kClassNames.size(); ++i) {
        if (kClassNames[i] == text) return NodeClass(static_cast<ClassId>(i));
    }
    constexpr std::string_view prefix = "other:";
    if (text.starts_with(prefix) && text.size() > prefix.size()) {
        return other(std::string(text.substr(prefix.size())));
    }
    throw Error(ErrorCode::InvalidNode, std::string(text), "unknown node class");
}

std::string NodeClass::name() const {
    if (id_ == ClassId::other) return "other:" + tag_;
    return std::string(class_name(id_));
}

std::string_view class_name(ClassId id) {
    const auto i = static_cast<std::size_t>(id);
    return i < kClassNames.size() ? kClassNames[i] : "other";
}

std::string class_label(const NodeClass& cls) {
    const auto i = static_cast<std::size_t>(cls.id());
    if (i < kClassLabels.size()) return std::string(kClassLabels[i]);
    return cls.tag();
}

// --- Poses ------------------------------------------------------------------

std::optional<std::size_t> joint_index(std::string_view name) {
    const auto it = std::find(kJointNames.begin(), kJointNames.end(), name);
    if (it == kJointNames.end()) return std::nullopt;
    return static_cast<std::size_t>(it - kJointNames.begin());
}

std::vector<Vec3> HumanPose::present() const {
    std::vector<Vec3> out;
    for (const auto& k : keypoints) {
        if (k) out.push_back(*k);
    }
    return out;
}

std::vector<Vec3> HumanPose::present(std::span<const std::size_t> joints) const {
    std::vector<Vec3> out;
    for (const std::size_t j : joints) {
        if (j < kJointCount && keypoints[j]) out.push_back(*keypoints[j]);
    }
    return out;
}

Vec3 HumanPose::centroid() const {
    const auto pts = present();
    return mean_point(pts);
}

Vec3 pose_center(const Pose& pose) {
    if (const auto* human = std::get_if<HumanPose>(&pose)) return human->centroid();
    return std::get<ObjectPose>(pose).center;
}

void validate_pose(const Pose& pose, const std::string& node_id) {
    if (const auto* human = std::get_if<HumanPose>(&pose)) {
        bool any = false;
        for (std::size_t j = 0; j < kJointCount; ++j) {
            const auto& k = human->keypoints[j];
            if (!k) continue;
            any = true;
            if (!k->finite()) {
                throw Error(ErrorCode::InvalidPose, node_id, "joint '" + std::string(kJointNames[j]) + "' is not finite");
            }
        }
        if (!any) throw Error(ErrorCode::InvalidPose, node_id, "human pose has no present joints");
        return;
    }
    const auto& obj = std::get<ObjectPose>(pose);
    if (!obj.center.finite() || !obj.half_extents.finite() || !std::isfinite(obj.yaw)) {
        throw Error(ErrorCode::InvalidPose, node_id, "object pose is not finite");
    }
    if (obj.half_extents.x <= 0.0 || obj.half_extents.y <= 0.0 || obj.half_extents.z <= 0.0) {
        throw Error(ErrorCode::InvalidPose, node_id, "half extents must be strictly positive");
    }
}

// --- Kinds ------------------------------------------------------------------

std::string_view to_string(NodeKind kind) { return kind == NodeKind::real ? "real" : "virtual"; }

std::string_view to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::spatial: return "spatial";
        case EdgeKind::semantic: return "semantic";
        case EdgeKind::virtual_: return "virtual";
    }
    return "spatial";
}

NodeKind parse_node_kind(std::string_view text) {
    if (text == "real") return NodeKind::real;
    if (text == "virtual") return NodeKind::virtual_;
    throw Error(ErrorCode::InvalidNode, std::string(text), "unknown node kind");
}

EdgeKind parse_edge_kind(std::string_view text) {
    if (text == "spatial") return EdgeKind::spatial;
    if (text == "semantic") return EdgeKind::semantic;
    if (text == "virtual") return EdgeKind::virtual_;
    throw Error(ErrorCode::InvalidEdge, std::string(text), "unknown edge kind");
}

bool is_snake_token(std::string_view text) {
    if (text.empty() || text.front() < 'a' || text.front() > 'z') return false;
    return std::all_of(text.begin(), text.end(),
                       [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; });
}

std::optional<std::string> SceneNode::attribute(const std::string& key) const {
    const auto it = attributes.find(key);
    if (it == attributes.end()) return std::nullopt;
    return it->second;
}

// --- SceneGraph -------------------------------------------------------------

const SceneNode* SceneGraph::find(std::string_view id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                                     [](const SceneNode& n, std::string_view key) { return n.id < key; });
    if (it == nodes_.end() || it->id != id) return nullptr;
    return &*it;
}

bool SceneGraph::has_edge(std::string_view source, std::string_view relation, std::string_view target) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const SceneEdge& e) {
        return e.source == source && e.relation == relation && e.target == target;
    });
}

SceneGraph SceneGraph::restamped(double timestamp, std::size_t frame_index) const {
    return build_graph(spec(), timestamp, frame_index);
}

SceneGraph build_graph(GraphSpec spec, double timestamp, std::size_t frame_index) {
    if (!std::isfinite(timestamp) || timestamp < 0.0) {
        throw Error(ErrorCode::NegativeTimestamp, std::to_string(timestamp));
    }

    std::set<std::string> ids;
    for (const auto& node : spec.nodes) {
        check_node(node);
        if (!ids.insert(node.id).second) throw Error(ErrorCode::DuplicateId, node.id);
    }

    std::set<std::tuple<std::string, std::string, std::string>> triples;
    for (const auto& edge : spec.edges) {
        if (!is_snake_token(edge.relation)) {
            throw Error(ErrorCode::InvalidEdge, triple_name(edge), "relation must be a snake_case token");
        }
        if (!ids.count(edge.source)) throw Error(ErrorCode::DanglingEdgeEndpoint, edge.source);
        if (!ids.count(edge.target)) throw Error(ErrorCode::DanglingEdgeEndpoint, edge.target);
        if (edge.source == edge.target) throw Error(ErrorCode::SelfLoopEdge, edge.source);
        if (!triples.emplace(edge.source, edge.relation, edge.target).second) {
            throw Error(ErrorCode::DuplicateEdge, triple_name(edge));
        }
    }

    std::sort(spec.nodes.begin(), spec.nodes.end(),
              [](const SceneNode& a, const SceneNode& b) { return a.id < b.id; });
    std::sort(spec.edges.begin(), spec.edges.end());

    SceneGraph g;
    g.timestamp_ = timestamp;
    g.frame_index_ = frame_index;
    g.nodes_ = std::move(spec.nodes);
    g.edges_ = std::move(spec.edges);

    for (const auto& edge : g.edges_) {
        if (edge.kind != EdgeKind::virtual_) continue;
        if (g.find(edge.source)->kind != NodeKind::virtual_ && g.find(edge.target)->kind != NodeKind::virtual_) {
            throw Error(ErrorCode::KindViolation, triple_name(edge), "virtual edge needs a virtual endpoint");
        }
    }
    return g;
}

std::optional<Error> validate(const SceneGraph& graph) {
    try {
        const auto rebuilt = build_graph(graph.spec(), graph.timestamp(), graph.frame_index());
        if (!(rebuilt == graph)) return Error(ErrorCode::InvalidTimeline, "graph", "not in canonical order");
    } catch (const Error& e) {
        return e;
    }
    return std::nullopt;
}

SceneGraph merge_virtual(const SceneGraph& graph, const VirtualAdditions& additions) {
    for (const auto& node : additions.nodes) {
        if (node.kind != NodeKind::virtual_) {
            throw Error(ErrorCode::KindViolation, node.id, "merged nodes must be virtual");
        }
        if (graph.find(node.id) != nullptr) throw Error(ErrorCode::DuplicateId, node.id);
    }
    for (const auto& edge : additions.edges) {
        if (edge.kind != EdgeKind::virtual_) {
            throw Error(ErrorCode::KindViolation, triple_name(edge), "merged edges must be virtual");
        }
    }
    GraphSpec spec = graph.spec();
    spec.nodes.insert(spec.nodes.end(), additions.nodes.begin(), additions.nodes.end());
    spec.edges.insert(spec.edges.end(), additions.edges.begin(), additions.edges.end());
    return build_graph(std::move(spec), graph.timestamp(), graph.frame_index());
}

std::vector<SceneNode> query_nodes(const SceneGraph& graph, const NodeFilter& filter) {
    std::vector<SceneNode> out;
    for (const auto& node : graph.nodes()) {
        if (filter.cls && node.cls != *filter.cls) continue;
        if (filter.kind && node.kind != *filter.kind) continue;
        out.push_back(node);
    }
    return out;
}

// --- Timeline ---------------------------------------------------------------

Timeline::Timeline(std::string id, std::map<std::string, std::string> metadata, double room_extent,
                   std::vector<SceneGraph> frames)
    : id_(std::move(id)), metadata_(std::move(metadata)), room_extent_(room_extent), frames_(std::move(frames)) {
    if (id_.empty()) throw Error(ErrorCode::InvalidTimeline, "<empty id>", "timeline id must be nonempty");
    if (!(room_extent_ > 0.0) || !std::isfinite(room_extent_)) {
        throw Error(ErrorCode::InvalidTimeline, id_, "room extent must be positive");
    }
    for (std::size_t i = 0; i < frames_.size(); ++i) {
        if (frames_[i].frame_index() != i) {
            throw Error(ErrorCode::InvalidTimeline, "frame " + std::to_string(i), "frame_index does not match position");
        }
        if (i > 0 && !(frames_[i].timestamp() > frames_[i - 1].timestamp())) {
            throw Error(ErrorCode::InvalidTimeline, "frame " + std::to_string(i), "timestamps must strictly increase");
        }
    }
}

const SceneGraph& Timeline::frame(std::size_t index) const {
    if (index >= frames_.size()) {
        throw Error(ErrorCode::IndexOutOfRange, std::to_string(index),
                    "timeline '" + id_ + "' has " + std::to_string(frames_.size()) + " frames");
    }
    return frames_[index];
}

}  // namespace mssg
