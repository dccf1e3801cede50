#include "mssg/relations.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace mssg {

namespace {

std::vector<std::size_t> joints(std::initializer_list<std::string_view> names) {
    std::vector<std::size_t> out;
    for (const auto n : names) out.push_back(*joint_index(n));
    return out;
}

struct Placed {
    const SceneNode* node;
    const Pose* pose;
    Vec3 center;
};

std::vector<Placed> real_nodes(const SceneGraph& graph) {
    std::vector<Placed> out;
    for (const auto& node : graph.nodes()) {
        if (node.kind != NodeKind::real) continue;
        if (!node.pose) throw Error(ErrorCode::MissingPose, node.id);
        out.push_back({&node, &*node.pose, pose_center(*node.pose)});
    }
    return out;
}

double contact_distance(const Pose& a, const Pose& b) {
    const auto* ha = std::get_if<HumanPose>(&a);
    const auto* hb = std::get_if<HumanPose>(&b);
    double best = std::numeric_limits<double>::infinity();
    if (ha && hb) {
        for (const auto& p : ha->present()) {
            for (const auto& q : hb->present()) best = std::min(best, distance(p, q));
        }
        return best;
    }
    if (ha || hb) {
        const HumanPose& human = ha ? *ha : *hb;
        const OrientedBox box = std::get<ObjectPose>(ha ? b : a).box();
        for (const auto& p : human.present()) best = std::min(best, box.distance_to(p));
        return best;
    }
    return std::get<ObjectPose>(a).box().distance_to(std::get<ObjectPose>(b).box());
}

bool is_scanner(const NodeClass& cls) { return cls.id() == ClassId::c_arm || cls.id() == ClassId::ct; }

}  // namespace

RelationConfig::RelationConfig()
    : torso_joints(joints({"left_shoulder", "right_shoulder", "left_hip", "right_hip"})),
      head_joints(joints({"nose", "left_eye", "right_eye", "left_ear", "right_ear"})),
      hand_joints(joints({"left_wrist", "right_wrist"})) {}

void RelationConfig::validate() const {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidConfig, name, "must be > 0");
    };
    positive(tau_near, "tau_near");
    positive(tau_touch, "tau_touch");
    positive(lying_band, "lying_band");
    positive(operating_margin, "operating_margin");
    positive(direction_deadband, "direction_deadband");
    if (!(tau_touch < tau_near)) throw Error(ErrorCode::InvalidConfig, "tau_touch", "must be < tau_near");
    for (const auto* group : {&torso_joints, &head_joints, &hand_joints}) {
        for (const auto j : *group) {
            if (j >= kJointCount) throw Error(ErrorCode::InvalidConfig, std::to_string(j), "joint index out of range");
        }
    }
    for (const auto j : torso_joints) {
        if (std::find(head_joints.begin(), head_joints.end(), j) != head_joints.end()) {
            throw Error(ErrorCode::InvalidConfig, std::string(kJointNames[j]), "torso and head joints overlap");
        }
    }
    if (torso_joints.empty() || head_joints.empty() || hand_joints.empty()) {
        throw Error(ErrorCode::InvalidConfig, "joints", "joint groups must be nonempty");
    }
    if (!(right_axis.norm() > 0.0) || !(up_axis.norm() > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "reference_axes", "axes must be nonzero");
    }
}

std::vector<SceneEdge> derive_spatial(const SceneGraph& graph, const RelationConfig& cfg) {
    cfg.validate();
    const auto placed = real_nodes(graph);
    const Vec3 right = cfg.right_axis * (1.0 / cfg.right_axis.norm());
    const Vec3 up = cfg.up_axis * (1.0 / cfg.up_axis.norm());

    std::vector<SceneEdge> out;
    // Nodes are sorted by id, so (i < j) is the canonical orientation.
    for (std::size_t i = 0; i < placed.size(); ++i) {
        for (std::size_t j = i + 1; j < placed.size(); ++j) {
            const auto& a = placed[i];
            const auto& b = placed[j];
            const auto edge = [&](const char* relation) {
                out.push_back({a.node->id, relation, b.node->id, EdgeKind::spatial});
            };
            const bool near = distance(a.center, b.center) < cfg.tau_near;
            if (near) edge("near");
            if (contact_distance(*a.pose, *b.pose) < cfg.tau_touch) edge("touching");
            if (!near) continue;

            const Vec3 delta = b.center - a.center;
            const double lateral = delta.dot(right);
            if (lateral > cfg.direction_deadband) edge("left_of");
            else if (lateral < -cfg.direction_deadband) edge("right_of");
            const double vertical = delta.dot(up);
            if (vertical > cfg.direction_deadband) edge("below");
            else if (vertical < -cfg.direction_deadband) edge("above");
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SceneEdge> derive_semantic(const SceneGraph& graph, const RelationConfig& cfg) {
    cfg.validate();
    const auto placed = real_nodes(graph);

    std::vector<SceneEdge> out;
    for (const auto& patient : placed) {
        if (patient.node->cls.id() != ClassId::patient) continue;

        for (const auto& other : placed) {
            if (other.node == patient.node) continue;
            const auto& cls = other.node->cls;

            if (cls.id() == ClassId::operating_table) {
                if (const auto* table = std::get_if<ObjectPose>(other.pose)) {
                    const OrientedBox box = table->box();
                    const double offset = patient.center.z - (table->center.z + table->half_extents.z);
                    if (box.contains_xy(patient.center) && offset >= 0.0 && offset <= cfg.lying_band) {
                        out.push_back({patient.node->id, "lying_on", other.node->id, EdgeKind::semantic});
                    }
                }
            }

            if (is_scanner(cls) && other.node->attribute("state") == "acquiring" &&
                distance(patient.center, other.center) < cfg.tau_near) {
                out.push_back({patient.node->id, "getting_scanned", other.node->id, EdgeKind::semantic});
            }

            if (cls.id() == ClassId::medical_staff) {
                const auto* staff = std::get_if<HumanPose>(other.pose);
                const auto* body = std::get_if<HumanPose>(patient.pose);
                if (!staff || !body) continue;
                const auto hands = staff->present(cfg.hand_joints);
                const double reach = cfg.tau_touch + cfg.operating_margin;
                const auto within = [&](const std::vector<std::size_t>& group) {
                    const auto pts = body->present(group);
                    if (pts.empty()) return false;
                    const Vec3 c = mean_point(pts);
                    return std::any_of(hands.begin(), hands.end(), [&](const Vec3& h) { return distance(h, c) < reach; });
                };
                if (within(cfg.torso_joints)) {
                    out.push_back({other.node->id, "operating_on_torso", patient.node->id, EdgeKind::semantic});
                }
                if (within(cfg.head_joints)) {
                    out.push_back({other.node->id, "operating_on_head", patient.node->id, EdgeKind::semantic});
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SceneGraph with_derived_relations(const SceneGraph& graph, const RelationConfig& cfg) {
    GraphSpec spec = graph.spec();
    std::erase_if(spec.edges, [](const SceneEdge& e) { return e.kind != EdgeKind::virtual_; });
    auto spatial = derive_spatial(graph, cfg);
    auto semantic = derive_semantic(graph, cfg);
    spec.edges.insert(spec.edges.end(), spatial.begin(), spatial.end());
    spec.edges.insert(spec.edges.end(), semantic.begin(), semantic.end());
    return build_graph(std::move(spec), graph.timestamp(), graph.frame_index());
}

std::string_view to_string(SurgerySite site) {
    switch (site) {
        case SurgerySite::none: return "none";
        case SurgerySite::torso: return "torso";
        case SurgerySite::head: return "head";
    }
    return "none";
}

SurgerySite classify_surgery_site(const SceneGraph& graph) {
    bool head = false;
    for (const auto& e : graph.edges()) {
        if (e.relation == "operating_on_torso") return SurgerySite::torso;
        if (e.relation == "operating_on_head") head = true;
    }
    return head ? SurgerySite::head : SurgerySite::none;
}

}  // namespace mssg
