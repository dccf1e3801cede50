#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mssg/error.hpp"
#include "mssg/geometry.hpp"

namespace mssg {

// ---------------------------------------------------------------------------
// Node classes
// ---------------------------------------------------------------------------

enum class ClassId {
    patient,
    medical_staff,
    c_arm,
    ct,
    monitor,
    patient_monitoring,
    endoscopic_visualization,
    operating_table,
    transporter_bed,
    timer,
    xray_image,
    ecg_signal,
    ct_display,
    anesthetic_data,
    other,
};

/// Closed class vocabulary plus an `other:<tag>` escape hatch.
class NodeClass {
public:
    NodeClass() = default;
    NodeClass(ClassId id);  // NOLINT(google-explicit-constructor): vocabulary values convert implicitly
    static NodeClass other(std::string tag);

    /// Accepts the canonical names produced by name(); throws InvalidNode otherwise.
    static NodeClass parse(std::string_view text);

    ClassId id() const noexcept { return id_; }
    const std::string& tag() const noexcept { return tag_; }

    /// "c_arm", "medical_staff", ... or "other:<tag>".
    std::string name() const;

    friend bool operator==(const NodeClass&, const NodeClass&) = default;
    friend auto operator<=>(const NodeClass&, const NodeClass&) = default;

private:
    ClassId id_ = ClassId::other;
    std::string tag_ = "unknown";
};

std::string_view class_name(ClassId id);

/// Human readable label used in reports and SVG titles ("C-arm", "Medical staff").
std::string class_label(const NodeClass& cls);

// ---------------------------------------------------------------------------
// Poses
// ---------------------------------------------------------------------------

/// COCO-17 keypoint naming, fixed artifact-wide.
inline constexpr std::size_t kJointCount = 17;
inline constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "nose",        "left_eye",    "right_eye",      "left_ear",        "right_ear",
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",     "left_wrist",
    "right_wrist", "left_hip",    "right_hip",      "left_knee",       "right_knee",
    "left_ankle",  "right_ankle",
};

/// Index into kJointNames, or nullopt for unknown names.
std::optional<std::size_t> joint_index(std::string_view name);

/// Absent joints stay in the list as nullopt.
struct HumanPose {
    std::array<std::optional<Vec3>, kJointCount> keypoints{};

    std::vector<Vec3> present() const;
    std::vector<Vec3> present(std::span<const std::size_t> joints) const;
    Vec3 centroid() const;

    friend bool operator==(const HumanPose&, const HumanPose&) = default;
};

struct ObjectPose {
    Vec3 center;
    Vec3 half_extents{0.5, 0.5, 0.5};
    double yaw = 0.0;

    OrientedBox box() const { return {center, half_extents, yaw}; }

    friend bool operator==(const ObjectPose&, const ObjectPose&) = default;
};

using Pose = std::variant<HumanPose, ObjectPose>;

/// Human centroid is the mean of present joints; objects use the box center.
Vec3 pose_center(const Pose& pose);

void validate_pose(const Pose& pose, const std::string& node_id);

// ---------------------------------------------------------------------------
// Nodes, edges, graphs
// ---------------------------------------------------------------------------

enum class NodeKind { real, virtual_ };
enum class EdgeKind { spatial, semantic, virtual_ };

std::string_view to_string(NodeKind kind);
std::string_view to_string(EdgeKind kind);
NodeKind parse_node_kind(std::string_view text);
EdgeKind parse_edge_kind(std::string_view text);

/// Lowercase snake-case token: [a-z][a-z0-9_]*.
bool is_snake_token(std::string_view text);

struct SceneNode {
    std::string id;
    NodeClass cls;
    NodeKind kind = NodeKind::real;
    std::optional<Pose> pose;
    std::map<std::string, std::string> attributes;

    std::optional<std::string> attribute(const std::string& key) const;

    friend bool operator==(const SceneNode&, const SceneNode&) = default;
};

struct SceneEdge {
    std::string source;
    std::string relation;
    std::string target;
    EdgeKind kind = EdgeKind::spatial;

    friend bool operator==(const SceneEdge&, const SceneEdge&) = default;
    friend auto operator<=>(const SceneEdge&, const SceneEdge&) = default;
};

/// Raw node/edge descriptions, the input to build_graph.
struct GraphSpec {
    std::vector<SceneNode> nodes;
    std::vector<SceneEdge> edges;
};

/// One timestamped snapshot. Only build_graph can produce one, so every
/// instance satisfies the graph invariants; nodes are kept sorted by id and
/// edges sorted by (source, relation, target).
class SceneGraph {
public:
    double timestamp() const noexcept { return timestamp_; }
    std::size_t frame_index() const noexcept { return frame_index_; }
    const std::vector<SceneNode>& nodes() const noexcept { return nodes_; }
    const std::vector<SceneEdge>& edges() const noexcept { return edges_; }

    const SceneNode* find(std::string_view id) const;
    bool has_edge(std::string_view source, std::string_view relation, std::string_view target) const;

    GraphSpec spec() const { return {nodes_, edges_}; }

    /// Copy stamped with a new time and position (used when re-indexing timelines).
    SceneGraph restamped(double timestamp, std::size_t frame_index) const;

    friend bool operator==(const SceneGraph&, const SceneGraph&) = default;

private:
    friend SceneGraph build_graph(GraphSpec spec, double timestamp, std::size_t frame_index);

    double timestamp_ = 0.0;
    std::size_t frame_index_ = 0;
    std::vector<SceneNode> nodes_;
    std::vector<SceneEdge> edges_;
};

/// Validates and canonicalizes. Throws Error (DuplicateId, DanglingEdgeEndpoint,
/// SelfLoopEdge, DuplicateEdge, NegativeTimestamp, InvalidNode, InvalidPose,
/// InvalidEdge, KindViolation) naming the first offending element.
SceneGraph build_graph(GraphSpec spec, double timestamp, std::size_t frame_index = 0);

/// Standalone invariant check; nullopt when the graph is valid.
std::optional<Error> validate(const SceneGraph& graph);

struct VirtualAdditions {
    std::vector<SceneNode> nodes;
    std::vector<SceneEdge> edges;
};

/// Returns graph ∪ additions. Added nodes must be virtual and added edges must
/// be virtual edges; the input graph is left untouched.
SceneGraph merge_virtual(const SceneGraph& graph, const VirtualAdditions& additions);

struct NodeFilter {
    std::optional<NodeClass> cls;
    std::optional<NodeKind> kind;
};

/// Matching nodes ordered by id.
std::vector<SceneNode> query_nodes(const SceneGraph& graph, const NodeFilter& filter = {});

// ---------------------------------------------------------------------------
// Timelines
// ---------------------------------------------------------------------------

class Timeline {
public:
    /// Throws InvalidTimeline when timestamps are not strictly increasing,
    /// frame indices do not match positions, or room_extent <= 0.
    Timeline(std::string id, std::map<std::string, std::string> metadata, double room_extent,
             std::vector<SceneGraph> frames);

    const std::string& id() const noexcept { return id_; }
    const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }
    double room_extent() const noexcept { return room_extent_; }
    const std::vector<SceneGraph>& frames() const noexcept { return frames_; }
    std::size_t size() const noexcept { return frames_.size(); }
    bool empty() const noexcept { return frames_.empty(); }

    /// Throws IndexOutOfRange.
    const SceneGraph& frame(std::size_t index) const;

    friend bool operator==(const Timeline&, const Timeline&) = default;

private:
    std::string id_;
    std::map<std::string, std::string> metadata_;
    double room_extent_;
    std::vector<SceneGraph> frames_;
};

}  // namespace mssg
