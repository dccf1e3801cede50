#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mssg/dtw.hpp"
#include "mssg/model.hpp"
#include "mssg/relations.hpp"

namespace mssg {

// ---------------------------------------------------------------------------
// Timeline document (line-delimited JSON records)
// ---------------------------------------------------------------------------

inline constexpr int kTimelineSchemaVersion = 1;

/// Header record on line 1, then one frame record per line. Errors carry the
/// 1-based line number: SchemaVersionMismatch, MalformedRecord, and every
/// build_graph error.
Timeline parse_timeline(std::string_view document);
std::string write_timeline(const Timeline& timeline);

Timeline load_timeline(const std::string& path);
void save_timeline(const Timeline& timeline, const std::string& path);

// ---------------------------------------------------------------------------
// Annotation adapter (3D multi-view pose annotations)
// ---------------------------------------------------------------------------

struct AnnotationMapping {
    /// Source joint name -> artifact joint name; nullopt drops the joint.
    std::map<std::string, std::optional<std::string>> joint_map;
    /// Source object label -> node class name.
    std::map<std::string, std::string> label_map;
    /// Person track ids that are the patient rather than medical staff.
    std::set<std::string> patient_ids;
    /// Applied as room = rotation * (scale * p) + translation.
    double scale = 1.0;
    std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};
    Vec3 translation;
    /// Used when frames carry no timestamp.
    double frame_interval = 1.0;
    double room_extent = 8.0;
    std::string timeline_id = "annotations";

    static AnnotationMapping from_json(const nlohmann::json& j);
};

/// One SceneGraph per annotated frame with relations derived by the rule
/// engine. Throws UnmappedJoint, UnmappedLabel, MissingCameraMetadata (2D-only
/// person entries), MalformedRecord.
Timeline adapt_annotations(const nlohmann::json& annotations, const AnnotationMapping& mapping,
                           const RelationConfig& relations = {});

// ---------------------------------------------------------------------------
// Synthetic procedure generator
// ---------------------------------------------------------------------------

struct PoseTemplate {
    enum class Shape { none, standing, lying, box };
    Shape shape = Shape::none;
    /// Facing direction (standing) or head direction (lying), radians about +z.
    double yaw = 0.0;
    /// Box half extents.
    Vec3 half_extents{0.5, 0.5, 0.5};
    /// Standing humans: both wrists placed around this point.
    std::optional<Vec3> hands;
};

struct NodeTemplate {
    std::string id;
    NodeClass cls;
    NodeKind kind = NodeKind::real;
    PoseTemplate pose;
    /// Floor point (standing), body center (lying) or box center.
    Vec3 start;
    /// Linear motion target over the phase; unset = static.
    std::optional<Vec3> end;
    std::map<std::string, std::string> attributes;
};

struct PhaseScript {
    std::string name;
    std::size_t frames = 0;
    std::vector<NodeTemplate> nodes;
    std::vector<SceneEdge> virtual_edges;
};

struct ProcedureScript {
    std::string name;
    double room_extent = 8.0;
    double frame_interval = 1.0;
    /// Standard deviation of per-frame positional jitter (m).
    double jitter = 0.01;
    std::vector<PhaseScript> phases;

    std::size_t total_frames() const;

    /// Patient entry -> positioning -> C-arm acquiring -> operating on torso -> patient exit.
    static ProcedureScript vertebroplasty_demo();
    static ProcedureScript from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Deterministic for a given (script, seed). Throws EmptyScript.
Timeline synth_procedure(const ProcedureScript& script, std::uint64_t seed, const RelationConfig& relations = {});

/// Standing / lying keypoint templates in the artifact joint schema.
HumanPose standing_pose(const Vec3& floor_point, double yaw, const std::optional<Vec3>& hands = std::nullopt);
HumanPose lying_pose(const Vec3& body_center, double yaw);

// ---------------------------------------------------------------------------
// Time warps with ground truth
// ---------------------------------------------------------------------------

struct WarpRun {
    std::size_t source = 0;
    std::size_t repeat = 1;

    friend bool operator==(const WarpRun&, const WarpRun&) = default;
};

/// Monotone mapping from output frames to source frames: each source index in
/// order with a repeat count, minus an optional set of dropped interior frames.
struct WarpSpec {
    std::vector<WarpRun> runs;
    std::set<std::size_t> drops;

    static WarpSpec identity(std::size_t frames);
    /// Repeats drawn from {1, 2, 3} and isolated interior drops with probability `drop_rate`.
    static WarpSpec random(std::size_t frames, std::uint64_t seed, double drop_rate = 0.05);
};

/// Throws WarpCoverageError unless the runs cover 0..m-1 in order with
/// repeat >= 1 and drops exclude the first and last frame.
void validate_warp(const WarpSpec& warp, std::size_t frames);

struct WarpResult {
    Timeline timeline;
    /// (source, warped) correspondences, made continuous by attaching each
    /// dropped source frame to the preceding warped frame. Step costs are 0.
    AlignmentPath truth;
};

WarpResult apply_time_warp(const Timeline& timeline, const WarpSpec& warp);
WarpResult apply_time_warp(const Timeline& timeline, const WarpSpec& warp, const std::string& warped_id);

}  // namespace mssg
