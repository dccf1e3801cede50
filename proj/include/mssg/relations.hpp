#pragma once

#include <cstddef>
#include <vector>

#include "mssg/geometry.hpp"
#include "mssg/model.hpp"

namespace mssg {

/// Thresholds and joint groups for the rule-based relation derivation.
/// All distances are meters.
struct RelationConfig {
    double tau_near = 1.5;
    double tau_touch = 0.10;
    /// Allowed height of the patient centroid above the table top.
    double lying_band = 0.40;
    /// Extra reach added to tau_touch for the operating_on_* rules.
    double operating_margin = 0.15;
    /// Minimum signed offset along an axis before left/right/above/below fires.
    double direction_deadband = 0.25;

    std::vector<std::size_t> torso_joints;
    std::vector<std::size_t> head_joints;
    std::vector<std::size_t> hand_joints;

    /// Room-frame axes used for left/right and above/below.
    Vec3 right_axis{1.0, 0.0, 0.0};
    Vec3 up_axis{0.0, 0.0, 1.0};

    RelationConfig();

    /// Throws InvalidConfig on non-positive thresholds, tau_touch >= tau_near,
    /// overlapping torso/head groups or degenerate axes.
    void validate() const;
};

/// Pairwise spatial relations between real nodes: near, touching and (for
/// pairs that are near) left_of/right_of and above/below. Each unordered pair
/// is emitted once with the smaller id as source. Throws MissingPose.
std::vector<SceneEdge> derive_spatial(const SceneGraph& graph, const RelationConfig& cfg = {});

/// lying_on, getting_scanned, operating_on_torso and operating_on_head.
std::vector<SceneEdge> derive_semantic(const SceneGraph& graph, const RelationConfig& cfg = {});

/// Rebuilds the graph with all spatial and semantic edges replaced by freshly
/// derived ones; virtual edges are kept.
SceneGraph with_derived_relations(const SceneGraph& graph, const RelationConfig& cfg = {});

enum class SurgerySite { none, torso, head };

std::string_view to_string(SurgerySite site);

/// Reads the graph's operating_on_* edges; torso wins when both are present.
SurgerySite classify_surgery_site(const SceneGraph& graph);

}  // namespace mssg
