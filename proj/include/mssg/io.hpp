#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "mssg/bev.hpp"
#include "mssg/distance.hpp"
#include "mssg/dtw.hpp"
#include "mssg/model.hpp"
#include "mssg/relations.hpp"
#include "mssg/reporter.hpp"

/// JSON shapes shared by the timeline document, the CLI result files and the
/// HTTP API. Parsing functions throw mssg::Error; callers add line context.
namespace mssg::io {

using nlohmann::json;

json to_json(const Pose& pose);
Pose pose_from_json(const json& j, const std::string& node_id);

json to_json(const SceneNode& node);
SceneNode node_from_json(const json& j);

json to_json(const SceneEdge& edge);
SceneEdge edge_from_json(const json& j);

/// {"frame_index", "timestamp", "nodes", "edges"}
json to_json(const SceneGraph& graph);
SceneGraph graph_from_json(const json& j);

json to_json(const FeatureVector& fv);
json deltas_to_json(const FactorDeltas& deltas);

/// {"weights": {factor: w, ...}, "room_extent": L, "time_scale": T}
json to_json(const WeightProfile& w);
/// Accepts a preset name string, or an object with optional "preset" base,
/// partial "weights" overrides, "room_extent" and "time_scale".
/// Throws InvalidWeights on unknown factors, unknown presets or negative values.
WeightProfile weights_from_json(const json& j);
/// A preset name or the path to a weights JSON file.
WeightProfile load_weights(const std::string& preset_or_path);

json to_json(const RelationConfig& cfg);
RelationConfig relation_config_from_json(const json& j);

/// Alignment result file: steps as [i, j, step_cost] triples plus the total.
json alignment_to_json(const AlignmentPath& path, const std::string& timeline_a, const std::string& timeline_b,
                       std::size_t rows, std::size_t cols, const WeightProfile& w);
AlignmentPath alignment_from_json(const json& j);

json to_json(const ChangeSet& changes);
json to_json(const BevLayout& layout);

/// Parses text into JSON, throwing MalformedRecord(`element`) on syntax errors.
json parse_json(std::string_view text, const std::string& element);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace mssg::io
