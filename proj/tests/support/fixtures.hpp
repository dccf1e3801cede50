#pragma once

#include <string>

#include "mssg/model.hpp"

namespace mssg::fixtures {

/// Patient on the table under an acquiring C-arm, one surgeon, a virtual timer
/// and X-ray image. Edges are written out by hand, not derived.
SceneGraph six_node_scene();

/// Three frames with distinct, jitter-free content (1 s apart).
Timeline three_frame_timeline(const std::string& id = "three");

/// Helpers for building small graphs by hand.
SceneNode staff(const std::string& id, double x, double y);
SceneNode patient_at(const std::string& id, double x, double y);
SceneNode box(const std::string& id, NodeClass cls, double x, double y, double z = 0.5);
SceneNode virtual_node(const std::string& id, NodeClass cls);

std::string read_text(const std::string& path);
std::string temp_path(const std::string& name);

}  // namespace mssg::fixtures
