#pragma once

#include <map>
#include <string>
#include <vector>

#include "mssg/geometry.hpp"
#include "mssg/model.hpp"

namespace mssg {

struct Footprint {
    enum class Shape { point, rectangle };
    Shape shape = Shape::point;
    /// Drawing radius for point footprints (humans).
    double radius = 0.0;
    /// Rectangle half extents on the floor and rotation about +z.
    Vec2 half_extents;
    double yaw = 0.0;

    friend bool operator==(const Footprint&, const Footprint&) = default;
};

struct Placement {
    std::string id;
    NodeClass cls;
    NodeKind kind = NodeKind::real;
    Vec2 position;
    Footprint footprint;

    friend bool operator==(const Placement&, const Placement&) = default;
};

/// Pose-less virtual nodes are drawn in a margin column beside the floor plan.
struct Anchor {
    std::string id;
    NodeClass cls;
    std::size_t slot = 0;

    friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct Rect {
    Vec2 min;
    Vec2 max;

    bool contains(const Vec2& p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
    friend bool operator==(const Rect&, const Rect&) = default;
};

struct BevLayout {
    std::vector<Placement> placements;  // by id
    std::vector<Anchor> anchors;        // by slot
    std::vector<SceneEdge> edges;
    Rect bounds;

    friend bool operator==(const BevLayout&, const BevLayout&) = default;
};

struct LayoutConfig {
    /// Side of the square room [0, L] x [0, L] shown by default.
    double room_extent = 8.0;
    double padding = 0.5;
    double human_radius = 0.25;
};

/// Orthographic top-down projection (drops z). Throws MissingPose for a real
/// node without a pose.
BevLayout project_topdown(const SceneGraph& graph, const LayoutConfig& cfg = {});

struct ClassStyle {
    std::string fill;
    std::string stroke;

    friend bool operator==(const ClassStyle&, const ClassStyle&) = default;
};

struct EdgeStyle {
    std::string stroke;
    std::string dasharray;  // empty = solid
};

struct StyleConfig {
    /// Pixels per meter.
    double scale = 60.0;
    double margin_px = 20.0;
    double anchor_width_px = 150.0;
    double anchor_height_px = 28.0;
    std::string background = "#ffffff";
    std::string bounds_stroke = "#444444";
    ClassStyle fallback{"#bdbdbd", "#616161"};
    std::map<std::string, ClassStyle> classes;  // keyed by NodeClass::name()
    EdgeStyle spatial{"#607d8b", ""};
    EdgeStyle semantic{"#1565c0", "6 4"};
    EdgeStyle virtual_edge{"#8e24aa", "2 3"};

    /// Built-in palette; matches data/bev_style.json.
    static StyleConfig defaults();
    /// JSON object overriding any of the defaults. Throws InvalidConfig.
    static StyleConfig from_json(const std::string& text);
    static StyleConfig load(const std::string& path);

    const ClassStyle& style_for(const NodeClass& cls) const;
};

/// Deterministic SVG document for the layout.
std::string render_svg(const BevLayout& layout, const StyleConfig& style = StyleConfig::defaults());

}  // namespace mssg
