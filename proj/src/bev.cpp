#include "mssg/bev.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

namespace mssg {

namespace {

std::string xml_escape(std::string_view text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

// Fixed precision keeps the output byte-stable.
std::string num(double v) {
    std::string s = fmt::format("{:.2f}", v);
    if (s == "-0.00") s = "0.00";
    return s;
}

void extend(Rect& r, const Vec2& p) {
    r.min.x = std::min(r.min.x, p.x);
    r.min.y = std::min(r.min.y, p.y);
    r.max.x = std::max(r.max.x, p.x);
    r.max.y = std::max(r.max.y, p.y);
}

void read_class_style(const nlohmann::json& j, ClassStyle& s) {
    if (j.contains("fill")) s.fill = j.at("fill").get<std::string>();
    if (j.contains("stroke")) s.stroke = j.at("stroke").get<std::string>();
}

void read_edge_style(const nlohmann::json& j, EdgeStyle& s) {
    if (j.contains("stroke")) s.stroke = j.at("stroke").get<std::string>();
    if (j.contains("dasharray")) s.dasharray = j.at("dasharray").get<std::string>();
}

}  // namespace

BevLayout project_topdown(const SceneGraph& graph, const LayoutConfig& cfg) {
    BevLayout layout;
    layout.bounds = {{-cfg.padding, -cfg.padding}, {cfg.room_extent + cfg.padding, cfg.room_extent + cfg.padding}};

    std::size_t slot = 0;
    for (const auto& node : graph.nodes()) {
        if (!node.pose) {
            if (node.kind == NodeKind::real) throw Error(ErrorCode::MissingPose, node.id);
            layout.anchors.push_back({node.id, node.cls, slot++});
            continue;
        }
        Placement p{node.id, node.cls, node.kind, drop_gravity(pose_center(*node.pose)), {}};
        if (const auto* obj = std::get_if<ObjectPose>(&*node.pose)) {
            p.footprint = {Footprint::Shape::rectangle, 0.0, {obj->half_extents.x, obj->half_extents.y}, obj->yaw};
            for (const auto& c : footprint_corners(p.position, p.footprint.half_extents, obj->yaw)) {
                extend(layout.bounds, c);
            }
        } else {
            p.footprint = {Footprint::Shape::point, cfg.human_radius, {}, 0.0};
            extend(layout.bounds, p.position - Vec2{cfg.human_radius, cfg.human_radius});
            extend(layout.bounds, p.position + Vec2{cfg.human_radius, cfg.human_radius});
        }
        layout.placements.push_back(std::move(p));
    }
    layout.edges = graph.edges();
    return layout;
}

StyleConfig StyleConfig::defaults() {
    StyleConfig s;
    s.classes = {
        {"patient", {"#ffcc80", "#e65100"}},
        {"medical_staff", {"#81c784", "#1b5e20"}},
        {"c_arm", {"#90caf9", "#0d47a1"}},
        {"ct", {"#9fa8da", "#1a237e"}},
        {"monitor", {"#b0bec5", "#263238"}},
        {"patient_monitoring", {"#f48fb1", "#880e4f"}},
        {"endoscopic_visualization", {"#ce93d8", "#4a148c"}},
        {"operating_table", {"#e0e0e0", "#424242"}},
        {"transporter_bed", {"#d7ccc8", "#3e2723"}},
        {"timer", {"#fff59d", "#f57f17"}},
        {"xray_image", {"#b3e5fc", "#01579b"}},
        {"ecg_signal", {"#ffab91", "#bf360c"}},
        {"ct_display", {"#c5cae9", "#283593"}},
        {"anesthetic_data", {"#c8e6c9", "#2e7d32"}},
    };
    return s;
}

StyleConfig StyleConfig::from_json(const std::string& text) {
    StyleConfig s = defaults();
    try {
        const auto doc = nlohmann::json::parse(text);
        if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "style", "expected a JSON object");
        if (doc.contains("scale")) s.scale = doc.at("scale").get<double>();
        if (doc.contains("margin_px")) s.margin_px = doc.at("margin_px").get<double>();
        if (doc.contains("anchor_width_px")) s.anchor_width_px = doc.at("anchor_width_px").get<double>();
        if (doc.contains("anchor_height_px")) s.anchor_height_px = doc.at("anchor_height_px").get<double>();
        if (doc.contains("background")) s.background = doc.at("background").get<std::string>();
        if (doc.contains("bounds_stroke")) s.bounds_stroke = doc.at("bounds_stroke").get<std::string>();
        if (doc.contains("fallback")) read_class_style(doc.at("fallback"), s.fallback);
        if (doc.contains("classes")) {
            for (const auto& [name, value] : doc.at("classes").items()) read_class_style(value, s.classes[name]);
        }
        if (doc.contains("edges")) {
            const auto& e = doc.at("edges");
            if (e.contains("spatial")) read_edge_style(e.at("spatial"), s.spatial);
            if (e.contains("semantic")) read_edge_style(e.at("semantic"), s.semantic);
            if (e.contains("virtual")) read_edge_style(e.at("virtual"), s.virtual_edge);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "style", e.what());
    }
    if (!(s.scale > 0.0)) throw Error(ErrorCode::InvalidConfig, "scale", "must be > 0");
    return s;
}

StyleConfig StyleConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidConfig, path, "cannot open style file");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

const ClassStyle& StyleConfig::style_for(const NodeClass& cls) const {
    const auto it = classes.find(cls.name());
    return it == classes.end() ? fallback : it->second;
}

std::string render_svg(const BevLayout& layout, const StyleConfig& style) {
    const double m = style.margin_px;
    const double floor_w = (layout.bounds.max.x - layout.bounds.min.x) * style.scale;
    const double floor_h = (layout.bounds.max.y - layout.bounds.min.y) * style.scale;
    const double anchor_x = m + floor_w + m;
    const double anchor_step = style.anchor_height_px + 8.0;
    const double anchors_h = static_cast<double>(layout.anchors.size()) * anchor_step;
    const double width = layout.anchors.empty() ? floor_w + 2 * m : anchor_x + style.anchor_width_px + m;
    const double height = std::max(floor_h, anchors_h) + 2 * m;

    const auto to_px = [&](const Vec2& p) {
        return Vec2{m + (p.x - layout.bounds.min.x) * style.scale, m + (layout.bounds.max.y - p.y) * style.scale};
    };
    const auto anchor_center = [&](std::size_t slot) {
        return Vec2{anchor_x + style.anchor_width_px / 2, m + static_cast<double>(slot) * anchor_step +
                                                              style.anchor_height_px / 2};
    };

    // Screen position of every node for edge drawing.
    std::map<std::string, Vec2> screen;
    for (const auto& p : layout.placements) screen[p.id] = to_px(p.position);
    for (const auto& a : layout.anchors) screen[a.id] = anchor_center(a.slot);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
        num(width), num(height));
    out += fmt::format("  <rect class=\"background\" x=\"0.00\" y=\"0.00\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                       num(width), num(height), style.background);
    out += fmt::format(
        "  <rect class=\"bounds\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{}\"/>\n",
        num(m), num(m), num(floor_w), num(floor_h), style.bounds_stroke);

    if (!layout.edges.empty()) {
        out += "  <g class=\"edges\">\n";
        for (const auto& e : layout.edges) {
            const EdgeStyle& es = e.kind == EdgeKind::spatial    ? style.spatial
                                  : e.kind == EdgeKind::semantic ? style.semantic
                                                                 : style.virtual_edge;
            const Vec2 a = screen.at(e.source);
            const Vec2 b = screen.at(e.target);
            out += fmt::format("    <line class=\"edge {}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"",
                               to_string(e.kind), num(a.x), num(a.y), num(b.x), num(b.y), es.stroke);
            if (!es.dasharray.empty()) out += fmt::format(" stroke-dasharray=\"{}\"", es.dasharray);
            out += fmt::format("><title>{} {} {}</title></line>\n", xml_escape(e.source), xml_escape(e.relation),
                               xml_escape(e.target));
        }
        out += "  </g>\n";
    }

    if (!layout.placements.empty()) {
        out += "  <g class=\"placements\">\n";
        for (const auto& p : layout.placements) {
            const ClassStyle& cs = style.style_for(p.cls);
            const std::string title = fmt::format("<title>{} ({})</title>", xml_escape(p.id), xml_escape(p.cls.name()));
            const std::string dash = p.kind == NodeKind::virtual_ ? " stroke-dasharray=\"2 3\"" : "";
            if (p.footprint.shape == Footprint::Shape::point) {
                const Vec2 c = to_px(p.position);
                out += fmt::format(
                    "    <circle class=\"node\" data-id=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" stroke=\"{}\"{}>{}</circle>\n",
                    xml_escape(p.id), num(c.x), num(c.y), num(p.footprint.radius * style.scale), cs.fill, cs.stroke,
                    dash, title);
            } else {
                std::string points;
                for (const auto& corner : footprint_corners(p.position, p.footprint.half_extents, p.footprint.yaw)) {
                    const Vec2 c = to_px(corner);
                    if (!points.empty()) points += ' ';
                    points += num(c.x) + "," + num(c.y);
                }
                out += fmt::format(
                    "    <polygon class=\"node\" data-id=\"{}\" points=\"{}\" fill=\"{}\" stroke=\"{}\"{}>{}</polygon>\n",
                    xml_escape(p.id), points, cs.fill, cs.stroke, dash, title);
            }
            const Vec2 c = to_px(p.position);
            out += fmt::format("    <text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
                               num(c.x), num(c.y + 3.0), xml_escape(p.id));
        }
        out += "  </g>\n";
    }

    if (!layout.anchors.empty()) {
        out += "  <g class=\"anchors\">\n";
        for (const auto& a : layout.anchors) {
            const ClassStyle& cs = style.style_for(a.cls);
            const double y = m + static_cast<double>(a.slot) * anchor_step;
            out += fmt::format(
                "    <rect class=\"node anchor\" data-id=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" "
                "stroke=\"{}\" stroke-dasharray=\"2 3\"><title>{} ({})</title></rect>\n",
                xml_escape(a.id), num(anchor_x), num(y), num(style.anchor_width_px), num(style.anchor_height_px), cs.fill,
                cs.stroke, xml_escape(a.id), xml_escape(a.cls.name()));
            const Vec2 c = anchor_center(a.slot);
            out += fmt::format("    <text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
                               num(c.x), num(c.y + 3.0), xml_escape(a.id));
        }
        out += "  </g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace mssg
