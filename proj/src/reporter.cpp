#include "mssg/reporter.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

namespace mssg {

namespace {

const std::map<std::string, std::string>& default_templates() {
    static const std::map<std::string, std::string> table = {
        {"presence_appeared", "{subject} entered the scene."},
        {"presence_disappeared", "{subject} left the scene."},
        {"staff_count", "Number of medical staff changed from {old} to {new}."},
        {"surgery_site", "Surgery site changed from {old} to {new}."},
        {"patient_position", "Patient moved from {old} to {new}."},
        {"node_appeared", "{class} '{id}' appeared."},
        {"node_disappeared", "{class} '{id}' disappeared."},
        {"node_moved", "{class} '{id}' moved {distance} m."},
        {"edge_appeared", "Relation '{rel}' between {src} and {dst} started."},
        {"edge_disappeared", "Relation '{rel}' between {src} and {dst} ended."},
    };
    return table;
}

std::string_view presence_subject(Factor f) {
    switch (f) {
        case Factor::patient: return "Patient";
        case Factor::medical_staff: return "Medical staff";
        case Factor::monitor: return "Monitor";
        case Factor::c_arm: return "C-arm";
        case Factor::patient_monitoring: return "Patient monitoring";
        case Factor::ct: return "CT";
        case Factor::endoscopic_visualization: return "Endoscopic visualization";
        default: return "";
    }
}

bool is_presence(Factor f) { return static_cast<std::size_t>(f) <= static_cast<std::size_t>(Factor::endoscopic_visualization); }

std::string format_position(const std::optional<Vec3>& p) {
    if (!p) return "absent";
    return fmt::format("({:.3f}, {:.3f}, {:.3f})", p->x, p->y, p->z);
}

std::string factor_value(const FeatureVector& fv, Factor f) {
    if (is_presence(f)) return fv.presence(f) ? "1" : "0";
    switch (f) {
        case Factor::staff_count: return std::to_string(fv.staff_count);
        case Factor::surgery_site: return std::string(to_string(fv.surgery_site));
        case Factor::patient_position: return format_position(fv.patient_position);
        default: return fmt::format("{}", fv.acquisition_time);
    }
}

std::string substitute(const std::string& pattern, const std::map<std::string_view, std::string>& values) {
    std::string out;
    for (std::size_t k = 0; k < pattern.size();) {
        if (pattern[k] == '{') {
            const auto close = pattern.find('}', k);
            if (close != std::string::npos) {
                const auto it = values.find(std::string_view(pattern).substr(k + 1, close - k - 1));
                if (it != values.end()) {
                    out += it->second;
                    k = close + 1;
                    continue;
                }
            }
        }
        out += pattern[k++];
    }
    return out;
}

}  // namespace

ChangeSet diff_graphs(const SceneGraph& g_old, const SceneGraph& g_new, const DiffOptions& options) {
    ChangeSet cs;
    cs.from_time = g_old.timestamp();
    cs.to_time = g_new.timestamp();

    const FeatureVector a = extract_features(g_old);
    const FeatureVector b = extract_features(g_new);
    for (const Factor f : kAllFactors) {
        if (f == Factor::acquisition_time) continue;
        if (f == Factor::patient_position && a.has_patient != b.has_patient) continue;
        std::string old_value = factor_value(a, f);
        std::string new_value = factor_value(b, f);
        const bool differs = f == Factor::patient_position ? a.patient_position != b.patient_position
                                                            : old_value != new_value;
        if (differs) cs.factor_changes.push_back({f, std::move(old_value), std::move(new_value)});
    }

    // Both node lists are sorted by id; merge them.
    const auto& na = g_old.nodes();
    const auto& nb = g_new.nodes();
    std::size_t i = 0, j = 0;
    while (i < na.size() || j < nb.size()) {
        if (j == nb.size() || (i < na.size() && na[i].id < nb[j].id)) {
            cs.node_changes.push_back({NodeChangeKind::disappeared, na[i].id, na[i].cls, na[i].kind});
            ++i;
        } else if (i == na.size() || nb[j].id < na[i].id) {
            cs.node_changes.push_back({NodeChangeKind::appeared, nb[j].id, nb[j].cls, nb[j].kind});
            ++j;
        } else {
            if (options.movement_threshold && na[i].pose && nb[j].pose) {
                const double moved = distance(pose_center(*na[i].pose), pose_center(*nb[j].pose));
                if (moved > *options.movement_threshold) {
                    cs.node_changes.push_back({NodeChangeKind::moved, nb[j].id, nb[j].cls, nb[j].kind, moved});
                }
            }
            ++i;
            ++j;
        }
    }

    const auto key = [](const SceneEdge& e) { return std::tie(e.source, e.relation, e.target); };
    const auto& ea = g_old.edges();
    const auto& eb = g_new.edges();
    i = 0;
    j = 0;
    while (i < ea.size() || j < eb.size()) {
        if (j == eb.size() || (i < ea.size() && key(ea[i]) < key(eb[j]))) {
            cs.edge_changes.push_back({false, ea[i++]});
        } else if (i == ea.size() || key(eb[j]) < key(ea[i])) {
            cs.edge_changes.push_back({true, eb[j++]});
        } else {
            if (ea[i].kind != eb[j].kind) {
                cs.edge_changes.push_back({false, ea[i]});
                cs.edge_changes.push_back({true, eb[j]});
            }
            ++i;
            ++j;
        }
    }
    return cs;
}

TemplateTable TemplateTable::defaults() {
    TemplateTable t;
    t.entries_ = default_templates();
    return t;
}

TemplateTable TemplateTable::from_json(const std::string& text) {
    TemplateTable t = defaults();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "templates", e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "templates", "expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!t.entries_.count(key)) throw Error(ErrorCode::InvalidConfig, key, "unknown template key");
        if (!value.is_string()) throw Error(ErrorCode::InvalidConfig, key, "template must be a string");
        t.entries_[key] = value.get<std::string>();
    }
    return t;
}

TemplateTable TemplateTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidConfig, path, "cannot open template file");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

const std::string& TemplateTable::get(const std::string& key) const { return entries_.at(key); }

std::vector<std::string> render_report(const ChangeSet& changes, const TemplateTable& templates) {
    std::vector<std::string> out;
    for (const auto& fc : changes.factor_changes) {
        if (is_presence(fc.factor)) {
            const bool entered = fc.new_value == "1";
            out.push_back(substitute(templates.get(entered ? "presence_appeared" : "presence_disappeared"),
                                     {{"subject", std::string(presence_subject(fc.factor))},
                                      {"old", fc.old_value},
                                      {"new", fc.new_value}}));
        } else {
            out.push_back(substitute(templates.get(std::string(factor_key(fc.factor))),
                                     {{"old", fc.old_value}, {"new", fc.new_value}}));
        }
    }
    for (const auto& nc : changes.node_changes) {
        const char* key = nc.change == NodeChangeKind::appeared      ? "node_appeared"
                          : nc.change == NodeChangeKind::disappeared ? "node_disappeared"
                                                                     : "node_moved";
        out.push_back(substitute(templates.get(key), {{"class", class_label(nc.cls)},
                                                      {"id", nc.id},
                                                      {"kind", std::string(to_string(nc.kind))},
                                                      {"distance", fmt::format("{:.2f}", nc.displacement)}}));
    }
    for (const auto& ec : changes.edge_changes) {
        out.push_back(substitute(templates.get(ec.appeared ? "edge_appeared" : "edge_disappeared"),
                                 {{"rel", ec.edge.relation},
                                  {"src", ec.edge.source},
                                  {"dst", ec.edge.target},
                                  {"kind", std::string(to_string(ec.edge.kind))}}));
    }
    return out;
}

}  // namespace mssg
