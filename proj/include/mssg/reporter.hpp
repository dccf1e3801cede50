#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mssg/distance.hpp"
#include "mssg/model.hpp"

namespace mssg {

struct FactorChange {
    Factor factor;
    std::string old_value;
    std::string new_value;

    friend bool operator==(const FactorChange&, const FactorChange&) = default;
};

enum class NodeChangeKind { appeared, disappeared, moved };

struct NodeChange {
    NodeChangeKind change = NodeChangeKind::appeared;
    std::string id;
    NodeClass cls;
    NodeKind kind = NodeKind::real;
    /// Displacement in meters, only for `moved`.
    double displacement = 0.0;

    friend bool operator==(const NodeChange&, const NodeChange&) = default;
};

struct EdgeChange {
    bool appeared = true;
    SceneEdge edge;

    friend bool operator==(const EdgeChange&, const EdgeChange&) = default;
};

/// Semantic difference between two frames. The acquisition times are carried
/// as context and are not themselves a change.
struct ChangeSet {
    double from_time = 0.0;
    double to_time = 0.0;
    std::vector<FactorChange> factor_changes;
    std::vector<NodeChange> node_changes;
    std::vector<EdgeChange> edge_changes;

    bool empty() const { return factor_changes.empty() && node_changes.empty() && edge_changes.empty(); }
    std::size_t size() const { return factor_changes.size() + node_changes.size() + edge_changes.size(); }
};

struct DiffOptions {
    /// Report nodes present in both frames whose pose center moved more than
    /// this many meters. Unset disables movement statements.
    std::optional<double> movement_threshold;
};

/// Factor changes in canonical factor order (acquisition time excluded, and
/// patient position suppressed when patient presence itself changed), then
/// node changes by id, then edge changes by (source, relation, target).
ChangeSet diff_graphs(const SceneGraph& g_old, const SceneGraph& g_new, const DiffOptions& options = {});

/// Sentence templates keyed by change type. Placeholders: {old} {new} {id}
/// {class} {kind} {rel} {src} {dst} {distance}.
class TemplateTable {
public:
    /// The built-in wording; identical to data/report_templates.json.
    static TemplateTable defaults();
    /// Parses a JSON object of key -> template. Unknown keys throw InvalidConfig;
    /// missing keys fall back to the defaults.
    static TemplateTable from_json(const std::string& text);
    static TemplateTable load(const std::string& path);

    const std::string& get(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

/// One sentence per change, in ChangeSet order.
std::vector<std::string> render_report(const ChangeSet& changes, const TemplateTable& templates = TemplateTable::defaults());

}  // namespace mssg
