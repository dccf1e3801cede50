#include <cmath>

#include "mssg/ingest.hpp"

namespace mssg {

using nlohmann::json;

namespace {

struct Transform {
    double scale;
    std::array<double, 9> r;
    Vec3 t;

    Vec3 apply(const Vec3& p) const {
        const Vec3 s = p * scale;
        return {r[0] * s.x + r[1] * s.y + r[2] * s.z + t.x, r[3] * s.x + r[4] * s.y + r[5] * s.z + t.y,
                r[6] * s.x + r[7] * s.y + r[8] * s.z + t.z};
    }
    double apply_yaw(double yaw) const {
        const double dx = std::cos(yaw);
        const double dy = std::sin(yaw);
        return std::atan2(r[3] * dx + r[4] * dy, r[0] * dx + r[1] * dy);
    }
};

Vec3 vec3(const json& j, const std::string& element) {
    if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::MalformedRecord, element, "expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// Source joint index -> artifact joint index (nullopt = dropped).
std::vector<std::optional<std::size_t>> resolve_joints(const std::vector<std::string>& source,
                                                       const AnnotationMapping& mapping) {
    std::vector<std::optional<std::size_t>> out;
    for (const auto& name : source) {
        const auto it = mapping.joint_map.find(name);
        if (it == mapping.joint_map.end()) throw Error(ErrorCode::UnmappedJoint, name, "joint missing from joint_map");
        if (!it->second) {
            out.emplace_back(std::nullopt);
            continue;
        }
        const auto idx = joint_index(*it->second);
        if (!idx) throw Error(ErrorCode::UnmappedJoint, name, "maps to unknown joint '" + *it->second + "'");
        out.emplace_back(idx);
    }
    return out;
}

}  // namespace

AnnotationMapping AnnotationMapping::from_json(const json& j) {
    AnnotationMapping m;
    try {
        for (const auto& [src, dst] : j.at("joint_map").items()) {
            m.joint_map[src] = dst.is_null() ? std::nullopt : std::optional<std::string>(dst.get<std::string>());
        }
        if (j.contains("label_map")) m.label_map = j.at("label_map").get<std::map<std::string, std::string>>();
        if (j.contains("patient_ids")) m.patient_ids = j.at("patient_ids").get<std::set<std::string>>();
        if (j.contains("scale")) m.scale = j.at("scale").get<double>();
        if (j.contains("rotation")) m.rotation = j.at("rotation").get<std::array<double, 9>>();
        if (j.contains("translation")) m.translation = vec3(j.at("translation"), "translation");
        if (j.contains("frame_interval")) m.frame_interval = j.at("frame_interval").get<double>();
        if (j.contains("room_extent")) m.room_extent = j.at("room_extent").get<double>();
        if (j.contains("timeline_id")) m.timeline_id = j.at("timeline_id").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "mapping", e.what());
    }
    if (!(m.scale > 0.0)) throw Error(ErrorCode::InvalidConfig, "scale", "must be > 0");
    if (!(m.frame_interval > 0.0)) throw Error(ErrorCode::InvalidConfig, "frame_interval", "must be > 0");
    return m;
}

Timeline adapt_annotations(const json& annotations, const AnnotationMapping& mapping, const RelationConfig& relations) {
    const Transform xf{mapping.scale, mapping.rotation, mapping.translation};
    std::vector<SceneGraph> frames;
    std::map<std::string, std::string> metadata;
    try {
        const auto source_joints = annotations.at("joint_names").get<std::vector<std::string>>();
        const auto joints = resolve_joints(source_joints, mapping);
        metadata["source"] = annotations.value("dataset", "annotations");
        metadata["procedure"] = annotations.value("procedure", "unknown");

        const auto& frame_list = annotations.at("frames");
        for (std::size_t f = 0; f < frame_list.size(); ++f) {
            const auto& fr = frame_list[f];
            const std::string ctx = "frame " + std::to_string(f);
            GraphSpec spec;
            std::set<std::string> with_3d;

            for (const auto& person : fr.value("annotations_3d", json::array())) {
                const auto pid = person.at("person_id").get<std::string>();
                const auto kps = person.at("keypoints3D").get<std::vector<double>>();
                if (kps.size() != 4 * joints.size()) {
                    throw Error(ErrorCode::MalformedRecord, pid, ctx + ": expected x,y,z,visibility per joint");
                }
                HumanPose pose;
                for (std::size_t k = 0; k < joints.size(); ++k) {
                    if (!joints[k] || kps[4 * k + 3] <= 0.0) continue;
                    pose.keypoints[*joints[k]] = xf.apply({kps[4 * k], kps[4 * k + 1], kps[4 * k + 2]});
                }
                const bool patient = mapping.patient_ids.count(pid) > 0;
                SceneNode node{pid, patient ? NodeClass(ClassId::patient) : NodeClass(ClassId::medical_staff),
                               NodeKind::real, Pose{pose}, {}};
                spec.nodes.push_back(std::move(node));
                with_3d.insert(pid);
            }

            for (const auto& person : fr.value("annotations_2d", json::array())) {
                const auto pid = person.at("person_id").get<std::string>();
                if (!with_3d.count(pid)) {
                    throw Error(ErrorCode::MissingCameraMetadata, pid,
                                ctx + ": 2D-only annotation would need projection; only 3D annotations are accepted");
                }
            }

            for (const auto& obj : fr.value("objects", json::array())) {
                const auto tid = obj.at("track_id").get<std::string>();
                const auto label = obj.at("label").get<std::string>();
                const auto it = mapping.label_map.find(label);
                if (it == mapping.label_map.end()) throw Error(ErrorCode::UnmappedLabel, label, ctx);
                ObjectPose pose;
                pose.center = xf.apply(vec3(obj.at("center"), tid));
                pose.half_extents = vec3(obj.at("half_extents"), tid) * mapping.scale;
                pose.yaw = xf.apply_yaw(obj.value("yaw", 0.0));
                std::map<std::string, std::string> attrs;
                if (obj.contains("attributes")) attrs = obj.at("attributes").get<std::map<std::string, std::string>>();
                spec.nodes.push_back({tid, NodeClass::parse(it->second), NodeKind::real, Pose{pose}, attrs});
            }

            const double t = fr.contains("timestamp") ? fr.at("timestamp").get<double>()
                                                      : static_cast<double>(f) * mapping.frame_interval;
            try {
                frames.push_back(with_derived_relations(build_graph(std::move(spec), t, f), relations));
            } catch (const Error& e) {
                throw e.with_context(ctx);
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, "annotations", e.what());
    }
    try {
        return Timeline(mapping.timeline_id, std::move(metadata), mapping.room_extent, std::move(frames));
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedRecord, e.element(), e.detail());
    }
}

}  // namespace mssg
