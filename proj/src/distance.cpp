#include "mssg/distance.hpp"

#include <algorithm>
#include <cmath>

namespace mssg {

namespace {

constexpr std::array<std::string_view, kFactorCount> kKeys = {
    "patient",     "medical_staff", "monitor",      "c_arm",            "patient_monitoring",       "ct",
    "endoscopic_visualization",    "staff_count",  "surgery_site",     "patient_position", "acquisition_time",
};

constexpr std::array<std::string_view, kFactorCount> kLabels = {
    "presence of patient",
    "presence of medical staff",
    "presence of monitors",
    "presence of C-arm",
    "presence of patient monitoring",
    "presence of CT",
    "presence of endoscopic visualization",
    "number of medical staff",
    "surgery site",
    "position of patient",
    "acquisition time",
};

double indicator(bool a, bool b) { return a != b ? 1.0 : 0.0; }

}  // namespace

std::string_view factor_key(Factor f) { return kKeys[static_cast<std::size_t>(f)]; }

std::optional<Factor> parse_factor(std::string_view key) {
    for (std::size_t i = 0; i < kFactorCount; ++i) {
        if (kKeys[i] == key) return static_cast<Factor>(i);
    }
    return std::nullopt;
}

std::string_view factor_label(Factor f) { return kLabels[static_cast<std::size_t>(f)]; }

bool FeatureVector::presence(Factor f) const {
    switch (f) {
        case Factor::patient: return has_patient;
        case Factor::medical_staff: return has_staff;
        case Factor::monitor: return has_monitor;
        case Factor::c_arm: return has_c_arm;
        case Factor::patient_monitoring: return has_patient_monitoring;
        case Factor::ct: return has_ct;
        case Factor::endoscopic_visualization: return has_endoscopic_vis;
        default: return false;
    }
}

double WeightProfile::total_weight() const {
    double sum = 0.0;
    for (const double w : weights) sum += w;
    return sum;
}

WeightProfile WeightProfile::scaled(double alpha) const {
    WeightProfile out = *this;
    for (double& w : out.weights) w *= alpha;
    return out;
}

void WeightProfile::validate() const {
    for (std::size_t i = 0; i < kFactorCount; ++i) {
        if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
            throw Error(ErrorCode::InvalidWeights, std::string(kKeys[i]), "weight must be finite and >= 0");
        }
    }
    if (!(room_extent > 0.0) || !std::isfinite(room_extent)) {
        throw Error(ErrorCode::InvalidWeights, "room_extent", "must be > 0");
    }
    if (!(time_scale > 0.0) || !std::isfinite(time_scale)) {
        throw Error(ErrorCode::InvalidWeights, "time_scale", "must be > 0");
    }
}

WeightProfile WeightProfile::uniform() { return {}; }

WeightProfile WeightProfile::sync_default() {
    WeightProfile w;
    w[Factor::acquisition_time] = 0.0;
    return w;
}

std::optional<WeightProfile> WeightProfile::preset(std::string_view name) {
    if (name == "uniform") return uniform();
    if (name == "sync-default") return sync_default();
    return std::nullopt;
}

FeatureVector extract_features(const SceneGraph& graph) {
    FeatureVector fv;
    const SceneNode* patient = nullptr;
    for (const auto& node : graph.nodes()) {
        switch (node.cls.id()) {
            case ClassId::patient:
                if (patient) throw Error(ErrorCode::MultiplePatients, node.id, "second patient after '" + patient->id + "'");
                patient = &node;
                fv.has_patient = true;
                break;
            case ClassId::medical_staff: ++fv.staff_count; break;
            case ClassId::monitor: fv.has_monitor = true; break;
            case ClassId::c_arm: fv.has_c_arm = true; break;
            case ClassId::patient_monitoring: fv.has_patient_monitoring = true; break;
            case ClassId::ct: fv.has_ct = true; break;
            case ClassId::endoscopic_visualization: fv.has_endoscopic_vis = true; break;
            default: break;
        }
    }
    fv.has_staff = fv.staff_count > 0;
    fv.surgery_site = classify_surgery_site(graph);
    if (patient && patient->pose) {
        if (const auto* human = std::get_if<HumanPose>(&*patient->pose)) {
            const auto pts = human->present();
            fv.patient_position = median_point(pts);
        } else {
            fv.patient_position = std::get<ObjectPose>(*patient->pose).center;
        }
    }
    fv.acquisition_time = graph.timestamp();
    return fv;
}

FactorDeltas factor_delta(const FeatureVector& a, const FeatureVector& b, const WeightProfile& w) {
    FactorDeltas d{};
    for (const Factor f : {Factor::patient, Factor::medical_staff, Factor::monitor, Factor::c_arm,
                           Factor::patient_monitoring, Factor::ct, Factor::endoscopic_visualization}) {
        d[static_cast<std::size_t>(f)] = indicator(a.presence(f), b.presence(f));
    }

    const double na = static_cast<double>(a.staff_count);
    const double nb = static_cast<double>(b.staff_count);
    d[static_cast<std::size_t>(Factor::staff_count)] = std::abs(na - nb) / std::max({na, nb, 1.0});

    d[static_cast<std::size_t>(Factor::surgery_site)] = a.surgery_site == b.surgery_site ? 0.0 : 1.0;

    // Reads only the position feature, so each delta depends on its own factor alone.
    double position = 0.0;
    if (a.patient_position.has_value() != b.patient_position.has_value()) {
        position = 1.0;
    } else if (a.patient_position && b.patient_position) {
        position = std::min(1.0, distance(*a.patient_position, *b.patient_position) / w.room_extent);
    }
    d[static_cast<std::size_t>(Factor::patient_position)] = position;

    d[static_cast<std::size_t>(Factor::acquisition_time)] =
        std::min(1.0, std::abs(a.acquisition_time - b.acquisition_time) / w.time_scale);
    return d;
}

double weighted_sum(const FactorDeltas& deltas, const WeightProfile& w) {
    double sum = 0.0;
    for (std::size_t k = 0; k < kFactorCount; ++k) sum += w.weights[k] * deltas[k];
    return sum;
}

double feature_distance(const FeatureVector& a, const FeatureVector& b, const WeightProfile& w) {
    return weighted_sum(factor_delta(a, b, w), w);
}

double mssg_distance(const SceneGraph& g1, const SceneGraph& g2, const WeightProfile& w) {
    return feature_distance(extract_features(g1), extract_features(g2), w);
}

}  // namespace mssg
