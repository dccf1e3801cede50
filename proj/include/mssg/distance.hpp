#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "mssg/model.hpp"
#include "mssg/relations.hpp"

namespace mssg {

/// The eleven comparison factors, in their canonical order.
enum class Factor : std::size_t {
    patient,
    medical_staff,
    monitor,
    c_arm,
    patient_monitoring,
    ct,
    endoscopic_visualization,
    staff_count,
    surgery_site,
    patient_position,
    acquisition_time,
};

inline constexpr std::size_t kFactorCount = 11;

inline constexpr std::array<Factor, kFactorCount> kAllFactors = {
    Factor::patient,          Factor::medical_staff, Factor::monitor,
    Factor::c_arm,            Factor::patient_monitoring, Factor::ct,
    Factor::endoscopic_visualization, Factor::staff_count, Factor::surgery_site,
    Factor::patient_position, Factor::acquisition_time,
};

/// Stable key used in weight files and API payloads ("c_arm", "staff_count", ...).
std::string_view factor_key(Factor f);
std::optional<Factor> parse_factor(std::string_view key);
/// Human readable name ("presence of C-arm", "number of medical staff", ...).
std::string_view factor_label(Factor f);

struct FeatureVector {
    bool has_patient = false;
    bool has_staff = false;
    bool has_monitor = false;
    bool has_c_arm = false;
    bool has_patient_monitoring = false;
    bool has_ct = false;
    bool has_endoscopic_vis = false;
    std::size_t staff_count = 0;
    SurgerySite surgery_site = SurgerySite::none;
    std::optional<Vec3> patient_position;
    double acquisition_time = 0.0;

    /// Presence flag for one of the seven presence factors.
    bool presence(Factor f) const;

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

using FactorDeltas = std::array<double, kFactorCount>;

struct WeightProfile {
    std::array<double, kFactorCount> weights{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    /// Normalizer for patient position differences (m).
    double room_extent = 10.0;
    /// Normalizer for acquisition time differences (s).
    double time_scale = 3600.0;

    double& operator[](Factor f) { return weights[static_cast<std::size_t>(f)]; }
    double operator[](Factor f) const { return weights[static_cast<std::size_t>(f)]; }

    double total_weight() const;
    WeightProfile scaled(double alpha) const;

    /// Throws InvalidWeights for negative/non-finite weights or non-positive normalizers.
    void validate() const;

    /// All ones.
    static WeightProfile uniform();
    /// All ones except acquisition time, which is 0 so it cannot dominate alignment.
    static WeightProfile sync_default();
    /// "uniform" or "sync-default"; nullopt for unknown names.
    static std::optional<WeightProfile> preset(std::string_view name);

    friend bool operator==(const WeightProfile&, const WeightProfile&) = default;
};

/// Throws MultiplePatients when more than one patient node is present.
FeatureVector extract_features(const SceneGraph& graph);

/// Per-factor deltas, each in [0, 1].
FactorDeltas factor_delta(const FeatureVector& a, const FeatureVector& b, const WeightProfile& w);

double weighted_sum(const FactorDeltas& deltas, const WeightProfile& w);

double feature_distance(const FeatureVector& a, const FeatureVector& b, const WeightProfile& w);

/// Weighted sum of factor deltas between the two graphs' feature vectors.
double mssg_distance(const SceneGraph& g1, const SceneGraph& g2, const WeightProfile& w);

}  // namespace mssg
