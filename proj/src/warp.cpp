#include <random>

#include "mssg/ingest.hpp"

namespace mssg {

WarpSpec WarpSpec::identity(std::size_t frames) {
    WarpSpec w;
    for (std::size_t i = 0; i < frames; ++i) w.runs.push_back({i, 1});
    return w;
}

WarpSpec WarpSpec::random(std::size_t frames, std::uint64_t seed, double drop_rate) {
    std::mt19937_64 engine(seed);
    const auto uniform = [&engine]() { return static_cast<double>(engine() >> 11) * (1.0 / 9007199254740992.0); };
    WarpSpec w;
    for (std::size_t i = 0; i < frames; ++i) {
        const double u = uniform();
        w.runs.push_back({i, u < 0.5 ? 1u : (u < 0.8 ? 2u : 3u)});
    }
    for (std::size_t i = 1; i + 1 < frames; ++i) {
        if (w.drops.count(i - 1)) continue;
        if (uniform() < drop_rate) w.drops.insert(i);
    }
    return w;
}

void validate_warp(const WarpSpec& warp, std::size_t frames) {
    if (warp.runs.size() != frames) {
        throw Error(ErrorCode::WarpCoverageError, "runs",
                    "expected " + std::to_string(frames) + " runs, got " + std::to_string(warp.runs.size()));
    }
    for (std::size_t i = 0; i < frames; ++i) {
        if (warp.runs[i].source != i) {
            throw Error(ErrorCode::WarpCoverageError, "run " + std::to_string(i), "source indices must be 0..m-1 in order");
        }
        if (warp.runs[i].repeat == 0) throw Error(ErrorCode::WarpCoverageError, "run " + std::to_string(i), "repeat must be >= 1");
    }
    for (const auto d : warp.drops) {
        if (d == 0 || d + 1 >= frames) {
            throw Error(ErrorCode::WarpCoverageError, "drop " + std::to_string(d), "only interior frames can be dropped");
        }
    }
}

WarpResult apply_time_warp(const Timeline& timeline, const WarpSpec& warp) {
    return apply_time_warp(timeline, warp, timeline.id() + "-warped");
}

WarpResult apply_time_warp(const Timeline& timeline, const WarpSpec& warp, const std::string& warped_id) {
    const std::size_t m = timeline.size();
    if (m == 0) throw Error(ErrorCode::EmptyTimeline, timeline.id());
    validate_warp(warp, m);

    std::vector<std::size_t> source_of;
    for (const auto& run : warp.runs) {
        if (warp.drops.count(run.source)) continue;
        for (std::size_t r = 0; r < run.repeat; ++r) source_of.push_back(run.source);
    }

    const auto& frames = timeline.frames();
    const double dt = m > 1 ? (frames.back().timestamp() - frames.front().timestamp()) / static_cast<double>(m - 1) : 1.0;
    const double t0 = frames.front().timestamp();

    std::vector<SceneGraph> out;
    out.reserve(source_of.size());
    for (std::size_t j = 0; j < source_of.size(); ++j) {
        out.push_back(frames[source_of[j]].restamped(t0 + static_cast<double>(j) * dt, j));
    }

    AlignmentPath truth;
    for (std::size_t j = 0; j < source_of.size(); ++j) {
        if (j > 0) {
            // Dropped source frames attach to the previous warped frame.
            for (std::size_t s = source_of[j - 1] + 1; s < source_of[j]; ++s) truth.steps.push_back({s, j - 1, 0.0});
        }
        truth.steps.push_back({source_of[j], j, 0.0});
    }

    return {Timeline(warped_id, timeline.metadata(), timeline.room_extent(), std::move(out)), std::move(truth)};
}

}  // namespace mssg
