#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "mssg/bev.hpp"
#include "mssg/distance.hpp"
#include "mssg/dtw.hpp"
#include "mssg/model.hpp"
#include "mssg/relations.hpp"
#include "mssg/reporter.hpp"

namespace mssg {

// ---------------------------------------------------------------------------
// Shared core used by both the CLI and the HTTP API
// ---------------------------------------------------------------------------

struct SyncResult {
    AlignmentPath path;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

SyncResult sync_timelines(const Timeline& a, const Timeline& b, const WeightProfile& w, const DtwOptions& options = {});

/// Pretty-printed alignment result file, newline terminated.
std::string alignment_document(const SyncResult& result, const Timeline& a, const Timeline& b, const WeightProfile& w);

/// Layout of one frame, bounded by the timeline's room extent.
BevLayout frame_layout(const Timeline& timeline, std::size_t frame);
std::string frame_svg(const Timeline& timeline, std::size_t frame, const StyleConfig& style);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string timeline_dir;
    RelationConfig relations;
    StyleConfig style = StyleConfig::defaults();
    TemplateTable templates = TemplateTable::defaults();
    /// Sync requests with rows * cols above this are rejected with 413.
    std::size_t max_sync_cells = 4'000'000;
    std::size_t sync_cache_entries = 64;

    /// JSON config file; relative paths resolve against the file's directory.
    /// MSSG_PORT in the environment overrides the port.
    static ServiceConfig load(const std::string& path);
};

// ---------------------------------------------------------------------------
// Timeline store
// ---------------------------------------------------------------------------

/// Id -> immutable timeline. Entries are never replaced once registered.
class TimelineStore {
public:
    /// Throws DuplicateId if the id is already registered.
    void add(Timeline timeline);
    std::shared_ptr<const Timeline> find(const std::string& id) const;
    std::vector<std::shared_ptr<const Timeline>> list() const;

    /// Loads every *.jsonl file in the directory (sorted by name).
    static std::shared_ptr<TimelineStore> load_directory(const std::string& dir);

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const Timeline>> entries_;
};

// ---------------------------------------------------------------------------
// HTTP API (transport independent)
// ---------------------------------------------------------------------------

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// Request handlers behind the /v1 routes. Error bodies look like
/// {"error": {"code": "...", "message": "..."}}.
class Api {
public:
    Api(std::shared_ptr<TimelineStore> store, ServiceConfig config);

    ApiResponse list_timelines() const;
    ApiResponse get_frame(const std::string& id, const std::string& frame) const;
    ApiResponse get_layout(const std::string& id, const std::string& frame) const;
    ApiResponse get_svg(const std::string& id, const std::string& frame) const;
    ApiResponse post_distance(const std::string& body) const;
    ApiResponse post_sync(const std::string& body) const;
    ApiResponse post_report(const std::string& body) const;
    /// Registers an uploaded timeline document. With `derive`, spatial and
    /// semantic edges are recomputed using the configured relation thresholds.
    ApiResponse post_timeline(const std::string& body, bool derive = false);

    const ServiceConfig& config() const { return config_; }

private:
    std::shared_ptr<TimelineStore> store_;
    ServiceConfig config_;

    mutable std::mutex cache_mutex_;
    mutable std::map<std::string, std::string> sync_cache_;
};

/// Blocks serving HTTP until the process is stopped.
void run_server(Api& api);

}  // namespace mssg
