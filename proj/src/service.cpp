#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>

#include "mssg/ingest.hpp"
#include "mssg/io.hpp"
#include "mssg/service.hpp"

namespace mssg {

using nlohmann::json;
namespace fs = std::filesystem;

SyncResult sync_timelines(const Timeline& a, const Timeline& b, const WeightProfile& w, const DtwOptions& options) {
    const CostMatrix cost = cost_matrix(a, b, w);
    return {dtw_align(cost, options), cost.rows(), cost.cols()};
}

std::string alignment_document(const SyncResult& result, const Timeline& a, const Timeline& b, const WeightProfile& w) {
    return io::alignment_to_json(result.path, a.id(), b.id(), result.rows, result.cols, w).dump(2) + "\n";
}

BevLayout frame_layout(const Timeline& timeline, std::size_t frame) {
    LayoutConfig cfg;
    cfg.room_extent = timeline.room_extent();
    return project_topdown(timeline.frame(frame), cfg);
}

std::string frame_svg(const Timeline& timeline, std::size_t frame, const StyleConfig& style) {
    return render_svg(frame_layout(timeline, frame), style);
}

// ---------------------------------------------------------------------------

ServiceConfig ServiceConfig::load(const std::string& path) {
    ServiceConfig cfg;
    const json j = io::parse_json(io::read_file(path), path);
    const fs::path base = fs::path(path).parent_path();
    const auto resolve = [&base](const std::string& p) {
        const fs::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };
    try {
        cfg.host = j.value("host", cfg.host);
        cfg.port = j.value("port", cfg.port);
        if (j.contains("timeline_dir")) cfg.timeline_dir = resolve(j.at("timeline_dir").get<std::string>());
        if (j.contains("relations")) cfg.relations = io::relation_config_from_json(j.at("relations"));
        if (j.contains("style")) {
            const auto& s = j.at("style");
            cfg.style = s.is_string() ? StyleConfig::load(resolve(s.get<std::string>())) : StyleConfig::from_json(s.dump());
        }
        if (j.contains("templates")) {
            const auto& t = j.at("templates");
            cfg.templates =
                t.is_string() ? TemplateTable::load(resolve(t.get<std::string>())) : TemplateTable::from_json(t.dump());
        }
        cfg.max_sync_cells = j.value("max_sync_cells", cfg.max_sync_cells);
        cfg.sync_cache_entries = j.value("sync_cache_entries", cfg.sync_cache_entries);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, path, e.what());
    }
    if (const char* env = std::getenv("MSSG_PORT")) {
        int port = 0;
        const std::string_view sv(env);
        const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), port);
        if (ec != std::errc() || ptr != sv.data() + sv.size() || port < 0 || port > 65535) {
            throw Error(ErrorCode::InvalidConfig, "MSSG_PORT", std::string("not a port: ") + env);
        }
        cfg.port = port;
    }
    if (cfg.port < 0 || cfg.port > 65535) throw Error(ErrorCode::InvalidConfig, "port", "out of range");
    return cfg;
}

// ---------------------------------------------------------------------------

void TimelineStore::add(Timeline timeline) {
    auto ptr = std::make_shared<const Timeline>(std::move(timeline));
    std::unique_lock lock(mutex_);
    if (entries_.count(ptr->id())) throw Error(ErrorCode::DuplicateId, ptr->id(), "timeline already registered");
    entries_.emplace(ptr->id(), std::move(ptr));
}

std::shared_ptr<const Timeline> TimelineStore::find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : it->second;
}

std::vector<std::shared_ptr<const Timeline>> TimelineStore::list() const {
    std::shared_lock lock(mutex_);
    std::vector<std::shared_ptr<const Timeline>> out;
    for (const auto& [id, t] : entries_) out.push_back(t);
    return out;
}

std::shared_ptr<TimelineStore> TimelineStore::load_directory(const std::string& dir) {
    auto store = std::make_shared<TimelineStore>();
    if (dir.empty()) return store;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, dir, "not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) store->add(load_timeline(f.string()));
    return store;
}

// ---------------------------------------------------------------------------

namespace {

// Carries an HTTP status out of request parsing.
struct HttpError {
    int status;
    std::string code;
    std::string message;
};

ApiResponse json_response(const json& j, int status = 200) { return {status, "application/json", j.dump()}; }

ApiResponse error_response(int status, const std::string& code, const std::string& message) {
    return json_response({{"error", {{"code", code}, {"message", message}}}}, status);
}

std::string error_key(ErrorCode code) {
    // CamelCase -> snake_case
    std::string out;
    for (const char c : to_string(code)) {
        if (std::isupper(static_cast<unsigned char>(c)) && !out.empty()) out += '_';
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidWeights:
        case ErrorCode::EmptyTimeline:
        case ErrorCode::MultiplePatients:
        case ErrorCode::MissingPose:
            return 422;
        case ErrorCode::IndexOutOfRange:
            return 404;
        case ErrorCode::DuplicateId:
            return 409;
        default:
            return 400;
    }
}

template <typename F>
ApiResponse guarded(F&& f) {
    try {
        return f();
    } catch (const HttpError& e) {
        return error_response(e.status, e.code, e.message);
    } catch (const Error& e) {
        return error_response(status_for(e.code()), error_key(e.code()), e.what());
    } catch (const json::exception& e) {
        return error_response(400, "malformed_body", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal", e.what());
    }
}

json parse_body(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw HttpError{400, "malformed_body", "request body must be a JSON object"};
    return j;
}

std::size_t parse_index(const std::string& s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw HttpError{404, "unknown_frame", "frame index must be a non-negative integer: " + s};
    }
    return v;
}

std::shared_ptr<const Timeline> require_timeline(const TimelineStore& store, const std::string& id) {
    auto t = store.find(id);
    if (!t) throw HttpError{404, "unknown_timeline", "no timeline with id '" + id + "'"};
    return t;
}

const SceneGraph& require_frame(const Timeline& t, std::size_t k) {
    if (k >= t.size()) {
        throw HttpError{404, "unknown_frame",
                        "frame " + std::to_string(k) + " out of range for '" + t.id() + "' (" + std::to_string(t.size()) + " frames)"};
    }
    return t.frames()[k];
}

// A frame reference: {"timeline": id, "frame": k} or {"graph": {...}} inline.
SceneGraph resolve_graph(const TimelineStore& store, const json& ref, const std::string& name) {
    if (!ref.is_object()) throw HttpError{400, "malformed_body", "'" + name + "' must be an object"};
    if (ref.contains("graph")) return io::graph_from_json(ref.at("graph"));
    if (!ref.contains("timeline") || !ref.contains("frame") || !ref.at("frame").is_number_unsigned()) {
        throw HttpError{400, "malformed_body", "'" + name + "' needs \"timeline\" and a non-negative \"frame\""};
    }
    const auto t = require_timeline(store, ref.at("timeline").get<std::string>());
    return require_frame(*t, ref.at("frame").get<std::size_t>());
}

WeightProfile weights_of(const json& body, const char* fallback) {
    return io::weights_from_json(body.contains("weights") ? body.at("weights") : json(fallback));
}

json timeline_summary(const Timeline& t) {
    json frames_end = t.empty() ? json(nullptr) : json(t.frames().back().timestamp());
    return {{"id", t.id()},
            {"frames", t.size()},
            {"room_extent", t.room_extent()},
            {"metadata", t.metadata()},
            {"start_time", t.empty() ? json(nullptr) : json(t.frames().front().timestamp())},
            {"end_time", frames_end}};
}

}  // namespace

Api::Api(std::shared_ptr<TimelineStore> store, ServiceConfig config) : store_(std::move(store)), config_(std::move(config)) {}

ApiResponse Api::list_timelines() const {
    return guarded([&] {
        json arr = json::array();
        for (const auto& t : store_->list()) arr.push_back(timeline_summary(*t));
        return json_response({{"timelines", arr}});
    });
}

ApiResponse Api::get_frame(const std::string& id, const std::string& frame) const {
    return guarded([&] {
        const auto t = require_timeline(*store_, id);
        const auto& g = require_frame(*t, parse_index(frame));
        json j = io::to_json(g);
        j["timeline"] = id;
        j["features"] = io::to_json(extract_features(g));
        j["surgery_site"] = std::string(to_string(classify_surgery_site(g)));
        return json_response(j);
    });
}

ApiResponse Api::get_layout(const std::string& id, const std::string& frame) const {
    return guarded([&] {
        const auto t = require_timeline(*store_, id);
        const std::size_t k = parse_index(frame);
        require_frame(*t, k);
        return json_response(io::to_json(frame_layout(*t, k)));
    });
}

ApiResponse Api::get_svg(const std::string& id, const std::string& frame) const {
    return guarded([&] {
        const auto t = require_timeline(*store_, id);
        const std::size_t k = parse_index(frame);
        require_frame(*t, k);
        return ApiResponse{200, "image/svg+xml", frame_svg(*t, k, config_.style)};
    });
}

ApiResponse Api::post_distance(const std::string& body) const {
    return guarded([&] {
        const json req = parse_body(body);
        if (!req.contains("a") || !req.contains("b")) throw HttpError{400, "malformed_body", "need \"a\" and \"b\""};
        const WeightProfile w = weights_of(req, "uniform");
        const SceneGraph ga = resolve_graph(*store_, req.at("a"), "a");
        const SceneGraph gb = resolve_graph(*store_, req.at("b"), "b");
        const FeatureVector fa = extract_features(ga);
        const FeatureVector fb = extract_features(gb);
        const FactorDeltas deltas = factor_delta(fa, fb, w);
        return json_response({{"distance", weighted_sum(deltas, w)},
                              {"deltas", io::deltas_to_json(deltas)},
                              {"features", {{"a", io::to_json(fa)}, {"b", io::to_json(fb)}}},
                              {"weights", io::to_json(w)}});
    });
}

ApiResponse Api::post_sync(const std::string& body) const {
    return guarded([&] {
        const json req = parse_body(body);
        if (!req.contains("a") || !req.contains("b") || !req.at("a").is_string() || !req.at("b").is_string()) {
            throw HttpError{400, "malformed_body", "need timeline ids \"a\" and \"b\""};
        }
        const WeightProfile w = weights_of(req, "sync-default");
        DtwOptions options;
        if (req.contains("band") && !req.at("band").is_null()) options.band = req.at("band").get<std::size_t>();
        const auto a = require_timeline(*store_, req.at("a").get<std::string>());
        const auto b = require_timeline(*store_, req.at("b").get<std::string>());
        if (a->empty()) throw Error(ErrorCode::EmptyTimeline, a->id());
        if (b->empty()) throw Error(ErrorCode::EmptyTimeline, b->id());
        const std::size_t cells = a->size() * b->size();
        if (cells > config_.max_sync_cells) {
            throw HttpError{413, "too_large",
                            std::to_string(a->size()) + " x " + std::to_string(b->size()) + " cells exceeds the limit of " +
                                std::to_string(config_.max_sync_cells)};
        }

        const std::string key = a->id() + '\n' + b->id() + '\n' + io::to_json(w).dump() + '\n' +
                                (options.band ? std::to_string(*options.band) : std::string("-"));
        {
            std::lock_guard lock(cache_mutex_);
            const auto it = sync_cache_.find(key);
            if (it != sync_cache_.end()) return ApiResponse{200, "application/json", it->second};
        }
        std::string doc = alignment_document(sync_timelines(*a, *b, w, options), *a, *b, w);
        {
            std::lock_guard lock(cache_mutex_);
            if (sync_cache_.size() >= config_.sync_cache_entries) sync_cache_.clear();
            sync_cache_.emplace(key, doc);
        }
        return ApiResponse{200, "application/json", std::move(doc)};
    });
}

ApiResponse Api::post_report(const std::string& body) const {
    return guarded([&] {
        const json req = parse_body(body);
        if (!req.contains("a") || !req.contains("b")) throw HttpError{400, "malformed_body", "need \"a\" and \"b\""};
        DiffOptions options;
        if (req.contains("movement_threshold") && !req.at("movement_threshold").is_null()) {
            options.movement_threshold = req.at("movement_threshold").get<double>();
        }
        const SceneGraph ga = resolve_graph(*store_, req.at("a"), "a");
        const SceneGraph gb = resolve_graph(*store_, req.at("b"), "b");
        const ChangeSet cs = diff_graphs(ga, gb, options);
        return json_response({{"changes", io::to_json(cs)}, {"sentences", render_report(cs, config_.templates)}});
    });
}

ApiResponse Api::post_timeline(const std::string& body, bool derive) {
    return guarded([&] {
        Timeline t = parse_timeline(body);
        if (derive) {
            std::vector<SceneGraph> frames;
            for (const auto& f : t.frames()) frames.push_back(with_derived_relations(f, config_.relations));
            t = Timeline(t.id(), t.metadata(), t.room_extent(), std::move(frames));
        }
        json summary = timeline_summary(t);
        store_->add(std::move(t));
        return json_response(summary, 201);
    });
}

}  // namespace mssg
