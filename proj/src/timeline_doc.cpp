#include "mssg/ingest.hpp"
#include "mssg/io.hpp"

namespace mssg {

using nlohmann::json;

namespace {

std::vector<std::pair<std::size_t, std::string_view>> nonblank_lines(std::string_view doc) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t line_no = 0;
    while (!doc.empty()) {
        ++line_no;
        const auto nl = doc.find('\n');
        std::string_view line = doc.substr(0, nl);
        doc = nl == std::string_view::npos ? std::string_view{} : doc.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        out.emplace_back(line_no, line);
    }
    return out;
}

json joint_schema() {
    json a = json::array();
    for (const auto name : kJointNames) a.push_back(std::string(name));
    return a;
}

}  // namespace

Timeline parse_timeline(std::string_view document) {
    const auto lines = nonblank_lines(document);
    if (lines.empty()) throw Error(ErrorCode::MalformedRecord, "header", "document is empty").with_line(1);

    const auto& [header_line, header_text] = lines.front();
    std::string id;
    double room_extent = 0.0;
    std::map<std::string, std::string> metadata;
    try {
        const json header = io::parse_json(header_text, "header");
        if (!header.is_object() || header.value("record", "") != "header") {
            throw Error(ErrorCode::MalformedRecord, "header", "first record must be the header");
        }
        if (!header.contains("schema_version") || !header.at("schema_version").is_number_integer()) {
            throw Error(ErrorCode::MalformedRecord, "schema_version", "missing schema version");
        }
        const int version = header.at("schema_version").get<int>();
        if (version != kTimelineSchemaVersion) {
            throw Error(ErrorCode::SchemaVersionMismatch, std::to_string(version),
                        "expected " + std::to_string(kTimelineSchemaVersion));
        }
        if (header.contains("joint_schema") && header.at("joint_schema") != joint_schema()) {
            throw Error(ErrorCode::MalformedRecord, "joint_schema", "joint schema does not match the COCO-17 naming");
        }
        id = header.at("timeline_id").get<std::string>();
        room_extent = header.at("room_extent").get<double>();
        if (header.contains("metadata")) metadata = header.at("metadata").get<std::map<std::string, std::string>>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, "header", e.what()).with_line(header_line);
    } catch (const Error& e) {
        throw e.with_line(header_line);
    }

    std::vector<SceneGraph> frames;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& [line_no, text] = lines[k];
        try {
            const json rec = io::parse_json(text, "frame");
            if (!rec.is_object() || rec.value("record", "") != "frame") {
                throw Error(ErrorCode::MalformedRecord, "record", "expected a frame record");
            }
            SceneGraph g = io::graph_from_json(rec);
            if (g.frame_index() != frames.size()) {
                throw Error(ErrorCode::MalformedRecord, "frame_index",
                            "expected " + std::to_string(frames.size()) + ", got " + std::to_string(g.frame_index()));
            }
            if (!frames.empty() && !(g.timestamp() > frames.back().timestamp())) {
                throw Error(ErrorCode::MalformedRecord, "timestamp", "frame timestamps must strictly increase");
            }
            frames.push_back(std::move(g));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::MalformedRecord, "frame", e.what()).with_line(line_no);
        } catch (const Error& e) {
            throw e.with_context("frame " + std::to_string(frames.size())).with_line(line_no);
        }
    }
    try {
        return Timeline(std::move(id), std::move(metadata), room_extent, std::move(frames));
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedRecord, e.element(), e.detail()).with_line(header_line);
    }
}

std::string write_timeline(const Timeline& timeline) {
    json header = {{"record", "header"},
                   {"schema_version", kTimelineSchemaVersion},
                   {"timeline_id", timeline.id()},
                   {"room_extent", timeline.room_extent()},
                   {"metadata", timeline.metadata()},
                   {"joint_schema", joint_schema()}};
    std::string out = header.dump() + "\n";
    for (const auto& frame : timeline.frames()) {
        json rec = io::to_json(frame);
        rec["record"] = "frame";
        out += rec.dump() + "\n";
    }
    return out;
}

Timeline load_timeline(const std::string& path) {
    const std::string text = io::read_file(path);
    try {
        return parse_timeline(text);
    } catch (const Error& e) {
        throw e.with_context(path);
    }
}

void save_timeline(const Timeline& timeline, const std::string& path) {
    io::write_file(path, write_timeline(timeline));
}

}  // namespace mssg
