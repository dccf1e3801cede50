#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mssg/ingest.hpp"
#include "mssg/io.hpp"
#include "mssg/service.hpp"

using namespace mssg;

namespace {

// 0 ok, 1 other error, 2 parse/IO error, 3 empty timeline, 4 index out of range.
int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedRecord:
        case ErrorCode::SchemaVersionMismatch:
        case ErrorCode::IoError:
        case ErrorCode::InvalidConfig:
        case ErrorCode::InvalidWeights:
            return 2;
        case ErrorCode::EmptyTimeline:
            return 3;
        case ErrorCode::IndexOutOfRange:
            return 4;
        default:
            return 1;
    }
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        io::write_file(out, text);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multimodal semantic scene graph tools for operating-room timelines"};
    app.require_subcommand(1);

    std::string file_a, file_b, weights = "sync-default", out;
    std::optional<std::size_t> band;
    auto* sync = app.add_subcommand("sync", "Align two timelines with dynamic time warping");
    sync->add_option("a", file_a, "Reference timeline (.jsonl)")->required();
    sync->add_option("b", file_b, "Timeline to align (.jsonl)")->required();
    sync->add_option("--weights", weights, "Preset name (uniform, sync-default) or weights JSON file");
    sync->add_option("--out", out, "Alignment result file (default: stdout)");
    sync->add_option("--band", band, "Restrict the path to a diagonal band of this half-width");

    std::string report_file;
    std::size_t report_i = 0, report_j = 0;
    std::optional<double> movement;
    std::string templates_file;
    bool report_json = false;
    auto* report = app.add_subcommand("report", "Describe the changes between two frames");
    report->add_option("file", report_file, "Timeline (.jsonl)")->required();
    report->add_option("i", report_i, "Earlier frame index")->required();
    report->add_option("j", report_j, "Later frame index")->required();
    report->add_option("--movement", movement, "Report node moves above this distance (m)");
    report->add_option("--templates", templates_file, "Sentence templates JSON");
    report->add_flag("--json", report_json, "Print the change set as JSON");

    std::string bev_file, style_file;
    std::size_t bev_frame = 0;
    bool bev_layout = false;
    auto* bev = app.add_subcommand("bev", "Render a frame as a top-down SVG");
    bev->add_option("file", bev_file, "Timeline (.jsonl)")->required();
    bev->add_option("frame", bev_frame, "Frame index")->required();
    bev->add_option("--out", out, "Output file (default: stdout)");
    bev->add_option("--style", style_file, "Style JSON");
    bev->add_flag("--layout", bev_layout, "Write the layout JSON instead of SVG");

    std::string script = "default";
    std::uint64_t seed = 0;
    auto* synth = app.add_subcommand("synth", "Generate a scripted synthetic procedure timeline");
    synth->add_option("--script", script, "'default' or a procedure script JSON file");
    synth->add_option("--seed", seed, "Random seed");
    synth->add_option("--out", out, "Timeline output (default: stdout)");
    bool print_script = false;
    synth->add_flag("--print-script", print_script, "Write the procedure script JSON instead of a timeline");

    std::string warp_file, truth_out, warp_id;
    double drop_rate = 0.05;
    auto* warp = app.add_subcommand("warp", "Apply a random monotone time warp to a timeline");
    warp->add_option("file", warp_file, "Timeline (.jsonl)")->required();
    warp->add_option("--seed", seed, "Random seed");
    warp->add_option("--drop-rate", drop_rate, "Probability of dropping an interior frame");
    warp->add_option("--id", warp_id, "Id of the warped timeline (default: <id>-warped)");
    warp->add_option("--out", out, "Warped timeline output (default: stdout)");
    warp->add_option("--truth", truth_out, "Ground-truth correspondence output");

    std::string validate_file;
    auto* validate_cmd = app.add_subcommand("validate", "Parse and check a timeline document");
    validate_cmd->add_option("file", validate_file, "Timeline (.jsonl)")->required();

    std::string annotations_file, mapping_file;
    auto* ingest = app.add_subcommand("ingest", "Convert 3D pose annotations into a timeline");
    ingest->add_option("annotations", annotations_file, "Annotation JSON")->required();
    ingest->add_option("--mapping", mapping_file, "Joint/label mapping JSON")->required();
    ingest->add_option("--out", out, "Timeline output (default: stdout)");

    std::string config_file;
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--config", config_file, "Service config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sync) {
            const Timeline a = load_timeline(file_a);
            const Timeline b = load_timeline(file_b);
            const WeightProfile w = io::load_weights(weights);
            DtwOptions options;
            options.band = band;
            const SyncResult result = sync_timelines(a, b, w, options);
            const std::string doc = alignment_document(result, a, b, w);
            // The summary goes to stderr when the document itself is on stdout.
            std::ostream& summary = out.empty() ? std::cerr : std::cout;
            emit(out, doc);
            summary << "total cost: " << result.path.total_cost << "\n"
                    << "path length: " << result.path.steps.size() << "\n";
        } else if (*report) {
            const Timeline t = load_timeline(report_file);
            DiffOptions options;
            options.movement_threshold = movement;
            const ChangeSet cs = diff_graphs(t.frame(report_i), t.frame(report_j), options);
            if (report_json) {
                std::cout << io::to_json(cs).dump(2) << "\n";
            } else {
                const TemplateTable tt = templates_file.empty() ? TemplateTable::defaults() : TemplateTable::load(templates_file);
                for (const auto& s : render_report(cs, tt)) std::cout << s << "\n";
            }
        } else if (*bev) {
            const Timeline t = load_timeline(bev_file);
            if (bev_layout) {
                emit(out, io::to_json(frame_layout(t, bev_frame)).dump(2) + "\n");
            } else {
                const StyleConfig style = style_file.empty() ? StyleConfig::defaults() : StyleConfig::load(style_file);
                emit(out, frame_svg(t, bev_frame, style));
            }
        } else if (*synth) {
            const ProcedureScript ps = script == "default" ? ProcedureScript::vertebroplasty_demo()
                                                           : ProcedureScript::from_json(io::parse_json(io::read_file(script), script));
            emit(out, print_script ? ps.to_json().dump(2) + "\n" : write_timeline(synth_procedure(ps, seed)));
        } else if (*warp) {
            const Timeline t = load_timeline(warp_file);
            const WarpSpec spec = WarpSpec::random(t.size(), seed, drop_rate);
            const WarpResult r = warp_id.empty() ? apply_time_warp(t, spec) : apply_time_warp(t, spec, warp_id);
            emit(out, write_timeline(r.timeline));
            if (!truth_out.empty()) {
                nlohmann::json pairs = nlohmann::json::array();
                for (const auto& [i, j] : r.truth.pairs()) pairs.push_back({i, j});
                io::write_file(truth_out, nlohmann::json{{"format", "mssg-warp-truth"},
                                                         {"timeline_a", t.id()},
                                                         {"timeline_b", r.timeline.id()},
                                                         {"pairs", pairs}}
                                                  .dump(2) + "\n");
            }
        } else if (*validate_cmd) {
            const Timeline t = load_timeline(validate_file);
            std::cout << t.id() << ": " << t.size() << " frames ok\n";
        } else if (*ingest) {
            const auto mapping = AnnotationMapping::from_json(io::parse_json(io::read_file(mapping_file), mapping_file));
            const auto annotations = io::parse_json(io::read_file(annotations_file), annotations_file);
            emit(out, write_timeline(adapt_annotations(annotations, mapping, {})));
        } else if (*serve) {
            const ServiceConfig cfg = ServiceConfig::load(config_file);
            Api api(TimelineStore::load_directory(cfg.timeline_dir), cfg);
            run_server(api);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
