#include <iostream>

#include "httplib.h"
#include "mssg/service.hpp"
#include "mssg/server.hpp"

namespace mssg {

namespace {

void reply(httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
}

}  // namespace

void bind_routes(httplib::Server& server, Api& api) {
    server.Get("/v1/timelines", [&api](const httplib::Request&, httplib::Response& res) { reply(res, api.list_timelines()); });
    server.Get(R"(/v1/timelines/([^/]+)/frames/([^/]+)/bev\.svg)", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.get_svg(req.matches[1], req.matches[2]));
    });
    server.Get(R"(/v1/timelines/([^/]+)/frames/([^/]+)/bev)", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.get_layout(req.matches[1], req.matches[2]));
    });
    server.Get(R"(/v1/timelines/([^/]+)/frames/([^/]+))", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.get_frame(req.matches[1], req.matches[2]));
    });
    server.Post("/v1/timelines", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.post_timeline(req.body, req.get_param_value("derive") == "1"));
    });
    server.Post("/v1/distance", [&api](const httplib::Request& req, httplib::Response& res) { reply(res, api.post_distance(req.body)); });
    server.Post("/v1/sync", [&api](const httplib::Request& req, httplib::Response& res) { reply(res, api.post_sync(req.body)); });
    server.Post("/v1/report", [&api](const httplib::Request& req, httplib::Response& res) { reply(res, api.post_report(req.body)); });
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
}

void run_server(Api& api) {
    httplib::Server server;
    bind_routes(server, api);
    const auto& cfg = api.config();
    std::cerr << "mssg: listening on " << cfg.host << ":" << cfg.port << "\n";
    if (!server.listen(cfg.host, cfg.port)) throw Error(ErrorCode::IoError, cfg.host + ":" + std::to_string(cfg.port), "cannot bind");
}

}  // namespace mssg
