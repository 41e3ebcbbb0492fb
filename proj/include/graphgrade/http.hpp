#pragma once

// HTTP + JSON front end for SessionService.
//
//   POST /sessions                          {version, seed?}
//   GET  /sessions/{id}                     session state
//   GET  /sessions/{id}/item                item document; ?format=svg for the plot,
//                                           ?format=svg&overlay=1 for the feedback drawing
//   POST /sessions/{id}/attempts            {text}
//   POST /sessions/{id}/attempts/{n}/strategy {freeText, label}
//   GET  /stats                             aggregate tables
//   GET  /export.csv                        one row per graded attempt

#include <string>

#include "httplib.h"

#include "graphgrade/plot.hpp"
#include "graphgrade/serialize.hpp"
#include "graphgrade/service.hpp"
#include "graphgrade/stats.hpp"

namespace graphgrade {

namespace detail {

inline void send_json(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, std::string_view kind, const std::string& message)
{
    send_json(res, status, json{{"error", {{"kind", std::string(kind)}, {"message", message}}}});
}

inline int http_status(SessionErrorCode c)
{
    switch (c) {
    case SessionErrorCode::UnknownSession:
    case SessionErrorCode::UnknownAttempt: return 404;
    case SessionErrorCode::AttemptsExhausted: return 409;
    case SessionErrorCode::InvalidInput: return 400;
    case SessionErrorCode::Storage:
    case SessionErrorCode::CorruptLog: return 500;
    }
    return 500;
}

inline json parse_body(const httplib::Request& req)
{
    json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
    if (body.is_discarded() || !body.is_object()) throw std::invalid_argument("request body must be a JSON object");
    return body;
}

/// Runs a handler, mapping domain and validation failures onto status codes.
template <class F>
httplib::Server::Handler guarded(F f)
{
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const SessionError& e) {
            send_error(res, http_status(e.code()), to_string(e.code()), e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, "ValidationError", e.what());
        } catch (const std::invalid_argument& e) {
            send_error(res, 400, "ValidationError", e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "InternalError", e.what());
        }
    };
}

inline json submit_outcome_json(const SubmitOutcome& o)
{
    json out;
    if (o.attempt) {
        out["attempt"] = json{{"n", o.attempt->n}, {"value", rational_json(o.attempt->value)}, {"verdict", std::string(to_string(o.attempt->verdict))}};
        out["feedback"] = json{{"text", o.feedbackText}, {"plan", to_json(*o.plan)}};
    } else {
        out["error"] = json{{"kind", std::string(to_string(o.rejected->errorKind))}, {"position", o.rejected->position}, {"message", o.errorMessage}};
    }
    out["attemptsRemaining"] = o.attemptsRemaining;
    return out;
}

}  // namespace detail

inline void register_routes(httplib::Server& server, SessionService& service, PlotStyle style = {})
{
    using detail::guarded;
    using detail::send_json;

    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

    server.Post("/sessions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
        const json body = detail::parse_body(req);
        if (!body.contains("version") || !body["version"].is_string()) throw std::invalid_argument("'version' must be \"integer\" or \"decimal\"");
        const auto version = parse_version(body["version"].get<std::string>());
        if (!version) throw std::invalid_argument("'version' must be \"integer\" or \"decimal\"");
        std::optional<std::uint64_t> seed;
        if (body.contains("seed") && !body["seed"].is_null()) {
            if (!body["seed"].is_number_unsigned()) throw std::invalid_argument("'seed' must be a non-negative integer");
            seed = body["seed"].get<std::uint64_t>();
        }
        const Session s = service.create_session(*version, seed);
        json out = to_json(s);
        out["item"] = item_document(s.item, s.viewport);
        send_json(res, 201, out);
    }));

    server.Get(R"(/sessions/([^/]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
        send_json(res, 200, to_json(service.get(req.matches[1])));
    }));

    server.Get(R"(/sessions/([^/]+)/item)", guarded([&service, style](const httplib::Request& req, httplib::Response& res) {
        const Session s = service.get(req.matches[1]);
        if (req.get_param_value("format") == "svg") {
            const std::string overlay = req.get_param_value("overlay");
            if (overlay == "1" || overlay == "true") {
                const GradingKey key = grading_key(s.item, s.viewport);
                res.set_content(render_feedback_overlay(s.item, s.viewport, build_feedback_plan(s.item, s.viewport, key.interval), style),
                                "image/svg+xml");
            } else {
                res.set_content(render_item(s.item, s.viewport, style), "image/svg+xml");
            }
            return;
        }
        send_json(res, 200, item_document(s.item, s.viewport));
    }));

    server.Post(R"(/sessions/([^/]+)/attempts)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
        const json body = detail::parse_body(req);
        if (!body.contains("text") || !body["text"].is_string()) throw std::invalid_argument("'text' must be a string");
        const SubmitOutcome o = service.submit_answer(req.matches[1], body["text"].get<std::string>());
        send_json(res, o.attempt ? 200 : 422, detail::submit_outcome_json(o));
    }));

    server.Post(R"(/sessions/([^/]+)/attempts/(\d+)/strategy)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
        const json body = detail::parse_body(req);
        if (!body.contains("label") || !body["label"].is_string()) throw std::invalid_argument("'label' must be a string");
        const std::string freeText = body.contains("freeText") && body["freeText"].is_string() ? body["freeText"].get<std::string>() : "";
        const std::string digits = req.matches[2];
        if (digits.size() > 6) throw SessionError(SessionErrorCode::UnknownAttempt, "session has no attempt " + digits);
        const int n = std::stoi(digits);
        const StrategyReport r = service.submit_strategy(req.matches[1], n, freeText, body["label"].get<std::string>());
        send_json(res, 200, json{{"n", n}, {"freeText", r.freeText}, {"label", std::string(to_string(r.label))}});
    }));

    server.Get("/stats", guarded([&service](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, aggregate_stats_json(records_from_sessions(service.sessions_snapshot())));
    }));

    server.Get("/export.csv", guarded([&service](const httplib::Request&, httplib::Response& res) {
        res.set_content(export_csv(service.sessions_snapshot()), "text/csv");
    }));
}

}  // namespace graphgrade
