#pragma once

// JSON wire formats (nlohmann/json).
//
// Rationals travel as {"num": n, "den": d}. Item documents carry
// "schema": "graphgrade.item/1"; field names under a schema tag are stable.

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "graphgrade/expr.hpp"
#include "graphgrade/feedback.hpp"
#include "graphgrade/grading.hpp"
#include "graphgrade/itemgen.hpp"
#include "graphgrade/rational.hpp"
#include "graphgrade/simulator.hpp"

namespace graphgrade {

using json = nlohmann::ordered_json;

inline constexpr const char* kItemSchema = "graphgrade.item/1";
inline constexpr const char* kSimSchema = "graphgrade.simulation/1";

inline json rational_json(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

/// Accepts {"num","den"}, a JSON integer, or answer-syntax text ("-23.5", "15/4").
inline Rational rational_from_json(const json& j)
{
    if (j.is_object()) return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return parse_answer(j.get<std::string>()).value;
    throw std::invalid_argument("expected a rational as {num, den}, an integer, or a numeric string");
}

inline json to_json(const ItemSpec& item)
{
    return json{{"version", std::string(to_string(item.version))},
                {"m", rational_json(item.coeffs.m)},
                {"b", rational_json(item.coeffs.b)},
                {"x0", item.x0},
                {"seed", item.seed}};
}

inline ItemSpec item_from_json(const json& j)
{
    ItemSpec item;
    const auto version = parse_version(j.at("version").get<std::string>());
    if (!version) throw std::invalid_argument("unknown version '" + j.at("version").get<std::string>() + "'");
    item.version = *version;
    item.coeffs.m = rational_from_json(j.at("m"));
    item.coeffs.b = rational_from_json(j.at("b"));
    item.x0 = j.at("x0").get<int>();
    item.seed = j.value("seed", std::uint64_t{0});
    if (item.coeffs.m == Rational(0) && item.coeffs.b == Rational(0)) throw std::invalid_argument("m and b cannot both be zero");
    if (item.x0 < -10 || item.x0 > 10) throw std::invalid_argument("x0 outside the visible range");
    return item;
}

inline json to_json(const Viewport& vp)
{
    return json{{"xMin", rational_json(vp.xMin)},   {"xMax", rational_json(vp.xMax)},   {"yMin", rational_json(vp.yMin)},
                {"yMax", rational_json(vp.yMax)},   {"gridX", rational_json(vp.gridX)}, {"gridY", rational_json(vp.gridY)},
                {"canvasPx", vp.canvasPx},          {"cellPxY", rational_json(vp.cellPxY)}};
}

inline json item_document(const ItemSpec& item, const Viewport& vp)
{
    return json{{"schema", kItemSchema}, {"item", to_json(item)}, {"viewport", to_json(vp)}};
}

/// Reads either a full item document or a bare item object. The viewport is always rebuilt.
inline GeneratedItem item_from_document(const json& j)
{
    GeneratedItem g;
    g.item = item_from_json(j.contains("item") ? j.at("item") : j);
    g.viewport = build_viewport(g.item.coeffs);
    return g;
}

inline json to_json(const AcceptanceInterval& iv)
{
    return json{{"lo", rational_json(iv.lo)}, {"hi", rational_json(iv.hi)}, {"k", iv.k}, {"text", format_open_interval(iv)}};
}

inline json to_json(const FeedbackPlan& p)
{
    return json{{"x0", p.x0},
                {"trueImage", rational_json(p.trueImage)},
                {"cellLow", rational_json(p.cellLow)},
                {"spacing", rational_json(p.spacing)},
                {"k", p.k},
                {"r", p.r},
                {"halfCell", std::string(to_string(p.halfCell))},
                {"quarterOrdinal", std::string(to_string(p.quarterOrdinal))},
                {"interval", to_json(p.interval)}};
}

inline json parse_error_json(const ParseError& e)
{
    return json{{"kind", std::string(to_string(e.kind()))}, {"position", e.position()}, {"message", e.what()}};
}

/// {"value": {num, den}} or {"error": {kind, position}}.
inline json parse_result_json(std::string_view text)
{
    try {
        return json{{"value", rational_json(parse_answer(text).value)}};
    } catch (const ParseError& e) {
        return json{{"error", parse_error_json(e)}};
    }
}

inline json grade_result_json(const GradingKey& key, Verdict v)
{
    json interval = to_json(key.interval);
    return json{{"verdict", std::string(to_string(v))}, {"interval", interval}, {"trueImage", rational_json(key.trueImage)}};
}

inline json to_json(const NoiseModel& n)
{
    return json{{"pixelSigma", n.pixelSigma}, {"integerSnap", n.integerSnap}, {"snapProbability", n.snapProbability}};
}

inline json simulation_json(const SimConfig& cfg, const SimResult& res)
{
    json items = json::array();
    for (const auto& r : res.perItem)
        items.push_back(json{{"item", to_json(r.item)},
                             {"trueImage", rational_json(r.trueImage)},
                             {"answer", rational_json(r.answer)},
                             {"verdict", std::string(to_string(r.verdict))}});
    return json{{"schema", kSimSchema},
                {"config",
                 {{"agent", std::string(to_string(cfg.agent))},
                  {"version", std::string(to_string(cfg.version))},
                  {"n", cfg.nItems},
                  {"noise", to_json(cfg.noise)},
                  {"minSpread", cfg.minSpread},
                  {"seed", cfg.seed}}},
                {"summary", {{"correct", res.correct}, {"n", cfg.nItems}, {"accuracy", res.accuracy.to_double()}}},
                {"items", std::move(items)}};
}

}  // namespace graphgrade
