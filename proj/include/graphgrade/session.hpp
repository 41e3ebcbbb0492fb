#pragma once

// Two-attempt assessment sessions as an event-sourced fold.
//
// Session state is never mutated directly: every change is an Event, and
// apply_event() is the only transition. Replaying a log through apply_event() therefore
// reproduces the live state exactly.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "graphgrade/expr.hpp"
#include "graphgrade/grading.hpp"
#include "graphgrade/itemgen.hpp"
#include "graphgrade/serialize.hpp"

namespace graphgrade {

inline constexpr int kDefaultMaxAttempts = 2;

enum class StrategyLabel { estimates, calculates_equation, both, visualizes_function, does_not_remember, no_info };

inline constexpr StrategyLabel kAllStrategyLabels[] = {StrategyLabel::estimates,         StrategyLabel::calculates_equation,
                                                       StrategyLabel::both,              StrategyLabel::visualizes_function,
                                                       StrategyLabel::does_not_remember, StrategyLabel::no_info};

inline std::string_view to_string(StrategyLabel l)
{
    switch (l) {
    case StrategyLabel::estimates: return "estimates";
    case StrategyLabel::calculates_equation: return "calculates_equation";
    case StrategyLabel::both: return "both";
    case StrategyLabel::visualizes_function: return "visualizes_function";
    case StrategyLabel::does_not_remember: return "does_not_remember";
    case StrategyLabel::no_info: return "no_info";
    }
    return "no_info";
}

inline std::optional<StrategyLabel> parse_strategy_label(std::string_view s)
{
    for (auto l : kAllStrategyLabels)
        if (to_string(l) == s) return l;
    return std::nullopt;
}

struct StrategyReport {
    std::string freeText;
    StrategyLabel label = StrategyLabel::no_info;

    friend bool operator==(const StrategyReport&, const StrategyReport&) = default;
};

/// A graded submission. Attempts are numbered 1..n without gaps.
struct Attempt {
    int n = 1;
    std::string rawText;
    Rational value;
    Verdict verdict = Verdict::incorrect;
    bool feedbackShown = true;
    std::optional<StrategyReport> strategy;
    std::string at;

    friend bool operator==(const Attempt&, const Attempt&) = default;
};

/// A submission that failed to parse; it does not consume an attempt.
struct RejectedSubmission {
    int forAttempt = 1;
    std::string rawText;
    ParseErrorKind errorKind = ParseErrorKind::MalformedExpression;
    std::size_t position = 0;
    std::string at;

    friend bool operator==(const RejectedSubmission&, const RejectedSubmission&) = default;
};

struct Session {
    std::string id;
    VersionKind version = VersionKind::integer;
    std::uint64_t seed = 0;
    int maxAttempts = kDefaultMaxAttempts;
    ItemSpec item;
    Viewport viewport;
    std::vector<Attempt> attempts;
    std::vector<RejectedSubmission> rejected;
    std::string createdAt;

    friend bool operator==(const Session&, const Session&) = default;

    [[nodiscard]] bool exhausted() const { return static_cast<int>(attempts.size()) >= maxAttempts; }
};

// ---------------------------------------------------------------------------
// Events

struct SessionCreated {
    std::string sessionId;
    VersionKind version = VersionKind::integer;
    std::uint64_t seed = 0;
    int maxAttempts = kDefaultMaxAttempts;
    std::string at;
};

struct AnswerGraded {
    std::string sessionId;
    int n = 1;
    std::string rawText;
    Rational value;
    Verdict verdict = Verdict::incorrect;
    std::string at;
};

struct AnswerRejected {
    std::string sessionId;
    int forAttempt = 1;
    std::string rawText;
    ParseErrorKind errorKind = ParseErrorKind::MalformedExpression;
    std::size_t position = 0;
    std::string at;
};

struct StrategyReported {
    std::string sessionId;
    int n = 1;
    StrategyReport report;
    std::string at;
};

using Event = std::variant<SessionCreated, AnswerGraded, AnswerRejected, StrategyReported>;

inline const std::string& event_session_id(const Event& e)
{
    return std::visit([](const auto& ev) -> const std::string& { return ev.sessionId; }, e);
}

enum class SessionErrorCode { UnknownSession, AttemptsExhausted, UnknownAttempt, InvalidInput, Storage, CorruptLog };

class SessionError : public std::runtime_error {
public:
    SessionError(SessionErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] SessionErrorCode code() const { return code_; }

private:
    SessionErrorCode code_;
};

inline std::string_view to_string(SessionErrorCode c)
{
    switch (c) {
    case SessionErrorCode::UnknownSession: return "UnknownSession";
    case SessionErrorCode::AttemptsExhausted: return "AttemptsExhausted";
    case SessionErrorCode::UnknownAttempt: return "UnknownAttempt";
    case SessionErrorCode::InvalidInput: return "InvalidInput";
    case SessionErrorCode::Storage: return "StorageError";
    case SessionErrorCode::CorruptLog: return "CorruptLog";
    }
    return "StorageError";
}

/// The only state transition. `state` is empty before SessionCreated.
inline void apply_event(std::optional<Session>& state, const Event& event)
{
    std::visit(
        [&](const auto& ev) {
            using E = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<E, SessionCreated>) {
                if (state) throw SessionError(SessionErrorCode::CorruptLog, "session " + ev.sessionId + " created twice");
                Session s;
                s.id = ev.sessionId;
                s.version = ev.version;
                s.seed = ev.seed;
                s.maxAttempts = ev.maxAttempts;
                const GeneratedItem g = generate_item(ev.version, ev.seed);
                s.item = g.item;
                s.viewport = g.viewport;
                s.createdAt = ev.at;
                state = std::move(s);
            } else {
                if (!state) throw SessionError(SessionErrorCode::CorruptLog, "event for unknown session " + ev.sessionId);
                Session& s = *state;
                if constexpr (std::is_same_v<E, AnswerGraded>) {
                    if (ev.n != static_cast<int>(s.attempts.size()) + 1 || s.exhausted())
                        throw SessionError(SessionErrorCode::CorruptLog, "attempt numbering gap in session " + s.id);
                    s.attempts.push_back(Attempt{ev.n, ev.rawText, ev.value, ev.verdict, true, std::nullopt, ev.at});
                } else if constexpr (std::is_same_v<E, AnswerRejected>) {
                    s.rejected.push_back(RejectedSubmission{ev.forAttempt, ev.rawText, ev.errorKind, ev.position, ev.at});
                } else if constexpr (std::is_same_v<E, StrategyReported>) {
                    if (ev.n < 1 || ev.n > static_cast<int>(s.attempts.size()))
                        throw SessionError(SessionErrorCode::CorruptLog, "strategy for missing attempt in session " + s.id);
                    s.attempts[static_cast<std::size_t>(ev.n - 1)].strategy = ev.report;
                }
            }
        },
        event);
}

/// Fold one session's events (in log order) into its state.
inline std::optional<Session> replay(const std::vector<Event>& events, std::string_view sessionId)
{
    std::optional<Session> state;
    for (const auto& e : events)
        if (event_session_id(e) == sessionId) apply_event(state, e);
    return state;
}

// ---------------------------------------------------------------------------
// Event wire format: one JSON object per line.

inline json event_json(const Event& e)
{
    return std::visit(
        [](const auto& ev) -> json {
            using E = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<E, SessionCreated>) {
                return json{{"type", "session_created"}, {"session", ev.sessionId}, {"version", std::string(to_string(ev.version))},
                            {"seed", ev.seed},           {"maxAttempts", ev.maxAttempts}, {"at", ev.at}};
            } else if constexpr (std::is_same_v<E, AnswerGraded>) {
                return json{{"type", "answer_graded"}, {"session", ev.sessionId},       {"n", ev.n},
                            {"text", ev.rawText},      {"value", rational_json(ev.value)}, {"verdict", std::string(to_string(ev.verdict))},
                            {"at", ev.at}};
            } else if constexpr (std::is_same_v<E, AnswerRejected>) {
                return json{{"type", "answer_rejected"}, {"session", ev.sessionId},
                            {"forAttempt", ev.forAttempt}, {"text", ev.rawText},
                            {"error", std::string(to_string(ev.errorKind))}, {"position", ev.position},
                            {"at", ev.at}};
            } else {
                return json{{"type", "strategy_reported"}, {"session", ev.sessionId},   {"n", ev.n},
                            {"freeText", ev.report.freeText}, {"label", std::string(to_string(ev.report.label))}, {"at", ev.at}};
            }
        },
        e);
}

inline ParseErrorKind parse_error_kind(std::string_view s)
{
    for (auto k : {ParseErrorKind::EmptyInput, ParseErrorKind::MalformedExpression, ParseErrorKind::DivisionByZero,
                   ParseErrorKind::NumericOverflow})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown parse error kind");
}

inline Event event_from_json(const json& j)
{
    const auto type = j.at("type").get<std::string>();
    const auto id = j.at("session").get<std::string>();
    const auto at = j.at("at").get<std::string>();
    if (type == "session_created") {
        const auto version = parse_version(j.at("version").get<std::string>());
        if (!version) throw std::invalid_argument("bad version");
        return SessionCreated{id, *version, j.at("seed").get<std::uint64_t>(), j.at("maxAttempts").get<int>(), at};
    }
    if (type == "answer_graded") {
        const auto verdict = j.at("verdict").get<std::string>();
        if (verdict != "correct" && verdict != "incorrect") throw std::invalid_argument("bad verdict");
        return AnswerGraded{id, j.at("n").get<int>(), j.at("text").get<std::string>(), rational_from_json(j.at("value")),
                            verdict == "correct" ? Verdict::correct : Verdict::incorrect, at};
    }
    if (type == "answer_rejected") {
        return AnswerRejected{id, j.at("forAttempt").get<int>(), j.at("text").get<std::string>(),
                              parse_error_kind(j.at("error").get<std::string>()), j.at("position").get<std::size_t>(), at};
    }
    if (type == "strategy_reported") {
        const auto label = parse_strategy_label(j.at("label").get<std::string>());
        if (!label) throw std::invalid_argument("bad strategy label");
        return StrategyReported{id, j.at("n").get<int>(), StrategyReport{j.at("freeText").get<std::string>(), *label}, at};
    }
    throw std::invalid_argument("unknown event type '" + type + "'");
}

// ---------------------------------------------------------------------------
// Session JSON (API responses).

inline json to_json(const Session& s)
{
    json attempts = json::array();
    for (const auto& a : s.attempts) {
        json aj{{"n", a.n},
                {"text", a.rawText},
                {"value", rational_json(a.value)},
                {"verdict", std::string(to_string(a.verdict))},
                {"feedbackShown", a.feedbackShown},
                {"at", a.at}};
        if (a.strategy)
            aj["strategy"] = json{{"freeText", a.strategy->freeText}, {"label", std::string(to_string(a.strategy->label))}};
        else
            aj["strategy"] = nullptr;
        attempts.push_back(std::move(aj));
    }
    json rejected = json::array();
    for (const auto& r : s.rejected)
        rejected.push_back(json{{"forAttempt", r.forAttempt},
                                {"text", r.rawText},
                                {"error", std::string(to_string(r.errorKind))},
                                {"position", r.position},
                                {"at", r.at}});
    return json{{"id", s.id},
                {"version", std::string(to_string(s.version))},
                {"seed", s.seed},
                {"maxAttempts", s.maxAttempts},
                {"createdAt", s.createdAt},
                {"attemptsUsed", s.attempts.size()},
                {"exhausted", s.exhausted()},
                {"attempts", std::move(attempts)},
                {"rejected", std::move(rejected)}};
}

}  // namespace graphgrade
