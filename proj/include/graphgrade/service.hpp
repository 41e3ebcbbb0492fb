#pragma once

// Session service: append-only event store plus the per-session workflow.

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "graphgrade/feedback.hpp"
#include "graphgrade/session.hpp"
#include "graphgrade/stats.hpp"

namespace graphgrade {

inline constexpr const char* kDataDirEnv = "GRAPHGRADE_DATA";
inline constexpr const char* kEventLogName = "events.jsonl";

/// Append-only JSON-lines log. With no directory the log lives in memory only.
class EventStore {
public:
    EventStore() = default;

    explicit EventStore(const std::filesystem::path& dir) : path_(dir / kEventLogName)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw SessionError(SessionErrorCode::Storage, "cannot create data directory " + dir.string() + ": " + ec.message());
        load();
        fd_ = ::open(path_->c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
        if (fd_ < 0) throw SessionError(SessionErrorCode::Storage, "cannot open " + path_->string() + ": " + std::strerror(errno));
    }

    EventStore(const EventStore&) = delete;
    EventStore& operator=(const EventStore&) = delete;

    ~EventStore()
    {
        if (fd_ >= 0) ::close(fd_);
    }

    /// Returns once the event is on disk (fsync'd) or throws.
    void append(const Event& e)
    {
        std::lock_guard lock(mutex_);
        if (fd_ >= 0) {
            const std::string line = event_json(e).dump() + "\n";
            std::size_t written = 0;
            while (written < line.size()) {
                const auto n = ::write(fd_, line.data() + written, line.size() - written);
                if (n < 0) {
                    if (errno == EINTR) continue;
                    throw SessionError(SessionErrorCode::Storage, std::string("event log write failed: ") + std::strerror(errno));
                }
                written += static_cast<std::size_t>(n);
            }
            if (::fsync(fd_) != 0) throw SessionError(SessionErrorCode::Storage, std::string("event log fsync failed: ") + std::strerror(errno));
        }
        events_.push_back(e);
    }

    [[nodiscard]] std::vector<Event> snapshot() const
    {
        std::lock_guard lock(mutex_);
        return events_;
    }

    [[nodiscard]] const std::optional<std::filesystem::path>& path() const { return path_; }

private:
    void load()
    {
        std::ifstream in(*path_);
        if (!in) return;
        std::string line;
        std::size_t lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            if (line.empty()) continue;
            try {
                events_.push_back(event_from_json(json::parse(line)));
            } catch (const std::exception& e) {
                throw SessionError(SessionErrorCode::CorruptLog, path_->string() + ":" + std::to_string(lineNo) + ": " + e.what());
            }
        }
    }

    mutable std::mutex mutex_;
    std::optional<std::filesystem::path> path_;
    int fd_ = -1;
    std::vector<Event> events_;
};

/// Fold every session in a log, in creation order.
inline std::vector<Session> fold_sessions(const std::vector<Event>& events)
{
    std::map<std::string, std::optional<Session>> states;
    std::vector<std::string> order;
    for (const auto& e : events) {
        auto& st = states[event_session_id(e)];
        if (!st && std::holds_alternative<SessionCreated>(e)) order.push_back(event_session_id(e));
        apply_event(st, e);
    }
    std::vector<Session> out;
    out.reserve(order.size());
    for (const auto& id : order) out.push_back(*states[id]);
    return out;
}

/// ISO-8601 UTC with milliseconds.
inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

inline std::string random_session_id()
{
    SeededStream rng(entropy_seed());
    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    for (int i = 0; i < 20; ++i) id += hex[rng.uniform_int(0, 15)];
    return id;
}

struct ServiceOptions {
    int maxAttempts = kDefaultMaxAttempts;
    std::function<std::string()> clock = utc_timestamp;
    std::function<std::string()> newId = random_session_id;
    std::function<std::uint64_t()> newSeed = entropy_seed;
};

struct SubmitOutcome {
    std::optional<Attempt> attempt;         ///< set when the text parsed
    std::optional<RejectedSubmission> rejected;
    std::string errorMessage;
    std::optional<FeedbackPlan> plan;
    std::string feedbackText;
    int attemptsRemaining = 0;
};

class SessionService {
public:
    explicit SessionService(EventStore& store, ServiceOptions options = {}) : store_(store), options_(std::move(options))
    {
        if (options_.maxAttempts < 1) throw std::invalid_argument("maxAttempts must be >= 1");
        for (auto& s : fold_sessions(store_.snapshot())) {
            auto entry = std::make_unique<Entry>();
            entry->session = std::move(s);
            entries_.emplace(entry->session.id, std::move(entry));
        }
    }

    Session create_session(VersionKind version, std::optional<std::uint64_t> seed = std::nullopt)
    {
        SessionCreated ev{options_.newId(), version, seed ? *seed : options_.newSeed(), options_.maxAttempts, options_.clock()};
        auto entry = std::make_unique<Entry>();
        std::optional<Session> state;
        apply_event(state, ev);
        entry->session = *state;
        std::unique_lock mapLock(mapMutex_);
        if (entries_.count(ev.sessionId)) throw SessionError(SessionErrorCode::Storage, "session id collision");
        store_.append(ev);
        Session copy = entry->session;
        entries_.emplace(ev.sessionId, std::move(entry));
        return copy;
    }

    [[nodiscard]] Session get(const std::string& id) const
    {
        Entry& e = entry(id);
        std::lock_guard lock(e.mutex);
        return e.session;
    }

    /// Parse failures are logged but leave the attempt counter unchanged.
    SubmitOutcome submit_answer(const std::string& id, const std::string& text)
    {
        Entry& e = entry(id);
        std::lock_guard lock(e.mutex);
        Session& s = e.session;
        if (s.exhausted())
            throw SessionError(SessionErrorCode::AttemptsExhausted, "all " + std::to_string(s.maxAttempts) + " attempts used");
        const int n = static_cast<int>(s.attempts.size()) + 1;
        SubmitOutcome out;
        std::optional<Session> state(s);
        try {
            const Rational value = parse_answer(text).value;
            const GradingKey key = grading_key(s.item, s.viewport);
            AnswerGraded ev{s.id, n, text, value, grade(value, key.interval), options_.clock()};
            apply_event(state, ev);
            store_.append(ev);
            s = std::move(*state);
            out.attempt = s.attempts.back();
            out.plan = build_feedback_plan(s.item, s.viewport, key.interval);
            out.feedbackText = render_feedback_text(*out.plan);
        } catch (const ParseError& pe) {
            AnswerRejected ev{s.id, n, text, pe.kind(), pe.position(), options_.clock()};
            apply_event(state, ev);
            store_.append(ev);
            s = std::move(*state);
            out.rejected = s.rejected.back();
            out.errorMessage = pe.what();
        }
        out.attemptsRemaining = s.maxAttempts - static_cast<int>(s.attempts.size());
        return out;
    }

    /// Later reports for the same attempt replace earlier ones.
    StrategyReport submit_strategy(const std::string& id, int n, const std::string& freeText, const std::string& label)
    {
        const auto parsed = parse_strategy_label(label);
        if (!parsed) throw SessionError(SessionErrorCode::InvalidInput, "unknown strategy label '" + label + "'");
        Entry& e = entry(id);
        std::lock_guard lock(e.mutex);
        Session& s = e.session;
        if (n < 1 || n > static_cast<int>(s.attempts.size()))
            throw SessionError(SessionErrorCode::UnknownAttempt, "session has no attempt " + std::to_string(n));
        StrategyReported ev{s.id, n, StrategyReport{freeText, *parsed}, options_.clock()};
        std::optional<Session> state(s);
        apply_event(state, ev);
        store_.append(ev);
        s = std::move(*state);
        return ev.report;
    }

    /// Consistent view: folded from one snapshot of the log.
    [[nodiscard]] std::vector<Session> sessions_snapshot() const { return fold_sessions(store_.snapshot()); }

    [[nodiscard]] const ServiceOptions& options() const { return options_; }

private:
    struct Entry {
        std::mutex mutex;
        Session session;
    };

    Entry& entry(const std::string& id) const
    {
        std::shared_lock lock(mapMutex_);
        auto it = entries_.find(id);
        if (it == entries_.end()) throw SessionError(SessionErrorCode::UnknownSession, "unknown session '" + id + "'");
        return *it->second;
    }

    EventStore& store_;
    ServiceOptions options_;
    mutable std::shared_mutex mapMutex_;
    std::map<std::string, std::unique_ptr<Entry>> entries_;
};

}  // namespace graphgrade
