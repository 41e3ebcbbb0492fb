#include "graphgrade/service.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

using namespace graphgrade;
namespace fs = std::filesystem;

namespace {

// Fixed clock and id sequence so that replays can be compared field by field.
ServiceOptions deterministic_options()
{
    ServiceOptions o;
    auto tick = std::make_shared<std::atomic<int>>(0);
    auto ids = std::make_shared<std::atomic<int>>(0);
    o.clock = [tick] { return "2026-01-01T00:00:" + std::to_string(10 + tick->fetch_add(1) % 50) + ".000Z"; };
    o.newId = [ids] { return "s" + std::to_string(ids->fetch_add(1)); };
    o.newSeed = [] { return std::uint64_t{42}; };
    return o;
}

class TempDir {
public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() / ("graphgrade-session-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string wrong_answer(const Session& s)
{
    const auto key = grading_key(s.item, s.viewport);
    return to_decimal_string(key.interval.hi + Rational(1));
}

std::string right_answer(const Session& s) { return to_decimal_string(true_image(s.item)); }

SessionErrorCode error_code(const std::function<void()>& f)
{
    try {
        f();
    } catch (const SessionError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no SessionError thrown";
    return SessionErrorCode::Storage;
}

}  // namespace

TEST(Apply, RejectsOutOfOrderEvents)
{
    std::optional<Session> st;
    EXPECT_THROW(apply_event(st, AnswerGraded{"x", 1, "1", Rational(1), Verdict::correct, ""}), SessionError);
    apply_event(st, SessionCreated{"x", VersionKind::integer, 3, 2, ""});
    EXPECT_THROW(apply_event(st, AnswerGraded{"x", 2, "1", Rational(1), Verdict::correct, ""}), SessionError);
    EXPECT_THROW(apply_event(st, StrategyReported{"x", 1, {}, ""}), SessionError);
    EXPECT_THROW(apply_event(st, SessionCreated{"x", VersionKind::integer, 3, 2, ""}), SessionError);
}

TEST(Apply, SessionItemComesFromSeed)
{
    std::optional<Session> st;
    apply_event(st, SessionCreated{"x", VersionKind::decimal, 99, 2, "t"});
    const auto g = generate_item(VersionKind::decimal, 99);
    EXPECT_EQ(st->item, g.item);
    EXPECT_EQ(st->viewport, g.viewport);
}

TEST(EventJson, RoundTripsEveryType)
{
    std::vector<Event> events;
    events.emplace_back(SessionCreated{"a", VersionKind::decimal, 18446744073709551615ULL, 2, "t0"});
    events.emplace_back(AnswerGraded{"a", 1, "y=-23,5", Rational(-47, 2), Verdict::incorrect, "t1"});
    events.emplace_back(AnswerRejected{"a", 2, "abc", ParseErrorKind::MalformedExpression, 0, "t2"});
    events.emplace_back(StrategyReported{"a", 1, StrategyReport{"I used two points", StrategyLabel::calculates_equation}, "t3"});
    for (const auto& e : events) {
        const json j = event_json(e);
        EXPECT_EQ(event_json(event_from_json(json::parse(j.dump()))), j);
    }
    EXPECT_THROW(event_from_json(json{{"type", "nope"}, {"session", "a"}, {"at", ""}}), std::invalid_argument);
}

TEST(Service, TwoAttemptFlow)
{
    EventStore store;
    SessionService svc(store, deterministic_options());
    const Session s = svc.create_session(VersionKind::decimal);
    EXPECT_EQ(s.id, "s0");
    EXPECT_EQ(s.seed, 42u);

    const auto first = svc.submit_answer(s.id, wrong_answer(s));
    ASSERT_TRUE(first.attempt);
    EXPECT_EQ(first.attempt->n, 1);
    EXPECT_EQ(first.attempt->verdict, Verdict::incorrect);
    EXPECT_EQ(first.attemptsRemaining, 1);
    ASSERT_TRUE(first.plan);
    EXPECT_NE(first.feedbackText.find(format_open_interval(first.plan->interval)), std::string::npos);

    svc.submit_strategy(s.id, 1, "looked at the grid", "estimates");
    const auto second = svc.submit_answer(s.id, right_answer(s));
    EXPECT_EQ(second.attempt->verdict, Verdict::correct);
    EXPECT_EQ(second.attemptsRemaining, 0);

    EXPECT_EQ(error_code([&] { svc.submit_answer(s.id, "1"); }), SessionErrorCode::AttemptsExhausted);
    EXPECT_EQ(error_code([&] { (void)svc.get("missing"); }), SessionErrorCode::UnknownSession);
    EXPECT_EQ(error_code([&] { svc.submit_strategy(s.id, 3, "", "estimates"); }), SessionErrorCode::UnknownAttempt);
    EXPECT_EQ(error_code([&] { svc.submit_strategy(s.id, 1, "", "guessing"); }), SessionErrorCode::InvalidInput);
}

TEST(Service, ParseErrorsDoNotConsumeAttempts)
{
    EventStore store;
    SessionService svc(store, deterministic_options());
    const Session s = svc.create_session(VersionKind::integer);
    for (const char* bad : {"", "abc", "1/0", "(1+"}) {
        const auto out = svc.submit_answer(s.id, bad);
        EXPECT_FALSE(out.attempt);
        ASSERT_TRUE(out.rejected);
        EXPECT_EQ(out.rejected->forAttempt, 1);
        EXPECT_EQ(out.attemptsRemaining, 2);
    }
    EXPECT_EQ(svc.get(s.id).rejected[2].errorKind, ParseErrorKind::DivisionByZero);
    const auto ok = svc.submit_answer(s.id, right_answer(s));
    EXPECT_EQ(ok.attempt->n, 1);
    EXPECT_EQ(svc.get(s.id).attempts.size(), 1u);
}

TEST(Service, LaterStrategyReportWins)
{
    EventStore store;
    SessionService svc(store, deterministic_options());
    const Session s = svc.create_session(VersionKind::integer);
    svc.submit_answer(s.id, "0");
    svc.submit_strategy(s.id, 1, "first", "estimates");
    svc.submit_strategy(s.id, 1, "second", "both");
    const auto got = svc.get(s.id).attempts[0].strategy;
    ASSERT_TRUE(got);
    EXPECT_EQ(got->label, StrategyLabel::both);
    EXPECT_EQ(got->freeText, "second");
}

TEST(Service, ReplayReproducesLiveState)
{
    EventStore store;
    SessionService svc(store, deterministic_options());
    for (auto v : {VersionKind::integer, VersionKind::decimal}) {
        const Session s = svc.create_session(v, 1000 + static_cast<int>(v));
        svc.submit_answer(s.id, "oops");
        svc.submit_answer(s.id, wrong_answer(s));
        svc.submit_strategy(s.id, 1, "estimated", "estimates");
        svc.submit_answer(s.id, right_answer(s));
        svc.submit_strategy(s.id, 2, "used the equation", "calculates_equation");
    }
    const auto events = store.snapshot();
    for (const auto& live : svc.sessions_snapshot()) {
        const auto replayed = replay(events, live.id);
        ASSERT_TRUE(replayed);
        EXPECT_EQ(*replayed, live);
        EXPECT_EQ(*replayed, svc.get(live.id));
        EXPECT_EQ(to_json(*replayed), to_json(live));
    }
}

TEST(Service, ConcurrentSubmissionsKeepNumberingGapFree)
{
    EventStore store;
    ServiceOptions opts = deterministic_options();
    opts.maxAttempts = 50;
    SessionService svc(store, opts);
    const Session s = svc.create_session(VersionKind::integer);
    const Session other = svc.create_session(VersionKind::decimal);
    std::vector<std::jthread> threads;
    std::atomic<int> exhausted{0};
    for (int t = 0; t < 8; ++t)
        threads.emplace_back([&, t] {
            for (int i = 0; i < 10; ++i) {
                try {
                    svc.submit_answer(t % 2 ? s.id : other.id, std::to_string(i));
                } catch (const SessionError& e) {
                    if (e.code() == SessionErrorCode::AttemptsExhausted) ++exhausted;
                }
            }
        });
    threads.clear();
    for (const auto& id : {s.id, other.id}) {
        const Session got = svc.get(id);
        ASSERT_EQ(got.attempts.size(), 40u);
        for (std::size_t i = 0; i < got.attempts.size(); ++i) ASSERT_EQ(got.attempts[i].n, static_cast<int>(i) + 1);
        EXPECT_EQ(*replay(store.snapshot(), id), got);
    }
    EXPECT_EQ(exhausted.load(), 0);
}

TEST(EventStore, PersistsAndReloads)
{
    TempDir dir;
    std::string id;
    Session before;
    {
        EventStore store(dir.path());
        SessionService svc(store, deterministic_options());
        id = svc.create_session(VersionKind::decimal, 5).id;
        svc.submit_answer(id, "1,5");
        svc.submit_strategy(id, 1, "eyeballed", "estimates");
        before = svc.get(id);
    }
    ASSERT_TRUE(fs::exists(dir.path() / kEventLogName));
    EventStore reopened(dir.path());
    EXPECT_EQ(reopened.snapshot().size(), 3u);
    SessionService svc(reopened, deterministic_options());
    EXPECT_EQ(svc.get(id), before);
    EXPECT_EQ(svc.submit_answer(id, "2").attempt->n, 2);
}

TEST(EventStore, CorruptLineIsReported)
{
    TempDir dir;
    fs::create_directories(dir.path());
    std::ofstream(dir.path() / kEventLogName) << "{\"type\":\"session_created\"\n";
    try {
        EventStore store(dir.path());
        FAIL() << "expected CorruptLog";
    } catch (const SessionError& e) {
        EXPECT_EQ(e.code(), SessionErrorCode::CorruptLog);
        EXPECT_NE(std::string(e.what()).find(":1:"), std::string::npos);
    }
}
