#pragma once

// Descriptive statistics over strategy reports: usage by attempt, the
// attempt-1 -> attempt-2 transition matrix, and correct-rate per strategy.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "graphgrade/session.hpp"

namespace graphgrade {

/// One attempt as seen by the statistics. A missing label counts as no_info.
struct StatRecord {
    std::string sessionId;
    VersionKind version = VersionKind::integer;
    int attempt = 1;
    std::optional<StrategyLabel> label;
    std::optional<Verdict> verdict;

    [[nodiscard]] StrategyLabel effective_label() const { return label.value_or(StrategyLabel::no_info); }
};

struct StrategyCell {
    VersionKind version;
    int attempt;
    StrategyLabel label;
    int count;
    int total;
    double percent;
};

struct ContingencyCell {
    StrategyLabel first;   ///< attempt-1 label (column)
    StrategyLabel second;  ///< attempt-2 label (row)
    int count;
    int total;             ///< column size: all sessions with this attempt-1 label and a second attempt
    double percent;
};

struct EffectivenessCell {
    VersionKind version;
    StrategyLabel label;
    int correct;
    int total;
    double percent;
};

inline double percent_of(int count, int total) { return total == 0 ? 0.0 : 100.0 * count / total; }

inline std::vector<StatRecord> records_from_sessions(const std::vector<Session>& sessions)
{
    std::vector<StatRecord> out;
    for (const auto& s : sessions)
        for (const auto& a : s.attempts) {
            StatRecord r{s.id, s.version, a.n, std::nullopt, a.verdict};
            if (a.strategy) r.label = a.strategy->label;
            out.push_back(std::move(r));
        }
    return out;
}

namespace detail {
// Decimal rows come before integer rows.
inline int version_order(VersionKind v) { return v == VersionKind::decimal ? 0 : 1; }
}  // namespace detail

/// Percentage of each label per (version, attempt); zero cells are omitted.
inline std::vector<StrategyCell> strategy_table(const std::vector<StatRecord>& records)
{
    std::map<std::tuple<int, int, int>, int> counts;
    std::map<std::pair<int, int>, int> totals;
    for (const auto& r : records) {
        const int v = detail::version_order(r.version);
        ++counts[{v, r.attempt, static_cast<int>(r.effective_label())}];
        ++totals[{v, r.attempt}];
    }
    std::vector<StrategyCell> out;
    for (const auto& [key, count] : counts) {
        const auto [v, attempt, label] = key;
        const int total = totals[{v, attempt}];
        out.push_back({v == 0 ? VersionKind::decimal : VersionKind::integer, attempt, static_cast<StrategyLabel>(label), count, total,
                       percent_of(count, total)});
    }
    return out;
}

/// P(attempt-2 label | attempt-1 label) for the estimate/calculate pair.
/// Each column counts every session whose first attempt carries that label and
/// that reached a second attempt; sessions drifting to other labels keep the
/// two shown rows from summing to 100%.
inline std::vector<ContingencyCell> contingency_matrix(const std::vector<StatRecord>& records)
{
    std::map<std::string, std::pair<std::optional<StrategyLabel>, std::optional<StrategyLabel>>> bySession;
    for (const auto& r : records) {
        if (r.attempt == 1) bySession[r.sessionId].first = r.effective_label();
        if (r.attempt == 2) bySession[r.sessionId].second = r.effective_label();
    }
    constexpr StrategyLabel pair[] = {StrategyLabel::estimates, StrategyLabel::calculates_equation};
    std::vector<ContingencyCell> out;
    for (auto first : pair) {
        int total = 0;
        std::map<StrategyLabel, int> rows;
        for (const auto& [id, labels] : bySession) {
            if (labels.first != first || !labels.second) continue;
            ++total;
            ++rows[*labels.second];
        }
        if (total == 0) continue;
        for (auto second : pair) out.push_back({first, second, rows[second], total, percent_of(rows[second], total)});
    }
    return out;
}

/// Correct-rate per (version, label), pooled over attempts. Empty cells are omitted.
inline std::vector<EffectivenessCell> effectiveness_table(const std::vector<StatRecord>& records)
{
    std::map<std::pair<int, int>, std::pair<int, int>> cells;  // (correct, total)
    for (const auto& r : records) {
        if (!r.verdict) continue;
        auto& c = cells[{detail::version_order(r.version), static_cast<int>(r.effective_label())}];
        if (*r.verdict == Verdict::correct) ++c.first;
        ++c.second;
    }
    std::vector<EffectivenessCell> out;
    for (const auto& [key, c] : cells)
        out.push_back({key.first == 0 ? VersionKind::decimal : VersionKind::integer, static_cast<StrategyLabel>(key.second), c.first, c.second,
                       percent_of(c.first, c.second)});
    return out;
}

inline json to_json(const std::vector<StrategyCell>& cells)
{
    json out = json::array();
    for (const auto& c : cells)
        out.push_back(json{{"version", std::string(to_string(c.version))},
                           {"attempt", c.attempt},
                           {"label", std::string(to_string(c.label))},
                           {"count", c.count},
                           {"total", c.total},
                           {"percent", c.percent}});
    return out;
}

inline json to_json(const std::vector<ContingencyCell>& cells)
{
    json out = json::array();
    for (const auto& c : cells)
        out.push_back(json{{"attempt1", std::string(to_string(c.first))},
                           {"attempt2", std::string(to_string(c.second))},
                           {"count", c.count},
                           {"total", c.total},
                           {"percent", c.percent}});
    return out;
}

inline json to_json(const std::vector<EffectivenessCell>& cells)
{
    json out = json::array();
    for (const auto& c : cells)
        out.push_back(json{{"version", std::string(to_string(c.version))},
                           {"label", std::string(to_string(c.label))},
                           {"correct", c.correct},
                           {"total", c.total},
                           {"percent", c.percent}});
    return out;
}

inline json aggregate_stats_json(const std::vector<StatRecord>& records)
{
    return json{{"records", records.size()},
                {"strategyTable", to_json(strategy_table(records))},
                {"contingency", to_json(contingency_matrix(records))},
                {"effectiveness", to_json(effectiveness_table(records))}};
}

// ---------------------------------------------------------------------------
// CSV

namespace csv {

inline std::string quote(std::string_view field)
{
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// RFC 4180 rows; quoted fields may contain separators, quotes and newlines.
inline std::vector<std::vector<std::string>> parse(std::string_view text)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field += c;
        }
    }
    if (quoted) throw std::invalid_argument("csv: unterminated quoted field");
    if (any || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace csv

inline constexpr const char* kExportHeader = "session,version,seed,attempt,text,value,verdict,label,freeText";

/// One row per graded attempt.
inline std::string export_csv(const std::vector<Session>& sessions)
{
    std::ostringstream out;
    out << kExportHeader << "\n";
    for (const auto& s : sessions)
        for (const auto& a : s.attempts) {
            out << csv::quote(s.id) << ',' << to_string(s.version) << ',' << s.seed << ',' << a.n << ',' << csv::quote(a.rawText) << ','
                << to_fraction_string(a.value) << ',' << to_string(a.verdict) << ',' << (a.strategy ? to_string(a.strategy->label) : "")
                << ',' << csv::quote(a.strategy ? a.strategy->freeText : "") << "\n";
        }
    return out.str();
}

/// Reads externally coded records. Required columns: session, version, attempt, label.
/// Optional: verdict. Extra columns (as in export_csv output) are ignored.
inline std::vector<StatRecord> import_records_csv(std::string_view text)
{
    const auto rows = csv::parse(text);
    if (rows.empty()) return {};
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
    for (const char* required : {"session", "version", "attempt", "label"})
        if (!col.count(required)) throw std::invalid_argument(std::string("csv: missing column '") + required + "'");
    std::vector<StatRecord> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;
        auto field = [&](const char* name) -> std::string {
            auto it = col.find(name);
            if (it == col.end() || it->second >= row.size()) return {};
            return row[it->second];
        };
        const std::string where = "csv row " + std::to_string(r + 1) + ": ";
        StatRecord rec;
        rec.sessionId = field("session");
        const auto version = parse_version(field("version"));
        if (!version) throw std::invalid_argument(where + "bad version '" + field("version") + "'");
        rec.version = *version;
        try {
            rec.attempt = std::stoi(field("attempt"));
        } catch (const std::exception&) {
            throw std::invalid_argument(where + "bad attempt '" + field("attempt") + "'");
        }
        if (const auto l = field("label"); !l.empty()) {
            rec.label = parse_strategy_label(l);
            if (!rec.label) throw std::invalid_argument(where + "unknown label '" + l + "'");
        }
        if (const auto v = field("verdict"); !v.empty()) {
            if (v != "correct" && v != "incorrect") throw std::invalid_argument(where + "bad verdict '" + v + "'");
            rec.verdict = v == "correct" ? Verdict::correct : Verdict::incorrect;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace graphgrade
