// graphgrade command line: item generation, grading, answer parsing,
// strategy simulation, the session service, and statistics.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "graphgrade/http.hpp"
#include "graphgrade/plot.hpp"
#include "graphgrade/serialize.hpp"
#include "graphgrade/service.hpp"
#include "graphgrade/simulator.hpp"
#include "graphgrade/stats.hpp"

namespace fs = std::filesystem;
using namespace graphgrade;

namespace {

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& content)
{
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

/// --data wins, then $GRAPHGRADE_DATA, then ./data.
fs::path resolve_data_dir(const std::string& flag)
{
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kDataDirEnv); env && *env) return env;
    return "data";
}

int cmd_generate(const std::string& versionText, std::uint64_t seed, int count, const std::string& format, const std::string& outDir)
{
    const auto version = parse_version(versionText);
    if (!version) throw CLI::ValidationError("--version", "must be integer or decimal");
    if (count < 1) throw CLI::ValidationError("--count", "must be >= 1");
    if (format == "svg" && count > 1 && outDir.empty()) throw CLI::ValidationError("--format", "svg with --count > 1 needs --out-dir");

    json docs = json::array();
    for (int i = 0; i < count; ++i) {
        const GeneratedItem g = generate_item(*version, seed + static_cast<std::uint64_t>(i));
        json doc = item_document(g.item, g.viewport);
        const std::string svg = render_item(g.item, g.viewport);
        if (!outDir.empty()) {
            fs::create_directories(outDir);
            const std::string stem = "item-" + std::string(to_string(*version)) + "-" + std::to_string(g.item.seed);
            if (format != "svg") write_file(fs::path(outDir) / (stem + ".json"), doc.dump(2) + "\n");
            if (format != "json") write_file(fs::path(outDir) / (stem + ".svg"), svg);
            continue;
        }
        if (format == "svg") {
            std::cout << svg;
            return 0;
        }
        if (format == "both") doc["svg"] = svg;
        docs.push_back(std::move(doc));
    }
    if (outDir.empty()) std::cout << (count == 1 ? docs[0] : docs).dump(2) << "\n";
    return 0;
}

int cmd_grade(const std::string& itemArg, const std::string& answer)
{
    const std::string text = (!itemArg.empty() && itemArg.front() == '{') ? itemArg : read_file(itemArg);
    const GeneratedItem g = item_from_document(json::parse(text));
    const GradingKey key = grading_key(g.item, g.viewport);
    try {
        const Rational value = parse_answer(answer).value;
        json out = grade_result_json(key, grade(value, key.interval));
        out["answer"] = rational_json(value);
        out["feedback"] = render_feedback_text(build_feedback_plan(g.item, g.viewport, key.interval));
        std::cout << out.dump(2) << "\n";
        return 0;
    } catch (const ParseError& e) {
        std::cout << json{{"error", parse_error_json(e)}}.dump(2) << "\n";
        return 2;
    }
}

int cmd_parse(const std::string& text)
{
    const json out = parse_result_json(text);
    std::cout << out.dump(2) << "\n";
    return out.contains("error") ? 2 : 0;
}

struct SimulateArgs {
    std::string agent = "estimator";
    std::string version = "decimal";
    int n = 10000;
    double sigma = kDefaultPixelSigma;
    double snap = -1;  // negative: agent default
    std::uint64_t seed = 0;
    int spread = kDefaultMinSpread;
    unsigned threads = 1;
    std::string out;
};

int cmd_simulate(const SimulateArgs& a)
{
    SimConfig cfg;
    const auto agent = parse_agent(a.agent);
    const auto version = parse_version(a.version);
    if (!agent) throw CLI::ValidationError("--agent", "must be estimator or calculator");
    if (!version) throw CLI::ValidationError("--version", "must be integer or decimal");
    cfg.agent = *agent;
    cfg.version = *version;
    cfg.nItems = a.n;
    cfg.noise = default_noise(cfg.agent, cfg.version);
    cfg.noise.pixelSigma = a.sigma;
    if (a.snap >= 0) {
        cfg.noise.integerSnap = a.snap > 0;
        cfg.noise.snapProbability = a.snap;
    }
    cfg.seed = a.seed;
    cfg.minSpread = a.spread;
    cfg.threads = a.threads;
    const SimResult res = run_simulation(cfg);
    const json doc = simulation_json(cfg, res);
    if (!a.out.empty()) write_file(a.out, doc.dump(2) + "\n");
    std::cout << json{{"agent", a.agent}, {"version", a.version}, {"n", a.n}, {"correct", res.correct}, {"accuracy", res.accuracy.to_double()}}.dump()
              << "\n";
    return 0;
}

int cmd_serve(int port, const std::string& dataFlag, const std::string& host, int maxAttempts)
{
    const fs::path dir = resolve_data_dir(dataFlag);
    EventStore store(dir);
    ServiceOptions opts;
    opts.maxAttempts = maxAttempts;
    SessionService service(store, opts);
    httplib::Server server;
    register_routes(server, service);
    std::cerr << "graphgrade: serving on http://" << host << ":" << port << " (data: " << dir.string() << ")\n";
    if (!server.listen(host, port)) {
        std::cerr << "graphgrade: cannot listen on " << host << ":" << port << "\n";
        return 1;
    }
    return 0;
}

void print_table(const std::string& table, const std::vector<StatRecord>& records)
{
    char line[160];
    if (table == "strategy") {
        for (const auto& c : strategy_table(records)) {
            std::snprintf(line, sizeof line, "%-8s attempt %d  %-20s %4d/%-4d %6.1f%%\n", std::string(to_string(c.version)).c_str(), c.attempt,
                          std::string(to_string(c.label)).c_str(), c.count, c.total, c.percent);
            std::cout << line;
        }
    } else if (table == "contingency") {
        for (const auto& c : contingency_matrix(records)) {
            std::snprintf(line, sizeof line, "attempt1 %-20s -> attempt2 %-20s %4d/%-4d %6.1f%%\n", std::string(to_string(c.first)).c_str(),
                          std::string(to_string(c.second)).c_str(), c.count, c.total, c.percent);
            std::cout << line;
        }
    } else {
        for (const auto& c : effectiveness_table(records)) {
            std::snprintf(line, sizeof line, "%-8s %-20s %4d/%-4d correct %6.2f%%\n", std::string(to_string(c.version)).c_str(),
                          std::string(to_string(c.label)).c_str(), c.correct, c.total, c.percent);
            std::cout << line;
        }
    }
}

int cmd_stats(const std::string& dataFlag, const std::string& table, const std::string& recordsCsv, bool asJson)
{
    std::vector<StatRecord> records;
    if (!recordsCsv.empty()) {
        records = import_records_csv(read_file(recordsCsv));
    } else {
        EventStore store(resolve_data_dir(dataFlag));
        records = records_from_sessions(fold_sessions(store.snapshot()));
    }
    if (asJson) {
        json out;
        if (table == "strategy") out = to_json(strategy_table(records));
        else if (table == "contingency") out = to_json(contingency_matrix(records));
        else out = to_json(effectiveness_table(records));
        std::cout << out.dump(2) << "\n";
    } else {
        print_table(table, records);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"graphgrade: graph-reading items, tolerance grading and feedback"};
    app.require_subcommand(1);

    std::string version = "integer";
    std::uint64_t seed = 0;
    int count = 1;
    std::string format = "json";
    std::string outDir;
    auto* gen = app.add_subcommand("generate", "Generate items as JSON and/or SVG");
    gen->add_option("--version", version, "integer or decimal")->check(CLI::IsMember({"integer", "decimal"}))->required();
    gen->add_option("--seed", seed, "Seed of the first item")->required();
    gen->add_option("--count", count, "Number of items (consecutive seeds)");
    gen->add_option("--format", format, "json, svg or both")->check(CLI::IsMember({"json", "svg", "both"}));
    gen->add_option("--out-dir", outDir, "Write one file per item instead of stdout");

    std::string itemArg, answer;
    auto* gradeCmd = app.add_subcommand("grade", "Grade one answer against an item");
    gradeCmd->add_option("--item", itemArg, "Item JSON text or path to an item JSON file")->required();
    gradeCmd->add_option("--answer", answer, "Answer text")->required();

    std::string parseText;
    auto* parseCmd = app.add_subcommand("parse", "Parse an answer to an exact rational");
    parseCmd->add_option("--text", parseText, "Answer text")->required();

    SimulateArgs sim;
    auto* simCmd = app.add_subcommand("simulate", "Monte Carlo run of a solving strategy");
    simCmd->add_option("--agent", sim.agent)->check(CLI::IsMember({"estimator", "calculator"}))->required();
    simCmd->add_option("--version", sim.version)->check(CLI::IsMember({"integer", "decimal"}))->required();
    simCmd->add_option("-n", sim.n, "Number of items")->check(CLI::PositiveNumber);
    simCmd->add_option("--sigma", sim.sigma, "Reading noise in pixels")->check(CLI::NonNegativeNumber);
    simCmd->add_option("--snap", sim.snap, "Integer-snap probability in [0,1] (default: per agent)")->check(CLI::Range(0.0, 1.0));
    simCmd->add_option("--seed", sim.seed);
    simCmd->add_option("--spread", sim.spread, "Minimum abscissa separation for the calculator")->check(CLI::PositiveNumber);
    simCmd->add_option("--threads", sim.threads)->check(CLI::PositiveNumber);
    simCmd->add_option("--out", sim.out, "Write per-item results JSON here");

    int port = 8080;
    std::string dataDir, host = "127.0.0.1";
    int maxAttempts = kDefaultMaxAttempts;
    auto* serve = app.add_subcommand("serve", "Run the session HTTP service");
    serve->add_option("--port", port)->check(CLI::Range(1, 65535));
    serve->add_option("--data", dataDir, std::string("Data directory (default $") + kDataDirEnv + " or ./data)");
    serve->add_option("--host", host);
    serve->add_option("--max-attempts", maxAttempts)->check(CLI::PositiveNumber);

    std::string table = "strategy", recordsCsv;
    bool statsJson = false;
    auto* stats = app.add_subcommand("stats", "Print a statistics table from the event log or a CSV");
    stats->add_option("--data", dataDir, std::string("Data directory (default $") + kDataDirEnv + " or ./data)");
    stats->add_option("--table", table)->check(CLI::IsMember({"strategy", "contingency", "effectiveness"}));
    stats->add_option("--records", recordsCsv, "CSV of externally coded records instead of the event log");
    stats->add_flag("--json", statsJson);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_generate(version, seed, count, format, outDir);
        if (*gradeCmd) return cmd_grade(itemArg, answer);
        if (*parseCmd) return cmd_parse(parseText);
        if (*simCmd) return cmd_simulate(sim);
        if (*serve) return cmd_serve(port, dataDir, host, maxAttempts);
        if (*stats) return cmd_stats(dataDir, table, recordsCsv, statsJson);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "graphgrade: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
