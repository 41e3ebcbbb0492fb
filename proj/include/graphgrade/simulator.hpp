#pragma once

// Monte Carlo solvers for the two answer strategies.
//
// The estimator reads the image straight off the graph. The calculator reads
// two points, fits the point-slope line and evaluates it at x0. Both see the
// graph through Gaussian pixel noise, optionally snapped to integers.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "graphgrade/grading.hpp"
#include "graphgrade/itemgen.hpp"
#include "graphgrade/random.hpp"

namespace graphgrade {

enum class AgentKind { estimator, calculator };

inline std::string_view to_string(AgentKind a) { return a == AgentKind::estimator ? "estimator" : "calculator"; }

inline std::optional<AgentKind> parse_agent(std::string_view s)
{
    if (s == "estimator") return AgentKind::estimator;
    if (s == "calculator") return AgentKind::calculator;
    return std::nullopt;
}

inline constexpr double kDefaultPixelSigma = 6.0;
inline constexpr int kDefaultMinSpread = 4;
/// Noisy reads are kept to six decimals, like a typed answer.
inline constexpr std::int64_t kReadQuantum = 1'000'000;

struct NoiseModel {
    double pixelSigma = kDefaultPixelSigma;
    bool integerSnap = false;
    double snapProbability = 0.0;

    void validate() const
    {
        if (!(pixelSigma >= 0.0)) throw std::invalid_argument("pixelSigma must be >= 0");
        if (!(snapProbability >= 0.0 && snapProbability <= 1.0)) throw std::invalid_argument("snapProbability must lie in [0, 1]");
    }
};

/// Calculators snap their two reads to integers; estimators report what they see.
inline NoiseModel default_noise(AgentKind agent, VersionKind /*version*/)
{
    NoiseModel n;
    if (agent == AgentKind::calculator) {
        n.integerSnap = true;
        n.snapProbability = 1.0;
    }
    return n;
}

struct SimConfig {
    AgentKind agent = AgentKind::estimator;
    VersionKind version = VersionKind::decimal;
    int nItems = 1;
    NoiseModel noise;
    std::uint64_t seed = 0;
    int minSpread = kDefaultMinSpread;  ///< calculator abscissa separation
    unsigned threads = 1;
};

struct SimItemRecord {
    ItemSpec item;
    Rational trueImage;
    Rational answer;
    Verdict verdict = Verdict::incorrect;
};

struct SimResult {
    Rational accuracy;
    int correct = 0;
    std::vector<SimItemRecord> perItem;
};

/// yTrue plus Gaussian noise of pixelSigma pixels, then an optional integer snap.
template <NoiseSource Rng>
Rational read_value(const Rational& yTrue, const Viewport& vp, const NoiseModel& noise, Rng& rng)
{
    // Both draws are always consumed so that runs with different sigmas share random numbers.
    const double z = rng.normal();
    const double u = rng.unit();
    Rational v = yTrue;
    if (noise.pixelSigma > 0.0) {
        const double unitsPerPx = ((vp.yMax - vp.yMin) / Rational(vp.canvasPx)).to_double();
        v += Rational::from_double_quantized(z * noise.pixelSigma * unitsPerPx, kReadQuantum);
    }
    if (noise.integerSnap && u < noise.snapProbability) v = Rational(v.round_half_up());
    return v;
}

template <NoiseSource Rng>
Rational estimator_answer(const ItemSpec& item, const Viewport& vp, const NoiseModel& noise, Rng& rng)
{
    return read_value(true_image(item), vp, noise, rng);
}

/// Point-slope line through (x1, y1), (x2, y2) evaluated at x0.
inline Rational point_slope_value(int x1, const Rational& y1, int x2, const Rational& y2, const Rational& x0)
{
    if (x1 == x2) throw std::invalid_argument("point_slope_value: abscissas must differ");
    const Rational slope = (y2 - y1) / Rational(x2 - x1);
    return y1 + slope * (x0 - Rational(x1));
}

/// Two integer abscissas in [xMin, xMax] at least minSpread apart.
template <DrawSource Rng>
std::pair<int, int> draw_abscissas(const Viewport& vp, int minSpread, Rng& rng)
{
    const int lo = static_cast<int>(vp.xMin.ceil());
    const int hi = static_cast<int>(vp.xMax.floor());
    if (minSpread < 1 || hi - lo < minSpread) throw std::invalid_argument("draw_abscissas: spread does not fit the viewport");
    const int x1 = [&] {
        int x = rng.uniform_int(lo, hi);
        while (x - lo < minSpread && hi - x < minSpread) x = rng.uniform_int(lo, hi);
        return x;
    }();
    int x2 = rng.uniform_int(lo, hi);
    while (x2 - x1 < minSpread && x1 - x2 < minSpread) x2 = rng.uniform_int(lo, hi);
    return {x1, x2};
}

template <NoiseSource Rng>
Rational calculator_answer(const ItemSpec& item, const Viewport& vp, const NoiseModel& noise, Rng& rng, int minSpread = kDefaultMinSpread)
{
    const auto [x1, x2] = draw_abscissas(vp, minSpread, rng);
    const Rational y1 = read_value(item.coeffs.at(x1), vp, noise, rng);
    const Rational y2 = read_value(item.coeffs.at(x2), vp, noise, rng);
    return point_slope_value(x1, y1, x2, y2, item.x0);
}

namespace detail {

inline SimItemRecord simulate_one(const SimConfig& cfg, int index)
{
    const auto idx = static_cast<std::uint64_t>(index);
    const GeneratedItem g = generate_item(cfg.version, derive_seed(cfg.seed, 1, idx));
    SeededStream rng(derive_seed(cfg.seed, 2, idx));
    SimItemRecord rec;
    rec.item = g.item;
    const GradingKey key = grading_key(g.item, g.viewport);
    rec.trueImage = key.trueImage;
    rec.answer = cfg.agent == AgentKind::estimator ? estimator_answer(g.item, g.viewport, cfg.noise, rng)
                                                   : calculator_answer(g.item, g.viewport, cfg.noise, rng, cfg.minSpread);
    rec.verdict = grade(rec.answer, key.interval);
    return rec;
}

}  // namespace detail

/// Items are seeded per index, so the result does not depend on cfg.threads.
inline SimResult run_simulation(const SimConfig& cfg)
{
    if (cfg.nItems < 1) throw std::invalid_argument("nItems must be >= 1");
    cfg.noise.validate();
    SimResult res;
    res.perItem.resize(static_cast<std::size_t>(cfg.nItems));
    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.nItems)));
    if (workers == 1) {
        for (int i = 0; i < cfg.nItems; ++i) res.perItem[static_cast<std::size_t>(i)] = detail::simulate_one(cfg, i);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int i = static_cast<int>(w); i < cfg.nItems; i += static_cast<int>(workers))
                    res.perItem[static_cast<std::size_t>(i)] = detail::simulate_one(cfg, i);
            });
        }
    }
    for (const auto& r : res.perItem)
        if (r.verdict == Verdict::correct) ++res.correct;
    res.accuracy = Rational(res.correct, cfg.nItems);
    return res;
}

}  // namespace graphgrade
