#include "graphgrade/feedback.hpp"

#include <gtest/gtest.h>

#include "graphgrade/expr.hpp"

using namespace graphgrade;

namespace {

struct Built {
    ItemSpec item;
    Viewport vp;
    GradingKey key;
    FeedbackPlan plan;
};

Built build(Rational m, Rational b, int x0)
{
    Built out;
    out.item = {VersionKind::decimal, {m, b}, x0, 0};
    out.vp = build_viewport(out.item.coeffs);
    out.key = grading_key(out.item, out.vp);
    out.plan = build_feedback_plan(out.item, out.vp, out.key.interval);
    return out;
}

// y = 5x + 3 at x = -6: image -27 on a 10-grid with 33 px cells.
Built coarse_example() { return build(Rational(5), Rational(3), -6); }
// y = 4.2x + 2.6 at x = 6: image 27.8 on a 10-grid with 40 px cells.
Built fine_upper_example() { return build(Rational(42, 10), Rational(26, 10), 6); }
// y = -4x + 1.5 at x = 6: image -22.5.
Built fine_negative_example() { return build(Rational(-4), Rational(3, 2), 6); }

// Pulls "]lo, hi[" out of a feedback sentence and parses both ends.
std::pair<Rational, Rational> interval_in_text(const std::string& text)
{
    const auto open = text.rfind(']');
    const auto close = text.rfind('[');
    const auto comma = text.find(", ", open);
    EXPECT_NE(open, std::string::npos);
    EXPECT_LT(open, comma);
    EXPECT_LT(comma, close);
    return {parse_answer(text.substr(open + 1, comma - open - 1)).value, parse_answer(text.substr(comma + 2, close - comma - 2)).value};
}

}  // namespace

TEST(HalfAndQuarter, Boundaries)
{
    EXPECT_EQ(half_cell_of(Rational(0)), HalfCell::lower);
    EXPECT_EQ(half_cell_of(Rational(49, 100)), HalfCell::lower);
    EXPECT_EQ(half_cell_of(Rational(1, 2)), HalfCell::upper);
    EXPECT_EQ(quarter_of(Rational(0)), QuarterOrdinal::first);
    EXPECT_EQ(quarter_of(Rational(1, 8)), QuarterOrdinal::second);
    EXPECT_EQ(quarter_of(Rational(3, 8)), QuarterOrdinal::fourth);
    EXPECT_EQ(quarter_of(Rational(1, 2)), QuarterOrdinal::first);
    EXPECT_EQ(quarter_of(Rational(78, 100)), QuarterOrdinal::third);
    EXPECT_EQ(quarter_of(Rational(99, 100)), QuarterOrdinal::fourth);
}

TEST(FeedbackPlan, CoarseExample)
{
    const auto e = coarse_example();
    EXPECT_EQ(e.key.k, 4);
    EXPECT_EQ(e.plan.cellLow, Rational(-30));
    EXPECT_EQ(e.plan.r, 1);
    EXPECT_EQ(e.plan.halfCell, HalfCell::lower);
    EXPECT_EQ(e.plan.quarterOrdinal, QuarterOrdinal::none);
    EXPECT_EQ(format_open_interval(e.plan.interval), "]-30, -25[");
}

TEST(FeedbackPlan, FineUpperExample)
{
    const auto e = fine_upper_example();
    EXPECT_EQ(e.key.k, 8);
    EXPECT_EQ(e.plan.trueImage, Rational(278, 10));
    EXPECT_EQ(e.plan.cellLow, Rational(20));
    EXPECT_EQ(e.plan.r, 6);
    EXPECT_EQ(e.plan.halfCell, HalfCell::upper);
    EXPECT_EQ(e.plan.quarterOrdinal, QuarterOrdinal::third);
    EXPECT_EQ(format_open_interval(e.plan.interval), "]26.25, 28.75[");
}

TEST(FeedbackPlan, RejectsForeignInterval)
{
    const auto a = coarse_example();
    const auto b = fine_upper_example();
    EXPECT_THROW(build_feedback_plan(a.item, a.vp, b.key.interval), std::invalid_argument);
}

TEST(FeedbackText, CoarseWording)
{
    EXPECT_EQ(render_feedback_text(coarse_example().plan),
              "Draw a vertical line from x=-6 on the x-axis up to the graph, and from there a horizontal line to the y-axis. "
              "We can observe that the value is between the horizontal line y=-30 and the horizontal line that passes through "
              "the center of the stretch between -30 and -20. "
              "Then we can assure that the image asked is a value within the range ]-30, -25[.");
}

TEST(FeedbackText, FineWording)
{
    EXPECT_EQ(render_feedback_text(fine_negative_example().plan),
              "Draw a vertical line from x=6 on the x-axis up to the graph, and from there a horizontal line to the y-axis. "
              "We can see that its value is between the center and the line y=-20. "
              "As it is close to the center, we can assure that it is within the third quarter of the stretch between -25 and -20. "
              "So, we can assure that the image asked is some value within the interval ]-23.75, -21.25[.");
}

TEST(FeedbackText, CoarsePositionsCoverEveryR)
{
    Built e = coarse_example();
    const char* expected[] = {"very close to the horizontal line y=-30", "between the horizontal line y=-30 and",
                              "close to the horizontal line that passes through the center", "and the horizontal line y=-20.",
                              "very close to the horizontal line y=-20"};
    for (int r = 0; r <= 4; ++r) {
        e.plan.r = r;
        EXPECT_NE(render_feedback_text(e.plan).find(expected[r]), std::string::npos) << r;
    }
}

TEST(FeedbackText, FineReferenceFollowsSlot)
{
    Built e = fine_negative_example();
    e.plan.r = 1;
    EXPECT_NE(render_feedback_text(e.plan).find("close to the line y=-30,"), std::string::npos);
    e.plan.r = 7;
    EXPECT_NE(render_feedback_text(e.plan).find("close to the line y=-20,"), std::string::npos);
    e.plan.r = 2;
    EXPECT_NE(render_feedback_text(e.plan).find("close to the center,"), std::string::npos);
}

// Over generated items: the text quotes the grader's interval, and for fine
// cells the named quarter of the named half contains the image.
TEST(FeedbackProperties, TextAgreesWithGrader)
{
    for (auto v : {VersionKind::integer, VersionKind::decimal})
        for (std::uint64_t seed = 0; seed < 1500; ++seed) {
            const auto g = generate_item(v, seed);
            const auto key = grading_key(g.item, g.viewport);
            const auto plan = build_feedback_plan(g.item, g.viewport, key.interval);
            const std::string text = render_feedback_text(plan);
            ASSERT_NE(text.find(format_open_interval(key.interval)), std::string::npos) << text;
            const auto [lo, hi] = interval_in_text(text);
            ASSERT_EQ(lo, key.interval.lo);
            ASSERT_EQ(hi, key.interval.hi);
            ASSERT_EQ(text.rfind("Draw a vertical line from x=" + std::to_string(g.item.x0) + " ", 0), 0u);
            if (plan.k != 8) {
                ASSERT_EQ(plan.quarterOrdinal, QuarterOrdinal::none);
                continue;
            }
            const Rational eighth = plan.spacing / Rational(8);
            const Rational halfLo = plan.halfCell == HalfCell::lower ? plan.cellLow : plan.cellMid();
            const int q = static_cast<int>(plan.quarterOrdinal);
            ASSERT_LE(halfLo + Rational(q - 1) * eighth, plan.trueImage);
            ASSERT_LT(plan.trueImage, halfLo + Rational(q) * eighth);
        }
}
