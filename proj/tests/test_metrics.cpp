#include <doctest.h>

#include <vector>

#include "scope/metrics.hpp"

using scope::classification_metrics;
using scope::Label;

namespace {

std::vector<Label> labels(const std::vector<int>& values) {
    std::vector<Label> out;
    for (const int v : values) out.push_back(scope::label_from_int(v));
    return out;
}

}  // namespace

TEST_CASE("hand-computed confusion matrix") {
    // TP=3, FP=1, FN=1, TN=5 for the positive (vulnerable) class.
    const auto gold = labels({1, 1, 1, 1, 0, 0, 0, 0, 0, 0});
    const auto pred = labels({1, 1, 1, 0, 1, 0, 0, 0, 0, 0});
    const auto r = classification_metrics(gold, pred);

    CHECK(r.total == 10);
    CHECK(r.confusion[1][1] == 3);  // TP
    CHECK(r.confusion[0][1] == 1);  // FP
    CHECK(r.confusion[1][0] == 1);  // FN
    CHECK(r.confusion[0][0] == 5);  // TN

    CHECK(r.accuracy == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(r.per_class[1].precision == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.per_class[1].recall == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.per_class[1].f1 == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.per_class[1].support == 4);
    CHECK(r.per_class[0].precision == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(r.per_class[0].recall == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(r.per_class[0].f1 == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(r.per_class[0].support == 6);

    const double macro = (0.75 + 5.0 / 6.0) / 2.0;
    CHECK(r.macro_precision == doctest::Approx(macro).epsilon(1e-12));
    CHECK(r.macro_recall == doctest::Approx(macro).epsilon(1e-12));
    CHECK(r.macro_f1 == doctest::Approx(macro).epsilon(1e-12));

    const double weighted = (4 * 0.75 + 6 * 5.0 / 6.0) / 10.0;
    CHECK(r.weighted_precision == doctest::Approx(weighted).epsilon(1e-12));
    CHECK(r.weighted_f1 == doctest::Approx(weighted).epsilon(1e-12));
    CHECK(!r.per_class[0].zero_division);
    CHECK(!r.per_class[1].zero_division);
}

TEST_CASE("perfect predictor") {
    const auto gold = labels({1, 0, 1, 0});
    const auto r = classification_metrics(gold, gold);
    CHECK(r.accuracy == doctest::Approx(1.0).epsilon(1e-12));
    for (int c : {0, 1}) {
        CHECK(r.per_class[c].precision == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.per_class[c].recall == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.per_class[c].f1 == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(r.macro_f1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.weighted_f1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant predictor flags zero divisions") {
    const auto gold = labels({1, 1, 0, 0});
    const auto pred = labels({0, 0, 0, 0});
    const auto r = classification_metrics(gold, pred);
    CHECK(r.accuracy == doctest::Approx(0.5).epsilon(1e-12));
    // No predicted positives: precision undefined, reported as 0 + flag.
    CHECK(r.per_class[1].precision == 0.0);
    CHECK(r.per_class[1].recall == 0.0);
    CHECK(r.per_class[1].f1 == 0.0);
    CHECK(r.per_class[1].zero_division);
    CHECK(r.per_class[0].precision == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.per_class[0].recall == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.per_class[0].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(!r.per_class[0].zero_division);
}

TEST_CASE("single-class gold") {
    const auto gold = labels({1, 1, 1});
    const auto pred = labels({1, 1, 0});
    const auto r = classification_metrics(gold, pred);
    // No gold negatives and no predicted... recall of class 0 undefined.
    CHECK(r.per_class[0].support == 0);
    CHECK(r.per_class[0].recall == 0.0);
    CHECK(r.per_class[0].zero_division);
    CHECK(r.per_class[1].recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(static_cast<void>(classification_metrics({}, {})), std::invalid_argument);
    const auto gold = labels({1, 0});
    const auto pred = labels({1});
    CHECK_THROWS_AS(static_cast<void>(classification_metrics(gold, pred)), std::invalid_argument);
}

TEST_CASE("report formatting") {
    const auto gold = labels({1, 1, 1, 1, 0, 0, 0, 0, 0, 0});
    const auto pred = labels({1, 1, 1, 0, 1, 0, 0, 0, 0, 0});
    const auto text = scope::format_report(classification_metrics(gold, pred));

    CHECK(text.find("non-vulnerable (0)") != std::string::npos);
    CHECK(text.find("vulnerable (1)") != std::string::npos);
    CHECK(text.find("macro avg") != std::string::npos);
    CHECK(text.find("weighted avg") != std::string::npos);
    CHECK(text.find("accuracy") != std::string::npos);
    // Four decimals plus rounded percent.
    CHECK(text.find("0.7500") != std::string::npos);
    CHECK(text.find("75%") != std::string::npos);
    CHECK(text.find("0.8000") != std::string::npos);
    CHECK(text.find("80%") != std::string::npos);

    const auto flagged =
        scope::format_report(classification_metrics(labels({1, 1}), labels({0, 0})));
    CHECK(flagged.find("zero-division") != std::string::npos);
}
