#include "scope/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace scope {

namespace {

double ratio(std::size_t num, std::size_t den, bool& zero_division) {
    if (den == 0) {
        zero_division = true;
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string metric_cell(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f (%3ld%%)", value, std::lround(value * 100.0));
    return buf;
}

}  // namespace

ClassificationReport classification_metrics(std::span<const Label> gold,
                                            std::span<const Label> predicted) {
    if (gold.empty()) throw std::invalid_argument("empty label vectors");
    if (gold.size() != predicted.size())
        throw std::invalid_argument("gold and predicted label vectors differ in length");

    ClassificationReport report;
    report.total = gold.size();
    for (std::size_t i = 0; i < gold.size(); ++i)
        ++report.confusion[static_cast<std::size_t>(to_int(gold[i]))]
                          [static_cast<std::size_t>(to_int(predicted[i]))];

    report.accuracy = static_cast<double>(report.confusion[0][0] + report.confusion[1][1]) /
                      static_cast<double>(report.total);

    for (std::size_t c = 0; c < 2; ++c) {
        ClassMetrics& m = report.per_class[c];
        const std::size_t tp = report.confusion[c][c];
        const std::size_t fp = report.confusion[1 - c][c];
        const std::size_t fn = report.confusion[c][1 - c];
        m.support = report.confusion[c][0] + report.confusion[c][1];
        m.precision = ratio(tp, tp + fp, m.zero_division);
        m.recall = ratio(tp, tp + fn, m.zero_division);
        if (m.precision + m.recall > 0.0) {
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        } else {
            m.f1 = 0.0;
            m.zero_division = true;
        }
        report.macro_precision += m.precision / 2.0;
        report.macro_recall += m.recall / 2.0;
        report.macro_f1 += m.f1 / 2.0;
        const double weight = static_cast<double>(m.support) / static_cast<double>(report.total);
        report.weighted_precision += weight * m.precision;
        report.weighted_recall += weight * m.recall;
        report.weighted_f1 += weight * m.f1;
    }
    return report;
}

std::string format_report(const ClassificationReport& report) {
    std::string out;
    const auto row = [&](std::string_view name, double p, double r, double f1,
                         std::size_t support, bool flagged) {
        out += name;
        out.append(name.size() < 24 ? 24 - name.size() : 1, ' ');
        out += "precision " + metric_cell(p) + "  recall " + metric_cell(r) + "  f1 " +
               metric_cell(f1) + "  support " + std::to_string(support);
        if (flagged) out += "  [zero-division]";
        out += '\n';
    };
    row("non-vulnerable (0)", report.per_class[0].precision, report.per_class[0].recall,
        report.per_class[0].f1, report.per_class[0].support, report.per_class[0].zero_division);
    row("vulnerable (1)", report.per_class[1].precision, report.per_class[1].recall,
        report.per_class[1].f1, report.per_class[1].support, report.per_class[1].zero_division);
    row("macro avg", report.macro_precision, report.macro_recall, report.macro_f1, report.total,
        false);
    row("weighted avg", report.weighted_precision, report.weighted_recall, report.weighted_f1,
        report.total, false);
    out += "accuracy                " + metric_cell(report.accuracy) + "  total " +
           std::to_string(report.total) + '\n';
    return out;
}

}  // namespace scope
