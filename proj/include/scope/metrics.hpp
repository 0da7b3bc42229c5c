#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "scope/corpus.hpp"

namespace scope {

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    // True when a zero denominator forced the conservative value 0.
    bool zero_division = false;
};

struct ClassificationReport {
    double accuracy = 0.0;
    std::array<ClassMetrics, 2> per_class{};  // indexed by label value
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    std::size_t total = 0;
    // confusion[gold][predicted]
    std::array<std::array<std::size_t, 2>, 2> confusion{};
};

/// Binary classification metrics from aligned gold/predicted label vectors.
/// Zero-denominator precision/recall/F1 is 0 and flagged. Throws
/// std::invalid_argument on empty or mismatched input.
ClassificationReport classification_metrics(std::span<const Label> gold,
                                            std::span<const Label> predicted);

/// Four-decimal values plus a rounded-percent column.
std::string format_report(const ClassificationReport& report);

}  // namespace scope
