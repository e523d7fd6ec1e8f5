#pragma once

// Task metrics: macro-averaged F1 over the two non-neutral sentiment labels,
// and entity-level micro F1 for BIO-tagged NER.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dotless/corpus.hpp"

namespace dotless {

// Unweighted mean of the positive-class and negative-class F1. A class with
// an empty denominator contributes 0.
inline double macro_f1_nonneutral(std::span<const Sentiment> gold,
                                  std::span<const Sentiment> pred) {
    if (gold.size() != pred.size())
        throw std::invalid_argument("macro_f1_nonneutral: gold/pred length mismatch");
    if (gold.empty()) throw std::invalid_argument("macro_f1_nonneutral: empty input");
    double sum = 0.0;
    for (Sentiment cls : {Sentiment::Positive, Sentiment::Negative}) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            if (pred[i] == cls && gold[i] == cls) ++tp;
            else if (pred[i] == cls) ++fp;
            else if (gold[i] == cls) ++fn;
        }
        std::size_t denom = 2 * tp + fp + fn;
        sum += denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    }
    return sum / 2.0;
}

struct EntitySpan {
    std::size_t sentence;
    std::string type;
    std::size_t start;  // inclusive token index
    std::size_t end;    // exclusive
    bool operator==(const EntitySpan&) const = default;
};

// Maximal BIO spans. A stray I-tag that does not continue an entity starts a
// new one (predicted sequences need not be well formed).
inline std::vector<EntitySpan> extract_spans(std::span<const std::string> tags,
                                             std::size_t sentence_index = 0) {
    std::vector<EntitySpan> spans;
    std::string open_type;
    std::size_t open_start = 0;
    auto close = [&](std::size_t end) {
        if (!open_type.empty()) {
            spans.push_back({sentence_index, open_type, open_start, end});
            open_type.clear();
        }
    };
    for (std::size_t i = 0; i < tags.size(); ++i) {
        std::string_view tag = tags[i];
        if (tag.size() >= 3 && tag[1] == '-' && (tag[0] == 'B' || tag[0] == 'I')) {
            std::string type(tag.substr(2));
            if (tag[0] == 'B' || type != open_type) {
                close(i);
                open_type = type;
                open_start = i;
            }
        } else {
            close(i);
        }
    }
    close(tags.size());
    return spans;
}

// Entity-level micro F1 across all sentences: a span counts as correct only
// when type and both boundaries match.
inline double micro_f1_ner(std::span<const std::vector<std::string>> gold,
                           std::span<const std::vector<std::string>> pred) {
    if (gold.size() != pred.size())
        throw std::invalid_argument("micro_f1_ner: sentence count mismatch");
    std::vector<EntitySpan> gold_spans, pred_spans;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        if (gold[s].size() != pred[s].size())
            throw std::invalid_argument("micro_f1_ner: tag length mismatch in sentence " +
                                        std::to_string(s));
        for (auto& sp : extract_spans(gold[s], s)) gold_spans.push_back(std::move(sp));
        for (auto& sp : extract_spans(pred[s], s)) pred_spans.push_back(std::move(sp));
    }
    std::size_t correct = 0;
    for (const auto& sp : pred_spans)
        for (const auto& gp : gold_spans)
            if (sp == gp) {
                ++correct;
                break;
            }
    if (pred_spans.empty() || gold_spans.empty()) return 0.0;
    double precision = static_cast<double>(correct) / static_cast<double>(pred_spans.size());
    double recall = static_cast<double>(correct) / static_cast<double>(gold_spans.size());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace dotless
