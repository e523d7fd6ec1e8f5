#pragma once

// Desk-scale classifiers over token identifiers: a multinomial naive Bayes
// sentiment model and an averaged perceptron NER tagger with a +-1 token
// window. Both consume identifiers only, so swapping the tokenizer at
// prediction time is the single varying factor across experiments.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dotless/corpus.hpp"

namespace dotless {

using TokenIds = std::vector<std::int32_t>;

// ---------------------------------------------------------------------------
// Deterministic RNG (identical sequences on every platform)

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // uniform in [0, bound)
    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

template <typename T>
inline void deterministic_shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[rng.below(i)]);
}

// ---------------------------------------------------------------------------
// Sentiment: multinomial naive Bayes with add-one smoothing

class NaiveBayesSentiment {
public:
    struct Example {
        TokenIds ids;
        Sentiment label;
    };

    static NaiveBayesSentiment train(std::span<const Example> examples) {
        if (examples.empty())
            throw std::invalid_argument("naive Bayes: empty training set");
        NaiveBayesSentiment model;
        std::array<std::uint64_t, 3> doc_counts{};
        std::array<std::uint64_t, 3> token_totals{};
        std::array<std::map<std::int32_t, std::uint64_t>, 3> token_counts;
        for (const auto& ex : examples) {
            auto c = static_cast<std::size_t>(ex.label);
            ++doc_counts[c];
            for (std::int32_t id : ex.ids) {
                ++token_counts[c][id];
                ++token_totals[c];
            }
        }
        std::size_t feature_space = 0;
        {
            std::map<std::int32_t, bool> seen;
            for (const auto& per_class : token_counts)
                for (const auto& [id, c] : per_class) seen[id] = true;
            feature_space = seen.size() + 1;  // +1 leaves mass for unseen ids
        }
        for (std::size_t c = 0; c < 3; ++c) {
            model.log_prior_[c] =
                std::log(static_cast<double>(doc_counts[c] + 1) /
                         static_cast<double>(examples.size() + 3));
            double denom = static_cast<double>(token_totals[c] + feature_space);
            model.unseen_log_[c] = std::log(1.0 / denom);
            for (const auto& [id, count] : token_counts[c])
                model.log_likelihood_[c][id] =
                    std::log(static_cast<double>(count + 1) / denom);
        }
        return model;
    }

    Sentiment predict(std::span<const std::int32_t> ids) const {
        double best = -std::numeric_limits<double>::infinity();
        Sentiment best_label = Sentiment::Positive;
        for (std::size_t c = 0; c < 3; ++c) {
            double score = log_prior_[c];
            for (std::int32_t id : ids) {
                auto it = log_likelihood_[c].find(id);
                score += it == log_likelihood_[c].end() ? unseen_log_[c] : it->second;
            }
            if (score > best) {
                best = score;
                best_label = static_cast<Sentiment>(c);
            }
        }
        return best_label;
    }

    bool operator==(const NaiveBayesSentiment& other) const {
        return log_prior_ == other.log_prior_ && unseen_log_ == other.unseen_log_ &&
               log_likelihood_ == other.log_likelihood_;
    }

private:
    std::array<double, 3> log_prior_{};
    std::array<double, 3> unseen_log_{};
    std::array<std::map<std::int32_t, double>, 3> log_likelihood_;
};

// ---------------------------------------------------------------------------
// NER: averaged perceptron over (slot, token id) features

class AveragedPerceptronNer {
public:
    struct Sentence {
        TokenIds ids;                    // one id per word
        std::vector<std::string> tags;   // aligned BIO tags
    };

    static AveragedPerceptronNer train(std::span<const Sentence> sentences,
                                       std::uint64_t seed, std::size_t epochs = 5) {
        if (sentences.empty())
            throw std::invalid_argument("perceptron: empty training set");
        AveragedPerceptronNer model;
        {
            std::map<std::string, bool> seen;
            for (const auto& s : sentences) {
                if (s.ids.size() != s.tags.size())
                    throw std::invalid_argument("perceptron: ids/tags length mismatch");
                for (const auto& t : s.tags) seen[t] = true;
            }
            for (const auto& [tag, b] : seen) model.tags_.push_back(tag);
        }
        std::size_t n_tags = model.tags_.size();
        std::vector<std::unordered_map<std::uint64_t, double>> weights(n_tags);
        std::vector<std::unordered_map<std::uint64_t, double>> totals(n_tags);
        std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> stamps(n_tags);
        std::uint64_t now = 0;

        auto bump = [&](std::size_t tag, std::uint64_t feat, double delta) {
            auto& w = weights[tag][feat];
            auto& total = totals[tag][feat];
            auto& stamp = stamps[tag][feat];
            total += static_cast<double>(now - stamp) * w;
            stamp = now;
            w += delta;
        };

        std::vector<std::size_t> order(sentences.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        SplitMix64 rng(seed);
        std::vector<std::uint64_t> feats;
        for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
            deterministic_shuffle(order, rng);
            for (std::size_t idx : order) {
                const auto& s = sentences[idx];
                for (std::size_t i = 0; i < s.ids.size(); ++i) {
                    ++now;
                    features(s.ids, i, feats);
                    std::size_t predicted = argmax(weights, feats, model.tags_);
                    std::size_t gold = model.tag_index(s.tags[i]);
                    if (predicted != gold) {
                        for (std::uint64_t f : feats) {
                            bump(gold, f, 1.0);
                            bump(predicted, f, -1.0);
                        }
                    }
                }
            }
        }
        ++now;
        model.weights_.resize(n_tags);
        for (std::size_t t = 0; t < n_tags; ++t)
            for (auto& [feat, w] : weights[t]) {
                double total = totals[t][feat] +
                               static_cast<double>(now - stamps[t][feat]) * w;
                if (total != 0.0) model.weights_[t][feat] = total;
            }
        return model;
    }

    std::vector<std::string> predict(std::span<const std::int32_t> ids) const {
        std::vector<std::string> out;
        out.reserve(ids.size());
        std::vector<std::uint64_t> feats;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            features(ids, i, feats);
            out.push_back(tags_[argmax(weights_, feats, tags_)]);
        }
        return out;
    }

    const std::vector<std::string>& tags() const { return tags_; }

    bool operator==(const AveragedPerceptronNer& other) const {
        if (tags_ != other.tags_ || weights_.size() != other.weights_.size()) return false;
        for (std::size_t t = 0; t < weights_.size(); ++t) {
            std::map<std::uint64_t, double> a(weights_[t].begin(), weights_[t].end());
            std::map<std::uint64_t, double> b(other.weights_[t].begin(),
                                              other.weights_[t].end());
            if (a != b) return false;
        }
        return true;
    }

private:
    static constexpr std::int64_t kBoundaryId = -2;  // virtual token past the ends

    static void features(std::span<const std::int32_t> ids, std::size_t i,
                         std::vector<std::uint64_t>& out) {
        out.clear();
        auto at = [&](std::ptrdiff_t p) -> std::int64_t {
            if (p < 0 || p >= static_cast<std::ptrdiff_t>(ids.size())) return kBoundaryId;
            return ids[static_cast<std::size_t>(p)];
        };
        auto pos = static_cast<std::ptrdiff_t>(i);
        out.push_back(pack(0, at(pos - 1)));
        out.push_back(pack(1, at(pos)));
        out.push_back(pack(2, at(pos + 1)));
        out.push_back(pack(3, 0));  // bias
    }

    static std::uint64_t pack(std::uint32_t slot, std::int64_t id) {
        return (static_cast<std::uint64_t>(slot) << 40) ^
               (static_cast<std::uint64_t>(id + 3) & 0xFFFFFFFFFFull);
    }

    template <typename WeightTables>
    static std::size_t argmax(const WeightTables& weights,
                              std::span<const std::uint64_t> feats,
                              const std::vector<std::string>& tags) {
        std::size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < tags.size(); ++t) {
            double score = 0.0;
            for (std::uint64_t f : feats) {
                auto it = weights[t].find(f);
                if (it != weights[t].end()) score += it->second;
            }
            if (score > best_score) {
                best_score = score;
                best = t;
            }
        }
        return best;
    }

    std::size_t tag_index(const std::string& tag) const {
        auto it = std::lower_bound(tags_.begin(), tags_.end(), tag);
        return static_cast<std::size_t>(it - tags_.begin());
    }

    std::vector<std::string> tags_;  // sorted
    std::vector<std::unordered_map<std::uint64_t, double>> weights_;
};

}  // namespace dotless
