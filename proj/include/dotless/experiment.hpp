#pragma once

// The five-condition experiment: one classifier per task is trained on the
// original (dotted) data with the vanilla tokenizer, then evaluated on
// (1) original text, (2) undotted text, (3) undotted text with the collapsed
// vocabulary, (4) undotted text with the extended vocabulary, and
// (5) restored text from the redotter. Only the test-time text and tokenizer
// vary; the model weights never change.

#include <array>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dotless/classifier.hpp"
#include "dotless/corpus.hpp"
#include "dotless/metrics.hpp"
#include "dotless/redot.hpp"
#include "dotless/undot.hpp"
#include "dotless/vocab.hpp"

namespace dotless {

enum class Condition : std::size_t {
    Original = 0,
    Undotted = 1,
    UndottedVocab = 2,
    ExtendedVocab = 3,
    Redotted = 4,
};

inline constexpr std::array<std::string_view, 5> kConditionNames{
    "original", "undotted", "undotted+undotted-vocab", "undotted+extended-vocab",
    "redotted"};

enum class Task : std::size_t { Sentiment = 0, Ner = 1 };

inline constexpr std::array<std::string_view, 2> kTaskNames{"sentiment", "ner"};

struct EvalReport {
    std::array<std::array<double, 2>, 5> scores{};  // [condition][task]
    std::size_t sentiment_train = 0;
    std::size_t sentiment_test = 0;
    std::size_t ner_train = 0;
    std::size_t ner_test = 0;
    std::uint64_t seed = 0;
    std::string classifier = "naive-bayes+averaged-perceptron";

    double score(Condition c, Task t) const {
        return scores[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
    }
};

struct ExperimentData {
    std::vector<SentimentExample> sentiment_train;
    std::vector<SentimentExample> sentiment_test;
    std::vector<NerSentence> ner_train;
    std::vector<NerSentence> ner_test;
};

namespace detail {

enum class TokenizerKind { Vanilla, Collapsed, Extended };

struct TokenizerSet {
    const SubwordVocab* vanilla;
    const SubwordVocab* collapsed;
    const DualVocab* extended;

    TokenIds ids(std::string_view text, TokenizerKind kind) const {
        std::vector<Token> tokens;
        switch (kind) {
            case TokenizerKind::Vanilla: tokens = tokenize(text, *vanilla); break;
            case TokenizerKind::Collapsed: tokens = tokenize(text, *collapsed); break;
            case TokenizerKind::Extended: tokens = tokenize(text, *extended); break;
        }
        TokenIds out;
        out.reserve(tokens.size());
        for (const auto& t : tokens) out.push_back(t.id);
        return out;
    }

    // Word-level id for NER features: the first subword of the word.
    std::int32_t word_id(const std::string& word, TokenizerKind kind) const {
        TokenIds ids_for_word = ids(word, kind);
        return ids_for_word.empty() ? kNoId : ids_for_word.front();
    }
};

inline double eval_sentiment(const NaiveBayesSentiment& model,
                             std::span<const SentimentExample> test,
                             const TokenizerSet& toks, TokenizerKind kind,
                             bool undot, const RedotModel* redot) {
    std::vector<Sentiment> gold, pred;
    gold.reserve(test.size());
    pred.reserve(test.size());
    for (const auto& ex : test) {
        std::string text = clean_text(ex.text);
        if (undot) text = undot_text(text);
        if (redot) text = redot_sentence(undot_text(text), *redot);
        gold.push_back(ex.label);
        pred.push_back(model.predict(toks.ids(text, kind)));
    }
    return macro_f1_nonneutral(gold, pred);
}

inline double eval_ner(const AveragedPerceptronNer& model,
                       std::span<const NerSentence> test, const TokenizerSet& toks,
                       TokenizerKind kind, bool undot, const RedotModel* redot) {
    std::vector<std::vector<std::string>> gold, pred;
    gold.reserve(test.size());
    pred.reserve(test.size());
    for (const auto& s : test) {
        std::vector<std::string> words = s.tokens;
        if (undot)
            for (std::string& w : words) w = undot_text(w);
        if (redot) {
            // Restore the whole sentence so the decoder sees bigram context;
            // word counts are preserved, keeping tag alignment intact.
            std::string joined;
            for (std::size_t i = 0; i < words.size(); ++i) {
                if (i > 0) joined.push_back(' ');
                joined += undot_text(words[i]);
            }
            words = split_words(redot_sentence(joined, *redot));
        }
        TokenIds ids;
        ids.reserve(words.size());
        for (const std::string& w : words) ids.push_back(toks.word_id(w, kind));
        gold.push_back(s.tags);
        pred.push_back(model.predict(ids));
    }
    return micro_f1_ner(gold, pred);
}

}  // namespace detail

inline EvalReport run_experiment(const ExperimentData& data, const SubwordVocab& vocab,
                                 const RedotModel& redot_model, std::uint64_t seed) {
    if (data.sentiment_train.empty() || data.ner_train.empty())
        throw std::invalid_argument("run_experiment: empty training set");

    auto [collapsed, collision_report] = undot_vocab(vocab);
    DualVocab extended = extend_vocab(vocab);
    detail::TokenizerSet toks{&vocab, &collapsed, &extended};

    // Train once on the original (dotted) data via the vanilla tokenizer.
    std::vector<NaiveBayesSentiment::Example> sentiment_train;
    sentiment_train.reserve(data.sentiment_train.size());
    for (const auto& ex : data.sentiment_train)
        sentiment_train.push_back(
            {toks.ids(clean_text(ex.text), detail::TokenizerKind::Vanilla), ex.label});
    NaiveBayesSentiment nb = NaiveBayesSentiment::train(sentiment_train);

    std::vector<AveragedPerceptronNer::Sentence> ner_train;
    ner_train.reserve(data.ner_train.size());
    for (const auto& s : data.ner_train) {
        AveragedPerceptronNer::Sentence ts;
        for (const std::string& w : s.tokens)
            ts.ids.push_back(toks.word_id(w, detail::TokenizerKind::Vanilla));
        ts.tags = s.tags;
        ner_train.push_back(std::move(ts));
    }
    AveragedPerceptronNer perceptron = AveragedPerceptronNer::train(ner_train, seed);

    EvalReport report;
    report.sentiment_train = data.sentiment_train.size();
    report.sentiment_test = data.sentiment_test.size();
    report.ner_train = data.ner_train.size();
    report.ner_test = data.ner_test.size();
    report.seed = seed;

    using detail::TokenizerKind;
    struct Row {
        Condition condition;
        TokenizerKind kind;
        bool undot;
        bool redot;
    };
    constexpr std::array<Row, 5> rows{{
        {Condition::Original, TokenizerKind::Vanilla, false, false},
        {Condition::Undotted, TokenizerKind::Vanilla, true, false},
        {Condition::UndottedVocab, TokenizerKind::Collapsed, true, false},
        {Condition::ExtendedVocab, TokenizerKind::Extended, true, false},
        {Condition::Redotted, TokenizerKind::Vanilla, false, true},
    }};
    for (const Row& row : rows) {
        const RedotModel* rm = row.redot ? &redot_model : nullptr;
        report.scores[static_cast<std::size_t>(row.condition)]
                     [static_cast<std::size_t>(Task::Sentiment)] =
            detail::eval_sentiment(nb, data.sentiment_test, toks, row.kind, row.undot, rm);
        report.scores[static_cast<std::size_t>(row.condition)]
                     [static_cast<std::size_t>(Task::Ner)] =
            detail::eval_ner(perceptron, data.ner_test, toks, row.kind, row.undot, rm);
    }
    return report;
}

// Tab-separated table mirroring the report rows, preceded by key=value
// metadata lines.
inline void save_report(std::ostream& out, const EvalReport& report) {
    out << "classifier=" << report.classifier << '\n';
    out << "seed=" << report.seed << '\n';
    out << "sentiment_train=" << report.sentiment_train << '\n';
    out << "sentiment_test=" << report.sentiment_test << '\n';
    out << "ner_train=" << report.ner_train << '\n';
    out << "ner_test=" << report.ner_test << '\n';
    out << "condition\tsentiment\tner\n";
    char buf[32];
    for (std::size_t c = 0; c < kConditionNames.size(); ++c) {
        out << kConditionNames[c];
        for (std::size_t t = 0; t < kTaskNames.size(); ++t) {
            std::snprintf(buf, sizeof buf, "%.4f", report.scores[c][t]);
            out << '\t' << buf;
        }
        out << '\n';
    }
}

}  // namespace dotless
