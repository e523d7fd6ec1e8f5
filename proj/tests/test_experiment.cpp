#include "dotless/experiment.hpp"

#include <doctest.h>

#include <sstream>
#include <string>

#include "support/synthetic.hpp"

using namespace dotless;

namespace {

ExperimentData small_data(std::uint64_t seed) {
    SplitMix64 rng(seed);
    ExperimentData data;
    data.sentiment_train = synthetic::sentiment_dataset(300, rng);
    data.sentiment_test = synthetic::sentiment_dataset(120, rng);
    data.ner_train = synthetic::ner_dataset(150, rng);
    data.ner_test = synthetic::ner_dataset(60, rng);
    return data;
}

RedotModel small_redot_model(std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::string> corpus = synthetic::redot_corpus(1500, rng);
    for (const auto& ex : synthetic::sentiment_dataset(400, rng)) corpus.push_back(ex.text);
    for (const auto& s : synthetic::ner_dataset(200, rng)) corpus.push_back(synthetic::join(s.tokens));
    return build_redot_model(corpus);
}

}  // namespace

TEST_CASE("report has five conditions by two tasks") {
    ExperimentData data = small_data(1);
    SubwordVocab vocab = synthetic::experiment_vocab();
    RedotModel redot = small_redot_model(2);
    EvalReport report = run_experiment(data, vocab, redot, 42);
    for (std::size_t c = 0; c < 5; ++c)
        for (std::size_t t = 0; t < 2; ++t) {
            CHECK(report.scores[c][t] >= 0.0);
            CHECK(report.scores[c][t] <= 1.0);
        }
    CHECK(report.sentiment_test == data.sentiment_test.size());
    CHECK(report.ner_test == data.ner_test.size());
}

TEST_CASE("undotting degrades and every mitigation recovers") {
    ExperimentData data = small_data(3);
    SubwordVocab vocab = synthetic::experiment_vocab();
    RedotModel redot = small_redot_model(4);
    EvalReport report = run_experiment(data, vocab, redot, 42);
    for (Task task : {Task::Sentiment, Task::Ner}) {
        double original = report.score(Condition::Original, task);
        double undotted = report.score(Condition::Undotted, task);
        CHECK(undotted < original);
        CHECK(report.score(Condition::UndottedVocab, task) > undotted);
        CHECK(report.score(Condition::ExtendedVocab, task) > undotted);
        CHECK(report.score(Condition::Redotted, task) > undotted);
    }
}

TEST_CASE("experiment is seed-deterministic") {
    ExperimentData data = small_data(5);
    SubwordVocab vocab = synthetic::experiment_vocab();
    RedotModel redot = small_redot_model(6);
    EvalReport a = run_experiment(data, vocab, redot, 42);
    EvalReport b = run_experiment(data, vocab, redot, 42);
    CHECK(a.scores == b.scores);
}

TEST_CASE("conditions coincide when no letter is undottable") {
    // text over dot-free words tokenizes identically under all three
    // vocabularies, so conditions 1, 3 and 4 agree exactly
    ExperimentData data;
    SplitMix64 rng(7);
    const std::vector<std::string> stable{"دار", "سلام",
                                          "علم", "وصل",
                                          "الحال", "مال"};
    auto sentence = [&](std::size_t n) {
        std::vector<std::string> words;
        for (std::size_t i = 0; i < n; ++i) words.push_back(synthetic::pick(stable, rng));
        return synthetic::join(words);
    };
    for (int i = 0; i < 150; ++i) {
        auto label = static_cast<Sentiment>(rng.below(3));
        std::string text = sentence(4);
        if (label == Sentiment::Positive) text += " سلام";
        if (label == Sentiment::Negative) text += " مال";
        data.sentiment_train.push_back({text, label});
        if (i < 60) data.sentiment_test.push_back({text, label});
    }
    for (int i = 0; i < 80; ++i) {
        NerSentence s;
        s.tokens = {synthetic::pick(stable, rng), "دار",
                    synthetic::pick(stable, rng)};
        s.tags = {"O", "B-LOC", "O"};
        data.ner_train.push_back(s);
        if (i < 30) data.ner_test.push_back(s);
    }
    std::vector<std::string> vocab_tokens{"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
    for (const auto& w : stable) vocab_tokens.push_back(w);
    SubwordVocab vocab = SubwordVocab::from_tokens(vocab_tokens);
    std::vector<std::string> corpus;
    for (int i = 0; i < 50; ++i) corpus.push_back(sentence(5));
    RedotModel redot = build_redot_model(corpus);

    EvalReport report = run_experiment(data, vocab, redot, 42);
    for (Task task : {Task::Sentiment, Task::Ner}) {
        CHECK(report.score(Condition::Original, task) ==
              report.score(Condition::UndottedVocab, task));
        CHECK(report.score(Condition::Original, task) ==
              report.score(Condition::ExtendedVocab, task));
        CHECK(report.score(Condition::Original, task) ==
              report.score(Condition::Undotted, task));
    }
}

TEST_CASE("report serialization") {
    EvalReport report;
    report.scores[0][0] = 0.75;
    report.scores[1][1] = 0.125;
    report.seed = 42;
    report.sentiment_train = 10;
    std::ostringstream out;
    save_report(out, report);
    std::string text = out.str();
    CHECK(text.find("seed=42\n") != std::string::npos);
    CHECK(text.find("condition\tsentiment\tner\n") != std::string::npos);
    CHECK(text.find("original\t0.7500\t0.0000\n") != std::string::npos);
    CHECK(text.find("undotted\t0.0000\t0.1250\n") != std::string::npos);
    CHECK(text.find("redotted\t") != std::string::npos);
}

TEST_CASE("run_experiment validates inputs") {
    ExperimentData empty;
    SubwordVocab vocab = synthetic::experiment_vocab();
    SplitMix64 rng(8);
    RedotModel redot = build_redot_model(synthetic::redot_corpus(30, rng));
    CHECK_THROWS_AS(run_experiment(empty, vocab, redot, 42), std::invalid_argument);
}
