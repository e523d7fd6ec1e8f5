// dotless: undotting, vocabulary surgery, dot restoration, and the
// five-condition evaluation pipeline as one command-line tool.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dotless/corpus.hpp"
#include "dotless/experiment.hpp"
#include "dotless/metrics.hpp"
#include "dotless/redot.hpp"
#include "dotless/undot.hpp"
#include "dotless/vocab.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

// Line-by-line stream transform with bounded memory. The callback returns
// the output line, or nothing to drop the line entirely.
template <typename Fn>
void transform_lines(const std::string& in_path, const std::string& out_path, Fn fn) {
    std::ifstream in_file;
    std::ofstream out_file;
    std::istream* in = &std::cin;
    std::ostream* out = &std::cout;
    if (!in_path.empty()) {
        in_file = open_input(in_path);
        in = &in_file;
    }
    if (!out_path.empty()) {
        out_file = open_output(out_path);
        out = &out_file;
    }
    std::string line;
    while (std::getline(*in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::optional<std::string> result = fn(line);
        if (result) *out << *result << '\n';
    }
}

dotless::SubwordVocab load_vocab_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return dotless::SubwordVocab::load(in);
}

dotless::RedotModel load_model_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return dotless::load_redot_model(in);
}

void print_fraction(std::ostream& out, const char* key, double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
    out << key << '=' << buf << "%\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toolkit for undotted (dotless) Arabic text"};
    app.require_subcommand(1);

    std::string in_path, out_path, vocab_path, model_path, report_path, corpus_path;
    std::uint64_t min_count = 1;
    std::uint64_t seed = kDefaultSeed;
    bool dump_map = false;
    bool dual = false;
    std::string task, gold_path, pred_path;
    std::string sent_train, sent_test, ner_train, ner_test;

    auto* undot = app.add_subcommand("undot", "Remove consonantal dots from text");
    undot->add_option("--in", in_path, "Input file (default: stdin)");
    undot->add_option("--out", out_path, "Output file (default: stdout)");
    undot->add_flag("--dump-map", dump_map, "Print the character map and exit");

    auto* redot = app.add_subcommand("redot", "Restore dots using a trained model");
    redot->add_option("--model", model_path, "Model file")->required();
    redot->add_option("--in", in_path, "Input file (default: stdin)");
    redot->add_option("--out", out_path, "Output file (default: stdout)");

    auto* clean = app.add_subcommand("clean", "Strip URLs, mentions and hashtags");
    clean->add_option("--in", in_path, "Input file (default: stdin)");
    clean->add_option("--out", out_path, "Output file (default: stdout)");

    auto* parallel = app.add_subcommand("make-parallel",
                                        "Clean lines and pair them with their undotted form");
    parallel->add_option("--in", in_path, "Input file (default: stdin)");
    parallel->add_option("--out", out_path, "Output file (default: stdout)");

    auto* train = app.add_subcommand("train-redotter", "Build a dot-restoration model");
    train->add_option("--corpus", corpus_path, "Dotted corpus, one sentence per line")
        ->required();
    train->add_option("--out", out_path, "Model output file")->required();
    train->add_option("--min-count", min_count, "Minimum word count kept in the dictionary")
        ->default_val(1);

    auto* info = app.add_subcommand("model-info", "Print model section sizes");
    info->add_option("--model", model_path, "Model file")->required();

    auto* vundot = app.add_subcommand("vocab-undot", "Collapse a vocabulary onto undotted forms");
    vundot->add_option("--vocab", vocab_path, "Vocabulary, one token per line")->required();
    vundot->add_option("--out", out_path, "Collapsed token<TAB>id mapping")->required();
    vundot->add_option("--report", report_path, "Collision report")->required();

    auto* vextend = app.add_subcommand("vocab-extend", "Add undotted aliases to a vocabulary");
    vextend->add_option("--vocab", vocab_path, "Vocabulary, one token per line")->required();
    vextend->add_option("--out", out_path, "token<TAB>id mapping, originals then additions")
        ->required();

    auto* vstats = app.add_subcommand("vocab-stats", "Collision and extension statistics");
    vstats->add_option("--vocab", vocab_path, "Vocabulary, one token per line")->required();

    auto* tok = app.add_subcommand("tokenize", "Greedy subword tokenization");
    tok->add_option("--vocab", vocab_path, "Vocabulary, one token per line")->required();
    tok->add_flag("--dual", dual, "Use the extended (dual-mapped) vocabulary");
    tok->add_option("--in", in_path, "Input file (default: stdin)");

    auto* eval = app.add_subcommand("eval", "Score predictions against a gold dataset");
    eval->add_option("--task", task, "sentiment or ner")->required();
    eval->add_option("--gold", gold_path, "Gold dataset file")->required();
    eval->add_option("--pred", pred_path,
                     "Predictions: one label per line (sentiment) or the NER file format")
        ->required();

    auto* experiment = app.add_subcommand("experiment", "Run the five-condition evaluation");
    experiment->add_option("--sentiment-train", sent_train)->required();
    experiment->add_option("--sentiment-test", sent_test)->required();
    experiment->add_option("--ner-train", ner_train)->required();
    experiment->add_option("--ner-test", ner_test)->required();
    experiment->add_option("--vocab", vocab_path, "Vanilla vocabulary")->required();
    experiment->add_option("--redot-model", model_path, "Trained redot model")->required();
    experiment->add_option("--seed", seed)->default_val(kDefaultSeed);
    experiment->add_option("--out", out_path, "Report file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*undot) {
            if (dump_map) {
                std::cout << dotless::undot_map_table();
                return 0;
            }
            transform_lines(in_path, out_path, [](const std::string& line) {
                return std::optional(dotless::undot_text(line));
            });
        } else if (*redot) {
            dotless::RedotModel model = load_model_file(model_path);
            transform_lines(in_path, out_path, [&](const std::string& line) {
                return std::optional(dotless::redot_sentence(line, model));
            });
        } else if (*clean) {
            transform_lines(in_path, out_path, [](const std::string& line) {
                return std::optional(dotless::clean_text(line));
            });
        } else if (*parallel) {
            transform_lines(in_path, out_path,
                            [](const std::string& line) -> std::optional<std::string> {
                std::string cleaned = dotless::clean_text(line);
                if (cleaned.empty()) return std::nullopt;
                return dotless::undot_text(cleaned) + '\t' + cleaned;
            });
        } else if (*train) {
            std::vector<std::string> sentences;
            {
                std::ifstream in = open_input(corpus_path);
                std::string line;
                while (std::getline(in, line)) {
                    if (!line.empty() && line.back() == '\r') line.pop_back();
                    sentences.push_back(line);
                }
            }
            dotless::RedotModel model = dotless::build_redot_model(sentences, min_count);
            std::ofstream out = open_output(out_path);
            dotless::save_redot_model(out, model);
        } else if (*info) {
            dotless::RedotModelInfo mi = dotless::redot_model_info(load_model_file(model_path));
            std::cout << "version=" << mi.version_tag << '\n'
                      << "dictionary_entries=" << mi.dictionary_entries << '\n'
                      << "bigram_entries=" << mi.bigram_entries << '\n'
                      << "fallback_entries=" << mi.fallback_entries << '\n'
                      << "total_tokens=" << mi.total_tokens << '\n'
                      << "sentence_count=" << mi.sentence_count << '\n';
        } else if (*vundot) {
            dotless::SubwordVocab vocab = load_vocab_file(vocab_path);
            auto [collapsed, rep] = dotless::undot_vocab(vocab);
            {
                std::ofstream out = open_output(out_path);
                dotless::save_vocab_mapping(out, collapsed);
            }
            std::ofstream report = open_output(report_path);
            report << "original_size=" << vocab.id_count() << '\n'
                   << "surviving_size=" << rep.surviving_vocab_size << '\n'
                   << "collisions=" << rep.collision_count << '\n';
            print_fraction(report, "collision_fraction", rep.collision_fraction);
            for (const auto& g : rep.collided_groups) {
                report << g.undotted;
                for (const auto& t : g.originals) report << '\t' << t;
                report << '\n';
            }
        } else if (*vextend) {
            dotless::DualVocab extended = dotless::extend_vocab(load_vocab_file(vocab_path));
            std::ofstream out = open_output(out_path);
            extended.save(out);
        } else if (*vstats) {
            dotless::SubwordVocab vocab = load_vocab_file(vocab_path);
            auto [collapsed, rep] = dotless::undot_vocab(vocab);
            dotless::DualVocab extended = dotless::extend_vocab(vocab);
            std::cout << "vocab_size=" << vocab.id_count() << '\n'
                      << "collisions=" << rep.collision_count << '\n';
            print_fraction(std::cout, "collision_fraction", rep.collision_fraction);
            std::cout << "surviving_size=" << rep.surviving_vocab_size << '\n'
                      << "extension_added=" << extended.added_count() << '\n'
                      << "extension_variants=" << extended.variant_count() << '\n';
            print_fraction(std::cout, "dual_mapped_fraction", extended.dual_mapped_fraction());
        } else if (*tok) {
            dotless::SubwordVocab vocab = load_vocab_file(vocab_path);
            std::unique_ptr<dotless::DualVocab> extended;
            if (dual) extended = std::make_unique<dotless::DualVocab>(dotless::extend_vocab(vocab));
            transform_lines(in_path, out_path, [&](const std::string& line) {
                std::vector<dotless::Token> tokens =
                    extended ? dotless::tokenize(line, *extended) : dotless::tokenize(line, vocab);
                std::string out_line;
                for (std::size_t i = 0; i < tokens.size(); ++i) {
                    if (i > 0) out_line.push_back(' ');
                    out_line += tokens[i].text;
                    out_line.push_back(':');
                    out_line += std::to_string(tokens[i].id);
                }
                return std::optional(std::move(out_line));
            });
        } else if (*eval) {
            char buf[32];
            if (task == "sentiment") {
                std::ifstream gold_in = open_input(gold_path);
                std::vector<dotless::SentimentExample> gold = dotless::load_sentiment(gold_in);
                std::vector<dotless::Sentiment> gold_labels, pred_labels;
                for (const auto& ex : gold) gold_labels.push_back(ex.label);
                std::ifstream pred_in = open_input(pred_path);
                std::string line;
                std::size_t line_no = 0;
                while (std::getline(pred_in, line)) {
                    ++line_no;
                    if (!line.empty() && line.back() == '\r') line.pop_back();
                    if (line.empty()) continue;
                    if (line == "positive") pred_labels.push_back(dotless::Sentiment::Positive);
                    else if (line == "negative") pred_labels.push_back(dotless::Sentiment::Negative);
                    else if (line == "neutral") pred_labels.push_back(dotless::Sentiment::Neutral);
                    else
                        throw std::runtime_error("bad prediction label at line " +
                                                 std::to_string(line_no) + ": '" + line + "'");
                }
                double f1 = dotless::macro_f1_nonneutral(gold_labels, pred_labels);
                std::snprintf(buf, sizeof buf, "%.4f", f1);
                std::cout << "macro_f1_nonneutral=" << buf << '\n';
            } else if (task == "ner") {
                std::ifstream gold_in = open_input(gold_path);
                std::ifstream pred_in = open_input(pred_path);
                std::vector<dotless::NerSentence> gold = dotless::load_ner(gold_in);
                std::vector<dotless::NerSentence> pred =
                    dotless::load_ner(pred_in, /*validate_bio=*/false);
                std::vector<std::vector<std::string>> gold_tags, pred_tags;
                for (const auto& s : gold) gold_tags.push_back(s.tags);
                for (const auto& s : pred) pred_tags.push_back(s.tags);
                double f1 = dotless::micro_f1_ner(gold_tags, pred_tags);
                std::snprintf(buf, sizeof buf, "%.4f", f1);
                std::cout << "micro_f1=" << buf << '\n';
            } else {
                std::cerr << "unknown task: '" << task << "' (expected sentiment or ner)\n";
                return 1;
            }
        } else if (*experiment) {
            dotless::ExperimentData data;
            {
                std::ifstream in = open_input(sent_train);
                data.sentiment_train = dotless::load_sentiment(in);
            }
            {
                std::ifstream in = open_input(sent_test);
                data.sentiment_test = dotless::load_sentiment(in);
            }
            {
                std::ifstream in = open_input(ner_train);
                data.ner_train = dotless::load_ner(in);
            }
            {
                std::ifstream in = open_input(ner_test);
                data.ner_test = dotless::load_ner(in);
            }
            dotless::SubwordVocab vocab = load_vocab_file(vocab_path);
            dotless::RedotModel model = load_model_file(model_path);
            dotless::EvalReport report = dotless::run_experiment(data, vocab, model, seed);
            if (out_path.empty()) {
                dotless::save_report(std::cout, report);
            } else {
                std::ofstream out = open_output(out_path);
                dotless::save_report(out, report);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
