#pragma once

// Corpus handling: tweet-style text cleaning, parallel (undotted, dotted)
// pair generation, and loaders for the sentiment and NER dataset formats.

#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dotless/undot.hpp"
#include "dotless/unicode.hpp"

namespace dotless {

namespace detail {

inline bool is_ascii_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
}

inline bool is_removed_token(std::string_view tok) {
    if (tok.starts_with("http://") || tok.starts_with("https://") ||
        tok.starts_with("www."))
        return true;
    if (tok.size() >= 2 && tok[0] == '@' && is_ascii_word_char(tok[1])) return true;
    if (tok.size() >= 2 && tok[0] == '#') return true;
    return false;
}

}  // namespace detail

// Drops URL, @mention and #hashtag tokens whole, then collapses runs of
// whitespace to single spaces and trims the ends.
inline std::string clean_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) break;
        std::string_view tok = text.substr(start, i - start);
        if (detail::is_removed_token(tok)) continue;
        if (!out.empty()) out.push_back(' ');
        out.append(tok);
    }
    return out;
}

struct ParallelPair {
    std::string undotted;
    std::string dotted;
    bool operator==(const ParallelPair&) const = default;
};

// Cleans each line, drops lines that clean to nothing, and pairs the rest
// with their undotted version.
inline std::vector<ParallelPair> make_parallel(std::span<const std::string> lines) {
    std::vector<ParallelPair> pairs;
    pairs.reserve(lines.size());
    for (const std::string& line : lines) {
        std::string cleaned = clean_text(line);
        if (cleaned.empty()) continue;
        pairs.push_back({undot_text(cleaned), std::move(cleaned)});
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// Sentiment dataset: "label<TAB>text", one example per line.

enum class Sentiment { Positive, Negative, Neutral };

inline constexpr std::string_view to_string(Sentiment s) {
    switch (s) {
        case Sentiment::Positive: return "positive";
        case Sentiment::Negative: return "negative";
        default: return "neutral";
    }
}

struct SentimentExample {
    std::string text;
    Sentiment label;
    bool operator==(const SentimentExample&) const = default;
};

inline std::vector<SentimentExample> load_sentiment(std::istream& in) {
    std::vector<SentimentExample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("malformed sentiment record at line " +
                                     std::to_string(line_no) + ": missing tab");
        std::string_view label(line.data(), tab);
        Sentiment s;
        if (label == "positive") s = Sentiment::Positive;
        else if (label == "negative") s = Sentiment::Negative;
        else if (label == "neutral") s = Sentiment::Neutral;
        else
            throw std::runtime_error("malformed sentiment record at line " +
                                     std::to_string(line_no) + ": unknown label '" +
                                     std::string(label) + "'");
        out.push_back({line.substr(tab + 1), s});
    }
    return out;
}

inline void save_sentiment(std::ostream& out, std::span<const SentimentExample> examples) {
    for (const auto& ex : examples)
        out << to_string(ex.label) << '\t' << ex.text << '\n';
}

// ---------------------------------------------------------------------------
// NER dataset: "token tag" per line, blank line between sentences.

struct NerSentence {
    std::vector<std::string> tokens;
    std::vector<std::string> tags;  // BIO over entity classes
    bool operator==(const NerSentence&) const = default;
};

namespace detail {

inline bool valid_entity_class(std::string_view cls) {
    if (cls.empty()) return false;
    for (char c : cls)
        if (!is_ascii_word_char(c)) return false;
    return true;
}

}  // namespace detail

// Strict loading enforces BIO consistency (gold data); predicted tag files
// may carry stray I- tags and are loaded with validate_bio = false.
inline std::vector<NerSentence> load_ner(std::istream& in, bool validate_bio = true) {
    std::vector<NerSentence> out;
    NerSentence current;
    std::string line;
    std::size_t line_no = 0;
    auto flush = [&] {
        if (!current.tokens.empty()) out.push_back(std::exchange(current, {}));
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        std::size_t sp = line.rfind(' ');
        if (sp == std::string::npos || sp == 0 || sp + 1 == line.size())
            throw std::runtime_error("malformed NER record at line " +
                                     std::to_string(line_no) + ": expected 'token tag'");
        std::string token = line.substr(0, sp);
        std::string tag = line.substr(sp + 1);
        if (tag != "O") {
            if (tag.size() < 3 || (tag[0] != 'B' && tag[0] != 'I') || tag[1] != '-' ||
                !detail::valid_entity_class(std::string_view(tag).substr(2)))
                throw std::runtime_error("malformed NER record at line " +
                                         std::to_string(line_no) + ": bad tag '" + tag + "'");
            if (validate_bio && tag[0] == 'I') {
                std::string_view cls = std::string_view(tag).substr(2);
                bool continues = false;
                if (!current.tags.empty()) {
                    const std::string& prev = current.tags.back();
                    continues = prev.size() >= 3 && prev[1] == '-' &&
                                std::string_view(prev).substr(2) == cls;
                }
                if (!continues)
                    throw std::runtime_error("malformed NER record at line " +
                                             std::to_string(line_no) + ": tag '" + tag +
                                             "' does not continue an entity");
            }
        }
        current.tokens.push_back(std::move(token));
        current.tags.push_back(std::move(tag));
    }
    flush();
    return out;
}

inline void save_ner(std::ostream& out, std::span<const NerSentence> sentences) {
    for (const auto& s : sentences) {
        for (std::size_t i = 0; i < s.tokens.size(); ++i)
            out << s.tokens[i] << ' ' << s.tags[i] << '\n';
        out << '\n';
    }
}

}  // namespace dotless
