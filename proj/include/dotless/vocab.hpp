#pragma once

// Subword vocabularies and the two tokenizer-adaptation strategies:
// collapsing a vocabulary onto undotted forms, and extending it with
// undotted aliases that reuse the original identifiers. A greedy
// longest-prefix tokenizer exercises both against an untouched id space.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dotless/undot.hpp"
#include "dotless/unicode.hpp"

namespace dotless {

inline constexpr std::string_view kContinuationPrefix = "##";
inline constexpr std::string_view kUnknownToken = "[UNK]";
inline constexpr std::size_t kMaxWordCps = 100;
inline constexpr std::int32_t kNoId = -1;

// Bracketed control tokens ([UNK], [CLS], [SEP], [PAD], [MASK], [unusedNN])
// are metadata and are never undotted.
inline bool is_special_token(std::string_view token) {
    return token.size() >= 3 && token.front() == '[' && token.back() == ']';
}

class SubwordVocab {
public:
    SubwordVocab() = default;

    // One token per line, line number = identifier.
    static SubwordVocab load(std::istream& in) {
        SubwordVocab v;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!v.id_of_.emplace(line, static_cast<std::int32_t>(v.tokens_.size())).second)
                throw std::runtime_error("malformed vocabulary: duplicate token at line " +
                                         std::to_string(line_no));
            v.tokens_.push_back(line);
        }
        return v;
    }

    static SubwordVocab from_tokens(std::vector<std::string> tokens) {
        SubwordVocab v;
        v.tokens_ = std::move(tokens);
        for (std::size_t i = 0; i < v.tokens_.size(); ++i)
            if (!v.id_of_.emplace(v.tokens_[i], static_cast<std::int32_t>(i)).second)
                throw std::runtime_error("malformed vocabulary: duplicate token at line " +
                                         std::to_string(i + 1));
        return v;
    }

    // Identifier space size (original line count, even after collapsing).
    std::size_t id_count() const { return tokens_.size(); }
    // Number of distinct token strings.
    std::size_t distinct_tokens() const { return id_of_.size(); }
    bool empty() const { return tokens_.empty(); }

    const std::string& token(std::size_t id) const { return tokens_[id]; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    std::optional<std::int32_t> lookup(std::string_view token) const {
        auto it = id_of_.find(std::string(token));
        return it == id_of_.end() ? std::nullopt : std::optional(it->second);
    }

    std::int32_t unknown_id() const {
        auto id = lookup(kUnknownToken);
        return id ? *id : kNoId;
    }

private:
    friend std::pair<SubwordVocab, struct CollisionReport> undot_vocab(const SubwordVocab&);

    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::int32_t> id_of_;
};

// ---------------------------------------------------------------------------
// Token undotting

inline std::string undot_token(std::string_view token) {
    if (is_special_token(token)) return std::string(token);
    bool continuation = token.substr(0, 2) == kContinuationPrefix;
    std::string_view body = continuation ? token.substr(2) : token;
    std::string out;
    if (continuation) out = kContinuationPrefix;
    out += undot_text(body);
    return out;
}

// Variant with the token-final nun/ya undotted in medial form, for tokens
// that may land mid-word before a continuation token. Empty when the token
// does not end in one of the two letters whose forms differ.
inline std::string undot_token_medial_final(std::string_view token) {
    if (is_special_token(token)) return {};
    bool continuation = token.substr(0, 2) == kContinuationPrefix;
    std::string_view body = continuation ? token.substr(2) : token;
    std::u32string cps = decode_utf8(body);
    if (cps.empty()) return {};
    char32_t last = cps.back();
    if (last != 0x0646 && last != 0x064A) return {};  // nun, ya
    std::string undotted = undot_text(body);
    std::u32string ucps = decode_utf8(undotted);
    ucps.back() = 0x066E;
    std::string out;
    if (continuation) out = kContinuationPrefix;
    out += encode_utf8(ucps);
    return out;
}

// ---------------------------------------------------------------------------
// Vocabulary collapse

struct CollisionGroup {
    std::string undotted;
    std::vector<std::string> originals;  // in identifier order
};

struct CollisionReport {
    std::vector<CollisionGroup> collided_groups;
    std::size_t collision_count = 0;  // identifiers left unused
    double collision_fraction = 0.0;
    std::size_t surviving_vocab_size = 0;
};

// Replaces every token by its undotted form. Colliding tokens keep the
// smallest identifier of their group; the rest become unused.
inline std::pair<SubwordVocab, CollisionReport> undot_vocab(const SubwordVocab& v) {
    SubwordVocab out;
    CollisionReport report;
    out.tokens_.reserve(v.id_count());
    std::unordered_map<std::string, std::vector<std::int32_t>> groups;
    for (std::size_t id = 0; id < v.id_count(); ++id) {
        std::string u = undot_token(v.token(id));
        groups[u].push_back(static_cast<std::int32_t>(id));
        out.tokens_.push_back(std::move(u));
    }
    for (std::size_t id = 0; id < out.tokens_.size(); ++id)
        out.id_of_.emplace(out.tokens_[id], static_cast<std::int32_t>(id));

    for (std::size_t id = 0; id < out.tokens_.size(); ++id) {
        const auto& ids = groups[out.tokens_[id]];
        if (ids.size() < 2 || ids.front() != static_cast<std::int32_t>(id)) continue;
        CollisionGroup g;
        g.undotted = out.tokens_[id];
        for (std::int32_t orig : ids) g.originals.push_back(v.token(static_cast<std::size_t>(orig)));
        report.collided_groups.push_back(std::move(g));
    }
    report.surviving_vocab_size = out.distinct_tokens();
    report.collision_count = v.id_count() - report.surviving_vocab_size;
    report.collision_fraction =
        v.id_count() == 0 ? 0.0
                          : static_cast<double>(report.collision_count) /
                                static_cast<double>(v.id_count());
    return {std::move(out), std::move(report)};
}

// ---------------------------------------------------------------------------
// Vocabulary extension

// Keeps every original (string -> id) pair and adds undotted aliases mapped
// to the identifier of their (smallest-id) original token.
class DualVocab {
public:
    explicit DualVocab(SubwordVocab originals) : originals_(std::move(originals)) {
        for (std::size_t id = 0; id < originals_.id_count(); ++id) {
            const std::string& t = originals_.token(id);
            maybe_add(undot_token(t), static_cast<std::int32_t>(id));
            std::string medial = undot_token_medial_final(t);
            if (!medial.empty()) maybe_add(medial, static_cast<std::int32_t>(id));
        }
        finish();
    }

    const SubwordVocab& originals() const { return originals_; }
    // Added undotted versions; the nun/ya medial-final variants are counted
    // separately so this matches the one-alias-per-token notion.
    std::size_t added_count() const { return added_count_; }
    std::size_t variant_count() const { return additions_.size() - added_count_; }
    double dual_mapped_fraction() const { return dual_mapped_fraction_; }
    const std::vector<std::pair<std::string, std::int32_t>>& additions() const {
        return additions_;
    }

    std::optional<std::int32_t> lookup(std::string_view token) const {
        if (auto id = originals_.lookup(token)) return id;
        auto it = added_id_.find(std::string(token));
        return it == added_id_.end() ? std::nullopt : std::optional(it->second);
    }

    std::int32_t unknown_id() const { return originals_.unknown_id(); }

    // "token<TAB>identifier" lines, originals first, then additions.
    void save(std::ostream& out) const {
        for (std::size_t id = 0; id < originals_.id_count(); ++id)
            out << originals_.token(id) << '\t' << id << '\n';
        for (const auto& [s, id] : additions_) out << s << '\t' << id << '\n';
    }

    // Reloads a saved mapping. The original block is the leading run of
    // lines whose identifier equals the line index; everything after is an
    // addition.
    static DualVocab load(std::istream& in) {
        std::vector<std::string> original_tokens;
        std::vector<std::pair<std::string, std::int32_t>> additions;
        std::string line;
        std::size_t line_no = 0;
        bool in_original_block = true;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::size_t tab = line.rfind('\t');
            if (tab == std::string::npos)
                throw std::runtime_error("malformed vocabulary mapping at line " +
                                         std::to_string(line_no) + ": missing tab");
            std::string token = line.substr(0, tab);
            std::int32_t id = 0;
            for (std::size_t i = tab + 1; i < line.size(); ++i) {
                if (line[i] < '0' || line[i] > '9')
                    throw std::runtime_error("malformed vocabulary mapping at line " +
                                             std::to_string(line_no) + ": bad identifier");
                id = id * 10 + (line[i] - '0');
            }
            if (in_original_block && id == static_cast<std::int32_t>(original_tokens.size())) {
                original_tokens.push_back(std::move(token));
            } else {
                in_original_block = false;
                if (id < 0 || id >= static_cast<std::int32_t>(original_tokens.size()))
                    throw std::runtime_error("malformed vocabulary mapping at line " +
                                             std::to_string(line_no) +
                                             ": identifier outside the original id space");
                additions.emplace_back(std::move(token), id);
            }
        }
        return DualVocab(SubwordVocab::from_tokens(std::move(original_tokens)),
                         std::move(additions));
    }

private:
    DualVocab(SubwordVocab originals, std::vector<std::pair<std::string, std::int32_t>> additions)
        : originals_(std::move(originals)), additions_(std::move(additions)) {
        for (const auto& [s, id] : additions_)
            if (!added_id_.emplace(s, id).second)
                throw std::runtime_error("malformed vocabulary mapping: duplicate addition '" +
                                         s + "'");
        finish();
    }

    void maybe_add(const std::string& alias, std::int32_t id) {
        if (originals_.lookup(alias)) return;
        if (added_id_.contains(alias)) return;
        added_id_.emplace(alias, id);
        additions_.emplace_back(alias, id);
    }

    void finish() {
        std::vector<bool> has_alias(originals_.id_count(), false);
        added_count_ = 0;
        for (const auto& [s, id] : additions_) {
            has_alias[static_cast<std::size_t>(id)] = true;
            if (undot_token(originals_.token(static_cast<std::size_t>(id))) == s)
                ++added_count_;
        }
        std::size_t dual = 0;
        for (bool b : has_alias) dual += b ? 1 : 0;
        dual_mapped_fraction_ =
            originals_.id_count() == 0
                ? 0.0
                : static_cast<double>(dual) / static_cast<double>(originals_.id_count());
    }

    SubwordVocab originals_;
    std::vector<std::pair<std::string, std::int32_t>> additions_;
    std::unordered_map<std::string, std::int32_t> added_id_;
    std::size_t added_count_ = 0;
    double dual_mapped_fraction_ = 0.0;
};

inline DualVocab extend_vocab(const SubwordVocab& v) { return DualVocab(v); }

// ---------------------------------------------------------------------------
// Tokenization

struct Token {
    std::string text;
    std::int32_t id;
    bool operator==(const Token&) const = default;
};

inline bool is_word_punct(char32_t cp) {
    if (cp < 0x80)
        return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
               (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~');
    switch (cp) {
        case 0x060C: case 0x060D: case 0x061B: case 0x061E: case 0x061F:
        case 0x066A: case 0x066B: case 0x066C: case 0x066D: case 0x06D4:
        case 0x00AB: case 0x00BB: case 0x2018: case 0x2019: case 0x201C:
        case 0x201D: case 0x2013: case 0x2014: case 0x2026:
            return true;
        default:
            return false;
    }
}

// Whitespace- and punctuation-delimited pre-splitting; punctuation
// codepoints become single-codepoint words.
inline std::vector<std::string> pre_tokenize(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (std::size_t i = 0; i < text.size();) {
        auto [cp, len] = decode_cp(text, i);
        if (cp != kInvalidCp && is_ascii_space(cp)) {
            if (!current.empty()) words.push_back(std::exchange(current, {}));
        } else if (cp != kInvalidCp && is_word_punct(cp)) {
            if (!current.empty()) words.push_back(std::exchange(current, {}));
            words.emplace_back(text.substr(i, static_cast<std::size_t>(len)));
        } else {
            current.append(text, i, static_cast<std::size_t>(len));
        }
        i += static_cast<std::size_t>(len);
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

namespace detail {

// Greedy longest-prefix segmentation of one word. Any unmatched remainder
// (or an over-long word) collapses to a single unknown token.
template <typename Lookup>
inline void tokenize_word(const std::string& word, const Lookup& lookup,
                          std::int32_t unk_id, std::vector<Token>& out) {
    std::vector<std::size_t> offsets;  // byte offset of each codepoint + end
    for (std::size_t i = 0; i < word.size();) {
        offsets.push_back(i);
        i += static_cast<std::size_t>(decode_cp(word, i).length);
    }
    offsets.push_back(word.size());
    std::size_t n = offsets.size() - 1;
    if (n == 0) return;
    if (n > kMaxWordCps) {
        out.push_back({std::string(kUnknownToken), unk_id});
        return;
    }
    std::vector<Token> pieces;
    std::size_t start = 0;
    while (start < n) {
        std::optional<std::int32_t> best;
        std::size_t best_end = start;
        std::string candidate;
        for (std::size_t end = n; end > start; --end) {
            candidate.clear();
            if (start > 0) candidate = kContinuationPrefix;
            candidate.append(word, offsets[start], offsets[end] - offsets[start]);
            if (auto id = lookup(candidate)) {
                best = id;
                best_end = end;
                break;
            }
        }
        if (!best) {
            out.push_back({std::string(kUnknownToken), unk_id});
            return;
        }
        std::string text = start > 0 ? std::string(kContinuationPrefix) : std::string();
        text.append(word, offsets[start], offsets[best_end] - offsets[start]);
        pieces.push_back({std::move(text), *best});
        start = best_end;
    }
    for (auto& p : pieces) out.push_back(std::move(p));
}

template <typename Lookup>
inline std::vector<Token> tokenize_impl(std::string_view text, const Lookup& lookup,
                                        std::int32_t unk_id) {
    std::vector<Token> out;
    for (const std::string& word : pre_tokenize(text))
        tokenize_word(word, lookup, unk_id, out);
    return out;
}

}  // namespace detail

inline std::vector<Token> tokenize(std::string_view text, const SubwordVocab& v) {
    return detail::tokenize_impl(
        text, [&](const std::string& s) { return v.lookup(s); }, v.unknown_id());
}

inline std::vector<Token> tokenize(std::string_view text, const DualVocab& v) {
    return detail::tokenize_impl(
        text, [&](const std::string& s) { return v.lookup(s); }, v.unknown_id());
}

// "token<TAB>identifier" lines for a (possibly collapsed) vocabulary,
// distinct strings in identifier order.
inline void save_vocab_mapping(std::ostream& out, const SubwordVocab& v) {
    for (std::size_t id = 0; id < v.id_count(); ++id) {
        auto mapped = v.lookup(v.token(id));
        if (mapped && *mapped == static_cast<std::int32_t>(id))
            out << v.token(id) << '\t' << id << '\n';
    }
}

}  // namespace dotless
