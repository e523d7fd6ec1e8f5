#pragma once

// Dot restoration: a dictionary of undotted-form candidates with counts, a
// bigram language model scored with stupid backoff, and a Viterbi decoder
// over per-word candidate lattices. A positional character-fallback table
// reconstructs out-of-vocabulary words.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dotless/undot.hpp"
#include "dotless/unicode.hpp"

namespace dotless {

inline constexpr std::string_view kSentenceBegin = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr double kStupidBackoff = 0.4;
inline constexpr std::string_view kRedotModelVersion = "dotless-redot v1";

struct WordCount {
    std::string word;
    std::uint64_t count;
    bool operator==(const WordCount&) const = default;
};

struct RedotModel {
    // undotted form -> candidates, sorted by (count desc, word asc)
    std::unordered_map<std::string, std::vector<WordCount>> dictionary;
    std::unordered_map<std::string, std::uint64_t> unigram_counts;
    std::map<std::pair<std::string, std::string>, std::uint64_t> bigram_counts;
    std::uint64_t total_tokens = 0;
    std::uint64_t sentence_count = 0;
    // (replacement codepoint, positional form) -> most frequent dotted codepoint
    std::map<std::pair<char32_t, LetterForm>, char32_t> char_fallback;
    std::string version_tag{kRedotModelVersion};

    std::uint64_t unigram(const std::string& w) const {
        auto it = unigram_counts.find(w);
        return it == unigram_counts.end() ? 0 : it->second;
    }
    std::uint64_t bigram(const std::string& a, const std::string& b) const {
        auto it = bigram_counts.find({a, b});
        return it == bigram_counts.end() ? 0 : it->second;
    }
};

struct Candidate {
    std::string word;
    std::uint64_t count = 0;
    double emission_log = 0.0;
};

struct LatticeColumn {
    std::vector<Candidate> candidates;  // never empty
};

namespace detail {

inline std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) words.emplace_back(text.substr(start, i - start));
    }
    return words;
}

inline void sort_candidates(std::vector<WordCount>& cands) {
    std::sort(cands.begin(), cands.end(), [](const WordCount& a, const WordCount& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.word < b.word;
    });
}

// Codepoints that never occur in natural dotted text; their presence proves
// the word went through the undotter.
inline bool has_dotless_marker(std::string_view word) {
    for (std::size_t i = 0; i < word.size();) {
        auto [cp, len] = decode_cp(word, i);
        if (cp == 0x066E || cp == 0x066F || cp == 0x06A1 || cp == 0x06BA) return true;
        i += static_cast<std::size_t>(len);
    }
    return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Model construction

inline RedotModel build_redot_model(std::span<const std::string> sentences,
                                    std::uint64_t min_count = 1) {
    RedotModel m;
    for (const std::string& sentence : sentences) {
        std::vector<std::string> words = detail::split_words(sentence);
        if (words.empty()) continue;
        ++m.sentence_count;
        m.bigram_counts[{std::string(kSentenceBegin), words.front()}]++;
        for (std::size_t i = 0; i < words.size(); ++i) {
            m.unigram_counts[words[i]]++;
            ++m.total_tokens;
            if (i + 1 < words.size()) m.bigram_counts[{words[i], words[i + 1]}]++;
        }
        m.bigram_counts[{words.back(), std::string(kSentenceEnd)}]++;
    }
    if (m.total_tokens == 0) throw std::runtime_error("empty corpus: cannot build redot model");

    std::map<std::pair<char32_t, LetterForm>, std::map<char32_t, std::uint64_t>> fallback_counts;
    for (const auto& [word, count] : m.unigram_counts) {
        std::string undotted = undot_text(word);
        if (count >= min_count) m.dictionary[undotted].push_back({word, count});
        std::u32string ucps = decode_utf8(undotted);
        std::u32string wcps = decode_utf8(word);
        if (ucps.size() != wcps.size()) continue;  // malformed input bytes
        for (std::size_t i = 0; i < ucps.size(); ++i) {
            if (!is_undot_replacement(ucps[i])) continue;
            LetterForm form = letter_position(ucps, i);
            fallback_counts[{ucps[i], form}][wcps[i]] += count;
        }
    }
    for (auto& [key, cands] : m.dictionary) detail::sort_candidates(cands);

    // Seed defaults so the table is total over every replacement codepoint,
    // then let corpus frequencies override.
    auto seed = [&](char32_t rep, char32_t medial_default, char32_t terminal_default) {
        m.char_fallback[{rep, LetterForm::Medial}] = medial_default;
        m.char_fallback[{rep, LetterForm::Terminal}] = terminal_default;
    };
    seed(0x066E, 0x0628, 0x0628);  // dotless beh -> ba
    seed(0x066F, 0x0642, 0x0642);  // dotless qaf -> qaf
    seed(0x06A1, 0x0641, 0x0641);  // dotless feh -> fa
    seed(0x06BA, 0x0646, 0x0646);  // noon ghunna -> nun
    seed(0x0649, 0x0649, 0x0649);  // alef maqsura keeps itself
    seed(0x062D, 0x062D, 0x062D);
    seed(0x062F, 0x062F, 0x062F);
    seed(0x0631, 0x0631, 0x0631);
    seed(0x0633, 0x0633, 0x0633);
    seed(0x0635, 0x0635, 0x0635);
    seed(0x0637, 0x0637, 0x0637);
    seed(0x0639, 0x0639, 0x0639);
    seed(0x0647, 0x0647, 0x0647);
    for (const auto& [key, counts] : fallback_counts) {
        char32_t best = 0;
        std::uint64_t best_count = 0;
        for (const auto& [cp, c] : counts) {
            if (c > best_count) {
                best = cp;
                best_count = c;
            }
        }
        if (best_count > 0) m.char_fallback[key] = best;
    }
    return m;
}

// Merges count tables of independently built partial models.
inline void merge_models(RedotModel& into, const RedotModel& other) {
    for (const auto& [w, c] : other.unigram_counts) into.unigram_counts[w] += c;
    for (const auto& [k, c] : other.bigram_counts) into.bigram_counts[k] += c;
    into.total_tokens += other.total_tokens;
    into.sentence_count += other.sentence_count;
    std::unordered_map<std::string, std::unordered_map<std::string, std::uint64_t>> merged;
    for (const RedotModel* model : {static_cast<const RedotModel*>(&into), &other})
        for (const auto& [u, cands] : model->dictionary)
            for (const auto& wc : cands) merged[u][wc.word] += wc.count;
    into.dictionary.clear();
    for (auto& [u, by_word] : merged) {
        auto& cands = into.dictionary[u];
        for (auto& [w, c] : by_word) cands.push_back({w, c});
        detail::sort_candidates(cands);
    }
    for (const auto& [k, cp] : other.char_fallback) into.char_fallback.emplace(k, cp);
}

// ---------------------------------------------------------------------------
// Candidate generation

// Reconstructs an out-of-vocabulary word codepoint by codepoint from the
// positional fallback table.
inline std::string fallback_reconstruct(std::string_view word, const RedotModel& m) {
    std::u32string cps = decode_utf8(word);
    std::u32string out;
    out.reserve(cps.size());
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (!is_undot_replacement(cps[i])) {
            out.push_back(cps[i]);
            continue;
        }
        auto it = m.char_fallback.find({cps[i], letter_position(cps, i)});
        out.push_back(it == m.char_fallback.end() ? cps[i] : it->second);
    }
    return encode_utf8(out);
}

inline LatticeColumn candidates(const std::string& word, const RedotModel& m) {
    LatticeColumn col;
    auto it = m.dictionary.find(word);
    if (it != m.dictionary.end()) {
        std::uint64_t total = 0;
        for (const auto& wc : it->second)
            if (undot_text(wc.word) == word) total += wc.count;
        if (total > 0) {
            for (const auto& wc : it->second) {
                if (undot_text(wc.word) != word) continue;
                col.candidates.push_back(
                    {wc.word, wc.count,
                     std::log(static_cast<double>(wc.count) / static_cast<double>(total))});
            }
            return col;
        }
    }
    std::string guess =
        detail::has_dotless_marker(word) ? fallback_reconstruct(word, m) : word;
    col.candidates.push_back({std::move(guess), 0, 0.0});
    return col;
}

// ---------------------------------------------------------------------------
// Scoring and decoding

// Stupid backoff: bigram relative frequency when seen, otherwise 0.4 times
// the unigram relative frequency (with a fixed floor for unseen words).
inline double transition_log(const RedotModel& m, const std::string& prev,
                             const std::string& next) {
    std::uint64_t pair_count = m.bigram(prev, next);
    std::uint64_t context = prev == kSentenceBegin ? m.sentence_count : m.unigram(prev);
    if (pair_count > 0 && context > 0)
        return std::log(static_cast<double>(pair_count) / static_cast<double>(context));
    std::uint64_t u = next == kSentenceEnd ? m.sentence_count : m.unigram(next);
    double rel = u > 0 ? static_cast<double>(u) / static_cast<double>(m.total_tokens)
                       : 1.0 / static_cast<double>(m.total_tokens + 1);
    return std::log(kStupidBackoff * rel);
}

struct DecodedPath {
    std::vector<std::size_t> choice;  // candidate index per column
    double score = 0.0;
};

// Max-sum Viterbi over the lattice, accumulating left to right as
// ((t + e) + t) + e ... so an exhaustive fold-left enumeration reproduces
// path scores exactly. Ties keep the earliest candidate in column order
// (candidates are sorted by count desc, then lexicographically).
inline DecodedPath viterbi_decode(std::span<const LatticeColumn> columns,
                                  const RedotModel& m) {
    DecodedPath path;
    if (columns.empty()) return path;
    std::size_t n = columns.size();
    std::vector<std::vector<double>> score(n);
    std::vector<std::vector<std::size_t>> back(n);

    const auto& first = columns[0].candidates;
    score[0].resize(first.size());
    back[0].assign(first.size(), 0);
    for (std::size_t j = 0; j < first.size(); ++j)
        score[0][j] = (transition_log(m, std::string(kSentenceBegin), first[j].word) +
                       first[j].emission_log);

    for (std::size_t i = 1; i < n; ++i) {
        const auto& prev = columns[i - 1].candidates;
        const auto& cur = columns[i].candidates;
        score[i].resize(cur.size());
        back[i].resize(cur.size());
        for (std::size_t j = 0; j < cur.size(); ++j) {
            double best = -std::numeric_limits<double>::infinity();
            std::size_t best_k = 0;
            for (std::size_t k = 0; k < prev.size(); ++k) {
                double s = (score[i - 1][k] + transition_log(m, prev[k].word, cur[j].word));
                if (s > best) {
                    best = s;
                    best_k = k;
                }
            }
            score[i][j] = best + cur[j].emission_log;
            back[i][j] = best_k;
        }
    }

    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    const auto& last = columns[n - 1].candidates;
    for (std::size_t j = 0; j < last.size(); ++j) {
        double s = score[n - 1][j] + transition_log(m, last[j].word, std::string(kSentenceEnd));
        if (s > best) {
            best = s;
            best_j = j;
        }
    }
    path.score = best;
    path.choice.resize(n);
    path.choice[n - 1] = best_j;
    for (std::size_t i = n - 1; i > 0; --i) path.choice[i - 1] = back[i][path.choice[i]];
    return path;
}

// Restores dots word by word. Every output word undots back to its input
// word and the word count is preserved.
inline std::string redot_sentence(std::string_view sentence, const RedotModel& m) {
    std::vector<std::string> words = detail::split_words(sentence);
    if (words.empty()) return {};
    std::vector<LatticeColumn> columns;
    columns.reserve(words.size());
    for (const std::string& w : words) columns.push_back(candidates(w, m));
    DecodedPath path = viterbi_decode(columns, m);
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += columns[i].candidates[path.choice[i]].word;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Persistence: line-oriented archive with length-prefixed sections.

struct RedotModelInfo {
    std::string version_tag;
    std::size_t dictionary_entries = 0;
    std::size_t bigram_entries = 0;
    std::size_t fallback_entries = 0;
    std::uint64_t total_tokens = 0;
    std::uint64_t sentence_count = 0;
};

inline void save_redot_model(std::ostream& out, const RedotModel& m) {
    out << m.version_tag << '\n';
    out << "meta\t" << m.total_tokens << '\t' << m.sentence_count << '\n';

    std::vector<std::pair<std::string, const std::vector<WordCount>*>> dict;
    dict.reserve(m.dictionary.size());
    std::size_t dict_lines = 0;
    for (const auto& [u, cands] : m.dictionary) {
        dict.emplace_back(u, &cands);
        dict_lines += cands.size();
    }
    std::sort(dict.begin(), dict.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out << "dict\t" << dict_lines << '\n';
    for (const auto& [u, cands] : dict)
        for (const auto& wc : *cands) out << u << '\t' << wc.word << '\t' << wc.count << '\n';

    out << "bigrams\t" << m.bigram_counts.size() << '\n';
    for (const auto& [key, c] : m.bigram_counts)
        out << key.first << '\t' << key.second << '\t' << c << '\n';

    out << "fallback\t" << m.char_fallback.size() << '\n';
    auto hex = [](char32_t cp) {
        static constexpr char kHex[] = "0123456789ABCDEF";
        std::string s;
        for (int shift = 12; shift >= 0; shift -= 4) s.push_back(kHex[(cp >> shift) & 0xF]);
        return s;
    };
    for (const auto& [key, cp] : m.char_fallback)
        out << hex(key.first) << '\t' << (key.second == LetterForm::Medial ? 'm' : 't')
            << '\t' << hex(cp) << '\n';
}

namespace detail {

inline std::vector<std::string> split_tsv(const std::string& line, std::size_t want,
                                          std::size_t line_no) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    if (fields.size() != want)
        throw std::runtime_error("corrupt redot model at line " + std::to_string(line_no) +
                                 ": expected " + std::to_string(want) + " fields");
    return fields;
}

inline std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
    if (s.empty()) throw std::runtime_error("corrupt redot model at line " +
                                            std::to_string(line_no) + ": empty count");
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            throw std::runtime_error("corrupt redot model at line " +
                                     std::to_string(line_no) + ": bad count '" + s + "'");
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

inline char32_t parse_hex_cp(const std::string& s, std::size_t line_no) {
    char32_t v = 0;
    if (s.empty()) throw std::runtime_error("corrupt redot model at line " +
                                            std::to_string(line_no) + ": empty codepoint");
    for (char c : s) {
        v <<= 4;
        if (c >= '0' && c <= '9') v |= static_cast<char32_t>(c - '0');
        else if (c >= 'A' && c <= 'F') v |= static_cast<char32_t>(c - 'A' + 10);
        else if (c >= 'a' && c <= 'f') v |= static_cast<char32_t>(c - 'a' + 10);
        else
            throw std::runtime_error("corrupt redot model at line " +
                                     std::to_string(line_no) + ": bad codepoint '" + s + "'");
    }
    return v;
}

}  // namespace detail

inline RedotModel load_redot_model(std::istream& in) {
    RedotModel m;
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line))
            throw std::runtime_error("corrupt redot model: truncated at line " +
                                     std::to_string(line_no + 1));
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };

    next_line();
    if (line != kRedotModelVersion)
        throw std::runtime_error("unsupported redot model version: '" + line + "'");
    m.version_tag = line;

    auto meta = detail::split_tsv(next_line(), 3, line_no);
    if (meta[0] != "meta") throw std::runtime_error("corrupt redot model: missing meta section");
    std::uint64_t expect_total = detail::parse_u64(meta[1], line_no);
    std::uint64_t expect_sentences = detail::parse_u64(meta[2], line_no);

    auto dict_header = detail::split_tsv(next_line(), 2, line_no);
    if (dict_header[0] != "dict")
        throw std::runtime_error("corrupt redot model: missing dict section");
    std::uint64_t dict_lines = detail::parse_u64(dict_header[1], line_no);
    for (std::uint64_t i = 0; i < dict_lines; ++i) {
        auto f = detail::split_tsv(next_line(), 3, line_no);
        m.dictionary[f[0]].push_back({f[1], detail::parse_u64(f[2], line_no)});
    }
    for (auto& [u, cands] : m.dictionary) detail::sort_candidates(cands);

    auto bigram_header = detail::split_tsv(next_line(), 2, line_no);
    if (bigram_header[0] != "bigrams")
        throw std::runtime_error("corrupt redot model: missing bigrams section");
    std::uint64_t bigram_lines = detail::parse_u64(bigram_header[1], line_no);
    for (std::uint64_t i = 0; i < bigram_lines; ++i) {
        auto f = detail::split_tsv(next_line(), 3, line_no);
        m.bigram_counts[{f[0], f[1]}] = detail::parse_u64(f[2], line_no);
    }

    auto fb_header = detail::split_tsv(next_line(), 2, line_no);
    if (fb_header[0] != "fallback")
        throw std::runtime_error("corrupt redot model: missing fallback section");
    std::uint64_t fb_lines = detail::parse_u64(fb_header[1], line_no);
    for (std::uint64_t i = 0; i < fb_lines; ++i) {
        auto f = detail::split_tsv(next_line(), 3, line_no);
        if (f[1] != "m" && f[1] != "t")
            throw std::runtime_error("corrupt redot model at line " + std::to_string(line_no) +
                                     ": bad form '" + f[1] + "'");
        m.char_fallback[{detail::parse_hex_cp(f[0], line_no),
                         f[1] == "m" ? LetterForm::Medial : LetterForm::Terminal}] =
            detail::parse_hex_cp(f[2], line_no);
    }

    // Unigram counts are exactly the per-word successor totals: every token
    // has one following token (the sentence-end marker included).
    for (const auto& [key, c] : m.bigram_counts) {
        if (key.first == kSentenceBegin) continue;
        m.unigram_counts[key.first] += c;
    }
    m.total_tokens = 0;
    for (const auto& [w, c] : m.unigram_counts) m.total_tokens += c;
    m.sentence_count = expect_sentences;
    if (m.total_tokens != expect_total)
        throw std::runtime_error("corrupt redot model: token total mismatch (meta says " +
                                 std::to_string(expect_total) + ", bigrams imply " +
                                 std::to_string(m.total_tokens) + ")");
    return m;
}

inline RedotModelInfo redot_model_info(const RedotModel& m) {
    RedotModelInfo info;
    info.version_tag = m.version_tag;
    for (const auto& [u, cands] : m.dictionary) info.dictionary_entries += cands.size();
    info.bigram_entries = m.bigram_counts.size();
    info.fallback_entries = m.char_fallback.size();
    info.total_tokens = m.total_tokens;
    info.sentence_count = m.sentence_count;
    return info;
}

}  // namespace dotless
