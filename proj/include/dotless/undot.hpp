#pragma once

// Removal of consonantal dots (i'jaam) from Arabic text. Every dotted letter
// is replaced by the most resemblant dotless codepoint for its positional
// form: letters that still connect to the next letter take the medial
// replacement, everything else (word-final, isolated, or before a
// non-joining letter) takes the terminal one.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "dotless/unicode.hpp"

namespace dotless {

enum class LetterForm : std::uint8_t { Medial, Terminal };

struct UndotEntry {
    char32_t dotted;
    char32_t medial;
    char32_t terminal;
};

// The letter map. Dotless beh U+066E, dotless qaf U+066F, dotless feh U+06A1,
// noon ghunna U+06BA and alef maqsura U+0649 are the only replacements that
// are not ordinary MSA letters. Ta marbuta -> heh is included: undotted text
// in the wild strips its dots as well.
inline constexpr std::array<UndotEntry, 16> kUndotEntries{{
    {0x0628, 0x066E, 0x066E},  // ba
    {0x0629, 0x0647, 0x0647},  // ta marbuta -> heh
    {0x062A, 0x066E, 0x066E},  // ta
    {0x062B, 0x066E, 0x066E},  // tha
    {0x062C, 0x062D, 0x062D},  // jim -> hah
    {0x062E, 0x062D, 0x062D},  // kha -> hah
    {0x0630, 0x062F, 0x062F},  // dhal -> dal
    {0x0632, 0x0631, 0x0631},  // zayn -> reh
    {0x0634, 0x0633, 0x0633},  // shin -> seen
    {0x0636, 0x0635, 0x0635},  // dad -> sad
    {0x0638, 0x0637, 0x0637},  // za -> tah
    {0x063A, 0x0639, 0x0639},  // ghayn -> ain
    {0x0641, 0x06A1, 0x06A1},  // fa -> dotless feh
    {0x0642, 0x066F, 0x066F},  // qaf -> dotless qaf
    {0x0646, 0x066E, 0x06BA},  // nun -> dotless beh / noon ghunna
    {0x064A, 0x066E, 0x0649},  // ya -> dotless beh / alef maqsura
}};

inline constexpr const UndotEntry* find_undot_entry(char32_t cp) {
    if (cp < 0x0628 || cp > 0x064A) return nullptr;
    for (const auto& e : kUndotEntries)
        if (e.dotted == cp) return &e;
    return nullptr;
}

inline constexpr bool is_undot_replacement(char32_t cp) {
    for (const auto& e : kUndotEntries)
        if (e.medial == cp || e.terminal == cp) return true;
    return false;
}

// Positional form of the letter at `index`. Transparent marks after it are
// skipped; the letter is medial only if it is dual-joining and the next
// solid codepoint is a letter that accepts the connection. Ta marbuta and
// hamza never accept one, so the letter before them stays terminal.
inline LetterForm letter_position(std::u32string_view word, std::size_t index) {
    if (join_class(word[index]) != JoinClass::Dual) return LetterForm::Terminal;
    for (std::size_t j = index + 1; j < word.size(); ++j) {
        if (is_transparent(word[j])) continue;
        return accepts_preceding_join(word[j]) ? LetterForm::Medial
                                               : LetterForm::Terminal;
    }
    return LetterForm::Terminal;
}

inline char32_t undot_cp(const UndotEntry& e, LetterForm form) {
    return form == LetterForm::Medial ? e.medial : e.terminal;
}

// Replaces every mapped letter in `text`, leaving all other bytes untouched
// (including malformed UTF-8). Codepoint count is preserved.
inline std::string undot_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        auto [cp, len] = decode_cp(text, i);
        const UndotEntry* entry = cp == kInvalidCp ? nullptr : find_undot_entry(cp);
        if (!entry) {
            out.append(text, i, static_cast<std::size_t>(len));
            i += static_cast<std::size_t>(len);
            continue;
        }
        LetterForm form = LetterForm::Terminal;
        if (join_class(cp) == JoinClass::Dual) {
            for (std::size_t j = i + static_cast<std::size_t>(len); j < text.size();) {
                auto [cp2, len2] = decode_cp(text, j);
                if (cp2 != kInvalidCp && is_transparent(cp2)) {
                    j += static_cast<std::size_t>(len2);
                    continue;
                }
                if (cp2 != kInvalidCp && accepts_preceding_join(cp2))
                    form = LetterForm::Medial;
                break;
            }
        }
        append_cp(out, undot_cp(*entry, form));
        i += static_cast<std::size_t>(len);
    }
    return out;
}

// Audit table: one entry per line, "dotted<TAB>medial<TAB>terminal" as
// four-digit uppercase hex codepoints.
inline std::string undot_map_table() {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (const auto& e : kUndotEntries) {
        auto put = [&](char32_t cp) {
            for (int shift = 12; shift >= 0; shift -= 4)
                out.push_back(kHex[(cp >> shift) & 0xF]);
        };
        put(e.dotted);
        out.push_back('\t');
        put(e.medial);
        out.push_back('\t');
        put(e.terminal);
        out.push_back('\n');
    }
    return out;
}

}  // namespace dotless
