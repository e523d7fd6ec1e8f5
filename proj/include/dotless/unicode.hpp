#pragma once

// Minimal UTF-8 handling and Arabic joining behaviour for the Arabic block
// (U+0600..U+06FF). Joining classes follow Unicode ArabicShaping data with
// two deliberate differences: tatweel (U+0640) is transparent rather than
// join-causing, and ta marbuta (U+0629) is non-joining, so a letter before
// it keeps its terminal shape.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace dotless {

inline constexpr char32_t kInvalidCp = 0xFFFFFFFF;

// ---------------------------------------------------------------------------
// UTF-8

struct DecodedCp {
    char32_t cp;   // kInvalidCp for a malformed byte
    int length;    // bytes consumed (>= 1)
};

inline DecodedCp decode_cp(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return {b0, 1};

    auto cont = [&](std::size_t k) {
        return i + k < s.size() &&
               (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    auto cb = [&](std::size_t k) {
        return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F);
    };

    if ((b0 & 0xE0) == 0xC0 && cont(1)) {
        char32_t cp = ((b0 & 0x1Fu) << 6) | cb(1);
        if (cp >= 0x80) return DecodedCp{cp, 2};
    } else if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
        char32_t cp = ((b0 & 0x0Fu) << 12) | (cb(1) << 6) | cb(2);
        if (cp >= 0x800 && !(cp >= 0xD800 && cp <= 0xDFFF)) return DecodedCp{cp, 3};
    } else if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
        char32_t cp = ((b0 & 0x07u) << 18) | (cb(1) << 12) | (cb(2) << 6) | cb(3);
        if (cp >= 0x10000 && cp <= 0x10FFFF) return DecodedCp{cp, 4};
    }
    return {kInvalidCp, 1};
}

inline void append_cp(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        auto [cp, len] = decode_cp(s, i);
        out.push_back(cp == kInvalidCp ? 0xFFFD : cp);
        i += static_cast<std::size_t>(len);
    }
    return out;
}

inline std::string encode_utf8(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size() * 2);
    for (char32_t cp : cps) append_cp(out, cp);
    return out;
}

inline std::size_t count_cps(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); n++)
        i += static_cast<std::size_t>(decode_cp(s, i).length);
    return n;
}

// ---------------------------------------------------------------------------
// Arabic joining classes

enum class JoinClass : std::uint8_t {
    Dual,         // joins on both sides (beh, seen, ...)
    Right,        // joins to the preceding letter only (alef, dal, reh, waw)
    NonJoining,   // never joins (hamza, digits, punctuation, signs)
    Transparent,  // skipped by shaping (harakat, Quranic marks, tatweel)
};

namespace detail {

inline constexpr std::array<JoinClass, 256> make_arabic_join_table() {
    std::array<JoinClass, 256> t{};
    for (auto& c : t) c = JoinClass::NonJoining;
    auto set = [&](char32_t lo, char32_t hi, JoinClass jc) {
        for (char32_t cp = lo; cp <= hi; ++cp) t[cp - 0x0600] = jc;
    };
    constexpr auto D = JoinClass::Dual;
    constexpr auto R = JoinClass::Right;
    constexpr auto T = JoinClass::Transparent;

    set(0x0610, 0x061A, T);
    set(0x061C, 0x061C, T);  // arabic letter mark
    set(0x0620, 0x0620, D);
    set(0x0622, 0x0625, R);
    set(0x0626, 0x0626, D);
    set(0x0627, 0x0627, R);
    set(0x0628, 0x0628, D);
    // 0629 ta marbuta stays NonJoining: a letter before it keeps terminal form
    set(0x062A, 0x062E, D);
    set(0x062F, 0x0632, R);
    set(0x0633, 0x063F, D);
    set(0x0640, 0x0640, T);  // tatweel, transparent here
    set(0x0641, 0x0647, D);
    set(0x0648, 0x0648, R);
    set(0x0649, 0x064A, D);
    set(0x064B, 0x065F, T);
    set(0x066E, 0x066F, D);
    set(0x0670, 0x0670, T);
    set(0x0671, 0x0673, R);
    set(0x0675, 0x0677, R);
    set(0x0678, 0x0687, D);
    set(0x0688, 0x0699, R);
    set(0x069A, 0x06BF, D);
    set(0x06C0, 0x06C0, R);
    set(0x06C1, 0x06C1, D);
    set(0x06C2, 0x06CB, R);
    set(0x06CC, 0x06CC, D);
    set(0x06CD, 0x06CD, R);
    set(0x06CE, 0x06CE, D);
    set(0x06CF, 0x06CF, R);
    set(0x06D0, 0x06D1, D);
    set(0x06D2, 0x06D3, R);
    set(0x06D5, 0x06D5, R);
    set(0x06D6, 0x06DC, T);
    set(0x06DF, 0x06E4, T);
    set(0x06E7, 0x06E8, T);
    set(0x06EA, 0x06ED, T);
    set(0x06EE, 0x06EF, R);
    set(0x06FA, 0x06FC, D);
    set(0x06FF, 0x06FF, D);
    return t;
}

inline constexpr auto kArabicJoinTable = make_arabic_join_table();

}  // namespace detail

inline constexpr bool in_arabic_block(char32_t cp) {
    return cp >= 0x0600 && cp <= 0x06FF;
}

inline constexpr JoinClass join_class(char32_t cp) {
    if (!in_arabic_block(cp)) return JoinClass::NonJoining;
    return detail::kArabicJoinTable[cp - 0x0600];
}

inline constexpr bool is_transparent(char32_t cp) {
    return join_class(cp) == JoinClass::Transparent;
}

// Letters that never join but are still letters, not word boundaries.
inline constexpr bool is_arabic_letter(char32_t cp) {
    if (!in_arabic_block(cp)) return false;
    switch (join_class(cp)) {
        case JoinClass::Dual:
        case JoinClass::Right:
            return true;
        default:
            return cp == 0x0621 || cp == 0x0629 || cp == 0x0674 ||
                   cp == 0x06E5 || cp == 0x06E6;
    }
}

// True when a letter with this class accepts a connection from the letter
// before it, i.e. seeing it next keeps the current letter in medial shape.
inline constexpr bool accepts_preceding_join(char32_t cp) {
    JoinClass jc = join_class(cp);
    return jc == JoinClass::Dual || jc == JoinClass::Right;
}

inline constexpr bool is_ascii_space(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
           cp == U'\f' || cp == U'\v';
}

}  // namespace dotless
