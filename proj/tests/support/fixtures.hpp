#pragma once

// Golden fixtures shared by the unit and acceptance suites. Strings use
// \u escapes so the exact codepoints under test are visible in review.

#include <array>
#include <string_view>

namespace fixtures {

// A news sentence and its undotted rendition with this library's pinned
// replacement codepoints (dotless qaf U+066F for qaf in every position).
inline constexpr std::string_view kGoldenOriginal =
    "وتعد \"قاروه\" "
    "إحدى الجزر "
    "الكويتية "
    "التسع التي "
    "تنتشر في "
    "المياه "
    "الإقليمية "
    "الكويتية";

inline constexpr std::string_view kGoldenUndotted =
    "وٮعد \"ٯاروه\" "
    "إحدى الحرر "
    "الكوٮٮىه "
    "الٮسع الٮى "
    "ٮٮٮسر ڡى "
    "المٮاه "
    "الإٯلٮمىه "
    "الكوٮٮىه";

// Ambiguous undotted words: both options collapse onto the same form.
struct AmbiguousRow {
    std::string_view undotted;
    std::string_view option1;
    std::string_view option2;
};

inline constexpr std::array<AmbiguousRow, 4> kAmbiguousRows{{
    {"ڡٮحٮ",                    // fyjb / fthT skeleton
     "فيجب",                    // fyjb "must"
     "فتحت"},                   // fatahat "opened"
    {"ٮڡارٯ",
     "تفارق",              // tafaruq "leave"
     "بفارق"},             // bifariq "difference"
    {"ٮحار",
     "نجار",                    // najaar "carpenter"
     "بحار"},                   // bahaar "seas"
    {"حٮوٮ",
     "حبوب",                    // hubub "cereal"
     "جنوب"},                   // janub "south"
}};

// Assorted word pairs used across the unit tests.
inline constexpr std::string_view kWordTaad = "وتعد";        // wt'd
inline constexpr std::string_view kWordTaadUndotted = "وٮعد";
inline constexpr std::string_view kWordNine = "التسع";  // altsa'
inline constexpr std::string_view kWordNineUndotted = "الٮسع";
inline constexpr std::string_view kWordIn = "في";                      // fi
inline constexpr std::string_view kWordInUndotted = "ڡى";
inline constexpr std::string_view kWordHouse = "دار";             // dar
inline constexpr std::string_view kWordPeople = "شعب";            // sha'b
inline constexpr std::string_view kWordPeopleUndotted = "سعٮ";

}  // namespace fixtures
