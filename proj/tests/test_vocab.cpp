#include "dotless/vocab.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>

#include "support/synthetic.hpp"

using namespace dotless;

namespace {

SubwordVocab vocab_from(const std::string& text) {
    std::istringstream in(text);
    return SubwordVocab::load(in);
}

std::size_t count_unknown(const std::vector<Token>& tokens) {
    return static_cast<std::size_t>(std::count_if(
        tokens.begin(), tokens.end(),
        [](const Token& t) { return t.text == kUnknownToken; }));
}

}  // namespace

TEST_CASE("load_vocab") {
    SubwordVocab v = vocab_from("[UNK]\n[CLS]\nال\n##ب\nكتاب\n");
    CHECK(v.id_count() == 5);
    CHECK(v.lookup("كتاب") == 4);
    CHECK(v.lookup("[CLS]") == 1);
    CHECK(!v.lookup("missing"));
}

TEST_CASE("load_vocab rejects duplicates with the line number") {
    std::istringstream in("ال\nx\nال\n");
    CHECK_THROWS_WITH_AS(SubwordVocab::load(in),
                         "malformed vocabulary: duplicate token at line 3",
                         std::runtime_error);
}

TEST_CASE("load_vocab empty") {
    SubwordVocab v = vocab_from("");
    CHECK(v.id_count() == 0);
    CHECK(v.empty());
}

TEST_CASE("undot_token") {
    CHECK(undot_token("[UNK]") == "[UNK]");
    CHECK(undot_token("[MASK]") == "[MASK]");
    // ##tb: medial ta, terminal ba, both to dotless beh
    CHECK(undot_token("##تب") == "##ٮٮ");
    CHECK(undot_token("شعب") == "سعٮ");
    CHECK(undot_token("") == "");
}

TEST_CASE("undot_token medial-final variant") {
    // token-final nun: terminal by default, dotless beh in the variant
    CHECK(undot_token("من") == "مں");
    CHECK(undot_token_medial_final("من") == "مٮ");
    // token-final ya
    CHECK(undot_token_medial_final("في") == "ڡٮ");
    // letters whose forms coincide produce no variant
    CHECK(undot_token_medial_final("تب") == "");
    CHECK(undot_token_medial_final("[UNK]") == "");
}

TEST_CASE("undot_vocab collapse") {
    SubwordVocab v = vocab_from("[UNK]\nتب\nثب\nسم\n");
    auto [collapsed, report] = undot_vocab(v);
    CHECK(collapsed.id_count() == 4);
    CHECK(collapsed.distinct_tokens() == 3);
    CHECK(collapsed.lookup("[UNK]") == 0);
    CHECK(collapsed.lookup("ٮٮ") == 1);  // smallest id of the group survives
    CHECK(collapsed.lookup("سم") == 3);
    CHECK(report.collision_count == 1);
    CHECK(report.surviving_vocab_size == 3);
    REQUIRE(report.collided_groups.size() == 1);
    CHECK(report.collided_groups[0].undotted == "ٮٮ");
    CHECK(report.collided_groups[0].originals ==
          std::vector<std::string>{"تب", "ثب"});
}

TEST_CASE("undot_vocab on dotless tokens is the identity") {
    SubwordVocab v = vocab_from("[UNK]\nسم\nدار\n");
    auto [collapsed, report] = undot_vocab(v);
    CHECK(report.collision_count == 0);
    CHECK(collapsed.distinct_tokens() == 3);
    for (std::size_t id = 0; id < v.id_count(); ++id)
        CHECK(collapsed.token(id) == v.token(id));
}

TEST_CASE("extend_vocab") {
    SubwordVocab v = vocab_from("سم\nتب\n");
    DualVocab dual = extend_vocab(v);
    CHECK(dual.added_count() == 1);  // sm undots to itself
    CHECK(dual.lookup("ٮٮ") == 1);
    CHECK(dual.lookup("سم") == 0);
    CHECK(dual.lookup("تب") == 1);
    CHECK(dual.dual_mapped_fraction() == doctest::Approx(0.5));
}

TEST_CASE("extend_vocab keeps original pairs and breaks ties by smallest id") {
    SubwordVocab v = vocab_from("[UNK]\nتب\nثب\n");
    DualVocab dual = extend_vocab(v);
    for (std::size_t id = 0; id < v.id_count(); ++id)
        CHECK(dual.lookup(v.token(id)) == static_cast<std::int32_t>(id));
    CHECK(dual.lookup("ٮٮ") == 1);  // first token of the colliding pair
    CHECK(dual.added_count() == 1);
}

TEST_CASE("extend_vocab adds nothing for undotted tokens") {
    SubwordVocab v = vocab_from("سم\nدار\n");
    CHECK(extend_vocab(v).added_count() == 0);
}

TEST_CASE("dual vocab serialization round trip") {
    SubwordVocab v = vocab_from("[UNK]\nفي\nكتاب\n");
    DualVocab dual = extend_vocab(v);
    std::ostringstream out;
    dual.save(out);
    std::string text = out.str();
    // originals first with their line ids
    CHECK(text.starts_with("[UNK]\t0\nفي\t1\nكتاب\t2\n"));
    // additions map back to original identifiers
    CHECK(text.find("ڡى\t1\n") != std::string::npos);       // terminal form
    CHECK(text.find("ڡٮ\t1\n") != std::string::npos);       // medial variant
    CHECK(text.find("كٮاٮ\t2\n") != std::string::npos);

    // undotted versions vs medial-final variants are counted apart
    CHECK(dual.added_count() == 2);
    CHECK(dual.variant_count() == 1);

    // reloading reproduces the mapping bit-exactly
    std::istringstream in(text);
    DualVocab reloaded = DualVocab::load(in);
    CHECK(reloaded.added_count() == dual.added_count());
    CHECK(reloaded.variant_count() == dual.variant_count());
    CHECK(reloaded.dual_mapped_fraction() == dual.dual_mapped_fraction());
    CHECK(reloaded.lookup("كٮاٮ") == 2);
    std::ostringstream again;
    reloaded.save(again);
    CHECK(again.str() == text);
}

TEST_CASE("dual vocab load rejects malformed mappings") {
    std::istringstream no_tab("token-without-tab\n");
    CHECK_THROWS_AS(DualVocab::load(no_tab), std::runtime_error);
    std::istringstream out_of_range("a\t0\nb\t5\n");
    CHECK_THROWS_AS(DualVocab::load(out_of_range), std::runtime_error);
}

TEST_CASE("tokenize whole word") {
    SubwordVocab v = vocab_from("[UNK]\nكتاب\n");
    auto tokens = tokenize("كتاب", v);
    REQUIRE(tokens.size() == 1);
    CHECK(tokens[0] == Token{"كتاب", 1});
}

TEST_CASE("tokenize greedy segmentation with continuations") {
    SubwordVocab v = vocab_from("[UNK]\nال\n##كتاب\nكتاب\n");
    auto tokens = tokenize("الكتاب", v);
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0] == Token{"ال", 1});
    CHECK(tokens[1] == Token{"##كتاب", 2});
}

TEST_CASE("tokenize unknown word and punctuation splitting") {
    SubwordVocab v = vocab_from("[UNK]\nكتاب\n!\n");
    auto tokens = tokenize("مجهول كتاب!", v);
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0] == Token{"[UNK]", 0});
    CHECK(tokens[1] == Token{"كتاب", 1});
    CHECK(tokens[2] == Token{"!", 2});
}

TEST_CASE("tokenize over-long words become unknown") {
    SubwordVocab v = vocab_from("[UNK]\nب\n##ب\n");
    std::string long_word;
    for (int i = 0; i < 101; ++i) long_word += "ب";
    auto tokens = tokenize(long_word, v);
    REQUIRE(tokens.size() == 1);
    CHECK(tokens[0].text == "[UNK]");
}

TEST_CASE("undotted input under the three vocabularies") {
    SubwordVocab v = vocab_from("[UNK]\nكتاب\n");
    std::string undotted = undot_text("كتاب");

    auto vanilla = tokenize(undotted, v);
    REQUIRE(vanilla.size() == 1);
    CHECK(vanilla[0].text == "[UNK]");  // dotless letters are unknown to the vanilla vocab

    auto [collapsed, report] = undot_vocab(v);
    auto with_collapsed = tokenize(undotted, collapsed);
    REQUIRE(with_collapsed.size() == 1);
    CHECK(with_collapsed[0].id == 1);

    DualVocab dual = extend_vocab(v);
    auto with_dual = tokenize(undotted, dual);
    REQUIRE(with_dual.size() == 1);
    CHECK(with_dual[0] == Token{"كٮاٮ", 1});
}

TEST_CASE("conservation, additivity and unk-monotonicity on random vocabularies") {
    SplitMix64 rng(4242);
    for (int round = 0; round < 200; ++round) {
        SubwordVocab v = synthetic::random_vocab(rng);
        auto [collapsed, report] = undot_vocab(v);
        CHECK(report.surviving_vocab_size + report.collision_count == v.id_count());

        DualVocab dual = extend_vocab(v);
        for (std::size_t id = 0; id < v.id_count(); ++id)
            CHECK(dual.lookup(v.token(id)) == static_cast<std::int32_t>(id));

        std::string dotted_text = synthetic::random_text_from_vocab(v, rng, 6);
        CHECK(tokenize(dotted_text, v) == tokenize(dotted_text, dual));

        std::string undotted = undot_text(dotted_text);
        CHECK(count_unknown(tokenize(undotted, dual)) <=
              count_unknown(tokenize(undotted, v)));
    }
}

TEST_CASE("identifiers always come from the original id space") {
    SplitMix64 rng(99);
    for (int round = 0; round < 50; ++round) {
        SubwordVocab v = synthetic::random_vocab(rng);
        auto [collapsed, report] = undot_vocab(v);
        DualVocab dual = extend_vocab(v);
        std::string text = synthetic::random_text_from_vocab(v, rng, 5);
        for (const std::string& variant : {text, undot_text(text)}) {
            for (const auto& t : tokenize(variant, collapsed)) {
                CHECK(t.id >= 0);
                CHECK(t.id < static_cast<std::int32_t>(v.id_count()));
            }
            for (const auto& t : tokenize(variant, dual)) {
                CHECK(t.id >= 0);
                CHECK(t.id < static_cast<std::int32_t>(v.id_count()));
            }
        }
    }
}

TEST_CASE("collision-free round trip through the extended vocabulary") {
    // Premises checked per word: every greedy segment has a collision-free
    // undotted form absent from the vocabulary, and no longer vocabulary or
    // alias string shadows a segment boundary in the undotted word. Under
    // those premises the undotted word must reproduce the identifier
    // sequence of the dotted word.
    SplitMix64 rng(1234);
    int checked = 0;
    for (int round = 0; round < 600 && checked < 120; ++round) {
        SubwordVocab v = synthetic::random_vocab(rng);
        DualVocab dual = extend_vocab(v);
        // multi-piece words: concatenation of one to three token strings
        std::string word;
        std::size_t pieces = 1 + rng.below(3);
        for (std::size_t i = 0; i < pieces; ++i)
            word += synthetic::random_text_from_vocab(v, rng, 1);
        auto base = tokenize(word, v);
        if (base.empty()) continue;

        std::string undotted_word = undot_text(word);
        std::u32string word_cps = decode_utf8(word);
        std::u32string undotted_cps = decode_utf8(undotted_word);
        REQUIRE(word_cps.size() == undotted_cps.size());

        bool eligible = true;
        std::size_t offset = 0;  // codepoint offset of the current segment
        for (std::size_t k = 0; k < base.size() && eligible; ++k) {
            const Token& t = base[k];
            if (t.text == kUnknownToken) {
                eligible = false;
                break;
            }
            std::string_view body{t.text};
            bool continuation = body.substr(0, 2) == kContinuationPrefix;
            if (continuation) body.remove_prefix(2);
            std::size_t len = count_cps(body);
            // the segment's undotted form as it appears inside the word
            std::string prefix = continuation ? std::string(kContinuationPrefix) : "";
            std::string aligned = prefix + encode_utf8(undotted_cps.substr(offset, len));
            if (v.lookup(aligned)) {
                eligible = false;  // undotted form already a vocab string
                break;
            }
            // collision-free: only this token produces the aligned form
            std::size_t producers = 0;
            for (std::size_t id = 0; id < v.id_count(); ++id) {
                if (undot_token(v.token(id)) == aligned ||
                    undot_token_medial_final(v.token(id)) == aligned)
                    ++producers;
            }
            if (producers != 1 || dual.lookup(aligned) != t.id) {
                eligible = false;
                break;
            }
            // no longer match may shadow the boundary
            for (std::size_t longer = len + 1; offset + longer <= undotted_cps.size();
                 ++longer) {
                if (dual.lookup(prefix + encode_utf8(undotted_cps.substr(offset, longer)))) {
                    eligible = false;
                    break;
                }
            }
            offset += len;
        }
        if (!eligible) continue;
        ++checked;
        auto undotted = tokenize(undotted_word, dual);
        REQUIRE(undotted.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) CHECK(undotted[i].id == base[i].id);
    }
    CHECK(checked >= 50);  // the generator must actually exercise the property
}
