#include <doctest.h>

#include "tseg/text.hpp"

using namespace tseg;

TEST_CASE("tokenize folds case and splits on punctuation") {
    CHECK(text::tokenize("Hello, World!") == std::vector<std::string>{"hello", "world"});
    CHECK(text::tokenize("  ") .empty());
    CHECK(text::tokenize("ÁGUA e Ação") == std::vector<std::string>{"água", "e", "ação"});
    CHECK(text::tokenize("ΑΘΗΝΑ Москва") == std::vector<std::string>{"αθηνα", "москва"});
    CHECK(text::tokenize("item-3: 12.5%") == std::vector<std::string>{"item", "3", "12", "5"});
}

TEST_CASE("utf8 decode and encode round-trip") {
    const std::string s = "aé€😀";
    std::string rebuilt;
    for (std::size_t pos = 0; pos < s.size();) text::append_utf8(rebuilt, text::decode_utf8(s, pos));
    CHECK(rebuilt == s);
}

TEST_CASE("trim and fnv1a64") {
    CHECK(text::trim("  a b \t\n") == "a b");
    CHECK(text::trim("") == "");
    CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
