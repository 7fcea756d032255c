#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "promor/rng.hpp"
#include "promor/text_prep.hpp"
#include "promor/util.hpp"

using namespace promor;

TEST_CASE("lowercasing, punctuation stripping and stopword removal") {
  StopwordSet stop = {"a"};
  auto tp = preprocess("A Beautiful SUNSET!!", stop);
  CHECK(tp.tokens == std::vector<std::string>{"beautiful", "sunset"});
}

TEST_CASE("all-stopword prompt yields empty token list") {
  StopwordSet stop = {"the"};
  auto tp = preprocess("the the the", stop);
  CHECK(tp.tokens.empty());
  CHECK(tp.bigrams.empty());
}

TEST_CASE("bigrams over filtered tokens; numerals kept") {
  auto tp = preprocess("sunset underwater, 8k", {});
  CHECK(tp.tokens == std::vector<std::string>{"sunset", "underwater", "8k"});
  REQUIRE(tp.bigrams.size() == 2);
  CHECK(tp.bigrams[0] == std::make_pair(std::string("sunset"),
                                        std::string("underwater")));
  CHECK(tp.bigrams[1] ==
        std::make_pair(std::string("underwater"), std::string("8k")));
}

TEST_CASE("hyphens and apostrophes survive inside tokens") {
  auto tp = preprocess("ultra-detailed, artist's style", {});
  CHECK(tp.tokens == std::vector<std::string>{"ultra-detailed", "artist's",
                                              "style"});
}

TEST_CASE("builtin stopword list has the documented size") {
  CHECK(builtin_stopwords().size() == 174);
  CHECK(builtin_stopwords().count("the") == 1);
  CHECK(builtin_stopwords().count("aren't") == 1);
  CHECK(builtin_stopwords().count("sunset") == 0);
}

TEST_CASE("preprocess is idempotent on its own output") {
  Rng rng(2024);
  const std::string alphabet =
      "abcXYZ 0189!?.,;:'-_()[]/\\\"@#$%^&*+=~`\téü";
  const auto& stop = builtin_stopwords();
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    std::size_t len = rng.below(60);
    for (std::size_t i = 0; i < len; ++i)
      text += alphabet[rng.below(alphabet.size())];
    auto once = preprocess(text, stop);
    auto twice = preprocess(join(once.tokens, " "), stop);
    CHECK(once.tokens == twice.tokens);
    // |bigrams| = max(|tokens| - 1, 0)
    std::size_t expected =
        once.tokens.empty() ? 0 : once.tokens.size() - 1;
    CHECK(once.bigrams.size() == expected);
    for (std::size_t i = 0; i + 1 < once.tokens.size(); ++i) {
      CHECK(once.bigrams[i].first == once.tokens[i]);
      CHECK(once.bigrams[i].second == once.tokens[i + 1]);
    }
  }
}

TEST_CASE("stopword override file round-trips through the tokenizer") {
  auto path = std::filesystem::temp_directory_path() / "promor_stop.txt";
  write_file(path.string(), "Foo\nbar\n\n  baz  \n");
  auto set = load_stopwords_file(path.string());
  CHECK(set == StopwordSet{"foo", "bar", "baz"});
  auto tp = preprocess("Foo keeps BAR baz qux", set);
  CHECK(tp.tokens == std::vector<std::string>{"keeps", "qux"});
  std::remove(path.string().c_str());
}
