#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "promor/lexical.hpp"
#include "promor/rng.hpp"
#include "promor/util.hpp"

using namespace promor;

namespace {

Corpus corpus_of(const std::vector<std::string>& prompts) {
  Corpus corpus;
  for (std::size_t i = 0; i < prompts.size(); ++i)
    corpus.records.push_back({"p" + std::to_string(i), prompts[i], {}, {}, {},
                              {}});
  return corpus;
}

}  // namespace

TEST_CASE("model build: counts, max_words, top-k ties") {
  auto corpus = corpus_of({"cat dog", "cat bird"});
  auto model = build_lexical_model(corpus, {}, 1.0, 1, 0.1);
  CHECK(model.word_count.at("cat") == 2);
  CHECK(model.word_count.at("dog") == 1);
  CHECK(model.word_count.at("bird") == 1);
  CHECK(model.total_tokens == 4);
  CHECK(model.max_words == 2);
  CHECK(model.common_set == std::set<std::string>{"cat"});

  auto single = build_lexical_model(corpus_of({"x"}), {});
  CHECK(single.word_count.at("x") == 1);
  CHECK(single.max_words == 1);

  // counts {a:2, b:2}, k=1 -> lexicographic tie-break picks a
  auto tie = build_lexical_model(corpus_of({"b a", "a b"}), {}, 1.0, 1, 0.1);
  CHECK(tie.common_set == std::set<std::string>{"a"});
}

TEST_CASE("model build rejects empty and all-stopword corpora") {
  Corpus empty;
  CHECK_THROWS_AS(build_lexical_model(empty, {}), Error);
  auto stopword_only = corpus_of({"the a", "a the"});
  CHECK_THROWS_AS(build_lexical_model(stopword_only, {"the", "a"}), Error);
  CHECK_THROWS_AS(build_lexical_model(corpus_of({"x"}), {}, 0.0), Error);
}

TEST_CASE("rarity is inverse smoothed frequency") {
  auto model = build_lexical_model(corpus_of({"w w w"}), {});
  CHECK(rarity(model, "w") == 0.25);      // freq 3, eps 1
  CHECK(rarity(model, "unseen") == 1.0);  // freq 0
  auto model2 = build_lexical_model(corpus_of({"w"}), {});
  CHECK(rarity(model2, "w") == 0.5);      // freq 1
}

TEST_CASE("score components on the two-prompt corpus") {
  auto corpus = corpus_of({"cat dog", "cat bird"});
  auto model = build_lexical_model(corpus, {}, 1.0, 1, 0.1);

  auto s1 = lexical_score(model, preprocess("cat dog", {}, "a"));
  CHECK(s1.s_original == Catch::Approx(1.0 / 3 + 0.5).epsilon(1e-12));
  CHECK(s1.s_adjusted == Catch::Approx(s1.s_original).epsilon(1e-12));
  CHECK(s1.penalty_rep == 0.0);
  CHECK(s1.penalty_common == Catch::Approx(0.05).epsilon(1e-12));
  CHECK(s1.s_final ==
        Catch::Approx(1.0 / 3 + 0.5 - 0.05).epsilon(1e-12));

  auto s2 = lexical_score(model, preprocess("dog bird", {}, "b"));
  CHECK(s2.s_final == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("clamp binds for heavily repeated prompts") {
  auto corpus = corpus_of({"cat dog", "cat bird", "cat cat cat"});
  auto model = build_lexical_model(corpus, {}, 1.0, 1, 0.1);
  auto s = lexical_score(model, preprocess("cat cat cat", {}, "r"));
  // penalty_rep = n - 1 = 2 swamps the rarity sum
  CHECK(s.penalty_rep == Catch::Approx(2.0));
  CHECK(s.s_final == 0.0);
}

TEST_CASE("empty prompt scores zero with a flag, not an error") {
  auto model = build_lexical_model(corpus_of({"cat dog"}), {});
  auto s = lexical_score(model, preprocess("", {}, "e"));
  CHECK(s.empty_prompt);
  CHECK(s.s_final == 0.0);
  CHECK(s.s_original == 0.0);
}

TEST_CASE("repetition penalty equals n-1 for a single repeated type") {
  auto model = build_lexical_model(corpus_of({"w x y z q"}), {});
  for (std::size_t n : {1u, 2u, 5u, 9u}) {
    std::vector<std::string> tokens(n, "w");
    TokenizedPrompt prompt;
    prompt.tokens = tokens;
    auto s = lexical_score(model, prompt);
    CHECK(s.penalty_rep == Catch::Approx(static_cast<double>(n - 1)));
  }
}

TEST_CASE("replacing a token with a rarer one raises the score") {
  auto corpus = corpus_of({"common common common common rare", "common filler",
                           "filler other words here"});
  auto model = build_lexical_model(corpus, {}, 1.0, 1, 0.0);
  auto low = lexical_score(model, preprocess("other common", {}, "l"));
  auto high = lexical_score(model, preprocess("other rare", {}, "h"));
  CHECK(high.s_final > low.s_final);
}

TEST_CASE("scores match the literal-formula oracle on random corpora") {
  Rng rng(7);
  std::vector<std::string> vocab;
  for (int v = 0; v < 30; ++v) vocab.push_back("w" + std::to_string(v));
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<oracle::Tokens> token_corpus;
    std::vector<std::string> prompts;
    std::size_t n_prompts = 1 + rng.below(40);
    for (std::size_t p = 0; p < n_prompts; ++p) {
      oracle::Tokens tokens;
      std::size_t len = rng.below(10);
      for (std::size_t t = 0; t < len; ++t)
        tokens.push_back(vocab[rng.below(vocab.size())]);
      token_corpus.push_back(tokens);
      prompts.push_back(join(tokens, " "));
    }
    bool any_tokens = false;
    for (const auto& t : token_corpus) any_tokens |= !t.empty();
    if (!any_tokens) continue;

    auto corpus = corpus_of(prompts);
    auto model = build_lexical_model(corpus, {}, 1.0, 5, 0.1);
    auto setup = oracle::lexical_setup(token_corpus, 1.0, 5, 0.1);
    for (std::size_t p = 0; p < n_prompts; ++p) {
      auto s = lexical_score(model, preprocess(prompts[p], {}, ""));
      double expected = oracle::lexical_final(setup, token_corpus[p]);
      CHECK(std::abs(s.s_final - expected) <= 1e-12);
    }
  }
}

TEST_CASE("s_final is never negative (random stress)") {
  Rng rng(99);
  std::vector<std::string> vocab = {"a1", "b2", "c3", "d4"};
  auto corpus = corpus_of({"a1 b2 c3 d4 a1 b2", "c3 c3 c3", "d4 a1"});
  auto model = build_lexical_model(corpus, {}, 0.5, 2, 0.3);
  for (int trial = 0; trial < 500; ++trial) {
    TokenizedPrompt prompt;
    std::size_t len = rng.below(12);
    for (std::size_t t = 0; t < len; ++t)
      prompt.tokens.push_back(vocab[rng.below(vocab.size())]);
    CHECK(lexical_score(model, prompt).s_final >= 0.0);
  }
}

TEST_CASE("doubling the corpus changes only frequency terms") {
  auto base = corpus_of({"cat dog bird", "fish cat"});
  auto doubled = corpus_of({"cat dog bird", "fish cat", "cat dog bird",
                            "fish cat"});
  auto m1 = build_lexical_model(base, {}, 1.0, 1, 0.1);
  auto m2 = build_lexical_model(doubled, {}, 1.0, 1, 0.1);
  CHECK(m1.max_words == m2.max_words);
  auto s1 = lexical_score(m1, preprocess("dog fish", {}, "x"));
  auto s2 = lexical_score(m2, preprocess("dog fish", {}, "x"));
  // Same penalties and length adjustment, smaller rarity terms.
  CHECK(s1.penalty_rep == s2.penalty_rep);
  CHECK(s1.penalty_common == s2.penalty_common);
  CHECK(s2.s_original < s1.s_original);
}
