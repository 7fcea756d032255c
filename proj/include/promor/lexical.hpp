#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "promor/corpus.hpp"
#include "promor/error.hpp"
#include "promor/text_prep.hpp"

namespace promor {

// Corpus word statistics behind the lexical originality score. Build is a
// single-threaded fold; the built model is immutable, so scoring may run on
// any number of threads.
struct LexicalModel {
  std::map<std::string, std::uint64_t> word_count;
  std::uint64_t total_tokens = 0;
  double epsilon = 1.0;
  std::set<std::string> common_set;
  double common_penalty_weight = 0.1;
  std::size_t max_words = 0;  // max token count over the corpus prompts
};

struct LexicalScore {
  std::string id;
  double s_original = 0.0;
  double s_adjusted = 0.0;
  double penalty_rep = 0.0;
  double penalty_common = 0.0;
  double s_final = 0.0;
  bool empty_prompt = false;  // no tokens after preprocessing; scored 0
};

inline LexicalModel build_lexical_model(const Corpus& corpus,
                                        const StopwordSet& stopwords,
                                        double epsilon = 1.0,
                                        std::size_t k_common = 100,
                                        double w_common = 0.1) {
  if (corpus.empty()) fail_input("cannot build lexical model: empty corpus");
  if (epsilon <= 0.0) fail_input("epsilon must be positive");
  LexicalModel model;
  model.epsilon = epsilon;
  model.common_penalty_weight = w_common;
  for (const auto& rec : corpus.records) {
    auto tokens = tokenize(rec.text, stopwords);
    model.max_words = std::max(model.max_words, tokens.size());
    for (auto& t : tokens) {
      ++model.word_count[t];
      ++model.total_tokens;
    }
  }
  if (model.max_words == 0)
    fail_input("cannot build lexical model: all prompts empty after "
               "preprocessing");

  // Top-k by count, ties broken lexicographically ascending.
  std::vector<std::pair<std::string, std::uint64_t>> by_count(
      model.word_count.begin(), model.word_count.end());
  std::sort(by_count.begin(), by_count.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (std::size_t i = 0; i < by_count.size() && i < k_common; ++i)
    model.common_set.insert(by_count[i].first);
  return model;
}

// Inverse smoothed frequency; unseen words have frequency 0.
inline double rarity(const LexicalModel& model, const std::string& word) {
  auto it = model.word_count.find(word);
  double freq = it == model.word_count.end()
                    ? 0.0
                    : static_cast<double>(it->second);
  return 1.0 / (freq + model.epsilon);
}

inline LexicalScore lexical_score(const LexicalModel& model,
                                  const TokenizedPrompt& prompt) {
  LexicalScore score;
  score.id = prompt.id;
  const std::size_t n = prompt.tokens.size();
  if (n == 0) {
    score.empty_prompt = true;
    return score;
  }
  std::map<std::string, std::size_t> within;
  for (const auto& t : prompt.tokens) ++within[t];

  double n_d = static_cast<double>(n);
  std::size_t common_positions = 0;
  double rep_sum = 0.0;
  for (const auto& t : prompt.tokens) {
    score.s_original += rarity(model, t);
    rep_sum += static_cast<double>(within[t] - 1);
    if (model.common_set.count(t)) ++common_positions;
  }
  score.s_adjusted =
      score.s_original * n_d / static_cast<double>(model.max_words);
  score.penalty_rep = rep_sum / n_d;
  score.penalty_common = model.common_penalty_weight *
                         static_cast<double>(common_positions) / n_d;
  score.s_final = std::max(
      score.s_adjusted - score.penalty_rep - score.penalty_common, 0.0);
  return score;
}

}  // namespace promor
