#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "promor/corpus.hpp"
#include "promor/error.hpp"
#include "promor/text_prep.hpp"

namespace promor {

// First-order Markov model over preprocessed bigrams. Unseen transitions get
// a constant floor probability instead of zero; observed transitions keep
// their exact maximum-likelihood ratio, so per-predecessor probabilities sum
// to one over observed successors.
struct TransitionModel {
  std::map<std::pair<std::string, std::string>, std::uint64_t> bigram_count;
  std::map<std::string, std::uint64_t> out_total;
  double floor_prob = 1e-5;
};

struct SequenceScore {
  std::string id;
  double raw_sum = 0.0;
  std::size_t n_bigrams = 0;
  double s_seq = 0.0;
  bool insufficient_tokens = false;  // fewer than 2 tokens; scored 0
};

inline TransitionModel build_transition_model(const Corpus& corpus,
                                              const StopwordSet& stopwords,
                                              double floor_prob = 1e-5) {
  if (corpus.empty())
    fail_input("cannot build transition model: empty corpus");
  if (floor_prob <= 0.0) fail_input("floor probability must be positive");
  TransitionModel model;
  model.floor_prob = floor_prob;
  for (const auto& rec : corpus.records) {
    auto tokens = tokenize(rec.text, stopwords);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      ++model.bigram_count[{tokens[i], tokens[i + 1]}];
      ++model.out_total[tokens[i]];
    }
  }
  // A corpus where no prompt yields two tokens leaves both maps empty; that
  // model is valid and every scored transition falls to the floor.
  return model;
}

inline double transition_prob(const TransitionModel& model,
                              const std::string& w1, const std::string& w2) {
  auto it = model.bigram_count.find({w1, w2});
  if (it == model.bigram_count.end()) return model.floor_prob;
  return static_cast<double>(it->second) /
         static_cast<double>(model.out_total.at(w1));
}

// Mean surprisal over the prompt's bigrams: sum of -ln P(w2|w1), divided by
// the number of bigrams so prompts of different lengths stay comparable.
inline SequenceScore sequence_score(const TransitionModel& model,
                                    const TokenizedPrompt& prompt) {
  SequenceScore score;
  score.id = prompt.id;
  score.n_bigrams = prompt.bigrams.size();
  if (score.n_bigrams == 0) {
    score.insufficient_tokens = true;
    return score;
  }
  for (const auto& [w1, w2] : prompt.bigrams)
    score.raw_sum += -std::log(transition_prob(model, w1, w2));
  score.s_seq = score.raw_sum / static_cast<double>(score.n_bigrams);
  return score;
}

}  // namespace promor
