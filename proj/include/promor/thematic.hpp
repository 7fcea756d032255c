#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "promor/corpus.hpp"
#include "promor/error.hpp"
#include "promor/text_prep.hpp"
#include "promor/util.hpp"

namespace promor {

// Topic name -> keyword phrases (lowercase). Loaded from a JSON object of
// topic -> array of strings; also produced by the specifier miner.
struct TopicLexicon {
  std::map<std::string, std::vector<std::string>> topics;
};

inline TopicLexicon load_lexicon(const std::string& path) {
  TopicLexicon lex;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail_input(path + ": invalid lexicon JSON: " + e.what());
  }
  if (!j.is_object()) fail_input(path + ": lexicon must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_array() || it.value().empty())
      fail_input(path + ": topic \"" + it.key() +
                 "\" must map to a nonempty keyword array");
    std::vector<std::string> keywords;
    for (const auto& k : it.value()) {
      if (!k.is_string())
        fail_input(path + ": non-string keyword under topic \"" + it.key() +
                   "\"");
      keywords.push_back(to_lower_ascii(k.get<std::string>()));
    }
    lex.topics[it.key()] = std::move(keywords);
  }
  return lex;
}

inline void save_lexicon(const TopicLexicon& lex, const std::string& path) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, keywords] : lex.topics) j[name] = keywords;
  write_file(path, j.dump(2) + "\n");
}

// Keyword phrases pre-tokenized with the active stopword set, so matching is
// whole-token: keyword "cat" never matches token "catalog".
struct CompiledLexicon {
  std::map<std::string, std::vector<std::vector<std::string>>> phrase_tokens;
};

inline CompiledLexicon compile_lexicon(const TopicLexicon& lex,
                                       const StopwordSet& stopwords) {
  CompiledLexicon out;
  for (const auto& [name, keywords] : lex.topics) {
    auto& phrases = out.phrase_tokens[name];
    for (const auto& phrase : keywords) {
      auto tokens = tokenize(phrase, stopwords);
      if (!tokens.empty()) phrases.push_back(std::move(tokens));
    }
  }
  return out;
}

namespace detail {
inline bool contains_phrase(const std::vector<std::string>& tokens,
                            const std::vector<std::string>& phrase) {
  if (phrase.empty() || phrase.size() > tokens.size()) return false;
  for (std::size_t start = 0; start + phrase.size() <= tokens.size(); ++start) {
    bool all = true;
    for (std::size_t k = 0; k < phrase.size(); ++k) {
      if (tokens[start + k] != phrase[k]) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}
}  // namespace detail

// Topics whose keyword phrases occur as contiguous whole-token runs in the
// prompt; sorted lexicographically, deduplicated.
inline std::vector<std::string> assign_topics(
    const CompiledLexicon& lexicon, const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const auto& [name, phrases] : lexicon.phrase_tokens) {
    for (const auto& phrase : phrases) {
      if (detail::contains_phrase(tokens, phrase)) {
        out.push_back(name);
        break;
      }
    }
  }
  return out;  // map iteration order is already sorted + unique
}

inline std::vector<std::string> assign_topics(const TopicLexicon& lexicon,
                                              std::string_view prompt_text,
                                              const StopwordSet& stopwords) {
  return assign_topics(compile_lexicon(lexicon, stopwords),
                       tokenize(prompt_text, stopwords));
}

// Topic and topic-pair occurrence probabilities over a corpus. Zero-topic
// prompts count in the denominator.
struct TopicStats {
  std::map<std::string, double> single_prob;
  std::map<std::pair<std::string, std::string>, double> pair_prob;  // a < b
  std::size_t n_prompts = 0;
};

inline TopicStats build_topic_stats(const Corpus& corpus,
                                    const TopicLexicon& lexicon,
                                    const StopwordSet& stopwords) {
  if (corpus.empty()) fail_input("cannot build topic stats: empty corpus");
  auto compiled = compile_lexicon(lexicon, stopwords);
  std::map<std::string, std::uint64_t> single;
  std::map<std::pair<std::string, std::string>, std::uint64_t> pairs;
  for (const auto& rec : corpus.records) {
    auto topics = assign_topics(compiled, tokenize(rec.text, stopwords));
    for (const auto& t : topics) ++single[t];
    for (std::size_t i = 0; i < topics.size(); ++i)
      for (std::size_t j = i + 1; j < topics.size(); ++j)
        ++pairs[{topics[i], topics[j]}];
  }
  TopicStats stats;
  stats.n_prompts = corpus.size();
  double n = static_cast<double>(stats.n_prompts);
  for (const auto& [t, c] : single)
    stats.single_prob[t] = static_cast<double>(c) / n;
  for (const auto& [p, c] : pairs)
    stats.pair_prob[p] = static_cast<double>(c) / n;
  return stats;
}

struct ThematicScore {
  std::string id;
  std::vector<std::string> topics;          // sorted
  std::optional<double> s_topic;            // absent when no topics assigned
};

// Negative-log rarity of the prompt's topics plus all unordered topic pairs.
// A pair never observed in the stats corpus (possible when scoring against
// foreign stats) is floored at 1/n_prompts so the log stays finite.
inline ThematicScore thematic_score(const TopicStats& stats,
                                    std::vector<std::string> topics,
                                    std::string id = "") {
  ThematicScore score;
  score.id = std::move(id);
  score.topics = std::move(topics);
  if (score.topics.empty()) return score;

  double total = 0.0;
  for (const auto& t : score.topics) {
    auto it = stats.single_prob.find(t);
    if (it == stats.single_prob.end())
      fail_input("topic \"" + t + "\" not present in topic stats");
    total += -std::log(it->second);
  }
  double floor = 1.0 / static_cast<double>(stats.n_prompts);
  for (std::size_t i = 0; i < score.topics.size(); ++i) {
    for (std::size_t j = i + 1; j < score.topics.size(); ++j) {
      auto key = score.topics[i] < score.topics[j]
                     ? std::make_pair(score.topics[i], score.topics[j])
                     : std::make_pair(score.topics[j], score.topics[i]);
      auto it = stats.pair_prob.find(key);
      double p = it == stats.pair_prob.end() ? floor : it->second;
      total += -std::log(p);
    }
  }
  score.s_topic = total;
  return score;
}

}  // namespace promor
