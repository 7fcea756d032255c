#pragma once

#include <string>
#include <string_view>
#include <unordered_set>

#include "promor/util.hpp"

namespace promor {

using StopwordSet = std::unordered_set<std::string>;

// Built-in English stopword list (174 words, classic contraction-aware list).
// The tokenizer keeps apostrophes inside tokens, so contracted forms appear
// here in tokenized spelling. Overridable via a one-word-per-line file.
inline constexpr std::string_view kStopwordListVersion = "en-174.v1";

namespace detail {
inline constexpr const char* kStopwords[] = {
    "a",          "about",   "above",    "after",    "again",     "against",
    "all",        "am",      "an",       "and",      "any",       "are",
    "aren't",     "as",      "at",       "be",       "because",   "been",
    "before",     "being",   "below",    "between",  "both",      "but",
    "by",         "can",     "cannot",   "could",    "couldn't",  "did",
    "didn't",     "do",      "does",     "doesn't",  "doing",     "don't",
    "down",       "during",  "each",     "few",      "for",       "from",
    "further",    "had",     "hadn't",   "has",      "hasn't",    "have",
    "haven't",    "having",  "he",       "he'd",     "he'll",     "he's",
    "her",        "here",    "here's",   "hers",     "herself",   "him",
    "himself",    "his",     "how",      "how's",    "i",         "i'd",
    "i'll",       "i'm",     "i've",     "if",       "in",        "into",
    "is",         "isn't",   "it",       "it's",     "its",       "itself",
    "let's",      "me",      "more",     "most",     "mustn't",   "my",
    "myself",     "no",      "nor",      "not",      "of",        "off",
    "on",         "once",    "only",     "or",       "other",     "ought",
    "our",        "ours",    "ourselves", "out",     "over",      "own",
    "same",       "shan't",  "she",      "she'd",    "she'll",    "she's",
    "should",     "shouldn't", "so",     "some",     "such",      "than",
    "that",       "that's",  "the",      "their",    "theirs",    "them",
    "themselves", "then",    "there",    "there's",  "these",     "they",
    "they'd",     "they'll", "they're",  "they've",  "this",      "those",
    "through",    "to",      "too",      "under",    "until",     "up",
    "very",       "was",     "wasn't",   "we",       "we'd",      "we'll",
    "we're",      "we've",   "were",     "weren't",  "what",      "what's",
    "when",       "when's",  "where",    "where's",  "which",     "while",
    "who",        "who's",   "whom",     "why",      "why's",     "with",
    "won't",      "would",   "wouldn't", "you",      "you'd",     "you'll",
    "you're",     "you've",  "your",     "yours",    "yourself",  "yourselves",
};
}  // namespace detail

inline const StopwordSet& builtin_stopwords() {
  static const StopwordSet set(std::begin(detail::kStopwords),
                               std::end(detail::kStopwords));
  return set;
}

// Override file: one word per line, UTF-8; blank lines ignored; entries
// lowercased so they match tokenizer output.
inline StopwordSet load_stopwords_file(const std::string& path) {
  StopwordSet set;
  std::string content = read_file(path);
  for (const auto& raw : split(content, '\n')) {
    auto word = trim(raw);
    if (word.empty()) continue;
    set.insert(to_lower_ascii(word));
  }
  return set;
}

}  // namespace promor
