#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "promor/stopwords.hpp"

namespace promor {

// Normalized token stream shared by all scoring stages. Tokens are lowercase,
// restricted to [a-z0-9'-], stopword-free; bigrams[i] = (tokens[i],
// tokens[i+1]).
struct TokenizedPrompt {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::pair<std::string, std::string>> bigrams;
};

// Lowercase, map every character outside [a-z0-9'-] to a space, split on
// whitespace, drop stopwords. Hyphens and apostrophes stay inside tokens so
// specifier-style terms like "ultra-detailed" survive. Total function: the
// empty token list is a valid result.
inline std::vector<std::string> tokenize(std::string_view text,
                                         const StopwordSet& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      if (!stopwords.count(current)) tokens.push_back(current);
      current.clear();
    }
  };
  for (char raw : text) {
    unsigned char c = static_cast<unsigned char>(raw);
    char mapped;
    if (c >= 'a' && c <= 'z') mapped = static_cast<char>(c);
    else if (c >= 'A' && c <= 'Z') mapped = static_cast<char>(c - 'A' + 'a');
    else if (c >= '0' && c <= '9') mapped = static_cast<char>(c);
    else if (c == '\'' || c == '-') mapped = static_cast<char>(c);
    else mapped = ' ';
    if (mapped == ' ') flush();
    else current += mapped;
  }
  flush();
  return tokens;
}

inline TokenizedPrompt preprocess(std::string_view text,
                                  const StopwordSet& stopwords,
                                  std::string id = "") {
  TokenizedPrompt out;
  out.id = std::move(id);
  out.tokens = tokenize(text, stopwords);
  if (out.tokens.size() >= 2) {
    out.bigrams.reserve(out.tokens.size() - 1);
    for (std::size_t i = 0; i + 1 < out.tokens.size(); ++i)
      out.bigrams.emplace_back(out.tokens[i], out.tokens[i + 1]);
  }
  return out;
}

}  // namespace promor
