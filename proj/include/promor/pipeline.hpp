#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "promor/corpus.hpp"
#include "promor/lexical.hpp"
#include "promor/sequence.hpp"
#include "promor/text_prep.hpp"
#include "promor/thematic.hpp"

namespace promor {

// Chunked parallel loop. Results land in preallocated slots indexed by item,
// so outputs are identical for every thread count. The first exception from
// any worker is rethrown on the calling thread after the join.
template <typename Fn>
inline void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::mutex error_mutex;
  std::exception_ptr error;
  for (std::size_t t = 0; t < nthreads; ++t) {
    std::size_t begin = t * n / nthreads;
    std::size_t end = (t + 1) * n / nthreads;
    pool.emplace_back([begin, end, &fn, &error_mutex, &error] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct ScoreParams {
  double epsilon = 1.0;
  std::size_t k_common = 100;
  double w_common = 0.1;
  double floor_prob = 1e-5;
  int threads = 1;
};

struct ScoreOutputs {
  std::vector<LexicalScore> lexical;
  std::vector<SequenceScore> sequence;
  std::vector<ThematicScore> thematic;
};

// Build the three models from the corpus and score every prompt against
// them, in file order. Model building is single-threaded; scoring is
// read-only and fans out across threads.
inline ScoreOutputs score_corpus(const Corpus& corpus,
                                 const TopicLexicon& lexicon,
                                 const StopwordSet& stopwords,
                                 const ScoreParams& params) {
  auto lex_model = build_lexical_model(corpus, stopwords, params.epsilon,
                                       params.k_common, params.w_common);
  auto seq_model =
      build_transition_model(corpus, stopwords, params.floor_prob);
  auto topic_stats = build_topic_stats(corpus, lexicon, stopwords);
  auto compiled = compile_lexicon(lexicon, stopwords);

  ScoreOutputs out;
  out.lexical.resize(corpus.size());
  out.sequence.resize(corpus.size());
  out.thematic.resize(corpus.size());
  parallel_for(corpus.size(), params.threads, [&](std::size_t i) {
    const auto& rec = corpus.records[i];
    auto prompt = preprocess(rec.text, stopwords, rec.id);
    out.lexical[i] = lexical_score(lex_model, prompt);
    out.sequence[i] = sequence_score(seq_model, prompt);
    out.thematic[i] = thematic_score(
        topic_stats, assign_topics(compiled, prompt.tokens), rec.id);
  });
  return out;
}

}  // namespace promor
