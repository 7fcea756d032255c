// Regenerates the bundled demo corpus under data/: a 1,000-prompt corpus
// with synthetic 16-d embeddings and like counts, a matching topic lexicon,
// and embeddings for every pooled specifier phrase. Fully seeded; committed
// outputs only change if this generator changes.

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "promor/corpus.hpp"
#include "promor/rng.hpp"
#include "promor/thematic.hpp"

namespace {

using namespace promor;

constexpr int kDim = 16;
constexpr std::size_t kRecords = 1000;

struct TopicPool {
  std::string name;
  std::vector<std::string> phrases;
};

const std::vector<TopicPool>& topic_pools() {
  static const std::vector<TopicPool> pools = {
      {"Anime", {"anime style", "manga art"}},
      {"Cyberpunk", {"cyberpunk city", "neon lights"}},
      {"DigitalArt", {"digital painting", "concept art", "matte painting"}},
      {"Fantasy", {"dragon lair", "fairy castle", "magic forest"}},
      {"HighRes", {"8k", "4k", "ultra detailed", "high definition"}},
      {"Nature", {"mountain landscape", "ocean waves", "sunset sky"}},
      {"Photography", {"dslr photo", "bokeh", "35mm lens", "studio lighting"}},
      {"Portraits", {"portrait", "face close-up", "headshot"}},
  };
  return pools;
}

const std::vector<std::string>& glue_pool() {
  static const std::vector<std::string> glue = {
      "masterpiece", "best quality", "sharp focus", "cinematic lighting",
      "hdr", "trending style", "vivid colors"};
  return glue;
}

// A few hundred low-frequency words built from prefix-stem combos, so
// creative tails carry genuinely rare vocabulary.
const std::vector<std::string>& rare_words() {
  static const std::vector<std::string> words = [] {
    const char* prefixes[] = {"zephyr", "obsidian", "gossamer", "luminous",
                              "fractal", "verdigris", "chimeric", "sonorous",
                              "vermilion", "nebulous", "arboreal", "cerulean",
                              "mercurial", "opaline", "umbral", "halcyon",
                              "marmoreal", "pellucid"};
    const char* stems[] = {"spire", "tide", "glyph", "loom", "ember",
                           "hollow", "lattice", "meridian", "relic", "shoal",
                           "warren", "aerie", "cinder", "fathom", "grotto",
                           "prism", "thicket", "vault"};
    std::vector<std::string> out;
    for (const char* p : prefixes)
      for (const char* s : stems) out.push_back(std::string(p) + "-" + s);
    return out;
  }();
  return words;
}

std::vector<double> noisy_vector(const std::vector<double>& center,
                                 double sigma, Rng& rng) {
  std::vector<double> v(kDim);
  for (int d = 0; d < kDim; ++d) v[d] = center[d] + sigma * rng.gaussian();
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_dir = argc > 1 ? argv[1] : "data";
  Rng rng(20240601);

  // Fixed centroid per topic pool plus one for the glue phrases.
  std::map<std::string, std::vector<double>> centroids;
  for (const auto& pool : topic_pools()) {
    std::vector<double> c(kDim);
    for (int d = 0; d < kDim; ++d) c[d] = 2.5 * rng.gaussian();
    centroids[pool.name] = c;
  }
  {
    std::vector<double> c(kDim);
    for (int d = 0; d < kDim; ++d) c[d] = 2.5 * rng.gaussian();
    centroids["_glue"] = c;
  }

  Corpus corpus;
  for (std::size_t i = 0; i < kRecords; ++i) {
    PromptRecord rec;
    char id[16];
    std::snprintf(id, sizeof(id), "p%04zu", i);
    rec.id = id;

    // ~7% of prompts carry no lexicon topic at all; they exercise the
    // unlabeled path (absent thematic score, missingness indicator).
    bool unlabeled = rng.real() < 0.07;
    bool creative = unlabeled || rng.real() < 0.35;

    std::vector<std::size_t> picked;
    if (!unlabeled) {
      std::size_t n_topics = 1 + rng.below(3);
      while (picked.size() < n_topics) {
        std::size_t t = rng.below(topic_pools().size());
        bool seen = false;
        for (std::size_t p : picked) seen |= (p == t);
        if (!seen) picked.push_back(t);
      }
    }

    std::vector<std::string> segments;
    auto add_segment = [&](const std::string& s) {
      for (const auto& existing : segments)
        if (existing == s) return;
      segments.push_back(s);
    };
    std::vector<double> center(kDim, 0.0);
    for (std::size_t t : picked) {
      const auto& pool = topic_pools()[t];
      std::size_t n_phrases = 1 + rng.below(2);
      for (std::size_t k = 0; k < n_phrases; ++k)
        add_segment(pool.phrases[rng.below(pool.phrases.size())]);
      for (int d = 0; d < kDim; ++d)
        center[d] += centroids[pool.name][d] /
                     static_cast<double>(picked.size());
    }
    if (picked.empty()) center = centroids["_glue"];
    std::size_t n_glue = rng.below(4);
    for (std::size_t k = 0; k < n_glue; ++k)
      add_segment(glue_pool()[rng.below(glue_pool().size())]);

    if (creative) {
      std::size_t n_words = 2 + rng.below(4);
      std::string tail;
      for (std::size_t w = 0; w < n_words; ++w) {
        if (w) tail += ' ';
        tail += rare_words()[rng.below(rare_words().size())];
      }
      segments.push_back(tail);
    }
    rec.text = join(segments, ", ");

    bool nsfw = rng.real() < 0.2;
    if (rng.real() < 0.9) rec.nsfw = nsfw;

    double likes = 5.0;
    for (std::size_t t : picked) {
      const auto& name = topic_pools()[t].name;
      if (name == "Fantasy") likes += 4.0;
      if (name == "Portraits") likes += 3.0;
      if (name == "Anime") likes += 2.0;
    }
    if (nsfw) likes += 6.0;
    if (creative) likes += 2.0;
    likes += 3.0 * std::abs(rng.gaussian());
    rec.like_count = static_cast<std::uint64_t>(likes);

    double sigma = creative ? 0.9 : 0.25;
    rec.embedding = noisy_vector(center, sigma, rng);
    corpus.records.push_back(std::move(rec));
  }
  write_corpus(corpus, out_dir + "/sample_1k.jsonl", CorpusFormat::Jsonl);

  TopicLexicon lexicon;
  for (const auto& pool : topic_pools()) lexicon.topics[pool.name] = pool.phrases;
  save_lexicon(lexicon, out_dir + "/sample_lexicon.json");

  Corpus spec_embeddings;
  std::size_t sid = 0;
  auto add_phrase = [&](const std::string& phrase,
                        const std::vector<double>& center) {
    PromptRecord rec;
    char id[16];
    std::snprintf(id, sizeof(id), "s%03zu", sid++);
    rec.id = id;
    rec.text = phrase;
    rec.embedding = noisy_vector(center, 0.1, rng);
    spec_embeddings.records.push_back(std::move(rec));
  };
  for (const auto& pool : topic_pools())
    for (const auto& phrase : pool.phrases)
      add_phrase(phrase, centroids[pool.name]);
  for (const auto& phrase : glue_pool()) add_phrase(phrase, centroids["_glue"]);
  write_corpus(spec_embeddings, out_dir + "/sample_specifier_embeddings.jsonl",
               CorpusFormat::Jsonl);

  std::cout << "wrote " << corpus.size() << " records and "
            << spec_embeddings.size() << " specifier embeddings to " << out_dir
            << "\n";
  return 0;
}
