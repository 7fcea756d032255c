// promor: corpus analytics for text-to-image prompt originality.
//
// Subcommands: score, band, specifiers, diversity, engage, report.
// Exit codes: 0 ok, 1 internal error, 2 bad input.
// All randomness derives from one --seed; thread count never changes output.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "promor/promor.hpp"

namespace {

using namespace promor;

struct CommonOpts {
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  std::string stopwords_path;
};

StopwordSet active_stopwords(const CommonOpts& common) {
  if (!common.stopwords_path.empty())
    return load_stopwords_file(common.stopwords_path);
  return builtin_stopwords();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail_input("cannot create output directory: " + dir);
}

Corpus load_corpus(const std::string& path, const std::string& format,
                   std::optional<std::size_t> sample, std::uint64_t seed) {
  auto corpus = read_corpus(path, corpus_format_from_string(format));
  if (corpus.empty()) fail_input("empty corpus: " + path);
  if (sample) corpus = sample_corpus(corpus, *sample, derive_seed(seed, "sample"));
  return corpus;
}

// ---------------------------------------------------------------- score

struct ScoreOpts {
  CommonOpts common;
  std::string input;
  std::string format = "jsonl";
  std::string lexicon_path;
  std::string model_corpus_path;  // optional reference corpus for the models
  std::string model_format = "jsonl";
  std::optional<std::size_t> sample;
  ScoreParams params;
};

void cmd_score(const ScoreOpts& opt) {
  auto stopwords = active_stopwords(opt.common);
  auto corpus = load_corpus(opt.input, opt.format, opt.sample, opt.common.seed);
  auto lexicon = load_lexicon(opt.lexicon_path);

  ScoreOutputs outputs;
  if (opt.model_corpus_path.empty()) {
    outputs = score_corpus(corpus, lexicon, stopwords, opt.params);
  } else {
    // Score this corpus against models built from a reference corpus.
    auto reference = load_corpus(opt.model_corpus_path, opt.model_format,
                                 std::nullopt, opt.common.seed);
    auto lex_model = build_lexical_model(reference, stopwords,
                                         opt.params.epsilon,
                                         opt.params.k_common,
                                         opt.params.w_common);
    auto seq_model =
        build_transition_model(reference, stopwords, opt.params.floor_prob);
    auto stats = build_topic_stats(reference, lexicon, stopwords);
    auto compiled = compile_lexicon(lexicon, stopwords);
    outputs.lexical.resize(corpus.size());
    outputs.sequence.resize(corpus.size());
    outputs.thematic.resize(corpus.size());
    parallel_for(corpus.size(), opt.params.threads, [&](std::size_t i) {
      const auto& rec = corpus.records[i];
      auto prompt = preprocess(rec.text, stopwords, rec.id);
      outputs.lexical[i] = lexical_score(lex_model, prompt);
      outputs.sequence[i] = sequence_score(seq_model, prompt);
      outputs.thematic[i] = thematic_score(
          stats, assign_topics(compiled, prompt.tokens), rec.id);
    });
  }

  ensure_out_dir(opt.common.out_dir);
  write_file(opt.common.out_dir + "/scores_lexical.csv",
             lexical_scores_csv(outputs.lexical));
  write_file(opt.common.out_dir + "/scores_sequence.csv",
             sequence_scores_csv(outputs.sequence));
  write_file(opt.common.out_dir + "/scores_thematic.csv",
             thematic_scores_csv(outputs.thematic));
  write_file(opt.common.out_dir + "/scores.csv",
             merged_scores_csv(outputs.lexical, outputs.sequence,
                               outputs.thematic));

  nlohmann::json config = {
      {"input", opt.input},
      {"format", opt.format},
      {"lexicon", opt.lexicon_path},
      {"epsilon", opt.params.epsilon},
      {"k_common", opt.params.k_common},
      {"w_common", opt.params.w_common},
      {"floor_prob", opt.params.floor_prob},
      {"stopword_list",
       opt.common.stopwords_path.empty() ? std::string(kStopwordListVersion)
                                         : opt.common.stopwords_path}};
  if (opt.sample) config["sample"] = *opt.sample;
  if (!opt.model_corpus_path.empty())
    config["model_corpus"] = opt.model_corpus_path;
  std::vector<std::string> inputs = {opt.input, opt.lexicon_path};
  if (!opt.model_corpus_path.empty()) inputs.push_back(opt.model_corpus_path);
  if (!opt.common.stopwords_path.empty())
    inputs.push_back(opt.common.stopwords_path);
  write_manifest(opt.common.out_dir, "score", opt.common.seed, config, inputs,
                 {"scores_lexical.csv", "scores_sequence.csv",
                  "scores_thematic.csv", "scores.csv"});
}

// ----------------------------------------------------------------- band

struct BandOpts {
  CommonOpts common;
  std::string scores_path;
  std::string metric = "all";
  bool include_flagged = false;
};

void cmd_band(const BandOpts& opt) {
  auto rows = read_merged_scores(opt.scores_path);
  std::vector<std::string> metrics;
  if (opt.metric == "all") metrics = {"lexical", "sequence", "thematic"};
  else metrics = {opt.metric};

  ensure_out_dir(opt.common.out_dir);
  std::vector<std::string> outputs;
  for (const auto& metric : metrics) {
    auto scores = bandable_scores(rows, metric, opt.include_flagged);
    if (scores.empty())
      fail_input("no bandable " + metric + " scores in " + opt.scores_path);
    auto banding = band_scores(scores, metric,
                               derive_seed(opt.common.seed, "band." + metric));
    write_file(opt.common.out_dir + "/bands_" + metric + ".csv",
               bands_csv(banding));
    write_file(opt.common.out_dir + "/band_histogram_" + metric + ".json",
               histogram_json(banding));
    outputs.push_back("bands_" + metric + ".csv");
    outputs.push_back("band_histogram_" + metric + ".json");
  }

  nlohmann::json config = {{"scores", opt.scores_path},
                           {"metric", opt.metric},
                           {"include_flagged", opt.include_flagged}};
  write_manifest(opt.common.out_dir, "band", opt.common.seed, config,
                 {opt.scores_path}, outputs);
}

// ----------------------------------------------------------- specifiers

struct SpecifierOpts {
  CommonOpts common;
  std::string input;
  std::string format = "jsonl";
  std::uint64_t min_count = 300;
  std::size_t max_len = 35;
  std::string embeddings_path;
  std::string embeddings_format = "jsonl";
  int clusters = 0;  // 0 = no clustering
  std::size_t top_n = 10;
  std::string names_csv;
  std::optional<std::size_t> sample;
};

void cmd_specifiers(const SpecifierOpts& opt) {
  auto corpus = load_corpus(opt.input, opt.format, opt.sample, opt.common.seed);
  auto specifiers = extract_specifiers(corpus, opt.min_count, opt.max_len);

  std::vector<int> cluster_of(specifiers.size(), -1);
  std::optional<TopicLexicon> lexicon;
  bool clustered = false;
  if (opt.clusters > 0) {
    if (opt.embeddings_path.empty())
      fail_input("clustering requested but no --embeddings file given");
    if (specifiers.empty())
      fail_input("no specifiers retained; nothing to cluster");
    auto emb_corpus =
        read_corpus(opt.embeddings_path,
                    corpus_format_from_string(opt.embeddings_format));
    std::map<std::string, const std::vector<double>*> by_text;
    for (const auto& rec : emb_corpus.records) {
      if (rec.embedding)
        by_text[to_lower_ascii(trim(rec.text))] = &*rec.embedding;
    }
    for (auto& s : specifiers) {
      auto it = by_text.find(s.text);
      if (it == by_text.end())
        fail_input("no embedding for specifier \"" + s.text + "\" in " +
                   opt.embeddings_path);
      s.embedding = *it->second;
    }
    auto clustering = cluster_specifiers(specifiers, opt.clusters,
                                         derive_seed(opt.common.seed,
                                                     "specifiers.kmeans"));
    if (clustering.dropped_empty > 0)
      std::cerr << "warning: dropped " << clustering.dropped_empty
                << " empty cluster(s)\n";
    auto stopwords = active_stopwords(opt.common);
    ctfidf_keywords(clustering.clusters, specifiers, opt.top_n, stopwords);
    std::optional<std::vector<std::string>> names;
    if (!opt.names_csv.empty()) names = split(opt.names_csv, ',');
    lexicon = emit_lexicon(clustering.clusters, names);
    for (const auto& cluster : clustering.clusters)
      for (std::size_t idx : cluster.members)
        cluster_of[idx] = cluster.cluster_id;
    clustered = true;
  }

  ensure_out_dir(opt.common.out_dir);
  std::string csv;
  write_csv_row(csv, {"text", "count", "cluster_id"});
  for (std::size_t i = 0; i < specifiers.size(); ++i) {
    write_csv_row(csv, {specifiers[i].text,
                        std::to_string(specifiers[i].count),
                        clustered ? std::to_string(cluster_of[i])
                                  : std::string()});
  }
  write_file(opt.common.out_dir + "/specifiers.csv", csv);
  std::vector<std::string> outputs = {"specifiers.csv"};
  if (lexicon) {
    save_lexicon(*lexicon, opt.common.out_dir + "/lexicon.json");
    outputs.push_back("lexicon.json");
  }

  nlohmann::json config = {{"input", opt.input},
                           {"format", opt.format},
                           {"min_count", opt.min_count},
                           {"max_len", opt.max_len},
                           {"clusters", opt.clusters},
                           {"top_n", opt.top_n}};
  if (opt.sample) config["sample"] = *opt.sample;
  std::vector<std::string> inputs = {opt.input};
  if (!opt.embeddings_path.empty()) {
    inputs.push_back(opt.embeddings_path);
    config["embeddings"] = opt.embeddings_path;
  }
  write_manifest(opt.common.out_dir, "specifiers", opt.common.seed, config,
                 inputs, outputs);
}

// ------------------------------------------------------------ diversity

struct DiversityOpts {
  CommonOpts common;
  std::string input;
  std::string format = "jsonl";
  std::string bands_path;
  int clusters = 5;
  std::string topic;
  std::string lexicon_path;
};

void cmd_diversity(const DiversityOpts& opt) {
  auto corpus = load_corpus(opt.input, opt.format, std::nullopt,
                            opt.common.seed);
  auto bands = read_bands_csv(opt.bands_path);

  std::optional<CompiledLexicon> compiled;
  StopwordSet stopwords;
  if (!opt.topic.empty()) {
    if (opt.lexicon_path.empty())
      fail_input("--topic requires --lexicon for label assignment");
    stopwords = active_stopwords(opt.common);
    compiled = compile_lexicon(load_lexicon(opt.lexicon_path), stopwords);
  }

  EmbeddingSet set;
  std::vector<std::vector<double>> rows;
  std::optional<std::size_t> dim;
  for (const auto& rec : corpus.records) {
    auto it = bands.find(rec.id);
    if (it == bands.end()) continue;  // not banded (flagged or absent score)
    if (it->second != "High" && it->second != "Low") continue;
    if (compiled) {
      auto topics = assign_topics(*compiled, tokenize(rec.text, stopwords));
      bool has = false;
      for (const auto& t : topics) has |= (t == opt.topic);
      if (!has) continue;
    }
    if (!rec.embedding)
      fail_input("record \"" + rec.id + "\" missing field 'embedding'");
    if (!dim) dim = rec.embedding->size();
    set.ids.push_back(rec.id);
    set.labels.push_back(it->second);
    rows.push_back(*rec.embedding);
  }
  if (set.ids.empty())
    fail_input("no High/Low-banded records with embeddings to compare");
  set.vectors.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(*dim));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < *dim; ++c)
      set.vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];

  auto report = compare_groups(set, opt.clusters,
                               derive_seed(opt.common.seed, "diversity"));

  ensure_out_dir(opt.common.out_dir);
  write_file(opt.common.out_dir + "/diversity_report.json",
             diversity_report_json(report));
  write_file(opt.common.out_dir + "/diversity_scatter.json",
             scatter_json(report));

  nlohmann::json config = {{"input", opt.input},
                           {"format", opt.format},
                           {"bands", opt.bands_path},
                           {"clusters", opt.clusters}};
  if (!opt.topic.empty()) config["topic"] = opt.topic;
  std::vector<std::string> inputs = {opt.input, opt.bands_path};
  if (!opt.lexicon_path.empty()) inputs.push_back(opt.lexicon_path);
  write_manifest(opt.common.out_dir, "diversity", opt.common.seed, config,
                 inputs, {"diversity_report.json", "diversity_scatter.json"});
}

// --------------------------------------------------------------- engage

struct EngageOpts {
  CommonOpts common;
  std::string input;
  std::string format = "jsonl";
  std::string scores_path;
  std::string lexicon_path;
  double lambda = 0.1;
  int folds = 5;
  double threshold = 0.05;
};

void cmd_engage(const EngageOpts& opt) {
  auto corpus = load_corpus(opt.input, opt.format, std::nullopt,
                            opt.common.seed);
  auto lexicon = load_lexicon(opt.lexicon_path);
  auto stopwords = active_stopwords(opt.common);
  std::map<std::string, ScoreTriple> scores;
  for (const auto& row : read_merged_scores(opt.scores_path))
    scores[row.id] = row.scores;

  EngagementConfig config;
  config.lambda = opt.lambda;
  config.folds = opt.folds;
  config.p_threshold = opt.threshold;
  config.seed = opt.common.seed;
  auto result = run_engagement(corpus, scores, lexicon, stopwords, config);
  if (result.singular)
    std::cerr << "warning: singular design matrix; pseudo-inverse used for "
                 "inference\n";

  ensure_out_dir(opt.common.out_dir);
  write_file(opt.common.out_dir + "/engage_coefficients.csv",
             coefficients_csv(result));
  write_file(opt.common.out_dir + "/engage_metrics.json",
             engage_metrics_json(result, opt.folds));
  write_file(opt.common.out_dir + "/engage_model.json",
             engage_model_json(result));

  nlohmann::json config_json = {{"input", opt.input},
                                {"format", opt.format},
                                {"scores", opt.scores_path},
                                {"lexicon", opt.lexicon_path},
                                {"lambda", opt.lambda},
                                {"folds", opt.folds},
                                {"threshold", opt.threshold}};
  write_manifest(opt.common.out_dir, "engage", opt.common.seed, config_json,
                 {opt.input, opt.scores_path, opt.lexicon_path},
                 {"engage_coefficients.csv", "engage_metrics.json",
                  "engage_model.json"});
}

// --------------------------------------------------------------- report

struct ReportOpts {
  CommonOpts common;
  std::string artifacts_dir;
};

void cmd_report(const ReportOpts& opt) {
  std::string dir =
      opt.artifacts_dir.empty() ? opt.common.out_dir : opt.artifacts_dir;
  auto result = render_report(dir);
  ensure_out_dir(opt.common.out_dir);
  write_file(opt.common.out_dir + "/report.md", result.markdown);
  write_file(opt.common.out_dir + "/topic_proportions.json",
             result.topic_proportions.dump(2) + "\n");
  for (const auto& name : result.missing)
    std::cerr << "note: artifact not found, section marked not computed: "
              << name << "\n";

  nlohmann::json config = {{"artifacts", dir}};
  write_manifest(opt.common.out_dir, "report", opt.common.seed, config, {},
                 {"report.md", "topic_proportions.json"});
}

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--out", common.out_dir, "output directory")
      ->envname("PROMOR_OUT_DIR");
  cmd->add_option("--seed", common.seed, "root seed for all randomness");
  cmd->add_option("--stopwords", common.stopwords_path,
                  "stopword override file (one word per line)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prompt originality corpus analytics"};
  app.require_subcommand(1);

  ScoreOpts score_opts;
  auto* score = app.add_subcommand(
      "score", "compute lexical, sequence and thematic originality scores");
  add_common(score, score_opts.common);
  score->add_option("--input", score_opts.input, "corpus file")->required();
  score->add_option("--format", score_opts.format, "jsonl or csv");
  score->add_option("--lexicon", score_opts.lexicon_path,
                    "topic lexicon JSON")->required();
  score->add_option("--model-corpus", score_opts.model_corpus_path,
                    "build models from this corpus instead of the input");
  score->add_option("--model-format", score_opts.model_format,
                    "reference corpus format");
  std::size_t score_sample = 0;
  score->add_option("--sample", score_sample,
                    "score a seeded random sample of this size");
  score->add_option("--epsilon", score_opts.params.epsilon,
                    "rarity smoothing constant");
  score->add_option("--k-common", score_opts.params.k_common,
                    "size of the common-word set");
  score->add_option("--w-common", score_opts.params.w_common,
                    "common-word penalty weight");
  score->add_option("--floor-prob", score_opts.params.floor_prob,
                    "probability floor for unseen bigrams");
  score->add_option("--threads", score_opts.params.threads,
                    "scoring threads (output independent of this)");

  BandOpts band_opts;
  auto* band = app.add_subcommand(
      "band", "cluster scores into Low/Moderate/High originality bands");
  add_common(band, band_opts.common);
  band->add_option("--scores", band_opts.scores_path,
                   "merged scores.csv from the score command")->required();
  band->add_option("--metric", band_opts.metric,
                   "all, lexical, sequence or thematic");
  band->add_flag("--include-flagged", band_opts.include_flagged,
                 "band flagged prompts as score 0 instead of excluding them");

  SpecifierOpts spec_opts;
  auto* specifiers = app.add_subcommand(
      "specifiers", "mine comma-separated prompt specifiers and keywords");
  add_common(specifiers, spec_opts.common);
  specifiers->add_option("--input", spec_opts.input, "corpus file")
      ->required();
  specifiers->add_option("--format", spec_opts.format, "jsonl or csv");
  specifiers->add_option("--min-count", spec_opts.min_count,
                         "retain specifiers appearing at least this often");
  specifiers->add_option("--max-len", spec_opts.max_len,
                         "retain specifiers strictly shorter than this");
  specifiers->add_option("--embeddings", spec_opts.embeddings_path,
                         "specifier embedding corpus (text matched exactly)");
  specifiers->add_option("--embeddings-format", spec_opts.embeddings_format,
                         "embedding corpus format");
  specifiers->add_option("--clusters", spec_opts.clusters,
                         "cluster count (0 skips clustering)");
  specifiers->add_option("--top-n", spec_opts.top_n,
                         "keywords per cluster");
  specifiers->add_option("--names", spec_opts.names_csv,
                         "comma-separated topic names for the clusters");
  std::size_t spec_sample = 0;
  specifiers->add_option("--sample", spec_sample,
                         "mine a seeded random sample of this size");

  DiversityOpts div_opts;
  auto* diversity = app.add_subcommand(
      "diversity", "compare embedding dispersion across originality bands");
  add_common(diversity, div_opts.common);
  diversity->add_option("--input", div_opts.input,
                        "corpus file with embeddings")->required();
  diversity->add_option("--format", div_opts.format, "jsonl or csv");
  diversity->add_option("--bands", div_opts.bands_path,
                        "band CSV from the band command")->required();
  diversity->add_option("--clusters", div_opts.clusters,
                        "K-Means clusters over the 2-D projection");
  diversity->add_option("--topic", div_opts.topic,
                        "restrict to prompts carrying this topic label");
  diversity->add_option("--lexicon", div_opts.lexicon_path,
                        "lexicon for --topic label assignment");

  EngageOpts engage_opts;
  auto* engage = app.add_subcommand(
      "engage", "fit the like-count regression over prompt features");
  add_common(engage, engage_opts.common);
  engage->add_option("--input", engage_opts.input,
                     "corpus file with like counts")->required();
  engage->add_option("--format", engage_opts.format, "jsonl or csv");
  engage->add_option("--scores", engage_opts.scores_path,
                     "merged scores.csv from the score command")->required();
  engage->add_option("--lexicon", engage_opts.lexicon_path,
                     "topic lexicon JSON")->required();
  engage->add_option("--lambda", engage_opts.lambda, "ridge penalty");
  engage->add_option("--folds", engage_opts.folds, "cross-validation folds");
  engage->add_option("--threshold", engage_opts.threshold,
                     "p-value selection threshold");

  ReportOpts report_opts;
  auto* report = app.add_subcommand(
      "report", "render a markdown report from computed artifacts");
  add_common(report, report_opts.common);
  report->add_option("--artifacts", report_opts.artifacts_dir,
                     "artifact directory (defaults to --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (score->parsed()) {
      if (score_sample > 0) score_opts.sample = score_sample;
      cmd_score(score_opts);
    } else if (band->parsed()) {
      cmd_band(band_opts);
    } else if (specifiers->parsed()) {
      if (spec_sample > 0) spec_opts.sample = spec_sample;
      cmd_specifiers(spec_opts);
    } else if (diversity->parsed()) {
      cmd_diversity(div_opts);
    } else if (engage->parsed()) {
      cmd_engage(engage_opts);
    } else if (report->parsed()) {
      cmd_report(report_opts);
    }
    return 0;
  } catch (const promor::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == promor::ErrorKind::BadInput ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
