#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "promor/csv.hpp"
#include "promor/error.hpp"
#include "promor/rng.hpp"
#include "promor/util.hpp"

namespace promor {

struct PromptRecord {
  std::string id;
  std::string text;
  std::optional<std::uint64_t> like_count;
  std::optional<bool> nsfw;
  std::optional<std::vector<double>> embedding;
  std::optional<std::vector<std::string>> topic_labels;

  bool operator==(const PromptRecord&) const = default;
};

// Records in file order; immutable after load and safe to share across
// threads. Everything that iterates a corpus does so in this order.
struct Corpus {
  std::vector<PromptRecord> records;
  std::string source_name;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

enum class CorpusFormat { Jsonl, Csv };

inline CorpusFormat corpus_format_from_string(std::string_view s) {
  if (s == "jsonl") return CorpusFormat::Jsonl;
  if (s == "csv") return CorpusFormat::Csv;
  fail_input("unknown corpus format: " + std::string(s));
}

namespace detail {

// JSONL and CSV share one schema:
//   id, prompt, like_count, nsfw, embedding, topics
// CSV serializes the embedding as semicolon-joined decimals and topics as
// |-joined names.
inline const std::vector<std::string>& corpus_columns() {
  static const std::vector<std::string> cols = {"id",   "prompt",    "like_count",
                                                "nsfw", "embedding", "topics"};
  return cols;
}

inline void check_record(PromptRecord& rec, std::size_t line,
                         std::unordered_set<std::string>& seen_ids,
                         std::optional<std::size_t>& embedding_dim,
                         const std::string& source) {
  if (rec.id.empty())
    fail_input(source + ": empty id at line " + std::to_string(line));
  if (!seen_ids.insert(rec.id).second)
    fail_input(source + ": duplicate id \"" + rec.id + "\" at line " +
               std::to_string(line));
  if (rec.embedding) {
    if (!embedding_dim) {
      embedding_dim = rec.embedding->size();
    } else if (*embedding_dim != rec.embedding->size()) {
      fail_input(source + ": embedding dimension mismatch at line " +
                 std::to_string(line) + " (expected " +
                 std::to_string(*embedding_dim) + ", got " +
                 std::to_string(rec.embedding->size()) + ")");
    }
  }
}

inline Corpus read_jsonl(const std::string& path) {
  Corpus corpus;
  corpus.source_name = path;
  std::string content = read_file(path);
  std::unordered_set<std::string> seen_ids;
  std::optional<std::size_t> embedding_dim;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    std::string_view raw(content.data() + pos, end - pos);
    pos = end + 1;
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (trim(raw).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
      fail_input(path + ": invalid JSON at line " + std::to_string(line) +
                 ": " + e.what());
    }
    if (!j.is_object())
      fail_input(path + ": line " + std::to_string(line) +
                 " is not a JSON object");
    PromptRecord rec;
    if (!j.contains("id") || !j["id"].is_string())
      fail_input(path + ": missing or non-string id at line " +
                 std::to_string(line));
    rec.id = j["id"].get<std::string>();
    if (!j.contains("prompt") || !j["prompt"].is_string())
      fail_input(path + ": missing or non-string prompt at line " +
                 std::to_string(line));
    rec.text = j["prompt"].get<std::string>();
    if (j.contains("like_count") && !j["like_count"].is_null()) {
      const auto& lc = j["like_count"];
      if (!lc.is_number_integer() || lc.is_number_float() ||
          (lc.is_number_integer() && !lc.is_number_unsigned() &&
           lc.get<long long>() < 0))
        fail_input(path + ": non-numeric like_count at line " +
                   std::to_string(line));
      rec.like_count = lc.get<std::uint64_t>();
    }
    if (j.contains("nsfw") && !j["nsfw"].is_null()) {
      if (!j["nsfw"].is_boolean())
        fail_input(path + ": non-boolean nsfw at line " +
                   std::to_string(line));
      rec.nsfw = j["nsfw"].get<bool>();
    }
    if (j.contains("embedding") && !j["embedding"].is_null()) {
      if (!j["embedding"].is_array())
        fail_input(path + ": embedding is not an array at line " +
                   std::to_string(line));
      std::vector<double> emb;
      emb.reserve(j["embedding"].size());
      for (const auto& v : j["embedding"]) {
        if (!v.is_number())
          fail_input(path + ": non-numeric embedding entry at line " +
                     std::to_string(line));
        emb.push_back(v.get<double>());
      }
      rec.embedding = std::move(emb);
    }
    if (j.contains("topics") && !j["topics"].is_null()) {
      if (!j["topics"].is_array())
        fail_input(path + ": topics is not an array at line " +
                   std::to_string(line));
      std::vector<std::string> topics;
      for (const auto& t : j["topics"]) {
        if (!t.is_string())
          fail_input(path + ": non-string topic at line " +
                     std::to_string(line));
        topics.push_back(t.get<std::string>());
      }
      rec.topic_labels = std::move(topics);
    }
    check_record(rec, line, seen_ids, embedding_dim, path);
    corpus.records.push_back(std::move(rec));
  }
  return corpus;
}

inline Corpus read_csv_corpus(const std::string& path) {
  Corpus corpus;
  corpus.source_name = path;
  std::string content = read_file(path);
  auto rows = parse_csv(content, path);
  if (rows.empty()) return corpus;

  const auto& header = rows[0].fields;
  std::vector<int> col_of(corpus_columns().size(), -1);
  for (std::size_t h = 0; h < header.size(); ++h) {
    bool known = false;
    for (std::size_t c = 0; c < corpus_columns().size(); ++c) {
      if (header[h] == corpus_columns()[c]) {
        col_of[c] = static_cast<int>(h);
        known = true;
        break;
      }
    }
    if (!known)
      fail_input(path + ": unknown CSV column \"" + header[h] + "\"");
  }
  if (col_of[0] < 0 || col_of[1] < 0)
    fail_input(path + ": CSV header must contain id and prompt columns");

  std::unordered_set<std::string> seen_ids;
  std::optional<std::size_t> embedding_dim;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](int c) -> std::string_view {
      if (c < 0 || static_cast<std::size_t>(c) >= row.fields.size()) return {};
      return row.fields[static_cast<std::size_t>(c)];
    };
    PromptRecord rec;
    rec.id = std::string(cell(col_of[0]));
    rec.text = std::string(cell(col_of[1]));
    if (auto lc = cell(col_of[2]); !lc.empty()) {
      auto v = parse_u64(lc);
      if (!v)
        fail_input(path + ": non-numeric like_count at line " +
                   std::to_string(row.line));
      rec.like_count = *v;
    }
    if (auto nf = cell(col_of[3]); !nf.empty()) {
      if (nf == "true") rec.nsfw = true;
      else if (nf == "false") rec.nsfw = false;
      else
        fail_input(path + ": nsfw must be true or false at line " +
                   std::to_string(row.line));
    }
    if (auto emb = cell(col_of[4]); !emb.empty()) {
      std::vector<double> values;
      for (const auto& part : split(emb, ';')) {
        auto v = parse_double(part);
        if (!v)
          fail_input(path + ": bad embedding value \"" + part + "\" at line " +
                     std::to_string(row.line));
        values.push_back(*v);
      }
      rec.embedding = std::move(values);
    }
    if (auto tp = cell(col_of[5]); !tp.empty()) {
      rec.topic_labels = split(tp, '|');
    }
    check_record(rec, row.line, seen_ids, embedding_dim, path);
    corpus.records.push_back(std::move(rec));
  }
  return corpus;
}

}  // namespace detail

inline Corpus read_corpus(const std::string& path, CorpusFormat format) {
  return format == CorpusFormat::Jsonl ? detail::read_jsonl(path)
                                       : detail::read_csv_corpus(path);
}

inline nlohmann::json record_to_json(const PromptRecord& rec) {
  nlohmann::json j;
  j["id"] = rec.id;
  j["prompt"] = rec.text;
  if (rec.like_count) j["like_count"] = *rec.like_count;
  if (rec.nsfw) j["nsfw"] = *rec.nsfw;
  if (rec.embedding) j["embedding"] = *rec.embedding;
  if (rec.topic_labels) j["topics"] = *rec.topic_labels;
  return j;
}

inline void write_corpus(const Corpus& corpus, const std::string& path,
                         CorpusFormat format) {
  std::string out;
  if (format == CorpusFormat::Jsonl) {
    for (const auto& rec : corpus.records) {
      out += record_to_json(rec).dump();
      out += '\n';
    }
  } else {
    write_csv_row(out, detail::corpus_columns());
    for (const auto& rec : corpus.records) {
      std::vector<std::string> fields(6);
      fields[0] = rec.id;
      fields[1] = rec.text;
      if (rec.like_count) fields[2] = std::to_string(*rec.like_count);
      if (rec.nsfw) fields[3] = *rec.nsfw ? "true" : "false";
      if (rec.embedding) {
        std::vector<std::string> parts;
        parts.reserve(rec.embedding->size());
        for (double v : *rec.embedding) parts.push_back(format_double(v));
        fields[4] = join(parts, ";");
      }
      if (rec.topic_labels) fields[5] = join(*rec.topic_labels, "|");
      write_csv_row(out, fields);
    }
  }
  write_file(path, out);
}

// Uniform sample of n records without replacement; deterministic for a fixed
// (corpus size, n, seed) and independent of record contents. Output keeps the
// original relative order.
inline Corpus sample_corpus(const Corpus& corpus, std::size_t n,
                            std::uint64_t seed) {
  if (n > corpus.size())
    fail_input("sample size " + std::to_string(n) + " exceeds corpus size " +
               std::to_string(corpus.size()));
  Rng rng(seed);
  auto picked = sample_indices(corpus.size(), n, rng);
  Corpus out;
  out.source_name = corpus.source_name;
  out.records.reserve(n);
  for (std::size_t i : picked) out.records.push_back(corpus.records[i]);
  return out;
}

}  // namespace promor
