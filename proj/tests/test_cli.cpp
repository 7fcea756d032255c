// Drives the promor binary end to end: exit codes, error wording, and the
// no-partial-output contract. Heavier pipeline checks live in acceptance.cpp.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "promor/util.hpp"

namespace {

const std::string kCli = PROMOR_CLI_PATH;

struct Workspace {
  std::filesystem::path dir;
  Workspace() {
    dir = std::filesystem::temp_directory_path() /
          ("promor_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    std::filesystem::create_directories(dir);
  }
  ~Workspace() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name, const std::string& content) {
    auto path = (dir / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
  }
  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
};

struct RunResult {
  int exit_code = -1;
  std::string stderr_text;
};

RunResult run(const Workspace& ws, const std::string& args) {
  auto err_path = ws.path("stderr.txt");
  std::string cmd = kCli + " " + args + " >/dev/null 2>" + err_path;
  int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::string line;
  while (std::getline(in, line)) result.stderr_text += line + "\n";
  return result;
}

const char* kLexicon = R"({"Pets": ["cat", "dog"], "Sky": ["sunset"]})";

std::string small_corpus() {
  std::string out;
  const char* prompts[] = {"a cat, fine art",      "dog at sunset, 8k",
                           "sunset over water",    "cat and dog together",
                           "lonely lighthouse",    "the"};
  for (int i = 0; i < 36; ++i) {
    int likes = (i * 7) % 23 + (i % 2 == 0 ? 20 : 0);
    // every sixth prompt stays stopword-only so flag handling is exercised
    std::string text = std::string(prompts[i % 6]) +
                       (i % 6 == 5 ? "" : " take " + std::to_string(i));
    out += "{\"id\":\"p" + std::to_string(i) + "\",\"prompt\":\"" + text +
           "\",\"like_count\":" + std::to_string(likes) +
           ",\"nsfw\":" + (i % 5 == 0 ? "true" : "false") +
           ",\"embedding\":[" + std::to_string(i) + ".0," +
           std::to_string(i % 3) + ".5]}\n";
  }
  return out;
}

}  // namespace

TEST_CASE("empty corpus exits 2 with a clear message") {
  Workspace ws;
  auto corpus = ws.file("empty.jsonl", "");
  auto lexicon = ws.file("lex.json", kLexicon);
  auto r = run(ws, "score --input " + corpus + " --lexicon " + lexicon +
                       " --out " + ws.path("out"));
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("empty corpus") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(ws.path("out/scores.csv")));
}

TEST_CASE("module errors leave no partial merged file") {
  Workspace ws;
  // Every prompt is stopwords-only: the lexical model cannot be built.
  auto corpus = ws.file("stop.jsonl",
                        "{\"id\":\"a\",\"prompt\":\"the and of\"}\n"
                        "{\"id\":\"b\",\"prompt\":\"a an\"}\n");
  auto lexicon = ws.file("lex.json", kLexicon);
  auto r = run(ws, "score --input " + corpus + " --lexicon " + lexicon +
                       " --out " + ws.path("out"));
  CHECK(r.exit_code == 2);
  CHECK_FALSE(std::filesystem::exists(ws.path("out/scores.csv")));
  CHECK_FALSE(std::filesystem::exists(ws.path("out/scores_lexical.csv")));
}

TEST_CASE("score then band then engage runs clean on a small corpus") {
  Workspace ws;
  auto corpus = ws.file("c.jsonl", small_corpus());
  auto lexicon = ws.file("lex.json", kLexicon);
  std::string out = ws.path("out");
  auto r1 = run(ws, "score --input " + corpus + " --lexicon " + lexicon +
                        " --out " + out + " --seed 7");
  REQUIRE(r1.exit_code == 0);
  CHECK(std::filesystem::exists(out + "/scores.csv"));
  CHECK(std::filesystem::exists(out + "/manifest_score.json"));

  auto r2 = run(ws, "band --scores " + out + "/scores.csv --metric lexical "
                        "--out " + out + " --seed 7");
  REQUIRE(r2.exit_code == 0);
  CHECK(std::filesystem::exists(out + "/bands_lexical.csv"));
  CHECK(std::filesystem::exists(out + "/band_histogram_lexical.json"));

  auto r3 = run(ws, "engage --input " + corpus + " --scores " + out +
                        "/scores.csv --lexicon " + lexicon + " --out " + out +
                        " --seed 7 --folds 2");
  REQUIRE(r3.exit_code == 0);
  CHECK(std::filesystem::exists(out + "/engage_coefficients.csv"));
  CHECK(std::filesystem::exists(out + "/engage_metrics.json"));
}

TEST_CASE("rerun with the same seed is byte-identical") {
  Workspace ws;
  auto corpus = ws.file("c.jsonl", small_corpus());
  auto lexicon = ws.file("lex.json", kLexicon);
  std::string out = ws.path("out");
  REQUIRE(run(ws, "score --input " + corpus + " --lexicon " + lexicon +
                      " --out " + out + " --seed 11").exit_code == 0);
  auto first = promor::read_file(out + "/scores.csv");
  auto manifest_first = promor::read_file(out + "/manifest_score.json");
  REQUIRE(run(ws, "score --input " + corpus + " --lexicon " + lexicon +
                      " --out " + out + " --seed 11 --threads 3").exit_code ==
          0);
  CHECK(promor::read_file(out + "/scores.csv") == first);
  CHECK(promor::read_file(out + "/manifest_score.json") == manifest_first);
}

TEST_CASE("band without scores names the missing file") {
  Workspace ws;
  auto r = run(ws, "band --scores " + ws.path("missing.csv") + " --out " +
                       ws.path("out"));
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("missing.csv") != std::string::npos);
}

TEST_CASE("include-flagged folds short prompts into banding at zero") {
  Workspace ws;
  auto corpus = ws.file("c.jsonl", small_corpus());
  auto lexicon = ws.file("lex.json", kLexicon);
  std::string out = ws.path("out");
  REQUIRE(run(ws, "score --input " + corpus + " --lexicon " + lexicon +
                      " --out " + out + " --seed 3").exit_code == 0);
  // "the" preprocesses to nothing: flagged for every metric, excluded by
  // default but present at 0 with --include-flagged.
  REQUIRE(run(ws, "band --scores " + out + "/scores.csv --metric sequence "
                      "--out " + out + " --seed 3 --include-flagged")
              .exit_code == 0);
  auto bands = promor::read_file(out + "/bands_sequence.csv");
  CHECK(bands.find("p5") != std::string::npos);

  REQUIRE(run(ws, "band --scores " + out + "/scores.csv --metric sequence "
                      "--out " + out + " --seed 3").exit_code == 0);
  auto excluded = promor::read_file(out + "/bands_sequence.csv");
  CHECK(excluded.find("p5") == std::string::npos);
}

TEST_CASE("diversity without embeddings names the missing field") {
  Workspace ws;
  std::string corpus_text;
  for (int i = 0; i < 4; ++i)
    corpus_text += "{\"id\":\"p" + std::to_string(i) +
                   "\",\"prompt\":\"words here\"}\n";
  auto corpus = ws.file("noemb.jsonl", corpus_text);
  auto bands = ws.file("bands.csv",
                       "id,metric,band,centroid\n"
                       "p0,lexical,High,1\n"
                       "p1,lexical,High,1\n"
                       "p2,lexical,Low,0\n"
                       "p3,lexical,Low,0\n");
  auto r = run(ws, "diversity --input " + corpus + " --bands " + bands +
                       " --out " + ws.path("out"));
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("embedding") != std::string::npos);
}

TEST_CASE("report renders not-computed sections for missing artifacts") {
  Workspace ws;
  std::string out = ws.path("out");
  std::filesystem::create_directories(out);
  auto r = run(ws, "report --artifacts " + out + " --out " + out);
  REQUIRE(r.exit_code == 0);
  auto report = promor::read_file(out + "/report.md");
  CHECK(report.find("Not computed.") != std::string::npos);
}

TEST_CASE("scoring against a reference corpus") {
  Workspace ws;
  auto corpus = ws.file("a.jsonl", small_corpus());
  auto reference = ws.file(
      "b.jsonl",
      "{\"id\":\"r0\",\"prompt\":\"cat naps, dog runs\"}\n"
      "{\"id\":\"r1\",\"prompt\":\"sunset colors, cat naps\"}\n"
      "{\"id\":\"r2\",\"prompt\":\"plain text\"}\n");
  auto lexicon = ws.file("lex.json", kLexicon);
  std::string out = ws.path("out");
  auto r = run(ws, "score --input " + corpus + " --lexicon " + lexicon +
                       " --model-corpus " + reference + " --out " + out +
                       " --seed 5 --threads 4");
  REQUIRE(r.exit_code == 0);
  CHECK(std::filesystem::exists(out + "/scores.csv"));

  // A topic the reference corpus never exhibits must fail cleanly, not
  // crash, even with multithreaded scoring.
  auto bare = ws.file("bare.jsonl",
                      "{\"id\":\"r0\",\"prompt\":\"nothing topical\"}\n"
                      "{\"id\":\"r1\",\"prompt\":\"still nothing\"}\n");
  auto r2 = run(ws, "score --input " + corpus + " --lexicon " + lexicon +
                        " --model-corpus " + bare + " --out " +
                        ws.path("out2") + " --seed 5 --threads 4");
  CHECK(r2.exit_code == 2);
  CHECK(r2.stderr_text.find("topic") != std::string::npos);
}

TEST_CASE("unknown flags and missing subcommand exit 2") {
  Workspace ws;
  CHECK(run(ws, "score --nope").exit_code == 2);
  CHECK(run(ws, "").exit_code == 2);
  CHECK(run(ws, "--help").exit_code == 0);
}
