#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "tfsel/corpus.hpp"
#include "tfsel/porter_stemmer.hpp"

namespace fs = std::filesystem;
using tfsel::Corpus;
using tfsel::Split;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("tfsel_corpus_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << content;
}

Corpus parse(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return tfsel::read_jsonl(in);
}

}  // namespace

TEST(IngestJsonl, TwoValidLines) {
  const auto c = parse(R"({"id":"d1","label":"b","text":"x y","split":"train"}
{"id":"d2","label":"a","text":"z","split":"test"}
)");
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.categories, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(c.documents[0].text, "x y");
  EXPECT_TRUE(c.documents[0].tokens.empty());  // not preprocessed yet
  EXPECT_EQ(c.documents[1].split, Split::Test);
}

TEST(IngestJsonl, DuplicateIdIsValidationError) {
  EXPECT_THROW(parse(R"({"id":"d1","label":"a","text":"","split":"train"}
{"id":"d1","label":"b","text":"","split":"test"})"),
               tfsel::ValidationError);
}

TEST(IngestJsonl, EmptyFile) {
  const auto c = parse("");
  EXPECT_TRUE(c.documents.empty());
  EXPECT_TRUE(c.categories.empty());
}

TEST(IngestJsonl, MalformedLineNamesLineNumber) {
  try {
    parse("{\"id\":\"d1\",\"label\":\"a\",\"text\":\"\",\"split\":\"train\"}\n{not json\n");
    FAIL() << "expected ParseError";
  } catch (const tfsel::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse(R"({"id":"d1","label":"a","text":""})"), tfsel::ParseError);
  EXPECT_THROW(parse(R"({"id":"d1","label":"a","text":"","split":"dev"})"), tfsel::ParseError);
  EXPECT_THROW(parse(R"(["id"])"), tfsel::ParseError);
}

TEST(IngestJsonl, MissingFileIsIoError) {
  EXPECT_THROW(tfsel::ingest_jsonl("/nonexistent/corpus.jsonl"), tfsel::IoError);
}

TEST(IngestJsonl, WriteThenReadPreservesDocuments) {
  const auto c = parse(R"({"id":"d1","label":"a","text":"line\nwith \"quotes\"","split":"train"}
{"id":"d2","label":"b","text":"plain","split":"test"})");
  std::ostringstream out;
  tfsel::write_jsonl(out, c);
  const auto back = parse(out.str());
  ASSERT_EQ(back.documents.size(), 2u);
  EXPECT_EQ(back.documents[0].text, c.documents[0].text);
  EXPECT_EQ(back.documents[1].split, Split::Test);
  EXPECT_EQ(back.categories, c.categories);
}

TEST(IngestReuters, SingleCategorySingleDoc) {
  TempDir dir;
  write_file(dir.path() / "training" / "acq" / "101", "company buys stake");
  const auto c = tfsel::ingest_reuters_modapte(dir.path());
  ASSERT_EQ(c.documents.size(), 1u);
  EXPECT_EQ(c.documents[0].id, "101");
  EXPECT_EQ(c.documents[0].label, "acq");
  EXPECT_EQ(c.documents[0].split, Split::Train);
}

TEST(IngestReuters, EmptyCategoryOmittedAndMultiLabelDropped) {
  TempDir dir;
  write_file(dir.path() / "training" / "acq" / "1", "a");
  write_file(dir.path() / "training" / "earn" / "2", "b");
  write_file(dir.path() / "training" / "earn" / "3", "shared");
  write_file(dir.path() / "training" / "acq" / "3", "shared");  // two labels
  write_file(dir.path() / "test" / "earn" / "9", "c");
  fs::create_directories(dir.path() / "training" / "empty");
  const auto c = tfsel::ingest_reuters_modapte(dir.path());
  EXPECT_EQ(c.categories, (std::vector<std::string>{"acq", "earn"}));
  ASSERT_EQ(c.documents.size(), 3u);
  for (const auto& d : c.documents) EXPECT_NE(d.id, "3");
  EXPECT_EQ(c.count(Split::Test), 1u);
}

TEST(IngestReuters, CategoryFirstLayout) {
  TempDir dir;
  write_file(dir.path() / "acq" / "train" / "1", "a");
  write_file(dir.path() / "acq" / "test" / "2", "b");
  write_file(dir.path() / "earn" / "training" / "3", "c");
  const auto c = tfsel::ingest_reuters_modapte(dir.path());
  EXPECT_EQ(c.documents.size(), 3u);
  EXPECT_EQ(c.count(Split::Train), 2u);
  EXPECT_EQ(c.categories, (std::vector<std::string>{"acq", "earn"}));
}

TEST(IngestReuters, Errors) {
  EXPECT_THROW(tfsel::ingest_reuters_modapte("/nonexistent/reuters"), tfsel::IoError);
  TempDir dir;
  fs::create_directories(dir.path() / "training" / "acq");
  EXPECT_THROW(tfsel::ingest_reuters_modapte(dir.path()), tfsel::ValidationError);
}

TEST(Newsgroups, KeepsSubjectKeywordsAndBody) {
  const std::string raw =
      "From: someone@example.com\nSubject: Re: orbit insertion\nOrganization: NASA\n"
      "Keywords: space, shuttle\nLines: 2\n\nThe body text.\nSecond line: with colon\n";
  const auto text = tfsel::extract_newsgroup_text(raw);
  EXPECT_NE(text.find("orbit insertion"), std::string::npos);
  EXPECT_NE(text.find("space, shuttle"), std::string::npos);
  EXPECT_NE(text.find("Second line: with colon"), std::string::npos);
  EXPECT_EQ(text.find("someone"), std::string::npos);
  EXPECT_EQ(text.find("NASA"), std::string::npos);
}

TEST(Newsgroups, ExactRatioPerCategoryAndDeterministic) {
  TempDir dir;
  for (std::string cat : {"sci.space", "rec.autos", "talk.politics"})
    for (int i = 0; i < 3; ++i) write_file(dir.path() / cat / std::to_string(100 + i), "Subject: s\n\nbody");

  for (std::uint64_t seed : {0u, 1u, 42u, 9999u}) {
    const auto c = tfsel::ingest_20newsgroups(dir.path(), {2, 1}, seed);
    ASSERT_EQ(c.documents.size(), 9u);
    for (const auto& cat : c.categories) {
      int train = 0, test = 0;
      for (const auto& d : c.documents)
        if (d.label == cat) (d.split == Split::Train ? train : test)++;
      EXPECT_EQ(train, 2) << cat;
      EXPECT_EQ(test, 1) << cat;
    }
    const auto again = tfsel::ingest_20newsgroups(dir.path(), {2, 1}, seed);
    for (std::size_t i = 0; i < c.documents.size(); ++i) {
      EXPECT_EQ(c.documents[i].id, again.documents[i].id);
      EXPECT_EQ(c.documents[i].split, again.documents[i].split);
    }
  }
  EXPECT_THROW(tfsel::ingest_20newsgroups(dir.path() / "missing", {2, 1}, 0), tfsel::IoError);
}

// Random directory trees: every ingested document satisfies the Document
// invariants, and preprocessing only ever emits clean tokens.
TEST(IngestProperty, RandomTreesYieldValidDocuments) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> words = {"Wheat", "the",  "OIL",  "prices", "rose", "123", "a1b", "stake",
                                          "of",    "grain", "!!",  "merger", "x",    "Acquired"};
  const auto smart = tfsel::smart_stopwords();
  for (int trial = 0; trial < 20; ++trial) {
    TempDir dir;
    std::uniform_int_distribution<int> n_cat(1, 4), n_doc(0, 5), n_word(0, 12), pick(0, static_cast<int>(words.size()) - 1);
    const int cats = n_cat(rng);
    int file_id = 0;
    for (int c = 0; c < cats; ++c) {
      for (const char* part : {"training", "test"}) {
        const int docs = n_doc(rng);
        fs::create_directories(dir.path() / part / ("cat" + std::to_string(c)));
        for (int d = 0; d < docs; ++d) {
          std::string text;
          for (int w = n_word(rng); w > 0; --w) text += words[static_cast<std::size_t>(pick(rng))] + " ";
          // Occasionally file the same document under a second category.
          const std::string id = std::to_string(rng() % 4 == 0 && file_id > 0 ? file_id - 1 : file_id++);
          write_file(dir.path() / part / ("cat" + std::to_string(c)) / id, text);
        }
      }
    }
    Corpus corpus;
    try {
      corpus = tfsel::ingest_reuters_modapte(dir.path());
    } catch (const tfsel::ValidationError&) {
      continue;  // no single-label documents in this tree
    }
    EXPECT_NO_THROW(tfsel::validate(corpus));
    corpus = tfsel::preprocess_corpus(std::move(corpus), tfsel::PreprocessConfig{});
    for (const auto& d : corpus.documents) {
      EXPECT_TRUE(std::binary_search(corpus.categories.begin(), corpus.categories.end(), d.label));
      for (const auto& tok : d.tokens) {
        EXPECT_GE(tok.size(), 2u);
        for (char ch : tok) EXPECT_TRUE(ch >= 'a' && ch <= 'z') << tok;
        EXPECT_FALSE(smart.contains(tok)) << tok;
      }
    }
  }
}
