// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tg {

using WordId = std::int32_t;
// Position of a document inside a Corpus (0..|D|-1). Not the same as
// Document::id, which survives splits and re-filtering.
using DocIndex = std::int32_t;

// Bijection between surface strings and dense word ids 0..|V|-1, ids assigned
// in first-encounter order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  WordId add(std::string_view word);
  std::optional<WordId> find(std::string_view word) const;

  const std::string& word(WordId id) const { return words_[static_cast<std::size_t>(id)]; }
  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

struct WordCount {
  WordId word;
  std::int32_t count;
  bool operator==(const WordCount&) const = default;
};

struct Document {
  std::int64_t id = 0;
  // Sorted by word id, every count >= 1.
  std::vector<WordCount> counts;
  std::int64_t length = 0;

  static Document from_counts(std::int64_t id, std::vector<WordCount> counts);
};

struct Posting {
  DocIndex doc;
  std::int32_t count;
  bool operator==(const Posting&) const = default;
};

// Immutable sparse document-word count store. Every word in the vocabulary
// occurs at least once and every document is non-empty; construction drops
// zero-frequency words (compacting ids, preserving their relative order) and
// empty documents.
class Corpus {
 public:
  // Documents may reference only ids < vocabulary.size(). Counts for the same
  // word within a document are summed.
  Corpus(const Vocabulary& vocabulary, std::vector<Document> documents,
         std::vector<std::string> doc_names = {});

  // Keeps `vocabulary` as is, even words that never occur. Used for held-out
  // corpora that must share word ids with a training corpus; f(w) may be 0.
  static Corpus over_vocabulary(const Vocabulary& vocabulary, std::vector<Document> documents,
                                std::vector<std::string> doc_names = {});

  const Vocabulary& vocabulary() const { return vocab_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::size_t doc_count() const { return docs_.size(); }

  const std::vector<Document>& documents() const { return docs_; }
  const Document& document(DocIndex d) const { return docs_[static_cast<std::size_t>(d)]; }

  // Optional per-document names (file names, order ids); empty if unknown.
  const std::vector<std::string>& doc_names() const { return doc_names_; }

  std::int64_t frequency(WordId w) const { return freq_[static_cast<std::size_t>(w)]; }
  const std::vector<std::int64_t>& frequencies() const { return freq_; }
  std::int64_t token_count() const { return tokens_; }
  double log_length(DocIndex d) const { return log_len_[static_cast<std::size_t>(d)]; }

  std::span<const Posting> postings(WordId w) const {
    return inverted_[static_cast<std::size_t>(w)];
  }

  // Documents re-expressed over `vocab`: words unknown to it are dropped, and
  // documents left empty are removed.
  std::vector<Document> documents_over(const Vocabulary& vocab) const;

  // Copy with words of frequency < min_freq removed.
  Corpus filtered(std::int64_t min_freq) const;

 private:
  Corpus() = default;
  void build(const Vocabulary& vocabulary, std::vector<Document> documents,
             std::vector<std::string> doc_names, bool compact);

  Vocabulary vocab_;
  std::vector<Document> docs_;
  std::vector<std::string> doc_names_;
  std::vector<std::int64_t> freq_;
  std::vector<std::vector<Posting>> inverted_;
  std::vector<double> log_len_;
  std::int64_t tokens_ = 0;
};

// UCI bag-of-words: "D\nW\nNNZ\n" then NNZ lines "docId wordId count", all
// 1-indexed. `vocab_path`, if given, holds one word per line (line k = word k);
// otherwise words are named by their 1-based id.
Corpus ingest_bow(const std::filesystem::path& path,
                  const std::optional<std::filesystem::path>& vocab_path = std::nullopt);

// CSV with header containing order_id,item_id,quantity. One document per
// order; rows with quantity above `quantity_cap` are dropped.
Corpus ingest_transactions(const std::filesystem::path& path, std::int64_t quantity_cap);

struct TokenizerOptions {
  std::size_t min_token_length = 3;
  bool alphabetic_only = true;
  bool porter_stemming = false;
  std::optional<std::filesystem::path> stopword_file;
  std::int64_t min_corpus_freq = 5;
};

// Lowercased, filtered tokens of one line of text, before any corpus-level
// frequency filtering. `stopwords` must be sorted and lowercase.
std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& opts,
                                  const std::vector<std::string>& stopwords = {});

// A directory of .txt files (one document each, in file-name order) or a
// single file with one document per line.
Corpus ingest_text(const std::filesystem::path& path, const TokenizerOptions& opts = {});

struct SplitResult {
  Corpus train;
  Corpus test;
};

// Seeded partition into train/test. round(test_ratio * |D|) documents go to
// test. The train vocabulary is then restricted to words with train frequency
// >= min_train_freq, and test documents are re-expressed over it.
SplitResult split(const Corpus& corpus, double test_ratio, std::uint64_t seed,
                  std::int64_t min_train_freq = 1);

}  // namespace tg
