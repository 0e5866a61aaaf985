// Apache License, Version 2.0, refer to LICENSE.txt

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "tg/corpus.hh"
#include "tg/error.hh"
#include "tg/porter.hh"

namespace tg {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  return in;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Splits one CSV record; handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

}  // namespace

Corpus ingest_bow(const std::filesystem::path& path,
                  const std::optional<std::filesystem::path>& vocab_path) {
  auto in = open_input(path);
  std::string line;
  std::int64_t header[3];
  const char* names[3] = {"D", "W", "NNZ"};
  for (int k = 0; k < 3; ++k) {
    if (!std::getline(in, line) || !parse_int(line, header[k]) || header[k] < 0) {
      throw parse_error(path.string() + ": malformed header line " + std::to_string(k + 1) +
                        " (expected " + names[k] + ")");
    }
  }
  const std::int64_t n_docs = header[0], n_words = header[1], nnz = header[2];

  Vocabulary vocab;
  if (vocab_path) {
    auto vin = open_input(*vocab_path);
    std::string word;
    while (static_cast<std::int64_t>(vocab.size()) < n_words && std::getline(vin, word)) {
      word = trim(word);
      if (word.empty()) throw parse_error(vocab_path->string() + ": empty vocabulary line");
      if (vocab.find(word)) throw parse_error(vocab_path->string() + ": duplicate word " + word);
      vocab.add(word);
    }
    if (static_cast<std::int64_t>(vocab.size()) != n_words) {
      throw parse_error(vocab_path->string() + ": fewer than W vocabulary lines");
    }
  } else {
    for (std::int64_t w = 1; w <= n_words; ++w) vocab.add(std::to_string(w));
  }

  std::vector<std::vector<WordCount>> counts(static_cast<std::size_t>(n_docs));
  std::int64_t seen = 0;
  std::int64_t line_no = 3;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    std::int64_t d, w, c;
    std::string rest;
    if (!(fields >> d >> w >> c) || (fields >> rest)) {
      throw parse_error(path.string() + ":" + std::to_string(line_no) + ": expected 'docId wordId count'");
    }
    if (c <= 0) throw parse_error(path.string() + ":" + std::to_string(line_no) + ": count must be positive");
    if (d < 1 || d > n_docs) throw range_error(path.string() + ":" + std::to_string(line_no) + ": docId out of range");
    if (w < 1 || w > n_words) throw range_error(path.string() + ":" + std::to_string(line_no) + ": wordId out of range");
    counts[static_cast<std::size_t>(d - 1)].push_back(
        {static_cast<WordId>(w - 1), static_cast<std::int32_t>(c)});
    ++seen;
  }
  if (seen != nnz) {
    throw parse_error(path.string() + ": NNZ is " + std::to_string(nnz) + " but " +
                      std::to_string(seen) + " triplets were read");
  }
  std::vector<Document> docs;
  docs.reserve(counts.size());
  for (std::size_t d = 0; d < counts.size(); ++d) {
    docs.push_back(Document::from_counts(static_cast<std::int64_t>(d + 1), std::move(counts[d])));
  }
  return Corpus(vocab, std::move(docs));
}

Corpus ingest_transactions(const std::filesystem::path& path, std::int64_t quantity_cap) {
  if (quantity_cap < 1) throw range_error("transactions: quantity cap must be >= 1");
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw parse_error(path.string() + ": missing header row");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_csv(line);
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw parse_error(path.string() + ": missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_order = column("order_id"), c_item = column("item_id"),
                    c_qty = column("quantity");
  const std::size_t needed = std::max({c_order, c_item, c_qty}) + 1;

  Vocabulary vocab;
  std::map<std::string, std::size_t> order_index;
  std::vector<std::string> order_names;
  std::vector<std::vector<WordCount>> counts;
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() < needed) {
      throw parse_error(path.string() + ":" + std::to_string(line_no) + ": missing field");
    }
    std::int64_t qty;
    if (!parse_int(fields[c_qty], qty)) {
      throw parse_error(path.string() + ":" + std::to_string(line_no) + ": bad quantity");
    }
    if (qty <= 0) {
      throw parse_error(path.string() + ":" + std::to_string(line_no) + ": non-positive quantity");
    }
    const std::string& order = fields[c_order];
    auto [it, inserted] = order_index.emplace(order, counts.size());
    if (inserted) {
      counts.emplace_back();
      order_names.push_back(order);
    }
    if (qty > quantity_cap) continue;
    if (fields[c_item].empty()) {
      throw parse_error(path.string() + ":" + std::to_string(line_no) + ": empty item_id");
    }
    const WordId item = vocab.add(fields[c_item]);
    counts[it->second].push_back({item, static_cast<std::int32_t>(qty)});
  }
  std::vector<Document> docs;
  for (std::size_t d = 0; d < counts.size(); ++d) {
    docs.push_back(Document::from_counts(static_cast<std::int64_t>(d), std::move(counts[d])));
  }
  // Orders whose items were all dropped are removed by the Corpus constructor.
  return Corpus(vocab, std::move(docs), std::move(order_names));
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& opts,
                                  const std::vector<std::string>& stopwords) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) break;
    std::string_view raw = text.substr(i, j - i);
    i = j;
    // Surrounding punctuation is not part of the token ("cat." -> "cat").
    while (!raw.empty() && std::ispunct(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
    while (!raw.empty() && std::ispunct(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
    if (raw.empty()) continue;
    std::string token(raw);
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (opts.alphabetic_only &&
        !std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isalpha(c); })) {
      continue;
    }
    if (token.size() < opts.min_token_length) continue;
    if (std::binary_search(stopwords.begin(), stopwords.end(), token)) continue;
    if (opts.porter_stemming) token = porter_stem(token);
    out.push_back(std::move(token));
  }
  return out;
}

Corpus ingest_text(const std::filesystem::path& path, const TokenizerOptions& opts) {
  std::vector<std::string> stopwords;
  if (opts.stopword_file) {
    auto sin = open_input(*opts.stopword_file);
    std::string w;
    while (std::getline(sin, w)) {
      w = trim(w);
      std::transform(w.begin(), w.end(), w.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (!w.empty()) stopwords.push_back(w);
    }
    std::sort(stopwords.begin(), stopwords.end());
    stopwords.erase(std::unique(stopwords.begin(), stopwords.end()), stopwords.end());
  }

  std::vector<std::string> texts, names;
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto fin = open_input(f);
      std::stringstream ss;
      ss << fin.rdbuf();
      texts.push_back(ss.str());
      names.push_back(f.filename().string());
    }
  } else {
    auto fin = open_input(path);
    std::string line;
    while (std::getline(fin, line)) {
      texts.push_back(line);
      names.push_back(std::to_string(texts.size()));
    }
  }

  Vocabulary vocab;
  std::vector<Document> docs;
  for (std::size_t d = 0; d < texts.size(); ++d) {
    std::vector<WordCount> counts;
    for (const auto& tok : tokenize(texts[d], opts, stopwords)) counts.push_back({vocab.add(tok), 1});
    docs.push_back(Document::from_counts(static_cast<std::int64_t>(d), std::move(counts)));
  }
  Corpus corpus = Corpus(vocab, std::move(docs), std::move(names)).filtered(opts.min_corpus_freq);
  if (corpus.doc_count() == 0 || corpus.vocab_size() == 0) {
    throw Error("empty", path.string() + ": no tokens left after preprocessing");
  }
  return corpus;
}

}  // namespace tg
