// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/corpus_io.hh"

#include <cstring>
#include <fstream>

#include "tg/error.hh"

namespace tg {

namespace {

constexpr char kMagic[8] = {'T', 'G', 'C', 'O', 'R', 'P', 'U', 'S'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ofstream& out) : out_(out) {}
  void u32(std::uint32_t v) { raw(v); }
  void i32(std::int32_t v) { raw(v); }
  void i64(std::int64_t v) { raw(v); }
  void u8(std::uint8_t v) { raw(v); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  // Little-endian regardless of host order.
  template <typename T>
  void raw(T v) {
    unsigned char buf[sizeof(T)];
    auto u = static_cast<std::make_unsigned_t<T>>(v);
    for (std::size_t k = 0; k < sizeof(T); ++k) buf[k] = static_cast<unsigned char>(u >> (8 * k));
    out_.write(reinterpret_cast<const char*>(buf), sizeof(T));
  }
  std::ofstream& out_;
};

class Reader {
 public:
  Reader(std::ifstream& in, std::string name) : in_(in), name_(std::move(name)) {}
  std::uint32_t u32() { return raw<std::uint32_t>(); }
  std::int32_t i32() { return raw<std::int32_t>(); }
  std::int64_t i64() { return raw<std::int64_t>(); }
  std::uint8_t u8() { return raw<std::uint8_t>(); }
  std::string str() {
    const auto n = u32();
    std::string s(n, '\0');
    in_.read(s.data(), n);
    check();
    return s;
  }

 private:
  template <typename T>
  T raw() {
    unsigned char buf[sizeof(T)];
    in_.read(reinterpret_cast<char*>(buf), sizeof(T));
    check();
    std::make_unsigned_t<T> u = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) u |= static_cast<std::make_unsigned_t<T>>(buf[k]) << (8 * k);
    return static_cast<T>(u);
  }
  void check() {
    if (!in_) throw parse_error(name_ + ": truncated corpus file");
  }
  std::ifstream& in_;
  std::string name_;
};

}  // namespace

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  Writer w(out);
  w.u32(kVersion);
  // A corpus sharing a training vocabulary may contain zero-frequency words.
  bool shared = false;
  for (auto f : corpus.frequencies()) shared = shared || f == 0;
  w.u8(shared ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(corpus.vocab_size()));
  for (const auto& word : corpus.vocabulary().words()) w.str(word);
  w.u32(static_cast<std::uint32_t>(corpus.doc_count()));
  const bool named = !corpus.doc_names().empty();
  w.u8(named ? 1 : 0);
  for (std::size_t d = 0; d < corpus.doc_count(); ++d) {
    const auto& doc = corpus.documents()[d];
    w.i64(doc.id);
    if (named) w.str(corpus.doc_names()[d]);
    w.u32(static_cast<std::uint32_t>(doc.counts.size()));
    for (const auto& wc : doc.counts) {
      w.i32(wc.word);
      w.i32(wc.count);
    }
  }
  if (!out) throw io_error("failed writing " + path.string());
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw parse_error(path.string() + ": not a corpus file");
  }
  Reader r(in, path.string());
  const auto version = r.u32();
  if (version != kVersion) {
    throw parse_error(path.string() + ": unsupported corpus version " + std::to_string(version));
  }
  const bool shared = r.u8() != 0;
  Vocabulary vocab;
  const auto n_words = r.u32();
  for (std::uint32_t k = 0; k < n_words; ++k) vocab.add(r.str());
  const auto n_docs = r.u32();
  const bool named = r.u8() != 0;
  std::vector<Document> docs;
  std::vector<std::string> names;
  docs.reserve(n_docs);
  for (std::uint32_t d = 0; d < n_docs; ++d) {
    const auto id = r.i64();
    if (named) names.push_back(r.str());
    const auto nnz = r.u32();
    std::vector<WordCount> counts(nnz);
    for (auto& wc : counts) {
      wc.word = r.i32();
      wc.count = r.i32();
    }
    docs.push_back(Document::from_counts(id, std::move(counts)));
  }
  if (shared) return Corpus::over_vocabulary(vocab, std::move(docs), std::move(names));
  return Corpus(vocab, std::move(docs), std::move(names));
}

}  // namespace tg
