// Apache License, Version 2.0, refer to LICENSE.txt

#include <regex>
#include <thread>

#include "doctest.h"
#include "fixtures.hh"
#include "httplib.h"
#include "tg/explore.hh"
#include "tg/server.hh"
#include "tg/train.hh"

using namespace tg;

namespace {

Explorer three_word_explorer() { return Explorer(train_ehac(testing::three_word_corpus())); }

struct XmlShape {
  bool well_formed = true;
  int open_close = 0;    // <node ...>...</node>
  int self_closing = 0;  // <node .../>
  int folded = 0;
};

// Minimal tag matcher: every <node> must close in order and the document must
// be a single <map> element.
XmlShape xml_shape(const std::string& xml) {
  XmlShape s;
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([A-Za-z]+)([^<>]*?)(/?)>)");
  std::size_t last = 0;
  bool seen_root = false;
  for (auto it = std::sregex_iterator(xml.begin(), xml.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    const std::string between = xml.substr(last, static_cast<std::size_t>(m.position()) - last);
    if (between.find_first_not_of(" \n") != std::string::npos) s.well_formed = false;
    last = static_cast<std::size_t>(m.position() + m.length());
    const std::string name = m[2];
    const std::string attrs = m[3];
    if (attrs.find('<') != std::string::npos || attrs.find('&') != std::string::npos) {
      if (!std::regex_search(attrs, std::regex("&(amp|lt|gt|quot|apos);"))) s.well_formed = false;
    }
    if (attrs.find("FOLDED=\"true\"") != std::string::npos) ++s.folded;
    if (m[1] == "/") {
      if (stack.empty() || stack.back() != name) s.well_formed = false;
      if (!stack.empty()) stack.pop_back();
    } else if (m[4] == "/") {
      if (name == "node") ++s.self_closing;
    } else {
      if (stack.empty()) {
        if (seen_root || name != "map") s.well_formed = false;
        seen_root = true;
      }
      if (name == "node") ++s.open_close;
      stack.push_back(name);
    }
  }
  if (!stack.empty() || !seen_root) s.well_formed = false;
  return s;
}

}  // namespace

TEST_CASE("node table of the three-word corpus") {
  const Explorer ex = three_word_explorer();
  const auto& d = ex.dendrogram();
  REQUIRE(d.root() == 4);
  const auto& root = ex.node(4);
  CHECK(root.parent == -1);
  CHECK(root.created_at_n == 1);
  CHECK(root.depth == 0);
  CHECK(root.f == 5);
  const auto& bc = ex.node(3);
  CHECK(bc.parent == 4);
  CHECK(bc.created_at_n == 2);
  CHECK(bc.depth == 1);
  CHECK(std::set<TopicId>{bc.left, bc.right} == std::set<TopicId>{1, 2});
  CHECK(std::isnan(ex.node(0).delta_h));
  CHECK(ex.node(2).depth == 2);
  CHECK(ex.node(0).created_at_n == 3);
  CHECK(ex.path_to(2) == std::vector<TopicId>{4, 3, 2});
  CHECK(ex.path_to(4) == std::vector<TopicId>{4});
  // a (f=2) and b (f=2) tie, broken by word id.
  CHECK(ex.top_words(4, 10) == std::vector<WordId>{0, 1, 2});
  CHECK(ex.top_words(4, 2) == std::vector<WordId>{0, 1});
  CHECK_FALSE(ex.has_node(5));
  CHECK_FALSE(ex.has_node(-1));
}

TEST_CASE("JSON documents") {
  const Explorer ex = three_word_explorer();
  const auto meta = ex.meta_json();
  CHECK(meta["n_leaves"] == 3);
  CHECK(meta["vocab_size"] == 3);
  CHECK(meta["doc_count"] == 2);
  CHECK(meta["root"] == 4);

  const auto flat = ex.flat_json(2, 10);
  REQUIRE(flat["topics"].size() == 2);
  CHECK(flat["topics"][0]["words"] == nlohmann::json{"b", "c"});
  CHECK(flat["topics"][0]["f"] == 3);
  CHECK(flat["topics"][1]["words"] == nlohmann::json{"a"});
  CHECK(ex.flat_json(1, 2)["topics"][0]["words"].size() == 2);

  const auto leaf = ex.node_json(0, 5);
  CHECK(leaf["delta_h"].is_null());
  CHECK(leaf["children"].empty());
  CHECK(leaf["parent"] == 4);
  const auto root = ex.node_json(4, 5);
  CHECK(root["parent"].is_null());
  CHECK(root["children"].size() == 2);
  CHECK(root["delta_h"].get<double>() <= 0.0);
  CHECK(ex.path_json(1)["path"] == nlohmann::json{4, 3, 1});
}

TEST_CASE("topics table") {
  const Explorer ex = three_word_explorer();
  const std::string t1 = topics_table(ex, 1, 7);
  CHECK(t1.find("a b c") != std::string::npos);
  CHECK(std::count(t1.begin(), t1.end(), '\n') == 3);
  const std::string t2 = topics_table(ex, 2, 7);
  CHECK(t2.find("1\t3\t3\tb c\n") != std::string::npos);
  CHECK(t2.find("2\t0\t2\ta\n") != std::string::npos);
}

TEST_CASE("FreeMind export of the three-word corpus") {
  const Explorer ex = three_word_explorer();
  const auto shape = xml_shape(export_freemind(ex, 6));
  CHECK(shape.well_formed);
  CHECK(shape.open_close == 2);
  CHECK(shape.self_closing == 3);
  CHECK(shape.folded == 0);
  // Folding hides nothing: the whole tree stays in the file.
  const auto folded = xml_shape(export_freemind(ex, 1));
  CHECK(folded.well_formed);
  CHECK(folded.open_close + folded.self_closing == 5);
  CHECK(folded.folded == 1);
}

TEST_CASE("FreeMind export escapes markup and stays well formed on larger trees") {
  const Corpus c = testing::make_corpus({{{"<b>", 2}, {"x&y", 1}, {"q\"", 1}}, {{"x&y", 3}, {"z", 1}}});
  const Explorer ex(train_mehac(c));
  const std::string xml = export_freemind(ex, 6);
  CHECK(xml.find("&lt;b&gt;") != std::string::npos);
  CHECK(xml.find("x&amp;y") != std::string::npos);
  CHECK(xml_shape(xml).well_formed);

  const Explorer big(train_mehac(testing::random_corpus(11, 40, 20)));
  const auto shape = xml_shape(export_freemind(big, 3));
  CHECK(shape.well_formed);
  CHECK(shape.open_close == 39);
  CHECK(shape.self_closing == 40);
}

TEST_CASE("DOT export cuts at max depth") {
  const Explorer ex = three_word_explorer();
  const std::string full = export_dot(ex, 6);
  CHECK(full.rfind("digraph", 0) == 0);
  CHECK(std::count(full.begin(), full.end(), '>') == 4);
  const std::string cut = export_dot(ex, 1);
  CHECK(cut.find("n4 -> n3") != std::string::npos);
  CHECK(cut.find("n3 -> ") == std::string::npos);
  CHECK(cut.find("n1 [") == std::string::npos);
  const std::string root_only = export_dot(ex, 0);
  CHECK(root_only.find("->") == std::string::npos);
}

TEST_CASE("frequency colors") {
  CHECK(frequency_color(100, 100) == "#0000ff");
  CHECK(frequency_color(1, 100) == "#ff0000");
  CHECK(frequency_color(10, 100) == "#800080");
}

TEST_CASE("HTTP API") {
  const Explorer ex = three_word_explorer();
  ApiServer server(ex);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread t([&] { server.listen(); });
  httplib::Client cli("127.0.0.1", port);
  cli.set_connection_timeout(5);

  auto get = [&](const std::string& path) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      if (auto res = cli.Get(path)) return res;
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    FAIL("no response for " << path);
    return httplib::Result();
  };

  auto meta = get("/meta");
  CHECK(meta->status == 200);
  CHECK(meta->get_header_value("Access-Control-Allow-Origin") == "*");
  CHECK(nlohmann::json::parse(meta->body)["n_leaves"] == 3);

  auto flat = get("/flat?n=2&top=1");
  REQUIRE(flat->status == 200);
  const auto fj = nlohmann::json::parse(flat->body);
  CHECK(fj == ex.flat_json(2, 1));
  CHECK(fj["topics"][0]["words"] == nlohmann::json{"b"});

  auto node = get("/node/3");
  CHECK(node->status == 200);
  CHECK(nlohmann::json::parse(node->body) == ex.node_json(3, 10));
  CHECK(nlohmann::json::parse(get("/path/2")->body)["path"] == nlohmann::json{4, 3, 2});

  for (const std::string bad : {"/flat", "/flat?n=0", "/flat?n=4", "/flat?n=x", "/flat?n=2&top=0", "/node/1?top=-3"}) {
    auto r = get(bad);
    CHECK_MESSAGE(r->status == 400, bad);
    CHECK(nlohmann::json::parse(r->body).contains("error"));
  }
  for (const std::string missing : {"/node/5", "/path/99", "/nothing"}) {
    auto r = get(missing);
    CHECK_MESSAGE(r->status == 404, missing);
    CHECK(nlohmann::json::parse(r->body).contains("error"));
  }
  // Read-only: repeated queries see the same model.
  CHECK(get("/meta")->body == meta->body);

  server.stop();
  t.join();
}
