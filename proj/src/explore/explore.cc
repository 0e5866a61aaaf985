// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/explore.hh"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tg/error.hh"

namespace tg {

namespace {

std::string join_words(const Explorer& ex, const std::vector<WordId>& words) {
  std::string out;
  for (WordId w : words) {
    if (!out.empty()) out += ' ';
    out += ex.dendrogram().vocab[static_cast<std::size_t>(w)];
  }
  return out;
}

std::string node_label(const Explorer& ex, TopicId id, std::size_t top) {
  return "(" + std::to_string(ex.node(id).created_at_n) + ") " + join_words(ex, ex.top_words(id, top));
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

nlohmann::json nullable(double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); }

}  // namespace

Explorer::Explorer(Dendrogram dendrogram) : dendrogram_(std::move(dendrogram)) {
  dendrogram_.validate();
  const int v = dendrogram_.n_leaves;
  nodes_.resize(dendrogram_.node_count());
  for (int w = 0; w < v; ++w) {
    auto& n = nodes_[static_cast<std::size_t>(w)];
    n.id = w;
    n.f = dendrogram_.leaf_f[static_cast<std::size_t>(w)];
    n.h = dendrogram_.leaf_h[static_cast<std::size_t>(w)];
    n.delta_h = std::numeric_limits<double>::quiet_NaN();
    n.created_at_n = v;
  }
  for (std::size_t k = 0; k < dendrogram_.merges.size(); ++k) {
    const Merge& m = dendrogram_.merges[k];
    auto& n = nodes_[static_cast<std::size_t>(m.new_id)];
    n.id = m.new_id;
    n.left = m.left;
    n.right = m.right;
    n.f = m.f_new;
    n.h = m.h_new;
    n.delta_h = m.delta_h;
    n.created_at_n = v - 1 - static_cast<int>(k);
    nodes_[static_cast<std::size_t>(m.left)].parent = m.new_id;
    nodes_[static_cast<std::size_t>(m.right)].parent = m.new_id;
  }
  // Parents have larger ids than their children.
  for (std::size_t id = nodes_.size(); id-- > 0;) {
    auto& n = nodes_[id];
    if (n.parent >= 0) n.depth = nodes_[static_cast<std::size_t>(n.parent)].depth + 1;
  }
}

std::vector<WordId> Explorer::top_words(TopicId id, std::size_t top) const {
  std::vector<WordId> words;
  std::vector<TopicId> stack{id};
  while (!stack.empty()) {
    const TopicId x = stack.back();
    stack.pop_back();
    const auto& n = node(x);
    if (n.left < 0) {
      words.push_back(x);
    } else {
      stack.push_back(n.left);
      stack.push_back(n.right);
    }
  }
  const auto& f = dendrogram_.leaf_f;
  auto order = [&](WordId a, WordId b) {
    const auto fa = f[static_cast<std::size_t>(a)], fb = f[static_cast<std::size_t>(b)];
    return fa != fb ? fa > fb : a < b;
  };
  if (words.size() > top) {
    std::partial_sort(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(top), words.end(), order);
    words.resize(top);
  } else {
    std::sort(words.begin(), words.end(), order);
  }
  return words;
}

std::vector<TopicId> Explorer::path_to(TopicId id) const {
  std::vector<TopicId> path;
  for (TopicId x = id; x >= 0; x = node(x).parent) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

nlohmann::json Explorer::meta_json() const {
  return {{"n_leaves", dendrogram_.n_leaves},
          {"vocab_size", dendrogram_.vocab.size()},
          {"doc_count", dendrogram_.doc_count},
          {"root", dendrogram_.root()},
          {"node_count", nodes_.size()},
          {"model", dendrogram_.meta}};
}

nlohmann::json Explorer::flat_json(int n, std::size_t top) const {
  const auto view = flat_view(dendrogram_, n);
  nlohmann::json topics = nlohmann::json::array();
  for (std::size_t k = 0; k < view.topics.size(); ++k) {
    const auto& t = view.topics[k];
    std::vector<std::string> words;
    for (std::size_t i = 0; i < std::min(top, t.words.size()); ++i) {
      words.push_back(dendrogram_.vocab[static_cast<std::size_t>(t.words[i])]);
    }
    topics.push_back({{"rank", k + 1},
                      {"id", t.node_id},
                      {"f", t.f},
                      {"h", t.h},
                      {"size", t.words.size()},
                      {"words", words}});
  }
  return {{"n", n}, {"topics", std::move(topics)}};
}

nlohmann::json Explorer::node_json(TopicId id, std::size_t top) const {
  if (!has_node(id)) throw range_error("no node " + std::to_string(id));
  const auto& n = node(id);
  std::vector<std::string> words;
  for (WordId w : top_words(id, top)) words.push_back(dendrogram_.vocab[static_cast<std::size_t>(w)]);
  nlohmann::json children = nlohmann::json::array();
  if (n.left >= 0) children = {n.left, n.right};
  return {{"id", id},
          {"words", words},
          {"f", n.f},
          {"h", n.h},
          {"delta_h", nullable(n.delta_h)},
          {"children", children},
          {"parent", n.parent >= 0 ? nlohmann::json(n.parent) : nlohmann::json(nullptr)},
          {"created_at_n", n.created_at_n},
          {"depth", n.depth},
          {"color", frequency_color(n.f, node(dendrogram_.root()).f)}};
}

nlohmann::json Explorer::path_json(TopicId id) const {
  if (!has_node(id)) throw range_error("no node " + std::to_string(id));
  return {{"id", id}, {"path", path_to(id)}};
}

std::string frequency_color(std::int64_t f, std::int64_t f_root) {
  double r = 1.0;
  if (f_root > 1) r = std::log(static_cast<double>(std::max<std::int64_t>(f, 1))) / std::log(static_cast<double>(f_root));
  r = std::clamp(r, 0.0, 1.0);
  const int red = static_cast<int>(std::lround(255.0 * (1.0 - r)));
  const int blue = static_cast<int>(std::lround(255.0 * r));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x00%02x", red, blue);
  return buf;
}

std::string topics_table(const Explorer& explorer, int n, std::size_t top) {
  const auto view = flat_view(explorer.dendrogram(), n);
  std::ostringstream out;
  out << "# T(" << n << ") sorted by topic frequency\n";
  out << "rank\tnode\tf\twords\n";
  for (std::size_t k = 0; k < view.topics.size(); ++k) {
    const auto& t = view.topics[k];
    std::vector<WordId> words(t.words.begin(), t.words.begin() + static_cast<std::ptrdiff_t>(std::min(top, t.words.size())));
    out << k + 1 << '\t' << t.node_id << '\t' << t.f << '\t' << join_words(explorer, words) << '\n';
  }
  return out.str();
}

std::string export_dot(const Explorer& explorer, int max_depth, std::size_t top) {
  const auto& d = explorer.dendrogram();
  const std::int64_t f_root = explorer.node(d.root()).f;
  std::ostringstream out;
  out << "digraph topics {\n  node [shape=box, style=filled, fontcolor=white];\n";
  std::vector<TopicId> stack{d.root()};
  while (!stack.empty()) {
    const TopicId id = stack.back();
    stack.pop_back();
    const auto& n = explorer.node(id);
    out << "  n" << id << " [label=\"" << dot_escape(node_label(explorer, id, top)) << "\", fillcolor=\""
        << frequency_color(n.f, f_root) << "\"];\n";
    if (n.left < 0 || n.depth >= max_depth) continue;
    out << "  n" << id << " -> n" << n.left << ";\n  n" << id << " -> n" << n.right << ";\n";
    stack.push_back(n.right);
    stack.push_back(n.left);
  }
  out << "}\n";
  return out.str();
}

std::string export_freemind(const Explorer& explorer, int max_depth, std::size_t top) {
  const auto& d = explorer.dendrogram();
  const std::int64_t f_root = explorer.node(d.root()).f;
  std::ostringstream out;
  out << "<map version=\"1.0.1\">\n";
  // Negative entries close the node -(id + 1).
  std::vector<TopicId> stack{d.root()};
  while (!stack.empty()) {
    const TopicId item = stack.back();
    stack.pop_back();
    if (item < 0) {
      out << std::string(static_cast<std::size_t>(explorer.node(-item - 1).depth) * 2, ' ') << "</node>\n";
      continue;
    }
    const auto& n = explorer.node(item);
    const bool leaf = n.left < 0;
    out << std::string(static_cast<std::size_t>(n.depth) * 2, ' ') << "<node ID=\"n" << item << "\" TEXT=\""
        << xml_escape(node_label(explorer, item, top)) << "\" BACKGROUND_COLOR=\"" << frequency_color(n.f, f_root)
        << "\"";
    if (!leaf && n.depth >= max_depth) out << " FOLDED=\"true\"";
    if (leaf) {
      out << "/>\n";
      continue;
    }
    out << ">\n";
    stack.push_back(-item - 1);
    stack.push_back(n.right);
    stack.push_back(n.left);
  }
  out << "</map>\n";
  return out.str();
}

}  // namespace tg
