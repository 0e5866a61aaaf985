// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tg/dendrogram.hh"

namespace tg {

struct TreeNode {
  TopicId id;
  TopicId parent = -1;
  TopicId left = -1;
  TopicId right = -1;
  std::int64_t f = 0;
  double h = 0.0;
  // NaN for leaves.
  double delta_h = 0.0;
  // Number of topics in the flat view where this node first appears; |V| for
  // leaves. Root is 1.
  int created_at_n = 0;
  int depth = 0;
};

// Read-only navigation over a dendrogram: node table, top words, flat views
// and the JSON documents behind the HTTP API.
class Explorer {
 public:
  explicit Explorer(Dendrogram dendrogram);

  const Dendrogram& dendrogram() const { return dendrogram_; }
  const TreeNode& node(TopicId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  bool has_node(TopicId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
  }

  // Member words by descending f(w), ties by word id; at most `top` of them.
  std::vector<WordId> top_words(TopicId id, std::size_t top) const;
  // Root first, `id` last.
  std::vector<TopicId> path_to(TopicId id) const;

  nlohmann::json meta_json() const;
  nlohmann::json flat_json(int n, std::size_t top) const;
  nlohmann::json node_json(TopicId id, std::size_t top) const;
  nlohmann::json path_json(TopicId id) const;

 private:
  Dendrogram dendrogram_;
  std::vector<TreeNode> nodes_;
};

// "#rrggbb", blue for the most frequent topic, red for the least, linear in
// log f(t) relative to log f(root).
std::string frequency_color(std::int64_t f, std::int64_t f_root);

// Table of T(n) sorted by f(t): n, f(t) and the top words per topic.
std::string topics_table(const Explorer& explorer, int n, std::size_t top);

// DOT digraph; nodes deeper than max_depth are omitted.
std::string export_dot(const Explorer& explorer, int max_depth, std::size_t top = 5);
// FreeMind .mm; the whole tree, nodes at max_depth folded.
std::string export_freemind(const Explorer& explorer, int max_depth, std::size_t top = 5);

}  // namespace tg
