// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tg/corpus.hh"
#include "tg/topic.hh"

namespace tg {

inline constexpr int kDendrogramVersion = 1;

// One join. Leaves are topics 0..|V|-1 (topic id = word id); merge k creates
// topic |V| + k.
struct Merge {
  TopicId left;
  TopicId right;
  TopicId new_id;
  double delta_h;
  double h_new;
  std::int64_t f_new;
};

// The full merge tree of a Topic Grouper run. Every flat view T(n) derives
// from it.
struct Dendrogram {
  std::int32_t n_leaves = 0;
  std::vector<std::string> vocab;
  std::vector<std::int64_t> leaf_f;
  std::vector<double> leaf_h;
  std::int64_t doc_count = 0;
  std::vector<Merge> merges;
  // Provenance: tool version, command line, seeds, algorithm.
  nlohmann::json meta = nlohmann::json::object();

  TopicId root() const { return static_cast<TopicId>(2 * n_leaves - 2); }
  std::size_t node_count() const { return static_cast<std::size_t>(2 * n_leaves - 1); }

  // Throws if merges do not form a valid agglomeration of all leaves.
  void validate() const;
};

struct FlatTopic {
  TopicId node_id;
  // Member words by descending f(w), ties by word id.
  std::vector<WordId> words;
  std::int64_t f;
  double h;
};

// T(n): topics ordered by descending f(t), ties by smallest word id.
struct FlatView {
  int n = 0;
  std::vector<FlatTopic> topics;
  // word id -> index into topics
  std::vector<int> assignment;
};

// Replays the first |V| - n merges from singletons.
FlatView flat_view(const Dendrogram& dendrogram, int n);

struct SeriesPoint {
  int n;
  double delta_h;
  // delta_h(n) / delta_h(n+1); NaN where n+1 has no recorded merge.
  double ratio;
};

// Delta h_n for n = |V|-1 down to 1, where Delta h_n is the delta_h of the
// merge that produced T(n).
std::vector<SeriesPoint> delta_h_series(const Dendrogram& dendrogram);

// argmax of the ratio column over n in [lo, hi]; -1 if none is finite.
int sharpest_drop(const std::vector<SeriesPoint>& series, int lo, int hi);

nlohmann::json to_json(const Dendrogram& d);
Dendrogram dendrogram_from_json(const nlohmann::json& j);

}  // namespace tg
