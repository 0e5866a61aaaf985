// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/dendrogram.hh"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tg/error.hh"

namespace tg {

void Dendrogram::validate() const {
  if (n_leaves < 1) throw invalid_argument("dendrogram: no leaves");
  const auto v = static_cast<std::size_t>(n_leaves);
  if (vocab.size() != v || leaf_f.size() != v || leaf_h.size() != v) {
    throw invalid_argument("dendrogram: leaf arrays do not match n_leaves");
  }
  if (merges.size() != v - 1) {
    throw invalid_argument("dendrogram: expected " + std::to_string(v - 1) + " merges, found " +
                           std::to_string(merges.size()));
  }
  std::vector<bool> live(node_count(), false);
  std::fill(live.begin(), live.begin() + n_leaves, true);
  for (std::size_t k = 0; k < merges.size(); ++k) {
    const Merge& m = merges[k];
    const auto expect = static_cast<TopicId>(v + k);
    if (m.new_id != expect) throw invalid_argument("dendrogram: merge " + std::to_string(k) + " has id " + std::to_string(m.new_id));
    auto usable = [&](TopicId id) { return id >= 0 && id < expect && live[static_cast<std::size_t>(id)]; };
    if (m.left == m.right || !usable(m.left) || !usable(m.right)) {
      throw invalid_argument("dendrogram: merge " + std::to_string(k) + " joins a dead or unknown topic");
    }
    live[static_cast<std::size_t>(m.left)] = false;
    live[static_cast<std::size_t>(m.right)] = false;
    live[static_cast<std::size_t>(expect)] = true;
  }
}

FlatView flat_view(const Dendrogram& dendrogram, int n) {
  const int v = dendrogram.n_leaves;
  if (n < 1 || n > v) {
    throw range_error("flat view: n = " + std::to_string(n) + " outside [1, " + std::to_string(v) + "]");
  }
  const auto applied = static_cast<std::size_t>(v - n);
  // parent[x] for nodes created within the first `applied` merges.
  std::vector<TopicId> parent(static_cast<std::size_t>(v) + applied, -1);
  for (std::size_t k = 0; k < applied; ++k) {
    const Merge& m = dendrogram.merges[k];
    parent[static_cast<std::size_t>(m.left)] = m.new_id;
    parent[static_cast<std::size_t>(m.right)] = m.new_id;
  }
  std::vector<TopicId> top(static_cast<std::size_t>(v));
  for (int w = 0; w < v; ++w) {
    TopicId x = w;
    while (parent[static_cast<std::size_t>(x)] >= 0) x = parent[static_cast<std::size_t>(x)];
    top[static_cast<std::size_t>(w)] = x;
  }

  std::vector<int> slot(parent.size(), -1);
  std::vector<FlatTopic> topics;
  for (int w = 0; w < v; ++w) {
    const TopicId x = top[static_cast<std::size_t>(w)];
    int& s = slot[static_cast<std::size_t>(x)];
    if (s < 0) {
      s = static_cast<int>(topics.size());
      const double h = x < v ? dendrogram.leaf_h[static_cast<std::size_t>(x)]
                             : dendrogram.merges[static_cast<std::size_t>(x - v)].h_new;
      topics.push_back({x, {}, 0, h});
    }
    topics[static_cast<std::size_t>(s)].words.push_back(w);
    topics[static_cast<std::size_t>(s)].f += dendrogram.leaf_f[static_cast<std::size_t>(w)];
  }
  const auto& leaf_f = dendrogram.leaf_f;
  for (auto& t : topics) {
    // Words arrive in id order, so a stable sort keeps ids ascending on ties.
    std::stable_sort(t.words.begin(), t.words.end(), [&](WordId a, WordId b) {
      return leaf_f[static_cast<std::size_t>(a)] > leaf_f[static_cast<std::size_t>(b)];
    });
  }
  // Topics were created in order of their smallest word id.
  std::stable_sort(topics.begin(), topics.end(),
                   [](const FlatTopic& a, const FlatTopic& b) { return a.f > b.f; });

  FlatView view;
  view.n = n;
  view.assignment.assign(static_cast<std::size_t>(v), -1);
  for (std::size_t k = 0; k < topics.size(); ++k) {
    for (WordId w : topics[k].words) view.assignment[static_cast<std::size_t>(w)] = static_cast<int>(k);
  }
  view.topics = std::move(topics);
  return view;
}

std::vector<SeriesPoint> delta_h_series(const Dendrogram& dendrogram) {
  const int v = dendrogram.n_leaves;
  std::vector<SeriesPoint> out;
  out.reserve(dendrogram.merges.size());
  for (std::size_t k = 0; k < dendrogram.merges.size(); ++k) {
    const double dh = dendrogram.merges[k].delta_h;
    const double ratio = k == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : dh / dendrogram.merges[k - 1].delta_h;
    out.push_back({v - 1 - static_cast<int>(k), dh, ratio});
  }
  return out;
}

int sharpest_drop(const std::vector<SeriesPoint>& series, int lo, int hi) {
  int best = -1;
  double best_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& p : series) {
    if (p.n < lo || p.n > hi || std::isnan(p.ratio)) continue;
    // Ties keep the smaller n.
    if (best < 0 || p.ratio > best_ratio || (p.ratio == best_ratio && p.n < best)) {
      best = p.n;
      best_ratio = p.ratio;
    }
  }
  return best;
}

nlohmann::json to_json(const Dendrogram& d) {
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& m : d.merges) {
    merges.push_back({{"left", m.left},
                      {"right", m.right},
                      {"new", m.new_id},
                      {"delta_h", m.delta_h},
                      {"h_new", m.h_new},
                      {"f_new", m.f_new}});
  }
  return {{"kind", "dendrogram"},
          {"version", kDendrogramVersion},
          {"n_leaves", d.n_leaves},
          {"doc_count", d.doc_count},
          {"vocab", d.vocab},
          {"leaf_f", d.leaf_f},
          {"leaf_h", d.leaf_h},
          {"merges", std::move(merges)},
          {"meta", d.meta}};
}

Dendrogram dendrogram_from_json(const nlohmann::json& j) {
  Dendrogram d;
  try {
    if (j.value("kind", std::string("dendrogram")) != "dendrogram") {
      throw parse_error("model file is a " + j.at("kind").get<std::string>() + ", not a dendrogram");
    }
    const int version = j.at("version").get<int>();
    if (version != kDendrogramVersion) {
      throw parse_error("unsupported dendrogram version " + std::to_string(version));
    }
    d.n_leaves = j.at("n_leaves").get<std::int32_t>();
    d.doc_count = j.value("doc_count", std::int64_t{0});
    d.vocab = j.at("vocab").get<std::vector<std::string>>();
    d.leaf_f = j.at("leaf_f").get<std::vector<std::int64_t>>();
    d.leaf_h = j.at("leaf_h").get<std::vector<double>>();
    for (const auto& m : j.at("merges")) {
      d.merges.push_back({m.at("left").get<TopicId>(), m.at("right").get<TopicId>(),
                          m.at("new").get<TopicId>(), m.at("delta_h").get<double>(),
                          m.at("h_new").get<double>(), m.at("f_new").get<std::int64_t>()});
    }
    if (j.contains("meta")) d.meta = j.at("meta");
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("dendrogram: ") + e.what());
  }
  try {
    d.validate();
  } catch (const Error& e) {
    throw parse_error(e.what());
  }
  return d;
}

}  // namespace tg
