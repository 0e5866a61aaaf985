// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/train.hh"

#include <algorithm>
#include <new>
#include <set>

#include "tg/error.hh"
#include "tg/kernels.hh"

namespace tg {

namespace {

// Topic storage shared by both algorithms: leaves 0..|V|-1, merge k creates
// topic |V| + k. Dead topics release their document lists.
class TopicTable {
 public:
  explicit TopicTable(const Corpus& corpus) : corpus_(corpus) {
    const std::size_t v = corpus.vocab_size();
    topics_.reserve(2 * v - 1);
    for (std::size_t w = 0; w < v; ++w) topics_.push_back(singleton_topic(corpus, static_cast<WordId>(w)));
    alive_.assign(2 * v - 1, false);
    std::fill(alive_.begin(), alive_.begin() + static_cast<std::ptrdiff_t>(v), true);
    for (std::size_t w = 0; w < v; ++w) {
      pos_.push_back(static_cast<std::int32_t>(live_.size()));
      live_.push_back(static_cast<TopicId>(w));
    }
    pos_.resize(2 * v - 1, -1);
  }

  const TopicState& operator[](TopicId id) const { return topics_[static_cast<std::size_t>(id)]; }
  bool alive(TopicId id) const { return alive_[static_cast<std::size_t>(id)]; }
  const std::vector<TopicId>& live() const { return live_; }
  std::span<const TopicState> leaves() const { return {topics_.data(), corpus_.vocab_size()}; }

  // Joins s and t into a new topic; returns its id.
  TopicId join(TopicId s, TopicId t) {
    const auto id = static_cast<TopicId>(topics_.size());
    topics_.push_back(merge_topics((*this)[s], (*this)[t], id, corpus_));
    kill(s);
    kill(t);
    alive_[static_cast<std::size_t>(id)] = true;
    pos_[static_cast<std::size_t>(id)] = static_cast<std::int32_t>(live_.size());
    live_.push_back(id);
    return id;
  }

  // Live topics other than `u`, as pointers for the row kernel.
  void others(TopicId u, std::vector<TopicId>& ids, std::vector<const TopicState*>& ptrs) const {
    ids.clear();
    ptrs.clear();
    for (TopicId r : live_) {
      if (r == u) continue;
      ids.push_back(r);
      ptrs.push_back(&(*this)[r]);
    }
  }

 private:
  void kill(TopicId id) {
    auto& t = topics_[static_cast<std::size_t>(id)];
    std::vector<Posting>().swap(t.doc_freq);
    std::vector<WordId>().swap(t.words);
    alive_[static_cast<std::size_t>(id)] = false;
    const auto p = static_cast<std::size_t>(pos_[static_cast<std::size_t>(id)]);
    live_[p] = live_.back();
    pos_[static_cast<std::size_t>(live_[p])] = static_cast<std::int32_t>(p);
    live_.pop_back();
    pos_[static_cast<std::size_t>(id)] = -1;
  }

  const Corpus& corpus_;
  std::vector<TopicState> topics_;
  std::vector<bool> alive_;
  std::vector<TopicId> live_;
  std::vector<std::int32_t> pos_;
};

Dendrogram empty_dendrogram(const Corpus& corpus, const TopicTable& table, const char* algo) {
  Dendrogram d;
  d.n_leaves = static_cast<std::int32_t>(corpus.vocab_size());
  d.vocab = corpus.vocabulary().words();
  d.doc_count = static_cast<std::int64_t>(corpus.doc_count());
  for (const auto& leaf : table.leaves()) {
    d.leaf_f.push_back(leaf.f);
    d.leaf_h.push_back(leaf.h);
  }
  d.merges.reserve(corpus.vocab_size() - 1);
  d.meta["algorithm"] = algo;
  return d;
}

Merge record(const TopicTable& table, TopicId s, TopicId t, TopicId u, double dh) {
  // Left child is the one first in topic order.
  if (table[t].key < table[s].key) std::swap(s, t);
  return {s, t, u, dh, table[u].h, table[u].f};
}

void require_vocab(const Corpus& corpus) {
  if (corpus.vocab_size() < 2) throw range_error("training needs at least two vocabulary words");
}

// Per-topic heap entry: a join partner and the delta_h of the pair.
struct PartnerEntry {
  double delta_h;
  TopicId partner;
};

}  // namespace

std::size_t ehac_memory_estimate(std::size_t vocab_size) {
  const std::size_t v = vocab_size;
  // Both directions of every pair in the heaps with up to 2x lazy-deletion
  // slack, plus the initial triangle of delta_h values.
  return v * v * (2 * sizeof(PartnerEntry) + sizeof(double) / 2);
}

Dendrogram train_ehac(const Corpus& corpus, const TrainOptions& opts, TrainStats* stats) {
  require_vocab(corpus);
  const std::size_t v = corpus.vocab_size();
  const std::size_t need = ehac_memory_estimate(v);
  if (need > opts.memory_budget_bytes) {
    throw Error("memory", "EHAC needs about " + std::to_string(need >> 20) + " MiB for |V| = " +
                              std::to_string(v) + ", above the budget of " +
                              std::to_string(opts.memory_budget_bytes >> 20) +
                              " MiB; use MEHAC (--algo mehac) or raise the budget");
  }
  try {
    TopicTable table(corpus);
    Dendrogram dendrogram = empty_dendrogram(corpus, table, "ehac");
    TrainStats local;

    std::vector<WordId> key(2 * v - 1, 0);
    for (std::size_t w = 0; w < v; ++w) key[w] = static_cast<WordId>(w);
    // Heap order: larger delta_h first, then smaller partner key. For a fixed
    // owner this is exactly the Candidate order of the pairs.
    auto worse = [&key](const PartnerEntry& a, const PartnerEntry& b) {
      if (a.delta_h != b.delta_h) return a.delta_h < b.delta_h;
      return key[static_cast<std::size_t>(a.partner)] > key[static_cast<std::size_t>(b.partner)];
    };

    std::vector<std::vector<PartnerEntry>> pq(2 * v - 1);
    {
      const auto tri = kernels::pair_scan(table.leaves(), opts.exec);
      local.delta_h_evaluations += tri.size();
      for (std::size_t s = 0; s < v; ++s) pq[s].reserve(v - 1);
      for (std::size_t s = 0; s < v; ++s) {
        const double* row = tri.data() + kernels::triangle_offset(s, v);
        for (std::size_t t = s + 1; t < v; ++t) {
          pq[s].push_back({row[t - s - 1], static_cast<TopicId>(t)});
          pq[t].push_back({row[t - s - 1], static_cast<TopicId>(s)});
        }
      }
      for (auto& heap : pq) std::make_heap(heap.begin(), heap.end(), worse);
    }
    std::size_t entries = v * (v - 1);
    local.peak_queue_entries = entries;

    auto clean_head = [&](TopicId r) {
      auto& heap = pq[static_cast<std::size_t>(r)];
      while (!heap.empty() && !table.alive(heap.front().partner)) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        heap.pop_back();
        --entries;
      }
    };

    std::vector<TopicId> other_ids;
    std::vector<const TopicState*> other_ptrs;
    std::vector<double> row;
    for (std::size_t step = 0; step + 1 < v; ++step) {
      TopicId s = -1, t = -1;
      Candidate best{0.0, 0, 0};
      double best_dh = 0.0;
      for (TopicId r : table.live()) {
        clean_head(r);
        const auto& heap = pq[static_cast<std::size_t>(r)];
        const PartnerEntry& head = heap.front();
        const auto c = Candidate::of(head.delta_h, key[static_cast<std::size_t>(r)],
                                     key[static_cast<std::size_t>(head.partner)]);
        if (s < 0 || better(c, best)) {
          best = c;
          s = r;
          t = head.partner;
          best_dh = head.delta_h;
        }
      }

      entries -= pq[static_cast<std::size_t>(s)].size() + pq[static_cast<std::size_t>(t)].size();
      std::vector<PartnerEntry>().swap(pq[static_cast<std::size_t>(s)]);
      std::vector<PartnerEntry>().swap(pq[static_cast<std::size_t>(t)]);

      const TopicId u = table.join(s, t);
      key[static_cast<std::size_t>(u)] = table[u].key;
      dendrogram.merges.push_back(record(table, s, t, u, best_dh));

      table.others(u, other_ids, other_ptrs);
      row.resize(other_ids.size());
      kernels::delta_h_row(table[u], other_ptrs, row, opts.exec);
      local.delta_h_evaluations += row.size();
      auto& own = pq[static_cast<std::size_t>(u)];
      own.reserve(other_ids.size());
      for (std::size_t k = 0; k < other_ids.size(); ++k) {
        auto& heap = pq[static_cast<std::size_t>(other_ids[k])];
        heap.push_back({row[k], u});
        std::push_heap(heap.begin(), heap.end(), worse);
        own.push_back({row[k], other_ids[k]});
      }
      std::make_heap(own.begin(), own.end(), worse);
      entries += 2 * other_ids.size();
      local.peak_queue_entries = std::max(local.peak_queue_entries, entries);

      // Drop entries pointing at dead topics once they dominate.
      const std::size_t n_live = table.live().size();
      if (entries > 2 * n_live * (n_live - 1) + 1024) {
        entries = 0;
        for (TopicId r : table.live()) {
          auto& heap = pq[static_cast<std::size_t>(r)];
          std::erase_if(heap, [&](const PartnerEntry& e) { return !table.alive(e.partner); });
          std::make_heap(heap.begin(), heap.end(), worse);
          entries += heap.size();
        }
      }
      if (opts.on_merge) opts.on_merge(dendrogram.merges.back());
    }
    if (stats) *stats = local;
    return dendrogram;
  } catch (const std::bad_alloc&) {
    throw Error("memory", "out of memory during EHAC with |V| = " + std::to_string(v) +
                              "; use MEHAC (--algo mehac)");
  }
}

namespace {

// MEHAC queue entry: owner's best join partner, or a deferred (invalid)
// entry with partner -1 whose priority is an upper bound of the true best.
struct QueueEntry {
  Candidate priority;
  TopicId owner;
  TopicId partner;
};

struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (better(a.priority, b.priority)) return true;
    if (better(b.priority, a.priority)) return false;
    return a.owner < b.owner;
  }
};

}  // namespace

Dendrogram train_mehac(const Corpus& corpus, const TrainOptions& opts, TrainStats* stats) {
  require_vocab(corpus);
  const std::size_t v = corpus.vocab_size();
  try {
    TopicTable table(corpus);
    Dendrogram dendrogram = empty_dendrogram(corpus, table, "mehac");
    TrainStats local;

    using Queue = std::set<QueueEntry, QueueOrder>;
    Queue pq;
    std::vector<Queue::iterator> entry_of(2 * v - 1, pq.end());

    auto insert = [&](const QueueEntry& e) {
      entry_of[static_cast<std::size_t>(e.owner)] = pq.insert(e).first;
      local.peak_queue_entries = std::max(local.peak_queue_entries, pq.size());
    };
    auto erase_owner = [&](TopicId owner) {
      auto& it = entry_of[static_cast<std::size_t>(owner)];
      if (it != pq.end()) {
        pq.erase(it);
        it = pq.end();
      }
    };

    {
      const auto best = kernels::best_partners(table.leaves(), opts.exec);
      local.delta_h_evaluations += v * (v - 1) / 2;
      for (std::size_t s = 0; s < v; ++s) insert({best[s].best, static_cast<TopicId>(s), best[s].partner});
    }

    std::vector<TopicId> other_ids;
    std::vector<const TopicState*> other_ptrs;
    std::vector<double> row;

    // Best partner of `s` among all other live topics, given their delta_h.
    auto best_of_row = [&](TopicId s) {
      QueueEntry e{{0.0, 0, 0}, s, -1};
      for (std::size_t k = 0; k < other_ids.size(); ++k) {
        const auto c = Candidate::of(row[k], table[s].key, table[other_ids[k]].key);
        if (e.partner < 0 || better(c, e.priority)) {
          e.priority = c;
          e.partner = other_ids[k];
        }
      }
      return e;
    };
    auto compute_row = [&](TopicId s) {
      table.others(s, other_ids, other_ptrs);
      row.resize(other_ids.size());
      kernels::delta_h_row(table[s], other_ptrs, row, opts.exec);
      local.delta_h_evaluations += row.size();
    };

    while (table.live().size() > 1) {
      const QueueEntry top = *pq.begin();
      erase_owner(top.owner);
      if (top.partner < 0) {
        // Deferred update: recompute the owner's best partner now.
        ++local.deferred_recomputations;
        compute_row(top.owner);
        insert(best_of_row(top.owner));
        continue;
      }
      const TopicId s = top.owner, t = top.partner;
      erase_owner(t);
      const TopicId u = table.join(s, t);
      dendrogram.merges.push_back(record(table, s, t, u, top.priority.delta_h));
      if (table.live().size() == 1) {
        if (opts.on_merge) opts.on_merge(dendrogram.merges.back());
        break;
      }

      // One row of delta_h(u, w) serves both u's own best partner and the
      // adjustment of every other topic's entry.
      compute_row(u);
      insert(best_of_row(u));
      for (std::size_t k = 0; k < other_ids.size(); ++k) {
        const TopicId w = other_ids[k];
        const QueueEntry old = *entry_of[static_cast<std::size_t>(w)];
        const auto offer = Candidate::of(row[k], table[w].key, table[u].key);
        if (better(offer, old.priority)) {
          erase_owner(w);
          insert({offer, w, u});
        } else if (old.partner == s || old.partner == t) {
          // Keeps its optimistic priority; recomputed only if it surfaces.
          erase_owner(w);
          insert({old.priority, w, -1});
        }
      }
      if (opts.on_merge) opts.on_merge(dendrogram.merges.back());
    }
    if (stats) *stats = local;
    return dendrogram;
  } catch (const std::bad_alloc&) {
    throw Error("memory", "out of memory during MEHAC with |V| = " + std::to_string(v));
  }
}

}  // namespace tg
