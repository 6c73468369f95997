#include "triscore/graph.hpp"

#include <algorithm>

#include "triscore/errors.hpp"

namespace triscore {

MultiGraph MultiGraph::build(const Dataset& dataset) {
  return build(dataset.vocab_ips, dataset.vocab_relations, dataset.train);
}

MultiGraph MultiGraph::build(std::vector<std::string> vocab_ips,
                             std::vector<std::string> vocab_relations,
                             const std::vector<Triplet>& train) {
  if (train.empty()) throw DataError("build_graph: train set is empty");

  MultiGraph g;
  g.vocab_ips_ = std::move(vocab_ips);
  g.vocab_relations_ = std::move(vocab_relations);
  for (size_t i = 0; i < g.vocab_ips_.size(); ++i) g.ip_lookup_[g.vocab_ips_[i]] = static_cast<int>(i);
  for (size_t i = 0; i < g.vocab_relations_.size(); ++i)
    g.relation_lookup_[g.vocab_relations_[i]] = static_cast<int>(i);

  const int n = g.num_nodes();
  const int r = g.num_relations();
  g.neighbors_.assign(n, std::vector<std::vector<int>>(r));

  for (const Triplet& t : train) {
    const int s = g.ip_index(t.server_ip);
    const int c = g.ip_index(t.client_ip);
    const int p = g.relation_index(t.relation);
    if (s < 0 || c < 0 || p < 0)
      throw DataError("build_graph: triplet references a symbol outside the vocabulary");
    g.whitelist_.insert(g.canonical_key({s, p, c}));
    g.neighbors_[s][p].push_back(c);
    g.neighbors_[c][p].push_back(s);
  }

  for (auto& per_node : g.neighbors_) {
    for (auto& list : per_node) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }

  // Directed edge list: both orientations of each undirected edge, sorted.
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < r; ++p)
      for (int j : g.neighbors_[i][p]) g.edges_.push_back({i, p, j});
  std::sort(g.edges_.begin(), g.edges_.end());
  return g;
}

std::span<const int> MultiGraph::neighbors(int node, int relation) const {
  check_index(node, relation);
  return neighbors_[node][relation];
}

int MultiGraph::norm(int node, int relation) const {
  check_index(node, relation);
  return static_cast<int>(neighbors_[node][relation].size());
}

bool MultiGraph::contains(const TripletId& t) const {
  check_index(t.server, t.relation);
  check_index(t.client, t.relation);
  return whitelist_.count(canonical_key(t)) != 0;
}

int MultiGraph::ip_index(const std::string& ip) const {
  auto it = ip_lookup_.find(ip);
  return it == ip_lookup_.end() ? -1 : it->second;
}

int MultiGraph::relation_index(const std::string& relation) const {
  auto it = relation_lookup_.find(relation);
  return it == relation_lookup_.end() ? -1 : it->second;
}

void MultiGraph::check_index(int node, int relation) const {
  if (node < 0 || node >= num_nodes()) throw ArgumentError("graph: node index out of range");
  if (relation < 0 || relation >= num_relations())
    throw ArgumentError("graph: relation index out of range");
}

uint64_t MultiGraph::canonical_key(const TripletId& t) const {
  const uint64_t lo = static_cast<uint64_t>(std::min(t.server, t.client));
  const uint64_t hi = static_cast<uint64_t>(std::max(t.server, t.client));
  // 21 bits per field is ample for any vocabulary this library handles.
  return (lo << 42) | (static_cast<uint64_t>(t.relation) << 21) | hi;
}

}  // namespace triscore
