#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "triscore/ingest.hpp"

namespace triscore {

// A triplet expressed in vocabulary indices: node, relation, node.
struct TripletId {
  int server = 0;
  int relation = 0;
  int client = 0;

  auto operator<=>(const TripletId&) const = default;
};

// Integer-indexed labeled undirected multigraph over the training triplets.
// Node i is vocab_ips[i], relation p is vocab_relations[p]. Every training
// triplet is inserted in both orientations, so neighbor lists are symmetric
// and the whitelist matches a queried triplet in either direction.
// Immutable after construction; concurrent reads are safe.
class MultiGraph {
 public:
  static MultiGraph build(const Dataset& dataset);
  static MultiGraph build(std::vector<std::string> vocab_ips,
                          std::vector<std::string> vocab_relations,
                          const std::vector<Triplet>& train);

  int num_nodes() const { return static_cast<int>(vocab_ips_.size()); }
  int num_relations() const { return static_cast<int>(vocab_relations_.size()); }

  // Sorted, duplicate-free N_i^p.
  std::span<const int> neighbors(int node, int relation) const;

  // Normalization constant |N_i^p|; zero where the list is empty.
  int norm(int node, int relation) const;

  // True iff the triplet or its reverse was trained.
  bool contains(const TripletId& t) const;

  // Both orientations of every distinct undirected training edge, sorted.
  const std::vector<TripletId>& directed_edges() const { return edges_; }

  const std::vector<std::string>& vocab_ips() const { return vocab_ips_; }
  const std::vector<std::string>& vocab_relations() const { return vocab_relations_; }

  // Vocabulary lookups; -1 when the symbol was never trained.
  int ip_index(const std::string& ip) const;
  int relation_index(const std::string& relation) const;

 private:
  void check_index(int node, int relation) const;
  uint64_t canonical_key(const TripletId& t) const;

  std::vector<std::string> vocab_ips_;
  std::vector<std::string> vocab_relations_;
  std::unordered_map<std::string, int> ip_lookup_;
  std::unordered_map<std::string, int> relation_lookup_;
  std::vector<std::vector<std::vector<int>>> neighbors_;  // [node][relation] -> sorted ids
  std::unordered_set<uint64_t> whitelist_;                // canonical (min,p,max) keys
  std::vector<TripletId> edges_;
};

}  // namespace triscore
