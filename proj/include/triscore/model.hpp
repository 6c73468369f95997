#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "triscore/graph.hpp"
#include "triscore/numeric.hpp"

namespace triscore {

// Training hyperparameters. The rgcn defaults are the tuned values this
// model family ships with; distmult_defaults() configures the
// convolution-free variant (50 units, L2 0.01, learning rate 0.02).
struct HyperParams {
  int hidden_dim = 100;
  int num_layers = 2;  // graph convolution layers; 0 trains the embedding table directly
  int block_size = 10;
  double dropout_rate = 0.2;
  double l2_weight = 0.0;
  double learning_rate = 0.01;
  int negative_rate = 10;
  int epochs = 400;
  uint64_t seed = 1;

  void validate() const;

  static HyperParams rgcn_defaults() { return HyperParams{}; }
  static HyperParams distmult_defaults();

  // "rgcn" when convolution layers are present, "distmult" otherwise.
  std::string method() const { return num_layers == 0 ? "distmult" : "rgcn"; }
};

// Offsets into the flat parameter vector. Order: node embedding table,
// then per layer the per-relation block-diagonal weights followed by the
// dense self-loop weight, then the relation diagonals.
struct ParameterLayout {
  int num_nodes = 0;
  int num_relations = 0;
  int dim = 0;
  int block_size = 0;
  int conv_layers = 0;

  static ParameterLayout from(const MultiGraph& graph, const HyperParams& hp);

  int blocks() const { return dim / block_size; }
  size_t embedding_size() const { return static_cast<size_t>(num_nodes) * dim; }
  size_t rel_weight_size() const { return static_cast<size_t>(dim) * block_size; }  // per relation
  size_t self_weight_size() const { return static_cast<size_t>(dim) * dim; }

  size_t embedding_offset(int node) const { return static_cast<size_t>(node) * dim; }
  size_t rel_weight_offset(int layer, int relation) const;
  size_t self_weight_offset(int layer) const;
  size_t relation_diag_offset(int relation) const;
  size_t total_size() const;
};

// All trainable parameters in one contiguous vector; the layout gives
// each tensor a view into it.
struct ModelParameters {
  ParameterLayout layout;
  std::vector<double> values;

  std::span<const double> embedding(int node) const {
    return {values.data() + layout.embedding_offset(node), static_cast<size_t>(layout.dim)};
  }
  std::span<const double> relation_diag(int relation) const {
    return {values.data() + layout.relation_diag_offset(relation), static_cast<size_t>(layout.dim)};
  }
};

// Glorot-uniform init of every tensor, drawn in layout order so a seed
// pins the whole parameter vector.
ModelParameters init_parameters(const ParameterLayout& layout, Rng& rng);

// Two-pass graph convolution producing one embedding row per node: each
// layer computes act( sum_p sum_{j in N_i^p} (1/C_{i,p}) W_p h_j + W_0 h_i )
// with relu between layers and identity on the output layer. When a
// dropout rng is supplied, feature rows are masked before every layer
// (training mode). With zero layers this returns the embedding table.
Matrix encode(const MultiGraph& graph, const ModelParameters& params, double dropout_rate = 0.0,
              Rng* dropout_rng = nullptr);

// Bilinear diagonal decoder: sum_k e_s[k] * r_p[k] * e_c[k], computed as
// r*(e_s*e_c) so swapping the endpoints gives the identical bits.
double score_embedding(std::span<const double> e_s, std::span<const double> r_p,
                       std::span<const double> e_c);

// Corrupts either endpoint (fair coin) with a uniform replacement that
// differs from the original; the relation is never touched.
std::vector<TripletId> sample_negatives(const TripletId& positive, int count, int num_nodes,
                                        Rng& rng);

struct Example {
  TripletId triplet;
  double label = 1.0;  // 1 observed, 0 corrupted
};

// All directed training edges as positives, each followed by its
// negative_rate corruptions.
std::vector<Example> build_training_batch(const MultiGraph& graph, int negative_rate, Rng& rng);

// Negative-sampling cross-entropy averaged over (1+negative_rate) * #positives
// examples, plus l2_weight * ||params||^2. If `gradient` is non-null it
// receives dLoss/dparams (same length as params.values) computed by
// backpropagation; finite-difference tests hold this to 1e-4 relative error.
double loss(const ModelParameters& params, std::span<const Example> batch, const MultiGraph& graph,
            const HyperParams& hp, Rng* dropout_rng = nullptr, std::vector<double>* gradient = nullptr);

// Frozen result of training: embeddings from a dropout-free forward pass,
// relation diagonals, and the graph (vocabulary + whitelist) they bind to.
struct TrainedModel {
  MultiGraph graph;
  HyperParams hyperparams;
  Matrix node_embeddings;     // |V| x d
  Matrix relation_diagonals;  // |R| x d
  std::vector<double> training_log;  // one loss per epoch

  double decoder_score(const TripletId& t) const {
    return score_embedding(node_embeddings.row(t.server), relation_diagonals.row(t.relation),
                           node_embeddings.row(t.client));
  }

  void save(const std::string& path) const;
  void save(std::ostream& out) const;
  static TrainedModel load(const std::string& path);
  static TrainedModel load(std::istream& in);
};

// Full-batch Adam (beta1 0.9, beta2 0.999, eps 1e-8) for hp.epochs epochs,
// resampling negatives every epoch. Divergence raises TrainingError naming
// the epoch. Identical seed and data give a bit-identical model.
TrainedModel train(const Dataset& dataset, const HyperParams& hp);

}  // namespace triscore
