#ifndef NMARANK_GRAPH_HPP_
#define NMARANK_GRAPH_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nmarank/relation.hpp"

namespace nmarank {

// Draw counts of the three statements for one pair j < k.
struct PairCounts {
  long eq = 0;
  long lt = 0;
  long gt = 0;

  long total() const { return eq + lt + gt; }
  long count(Order o) const {
    return o == Order::Eq ? eq : o == Order::Lt ? lt : gt;
  }
  // Most frequent statement; exact ties resolve EQ, then LT, then GT.
  Order argmax() const;
};

class PairwiseProb {
 public:
  PairwiseProb(int n_treatments, std::vector<PairCounts> counts);

  int n_treatments() const { return n_; }
  long draws() const { return draws_; }
  const PairCounts& counts(int j, int k) const;  // j < k
  // Pr(statement o about (j, k)); j > k is answered through the flip.
  double prob(int j, int k, Order o) const;
  double p_eq(int j, int k) const { return prob(j, k, Order::Eq); }
  double p_lt(int j, int k) const { return prob(j, k, Order::Lt); }
  double p_gt(int j, int k) const { return prob(j, k, Order::Gt); }
  // Dominant statement and its probability (p-tilde).
  Order dominant(int j, int k) const;
  double max_prob(int j, int k) const;

 private:
  int n_;
  long draws_;
  std::vector<PairCounts> counts_;
};

// Throws DataError on an empty sample.
PairwiseProb pairwise_probabilities(const RelationSample& rs);

// Directed comparison graph stored as at most one statement per pair j < k.
// Edge (j, k) reads "j has the smaller effect"; an EQ statement is the pair
// of edges (j, k) and (k, j).
class ComparisonGraph {
 public:
  ComparisonGraph() = default;
  explicit ComparisonGraph(int n_treatments);

  // Every pair of `r`, annotated with the probability of its statement.
  static ComparisonGraph from_relation(const Relation& r,
                                       const PairwiseProb& pp);
  // (j, k) alone is LT, (k, j) alone GT, both EQ. Throws DataError on
  // self-loops and out-of-range nodes.
  static ComparisonGraph from_edges(int n_treatments,
                                    const std::vector<std::pair<int, int>>& edges);

  int n_treatments() const { return n_; }
  std::optional<Order> statement(int j, int k) const;
  double prob(int j, int k) const;  // 0 for unrepresented pairs
  void set(int j, int k, Order o, double prob = 0.0);
  void clear(int j, int k);

  std::size_t size() const;  // represented pairs
  bool complete() const { return size() == n_pairs(n_); }
  double density() const;  // size() / C(K, 2)
  // Sorted ordered pairs.
  std::vector<std::pair<int, int>> edges() const;
  // True iff r agrees with every represented statement.
  bool satisfied_by(const Relation& r) const;
  bool has_bidirectional() const;
  // Complete graphs only.
  Relation as_relation() const;

  double joint_prob = 0.0;
  double gamma = 0.0;

  // Same statements; annotations are ignored.
  friend bool operator==(const ComparisonGraph& a, const ComparisonGraph& b) {
    return a.n_ == b.n_ && a.stmt_ == b.stmt_;
  }

 private:
  int n_ = 0;
  std::vector<std::optional<Order>> stmt_;
  std::vector<double> prob_;
};

// E-tilde: the dominant statement of every pair.
ComparisonGraph build_initial_graph(const PairwiseProb& pp);

// Complete graphs only (DataError otherwise): true iff some assignment of
// reals to treatments realizes every statement.
bool is_coherent(const ComparisonGraph& g);

// Score per pair: 0 if the statements agree, 1 if exactly one is EQ, 2 if
// they point in opposite directions; weighted by p-tilde of the pair.
int statement_score(Order a, Order b);
double graph_distance(const ComparisonGraph& tilde, const Relation& cand,
                      const PairwiseProb& pp);

double joint_probability(const ComparisonGraph& g, const RelationSample& rs);

// E_0 among the distinct relations of the sample. Ties in distance go to the
// more frequent relation, then to the lexicographically smaller edge list.
ComparisonGraph closest_coherent(const ComparisonGraph& tilde,
                                 const PairwiseProb& pp,
                                 const RelationSample& rs);

// Pairs of e0 whose statement probability exceeds gamma.
ComparisonGraph trimmed_graph(const ComparisonGraph& e0, double gamma,
                              const RelationSample& rs);

// Distinct non-empty trimmed graphs over gamma in {0} and the statement
// probabilities of e0, densest first.
using TrimSequence = std::vector<ComparisonGraph>;
TrimSequence trim_sequence(const ComparisonGraph& e0, const RelationSample& rs);

struct Selection {
  ComparisonGraph graph;
  bool found = false;
  double density() const { return graph.density(); }
};
// First entry with joint_prob >= threshold, else the empty graph.
Selection select_subgraph(const TrimSequence& ts, double threshold,
                          int n_treatments);

struct RankSummary {
  PairwiseProb pp;
  ComparisonGraph tilde;
  ComparisonGraph e0;
  double e0_distance = 0.0;
  TrimSequence sequence;
};
RankSummary rank_posterior(const RelationSample& rs);

std::string to_dot(const ComparisonGraph& g,
                   const std::vector<std::string>& labels);
std::string to_json(const ComparisonGraph& g,
                    const std::vector<std::string>& labels);

}  // namespace nmarank

#endif  // NMARANK_GRAPH_HPP_
