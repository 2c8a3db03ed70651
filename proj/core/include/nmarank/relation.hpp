#ifndef NMARANK_RELATION_HPP_
#define NMARANK_RELATION_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "nmarank/model.hpp"
#include "nmarank/posterior.hpp"

namespace nmarank {

// Statement about an unordered pair {j, k}, j < k.
enum class Order : std::uint8_t { Eq = 0, Lt = 1, Gt = 2 };

const char* to_string(Order o);
inline Order flip(Order o) {
  return o == Order::Lt ? Order::Gt : o == Order::Gt ? Order::Lt : Order::Eq;
}

// Index of pair (j, k), j < k, in the row-major upper triangle of a K x K
// matrix.
inline std::size_t pair_index(int j, int k, int n) {
  return static_cast<std::size_t>(j) * (2 * n - j - 1) / 2 + (k - j - 1);
}
inline std::size_t n_pairs(int n) {
  return static_cast<std::size_t>(n) * (n - 1) / 2;
}
// Inverse of pair_index.
std::pair<int, int> pair_at(std::size_t index, int n);

// Complete, coherent comparison of K treatments: one Order per pair.
class Relation {
 public:
  Relation() = default;
  Relation(int n_treatments, std::vector<Order> orders);

  // Total preorder induced by values: equal class ids are EQ, otherwise the
  // smaller value is LT (ties in value between different classes are broken
  // by class id, so the result is always coherent).
  static Relation from_classes(std::span<const double> values,
                               std::span<const int> classes);
  // Classes from exact equality of values.
  static Relation from_values(std::span<const double> values);

  int n_treatments() const { return n_; }
  Order at(int j, int k) const;  // any j != k
  const std::vector<Order>& orders() const { return orders_; }

  friend bool operator==(const Relation&, const Relation&) = default;
  friend auto operator<=>(const Relation& a, const Relation& b) {
    return a.orders_ <=> b.orders_;
  }

 private:
  int n_ = 0;
  std::vector<Order> orders_;
};

// Effective comparison values and the relation they induce for one draw.
//  GaussianEffects: no ties; e_k = d_1k.
//  DpGaussian: EQ iff same component (treatment 1 is never tied).
//  DpSpikeSlab: treatment 1 and every spike-flagged treatment form one class
//    with value 0; slab treatments are EQ iff they share a component.
std::vector<double> effective_values(const Draw& draw, ModelKind kind);
Relation induced_relation(const Draw& draw, ModelKind kind);

// Induced relations of every draw, computed once and shared by the graph
// and interval summaries.
class RelationSample {
 public:
  explicit RelationSample(const PosteriorSamples& samples);
  RelationSample(ModelKind kind, int n_treatments,
                 std::vector<Relation> relations,
                 std::vector<std::vector<double>> values = {});

  ModelKind kind() const { return kind_; }
  int n_treatments() const { return n_; }
  std::size_t size() const { return relations_.size(); }
  const std::vector<Relation>& relations() const { return relations_; }
  // Per-draw effective values (empty when constructed from relations only).
  const std::vector<std::vector<double>>& values() const { return values_; }
  // Distinct relations with their draw counts.
  std::map<Relation, long> distinct() const;

 private:
  ModelKind kind_;
  int n_;
  std::vector<Relation> relations_;
  std::vector<std::vector<double>> values_;
};

}  // namespace nmarank

#endif  // NMARANK_RELATION_HPP_
