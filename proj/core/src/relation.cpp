#include "nmarank/relation.hpp"

#include "nmarank/error.hpp"

namespace nmarank {

const char* to_string(Order o) {
  switch (o) {
    case Order::Eq: return "eq";
    case Order::Lt: return "lt";
    case Order::Gt: return "gt";
  }
  return "?";
}

std::pair<int, int> pair_at(std::size_t index, int n) {
  for (int j = 0; j < n - 1; ++j) {
    const std::size_t row = static_cast<std::size_t>(n - j - 1);
    if (index < row) return {j, j + 1 + static_cast<int>(index)};
    index -= row;
  }
  throw std::out_of_range("pair index out of range");
}

Relation::Relation(int n_treatments, std::vector<Order> orders)
    : n_(n_treatments), orders_(std::move(orders)) {
  if (orders_.size() != n_pairs(n_)) {
    throw std::invalid_argument("relation: wrong number of pairs");
  }
}

Order Relation::at(int j, int k) const {
  if (j < k) return orders_[pair_index(j, k, n_)];
  return flip(orders_[pair_index(k, j, n_)]);
}

Relation Relation::from_classes(std::span<const double> values,
                                std::span<const int> classes) {
  const int n = static_cast<int>(values.size());
  std::vector<Order> orders;
  orders.reserve(n_pairs(n));
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      if (classes[j] == classes[k]) {
        orders.push_back(Order::Eq);
      } else if (values[j] < values[k] ||
                 (values[j] == values[k] && classes[j] < classes[k])) {
        orders.push_back(Order::Lt);
      } else {
        orders.push_back(Order::Gt);
      }
    }
  }
  return Relation(n, std::move(orders));
}

Relation Relation::from_values(std::span<const double> values) {
  std::vector<int> classes(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    classes[k] = static_cast<int>(k);
    for (std::size_t j = 0; j < k; ++j) {
      if (values[j] == values[k]) {
        classes[k] = classes[j];
        break;
      }
    }
  }
  return from_classes(values, classes);
}

std::vector<double> effective_values(const Draw& draw, ModelKind kind) {
  std::vector<double> e = draw.d;
  e[0] = 0.0;
  if (kind == ModelKind::DpSpikeSlab) {
    for (std::size_t k = 1; k < e.size(); ++k) {
      if (draw.spike[k]) e[k] = 0.0;
    }
  }
  return e;
}

namespace {

constexpr int kZeroClass = -1;

// Component of treatment k; without stored labels, exact equality of the
// stored atom values identifies the component.
int component_of(const Draw& draw, std::size_t k) {
  if (!draw.cluster.empty()) return draw.cluster[k];
  for (std::size_t j = 1; j < k; ++j) {
    if (draw.d[j] == draw.d[k]) return static_cast<int>(j);
  }
  return static_cast<int>(k);
}

}  // namespace

Relation induced_relation(const Draw& draw, ModelKind kind) {
  const std::vector<double> e = effective_values(draw, kind);
  const std::size_t K = e.size();
  std::vector<int> classes(K);
  classes[0] = kZeroClass;
  for (std::size_t k = 1; k < K; ++k) {
    switch (kind) {
      case ModelKind::GaussianEffects:
        classes[k] = static_cast<int>(k);
        break;
      case ModelKind::DpGaussian:
        classes[k] = component_of(draw, k);
        break;
      case ModelKind::DpSpikeSlab:
        classes[k] = draw.spike[k] ? kZeroClass : component_of(draw, k);
        break;
    }
  }
  return Relation::from_classes(e, classes);
}

RelationSample::RelationSample(const PosteriorSamples& samples)
    : kind_(samples.kind()), n_(samples.n_treatments()) {
  relations_.reserve(samples.size());
  values_.reserve(samples.size());
  for (const Draw& d : samples.draws()) {
    relations_.push_back(induced_relation(d, kind_));
    values_.push_back(effective_values(d, kind_));
  }
}

RelationSample::RelationSample(ModelKind kind, int n_treatments,
                               std::vector<Relation> relations,
                               std::vector<std::vector<double>> values)
    : kind_(kind),
      n_(n_treatments),
      relations_(std::move(relations)),
      values_(std::move(values)) {
  for (const auto& r : relations_) {
    if (r.n_treatments() != n_) {
      throw DataError("relation sample: inconsistent treatment count");
    }
  }
}

std::map<Relation, long> RelationSample::distinct() const {
  std::map<Relation, long> out;
  for (const auto& r : relations_) ++out[r];
  return out;
}

}  // namespace nmarank
