#include "nmarank/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>

#include "nmarank/error.hpp"

namespace nmarank {

Order PairCounts::argmax() const {
  if (eq >= lt && eq >= gt) return Order::Eq;
  return lt >= gt ? Order::Lt : Order::Gt;
}

PairwiseProb::PairwiseProb(int n_treatments, std::vector<PairCounts> counts)
    : n_(n_treatments), draws_(0), counts_(std::move(counts)) {
  if (counts_.size() != n_pairs(n_)) {
    throw DataError("pairwise counts: wrong number of pairs");
  }
  if (!counts_.empty()) draws_ = counts_.front().total();
  for (const auto& c : counts_) {
    if (c.total() != draws_ || draws_ <= 0) {
      throw DataError("pairwise counts: inconsistent draw totals");
    }
  }
}

const PairCounts& PairwiseProb::counts(int j, int k) const {
  return counts_.at(pair_index(j, k, n_));
}

double PairwiseProb::prob(int j, int k, Order o) const {
  if (j > k) return prob(k, j, flip(o));
  return static_cast<double>(counts(j, k).count(o)) /
         static_cast<double>(draws_);
}

Order PairwiseProb::dominant(int j, int k) const {
  if (j > k) return flip(dominant(k, j));
  return counts(j, k).argmax();
}

double PairwiseProb::max_prob(int j, int k) const {
  return prob(j, k, dominant(j, k));
}

PairwiseProb pairwise_probabilities(const RelationSample& rs) {
  if (rs.size() == 0) throw DataError("no posterior draws");
  const int n = rs.n_treatments();
  std::vector<PairCounts> counts(n_pairs(n));
  for (const Relation& r : rs.relations()) {
    const auto& o = r.orders();
    for (std::size_t p = 0; p < o.size(); ++p) {
      switch (o[p]) {
        case Order::Eq: ++counts[p].eq; break;
        case Order::Lt: ++counts[p].lt; break;
        case Order::Gt: ++counts[p].gt; break;
      }
    }
  }
  return PairwiseProb(n, std::move(counts));
}

ComparisonGraph::ComparisonGraph(int n_treatments)
    : n_(n_treatments), stmt_(n_pairs(n_treatments)), prob_(n_pairs(n_treatments), 0.0) {}

ComparisonGraph ComparisonGraph::from_relation(const Relation& r,
                                               const PairwiseProb& pp) {
  ComparisonGraph g(r.n_treatments());
  for (int j = 0; j < g.n_; ++j) {
    for (int k = j + 1; k < g.n_; ++k) {
      const Order o = r.at(j, k);
      g.set(j, k, o, pp.prob(j, k, o));
    }
  }
  return g;
}

ComparisonGraph ComparisonGraph::from_edges(
    int n_treatments, const std::vector<std::pair<int, int>>& edges) {
  ComparisonGraph g(n_treatments);
  std::vector<char> fwd(n_pairs(n_treatments), 0);
  std::vector<char> back(n_pairs(n_treatments), 0);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_treatments || b >= n_treatments) {
      throw DataError("graph edge refers to an unknown treatment");
    }
    if (a == b) throw DataError("graph edge is a self-loop");
    if (a < b) {
      fwd[pair_index(a, b, n_treatments)] = 1;
    } else {
      back[pair_index(b, a, n_treatments)] = 1;
    }
  }
  for (std::size_t p = 0; p < fwd.size(); ++p) {
    if (fwd[p] && back[p]) {
      g.stmt_[p] = Order::Eq;
    } else if (fwd[p]) {
      g.stmt_[p] = Order::Lt;
    } else if (back[p]) {
      g.stmt_[p] = Order::Gt;
    }
  }
  return g;
}

std::optional<Order> ComparisonGraph::statement(int j, int k) const {
  if (j > k) {
    auto s = statement(k, j);
    if (s) return flip(*s);
    return s;
  }
  return stmt_[pair_index(j, k, n_)];
}

double ComparisonGraph::prob(int j, int k) const {
  if (j > k) std::swap(j, k);
  return prob_[pair_index(j, k, n_)];
}

void ComparisonGraph::set(int j, int k, Order o, double prob) {
  if (j > k) {
    std::swap(j, k);
    o = flip(o);
  }
  const std::size_t p = pair_index(j, k, n_);
  stmt_[p] = o;
  prob_[p] = prob;
}

void ComparisonGraph::clear(int j, int k) {
  if (j > k) std::swap(j, k);
  const std::size_t p = pair_index(j, k, n_);
  stmt_[p].reset();
  prob_[p] = 0.0;
}

std::size_t ComparisonGraph::size() const {
  return static_cast<std::size_t>(
      std::count_if(stmt_.begin(), stmt_.end(), [](auto& s) { return s.has_value(); }));
}

double ComparisonGraph::density() const {
  if (stmt_.empty()) return 0.0;
  return static_cast<double>(size()) / static_cast<double>(stmt_.size());
}

std::vector<std::pair<int, int>> ComparisonGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t p = 0; p < stmt_.size(); ++p) {
    if (!stmt_[p]) continue;
    auto [j, k] = pair_at(p, n_);
    if (*stmt_[p] != Order::Gt) out.emplace_back(j, k);
    if (*stmt_[p] != Order::Lt) out.emplace_back(k, j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ComparisonGraph::satisfied_by(const Relation& r) const {
  const auto& o = r.orders();
  for (std::size_t p = 0; p < stmt_.size(); ++p) {
    if (stmt_[p] && *stmt_[p] != o[p]) return false;
  }
  return true;
}

Relation ComparisonGraph::as_relation() const {
  if (!complete()) throw DataError("graph is not complete");
  std::vector<Order> o;
  o.reserve(stmt_.size());
  for (const auto& s : stmt_) o.push_back(*s);
  return Relation(n_, std::move(o));
}

bool ComparisonGraph::has_bidirectional() const {
  return std::any_of(stmt_.begin(), stmt_.end(),
                     [](auto& s) { return s == Order::Eq; });
}

ComparisonGraph build_initial_graph(const PairwiseProb& pp) {
  const int n = pp.n_treatments();
  ComparisonGraph g(n);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      g.set(j, k, pp.dominant(j, k), pp.max_prob(j, k));
    }
  }
  return g;
}

bool is_coherent(const ComparisonGraph& g) {
  if (!g.complete()) throw DataError("coherence check needs a complete graph");
  const int n = g.n_treatments();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      if (g.statement(j, k) == Order::Eq) parent[find(j)] = find(k);
    }
  }
  // Directed edges between classes; every cross pair must agree.
  std::vector<int> cls(n);
  for (int j = 0; j < n; ++j) cls[j] = find(j);
  std::vector<std::vector<int>> dir(n, std::vector<int>(n, 0));
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const Order o = *g.statement(j, k);
      const int a = cls[j];
      const int b = cls[k];
      if (a == b) {
        if (o != Order::Eq) return false;
        continue;
      }
      const int from = o == Order::Lt ? a : b;
      const int to = o == Order::Lt ? b : a;
      if (dir[to][from]) return false;
      dir[from][to] = 1;
    }
  }
  // Kahn's algorithm on the quotient.
  std::vector<int> indeg(n, 0);
  std::vector<int> roots;
  for (int a = 0; a < n; ++a) {
    if (cls[a] != a) continue;
    roots.push_back(a);
    for (int b = 0; b < n; ++b) indeg[b] += dir[a][b];
  }
  std::vector<int> ready;
  for (int a : roots) {
    if (indeg[a] == 0) ready.push_back(a);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const int a = ready.back();
    ready.pop_back();
    ++seen;
    for (int b = 0; b < n; ++b) {
      if (dir[a][b] && --indeg[b] == 0) ready.push_back(b);
    }
  }
  return seen == roots.size();
}

int statement_score(Order a, Order b) {
  if (a == b) return 0;
  if (a == Order::Eq || b == Order::Eq) return 1;
  return 2;
}

namespace {

// Distance times the number of draws. Integer, so ties are exact.
long distance_units(const ComparisonGraph& tilde, const Relation& cand,
                    const PairwiseProb& pp) {
  const int n = tilde.n_treatments();
  long units = 0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const auto t = tilde.statement(j, k);
      if (!t) throw DataError("distance needs a complete reference graph");
      const int s = statement_score(*t, cand.at(j, k));
      if (s) units += pp.counts(j, k).count(pp.dominant(j, k)) * s;
    }
  }
  return units;
}

}  // namespace

double graph_distance(const ComparisonGraph& tilde, const Relation& cand,
                      const PairwiseProb& pp) {
  return static_cast<double>(distance_units(tilde, cand, pp)) /
         static_cast<double>(pp.draws());
}

double joint_probability(const ComparisonGraph& g, const RelationSample& rs) {
  if (rs.size() == 0) throw DataError("no posterior draws");
  long hits = 0;
  for (const Relation& r : rs.relations()) hits += g.satisfied_by(r) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(rs.size());
}

ComparisonGraph closest_coherent(const ComparisonGraph& tilde,
                                 const PairwiseProb& pp,
                                 const RelationSample& rs) {
  const auto support = rs.distinct();
  if (support.empty()) throw DataError("no posterior draws");
  const double total = static_cast<double>(rs.size());

  const Relation* best = nullptr;
  long best_dist = 0;
  long best_count = 0;
  std::vector<std::pair<int, int>> best_edges;
  for (const auto& [rel, count] : support) {
    const long dist = distance_units(tilde, rel, pp);
    bool take = best == nullptr || dist < best_dist ||
                (dist == best_dist && count > best_count);
    std::vector<std::pair<int, int>> edges;
    if (!take && dist == best_dist && count == best_count) {
      edges = ComparisonGraph::from_relation(rel, pp).edges();
      take = edges < best_edges;
    }
    if (take) {
      best = &rel;
      best_dist = dist;
      best_count = count;
      best_edges = edges.empty() ? ComparisonGraph::from_relation(rel, pp).edges()
                                 : std::move(edges);
    }
  }
  ComparisonGraph e0 = ComparisonGraph::from_relation(*best, pp);
  e0.joint_prob = static_cast<double>(best_count) / total;
  e0.gamma = 0.0;
  return e0;
}

ComparisonGraph trimmed_graph(const ComparisonGraph& e0, double gamma,
                              const RelationSample& rs) {
  const int n = e0.n_treatments();
  ComparisonGraph g(n);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const auto s = e0.statement(j, k);
      if (s && e0.prob(j, k) > gamma) g.set(j, k, *s, e0.prob(j, k));
    }
  }
  g.gamma = gamma;
  g.joint_prob = joint_probability(g, rs);
  return g;
}

TrimSequence trim_sequence(const ComparisonGraph& e0, const RelationSample& rs) {
  const int n = e0.n_treatments();
  std::set<double> grid{0.0};
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      if (e0.statement(j, k)) grid.insert(e0.prob(j, k));
    }
  }
  TrimSequence out;
  for (double gamma : grid) {
    ComparisonGraph g = trimmed_graph(e0, gamma, rs);
    if (g.size() == 0) break;
    if (!out.empty() && out.back() == g) continue;
    out.push_back(std::move(g));
  }
  return out;
}

Selection select_subgraph(const TrimSequence& ts, double threshold,
                          int n_treatments) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ConfigError("selection threshold must lie in (0, 1]");
  }
  for (const auto& g : ts) {
    if (g.joint_prob >= threshold) return {g, true};
  }
  Selection none{ComparisonGraph(n_treatments), false};
  none.graph.joint_prob = 1.0;
  return none;
}

RankSummary rank_posterior(const RelationSample& rs) {
  PairwiseProb pp = pairwise_probabilities(rs);
  ComparisonGraph tilde = build_initial_graph(pp);
  tilde.joint_prob = joint_probability(tilde, rs);
  ComparisonGraph e0 = closest_coherent(tilde, pp, rs);
  const double dist = graph_distance(tilde, e0.as_relation(), pp);
  TrimSequence seq = trim_sequence(e0, rs);
  return RankSummary{std::move(pp), std::move(tilde), std::move(e0), dist,
                     std::move(seq)};
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string to_dot(const ComparisonGraph& g,
                   const std::vector<std::string>& labels) {
  const int n = g.n_treatments();
  std::string out = "digraph comparisons {\n";
  for (int j = 0; j < n; ++j) out += "  " + quoted(labels.at(j)) + ";\n";
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const auto s = g.statement(j, k);
      if (!s) continue;
      const int from = *s == Order::Gt ? k : j;
      const int to = *s == Order::Gt ? j : k;
      out += "  " + quoted(labels.at(from)) + " -> " + quoted(labels.at(to));
      out += *s == Order::Eq ? " [dir=both, style=solid" : " [style=dashed";
      out += ", label=\"" + fixed2(g.prob(j, k)) + "\"];\n";
    }
  }
  out += "}\n";
  return out;
}

std::string to_json(const ComparisonGraph& g,
                    const std::vector<std::string>& labels) {
  using nlohmann::ordered_json;
  const int n = g.n_treatments();
  ordered_json j;
  j["nodes"] = ordered_json::array();
  for (int k = 0; k < n; ++k) j["nodes"].push_back(labels.at(k));
  j["edges"] = ordered_json::array();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const auto s = g.statement(a, b);
      if (!s) continue;
      const int from = *s == Order::Gt ? b : a;
      const int to = *s == Order::Gt ? a : b;
      j["edges"].push_back({{"from", labels.at(from)},
                            {"to", labels.at(to)},
                            {"kind", *s == Order::Eq ? "eq" : "lt"},
                            {"prob", g.prob(a, b)}});
    }
  }
  j["joint_prob"] = g.joint_prob;
  j["gamma"] = g.gamma;
  return j.dump(2) + "\n";
}

}  // namespace nmarank
