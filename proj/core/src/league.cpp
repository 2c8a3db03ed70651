#include "nmarank/league.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "nmarank/error.hpp"
#include "nmarank/graph.hpp"

namespace nmarank {

std::vector<double> odds_ratio_samples(const PosteriorSamples& ps, int j,
                                       int k) {
  const int n = ps.n_treatments();
  if (j == k || j < 0 || k < 0 || j >= n || k >= n) {
    throw ConfigError("invalid treatment pair for odds ratio");
  }
  std::vector<double> out;
  out.reserve(ps.size());
  for (const Draw& d : ps.draws()) {
    const auto e = effective_values(d, ps.kind());
    out.push_back(e[k] == e[j] ? 1.0 : std::exp(e[k] - e[j]));
  }
  return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  q = std::clamp(q, 0.0, 1.0);
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

ConditionalCI conditional_credible_interval(std::span<const double> odds,
                                            long n_eq, long n_lt, long n_gt,
                                            double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (odds.empty()) throw DataError("no posterior draws");
  const double n = static_cast<double>(n_eq + n_lt + n_gt);
  ConditionalCI ci;
  ci.p_eq = n_eq / n;
  ci.p_lt = n_lt / n;
  ci.p_gt = n_gt / n;
  ci.point = std::accumulate(odds.begin(), odds.end(), 0.0) /
             static_cast<double>(odds.size());
  ci.kind = PairCounts{n_eq, n_lt, n_gt}.argmax();
  if (ci.kind == Order::Eq) {
    ci.lo = ci.hi = 1.0;
    ci.coverage = ci.p_eq;
    return ci;
  }
  std::vector<double> sorted(odds.begin(), odds.end());
  std::sort(sorted.begin(), sorted.end());
  const double half = alpha / 2.0;
  double qlo;
  double qhi;
  if (ci.kind == Order::Lt) {
    qlo = half * ci.p_lt;
    qhi = (1.0 - half) * ci.p_lt;
  } else {
    qlo = 1.0 - (1.0 - half) * ci.p_gt;
    qhi = 1.0 - half * ci.p_gt;
  }
  ci.lo = quantile_sorted(sorted, qlo);
  ci.hi = quantile_sorted(sorted, qhi);
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), ci.lo);
  const auto last = std::upper_bound(sorted.begin(), sorted.end(), ci.hi);
  ci.coverage = static_cast<double>(last - first) /
                static_cast<double>(sorted.size());
  return ci;
}

namespace {

PairCounts count_pair(const PosteriorSamples& ps, int j, int k) {
  PairCounts c;
  for (const Draw& d : ps.draws()) {
    switch (induced_relation(d, ps.kind()).at(j, k)) {
      case Order::Eq: ++c.eq; break;
      case Order::Lt: ++c.lt; break;
      case Order::Gt: ++c.gt; break;
    }
  }
  return c;
}

ConditionalCI plain_interval(std::span<const double> odds, double alpha) {
  ConditionalCI ci;
  std::vector<double> sorted(odds.begin(), odds.end());
  std::sort(sorted.begin(), sorted.end());
  ci.point = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
             static_cast<double>(sorted.size());
  ci.lo = quantile_sorted(sorted, alpha / 2.0);
  ci.hi = quantile_sorted(sorted, 1.0 - alpha / 2.0);
  ci.coverage = 1.0 - alpha;
  return ci;
}

std::string fixed2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string percent(double p) { return fixed2(100.0 * p) + "%"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ConditionalCI conditional_credible_interval(const PosteriorSamples& ps, int j,
                                            int k, double alpha) {
  const auto odds = odds_ratio_samples(ps, j, k);
  const PairCounts c = count_pair(ps, j, k);
  ConditionalCI ci = conditional_credible_interval(odds, c.eq, c.lt, c.gt, alpha);
  ci.j = j;
  ci.k = k;
  return ci;
}

LeagueTable league_table(const PosteriorSamples& ps, double alpha,
                         std::vector<std::string> names, Triangle triangle) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (ps.empty()) throw DataError("no posterior draws");
  const int n = ps.n_treatments();
  if (names.empty()) names = ps.labels();
  if (static_cast<int>(names.size()) != n) {
    throw ConfigError("league table needs one name per treatment");
  }
  const RelationSample rs(ps);
  LeagueTable t;
  t.names = std::move(names);
  t.alpha = alpha;
  t.kind = ps.kind();
  t.triangle = triangle;
  t.cells.assign(n, std::vector<std::optional<ConditionalCI>>(n));

  std::vector<double> odds(rs.size());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      if (triangle == Triangle::Upper && j > k) continue;
      if (triangle == Triangle::Lower && j < k) continue;
      PairCounts c;
      for (std::size_t s = 0; s < rs.size(); ++s) {
        const auto& e = rs.values()[s];
        odds[s] = e[k] == e[j] ? 1.0 : std::exp(e[k] - e[j]);
        switch (rs.relations()[s].at(j, k)) {
          case Order::Eq: ++c.eq; break;
          case Order::Lt: ++c.lt; break;
          case Order::Gt: ++c.gt; break;
        }
      }
      ConditionalCI ci;
      if (ps.kind() == ModelKind::GaussianEffects) {
        ci = plain_interval(odds, alpha);
        ci.kind = c.argmax();
        ci.p_lt = static_cast<double>(c.lt) / static_cast<double>(c.total());
        ci.p_gt = static_cast<double>(c.gt) / static_cast<double>(c.total());
      } else {
        ci = conditional_credible_interval(odds, c.eq, c.lt, c.gt, alpha);
      }
      ci.j = j;
      ci.k = k;
      t.cells[j][k] = ci;
    }
  }
  return t;
}

std::string LeagueTable::cell_text(int j, int k) const {
  if (j == k) return names.at(j);
  const auto& c = cells.at(j).at(k);
  if (!c) return "";
  std::string s = fixed2(c->point) + " ";
  s += c->singleton() ? "{1}" : "[" + fixed2(c->lo) + ", " + fixed2(c->hi) + "]";
  s += " (" + percent(c->p_eq) + "; " + percent(c->coverage) + ")";
  return s;
}

std::string league_to_csv(const LeagueTable& t) {
  std::string out =
      "row,column,statement,odds_ratio,lower,upper,p_eq,coverage\n";
  const int n = static_cast<int>(t.names.size());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const auto& c = t.cells[j][k];
      if (!c) continue;
      out += csv_field(t.names[j]) + "," + csv_field(t.names[k]) + ",";
      out += to_string(c->kind);
      out += "," + fixed2(c->point) + ",";
      out += c->singleton() ? "1.00,1.00" : fixed2(c->lo) + "," + fixed2(c->hi);
      out += "," + percent(c->p_eq) + "," + percent(c->coverage) + "\n";
    }
  }
  return out;
}

std::string league_to_markdown(const LeagueTable& t) {
  const int n = static_cast<int>(t.names.size());
  std::vector<std::vector<std::string>> grid(n, std::vector<std::string>(n));
  std::vector<std::size_t> width(n, 3);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      grid[j][k] = t.cell_text(j, k);
      width[k] = std::max(width[k], grid[j][k].size());
    }
  }
  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  std::string out = "|";
  for (int k = 0; k < n; ++k) out += " " + pad(t.names[k], width[k]) + " |";
  out += "\n|";
  for (int k = 0; k < n; ++k) out += std::string(width[k] + 2, '-') + "|";
  out += "\n";
  for (int j = 0; j < n; ++j) {
    out += "|";
    for (int k = 0; k < n; ++k) out += " " + pad(grid[j][k], width[k]) + " |";
    out += "\n";
  }
  return out;
}

}  // namespace nmarank
