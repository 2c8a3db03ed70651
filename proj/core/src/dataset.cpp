#include "nmarank/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "nmarank/error.hpp"

namespace nmarank {

std::size_t Study::baseline_arm() const {
  for (std::size_t a = 0; a < arms.size(); ++a) {
    if (arms[a].treatment == baseline) return a;
  }
  throw DataError("study " + id + ": baseline not among arms");
}

bool Study::contains(Treatment k) const {
  return std::any_of(arms.begin(), arms.end(),
                     [k](const Arm& a) { return a.treatment == k; });
}

Dataset::Dataset(std::vector<Study> studies, std::vector<std::string> labels)
    : studies_(std::move(studies)), labels_(std::move(labels)) {
  const int K = n_treatments();
  if (K < 2) throw DataError("dataset requires at least 2 treatments");
  std::vector<bool> seen(K, false);
  for (const Study& s : studies_) {
    if (s.arms.size() < 2) {
      throw DataError("study " + s.id + ": study requires >=2 arms");
    }
    for (std::size_t a = 0; a < s.arms.size(); ++a) {
      const Arm& arm = s.arms[a];
      if (arm.treatment < 0 || arm.treatment >= K) {
        throw DataError("study " + s.id + ": treatment index out of range");
      }
      if (a > 0 && s.arms[a - 1].treatment >= arm.treatment) {
        throw DataError("study " + s.id +
                        ": arms must have distinct treatments in order");
      }
      if (arm.trials <= 0) {
        throw DataError("study " + s.id + ": trials must be positive");
      }
      if (arm.events < 0) {
        throw DataError("study " + s.id + ": events must be nonnegative");
      }
      if (arm.events > arm.trials) {
        throw DataError("study " + s.id + ": events exceed trials");
      }
      seen[arm.treatment] = true;
    }
    if (!s.contains(s.baseline)) {
      throw DataError("study " + s.id + ": baseline not among arms");
    }
  }
  for (int k = 0; k < K; ++k) {
    if (!seen[k]) {
      throw DataError("treatment " + labels_[k] + " appears in no study");
    }
  }
}

std::optional<Treatment> Dataset::find(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Treatment>(it - labels_.begin());
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits one CSV record. Double-quoted fields may contain commas; "" is an
// escaped quote.
std::vector<std::string> split_record(std::string_view line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      if (!trim(cur).empty()) {
        throw DataError("line " + std::to_string(line_no) +
                        ": malformed row (stray quote)");
      }
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) {
    throw DataError("line " + std::to_string(line_no) +
                    ": malformed row (unterminated quote)");
  }
  fields.push_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

int parse_int(const std::string& field, const char* what, int line_no) {
  int value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw DataError("line " + std::to_string(line_no) +
                    ": malformed row (" + what + " is not an integer: '" +
                    field + "')");
  }
  return value;
}

bool is_integer_label(const std::string& s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

// Reference first, then the remaining labels ascending. Purely numeric label
// sets are ordered by value so that "10" follows "9".
std::vector<std::string> order_labels(std::set<std::string> labels,
                                      const std::string& reference) {
  labels.erase(reference);
  std::vector<std::string> rest(labels.begin(), labels.end());
  const bool numeric =
      is_integer_label(reference) &&
      std::all_of(rest.begin(), rest.end(), is_integer_label);
  if (numeric) {
    std::sort(rest.begin(), rest.end(),
              [](const std::string& a, const std::string& b) {
                return std::stol(a) < std::stol(b);
              });
  }
  std::vector<std::string> out{reference};
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

struct RawRow {
  int line = 0;
  std::string study;
  std::string treatment;
  int events = 0;
  int trials = 0;
  int baseline_flag = 0;
};

}  // namespace

Dataset parse_dataset(std::string_view text, const ParseOptions& options) {
  std::vector<std::string_view> lines;
  {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      lines.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
  }
  std::size_t li = 0;
  while (li < lines.size() && trim(lines[li]).empty()) ++li;
  if (li == lines.size()) throw DataError("empty input: header required");

  // Header.
  std::string_view header_line = lines[li];
  if (header_line.substr(0, 3) == "\xEF\xBB\xBF") header_line.remove_prefix(3);
  const auto header = split_record(header_line, static_cast<int>(li + 1));
  auto column = [&](std::string_view name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_study = column("study_id");
  const int c_treat = column("treatment");
  const int c_events = column("events");
  const int c_total = column("total");
  const int c_base = column("baseline");
  if (c_study < 0 || c_treat < 0 || c_total < 0 ||
      (options.require_outcomes && c_events < 0)) {
    throw DataError(
        "line " + std::to_string(li + 1) +
        ": header must contain study_id,treatment,events,total[,baseline]");
  }

  std::vector<RawRow> rows;
  for (++li; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const int line_no = static_cast<int>(li + 1);
    const auto f = split_record(lines[li], line_no);
    if (f.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) +
                      ": malformed row (expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(f.size()) + ")");
    }
    RawRow r;
    r.line = line_no;
    r.study = f[c_study];
    r.treatment = f[c_treat];
    if (r.study.empty() || r.treatment.empty()) {
      throw DataError("line " + std::to_string(line_no) +
                      ": malformed row (empty study_id or treatment)");
    }
    r.events = c_events >= 0 ? parse_int(f[c_events], "events", line_no) : 0;
    r.trials = parse_int(f[c_total], "total", line_no);
    if (c_base >= 0) {
      r.baseline_flag = parse_int(f[c_base], "baseline", line_no);
      if (r.baseline_flag != 0 && r.baseline_flag != 1) {
        throw DataError("line " + std::to_string(line_no) +
                        ": malformed row (baseline must be 0 or 1)");
      }
    }
    if (r.events < 0) {
      throw DataError("line " + std::to_string(line_no) +
                      ": events must be nonnegative");
    }
    if (r.trials <= 0) {
      throw DataError("line " + std::to_string(line_no) +
                      ": total must be positive");
    }
    if (r.events > r.trials) {
      throw DataError("line " + std::to_string(line_no) +
                      ": events exceed trials");
    }
    if (!options.treatments.empty() &&
        std::find(options.treatments.begin(), options.treatments.end(),
                  r.treatment) == options.treatments.end()) {
      throw DataError("line " + std::to_string(line_no) +
                      ": unknown treatment label '" + r.treatment + "'");
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw DataError("no data rows");

  std::set<std::string> label_set;
  for (const auto& r : rows) label_set.insert(r.treatment);
  for (const auto& t : options.treatments) {
    if (!label_set.count(t)) {
      throw DataError("declared treatment '" + t + "' appears in no study");
    }
  }
  const std::string reference =
      options.reference.value_or(rows.front().treatment);
  if (!label_set.count(reference)) {
    throw DataError("reference treatment '" + reference +
                    "' appears in no study");
  }
  std::vector<std::string> labels = order_labels(label_set, reference);
  std::map<std::string, Treatment> index;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    index[labels[k]] = static_cast<Treatment>(k);
  }

  // Group by study in order of first appearance.
  std::vector<std::string> study_order;
  std::map<std::string, std::vector<const RawRow*>> by_study;
  for (const auto& r : rows) {
    auto [it, inserted] = by_study.try_emplace(r.study);
    if (inserted) study_order.push_back(r.study);
    for (const RawRow* prev : it->second) {
      if (prev->treatment == r.treatment) {
        throw DataError("line " + std::to_string(r.line) +
                        ": duplicate (study, treatment) pair (" + r.study +
                        ", " + r.treatment + ")");
      }
    }
    it->second.push_back(&r);
  }

  std::vector<Study> studies;
  studies.reserve(study_order.size());
  for (const auto& sid : study_order) {
    const auto& group = by_study[sid];
    if (group.size() < 2) {
      throw DataError("line " + std::to_string(group.front()->line) +
                      ": study " + sid + " requires >=2 arms");
    }
    Study s;
    s.id = sid;
    std::optional<Treatment> flagged;
    for (const RawRow* r : group) {
      const Treatment k = index.at(r->treatment);
      s.arms.push_back(Arm{k, r->events, r->trials});
      if (r->baseline_flag == 1) {
        if (flagged) {
          throw DataError("line " + std::to_string(r->line) + ": study " +
                          sid + " has more than one baseline");
        }
        flagged = k;
      }
    }
    std::sort(s.arms.begin(), s.arms.end(),
              [](const Arm& a, const Arm& b) { return a.treatment < b.treatment; });
    s.baseline = flagged.value_or(s.arms.front().treatment);
    studies.push_back(std::move(s));
  }
  return Dataset(std::move(studies), std::move(labels));
}

Dataset read_dataset(const std::filesystem::path& path,
                     const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), options);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos &&
      trim(s).size() == s.size()) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_csv(const Dataset& data) {
  std::string out = "study_id,treatment,events,total,baseline\n";
  for (const Study& s : data.studies()) {
    for (const Arm& a : s.arms) {
      out += csv_field(s.id);
      out += ',';
      out += csv_field(data.label(a.treatment));
      out += ',' + std::to_string(a.events) + ',' + std::to_string(a.trials) +
             ',' + (a.treatment == s.baseline ? "1" : "0") + '\n';
    }
  }
  return out;
}

NetworkSummary validate_network(const Dataset& data) {
  const int K = data.n_treatments();
  NetworkSummary out;
  out.sample_size.assign(K, 0);
  out.pair_counts.assign(K, std::vector<int>(K, 0));

  std::vector<int> parent(K);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  for (const Study& s : data.studies()) {
    if (s.arms.size() > 2) ++out.multi_arm_studies;
    for (std::size_t a = 0; a < s.arms.size(); ++a) {
      out.sample_size[s.arms[a].treatment] += s.arms[a].trials;
      for (std::size_t b = a + 1; b < s.arms.size(); ++b) {
        const int j = s.arms[a].treatment;
        const int k = s.arms[b].treatment;
        ++out.pair_counts[j][k];
        ++out.pair_counts[k][j];
        parent[root(j)] = root(k);
      }
    }
  }
  const int r0 = root(0);
  out.connected = true;
  for (int k = 1; k < K; ++k) {
    if (root(k) != r0) out.connected = false;
  }
  return out;
}

}  // namespace nmarank
