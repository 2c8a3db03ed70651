#ifndef NMARANK_DATASET_HPP_
#define NMARANK_DATASET_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmarank {

// Treatments are indexed 0..K-1 internally; index 0 is always the reference
// treatment (d_11 = 0). User-facing output goes through Dataset::label().
using Treatment = int;

struct Arm {
  Treatment treatment = 0;
  int events = 0;  // y_ik
  int trials = 0;  // n_ik

  friend bool operator==(const Arm&, const Arm&) = default;
};

struct Study {
  std::string id;
  std::vector<Arm> arms;  // sorted by treatment index, distinct treatments
  Treatment baseline = 0;

  // Position of the baseline arm within `arms`.
  std::size_t baseline_arm() const;
  // t_i: number of treatments contrasted against the baseline.
  std::size_t n_contrasts() const { return arms.size() - 1; }
  bool contains(Treatment k) const;

  friend bool operator==(const Study&, const Study&) = default;
};

// Immutable after construction. The constructor enforces every per-study
// invariant (>= 2 arms, distinct treatments, baseline among the arms,
// 0 <= events <= trials, trials > 0) and that every treatment appears in at
// least one study. Connectivity is reported by validate_network().
class Dataset {
 public:
  Dataset(std::vector<Study> studies, std::vector<std::string> labels);

  const std::vector<Study>& studies() const { return studies_; }
  std::size_t n_studies() const { return studies_.size(); }
  int n_treatments() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Treatment k) const { return labels_.at(k); }
  std::optional<Treatment> find(std::string_view label) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Study> studies_;
  std::vector<std::string> labels_;
};

struct ParseOptions {
  // Label of the reference treatment; defaults to the label on the first
  // data row.
  std::optional<std::string> reference;
  // When non-empty, the closed set of admissible treatment labels. Rows
  // naming anything else are rejected, and every listed label must occur.
  std::vector<std::string> treatments;
  // Templates (networks without outcomes) omit the `events` column; events
  // are then filled with 0.
  bool require_outcomes = true;
};

// Parses `study_id,treatment,events,total[,baseline]` CSV (header required,
// columns matched by name, LF or CRLF). Throws DataError with a line number.
Dataset parse_dataset(std::string_view text, const ParseOptions& options = {});
Dataset read_dataset(const std::filesystem::path& path,
                     const ParseOptions& options = {});

// Inverse of parse_dataset. The baseline column is always written so that
// re-parsing restores the same baselines.
std::string to_csv(const Dataset& data);

struct NetworkSummary {
  std::vector<long> sample_size;             // per treatment, sum of n_ik
  std::vector<std::vector<int>> pair_counts;  // K x K, symmetric, zero diagonal
  bool connected = false;
  int multi_arm_studies = 0;

  int pair_count(Treatment j, Treatment k) const { return pair_counts[j][k]; }
};

NetworkSummary validate_network(const Dataset& data);

}  // namespace nmarank

#endif  // NMARANK_DATASET_HPP_
