#ifndef NMARANK_POSTERIOR_HPP_
#define NMARANK_POSTERIOR_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nmarank/dataset.hpp"
#include "nmarank/model.hpp"
#include "nmarank/sampler.hpp"

namespace nmarank {

// One kept MCMC draw.
struct Draw {
  int chain = 1;        // 1-based
  long iteration = 0;   // 1-based sweep count at which the state was kept
  std::vector<double> d;  // effective d_1k, d[0] == 0
  // DP models: component label of each treatment (-1 for the reference).
  std::vector<int> cluster;
  // DP Spike-Slab: spike indicator of each treatment's component; the
  // reference is always in the zero class and reported as true.
  std::vector<char> spike;
  double tau2 = 0.0;
  std::optional<double> omega0;

  friend bool operator==(const Draw&, const Draw&) = default;
};

struct ChainReport {
  int chain = 1;
  AcceptanceStats acceptance;  // post-burn-in proposals only
  ProposalSteps steps;         // steps in effect after burn-in
};

// Immutable store of kept draws, chains concatenated in chain order.
class PosteriorSamples {
 public:
  PosteriorSamples(ModelKind kind, int n_treatments, std::vector<Draw> draws,
                   std::vector<std::string> labels = {},
                   std::vector<ChainReport> chains = {});

  ModelKind kind() const { return kind_; }
  int n_treatments() const { return n_treatments_; }
  std::size_t size() const { return draws_.size(); }
  bool empty() const { return draws_.empty(); }
  const std::vector<Draw>& draws() const { return draws_; }
  const Draw& operator[](std::size_t i) const { return draws_[i]; }
  // Treatment names ("1".."K" when none were supplied).
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<ChainReport>& chains() const { return chains_; }

 private:
  ModelKind kind_;
  int n_treatments_;
  std::vector<Draw> draws_;
  std::vector<std::string> labels_;
  std::vector<ChainReport> chains_;
};

Draw record_draw(const Sampler& sampler, const ChainState& state, int chain,
                 long iteration);

// Runs mc.chains independent chains (in parallel on up to mc.jobs threads)
// and keeps every thin-th sweep after burn-in: floor((iterations - burn_in)
// / thin) draws per chain. Output is identical for any jobs value.
PosteriorSamples run_chains(const Dataset& data, const PriorConfig& prior,
                            const McmcConfig& mc, ModelKind kind);

// JSON-lines: {"chain","iter","model","d","spike","cluster","tau2","omega0"}
// with doubles printed to 17 significant digits.
void write_jsonl(std::ostream& out, const PosteriorSamples& samples);
// Throws DataError on malformed input or an empty file.
PosteriorSamples read_jsonl(std::istream& in,
                            std::vector<std::string> labels = {});

// "%.17g" formatting shared by all writers.
std::string format_double(double value);

}  // namespace nmarank

#endif  // NMARANK_POSTERIOR_HPP_
