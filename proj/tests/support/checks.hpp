#ifndef NMARANK_TESTS_CHECKS_HPP_
#define NMARANK_TESTS_CHECKS_HPP_

// Criterion-sized checks shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <string>
#include <vector>

#include "nmarank/distributions.hpp"
#include "nmarank/model.hpp"

namespace checks {

// Largest |closed form - dense oracle| of the MVN log-density over random
// cases with dim <= 5.
double equicorr_max_error(int cases, std::uint64_t seed);

struct InverseCheck {
  double max_inverse_error = 0.0;
  double det_error = 0.0;
  double det = 0.0;
};
InverseCheck equicorr_inverse_check(int dim, double tau2, double corr);

// 2 * integral over (0, inf), split at 1.
double nlp_total_mass(const nmarank::NlpSpec& spec);

struct CalibrationCheck {
  double v0 = 0.0;
  double p = 0.0;
  double x0 = 0.0;
  double residual = 0.0;       // |NLP(x0) - N(x0 | 0, v0/3)|
  double mass_error = 0.0;     // |integral of the slab - 1|
  double overlap = 0.0;        // integral of min(spike, slab)
};
CalibrationCheck calibration_check(double v0);

struct DeltaCheck {
  long moves = 0;
  double max_error = 0.0;
  std::string worst;  // block of the largest error
};
// Random datasets and states; every Metropolis log ratio against the
// difference of the independent full joint.
DeltaCheck metropolis_consistency(nmarank::ModelKind kind, int states,
                                  std::uint64_t seed);

struct GirStat {
  std::string name;
  double prior_mean = 0.0;
  double prior_se = 0.0;
  double chain_mean = 0.0;
  double chain_se = 0.0;  // batch means
  double z() const;
};
// N = 3 two-arm studies on a triangle, K = 3, n_ik = 10. Prior moments come
// from `prior_draws` independent draws; the successive-conditional chain runs
// `cycles` of (one sweep, regenerate data). Statistics are light-tailed
// functions of tau2, d12 and omega0: LogN(-2.34, 2) has variance near 27 and
// the slab has no mean, so raw first moments are not estimable.
std::vector<GirStat> getting_it_right(nmarank::ModelKind kind, long cycles,
                                      long prior_draws, std::uint64_t seed,
                                      double v0 = 0.5,
                                      const nmarank::ProposalSteps& steps = {});

}  // namespace checks

#endif  // NMARANK_TESTS_CHECKS_HPP_
