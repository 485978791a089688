#pragma once

#include <cstdint>
#include <vector>

#include "driftflow/particles.hpp"

namespace driftflow {

struct CvmConfig {
  // Weight c of the mean penalty term. The pairwise terms alone cannot see a
  // pure translation of coincident point masses; the penalty anchors the
  // weighted means.
  double mean_penalty_weight = 10.0;
  // The yy self-term is constant in the first set's locations; optimizers
  // minimizing over those locations can drop it.
  bool include_dyy = true;
  // Squared distances below this are treated as coincident points and
  // contribute zero to value and gradient. xlog is continuous at 0 but its
  // derivative is not, so coincident particles must not produce infinities.
  double log_floor = 1e-12;
};

// z * log(z) for z >= floor, 0 below (continuous extension at 0).
// Natural log throughout; a different base only rescales the distance.
// Throws std::domain_error for negative z.
double xlog(double z, double log_floor = 1e-12);

// Cramer-von Mises distance between two Dirac mixtures:
//   D = D_yy - 2 D_xy + D_xx + c * D_E
// where each pairwise block sums w_i w_j xlog(squared distance) and D_E is
// the squared gap between the two weighted means. The sets may have
// different particle counts but must share the dimension.
double cvm_distance(const ParticleSet& x_set, const ParticleSet& y_set, const CvmConfig& cfg);

// Gradient of cvm_distance with respect to the locations of x_set,
// flattened row-major (L x D). Pairs whose squared distance falls below
// log_floor contribute zero, consistent with the clamped xlog.
std::vector<double> cvm_gradient(const ParticleSet& x_set, const ParticleSet& y_set,
                                 const CvmConfig& cfg);

// Instrumentation: pairwise terms evaluated since the last reset, on this
// thread. Lets tests pin the quadratic cost without timing noise.
std::uint64_t cvm_pair_count() noexcept;
void cvm_pair_count_reset() noexcept;

}  // namespace driftflow
