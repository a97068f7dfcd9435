#pragma once

// Brute-force references for qubit problems. Slow and simple by design; every
// value is a lower bound on the corresponding maximum.

#include "qcap/quantum.hpp"

#include <array>
#include <string>
#include <vector>

namespace qcap::oracles {

/// Lipschitz slack per unit grid step, in bits per radian or per unit Bloch
/// length; engine results must be >= oracle - 2 * step * slack.
inline constexpr double kAngleSlack = 1.0;
inline constexpr double kBlochSlack = 2.0;

struct MeasurementGridResult {
  double value = 0.0;
  std::vector<std::array<double, 3>> directions;  // Bloch vectors of the best
  bool trine_family = false;
};

/// Max of I(X;Y) over projective measurements (two angles, exhaustive on the
/// step grid) and symmetric three-outcome rank-one POVMs (three angles,
/// coarse grid refined down to `step`). Qubit ensembles only.
MeasurementGridResult grid_accessible_info_2d(const Ensemble& ens, double step);

enum class DensityObjective { MutualInformation, CoherentInformation, RhoObjective };
DensityObjective parse_density_objective(const std::string& name);
const char* to_string(DensityObjective f);

struct DensityGridResult {
  double value = 0.0;
  DensityMatrix rho;
};

/// Bloch-ball grid maximization: coarse cubic grid, then the best cells are
/// refined until the spacing reaches `step`. Points outside the ball are
/// pulled onto the sphere. `tau` is used by RhoObjective only.
DensityGridResult grid_density_objective(const QuantumChannel& ch,
                                         DensityObjective f, double step,
                                         const HermitianMatrix* tau = nullptr);

struct SimplexGridResult {
  double value = 0.0;
  std::vector<double> p;
};

/// Exhaustive grid over the probability simplex (spacing 1/round(1/step)) of
/// chi of {p_i, N(v_i v_i^dag)}. At most four states.
SimplexGridResult simplex_enumerate_chi(const QuantumChannel& ch,
                                        const std::vector<PureState>& states,
                                        double step);

}  // namespace qcap::oracles
