#pragma once

// Standard channels and signal sets.

#include "qcap/quantum.hpp"
#include "qcap/sphere.hpp"

#include <vector>

namespace qcap::channels {

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

QuantumChannel identity(Index dim = 2);
/// rho -> (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z). p = 3/4 is fully
/// depolarizing.
QuantumChannel depolarizing(double p);
/// sqrt(1-q) I, sqrt(q) Z.
QuantumChannel dephasing(double q);
QuantumChannel bit_flip(double p);
QuantumChannel amplitude_damping(double gamma);
/// Measure in the computational basis, then flip with probability p.
QuantumChannel bsc_embed(double p);

/// Haar-like random channel: the Kraus operators are the blocks of a random
/// isometry C^din -> C^(kraus_count * dout).
QuantumChannel random_channel(Index din, Index dout, int kraus_count, Rng& rng);

/// v0 = (1,0), v1 = (-1/2, sqrt3/2), v2 = (-1/2, -sqrt3/2).
std::vector<PureState> trine_states();
/// (cos(theta/2), +-sin(theta/2)): two real states at angle theta.
std::vector<PureState> two_states(double theta);
/// v_i (x) v_i for the trine.
std::vector<PureState> two_copy_trine_states();

/// Equal-probability ensemble of pure states.
Ensemble uniform_ensemble(const std::vector<PureState>& states);

}  // namespace qcap::channels
