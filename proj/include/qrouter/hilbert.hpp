#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "qrouter/model.hpp"

namespace qrouter {

inline constexpr int transmon_levels = 4;
inline constexpr int basis_dimension = transmon_levels * 16;

// Transmon level varies slowest; bit k of the occupation mask is absorber k (2a, 2b, 3a, 3b).
struct BasisIndex {
  Level transmon = Level::gs;
  std::uint8_t occupation = 0;

  bool occupied(Squid s) const noexcept { return (occupation >> index(s)) & 1U; }
  int flat() const noexcept { return index(transmon) * 16 + occupation; }
  static BasisIndex from_flat(int i);

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

// One transmon raising (or lowering) operator. Rows and columns use the printed
// ordering (T3, T2, T1, GS), so the ground state is the last basis vector.
struct ProjectionOperator {
  Eigen::Matrix4cd matrix;
  int level = 1;

  Eigen::Matrix4cd lowering() const { return matrix.adjoint(); }
};

std::array<ProjectionOperator, 3> projection_ops();

// Basis vector for a transmon level in the printed ordering.
Eigen::Vector4cd transmon_ket(Level l);

double hsys_energy(const RouterModel& m, BasisIndex b);

Eigen::MatrixXd hsys_matrix(const RouterModel& m);

// Absorber energies with the transmon held in c; unshifted for the ground state.
std::array<double, 4> conditional_spectrum(const RouterModel& m, Condition c);

}  // namespace qrouter
