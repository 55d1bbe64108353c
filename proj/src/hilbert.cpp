#include "qrouter/hilbert.hpp"

#include "qrouter/error.hpp"

namespace qrouter {

namespace {

int printed_row(Level l) { return 3 - index(l); }

}  // namespace

BasisIndex BasisIndex::from_flat(int i) {
  if (i < 0 || i >= basis_dimension) throw ValidationError("basis_index", "basis index out of range");
  return {static_cast<Level>(i / 16), static_cast<std::uint8_t>(i % 16)};
}

std::array<ProjectionOperator, 3> projection_ops() {
  std::array<ProjectionOperator, 3> ops;
  for (int i = 0; i < 3; ++i) {
    ops[i].level = i + 1;
    ops[i].matrix.setZero();
    ops[i].matrix(printed_row(static_cast<Level>(i + 1)), printed_row(Level::gs)) = 1.0;
  }
  return ops;
}

Eigen::Vector4cd transmon_ket(Level l) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(printed_row(l)) = 1.0;
  return v;
}

double hsys_energy(const RouterModel& m, BasisIndex b) {
  double e = m.transmon(b.transmon);
  for (Squid s : all_squids) {
    if (b.occupied(s)) e += m.squid(s) - m.kerr(b.transmon, s);
  }
  return e;
}

Eigen::MatrixXd hsys_matrix(const RouterModel& m) {
  m.validate();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis_dimension, basis_dimension);
  for (int i = 0; i < basis_dimension; ++i) h(i, i) = hsys_energy(m, BasisIndex::from_flat(i));
  return h;
}

std::array<double, 4> conditional_spectrum(const RouterModel& m, Condition c) {
  std::array<double, 4> w{};
  for (Squid s : all_squids) w[index(s)] = m.squid(s) - m.kerr(level_of(c), s);
  return w;
}

}  // namespace qrouter
