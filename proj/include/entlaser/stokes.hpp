#pragma once

#include <array>

#include <Eigen/Dense>

#include "entlaser/fock_basis.hpp"
#include "entlaser/sparse.hpp"

namespace entlaser::stokes {

using Matrix8d = Eigen::Matrix<double, 8, 8>;
using Matrix4d = Eigen::Matrix<double, 4, 4>;

/// Mode conventions.
///
/// Polarization modes: a_h, a_v (arm A) and b_h, b_v (arm B).
/// Squeezer modes:  c1 = (a_h + b_v)/sqrt(2),  c2 = (a_h - b_v)/sqrt(2),
///                  c3 = (a_v + b_h)/sqrt(2),  c4 = (a_v - b_h)/sqrt(2).
/// Quadratures x = (c + c^dag)/sqrt(2), p = -i(c - c^dag)/sqrt(2), so
/// [x, p] = i and the vacuum variance is 1/2.
/// Quadrature ordering is fixed as q = (x1, p1, x2, p2, x3, p3, x4, p4).
enum Quadrature : int { X1 = 0, P1, X2, P2, X3, P3, X4, P4 };

/// Mode order used by the four-mode Fock basis.
enum AbMode : int { AH = 0, AV = 1, BH = 2, BV = 3 };

/// Orthogonal, self-inverse map from twin-pair-ordered polarization
/// amplitudes (a_h, b_v, a_v, b_h) to (c1, c2, c3, c4).
Matrix4d c_basis_transform();

/// The same map lifted to quadratures: (x_ah, p_ah, x_bv, p_bv, x_av, p_av,
/// x_bh, p_bh) -> (x1, p1, ..., x4, p4). Symplectic and self-inverse.
Matrix8d c_basis_transform_quadratures();

/// Symplectic form for the fixed quadrature ordering, [q_i, q_j] = i Omega_ij.
Matrix8d symplectic_form();

/// Observable of the form O = 1/2 q^T G q + c0 with G symmetric.
struct QuadraticForm {
    Matrix8d matrix;
    double constant = 0.0;
};

/// Quadratic forms of the total-spin components in the c-basis quadratures,
/// returned in the order (J_z, J_x, J_y):
///   J_z = 1/2 (x1 x2 + p1 p2 - x3 x4 - p3 p4)
///   J_x = 1/2 (x1 x3 + p1 p3 + x2 x4 + p2 p4)
///   J_y = 1/2 (x1 p4 - p1 x4 + x2 p3 - p2 x3)
/// The sign of J_y is fixed so that [J_x, J_y] = i J_z.
std::array<QuadraticForm, 3> jay_quadratic_forms();

/// Total photon number N = 1/2 sum_i (x_i^2 + p_i^2 - 1): G = identity,
/// c0 = -2.
QuadraticForm number_quadratic_form();

/// Per-arm photon numbers N_A, N_B as c-basis quadratic forms.
std::array<QuadraticForm, 2> arm_number_quadratic_forms();

/// Stokes-operator matrices on the truncated four-mode Fock space.
struct FockOperatorSet {
    int cutoff = 0;
    SparseMatrix jax, jay, jaz;  // arm A components
    SparseMatrix jbx, jby, jbz;   // arm B components
    SparseMatrix jx, jy, jz;      // totals
    SparseMatrix na, nb, n;
    SparseMatrix ja2, jb2;        // (J^A)^2, (J^B)^2
    SparseMatrix j2;              // total J^2
};

/// Builds all operators from ladder matrices with the standard sqrt(n)
/// elements. Products are truncation-then-multiply; matrix elements touching
/// the cutoff boundary carry truncation artifacts, so algebraic identities
/// hold on states at least 2 photons below the cutoff.
FockOperatorSet build_fock_operators(int cutoff,
                                     std::size_t memory_budget_bytes = FockBasis::default_memory_budget);

}  // namespace entlaser::stokes
