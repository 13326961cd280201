#include "entlaser/stokes.hpp"

#include <cmath>

namespace entlaser::stokes {

namespace {
constexpr double inv_sqrt2 = 0.7071067811865475244;
}

Matrix4d c_basis_transform() {
    Matrix4d u = Matrix4d::Zero();
    // rows: c1, c2, c3, c4; columns: a_h, b_v, a_v, b_h
    u(0, 0) = inv_sqrt2; u(0, 1) = inv_sqrt2;
    u(1, 0) = inv_sqrt2; u(1, 1) = -inv_sqrt2;
    u(2, 2) = inv_sqrt2; u(2, 3) = inv_sqrt2;
    u(3, 2) = inv_sqrt2; u(3, 3) = -inv_sqrt2;
    return u;
}

Matrix8d c_basis_transform_quadratures() {
    const Matrix4d u = c_basis_transform();
    Matrix8d s = Matrix8d::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            s(2 * i, 2 * j) = u(i, j);
            s(2 * i + 1, 2 * j + 1) = u(i, j);
        }
    return s;
}

Matrix8d symplectic_form() {
    Matrix8d omega = Matrix8d::Zero();
    for (int m = 0; m < 4; ++m) {
        omega(2 * m, 2 * m + 1) = 1.0;
        omega(2 * m + 1, 2 * m) = -1.0;
    }
    return omega;
}

namespace {

void add_term(Matrix8d& g, int i, int j, double weight) {
    g(i, j) += weight / 2.0;
    g(j, i) += weight / 2.0;
}

}  // namespace

std::array<QuadraticForm, 3> jay_quadratic_forms() {
    QuadraticForm gz{Matrix8d::Zero(), 0.0};
    QuadraticForm gx{Matrix8d::Zero(), 0.0};
    QuadraticForm gy{Matrix8d::Zero(), 0.0};

    add_term(gz.matrix, X1, X2, 1.0);
    add_term(gz.matrix, P1, P2, 1.0);
    add_term(gz.matrix, X3, X4, -1.0);
    add_term(gz.matrix, P3, P4, -1.0);

    add_term(gx.matrix, X1, X3, 1.0);
    add_term(gx.matrix, P1, P3, 1.0);
    add_term(gx.matrix, X2, X4, 1.0);
    add_term(gx.matrix, P2, P4, 1.0);

    add_term(gy.matrix, X1, P4, 1.0);
    add_term(gy.matrix, P1, X4, -1.0);
    add_term(gy.matrix, X2, P3, 1.0);
    add_term(gy.matrix, P2, X3, -1.0);

    return {gz, gx, gy};
}

QuadraticForm number_quadratic_form() { return {Matrix8d::Identity(), -2.0}; }

std::array<QuadraticForm, 2> arm_number_quadratic_forms() {
    // N_A = n_ah + n_av = 1/2 (n1+n2+n3+n4) + 1/2 (c1^dag c2 + c3^dag c4 + h.c.)
    QuadraticForm ga{Matrix8d::Identity() * 0.5, -1.0};
    QuadraticForm gb{Matrix8d::Identity() * 0.5, -1.0};
    for (auto [i, j] : {std::pair{X1, X2}, {P1, P2}, {X3, X4}, {P3, P4}}) {
        add_term(ga.matrix, i, j, 1.0);
        add_term(gb.matrix, i, j, -1.0);
    }
    return {ga, gb};
}

FockOperatorSet build_fock_operators(int cutoff, std::size_t memory_budget_bytes) {
    const FockBasis basis(4, cutoff, memory_budget_bytes);

    const SparseMatrix ah = basis.annihilation(AH);
    const SparseMatrix av = basis.annihilation(AV);
    const SparseMatrix bh = basis.annihilation(BH);
    const SparseMatrix bv = basis.annihilation(BV);
    const SparseMatrix ah_d = ah.adjoint();
    const SparseMatrix av_d = av.adjoint();
    const SparseMatrix bh_d = bh.adjoint();
    const SparseMatrix bv_d = bv.adjoint();

    FockOperatorSet ops;
    ops.cutoff = cutoff;

    // Schwinger representation per arm; J_y sign chosen so that
    // [J_x, J_y] = i J_z away from the truncation boundary.
    const cplx half(0.5, 0.0);
    const cplx half_over_i(0.0, -0.5);

    ops.jaz = (basis.number(AH) - basis.number(AV)).scaled(half);
    ops.jax = (ah_d * av + av_d * ah).scaled(half);
    ops.jay = (ah_d * av - av_d * ah).scaled(half_over_i);

    ops.jbz = (basis.number(BH) - basis.number(BV)).scaled(half);
    ops.jbx = (bh_d * bv + bv_d * bh).scaled(half);
    ops.jby = (bh_d * bv - bv_d * bh).scaled(half_over_i);

    ops.jx = ops.jax + ops.jbx;
    ops.jy = ops.jay + ops.jby;
    ops.jz = ops.jaz + ops.jbz;

    ops.na = basis.number(AH) + basis.number(AV);
    ops.nb = basis.number(BH) + basis.number(BV);
    ops.n = ops.na + ops.nb;

    ops.ja2 = ops.jax * ops.jax + ops.jay * ops.jay + ops.jaz * ops.jaz;
    ops.jb2 = ops.jbx * ops.jbx + ops.jby * ops.jby + ops.jbz * ops.jbz;
    ops.j2 = ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;

    return ops;
}

}  // namespace entlaser::stokes
