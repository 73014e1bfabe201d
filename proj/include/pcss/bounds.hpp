#pragma once

//
// Numerical certification of the error bounds tying partition quality to
// selection quality: each check evaluates both sides of one inequality
// (or identity) from a concrete run and reports the slack.
//

#include <map>
#include <string>

#include "pcss/pipeline.hpp"

namespace pcss {

struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;          // rhs - lhs
    bool satisfied = false;      // slack >= -bound_slack * max(1, rhs)
    bool ill_conditioned = false; // sigma_rho close to the noise floor
    std::map<std::string, double> ingredients;
};

// Identity ||W1 W1^T - Z1 Z1^T||_F = sqrt(2) ||W1^T Z2||_F
//                                  = sqrt(2) ||Z1^T W2||_F
// for orthonormal n x k blocks; complements are computed internally. The
// report's lhs is the largest pairwise discrepancy of the three sides.
BoundReport check_subspace_distance(const Matrix& w1, const Matrix& z1,
                                    const Tolerances& tol = {});

// ||U_r U_r^T - C C^+||_F <= sqrt(2) ||A - A_r||_F ||C^+||_2 for C built
// from r independent columns of a.
BoundReport check_projection_lemma(const Matrix& a, const Matrix& c, Index r,
                                   const Tolerances& tol = {});

// ||(I - CC^+)A||_F^2 <= zeta^2 * energy, zeta = max_i (1 + ||C_i^+||_2 ||V_i||_2).
BoundReport check_id_vs_energy(const Matrix& a, const Partition& p,
                               const PipelineResult& result,
                               const Tolerances& tol = {});

// energy <= ||A - A_r||_F^2 + (1 - 1/L*) ||A_r||_F^2, L* = max_i ceil(r / d_i).
BoundReport check_energy_bound(const Matrix& a, const Partition& p, Index r,
                               const Tolerances& tol = {});

// ||(I - CC^+)A||_F <= zeta * (energy bound rhs)^(1/2).
BoundReport check_combined_bound(const Matrix& a, const Partition& p,
                                 const PipelineResult& result, Index r,
                                 const Tolerances& tol = {});

// ||(I - CC^+)A||_F <= sqrt(k_tilde * gamma_C) ||A - A_r||_F with
// gamma_C = max_i ||(I - C_i C_i^+) V_i||_F^2 / sigma_rho^2.
BoundReport check_worst_block_bound(const Matrix& a, const Partition& p,
                               const PipelineResult& result, Index r,
                               const Tolerances& tol = {});

// ||A - CUR||_F <= (sqrt(k1 gamma_C) + sqrt(k2 gamma_R)) ||A - A_r||_F.
BoundReport check_cur_bound(const Matrix& a, const CurResult& cur, Index r,
                            const Tolerances& tol = {});

} // namespace pcss
