#pragma once

#include <Eigen/Core>

namespace pcss {

// All numeric thresholds used across the library, collected in one record
// so a run can tighten or relax them consistently. Every function that
// needs one takes a Tolerances argument defaulting to these values.
struct Tolerances {
    // Relative Frobenius reconstruction error admitted for factorizations.
    double reconstruction = 1e-12;

    // Orthonormality defect admitted for computed bases (Frobenius).
    double orthonormality = 1e-10;

    // qr_factor declares rank deficiency when |R_jj| < qr_rank * ||A||_2.
    double qr_rank = 1e-12;

    // residual_norm_sq clamps values in [-residual_clamp, 0] to zero.
    double residual_clamp = 1e-12;

    // Column selections must satisfy sigma_min(C) > independence * sigma_1(A).
    double independence = 1e-10;

    // A bound report is satisfied when slack >= -bound_slack * max(1, rhs).
    double bound_slack = 1e-8;

    // Monotonicity slack for Lloyd energy traces (absolute per step).
    double lloyd_slack = 1e-9;

    // sigma_rho below conditioning * sigma_1 flags a bound report as
    // ill-conditioned (reported, never suppressed).
    double conditioning = 1e-13;

    // Max redraws per slot when a sampled column is linearly dependent.
    int sampling_retries = 50;
};

// Numerical-rank cutoff: singular values above max(m,n) * eps * sigma_1
// count toward the rank.
inline double rank_cutoff(Eigen::Index rows, Eigen::Index cols, double sigma_max) {
    const double eps = std::numeric_limits<double>::epsilon();
    return static_cast<double>(std::max(rows, cols)) * eps * sigma_max;
}

} // namespace pcss
