#pragma once

namespace fraclab {

/// Critical exponents of (-Δ)^s u + |∇u|^p = f for given dimension N,
/// order s ∈ (1/2, 1), data integrability m and weight exponent β.
struct ExponentSet {
    int N = 1;
    double s = 0.75;
    double m = 1.0;
    double beta = 0.0;

    double p_star = 0.0;              ///< N / (N - 2s + 1)
    double p_star_beta = 0.0;         ///< N / (N - 2s + 1 + β)
    double sobolev_gain = 0.0;        ///< mN / (N - m(2s-1)), +inf when m(2s-1) ≥ N
    double grad_blowup = 0.0;         ///< 1 / (1 - s)
    double p_upper = 0.0;             ///< s / (1 - s)
    double nonexist_threshold = 0.0;  ///< (2s-1)N / (1-s) + 1
    double natural_growth = 0.0;      ///< 2s
};

/// Throws InvalidArgument unless N ≥ 1, 1/2 < s < 1, m ≥ 1, 0 ≤ β < 2s-1.
ExponentSet critical_exponents(int N, double s, double m = 1.0, double beta = 0.0);

/// Throws InvalidArgument with the admissible interval in the message.
void require_order(double s, const char* where);

}  // namespace fraclab
