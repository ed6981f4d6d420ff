#pragma once

#include "geodeq/cone.hpp"

#include <string>

namespace geodeq {

inline constexpr double kPairTolerance = 1e-7;
inline constexpr double kPairStrongTolerance = 1e-9;

// φ = log|det ḡ / det g| / (2(n+1)).
double phi_of_pair(const MetricSpec& g, const MetricSpec& gbar, std::span<const double> p);

// Everything the pair determines at one point.
struct PairAtPoint {
    Point point;
    double phi = 0;
    Eigen::VectorXd dphi;
    Eigen::MatrixXd a;              // e^{2φ} g ḡ^{-1} g
    Eigen::VectorXd lambda;         // -e^{2φ} g ḡ^{-1} dφ
    Eigen::VectorXd lambda_trace;   // ½ d(tr_g a)
    double residual_lc = 0;         // ḡ_ij;k - 2 ḡ_ij φ_k - ḡ_ik φ_j - ḡ_jk φ_i
    double residual_basic = 0;      // a_ij;k - λ_i g_jk - λ_j g_ik
    Eigen::MatrixXd lambda_cov;     // λ_i;j
    Eigen::MatrixXd ginv;
};

// No consistency checks; see a_lambda_of_pair.
PairAtPoint analyze_pair_at(const MetricSpec& g, const MetricSpec& gbar, std::span<const double> p);

// Throws VerificationError when the two formulas for λ disagree beyond 1e-6.
PairAtPoint a_lambda_of_pair(const MetricSpec& g, const MetricSpec& gbar, std::span<const double> p);

struct PairReport {
    double residual_lc = 0;
    double residual_basic = 0;
    double lambda_mismatch = 0;
    int points = 0;
    bool equivalent = false;  // both residuals below 1e-7
    bool strong = false;      // both below 1e-9
    std::vector<double> phi;
};

PairReport check_geodesic_equiv(const MetricSpec& g, const MetricSpec& gbar, const std::vector<Point>& points);
PairReport check_geodesic_equiv(const MetricSpec& g, const MetricSpec& gbar, int count = 20);

// μ of the solution attached to the pair, given the constant B of g.
double pair_mu(const PairAtPoint& pa, double B);
// B̄ = -e^{-2φ}(μ + φ_p λ^p) for a solution (a, λ, μ) at the point of pa.
double bar_B(const PairAtPoint& pa, const ExtendedSolution& sol);

struct BarBReport {
    std::vector<double> values;
    double mean = 0;
    double spread = 0;  // max relative deviation from the mean
};

// B̄ at the points using the pair's own solution. Throws VerificationError when
// the values are not constant within 1e-6 relative.
BarBReport bar_B(const MetricSpec& g, const MetricSpec& gbar, double B, const std::vector<Point>& points);

struct ProjectiveFieldReport {
    std::vector<Eigen::MatrixXd> a;  // a^v at each point
    double residual = 0;
    bool projective = false;
    int points = 0;
};

// a^v = L_v g - tr(g^{-1} L_v g) g / (n+1), tested against the basic equation.
ProjectiveFieldReport projective_field_solution(const MetricSpec& g, const std::vector<Expr>& v,
                                                const std::vector<Point>& points);

}  // namespace geodeq
