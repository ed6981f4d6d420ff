#pragma once

#include "geodeq/geometry.hpp"

#include <string>

namespace geodeq {

// dr^2 + r^2 g on (0, inf) x M, with r the first coordinate of `total`.
struct ConeBuild {
    MetricSpec base;
    MetricSpec total;
    std::string r_name;
    Expr potential() const;  // r^2/2
};

ConeBuild build_cone(const MetricSpec& base, const std::string& r_name = "r", Interval r_range = {0.5, 3});

// Closed-form Christoffel symbols of the cone, (i, j, k) -> Γ^i_jk.
Tensor cone_christoffel_closed(const ConeBuild& c, std::span<const double> point);

enum class HomVerdict { Cone, ConeForNegative, None };
const char* to_string(HomVerdict v);

// Residuals of v_;ij = g_ij and g^ij v_i v_j = 2v.
struct HomReport {
    double hessian_residual = 0;
    double gradient_residual = 0;
    double min_v = 0, max_v = 0;
    int points = 0;
    HomVerdict verdict = HomVerdict::None;
};

inline constexpr double kHomTolerance = 1e-8;

HomReport check_hom(const MetricSpec& m, const Expr& v, const std::vector<Point>& points);
HomReport check_hom(const MetricSpec& m, const Expr& v, int count = 20);

// A metric together with a potential that makes it a cone.
struct ConeFactor {
    MetricSpec metric;
    Expr potential;
};

ConeFactor as_factor(const ConeBuild& c);
// Block diagonal product with potential u + v. Both factors must pass check_hom.
ConeFactor glue_product(const ConeFactor& a, const ConeFactor& b, const std::string& label = "");

// Solution (a, λ, μ) of the extended system at one point.
struct ExtendedSolution {
    Eigen::MatrixXd a;
    Eigen::VectorXd lambda;
    double mu = 0;
};

// A00 = μ, A0i = -r λ_i, Aij = r^2 a_ij.
Eigen::MatrixXd pack_parallel(const ExtendedSolution& s, double r);
ExtendedSolution unpack_parallel(const Eigen::MatrixXd& A, double r);

// Fiber layout of the extended connection: [a (packed, i <= j); λ; μ].
int extended_fiber_dim(int n);
Eigen::VectorXd to_fiber(const ExtendedSolution& s);
ExtendedSolution from_fiber(const Eigen::VectorXd& v, int n);

// Largest |R^i_jkl| over the points.
double max_curvature(const MetricSpec& m, const std::vector<Point>& points);

}  // namespace geodeq
