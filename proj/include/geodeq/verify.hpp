#pragma once

#include "geodeq/cone.hpp"

#include <string>
#include <vector>

namespace geodeq {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0;
    double time_limit = 0;  // 0: none
};

inline constexpr int kCriterionCount = 10;

// Runs acceptance criterion id in 1..10. Exceptions are reported as failures.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_all_criteria();

// Property checks, all relative to max(1, max |R|) where curvature is involved.
// R_ijkl = -R_jikl = -R_ijlk = R_klij.
double curvature_symmetry_residual(const GeometryAtPoint& g);
// R^i_jkl + R^i_klj + R^i_ljk = 0.
double bianchi_residual(const GeometryAtPoint& g);
// Christoffel symbols against central differences of g.
double christoffel_fd_error(const MetricSpec& m, const Point& p, double h = 1e-5);
// Riemann tensor against central differences of the Christoffel symbols.
double riemann_fd_error(const MetricSpec& m, const Point& p, double h = 1e-5);
// Closed-form cone Christoffel symbols against the generic ones.
double cone_christoffel_error(const ConeBuild& c, const Point& p);
// max |L^i_p R^p_jkl - R^i_pkl L^p_j|.
double ricci_identity_residual(const MetricSpec& m, const TensorField& L, const Point& p);
// max |L^i_p R^p_jkl|.
double max_L_times_R(const MetricSpec& m, const TensorField& L, const Point& p);

// A parallel symmetric form on the cone over the unit 2-sphere is unpacked into a
// solution on the base, and a base solution is lifted back to the cone.
struct RoundTripReport {
    int cone_dim = 0;           // parallel forms found on the cone
    double distance_from_metric = 0;  // of the chosen form from the cone metric
    double base_residual = 0;   // extended system on the base
    double cone_residual = 0;   // covariant derivative of the lifted form
};

RoundTripReport correspondence_round_trip(std::uint64_t seed = kDefaultSeed);

}  // namespace geodeq
