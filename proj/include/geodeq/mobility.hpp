#pragma once

#include "geodeq/cone.hpp"
#include "geodeq/prolong.hpp"

#include <optional>
#include <string>

namespace geodeq {

// Flat sections are the solutions (a, λ, μ) of
//   a_ij,k = λ_i g_jk + λ_j g_ik,  λ_i,j = μ g_ij + B a_ij,  μ_,i = 2B λ_i
// in the layout of to_fiber.
LinearConnectionSpec extended_connection(const MetricSpec& m, double B);

// g' = -B g, for which the constant becomes -1.
MetricSpec rescale_to_B_minus1(const MetricSpec& m, double B);
// c g has constant B / c.
MetricSpec scale_metric(const MetricSpec& m, double c);

struct ExtendedResidual {
    double basic = 0, lambda_eq = 0, mu_eq = 0;
    double max() const { return std::max(basic, std::max(lambda_eq, mu_eq)); }
};

// Residuals from jets (order >= 1) of the fiber components at p.
ExtendedResidual extended_residual(const MetricSpec& m, double B, std::span<const double> p,
                                   const std::vector<Jet>& fields);

// (a, λ, μ) as expressions in the metric's coordinates; a packed with i <= j.
struct ExtendedFields {
    std::vector<Expr> a;
    std::vector<Expr> lambda;
    Expr mu;
};

ExtendedResidual extended_residual(const MetricSpec& m, double B, const ExtendedFields& f,
                                   const std::vector<Point>& points);

// (t λλ + g, t λ, t) from a B = 0 solution with μ = 1. Throws VerificationError
// when the family fails the system at the metric's sample points.
ExtendedFields mu_family(const MetricSpec& m, const ExtendedFields& sol, double t);

struct BSample {
    double B = 0;
    int dim = -1;           // -1 when the rank cut was indecisive
    double indicator = 0;   // singular value of the raw generators that vanishes when dim jumps
};

struct BSearchOptions {
    int magnitudes = 41;
    double min_magnitude = 1e-3, max_magnitude = 1e3;
    int refine_iterations = 120;
    // transported generators are skipped during the sweep
    FlatSectionOptions engine = [] {
        FlatSectionOptions o;
        o.extra_points = 0;
        return o;
    }();
};

struct BSearchResult {
    std::vector<BSample> samples;  // grid, sorted by B, followed by the refined point
    int generic_dim = 0;           // smallest dimension on the grid
    double best_B = 0;
    int best_dim = 0;
    bool conclusive = false;       // some B beats the generic dimension
};

BSearchResult search_B(const MetricSpec& m, const BSearchOptions& opts = {});

struct MobilityReport {
    std::string label;
    std::string route;  // "extended-system" or "cone-parallel"
    int n = 0;          // dimension of the metric whose mobility is reported
    int D = 0;
    std::optional<double> B;
    std::optional<int> k, ell;
    bool constant_curvature = false;
    std::optional<bool> bounds_ok;
    bool bounds_apply = false;  // D >= 3 and nonconstant curvature
    std::uint64_t seed = kDefaultSeed;
    // diagnostics
    double gap = 0;
    int generator_count = 0;
    double transport_residual = 0;
    double metric_in_span = 0;       // distance of the solution for g itself from the basis
    std::optional<int> symform_check;  // invariant forms of the tangent holonomy, should equal D
    double max_cone_curvature = 0;
    std::optional<BSearchResult> search;
};

MobilityReport extended_mobility(const MetricSpec& m, double B, const FlatSectionOptions& opts = {});
MobilityReport searched_mobility(const MetricSpec& m, const BSearchOptions& opts = {});

// D(g) as the number of parallel symmetric forms on the cone over g (B = -1).
MobilityReport cone_mobility(const MetricSpec& base, const FlatSectionOptions& opts = {});
// Same for an already assembled cone, given as metric plus potential.
MobilityReport cone_mobility(const ConeFactor& cone, const FlatSectionOptions& opts = {});

struct ProjIsoReport {
    int D = 0;
    int upper_bound = 0;  // dim proj - dim hom <= D - 1
    std::optional<int> value;
    int band_lo = 0, band_hi = 0;
    std::string kind;  // "exact", "band" or "bound-only"
};

ProjIsoReport proj_iso_report(const MobilityReport& r);

}  // namespace geodeq
