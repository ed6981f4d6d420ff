#pragma once

#include "geodeq/geometry.hpp"

#include <functional>
#include <optional>
#include <string>

namespace geodeq {

// Coefficient matrices C_k as jets of the given order at a point.
using CoefficientJets = std::function<std::vector<MatrixJet>(std::span<const double>, int order)>;

// Flat sections s satisfy ∂_k s + C_k s = 0.
struct LinearConnectionSpec {
    MetricSpec base;
    int fiber_dim = 0;
    CoefficientJets coeff;
    std::string label;
};

LinearConnectionSpec tangent_connection(const MetricSpec& m);
LinearConnectionSpec covector_connection(const MetricSpec& m);
// Symmetric (0,2)-forms, packed by packed_index (i <= j).
LinearConnectionSpec symmetric_form_connection(const MetricSpec& m);

CoefficientValues coefficient_values(const LinearConnectionSpec& c);

// F_kl for k < l, in lexicographic pair order.
std::vector<Eigen::MatrixXd> connection_curvature(const LinearConnectionSpec& c, std::span<const double> point);

struct RankOptions {
    double rel_tol = 1e-8;
    double gap_ratio = 10;
};

struct KernelResult {
    int dim = 0;
    Eigen::MatrixXd basis;             // columns
    Eigen::VectorXd singular_values;   // descending
    double gap = 0;                    // ratio at the cut, infinity when clean
};

// Common kernel of the operators (each normalized to unit Frobenius norm).
// Throws IndecisionError when the singular-value gap at the cut is below gap_ratio.
KernelResult joint_kernel(const std::vector<Eigen::MatrixXd>& ops, int ncols, const RankOptions& opts = {});

// Singular values (descending, padded to ncols) of the stacked operators, without normalization.
Eigen::VectorXd stacked_singular_values(const std::vector<Eigen::MatrixXd>& ops, int ncols);

struct HolonomyGenerators {
    Point point;
    std::vector<Eigen::MatrixXd> matrices;
    std::vector<int> levels;  // derivative order of each generator, -1 for transported ones
    double inverse_length = 0;
    int dropped = 0;          // generators at round-off level, left out

    // Generators made dimensionless by inverse_length^(level + 2).
    std::vector<Eigen::MatrixXd> scaled() const;
};

// Curvature and its covariant derivatives up to `derivative_order` at the point.
HolonomyGenerators infinitesimal_holonomy(const LinearConnectionSpec& c, std::span<const double> point,
                                          int derivative_order = 2);

// F_kl(q) carried to p along a coordinate-wise path.
std::vector<Eigen::MatrixXd> transported_curvature(const LinearConnectionSpec& c, const Point& q, const Point& p,
                                                   int steps_per_unit = 200);

struct FlatSectionOptions {
    int derivative_order = 2;
    int extra_points = 8;
    RankOptions rank;
    std::uint64_t seed = kDefaultSeed;
    std::optional<Point> point;
    int steps_per_unit = 200;
    // Also feed transported generators into the kernel instead of only checking them.
    bool transported_in_kernel = false;
};

struct FlatSectionResult {
    int dim = 0;
    Eigen::MatrixXd basis;
    Point point;
    int generator_count = 0;
    Eigen::VectorXd singular_values;
    double gap = 0;
    int transported_count = 0;
    // max over transported generators G and basis vectors b of |G b| / |G|
    double transport_residual = 0;
    HolonomyGenerators generators;
};

FlatSectionResult flat_section_dim(const LinearConnectionSpec& c, const FlatSectionOptions& opts = {});

// Taylor jets of the flat section through s0 at the point (one jet per fiber component).
std::vector<Jet> flat_section_jet(const LinearConnectionSpec& c, std::span<const double> point,
                                  const Eigen::VectorXd& s0, int order);

// Invariants of tangent-space generators X (acting on vectors).
KernelResult invariant_vectors(const HolonomyGenerators& gen, const RankOptions& opts = {});
KernelResult invariant_covectors(const HolonomyGenerators& gen, const RankOptions& opts = {});
// Forms h with X^T h + h X = 0; basis columns are packed symmetric forms.
KernelResult invariant_symforms(const HolonomyGenerators& gen, const RankOptions& opts = {});

Eigen::VectorXd pack_symmetric(const Eigen::MatrixXd& h);
Eigen::MatrixXd unpack_symmetric(const Eigen::VectorXd& v, int n);

// Distance of v from the column span of basis, relative to |v|.
double distance_from_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v);

}  // namespace geodeq
