#pragma once

#include "geodeq/metric.hpp"

#include <functional>
#include <optional>

namespace geodeq {

// Dense array of shape n x n x ... (rank times), row major.
class Tensor {
public:
    Tensor() = default;
    Tensor(int n, int rank);

    int n() const { return n_; }
    int rank() const { return rank_; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    template <class... I>
    double& operator()(I... idx) {
        return data_[offset({static_cast<int>(idx)...})];
    }
    template <class... I>
    double operator()(I... idx) const {
        return data_[offset({static_cast<int>(idx)...})];
    }
    std::size_t offset(std::initializer_list<int> idx) const;
    double max_abs() const;

private:
    int n_ = 0, rank_ = 0;
    std::vector<double> data_;
};

// Jets of the metric, its inverse and the connection matrices at a point.
// gamma[k](i, j) = Γ^i_{kj}; gamma has one order less than g.
struct MetricJets {
    MatrixJet g;
    MatrixJet ginv;
    std::vector<MatrixJet> gamma;
};

// Throws DegenerateMetric when g is degenerate at the point. order >= 1.
MetricJets metric_jets(const MetricSpec& m, std::span<const double> point, int order);

struct GeometryAtPoint {
    Point point;
    Eigen::MatrixXd g, ginv;
    Tensor gamma;    // (i, j, k) -> Γ^i_jk
    Tensor riemann;  // (i, j, k, l) -> R^i_jkl
    std::optional<Tensor> nabla_riemann;   // (i, j, k, l, m) -> R^i_jkl;m
    std::optional<Tensor> nabla2_riemann;  // (i, j, k, l, m, p) -> R^i_jkl;mp
    Signature signature;
};

Tensor christoffel(const MetricSpec& m, std::span<const double> point);
GeometryAtPoint riemann(const MetricSpec& m, std::span<const double> point, int deriv_order = 0);
// Lowered R_ijkl = g_ip R^p_jkl.
Tensor lower_first(const Tensor& r, const Eigen::MatrixXd& g);

// Curvature of a family of connection matrices C_k: F_kl = ∂_k C_l - ∂_l C_k + [C_k, C_l].
// Returned for all ordered pairs, index k * n + l.
std::vector<MatrixJet> curvature_of_coefficients(const std::vector<MatrixJet>& c);

// Covariant derivative of an End-valued tensor with r lower (form) indices,
// stored as n^r matrix jets indexed row major. The End part is differentiated
// with the bundle connection c, the form indices with the Levi-Civita gamma.
// The new index is appended last.
std::vector<MatrixJet> covariant_derivative_forms(const std::vector<MatrixJet>& t, int r,
                                                  const std::vector<MatrixJet>& c,
                                                  const std::vector<MatrixJet>& gamma);

// A tensor field with `up` upper indices followed by `down` lower ones, components row major.
struct TensorField {
    int up = 0, down = 0;
    std::vector<Expr> comps;
};

// Levi-Civita covariant derivative; the derivative index is appended last.
Tensor cov_deriv(const MetricSpec& m, const TensorField& t, std::span<const double> point);
// Values of the field at a point, as a tensor of rank up + down.
Tensor field_value(const MetricSpec& m, const TensorField& t, std::span<const double> point);

// Coefficients C_k(x) of a linear connection on a trivial bundle of rank N.
using CoefficientValues = std::function<std::vector<Eigen::MatrixXd>(std::span<const double>)>;
using Path = std::vector<Point>;

// Solves dY/dt = -C(γ(t), γ'(t)) Y along a polyline with classical RK4.
// Returns Y at the end (Y = identity at the start).
Eigen::MatrixXd transport_operator(const CoefficientValues& c, int fiber_dim, const Path& path,
                                   int steps_per_unit = 200);

CoefficientValues tangent_coefficients(const MetricSpec& m);

Eigen::VectorXd parallel_transport(const MetricSpec& m, const Path& path, const Eigen::VectorXd& v,
                                   int steps_per_unit = 200);
// Transport of a bilinear form h (lower indices).
Eigen::MatrixXd parallel_transport_form(const MetricSpec& m, const Path& path, const Eigen::MatrixXd& h,
                                        int steps_per_unit = 200);

// Polyline from a to b moving one coordinate at a time, in the given axis order.
Path axis_path(const Point& a, const Point& b, const std::vector<int>& order);

}  // namespace geodeq
