#pragma once

#include "geodeq/expr.hpp"
#include "geodeq/jet.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace geodeq {

using Point = std::vector<double>;

struct Interval {
    double lo = 0, hi = 0;
};

// (negative count, positive count).
using Signature = std::pair<int, int>;

inline constexpr std::uint64_t kDefaultSeed = 42;

// A metric on a coordinate chart. Only components with i <= j are stored.
class MetricSpec {
public:
    MetricSpec() = default;
    MetricSpec(std::string label, std::vector<std::string> coords, std::vector<Interval> box);

    int dim() const { return static_cast<int>(coords_.size()); }
    const std::string& label() const { return label_; }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<Interval>& box() const { return box_; }

    const Expr& component(int i, int j) const;
    void set_component(int i, int j, Expr e);
    void set_component(int i, int j, std::string_view source);

    std::optional<Signature> signature_hint;
    std::uint64_t seed = kDefaultSeed;
    std::string provenance;

    void set_label(std::string l) { label_ = std::move(l); }
    void set_box(std::vector<Interval> b);

    // Throws InputError when a component uses a name that is not a coordinate.
    void validate() const;

private:
    std::string label_;
    std::vector<std::string> coords_;
    std::vector<Interval> box_;
    std::vector<Expr> comps_;  // packed upper triangle, row major
};

std::size_t packed_index(int n, int i, int j);

// g as a matrix jet at `point`.
MatrixJet metric_jet(const MetricSpec& m, std::span<const double> point, int order);
Eigen::MatrixXd metric_value(const MetricSpec& m, std::span<const double> point);

// Eigenvalue sign count with relative tolerance 1e-10.
Signature signature_of(const Eigen::MatrixXd& g);
// |det g| < 1e-12 * (max |eigenvalue|)^n.
bool is_degenerate(const Eigen::MatrixXd& g);

// Uniform doubles taken from the raw bits of mt19937_64, whose output
// sequence is fixed by the standard (the distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int below(int n) { return static_cast<int>(uniform() * n); }

private:
    std::mt19937_64 eng_;
};

// Seeded sample points in the box, skipping points where g degenerates.
std::vector<Point> sample_points(const MetricSpec& m, int count, std::uint64_t seed);
std::vector<Point> sample_points(const MetricSpec& m, int count);
Point box_center(const MetricSpec& m);

}  // namespace geodeq
