#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace geodeq {

// Index tables for truncated Taylor polynomials in `nvars` variables up to
// total degree `order`. Multi-indices are enumerated in graded lexicographic
// order: by degree, then descending exponent tuple. A lower order space is a
// prefix of a higher one, which is what makes truncation a resize.
class JetSpace {
public:
    struct Product {
        std::uint32_t lhs, rhs, out;
    };

    static std::shared_ptr<const JetSpace> get(int nvars, int order);

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    std::size_t size() const { return indices_.size(); }
    // Number of multi-indices of degree <= d.
    std::size_t size_upto(int d) const;

    std::span<const int> index(std::size_t pos) const;
    int degree(std::size_t pos) const { return degrees_[pos]; }
    std::size_t position(std::span<const int> alpha) const;
    // Position of alpha + e_var, or npos when that exceeds the order.
    std::size_t raise(std::size_t pos, int var) const { return raise_[pos * nvars_ + var]; }
    // alpha! for the multi-index at pos.
    double factorial(std::size_t pos) const { return factorials_[pos]; }

    // All (i, j, k) with index(i) + index(j) = index(k), sorted by k.
    const std::vector<Product>& products() const { return products_; }
    // Number of leading entries of products() whose output has degree <= d.
    std::size_t products_upto(int d) const { return product_limits_[d]; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    JetSpace(int nvars, int order);

private:
    int nvars_;
    int order_;
    std::vector<int> indices_flat_;
    std::vector<int> indices_;  // start offsets into indices_flat_
    std::vector<int> degrees_;
    std::vector<std::size_t> level_sizes_;
    std::vector<std::size_t> raise_;
    std::vector<double> factorials_;
    std::vector<Product> products_;
    std::vector<std::size_t> product_limits_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

enum class Elementary { Exp, Log, Sqrt, Sin, Cos, Abs };

const char* elementary_name(Elementary f);

class Jet {
public:
    Jet() = default;
    Jet(JetSpacePtr space, std::vector<double> coeffs);

    static Jet constant(JetSpacePtr space, double value);
    static Jet variable(JetSpacePtr space, int var, double value);

    const JetSpacePtr& space() const { return space_; }
    int order() const { return space_->order(); }
    int nvars() const { return space_->nvars(); }
    std::size_t size() const { return c_.size(); }

    double value() const { return c_[0]; }
    double coeff(std::size_t pos) const { return c_[pos]; }
    double& coeff(std::size_t pos) { return c_[pos]; }
    const std::vector<double>& coeffs() const { return c_; }

    // True partial derivative alpha! * coeff[alpha].
    double partial(std::span<const int> alpha) const;
    // d/dx_var as a jet one order lower.
    Jet derivative(int var) const;
    Jet truncated(int order) const;
    // True when every non-constant coefficient is exactly zero.
    bool is_constant() const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a);
    friend Jet operator*(double s, const Jet& a);
    friend Jet operator+(double s, const Jet& a);

private:
    JetSpacePtr space_;
    std::vector<double> c_;
};

Jet reciprocal(const Jet& j);
Jet compose(Elementary f, const Jet& j);
Jet pow_int(const Jet& j, long n);
Jet pow_real(const Jet& j, double p);
// Composition with a univariate function given by its Taylor coefficients at
// j.value(): result = sum_k taylor[k] (j - j.value())^k.
Jet compose_taylor(std::span<const double> taylor, const Jet& j);

// Jet whose coefficients are matrices: M(x) = sum_alpha M_alpha (x - p)^alpha.
class MatrixJet {
public:
    MatrixJet() = default;
    MatrixJet(JetSpacePtr space, int rows, int cols);
    static MatrixJet constant(JetSpacePtr space, const Eigen::MatrixXd& m);

    const JetSpacePtr& space() const { return space_; }
    int order() const { return space_->order(); }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Eigen::MatrixXd& coeff(std::size_t pos) const { return c_[pos]; }
    Eigen::MatrixXd& coeff(std::size_t pos) { return c_[pos]; }
    const Eigen::MatrixXd& value() const { return c_[0]; }

    Jet entry(int i, int j) const;
    void set_entry(int i, int j, const Jet& v);

    MatrixJet derivative(int var) const;
    MatrixJet truncated(int order) const;
    MatrixJet transpose() const;
    // Inverse via the Neumann series around the value; throws when singular.
    MatrixJet inverse() const;
    double max_abs() const;

    MatrixJet& operator+=(const MatrixJet& o);
    MatrixJet& operator-=(const MatrixJet& o);
    friend MatrixJet operator+(const MatrixJet& a, const MatrixJet& b);
    friend MatrixJet operator-(const MatrixJet& a, const MatrixJet& b);
    friend MatrixJet operator*(const MatrixJet& a, const MatrixJet& b);
    friend MatrixJet operator*(double s, const MatrixJet& a);
    friend MatrixJet operator*(const Jet& s, const MatrixJet& a);

private:
    JetSpacePtr space_;
    int rows_ = 0, cols_ = 0;
    std::vector<Eigen::MatrixXd> c_;
};

// [A, B] = AB - BA.
MatrixJet commutator(const MatrixJet& a, const MatrixJet& b);

// Pick the space with the lower order (operands must share nvars).
const JetSpacePtr& common_space(const JetSpacePtr& a, const JetSpacePtr& b);

}  // namespace geodeq
