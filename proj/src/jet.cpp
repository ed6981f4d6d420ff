#include "geodeq/jet.hpp"

#include "geodeq/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace geodeq {

namespace {

std::uint64_t encode(std::span<const int> alpha, int base) {
    std::uint64_t key = 0;
    for (int a : alpha) key = key * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(a);
    return key;
}

void enumerate_degree(int nvars, int d, std::vector<int>& cur, std::vector<int>& out) {
    const int k = static_cast<int>(cur.size());
    if (k == nvars - 1) {
        cur.push_back(d);
        out.insert(out.end(), cur.begin(), cur.end());
        cur.pop_back();
        return;
    }
    for (int e = d; e >= 0; --e) {
        cur.push_back(e);
        enumerate_degree(nvars, d - e, cur, out);
        cur.pop_back();
    }
}

struct SpaceKeyHash {
    std::size_t operator()(const std::pair<int, int>& k) const { return std::hash<int>()(k.first * 64 + k.second); }
};

}  // namespace

JetSpace::JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
    if (nvars < 1 || order < 0) throw InputError("jet space needs nvars >= 1 and order >= 0");
    std::vector<int> cur;
    for (int d = 0; d <= order; ++d) {
        enumerate_degree(nvars, d, cur, indices_flat_);
        level_sizes_.push_back(indices_flat_.size() / nvars);
    }
    const std::size_t n = indices_flat_.size() / nvars;
    indices_.resize(n);
    degrees_.resize(n);
    factorials_.resize(n);
    std::unordered_map<std::uint64_t, std::size_t> lookup;
    for (std::size_t p = 0; p < n; ++p) {
        indices_[p] = static_cast<int>(p * nvars);
        auto a = index(p);
        int deg = 0;
        double f = 1;
        for (int e : a) {
            deg += e;
            for (int t = 2; t <= e; ++t) f *= t;
        }
        degrees_[p] = deg;
        factorials_[p] = f;
        lookup.emplace(encode(a, order + 1), p);
    }
    raise_.assign(n * nvars, npos);
    std::vector<int> tmp(nvars);
    for (std::size_t p = 0; p < n; ++p) {
        if (degrees_[p] == order) continue;
        auto a = index(p);
        for (int v = 0; v < nvars; ++v) {
            std::copy(a.begin(), a.end(), tmp.begin());
            ++tmp[v];
            raise_[p * nvars + v] = lookup.at(encode(tmp, order + 1));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (degrees_[i] + degrees_[j] > order) continue;
            auto a = index(i);
            auto b = index(j);
            for (int v = 0; v < nvars; ++v) tmp[v] = a[v] + b[v];
            products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                 static_cast<std::uint32_t>(lookup.at(encode(tmp, order + 1)))});
        }
    }
    std::stable_sort(products_.begin(), products_.end(),
                     [](const Product& x, const Product& y) { return x.out < y.out; });
    product_limits_.resize(order + 1);
    for (int d = 0; d <= order; ++d) {
        const std::size_t lim = level_sizes_[d];
        product_limits_[d] = static_cast<std::size_t>(
            std::lower_bound(products_.begin(), products_.end(), lim,
                             [](const Product& x, std::size_t v) { return x.out < v; }) -
            products_.begin());
    }
}

std::shared_ptr<const JetSpace> JetSpace::get(int nvars, int order) {
    static std::mutex mu;
    static std::unordered_map<std::pair<int, int>, std::shared_ptr<const JetSpace>, SpaceKeyHash> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(nvars, order);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto sp = std::make_shared<const JetSpace>(nvars, order);
    cache.emplace(key, sp);
    return sp;
}

std::size_t JetSpace::size_upto(int d) const {
    if (d < 0) return 0;
    return level_sizes_[std::min(d, order_)];
}

std::span<const int> JetSpace::index(std::size_t pos) const {
    return {indices_flat_.data() + indices_[pos], static_cast<std::size_t>(nvars_)};
}

std::size_t JetSpace::position(std::span<const int> alpha) const {
    if (static_cast<int>(alpha.size()) != nvars_) throw InputError("multi-index has wrong length");
    int deg = 0;
    for (int a : alpha) {
        if (a < 0) throw InputError("negative multi-index entry");
        deg += a;
    }
    if (deg > order_) throw InputError("multi-index exceeds jet order");
    std::size_t p = 0;
    for (int v = 0; v < nvars_; ++v)
        for (int t = 0; t < alpha[v]; ++t) p = raise(p, v);
    return p;
}

const JetSpacePtr& common_space(const JetSpacePtr& a, const JetSpacePtr& b) {
    if (a->nvars() != b->nvars()) throw InputError("jets over different variable counts");
    return a->order() <= b->order() ? a : b;
}

const char* elementary_name(Elementary f) {
    switch (f) {
        case Elementary::Exp: return "exp";
        case Elementary::Log: return "log";
        case Elementary::Sqrt: return "sqrt";
        case Elementary::Sin: return "sin";
        case Elementary::Cos: return "cos";
        case Elementary::Abs: return "abs";
    }
    return "?";
}

// ---- Jet ----

Jet::Jet(JetSpacePtr space, std::vector<double> coeffs) : space_(std::move(space)), c_(std::move(coeffs)) {
    if (c_.size() != space_->size()) throw InputError("jet coefficient count mismatch");
}

Jet Jet::constant(JetSpacePtr space, double value) {
    std::vector<double> c(space->size(), 0.0);
    c[0] = value;
    return Jet(std::move(space), std::move(c));
}

Jet Jet::variable(JetSpacePtr space, int var, double value) {
    Jet j = constant(space, value);
    if (space->order() >= 1) j.c_[1 + var] = 1.0;
    return j;
}

double Jet::partial(std::span<const int> alpha) const {
    const std::size_t p = space_->position(alpha);
    return space_->factorial(p) * c_[p];
}

Jet Jet::derivative(int var) const {
    if (order() < 1) throw InputError("cannot differentiate an order-0 jet");
    auto sp = JetSpace::get(nvars(), order() - 1);
    std::vector<double> d(sp->size());
    for (std::size_t p = 0; p < d.size(); ++p) {
        const std::size_t q = space_->raise(p, var);
        d[p] = c_[q] * (space_->index(q)[var]);
    }
    return Jet(std::move(sp), std::move(d));
}

Jet Jet::truncated(int order) const {
    if (order >= this->order()) return *this;
    auto sp = JetSpace::get(nvars(), order);
    std::vector<double> c(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(sp->size()));
    return Jet(std::move(sp), std::move(c));
}

bool Jet::is_constant() const {
    for (std::size_t p = 1; p < c_.size(); ++p)
        if (c_[p] != 0.0) return false;
    return true;
}

Jet& Jet::operator+=(const Jet& o) {
    if (o.order() < order()) *this = truncated(o.order());
    for (std::size_t p = 0; p < c_.size(); ++p) c_[p] += o.c_[p];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    if (o.order() < order()) *this = truncated(o.order());
    for (std::size_t p = 0; p < c_.size(); ++p) c_[p] -= o.c_[p];
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
    Jet r = a.order() <= b.order() ? a : a.truncated(b.order());
    r += b;
    return r;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet r = a.order() <= b.order() ? a : a.truncated(b.order());
    r -= b;
    return r;
}

Jet operator-(const Jet& a) {
    Jet r = a;
    r *= -1.0;
    return r;
}

Jet operator*(double s, const Jet& a) {
    Jet r = a;
    r *= s;
    return r;
}

Jet operator+(double s, const Jet& a) {
    Jet r = a;
    r.c_[0] += s;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    const JetSpacePtr& sp = common_space(a.space_, b.space_);
    std::vector<double> out(sp->size(), 0.0);
    const auto& prods = sp->products();
    const std::size_t lim = prods.size();
    for (std::size_t t = 0; t < lim; ++t) {
        const auto& pr = prods[t];
        out[pr.out] += a.c_[pr.lhs] * b.c_[pr.rhs];
    }
    return Jet(sp, std::move(out));
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet compose_taylor(std::span<const double> taylor, const Jet& j) {
    const int q = j.order();
    Jet h = j;
    h.coeff(0) = 0.0;
    Jet r = Jet::constant(j.space(), taylor[q]);
    for (int k = q - 1; k >= 0; --k) {
        r = r * h;
        r.coeff(0) += taylor[k];
    }
    return r;
}

namespace {

double binom_real(double p, int k) {
    double b = 1;
    for (int i = 0; i < k; ++i) b *= (p - i) / (i + 1);
    return b;
}

}  // namespace

Jet reciprocal(const Jet& j) {
    const double c = j.value();
    if (c == 0.0 || !std::isfinite(c)) throw DomainError("division by zero");
    std::vector<double> t(j.order() + 1);
    double ck = 1.0 / c;
    for (int k = 0; k <= j.order(); ++k) {
        t[k] = (k % 2 == 0 ? 1.0 : -1.0) * ck;
        ck /= c;
    }
    return compose_taylor(t, j);
}

Jet compose(Elementary f, const Jet& j) {
    const int q = j.order();
    const double c = j.value();
    std::vector<double> t(q + 1);
    switch (f) {
        case Elementary::Exp: {
            double e = std::exp(c), fact = 1;
            for (int k = 0; k <= q; ++k) {
                if (k > 0) fact *= k;
                t[k] = e / fact;
            }
            break;
        }
        case Elementary::Log: {
            if (!(c > 0)) throw DomainError("log of nonpositive value");
            t[0] = std::log(c);
            double ck = c;
            for (int k = 1; k <= q; ++k) {
                t[k] = (k % 2 == 1 ? 1.0 : -1.0) / (k * ck);
                ck *= c;
            }
            break;
        }
        case Elementary::Sqrt: {
            if (c < 0 || (c == 0 && q > 0)) throw DomainError("sqrt of negative value or derivative of sqrt at 0");
            for (int k = 0; k <= q; ++k) t[k] = binom_real(0.5, k) * std::pow(c, 0.5 - k);
            break;
        }
        case Elementary::Sin:
        case Elementary::Cos: {
            const double shift = f == Elementary::Cos ? std::numbers::pi / 2 : 0.0;
            double fact = 1;
            for (int k = 0; k <= q; ++k) {
                if (k > 0) fact *= k;
                t[k] = std::sin(c + shift + k * std::numbers::pi / 2) / fact;
            }
            break;
        }
        case Elementary::Abs: {
            if (c == 0 && q > 0) throw DomainError("abs is not differentiable at 0");
            return c >= 0 ? j : -j;
        }
    }
    return compose_taylor(t, j);
}

Jet pow_int(const Jet& j, long n) {
    if (n < 0) return pow_int(reciprocal(j), -n);
    Jet result = Jet::constant(j.space(), 1.0);
    Jet base = j;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

Jet pow_real(const Jet& j, double p) {
    const double c = j.value();
    if (!(c > 0)) throw DomainError("non-integer power of nonpositive base");
    std::vector<double> t(j.order() + 1);
    for (int k = 0; k <= j.order(); ++k) t[k] = binom_real(p, k) * std::pow(c, p - k);
    return compose_taylor(t, j);
}

// ---- MatrixJet ----

MatrixJet::MatrixJet(JetSpacePtr space, int rows, int cols)
    : space_(std::move(space)), rows_(rows), cols_(cols),
      c_(space_->size(), Eigen::MatrixXd::Zero(rows, cols)) {}

MatrixJet MatrixJet::constant(JetSpacePtr space, const Eigen::MatrixXd& m) {
    MatrixJet r(std::move(space), static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    r.c_[0] = m;
    return r;
}

Jet MatrixJet::entry(int i, int j) const {
    std::vector<double> c(c_.size());
    for (std::size_t p = 0; p < c_.size(); ++p) c[p] = c_[p](i, j);
    return Jet(space_, std::move(c));
}

void MatrixJet::set_entry(int i, int j, const Jet& v) {
    if (v.order() < order()) throw InputError("matrix jet entry has too low an order");
    for (std::size_t p = 0; p < c_.size(); ++p) c_[p](i, j) = v.coeff(p);
}

MatrixJet MatrixJet::derivative(int var) const {
    if (order() < 1) throw InputError("cannot differentiate an order-0 jet");
    MatrixJet r(JetSpace::get(space_->nvars(), order() - 1), rows_, cols_);
    for (std::size_t p = 0; p < r.c_.size(); ++p) {
        const std::size_t q = space_->raise(p, var);
        r.c_[p] = c_[q] * static_cast<double>(space_->index(q)[var]);
    }
    return r;
}

MatrixJet MatrixJet::truncated(int order) const {
    if (order >= this->order()) return *this;
    MatrixJet r;
    r.space_ = JetSpace::get(space_->nvars(), order);
    r.rows_ = rows_;
    r.cols_ = cols_;
    r.c_.assign(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(r.space_->size()));
    return r;
}

MatrixJet MatrixJet::transpose() const {
    MatrixJet r(space_, cols_, rows_);
    for (std::size_t p = 0; p < c_.size(); ++p) r.c_[p] = c_[p].transpose();
    return r;
}

MatrixJet MatrixJet::inverse() const {
    if (rows_ != cols_) throw InputError("inverse of non-square matrix jet");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(c_[0]);
    if (!lu.isInvertible()) throw DegenerateMetric("singular matrix in jet inverse");
    const Eigen::MatrixXd a0inv = lu.inverse();
    // A = A0 (I + X0) with X0 = A0^{-1} H; A^{-1} = (sum (-X0)^k) A0^{-1}.
    MatrixJet x(space_, rows_, cols_);
    for (std::size_t p = 1; p < c_.size(); ++p) x.c_[p] = -(a0inv * c_[p]);
    MatrixJet s = MatrixJet::constant(space_, Eigen::MatrixXd::Identity(rows_, cols_));
    for (int k = 0; k < order(); ++k) {
        s = x * s;
        s.c_[0] += Eigen::MatrixXd::Identity(rows_, cols_);
    }
    for (auto& m : s.c_) m = m * a0inv;
    return s;
}

double MatrixJet::max_abs() const {
    double m = 0;
    for (const auto& c : c_) m = std::max(m, c.cwiseAbs().maxCoeff());
    return m;
}

MatrixJet& MatrixJet::operator+=(const MatrixJet& o) {
    if (o.order() < order()) *this = truncated(o.order());
    for (std::size_t p = 0; p < c_.size(); ++p) c_[p] += o.c_[p];
    return *this;
}

MatrixJet& MatrixJet::operator-=(const MatrixJet& o) {
    if (o.order() < order()) *this = truncated(o.order());
    for (std::size_t p = 0; p < c_.size(); ++p) c_[p] -= o.c_[p];
    return *this;
}

MatrixJet operator+(const MatrixJet& a, const MatrixJet& b) {
    MatrixJet r = a.order() <= b.order() ? a : a.truncated(b.order());
    r += b;
    return r;
}

MatrixJet operator-(const MatrixJet& a, const MatrixJet& b) {
    MatrixJet r = a.order() <= b.order() ? a : a.truncated(b.order());
    r -= b;
    return r;
}

MatrixJet operator*(const MatrixJet& a, const MatrixJet& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix jet shape mismatch");
    const JetSpacePtr& sp = common_space(a.space_, b.space_);
    MatrixJet r(sp, a.rows_, b.cols_);
    for (const auto& pr : sp->products()) r.c_[pr.out].noalias() += a.c_[pr.lhs] * b.c_[pr.rhs];
    return r;
}

MatrixJet operator*(double s, const MatrixJet& a) {
    MatrixJet r = a;
    for (auto& m : r.c_) m *= s;
    return r;
}

MatrixJet operator*(const Jet& s, const MatrixJet& a) {
    const JetSpacePtr& sp = common_space(s.space(), a.space_);
    MatrixJet r(sp, a.rows_, a.cols_);
    for (const auto& pr : sp->products()) {
        const double w = s.coeff(pr.lhs);
        if (w != 0.0) r.c_[pr.out] += w * a.c_[pr.rhs];
    }
    return r;
}

MatrixJet commutator(const MatrixJet& a, const MatrixJet& b) { return a * b - b * a; }

}  // namespace geodeq
