#include "geodeq/canonical.hpp"

#include "geodeq/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>
#include <type_traits>

namespace geodeq {

namespace {

using cd = std::complex<double>;
template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

double spectral_norm(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

// ------------------------------------------------------------------ clustering

struct Cluster {
    std::vector<cd> members;
    cd mean() const { return std::accumulate(members.begin(), members.end(), cd{}) / double(members.size()); }
    double spread() const {
        const cd c = mean();
        double s = 0;
        for (const cd& z : members) s = std::max(s, std::abs(z - c));
        return s;
    }
    int size() const { return static_cast<int>(members.size()); }
};

struct Clustering {
    double tol = 0;
    double scale = 0;
    // eigenvalues of an m-block move by about (m ε)^{1/m} ‖L‖
    double radius(int m) const { return std::max(tol, 4 * std::pow(m * kEps, 1.0 / m) * scale); }
};

// Top-down: accept a set when it is tight, else cut its longest single-linkage edge.
void split_cluster(const Cluster& c, const Clustering& cl, std::vector<Cluster>& out) {
    if (c.size() == 1 || c.spread() <= cl.radius(c.size())) {
        out.push_back(c);
        return;
    }
    // Prim's tree, then drop its longest edge
    const int m = c.size();
    std::vector<int> parent(m, -1);
    std::vector<double> best(m, std::numeric_limits<double>::infinity());
    std::vector<bool> in(m, false);
    best[0] = 0;
    for (int it = 0; it < m; ++it) {
        int u = -1;
        for (int i = 0; i < m; ++i)
            if (!in[i] && (u < 0 || best[i] < best[u])) u = i;
        in[u] = true;
        for (int i = 0; i < m; ++i) {
            const double d = std::abs(c.members[i] - c.members[u]);
            if (!in[i] && d < best[i]) {
                best[i] = d;
                parent[i] = u;
            }
        }
    }
    int cut = 1;
    for (int i = 1; i < m; ++i)
        if (best[i] > best[cut]) cut = i;
    std::vector<int> side(m, 0);
    // members whose tree path to the root passes through cut
    for (int i = 0; i < m; ++i)
        for (int j = i; j >= 0; j = parent[j])
            if (j == cut) {
                side[i] = 1;
                break;
            }
    Cluster a, b;
    for (int i = 0; i < m; ++i) (side[i] ? b : a).members.push_back(c.members[i]);
    split_cluster(a, cl, out);
    split_cluster(b, cl, out);
}

struct EigenCluster {
    cd value;  // im > 0 for complex pairs
    int mult = 0;
    bool complex = false;
};

std::vector<EigenCluster> cluster_eigenvalues(const Eigen::MatrixXd& L, double tol, double& scale) {
    scale = spectral_norm(L);
    Clustering cl{tol < 0 ? 1e-7 * scale : tol, scale};
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(L, false).eigenvalues();
    Cluster all;
    for (int i = 0; i < ev.size(); ++i) all.members.push_back(ev[i]);
    std::vector<Cluster> parts;
    if (all.size() > 0) split_cluster(all, cl, parts);

    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            Cluster u = parts[i];
            u.members.insert(u.members.end(), parts[j].members.begin(), parts[j].members.end());
            if (u.spread() <= 10 * cl.radius(u.size())) {
                std::ostringstream os;
                os << "eigenvalues " << parts[i].mean() << " and " << parts[j].mean()
                   << " are too close to decide whether they coincide";
                throw IndecisionError(os.str());
            }
        }

    std::vector<EigenCluster> out;
    std::vector<const Cluster*> lower;
    for (const auto& c : parts) {
        const cd z = c.mean();
        if (std::fabs(z.imag()) <= cl.radius(c.size()))
            out.push_back({cd(z.real(), 0), c.size(), false});
        else if (z.imag() > 0)
            out.push_back({z, c.size(), true});
        else
            lower.push_back(&c);
    }
    for (const Cluster* c : lower) {
        const bool mirrored = std::any_of(out.begin(), out.end(), [&](const EigenCluster& e) {
            return e.complex && e.mult == c->size() && std::abs(e.value - std::conj(c->mean())) <= cl.radius(e.mult);
        });
        if (!mirrored) throw IndecisionError("complex eigenvalues do not pair up with their conjugates");
    }
    std::sort(out.begin(), out.end(), [](const EigenCluster& a, const EigenCluster& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

template <class T>
Mat<T> kernel_basis(const Mat<T>& m, int dim) {
    Eigen::JacobiSVD<Mat<T>> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(dim);
}

// Restriction of L - ρ to a generalized eigenspace, in an orthonormal basis Q of it.
template <class T>
struct Restricted {
    Mat<T> Q;  // ambient x m
    Mat<T> N;  // nilpotent part
    Mat<T> G;  // Q^T G Q
    T rho;
};

template <class T>
Restricted<T> restrict_to(const Mat<T>& L, const Mat<T>& G, const Mat<T>& Q) {
    Restricted<T> r;
    r.Q = Q;
    const int m = static_cast<int>(Q.cols());
    Mat<T> LW = Q.adjoint() * L * Q;
    r.rho = LW.trace() / T(m);
    r.N = LW - r.rho * Mat<T>::Identity(m, m);
    r.G = Q.transpose() * G * Q;
    return r;
}

template <class T>
Mat<T> power(const Mat<T>& a, int k) {
    Mat<T> p = Mat<T>::Identity(a.rows(), a.cols());
    for (int i = 0; i < k; ++i) p = p * a;
    return p;
}

template <class T>
double max_singular(const Mat<T>& a) {
    if (a.size() == 0) return 0;
    return Eigen::JacobiSVD<Mat<T>>(a).singularValues()(0);
}

// ------------------------------------------------------------------ chains

template <class T>
struct Chain {
    Mat<T> vectors;  // e_1 .. e_k, with N e_j = e_{j-1}
    int sign = 0;
};

template <class T>
T pairing_target(T d0);
template <>
double pairing_target(double d0) {
    return d0 > 0 ? 1.0 : -1.0;
}
template <>
cd pairing_target(cd) {
    return cd(0, 2);
}

// The chains of a nilpotent N, self-adjoint for the bilinear form G, with
// G(e_a, e_b) = τ δ_{a+b,k+1}; longest chains first.
template <class T>
void build_chains(const Mat<T>& G, const Mat<T>& N, const Mat<T>& basis, double scale, std::vector<Chain<T>>& out) {
    const int d = static_cast<int>(G.rows());
    if (d == 0) return;
    int k = 0;
    Mat<T> p = Mat<T>::Identity(d, d);
    std::vector<Mat<T>> pw{p};
    for (int j = 1; j <= d; ++j) {
        p = p * N;
        if (max_singular(p) <= 1e-7 * std::pow(scale, j)) {
            k = j;
            break;
        }
        pw.push_back(p);
    }
    if (k == 0) throw VerificationError("restriction to a generalized eigenspace is not nilpotent");

    // a vector with G(x, N^{k-1} x) far from zero
    const Mat<T> S = G * pw[k - 1];
    Vec<T> x = Vec<T>::Zero(d);
    double bestq = -1;
    auto consider = [&](const Vec<T>& y) {
        const double q = std::abs((y.transpose() * S * y)(0, 0)) / y.squaredNorm();
        if (q > bestq) {
            bestq = q;
            x = y;
        }
    };
    for (int a = 0; a < d; ++a) {
        consider(Vec<T>::Unit(d, a));
        for (int b = a + 1; b < d; ++b) {
            consider(Vec<T>::Unit(d, a) + Vec<T>::Unit(d, b));
            if constexpr (!std::is_same_v<T, double>) consider(Vec<T>::Unit(d, a) + T(0, 1) * Vec<T>::Unit(d, b));
        }
    }

    // x' = p(N) x with p^2 = τ / Σ_j G(x, N^{k-1-j} x) t^j mod t^k
    std::vector<T> dser(k), q(k), s(k);
    for (int j = 0; j < k; ++j) dser[j] = (x.transpose() * G * pw[k - 1 - j] * x)(0, 0);
    const T tau = pairing_target(dser[0]);
    q[0] = tau / dser[0];
    for (int n = 1; n < k; ++n) {
        T acc = T(0);
        for (int j = 1; j <= n; ++j) acc += dser[j] * q[n - j];
        q[n] = -acc / dser[0];
    }
    s[0] = std::sqrt(q[0]);
    for (int n = 1; n < k; ++n) {
        T acc = q[n];
        for (int j = 1; j < n; ++j) acc -= s[j] * s[n - j];
        s[n] = acc / (T(2) * s[0]);
    }
    Vec<T> top = Vec<T>::Zero(d);
    for (int j = 0; j < k; ++j) top += s[j] * (pw[j] * x);

    Mat<T> E(d, k);
    for (int j = 0; j < k; ++j) E.col(j) = pw[k - 1 - j] * top;
    Chain<T> c;
    c.vectors = basis * E;
    if constexpr (std::is_same_v<T, double>) c.sign = tau > 0 ? 1 : -1;
    out.push_back(c);

    if (d == k) return;
    const Mat<T> Z = kernel_basis<T>(E.transpose() * G, d - k);
    build_chains<T>(Z.transpose() * G * Z, Z.adjoint() * N * Z, basis * Z, scale, out);
}

Eigen::MatrixXd antidiagonal(int m) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) f(i, m - 1 - i) = 1;
    return f;
}

}  // namespace

bool check_self_adjoint(const Eigen::MatrixXd& G, const Eigen::MatrixXd& L) {
    if (G.rows() != G.cols() || L.rows() != L.cols() || G.rows() != L.rows())
        throw InputError("G and L must be square matrices of the same size");
    const Eigen::MatrixXd gl = G * L;
    return (gl - gl.transpose()).norm() < 1e-10 * gl.norm() || gl.norm() == 0;
}

bool operator==(const PairBlock& a, const PairBlock& b) {
    return a.complex == b.complex && a.re == b.re && a.im == b.im && a.size == b.size && a.sign == b.sign;
}

Eigen::MatrixXd block_form_G(const std::vector<PairBlock>& blocks) {
    int n = 0;
    for (const auto& b : blocks) n += b.dim();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    int at = 0;
    for (const auto& b : blocks) {
        g.block(at, at, b.dim(), b.dim()) = (b.complex ? 1.0 : double(b.sign)) * antidiagonal(b.dim());
        at += b.dim();
    }
    return g;
}

Eigen::MatrixXd block_form_L(const std::vector<PairBlock>& blocks) {
    int n = 0;
    for (const auto& b : blocks) n += b.dim();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    int at = 0;
    for (const auto& b : blocks) {
        if (!b.complex) {
            for (int i = 0; i < b.size; ++i) {
                l(at + i, at + i) = b.re;
                if (i + 1 < b.size) l(at + i, at + i + 1) = 1;
            }
        } else {
            for (int i = 0; i < b.size; ++i) {
                const int r = at + 2 * i;
                l(r, r) = l(r + 1, r + 1) = b.re;
                l(r, r + 1) = b.im;
                l(r + 1, r) = -b.im;
                if (i + 1 < b.size) l(r, r + 2) = l(r + 1, r + 3) = 1;
            }
        }
        at += b.dim();
    }
    return l;
}

PairBlocks canonical_pair_form(const Eigen::MatrixXd& G, const Eigen::MatrixXd& L, double tol) {
    if (!check_self_adjoint(G, L)) throw InputError("L is not self-adjoint with respect to G");
    if ((G - G.transpose()).norm() > 1e-12 * G.norm()) throw InputError("G is not symmetric");
    if (is_degenerate(G)) throw InputError("G is degenerate");
    const int n = static_cast<int>(G.rows());
    double scale = 0;
    const auto clusters = cluster_eigenvalues(L, tol, scale);

    PairBlocks pb;
    pb.P.resize(n, n);
    int at = 0;
    for (const auto& c : clusters) {
        const Eigen::MatrixXd A = L - c.value.real() * Eigen::MatrixXd::Identity(n, n);
        if (!c.complex) {
            const Eigen::MatrixXd Q = kernel_basis<double>(power<double>(A, c.mult), c.mult);
            const auto r = restrict_to<double>(L, G, Q);
            std::vector<Chain<double>> chains;
            build_chains<double>(r.G, r.N, r.Q, scale, chains);
            for (const auto& ch : chains) {
                pb.blocks.push_back({false, r.rho, 0, static_cast<int>(ch.vectors.cols()), ch.sign});
                pb.P.middleCols(at, ch.vectors.cols()) = ch.vectors;
                at += static_cast<int>(ch.vectors.cols());
            }
        } else {
            const double b2 = c.value.imag() * c.value.imag();
            const Eigen::MatrixXd quad = A * A + b2 * Eigen::MatrixXd::Identity(n, n);
            const Eigen::MatrixXd Q = kernel_basis<double>(power<double>(quad, c.mult), 2 * c.mult);
            const Eigen::MatrixXcd LW = (Q.transpose() * L * Q).cast<cd>();
            const Eigen::MatrixXcd GW = (Q.transpose() * G * Q).cast<cd>();
            const Eigen::MatrixXcd shifted = LW - c.value * Eigen::MatrixXcd::Identity(2 * c.mult, 2 * c.mult);
            const Eigen::MatrixXcd U = kernel_basis<cd>(power<cd>(shifted, c.mult), c.mult);
            const auto r = restrict_to<cd>(LW, GW, U);
            std::vector<Chain<cd>> chains;
            build_chains<cd>(r.G, r.N, r.Q, scale, chains);
            for (const auto& ch : chains) {
                const int k = static_cast<int>(ch.vectors.cols());
                pb.blocks.push_back({true, r.rho.real(), r.rho.imag(), k, 0});
                for (int j = 0; j < k; ++j) {
                    pb.P.col(at + 2 * j) = Q * ch.vectors.col(j).real();
                    pb.P.col(at + 2 * j + 1) = Q * ch.vectors.col(j).imag();
                }
                at += 2 * k;
            }
        }
    }
    if (at != n) throw VerificationError("generalized eigenspaces do not fill the space");

    const Eigen::MatrixXd FG = pb.form_G();
    const Eigen::MatrixXd FL = pb.form_L();
    pb.residual_G = (pb.P.transpose() * G * pb.P - FG).cwiseAbs().maxCoeff();
    pb.residual_L = (pb.P.partialPivLu().solve(L * pb.P) - FL).cwiseAbs().maxCoeff();
    const double lscale = std::max(1.0, FL.cwiseAbs().maxCoeff());
    if (pb.residual_G > 1e-8 || pb.residual_L > 1e-8 * lscale) {
        std::ostringstream os;
        os << "canonical basis misses the block form (G residual " << pb.residual_G << ", L residual "
           << pb.residual_L << ")";
        throw VerificationError(os.str());
    }
    return pb;
}

double reconstruction_residual(const PairBlocks& pb, const Eigen::MatrixXd& G, const Eigen::MatrixXd& L) {
    const Eigen::MatrixXd Pinv = pb.P.inverse();
    const Eigen::MatrixXd g = Pinv.transpose() * pb.form_G() * Pinv;
    const Eigen::MatrixXd l = pb.P * pb.form_L() * Pinv;
    return std::max((g - G).cwiseAbs().maxCoeff() / std::max(1.0, G.cwiseAbs().maxCoeff()),
                    (l - L).cwiseAbs().maxCoeff() / std::max(1.0, L.cwiseAbs().maxCoeff()));
}

std::vector<JordanEigenvalue> jordan_structure(const Eigen::MatrixXd& L, double tol) {
    if (L.rows() != L.cols()) throw InputError("L must be square");
    const int n = static_cast<int>(L.rows());
    double scale = 0;
    const auto clusters = cluster_eigenvalues(L, tol, scale);
    std::vector<JordanEigenvalue> out;
    for (const auto& c : clusters) {
        // nilpotent part on the generalized eigenspace, over C
        const Eigen::MatrixXcd Lc = L.cast<cd>();
        const Eigen::MatrixXcd A = Lc - c.value * Eigen::MatrixXcd::Identity(n, n);
        const Eigen::MatrixXcd Q = kernel_basis<cd>(power<cd>(A, c.mult), c.mult);
        const auto r = restrict_to<cd>(Lc, Lc, Q);
        JordanEigenvalue je;
        je.re = r.rho.real();
        je.im = c.complex ? r.rho.imag() : 0.0;
        je.algebraic = c.mult;
        je.ranks.push_back(n);
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(c.mult, c.mult);
        std::vector<int> local{c.mult};
        for (int j = 1; local.back() > 0; ++j) {
            p = p * r.N;
            int rank = 0;
            if (p.size() > 0) {
                const auto sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(p).singularValues();
                for (int i = 0; i < sv.size(); ++i)
                    if (sv[i] > 1e-7 * std::pow(scale, j)) ++rank;
            }
            if (rank >= local.back()) throw VerificationError("restriction to a generalized eigenspace is not nilpotent");
            local.push_back(rank);
            je.ranks.push_back(n - c.mult + rank);
        }
        je.geometric = c.mult - local[1];
        // blocks of size >= j: local[j-1] - local[j]
        for (std::size_t j = local.size() - 1; j >= 1; --j) {
            const int at_least = local[j - 1] - local[j];
            const int longer = j + 1 < local.size() ? local[j] - local[j + 1] : 0;
            for (int t = 0; t < at_least - longer; ++t) je.partition.push_back(static_cast<int>(j));
        }
        out.push_back(je);
    }
    return out;
}

RandomPair random_self_adjoint_pair(Signature sig, Rng& rng, bool single_real_eigenvalue) {
    const int n = sig.first + sig.second;
    if (n <= 0 || sig.first < 0 || sig.second < 0) throw InputError("signature must have positive dimension");
    static const double reals[] = {-2, -1, 0, 1, 2};
    static const cd complexes[] = {{0, 1}, {1, 1}, {-1, 2}, {0, 2}, {1, 2}};
    RandomPair rp;
    const double shared = reals[rng.below(5)];
    for (;;) {
        rp.blocks.clear();
        int left = n, neg = 0;
        while (left > 0) {
            PairBlock b;
            if (!single_real_eigenvalue && left >= 2 && rng.uniform() < 0.3) {
                b.complex = true;
                b.size = 1 + rng.below(left / 2);
                const cd z = complexes[rng.below(5)];
                b.re = z.real();
                b.im = z.imag();
                neg += b.size;
            } else {
                b.size = 1 + rng.below(left);
                b.sign = rng.uniform() < 0.5 ? 1 : -1;
                b.re = single_real_eigenvalue ? shared : reals[rng.below(5)];
                neg += b.sign > 0 ? b.size / 2 : (b.size + 1) / 2;
            }
            left -= b.dim();
            rp.blocks.push_back(b);
        }
        if (neg == sig.first) break;
    }
    auto orthogonal = [&] {
        Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return rng.uniform(-1, 1); });
        return Eigen::MatrixXd(Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ());
    };
    Eigen::VectorXd s = Eigen::VectorXd::NullaryExpr(n, [&] { return std::exp(rng.uniform(-0.5, 0.5)); });
    const Eigen::MatrixXd P = orthogonal() * s.asDiagonal() * orthogonal();
    const Eigen::MatrixXd Pinv = P.inverse();
    rp.G = Pinv.transpose() * block_form_G(rp.blocks) * Pinv;
    rp.G = 0.5 * (rp.G + rp.G.transpose()).eval();
    rp.L = P * block_form_L(rp.blocks) * Pinv;
    return rp;
}

std::vector<Eigen::MatrixXd> skew_commutant(const Eigen::MatrixXd& G, const Eigen::MatrixXd& L) {
    const int n = static_cast<int>(G.rows());
    // unknown X stored column major; rows: XL - LX, then GX + X^T G
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(2 * n * n, n * n);
    auto var = [n](int i, int j) { return j * n + i; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int r = i * n + j;
            for (int q = 0; q < n; ++q) {
                sys(r, var(i, q)) += L(q, j);
                sys(r, var(q, j)) -= L(i, q);
                sys(n * n + r, var(q, j)) += G(i, q);
                sys(n * n + r, var(q, i)) += G(q, j);
            }
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-10 * std::max(1.0, sv[0])) ++rank;
    std::vector<Eigen::MatrixXd> out;
    for (int c = rank; c < n * n; ++c) out.push_back(Eigen::Map<const Eigen::MatrixXd>(svd.matrixV().col(c).data(), n, n));
    return out;
}

}  // namespace geodeq
