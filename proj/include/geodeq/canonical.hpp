#pragma once

#include "geodeq/metric.hpp"

#include <Eigen/Dense>
#include <vector>

namespace geodeq {

// True iff ‖GL - (GL)^T‖ < 1e-10 ‖GL‖.
bool check_self_adjoint(const Eigen::MatrixXd& G, const Eigen::MatrixXd& L);

// One block of the canonical pair form.
// Real: L = ρ I + ones on the superdiagonal, G = ε F_m.
// Complex: m diagonal blocks [[α, β], [-β, α]] with I_2 on the block superdiagonal, G = F_{2m}.
struct PairBlock {
    bool complex = false;
    double re = 0;
    double im = 0;  // β > 0 for complex blocks
    int size = 0;   // m
    int sign = 0;   // ε for real blocks, 0 for complex ones
    int dim() const { return complex ? 2 * size : size; }
};

bool operator==(const PairBlock& a, const PairBlock& b);

Eigen::MatrixXd block_form_G(const std::vector<PairBlock>& blocks);
Eigen::MatrixXd block_form_L(const std::vector<PairBlock>& blocks);

struct PairBlocks {
    std::vector<PairBlock> blocks;
    Eigen::MatrixXd P;          // columns: the canonical basis
    double residual_G = 0;      // max |P^T G P - block form|
    double residual_L = 0;      // max |P^{-1} L P - block form|
    Eigen::MatrixXd form_G() const { return block_form_G(blocks); }
    Eigen::MatrixXd form_L() const { return block_form_L(blocks); }
};

// Default clustering tolerance 1e-7 ‖L‖ when tol < 0.
// Throws InputError if the pair is not self-adjoint or G is degenerate,
// IndecisionError if eigenvalue clusters are too close to separate and
// VerificationError if the constructed basis misses the block form by more than 1e-8.
PairBlocks canonical_pair_form(const Eigen::MatrixXd& G, const Eigen::MatrixXd& L, double tol = -1);

// max of |P^{-T} F P^{-1} - G| and |P J P^{-1} - L|.
double reconstruction_residual(const PairBlocks& pb, const Eigen::MatrixXd& G, const Eigen::MatrixXd& L);

struct JordanEigenvalue {
    double re = 0;
    double im = 0;  // > 0 for a complex-conjugate pair, reported once
    int algebraic = 0;
    int geometric = 0;
    std::vector<int> partition;  // block sizes, decreasing
    std::vector<int> ranks;      // rank (L - ρ I)^j for j = 0, 1, ..., stable
};

std::vector<JordanEigenvalue> jordan_structure(const Eigen::MatrixXd& L, double tol = -1);

// Seeded self-adjoint pair of signature sig (negatives, positives) with a known block structure.
struct RandomPair {
    Eigen::MatrixXd G, L;
    std::vector<PairBlock> blocks;
};

RandomPair random_self_adjoint_pair(Signature sig, Rng& rng, bool single_real_eigenvalue = false);

// Basis of the G-skew-adjoint endomorphisms commuting with L.
std::vector<Eigen::MatrixXd> skew_commutant(const Eigen::MatrixXd& G, const Eigen::MatrixXd& L);

}  // namespace geodeq
