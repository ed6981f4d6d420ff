#pragma once

#include "geodeq/cone.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace geodeq {

struct CorpusFact {
    std::string key;
    std::string value;
    std::string source;  // "closed form", "published example" or "computed"
};

struct CorpusEntry {
    std::string name;
    MetricSpec metric;
    std::optional<MetricSpec> base;     // cones: the metric the cone is built over
    std::optional<Expr> potential;      // cones: v with v_;ij = g_ij
    std::optional<MetricSpec> partner;  // pairs: the second metric
    std::optional<TensorField> L;       // parallel (1,1) field where one is known
    std::vector<CorpusFact> facts;

    // "metric", "base" or "gbar".
    const MetricSpec& part(const std::string& key) const;
};

MetricSpec flat_metric(int n, int negatives = 0);
// Stereographic chart of the unit sphere: 4 δ / (1 + |x|^2)^2.
MetricSpec sphere_metric(int n);
// Poincaré ball: 4 δ / (1 - |x|^2)^2.
MetricSpec hyperbolic_metric(int n);

CorpusEntry example1();
CorpusEntry example2();
CorpusEntry flat_projective_pair(int n);
// Flat R^n with the unit sphere in the central projection chart.
CorpusEntry gnomonic_pair(int n);
// R^k x cone(flat lorentzian R^{k1-1}) x cone(flat R^{k2-1}) x ...
CorpusEntry realization(int n, int k, const std::vector<int>& partition);

// Accepts names like "flat3", "flat(4,1)", "sphere2", "example1",
// "flat_projective_pair(3)" and "realization(7,0,4+4)".
CorpusEntry corpus_get(const std::string& spec);
// Names listed by `corpus list`.
std::vector<std::string> corpus_names();

}  // namespace geodeq
