#pragma once

#include "geodeq/canonical.hpp"
#include "geodeq/corpus.hpp"
#include "geodeq/mobility.hpp"
#include "geodeq/pairs.hpp"

#include "json.hpp"

#include <string>

namespace geodeq {

// Insertion-ordered, so output is byte-stable.
using Json = nlohmann::ordered_json;

// Metric file:
// {"label", "dim", "coords": [...], "signature_hint"?: {"negative", "positive"},
//  "components": {"i,j": "expr"} with 1 <= i <= j <= dim, "sample_box": [[lo, hi], ...],
//  "seed"?, "provenance"?}
// Missing components are zero. Throws InputError with the reason.
MetricSpec metric_from_json(const Json& j);
Json metric_to_json(const MetricSpec& m);

Json read_json_file(const std::string& path);
// A file path, or "corpus:<name>" with an optional "/metric", "/base" or "/gbar" suffix.
MetricSpec load_metric(const std::string& source);
// The corpus entry behind "corpus:<name>[/part]", if source names one.
std::optional<CorpusEntry> corpus_source(const std::string& source);

// Vector field: {"components": ["expr", ...]} or a bare array of expressions.
std::vector<Expr> field_from_json(const Json& j);
// Square matrix as an array of rows.
Eigen::MatrixXd matrix_from_json(const Json& j);

Json to_json(const Eigen::MatrixXd& m);
Json to_json(const Eigen::VectorXd& v);
Json to_json(const Tensor& t);
Json to_json(const GeometryAtPoint& g);
Json to_json(const HomReport& r);
Json to_json(const BSearchResult& r);
Json to_json(const MobilityReport& r);
Json to_json(const ProjIsoReport& r);
Json to_json(const PairReport& r);
Json to_json(const PairAtPoint& p);
Json to_json(const BarBReport& r);
Json to_json(const ProjectiveFieldReport& r);
Json to_json(const PairBlocks& pb);
Json to_json(const std::vector<JordanEigenvalue>& js);
Json to_json(const CorpusEntry& e);

std::string dump(const Json& j);

}  // namespace geodeq
