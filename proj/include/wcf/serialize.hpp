#pragma once

#include "wcf/assignments.hpp"
#include "wcf/decompose.hpp"
#include "wcf/instances.hpp"
#include "wcf/solvers.hpp"
#include "wcf/verify.hpp"

#include <json.hpp>

namespace wcf {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Non-finite values become the strings "inf", "-inf", "nan".
Json number(double x);
double number_from(const Json& j);

Json to_json(const Vec& v);
Json to_json(const Mat& m);  // row-major nested arrays
Vec vec_from_json(const Json& j);
Mat mat_from_json(const Json& j);

Json to_json(const Assignment& t);
Assignment assignment_from_json(const Json& j);

Json to_json(const LimitSymMatrix& m);
/// H, G, w, v, shape and vector power. Inverses and frames are not stored.
Json to_json(const ExtendedMatrixInstance& inst);
/// Rebuilds an instance; positive inverses are recomputed and frames set to the identity.
ExtendedMatrixInstance instance_from_json(const Json& j);

Json to_json(const SolutionCertificate& c);
Json to_json(const Solution& s);
Json to_json(const DecompositionTerm& t);
DecompositionTerm term_from_json(const Json& j);
Json to_json(const ValidityReport& r);

}  // namespace wcf
