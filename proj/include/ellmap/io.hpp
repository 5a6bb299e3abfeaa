#pragma once

#include <string>

#include <json.hpp>

#include "ellmap/bodies.hpp"
#include "ellmap/ellipsoids.hpp"
#include "ellmap/oracle.hpp"
#include "ellmap/solver.hpp"

namespace ellmap::io {

using Json = nlohmann::json;

/// Reads and parses a JSON file. Throws InvalidInput.
Json load_json(const std::string& path);

// Body schema:
//   {"type": "polytope_h", "dim": n, "facets": [[...], ...]}
//   {"type": "polytope_v", "dim": n, "generators": [[...], ...]}
//   {"type": "lp_ball", "dim": n, "p": real | "inf", "radius": r}
//   {"type": "linear_image", "dim": n, "matrix": [[...]], "inner": body}
//   {"type": "cube" | "cross_polytope", "dim": n}
// Unknown fields are rejected.
ConvexBody parse_body(const Json& j);
Json to_json(const ConvexBody& k);

/// {"dim": n, "Q": [[...]]}
Ellipsoid parse_ellipsoid(const Json& j);
Json to_json(const Ellipsoid& e);

/// Solver fields plus an optional "grid" object for the oracle.
struct RunConfig {
  SolveConfig solve;
  GridConfig grid;
};
RunConfig parse_config(const Json& j);

Json to_json(const Vector& v);
Json to_json(const SymMatrix& m);
Vector parse_vector(const Json& j, int dim, const char* what);
Matrix parse_matrix(const Json& j, int rows, int cols, const char* what);

}  // namespace ellmap::io
