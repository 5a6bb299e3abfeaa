#include "ellmap/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <memory>
#include <string_view>

#include "ellmap/errors.hpp"

namespace ellmap::io {
namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(Errc::InvalidInput, msg); }

void require_object(const Json& j, const char* what) {
  if (!j.is_object()) invalid(std::string(what) + " must be a JSON object");
}

void reject_unknown(const Json& j, std::initializer_list<std::string_view> allowed,
                    const char* what) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) invalid(std::string(what) + ": unknown field \"" + key + "\"");
  }
}

const Json& field(const Json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) invalid(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) invalid(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(std::string(what) + " must be finite");
  return v;
}

int dimension(const Json& j, const char* what) {
  const Json& d = field(j, "dim", what);
  if (!d.is_number_integer() || d.get<long long>() < 1 || d.get<long long>() > 64) {
    invalid(std::string(what) + ": dim must be an integer in [1, 64]");
  }
  return d.get<int>();
}

std::vector<Vector> parse_rows(const Json& j, int dim, const char* what) {
  if (!j.is_array() || j.empty()) invalid(std::string(what) + " must be a nonempty array");
  std::vector<Vector> out;
  for (const auto& row : j) out.push_back(parse_vector(row, dim, what));
  return out;
}

}  // namespace

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    invalid(path + ": " + e.what());
  }
}

Vector parse_vector(const Json& j, int dim, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    invalid(std::string(what) + ": expected an array of " + std::to_string(dim) + " numbers");
  }
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = number(j[static_cast<std::size_t>(i)], what);
  return v;
}

Matrix parse_matrix(const Json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    invalid(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) m.row(i) = parse_vector(j[static_cast<std::size_t>(i)], cols, what);
  return m;
}

ConvexBody parse_body(const Json& j) {
  require_object(j, "body");
  const Json& type = field(j, "type", "body");
  if (!type.is_string()) invalid("body: type must be a string");
  const std::string t = type.get<std::string>();
  const int dim = dimension(j, "body");

  if (t == "polytope_h") {
    reject_unknown(j, {"type", "dim", "facets"}, "body");
    return ConvexBody::polytope_h(parse_rows(field(j, "facets", "body"), dim, "facets"));
  }
  if (t == "polytope_v") {
    reject_unknown(j, {"type", "dim", "generators"}, "body");
    return ConvexBody::polytope_v(parse_rows(field(j, "generators", "body"), dim, "generators"));
  }
  if (t == "lp_ball") {
    reject_unknown(j, {"type", "dim", "p", "radius"}, "body");
    const Json& pj = field(j, "p", "body");
    double p = 0.0;
    if (pj.is_string() && pj.get<std::string>() == "inf") {
      p = std::numeric_limits<double>::infinity();
    } else {
      p = number(pj, "p");
    }
    const double r = j.contains("radius") ? number(j["radius"], "radius") : 1.0;
    return ConvexBody::lp_ball(dim, p, r);
  }
  if (t == "linear_image") {
    reject_unknown(j, {"type", "dim", "matrix", "inner"}, "body");
    ConvexBody inner = parse_body(field(j, "inner", "body"));
    if (inner.dim() != dim) invalid("linear_image: inner dimension differs");
    return ConvexBody::wrap_linear_image(parse_matrix(field(j, "matrix", "body"), dim, dim, "matrix"),
                                         std::move(inner));
  }
  if (t == "cube" || t == "cross_polytope") {
    reject_unknown(j, {"type", "dim"}, "body");
    return t == "cube" ? ConvexBody::cube(dim) : ConvexBody::cross_polytope(dim);
  }
  invalid("body: unknown type \"" + t + "\"");
}

Json to_json(const ConvexBody& k) {
  Json out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PolytopeH>) {
          out = {{"type", "polytope_h"}, {"dim", k.dim()}, {"facets", Json::array()}};
          for (const auto& f : v.facets) out["facets"].push_back(to_json(f));
        } else if constexpr (std::is_same_v<T, PolytopeV>) {
          out = {{"type", "polytope_v"}, {"dim", k.dim()}, {"generators", Json::array()}};
          for (const auto& g : v.generators) out["generators"].push_back(to_json(g));
        } else if constexpr (std::is_same_v<T, LpBall>) {
          out = {{"type", "lp_ball"}, {"dim", k.dim()}, {"radius", v.radius}};
          out["p"] = std::isinf(v.p) ? Json("inf") : Json(v.p);
        } else {
          Json m = Json::array();
          for (Eigen::Index i = 0; i < v.map.rows(); ++i) m.push_back(to_json(Vector(v.map.row(i).transpose())));
          out = {{"type", "linear_image"}, {"dim", k.dim()}, {"matrix", m}, {"inner", to_json(*v.inner)}};
        }
      },
      k.variant());
  return out;
}

Ellipsoid parse_ellipsoid(const Json& j) {
  require_object(j, "ellipsoid");
  reject_unknown(j, {"dim", "Q"}, "ellipsoid");
  const int dim = dimension(j, "ellipsoid");
  const Matrix q = parse_matrix(field(j, "Q", "ellipsoid"), dim, dim, "Q");
  if ((q - q.transpose()).norm() > 1e-12 * q.norm()) invalid("ellipsoid: Q is not symmetric");
  return make_ellipsoid(SymMatrix(q));
}

Json to_json(const Ellipsoid& e) { return {{"dim", e.dim()}, {"Q", to_json(e.form())}}; }

RunConfig parse_config(const Json& j) {
  require_object(j, "config");
  reject_unknown(j, {"tol_feas", "tol_obj", "max_cuts", "box_R", "restarts", "seed", "grid"},
                 "config");
  RunConfig c;
  auto integer = [&](const Json& v, const char* what) {
    if (!v.is_number_integer()) invalid(std::string("config: ") + what + " must be an integer");
    return v.get<long long>();
  };
  if (j.contains("tol_feas")) c.solve.tol_feas = number(j["tol_feas"], "tol_feas");
  if (j.contains("tol_obj")) c.solve.tol_obj = number(j["tol_obj"], "tol_obj");
  if (j.contains("box_R")) c.solve.box_R = number(j["box_R"], "box_R");
  if (j.contains("max_cuts")) c.solve.max_cuts = static_cast<int>(integer(j["max_cuts"], "max_cuts"));
  if (j.contains("restarts")) c.solve.restarts = static_cast<int>(integer(j["restarts"], "restarts"));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) invalid("config: seed must be a nonnegative integer");
    c.solve.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    require_object(g, "grid");
    reject_unknown(g, {"axis_steps", "angle_steps", "refine_rounds", "boundary_samples"}, "grid");
    if (g.contains("axis_steps")) c.grid.axis_steps = static_cast<int>(integer(g["axis_steps"], "axis_steps"));
    if (g.contains("angle_steps")) c.grid.angle_steps = static_cast<int>(integer(g["angle_steps"], "angle_steps"));
    if (g.contains("refine_rounds")) c.grid.refine_rounds = static_cast<int>(integer(g["refine_rounds"], "refine_rounds"));
    if (g.contains("boundary_samples")) {
      c.grid.boundary_samples = static_cast<int>(integer(g["boundary_samples"], "boundary_samples"));
    }
    c.grid.validate();
  }
  if (!(c.solve.tol_feas > 0.0) || !(c.solve.tol_obj > 0.0) || c.solve.restarts < 1 ||
      !(c.solve.box_R > 0.0) || c.solve.max_cuts < 2) {
    invalid("config: tolerances, box_R, restarts and max_cuts must be positive");
  }
  return c;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const SymMatrix& m) {
  Json out = Json::array();
  for (int i = 0; i < m.dim(); ++i) out.push_back(to_json(Vector(m.matrix().row(i).transpose())));
  return out;
}

}  // namespace ellmap::io
