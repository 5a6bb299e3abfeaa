#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ellmap/bodies.hpp"
#include "ellmap/ellipsoids.hpp"

namespace ellmap::cli {

enum ExitCode { kOk = 0, kInvalidInput = 1, kNumericalFailure = 2, kVerificationFailure = 3 };

struct Command {
  std::string subcommand;  // compute-u, j-value, check-john, iterate, dual, certify, oracle, render
  std::string body_path;
  std::vector<std::string> ellipsoid_paths;
  std::optional<std::string> config_path;
  std::optional<std::string> out_path;  // standard output when absent
  std::optional<std::string> candidate_path;  // certify
  int steps = 0;                              // iterate
  bool expect_fixed = false;                  // check-john
};

/// Executes one command, writing the JSON report (or SVG for render) to
/// out_path or `out`; diagnostics go to `err`. Returns the process exit code.
int run(const Command& cmd, std::ostream& out, std::ostream& err);

/// SVG 1.1 picture of a planar body, ellipsoids as 64-segment polylines and
/// contact points as dots; the viewport fits everything with a 10% margin.
std::string render_svg(const ConvexBody& k, const std::vector<Ellipsoid>& ellipsoids,
                       const std::vector<Vector>& contacts);

}  // namespace ellmap::cli
