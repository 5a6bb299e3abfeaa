#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "ellmap/cli.hpp"
#include "ellmap/io.hpp"
#include "helpers.hpp"

using namespace ellmap;
using namespace testing;
using ellmap::io::Json;

namespace {

std::string data(const std::string& name) { return std::string(ELLMAP_TEST_DATA) + "/" + name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome run_cli(cli::Command cmd) {
  std::ostringstream out, err;
  const int code = cli::run(cmd, out, err);
  return {code, out.str(), err.str()};
}

cli::Command command(const std::string& sub, const std::string& body, const std::string& ellipsoid) {
  cli::Command c;
  c.subcommand = sub;
  c.body_path = data(body);
  c.ellipsoid_paths = {data(ellipsoid)};
  return c;
}

SymMatrix form_of(const Json& j) {
  const int n = static_cast<int>(j.size());
  return SymMatrix(io::parse_matrix(j, n, n, "Q"));
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("compute-u report") {
  const Outcome o = run_cli(command("compute-u", "square.json", "ball.json"));
  REQUIRE(o.code == cli::kOk);
  const Json j = o.json();
  CHECK(j["status"] == "Optimal");
  CHECK(j["J"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rel(form_of(j["Q_F"]), SymMatrix::identity(2)) < 1e-6);
  CHECK(j["certificate"]["verdict"] == "Verified");
  CHECK(j["certificate"]["points"].size() == j["certificate"]["weights"].size());
  for (const char* key : {"cuts", "active_cuts", "J_lower_bound", "restart_spread", "seed"}) {
    CHECK(j.contains(key));
  }
  // Reports re-parse into valid ellipsoids.
  const Ellipsoid f = io::parse_ellipsoid({{"dim", 2}, {"Q", j["Q_F"]}});
  CHECK(f.dim() == 2);
}

TEST_CASE("compute-u on every body schema") {
  for (const char* body : {"rect.json", "square_v.json", "l3.json", "linf2.json", "rect_image.json"}) {
    const Outcome o = run_cli(command("compute-u", body, "ball.json"));
    CHECK_MESSAGE(o.code == cli::kOk, body);
    CHECK(o.json()["certificate"]["verdict"] == "Verified");
  }
  const Outcome rect = run_cli(command("compute-u", "rect_image.json", "ball.json"));
  CHECK(rel(form_of(rect.json()["Q_F"]), SymMatrix::diagonal(vec({0.25, 1}))) < 1e-6);
}

TEST_CASE("reports are deterministic and written to --out") {
  cli::Command cmd = command("compute-u", "l3.json", "diag14.json");
  cmd.config_path = data("config_seed7.json");
  const Outcome a = run_cli(cmd);
  const Outcome b = run_cli(cmd);
  REQUIRE(a.code == cli::kOk);
  CHECK(a.out == b.out);
  CHECK(a.json()["seed"] == 7);

  const auto path = std::filesystem::temp_directory_path() / "ellmap_cli_report.json";
  cmd.out_path = path.string();
  const Outcome c = run_cli(cmd);
  CHECK(c.code == cli::kOk);
  CHECK(c.out.empty());
  std::ifstream in(path);
  std::stringstream file;
  file << in.rdbuf();
  CHECK(file.str() == a.out);
  std::filesystem::remove(path);
}

TEST_CASE("j-value, check-john and iterate") {
  Outcome o = run_cli(command("j-value", "rect.json", "ball.json"));
  CHECK(o.code == cli::kOk);
  CHECK(o.json()["J"].get<double>() == doctest::Approx(std::sqrt(5.0 / 8)).epsilon(1e-9));

  cli::Command cmd = command("check-john", "square.json", "ball.json");
  cmd.expect_fixed = true;
  o = run_cli(cmd);
  CHECK(o.code == cli::kOk);
  CHECK(o.json()["is_fixed_point"] == true);

  cmd = command("check-john", "square.json", "diag14.json");
  o = run_cli(cmd);
  CHECK(o.code == cli::kOk);
  CHECK(o.json()["is_fixed_point"] == false);
  cmd.expect_fixed = true;
  CHECK(run_cli(cmd).code == cli::kVerificationFailure);

  cmd = command("iterate", "rect.json", "ball.json");
  cmd.steps = 5;
  o = run_cli(cmd);
  CHECK(o.code == cli::kOk);
  CHECK(o.json()["iterates"].size() == 2);
  CHECK(o.json()["fixed_point_reached"] == true);
  cmd.steps = 0;
  CHECK(run_cli(cmd).code == cli::kInvalidInput);
}

TEST_CASE("dual") {
  Outcome o = run_cli(command("dual", "narrowbox_v.json", "ball.json"));
  CHECK(o.code == cli::kOk);
  CHECK(o.json()["status"] == "NonAttained");
  CHECK(o.json()["i_value"].get<double>() == doctest::Approx(std::sqrt(50.0)).epsilon(1e-3));
  CHECK(o.json()["maximizer"].is_null());

  o = run_cli(command("dual", "square_v.json", "ball.json"));
  CHECK(o.code == cli::kOk);
  CHECK(o.json()["multiple_found"] == true);

  CHECK(run_cli(command("dual", "square.json", "ball.json")).code == cli::kInvalidInput);
}

TEST_CASE("certify") {
  cli::Command cmd = command("certify", "rect.json", "ball.json");
  cmd.candidate_path = data("rect_inflated.json");
  Outcome o = run_cli(cmd);
  CHECK(o.code == cli::kVerificationFailure);
  CHECK(o.json()["verdict"] == "FailedContainment");

  cmd.candidate_path = data("rect_john.json");
  o = run_cli(cmd);
  CHECK(o.code == cli::kOk);
  CHECK(o.json()["verdict"] == "Verified");

  cmd.candidate_path = data("ball.json");
  o = run_cli(cmd);
  CHECK(o.code == cli::kVerificationFailure);
  CHECK(o.json()["verdict"] == "FailedIsotropy");

  cmd.candidate_path.reset();
  CHECK(run_cli(cmd).code == cli::kInvalidInput);
}

TEST_CASE("oracle") {
  cli::Command cmd = command("oracle", "rect.json", "ball.json");
  cmd.config_path = data("config_coarse_grid.json");
  const Outcome o = run_cli(cmd);
  CHECK(o.code == cli::kOk);
  const double j = o.json()["J"].get<double>();
  CHECK(j * j == doctest::Approx(5.0 / 8).epsilon(1e-2));
  CHECK(run_cli(command("oracle", "cross3.json", "ball3.json")).code == cli::kInvalidInput);
}

TEST_CASE("render") {
  cli::Command cmd = command("render", "square.json", "ball.json");
  cmd.ellipsoid_paths.push_back(data("diag14.json"));
  const Outcome o = run_cli(cmd);
  REQUIRE(o.code == cli::kOk);
  CHECK(o.out.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") != std::string::npos);
  CHECK(count(o.out, "class=\"body\"") == 1);
  CHECK(count(o.out, "class=\"ellipsoid\"") == 2);
  // Unit disk touches at (+-1, 0), (0, +-1); the diag(1,4) ellipse at (+-1, 0).
  CHECK(count(o.out, "class=\"contact\"") == 6);
  const std::regex polyline("class=\"ellipsoid\"[^>]*points=\"([^\"]*)\"");
  std::smatch m;
  REQUIRE(std::regex_search(o.out, m, polyline));
  std::istringstream pts(m[1].str());
  std::string p;
  int n = 0;
  while (pts >> p) {
    const double x = std::stod(p.substr(0, p.find(',')));
    const double y = std::stod(p.substr(p.find(',') + 1));
    CHECK(x >= 0.0);
    CHECK(x <= 600.0);
    CHECK(y >= 0.0);
    CHECK(y <= 600.0);
    ++n;
  }
  CHECK(n == 65);

  CHECK(run_cli(command("render", "cross3.json", "ball3.json")).code == cli::kInvalidInput);
}

TEST_CASE("invalid input exits with 1") {
  CHECK(run_cli(command("compute-u", "bad_unknown_field.json", "ball.json")).code == cli::kInvalidInput);
  CHECK(run_cli(command("compute-u", "bad_unbounded.json", "ball.json")).code == cli::kInvalidInput);
  CHECK(run_cli(command("compute-u", "bad_syntax.json", "ball.json")).code == cli::kInvalidInput);
  CHECK(run_cli(command("compute-u", "missing.json", "ball.json")).code == cli::kInvalidInput);
  CHECK(run_cli(command("compute-u", "square.json", "bad_asymmetric.json")).code == cli::kInvalidInput);
  CHECK(run_cli(command("compute-u", "square.json", "bad_indefinite.json")).code == cli::kInvalidInput);
  CHECK(run_cli(command("compute-u", "square.json", "ball3.json")).code == cli::kInvalidInput);
  CHECK(run_cli(command("frobnicate", "square.json", "ball.json")).code == cli::kInvalidInput);
  cli::Command cmd = command("compute-u", "square.json", "ball.json");
  cmd.config_path = data("bad_config.json");
  const Outcome o = run_cli(cmd);
  CHECK(o.code == cli::kInvalidInput);
  CHECK(o.out.empty());
  CHECK_FALSE(o.err.empty());
}

TEST_CASE("numerical failure exits with 2") {
  cli::Command cmd = command("compute-u", "cross3.json", "ball3.json");
  cmd.config_path = data("config_few_cuts.json");
  CHECK(run_cli(cmd).code == cli::kNumericalFailure);
}

TEST_CASE("body and ellipsoid JSON round trip") {
  std::mt19937_64 rng(81);
  const std::vector<ConvexBody> bodies = {
      ConvexBody::cube(2), ConvexBody::polytope_v({vec({1, 2}), vec({3, -1})}),
      ConvexBody::lp_ball(2, std::numeric_limits<double>::infinity(), 0.5), ConvexBody::lp_ball(2, 1.5, 2.0),
      linear_image(random_transform(2, 3.0, rng), ConvexBody::lp_ball(2, 4.0, 1.0))};
  for (const auto& k : bodies) {
    const ConvexBody back = io::parse_body(Json::parse(io::to_json(k).dump()));
    for (int i = 0; i < 20; ++i) {
      const Vector x = random_vector(2, rng);
      CHECK(norm(back, x) == doctest::Approx(norm(k, x)).epsilon(1e-12));
    }
  }
  const Ellipsoid e = make_ellipsoid(random_spd(3, 10.0, rng));
  const Ellipsoid back = io::parse_ellipsoid(Json::parse(io::to_json(e).dump()));
  CHECK(back.form().matrix() == e.form().matrix());
}

}  // TEST_SUITE
