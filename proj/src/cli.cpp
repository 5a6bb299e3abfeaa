#include "ellmap/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "ellmap/certificates.hpp"
#include "ellmap/errors.hpp"
#include "ellmap/io.hpp"
#include "ellmap/oracle.hpp"
#include "ellmap/solver.hpp"

namespace ellmap::cli {
namespace {

using io::Json;

int exit_code(Errc c) {
  switch (c) {
    case Errc::NoConvergence:
    case Errc::MaxCutsReached:
    case Errc::NoFeasiblePoint:
      return kNumericalFailure;
    default:
      return kInvalidInput;
  }
}

Json points_json(const std::vector<Vector>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(io::to_json(p));
  return out;
}

Json certificate_json(const Verification& v) {
  Json out = {{"verdict", to_string(v.verdict)}, {"residual", v.residual}};
  if (v.certificate) {
    out["points"] = points_json(v.certificate->points);
    out["weights"] = v.certificate->weights;
  } else {
    out["points"] = Json::array();
    out["weights"] = Json::array();
  }
  return out;
}

class Session {
 public:
  Session(const Command& cmd, std::ostream& err) : cmd_(cmd), err_(err) {
    if (cmd.config_path) cfg_ = io::parse_config(io::load_json(*cmd.config_path));
    if (cmd.body_path.empty()) throw Error(Errc::InvalidInput, "--body is required");
  }

  int dispatch(std::string& payload) {
    const std::string& s = cmd_.subcommand;
    if (s == "compute-u") return compute_u(payload);
    if (s == "j-value") return j_value_cmd(payload);
    if (s == "check-john") return check_john_cmd(payload);
    if (s == "iterate") return iterate(payload);
    if (s == "dual") return dual(payload);
    if (s == "certify") return certify(payload);
    if (s == "oracle") return oracle(payload);
    if (s == "render") return render(payload);
    throw Error(Errc::InvalidInput, "unknown subcommand \"" + s + "\"");
  }

 private:
  ConvexBody body() const { return io::parse_body(io::load_json(cmd_.body_path)); }

  Ellipsoid ellipsoid() const {
    if (cmd_.ellipsoid_paths.size() != 1) {
      throw Error(Errc::InvalidInput, cmd_.subcommand + " needs exactly one --ellipsoid");
    }
    return io::parse_ellipsoid(io::load_json(cmd_.ellipsoid_paths.front()));
  }

  static std::string dump(const Json& j) { return j.dump(2) + "\n"; }

  int compute_u(std::string& payload) {
    const ConvexBody k = body();
    const Ellipsoid e = ellipsoid();
    const SolveReport rep = solve_u(k, e, cfg_.solve);
    const Verification v = verify_u(k, e, rep.minimizer, cfg_.solve.tol_feas, rep.cuts);
    Json j = {{"status", to_string(rep.status)},
              {"J", rep.j_value},
              {"Q_F", io::to_json(rep.minimizer.form())},
              {"cuts", points_json(rep.cuts)},
              {"active_cuts", points_json(rep.active_cuts)},
              {"certificate", certificate_json(v)},
              {"J_lower_bound", rep.j_lower_bound},
              {"restart_spread", rep.restart_spread},
              {"rounds", rep.rounds},
              {"lp_iterations", rep.lp_iterations},
              {"sampled_oracle", rep.sampled_oracle},
              {"seed", rep.seed}};
    payload = dump(j);
    return rep.status == SolveStatus::Optimal ? kOk : kNumericalFailure;
  }

  int j_value_cmd(std::string& payload) {
    const double j = j_value(body(), ellipsoid(), cfg_.solve);
    payload = dump({{"status", "Optimal"}, {"J", j}, {"seed", cfg_.solve.seed}});
    return kOk;
  }

  int check_john_cmd(std::string& payload) {
    const JohnCheck c = check_john(body(), ellipsoid(), cfg_.solve);
    Json j = {{"is_fixed_point", c.is_fixed_point},
              {"distance", c.distance},
              {"inscribed", c.inscribed},
              {"containment_margin", c.containment_margin},
              {"seed", cfg_.solve.seed}};
    j["image"] = c.image ? io::to_json(c.image->form()) : Json(nullptr);
    payload = dump(j);
    if (cmd_.expect_fixed && !c.is_fixed_point) {
      err_ << "check-john: not a fixed point (distance " << c.distance << ")\n";
      return kVerificationFailure;
    }
    return kOk;
  }

  int iterate(std::string& payload) {
    if (cmd_.steps < 1) throw Error(Errc::InvalidInput, "iterate needs --steps >= 1");
    const Trajectory t = iterate_u(body(), ellipsoid(), cmd_.steps, cfg_.solve);
    Json iterates = Json::array();
    for (const auto& e : t.iterates) iterates.push_back(io::to_json(e.form()));
    payload = dump({{"iterates", iterates},
                    {"steps", t.steps},
                    {"fixed_point_reached", t.fixed_point_reached},
                    {"seed", cfg_.solve.seed}});
    return kOk;
  }

  int dual(std::string& payload) {
    const DualReport r = solve_u_bar(body(), ellipsoid(), cfg_.solve);
    Json j = {{"status", to_string(r.status)},
              {"i_value", r.i_value},
              {"multiple_found", r.multiple_found},
              {"optimal_form", io::to_json(r.optimal_form)},
              {"rounds", r.rounds},
              {"seed", cfg_.solve.seed}};
    j["maximizer"] = r.maximizer ? io::to_json(r.maximizer->form()) : Json(nullptr);
    j["second"] = r.second ? io::to_json(*r.second) : Json(nullptr);
    j["degenerate_direction"] =
        r.degenerate_direction.size() > 0 ? io::to_json(r.degenerate_direction) : Json(nullptr);
    payload = dump(j);
    return r.status == DualStatus::MaxCutsReached ? kNumericalFailure : kOk;
  }

  int certify(std::string& payload) {
    if (!cmd_.candidate_path) throw Error(Errc::InvalidInput, "certify needs --candidate");
    const ConvexBody k = body();
    const Ellipsoid e = ellipsoid();
    const Ellipsoid f = io::parse_ellipsoid(io::load_json(*cmd_.candidate_path));
    if (f.dim() != k.dim()) throw Error(Errc::InvalidInput, "candidate dimension differs");
    const Verification v = verify_u(k, e, f, cfg_.solve.tol_feas);
    Json j = certificate_json(v);
    j["tol"] = cfg_.solve.tol_feas;
    payload = dump(j);
    return v.verdict == Verdict::Verified ? kOk : kVerificationFailure;
  }

  int oracle(std::string& payload) {
    const OracleResult r = brute_force_u(body(), ellipsoid(), cfg_.grid);
    payload = dump({{"Q", io::to_json(r.q)}, {"J", r.j}, {"a", r.a}, {"b", r.b}, {"phi", r.phi}});
    return kOk;
  }

  int render(std::string& payload) {
    const ConvexBody k = body();
    if (k.dim() != 2) throw Error(Errc::InvalidInput, "render supports dim 2 only");
    std::vector<Ellipsoid> ells;
    std::vector<Vector> contacts;
    for (const auto& path : cmd_.ellipsoid_paths) {
      ells.push_back(io::parse_ellipsoid(io::load_json(path)));
      if (ells.back().dim() != 2) throw Error(Errc::InvalidInput, "render supports dim 2 only");
      const double tol = 1e-6;
      if (contains_ellipsoid(k, ells.back(), tol).contained) {
        for (const auto& p : contact_points(k, ells.back(), tol)) {
          contacts.push_back(p);
          contacts.push_back(-p);
        }
      }
    }
    payload = render_svg(k, ells, contacts);
    return kOk;
  }

  const Command& cmd_;
  std::ostream& err_;
  io::RunConfig cfg_;
};

}  // namespace

int run(const Command& cmd, std::ostream& out, std::ostream& err) {
  std::string payload;
  int code = kOk;
  try {
    Session session(cmd, err);
    code = session.dispatch(payload);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  }

  if (cmd.out_path) {
    std::ofstream f(*cmd.out_path, std::ios::binary);
    if (!(f << payload)) {
      err << "cannot write " << *cmd.out_path << "\n";
      return kInvalidInput;
    }
  } else {
    out << payload;
  }
  return code;
}

}  // namespace ellmap::cli
