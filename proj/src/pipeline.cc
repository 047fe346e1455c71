#include "lfd/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

#include "lfd/certify.h"
#include "lfd/demos.h"
#include "lfd/embed.h"
#include "lfd/errors.h"
#include "lfd/multi.h"
#include "lfd/sim.h"

namespace lfd {

namespace fs = std::filesystem;

namespace {

// Configuration problems map to the usage exit code.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(ErrorKind::kInvalidArgument, msg) {}
};

Mat matrix_or_diagonal(const Json& j) {
  if (j.is_number()) return Mat::Constant(1, 1, j.get<double>());
  if (j.is_array() && !j.empty() && j[0].is_array()) return mat_from_json(j);
  return vec_from_json(j).asDiagonal();
}

std::vector<Vec> vec_list(const Json& j) {
  std::vector<Vec> out;
  for (const Json& e : j) out.push_back(vec_from_json(e));
  return out;
}

bool multiple_of(double value, double step) {
  const double r = value / step;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r);
}

}  // namespace

RunConfig RunConfig::from_json(const Json& j) {
  try {
    RunConfig c;
    c.preset = j.at("preset").get<std::string>();
    if (j.contains("parameters")) {
      const Json& p = j["parameters"];
      c.parameters.ball_beam_b = p.value("b", c.parameters.ball_beam_b);
      c.parameters.ball_beam_g = p.value("g", c.parameters.ball_beam_g);
      c.parameters.input_gain = p.value("input_gain", c.parameters.input_gain);
    }
    if (j.contains("expert")) {
      const Json& e = j["expert"];
      if (e.contains("Q")) c.expert_Q = matrix_or_diagonal(e["Q"]);
      if (e.contains("R")) c.expert_R = matrix_or_diagonal(e["R"]);
    }
    if (j.contains("initial_conditions")) c.initial_conditions = vec_list(j["initial_conditions"]);
    c.T = j.value("T", c.T);
    if (j.contains("demo_length")) c.demo_length = j["demo_length"].get<double>();
    c.dt = j.value("dt", c.dt);
    const std::string mode = j.value("mode", "auto");
    if (mode == "auto") {
      c.mode = LearnMode::kAuto;
    } else if (mode == "single") {
      c.mode = LearnMode::kSingle;
    } else if (mode == "multi") {
      c.mode = LearnMode::kMulti;
    } else {
      throw ConfigError("mode must be auto, single or multi");
    }
    c.feedback = feedback_mode_from_string(j.value("feedback", "closed_loop"));
    if (j.contains("hold") && !j["hold"].is_null()) c.hold = j["hold"].get<double>();
    if (j.contains("w")) c.w = vec_from_json(j["w"]);
    if (j.contains("xi0")) c.xi0 = vec_from_json(j["xi0"]);
    if (j.contains("T_grid")) c.T_grid = j["T_grid"].get<std::vector<double>>();
    if (j.contains("simulate")) {
      const Json& s = j["simulate"];
      if (s.contains("x0")) c.simulate_x0 = vec_list(s["x0"]);
      c.simulate_duration = s.value("duration", c.simulate_duration);
    }
    if (j.contains("track")) {
      const Json& t = j["track"];
      TrackConfig tc;
      tc.reference = t.value("reference", tc.reference);
      tc.frequency = t.value("f", tc.frequency);
      tc.axis = t.value("axis", tc.axis);
      if (t.contains("setpoint")) tc.setpoint = vec_from_json(t["setpoint"]);
      if (t.contains("x0")) tc.x0 = vec_from_json(t["x0"]);
      tc.duration = t.value("duration", tc.duration);
      c.track = tc;
    }

    if (!(c.dt > 0.0) || !(c.T > 0.0)) throw ConfigError("T and dt must be positive");
    if (!multiple_of(c.T, c.dt)) throw ConfigError("T must be a multiple of dt");
    const double length = c.demo_length.value_or(c.T);
    if (length < c.T || !multiple_of(length, c.dt)) {
      throw ConfigError("demo_length must be a multiple of dt and at least T");
    }
    if (c.hold && (!(*c.hold > 0.0) || !multiple_of(*c.hold, c.dt))) {
      throw ConfigError("hold must be a positive multiple of dt");
    }
    if (!(c.simulate_duration > 0.0)) throw ConfigError("simulate.duration must be positive");
    if (c.track && c.track->reference != "figure_eight" && c.track->reference != "setpoint") {
      throw ConfigError("track.reference must be figure_eight or setpoint");
    }
    return c;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

namespace {

// Everything derived from the config that the commands share.
struct Setup {
  PlantModel plant;
  std::optional<EmbeddingConfig> embedding;
  std::vector<Vec> initial_conditions;
  double length = 0.0;
};

Setup make_setup(const RunConfig& c) {
  Setup s;
  try {
    s.plant = make_plant(c.preset, c.parameters);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!s.plant.feedback_linearizable) {
    Vec w = c.w.value_or(s.plant.name == "ball_beam" ? ball_beam_default_w() : Vec::Ones(s.plant.n - 1));
    try {
      s.embedding.emplace(s.plant, w);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  s.initial_conditions = c.initial_conditions.empty() ? default_initial_states(s.plant) : c.initial_conditions;
  for (const Vec& x0 : s.initial_conditions) {
    if (x0.size() != s.plant.n) throw ConfigError("initial condition has the wrong dimension");
  }
  s.length = c.demo_length.value_or(c.T);
  return s;
}

ExpertController make_expert(const RunConfig& c, const PlantModel& plant) {
  if (!c.expert_Q && !c.expert_R) return default_expert(plant);
  if (!c.expert_Q || !c.expert_R) throw ConfigError("expert needs both Q and R");
  if (plant.feedback_linearizable) return expert_lqr(plant, *c.expert_Q, *c.expert_R);
  return expert_lqr_linearized(plant, *c.expert_Q, *c.expert_R);
}

bool use_multi(const RunConfig& c, const DemonstrationSet& set) {
  if (c.mode == LearnMode::kMulti) return true;
  if (c.mode == LearnMode::kSingle) return false;
  return set.size() > static_cast<std::size_t>(set.n) + 1;
}

std::vector<int> leading_indices(int n) {
  std::vector<int> idx(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) idx[static_cast<std::size_t>(i)] = i;
  return idx;
}

// Either controller kind behind one interface.
struct ControllerHandle {
  std::optional<LearnedController> single;
  std::optional<MultiController> multi;

  StatePolicy policy() const { return single ? make_policy(*single) : make_policy(*multi); }
  double T() const { return single ? single->T() : multi->T(); }
  std::vector<AffineBasis> bases() const {
    return single ? std::vector<AffineBasis>{single->basis()} : multi->bases();
  }
  Json json() const { return single ? to_json(*single) : to_json(*multi); }

  static ControllerHandle load(const Json& j) {
    ControllerHandle h;
    if (j.at("kind").get<std::string>() == "single") {
      h.single.emplace(learned_from_json(j));
    } else {
      h.multi.emplace(multi_from_json(j));
    }
    return h;
  }
};

fs::path demos_dir(const fs::path& out) { return out / "demos"; }

std::vector<double> default_grid(const RunConfig& c, double length) {
  if (!c.T_grid.empty()) return c.T_grid;
  std::vector<double> grid;
  const double step = c.T / 8.0;
  for (int k = 1; step * k <= length * (1.0 + 1e-12); ++k) grid.push_back(step * k);
  return grid;
}

int cmd_demos(const RunConfig& c, const fs::path& out, int jobs, std::ostream& log) {
  const Setup s = make_setup(c);
  const ExpertController expert = make_expert(c, s.plant);
  const RawDemonstrationSet raw = record_expert(s.plant, expert, s.initial_conditions, s.length, c.dt, jobs);

  DemonstrationSet set;
  std::optional<EmbeddedDemonstrationSet> embedded;
  if (s.embedding) {
    embedded = transform_demos(*s.embedding, raw, c.xi0.value_or(Vec::Zero(s.plant.n - 1)));
    set = to_demonstration_set(*embedded);
  } else {
    set = to_zv(s.plant, raw);
  }

  fs::create_directories(demos_dir(out));
  for (std::size_t i = 0; i < raw.demos.size(); ++i) {
    const Trajectory& d = raw.demos[i];
    Json j;
    j["index"] = i;
    j["t"] = d.times;
    Json xs = Json::array(), us = Json::array(), zs = Json::array(), vs = Json::array();
    for (std::size_t k = 0; k < d.size(); ++k) {
      xs.push_back(to_json(d.states[k]));
      us.push_back(to_json(d.inputs[k]));
      zs.push_back(to_json(set.demos[i].z[k]));
      vs.push_back(to_json(set.demos[i].v[k]));
    }
    j["x"] = std::move(xs);
    j["u"] = std::move(us);
    j["z"] = std::move(zs);
    j["v"] = std::move(vs);
    if (embedded) {
      Json xi = Json::array();
      for (const Vec& e : embedded->demos[i].xi) xi.push_back(to_json(e));
      j["xi"] = std::move(xi);
    }
    char name[32];
    std::snprintf(name, sizeof(name), "demo_%03zu.json", i);
    write_json(demos_dir(out) / name, j);
  }
  write_json(demos_dir(out) / "demo_set.json", to_json(set));
  if (embedded) write_json(demos_dir(out) / "embedded.json", to_json(*embedded));

  Json report;
  report["preset"] = s.plant.name;
  report["M"] = set.size();
  report["n"] = set.n;
  report["embedded"] = s.embedding.has_value();
  if (s.embedding) {
    const Mat axi = a_xi(s.embedding->w());
    const Mat aw = a_w_numeric(*s.embedding);
    report["A_xi_hurwitz"] = hurwitz(axi);
    report["A_w"] = to_json(aw);
    report["A_xi_plus_A_w_hurwitz_local_surrogate"] = hurwitz(axi + aw);
  }
  bool pass = true;
  Json per = Json::array();
  std::vector<std::vector<int>> index_sets;
  if (use_multi(c, set)) {
    report["mode"] = "multi";
    try {
      const Triangulation tri = delaunay(initial_states(set));
      for (const Simplex& sx : tri.simplices) index_sets.push_back(sx.vertices);
    } catch (const Error& e) {
      report["pass"] = false;
      report["error"] = e.what();
      write_json(demos_dir(out) / "report.json", report);
      log << "demos: validation failed: " << e.what() << '\n';
      return kExitValidation;
    }
  } else {
    report["mode"] = "single";
    if (set.size() < static_cast<std::size_t>(set.n) + 1) throw ConfigError("need at least n+1 demonstrations");
    index_sets.push_back(leading_indices(set.n));
  }
  for (const auto& idx : index_sets) {
    const AffineIndependenceReport r = validate_affine_independence(set, idx);
    pass = pass && r.pass;
    per.push_back({{"indices", idx}, {"report", to_json(r)}});
  }
  report["per_simplex"] = std::move(per);
  report["pass"] = pass;
  write_json(demos_dir(out) / "report.json", report);
  log << "demos: " << set.size() << " demonstrations of " << s.plant.name << ", affine independence "
      << (pass ? "ok" : "FAILED") << '\n';
  return pass ? kExitOk : kExitValidation;
}

ControllerHandle build_controller(const RunConfig& c, const DemonstrationSet& set) {
  ControllerHandle h;
  if (use_multi(c, set)) {
    h.multi.emplace(set, c.T, c.feedback);
  } else {
    h.single.emplace(AffineBasis::build(set, leading_indices(set.n)), c.T, c.feedback);
  }
  return h;
}

Json certificate_json(const ControllerHandle& h, int jobs) {
  const std::vector<AffineBasis> bases = h.bases();
  const MonodromyCertificate cert = certify(bases, h.T(), jobs);
  Json j = to_json(cert);
  const int n = bases.front().n();
  const int m = bases.front().m();
  const BrunovskyPair ab = brunovsky_pair(n / m, m);
  double worst = 0.0;
  for (const AffineBasis& b : bases) {
    worst = std::max(worst, (monodromy_from_data(b, h.T()) - monodromy_from_integral(b, ab.A, ab.B, h.T())).norm());
  }
  j["integral_cross_check"] = worst;
  return j;
}

int cmd_learn(const RunConfig& c, const fs::path& out, int jobs, std::ostream& log) {
  const DemonstrationSet set = demo_set_from_json(read_json(demos_dir(out) / "demo_set.json"));
  const ControllerHandle h = build_controller(c, set);
  write_json(out / "controller.json", h.json());
  Json cert = certificate_json(h, jobs);
  const bool pass = cert["verdict"] == "pass";
  if (!pass) {
    const auto suggestion = find_T_tilde(h.bases(), default_grid(c, set.T));
    cert["suggested_T"] = suggestion ? Json(*suggestion) : Json(nullptr);
  }
  write_json(out / "certificate.json", cert);
  log << "learn: " << (h.single ? "single" : "multi") << " controller, T = " << c.T
      << ", max |Psi| = " << cert["max_norm"].get<double>() << " -> " << cert["verdict"].get<std::string>();
  if (!pass) {
    log << " (suggested T: " << (cert["suggested_T"].is_null() ? std::string("none") : cert["suggested_T"].dump())
        << ")";
  }
  log << '\n';
  return pass ? kExitOk : kExitCertification;
}

int cmd_certify(const fs::path& out, int jobs, std::ostream& log) {
  const ControllerHandle h = ControllerHandle::load(read_json(out / "controller.json"));
  const Json cert = certificate_json(h, jobs);
  write_json(out / "certificate.json", cert);
  log << "certify: max |Psi| = " << cert["max_norm"].get<double>() << ", integral cross-check "
      << cert["integral_cross_check"].get<double>() << " -> " << cert["verdict"].get<std::string>() << '\n';
  return cert["verdict"] == "pass" ? kExitOk : kExitCertification;
}

SimulationOptions sim_options(const RunConfig& c) {
  SimulationOptions o;
  o.dt = c.dt;
  o.hold = c.hold;
  return o;
}

// Rows of t, x, [ξ], z, v, u for a closed-loop run.
struct Columns {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<Vec> z;
};

Columns tabulate(const Setup& s, const Trajectory& traj) {
  const int n = s.plant.n;
  const int m = s.plant.m;
  Columns out;
  out.header.push_back("t");
  for (int i = 1; i <= n; ++i) out.header.push_back("x" + std::to_string(i));
  if (s.embedding) {
    for (int i = 1; i < n; ++i) out.header.push_back("xi" + std::to_string(i));
  }
  for (int i = 1; i <= n; ++i) out.header.push_back("z" + std::to_string(i));
  for (int i = 1; i <= m; ++i) out.header.push_back(m == 1 ? "v" : "v" + std::to_string(i));
  for (int i = 1; i <= m; ++i) out.header.push_back(m == 1 ? "u" : "u" + std::to_string(i));
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vec& y = traj.states[k];
    const Vec x = y.head(n);
    const Vec& u = traj.inputs[k];
    Vec z, v;
    if (s.embedding) {
      const Vec xi = y.tail(n - 1);
      z = phi_z(*s.embedding, x, xi);
      v = Vec::Constant(1, r_of_x(*s.embedding, x) * u(0) - s_of_x_xi(*s.embedding, x, xi));
    } else {
      z = feedback_linearize(s.plant, x);
      v = drift_term(s.plant, x) + decoupling_matrix(s.plant, x) * u;
    }
    std::vector<double> row{traj.times[k]};
    row.insert(row.end(), y.data(), y.data() + y.size());
    row.insert(row.end(), z.data(), z.data() + z.size());
    row.insert(row.end(), v.data(), v.data() + v.size());
    row.insert(row.end(), u.data(), u.data() + u.size());
    out.rows.push_back(std::move(row));
    out.z.push_back(std::move(z));
  }
  return out;
}

bool certificate_gate(const fs::path& out, bool force, const char* command, std::ostream& log) {
  const ControllerHandle h = ControllerHandle::load(read_json(out / "controller.json"));
  const MonodromyCertificate cert = certify(h.bases(), h.T());
  if (cert.pass) return true;
  if (force) {
    log << command << ": certificate fails (max |Psi| = " << cert.max_norm << "), continuing because of --force\n";
    return true;
  }
  log << command << ": certificate fails (max |Psi| = " << cert.max_norm << "); use --force to run anyway\n";
  return false;
}

int cmd_simulate(const RunConfig& c, const fs::path& out, int jobs, bool force, std::ostream& log) {
  if (!certificate_gate(out, force, "simulate", log)) return kExitCertification;
  const Setup s = make_setup(c);
  const ControllerHandle h = ControllerHandle::load(read_json(out / "controller.json"));
  std::vector<Vec> x0s = c.simulate_x0.empty() ? std::vector<Vec>{s.initial_conditions.front()} : c.simulate_x0;
  for (const Vec& x0 : x0s) {
    if (x0.size() != s.plant.n) throw ConfigError("simulate.x0 has the wrong dimension");
  }

  std::vector<Trajectory> runs(x0s.size());
  parallel_for(x0s.size(), jobs, [&](std::size_t i) {
    const StatePolicy policy = h.policy();
    if (s.embedding) {
      runs[i] = simulate_embedded_closed_loop(*s.embedding, policy, x0s[i],
                                              c.xi0.value_or(Vec::Zero(s.plant.n - 1)),
                                              c.simulate_duration, sim_options(c));
    } else {
      const StatePolicy controller = [&](Instant t, const Vec& x) {
        return linearizing_input(s.plant, x, policy(t, feedback_linearize(s.plant, x)));
      };
      runs[i] = simulate_closed_loop(s.plant, controller, x0s[i], c.simulate_duration, sim_options(c));
    }
  });

  Json summary = Json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Columns cols = tabulate(s, runs[i]);
    const std::string name = runs.size() == 1 ? "simulation.csv" : "simulation_" + std::to_string(i) + ".csv";
    write_csv(out / name, cols.header, cols.rows);
    std::vector<double> period_norms;
    const double steps = h.T() / c.dt;
    for (int p = 0;; ++p) {
      const auto k = static_cast<std::size_t>(std::llround(steps * p));
      if (k >= cols.z.size()) break;
      period_norms.push_back(cols.z[k].norm());
    }
    std::vector<double> ratios;
    for (std::size_t p = 1; p < period_norms.size(); ++p) {
      ratios.push_back(period_norms[p - 1] > 0.0 ? period_norms[p] / period_norms[p - 1] : 0.0);
    }
    const Vec x_final = runs[i].states.back().head(s.plant.n);
    summary.push_back({{"file", name},
                       {"x0", to_json(x0s[i])},
                       {"duration", c.simulate_duration},
                       {"final_state_norm", x_final.norm()},
                       {"final_z_norm", cols.z.back().norm()},
                       {"z_norm_at_periods", period_norms},
                       {"decay_ratio_per_period", ratios}});
    log << "simulate: x0 = " << to_json(x0s[i]).dump() << ", final |x| = " << x_final.norm() << '\n';
  }
  write_json(out / "simulation_summary.json", summary);
  return kExitOk;
}

int cmd_track(const RunConfig& c, const fs::path& out, bool force, std::ostream& log) {
  if (!c.track) throw ConfigError("track: no track section in the config");
  if (!certificate_gate(out, force, "track", log)) return kExitCertification;
  const Setup s = make_setup(c);
  if (s.embedding) throw ConfigError("track: tracking is only available for feedback-linearizable presets");
  const ControllerHandle h = ControllerHandle::load(read_json(out / "controller.json"));
  const TrackConfig& tc = *c.track;

  Reference ref;
  if (tc.reference == "setpoint") {
    if (tc.setpoint.size() != s.plant.n) throw ConfigError("track.setpoint has the wrong dimension");
    ref = setpoint(tc.setpoint, s.plant.m);
  } else if (s.plant.n == 9 && s.plant.m == 3) {
    ref = figure_eight(tc.frequency);
  } else if (s.plant.n == 3 && s.plant.m == 1) {
    ref = figure_eight_axis(tc.frequency, tc.axis);
  } else {
    throw ConfigError("track: figure_eight needs flat_quad_3d or a third-order chain");
  }
  const Vec x0 = tc.x0.value_or(s.plant.inverse_normal_form ? s.plant.inverse_normal_form(ref.z(0.0))
                                                            : ref.z(0.0));
  if (x0.size() != s.plant.n) throw ConfigError("track.x0 has the wrong dimension");

  const Trajectory traj = simulate_tracking(s.plant, h.policy(), ref, x0, tc.duration, sim_options(c));

  std::vector<std::string> header{"t"};
  for (int i = 1; i <= s.plant.n; ++i) header.push_back("z" + std::to_string(i));
  for (int i = 1; i <= s.plant.n; ++i) header.push_back("zR" + std::to_string(i));
  for (int i = 1; i <= s.plant.n; ++i) header.push_back("e" + std::to_string(i));
  for (int i = 1; i <= s.plant.m; ++i) header.push_back(s.plant.m == 1 ? "u" : "u" + std::to_string(i));
  std::vector<std::vector<double>> rows;
  std::vector<double> position_error;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    const Vec z = feedback_linearize(s.plant, traj.states[k]);
    const Vec zr = ref.z(t);
    const Vec e = z - zr;
    std::vector<double> row{t};
    row.insert(row.end(), z.data(), z.data() + z.size());
    row.insert(row.end(), zr.data(), zr.data() + zr.size());
    row.insert(row.end(), e.data(), e.data() + e.size());
    row.insert(row.end(), traj.inputs[k].data(), traj.inputs[k].data() + traj.inputs[k].size());
    rows.push_back(std::move(row));
    position_error.push_back(e.head(s.plant.m).norm());
  }
  write_csv(out / "tracking.csv", header, rows);

  // Per-period maxima of the position error.
  const double period = tc.reference == "figure_eight" ? 1.0 / tc.frequency : h.T();
  std::vector<double> per_period;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto p = static_cast<std::size_t>(std::floor(traj.times[k] / period + 1e-9));
    if (p >= per_period.size()) per_period.resize(p + 1, 0.0);
    per_period[p] = std::max(per_period[p], position_error[k]);
  }
  double after_first = 0.0;
  for (std::size_t p = 1; p < per_period.size(); ++p) after_first = std::max(after_first, per_period[p]);
  const Json summary = {{"reference", ref.description},
                        {"duration", tc.duration},
                        {"period", period},
                        {"max_position_error_per_period", per_period},
                        {"max_position_error_after_first_period", after_first},
                        {"final_error_norm", (feedback_linearize(s.plant, traj.states.back()) -
                                              ref.z(traj.times.back())).norm()}};
  write_json(out / "tracking_summary.json", summary);
  log << "track: " << ref.description << ", max position error after the first period = " << after_first << '\n';
  return kExitOk;
}

int dispatch(const std::string& command, const RunConfig& c, const fs::path& out, int jobs, bool force,
             std::ostream& log) {
  if (command == "demos") return cmd_demos(c, out, jobs, log);
  if (command == "learn") return cmd_learn(c, out, jobs, log);
  if (command == "certify") return cmd_certify(out, jobs, log);
  if (command == "simulate") return cmd_simulate(c, out, jobs, force, log);
  if (command == "track") return cmd_track(c, out, force, log);
  if (command == "all") {
    for (const char* step : {"demos", "learn", "simulate"}) {
      const int code = dispatch(step, c, out, jobs, force, log);
      if (code != kExitOk && !(code == kExitCertification && force)) return code;
    }
    if (c.track) return dispatch("track", c, out, jobs, force, log);
    return kExitOk;
  }
  log << "unknown command '" << command << "'\n";
  return kExitUsage;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& config, const fs::path& out, int jobs,
                bool force, std::ostream& log) {
  try {
    fs::create_directories(out);
    return dispatch(command, config, out, jobs, force, log);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DivergenceError& e) {
    log << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kDivergence: return kExitDivergence;
      case ErrorKind::kIo: return kExitUsage;
      default: return kExitValidation;
    }
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Json::exception& e) {
    log << "error: malformed stored file: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace lfd
