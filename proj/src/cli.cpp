#include "snowdrift/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "snowdrift/sampling.hpp"

namespace snowdrift {

Json to_json(const ScenarioConfig& cfg) {
  return Json{
      {"payoffs", cfg.payoffs},
      {"m", cfg.m},
      {"seed", cfg.seed},
      {"out", cfg.out},
      {"integrator", to_json(cfg.integrator)},
      {"simulate", {{"x0", cfg.x0}, {"stride", cfg.stride}}},
      {"basins", {{"samples", cfg.samples}}},
      {"separatrix",
       {{"seed_a", cfg.seed_a}, {"seed_b", cfg.seed_b}, {"pairs", cfg.pairs}, {"iters", cfg.iters}}},
      {"sweep",
       {{"r_min", cfg.r_min},
        {"r_max", cfg.r_max},
        {"r_step", cfg.r_step},
        {"simulate", cfg.simulate},
        {"runs_per_point", cfg.runs_per_point}}},
  };
}

namespace {

// Rationals may be given as strings or as JSON integers.
std::string rational_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw std::invalid_argument("expected a rational string, got " + v.dump());
}

template <class T>
void take(const Json& block, const char* key, T& field) {
  if (block.contains(key)) field = block.at(key).get<T>();
}

void take_rational(const Json& block, const char* key, std::string& field) {
  if (block.contains(key)) field = rational_text(block.at(key));
}

}  // namespace

void apply_config(ScenarioConfig& cfg, const Json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (doc.contains("payoffs")) {
    const Json& p = doc.at("payoffs");
    if (p.is_array()) {
      std::string joined;
      for (const auto& v : p) joined += (joined.empty() ? "" : ",") + rational_text(v);
      cfg.payoffs = joined;
    } else {
      cfg.payoffs = rational_text(p);
    }
  }
  take(doc, "m", cfg.m);
  take(doc, "seed", cfg.seed);
  take(doc, "out", cfg.out);
  if (doc.contains("integrator")) {
    const Json& b = doc.at("integrator");
    take(b, "dt", cfg.integrator.dt);
    take(b, "t_max", cfg.integrator.t_max);
    take(b, "eps_conv", cfg.integrator.eps_conv);
    take(b, "eps_rate", cfg.integrator.eps_rate);
    take(b, "renormalize", cfg.integrator.renormalize);
  }
  if (doc.contains("simulate")) {
    const Json& b = doc.at("simulate");
    take(b, "x0", cfg.x0);
    take(b, "stride", cfg.stride);
  }
  if (doc.contains("basins")) take(doc.at("basins"), "samples", cfg.samples);
  if (doc.contains("separatrix")) {
    const Json& b = doc.at("separatrix");
    take(b, "seed_a", cfg.seed_a);
    take(b, "seed_b", cfg.seed_b);
    take(b, "pairs", cfg.pairs);
    take(b, "iters", cfg.iters);
  }
  if (doc.contains("sweep")) {
    const Json& b = doc.at("sweep");
    take_rational(b, "r_min", cfg.r_min);
    take_rational(b, "r_max", cfg.r_max);
    take_rational(b, "r_step", cfg.r_step);
    take(b, "simulate", cfg.simulate);
    take(b, "runs_per_point", cfg.runs_per_point);
  }
}

namespace {

class Command {
 public:
  Command(const ScenarioConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  RepeatedGame game() const {
    if (cfg_.payoffs.empty()) throw std::invalid_argument("payoffs are required (--payoffs T,R,S,P)");
    const auto v = parse_rational_list(cfg_.payoffs);
    if (v.size() != 4) throw std::invalid_argument("--payoffs needs exactly four values T,R,S,P");
    return RepeatedGame({v[0], v[1], v[2], v[3]}, cfg_.m);
  }

  Json header(const RepeatedGame& g) const {
    return Json{{"config", to_json(cfg_)}, {"payoffs", to_json(g.payoffs())}, {"m", g.rounds()}};
  }

  // Main document: a file in the output directory, or stdout.
  void emit(const std::string& name, const Json& doc) const {
    if (cfg_.out.empty()) {
      out_ << doc.dump(2) << '\n';
      return;
    }
    write_file(name, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  }

  void write_file(const std::string& name, const std::function<void(std::ostream&)>& body) const {
    std::filesystem::create_directories(cfg_.out);
    const auto path = std::filesystem::path(cfg_.out) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    body(os);
    out_ << "wrote " << path.string() << '\n';
  }

  const ScenarioConfig& cfg() const { return cfg_; }
  std::ostream& out() const { return out_; }

 private:
  const ScenarioConfig& cfg_;
  std::ostream& out_;
};

int cmd_classify(const Command& cmd) {
  const RepeatedGame g = cmd.game();
  const Mat4q ar = reduced_matrix(g);
  Json doc = cmd.header(g);
  doc["regime"] = to_json(classify_regime(g));
  doc["sign_structure"] = to_json(sign_structure(g));
  doc["thresholds"] = to_json(regime_thresholds(g));
  doc["ratio_constants"] = to_json(ratio_constants(ar));
  doc["payoff_matrix"] = to_json(payoff_matrix(g));
  doc["reduced_matrix"] = to_json(ar);
  cmd.emit("classify.json", doc);
  return kOk;
}

int cmd_equilibria(const Command& cmd) {
  const RepeatedGame g = cmd.game();
  const EquilibriumCatalog cat = full_catalog(g);
  Json doc = cmd.header(g);
  doc["catalog"] = to_json(cat);
  doc["nash_interval_x12"] = to_json(nash_interval_x12(g));
  doc["singleton_nash"] = to_json(singleton_nash_flags(g));
  doc["interior_spectrum"] = cat.interior ? to_json(interior_spectrum(g)) : Json(nullptr);
  cmd.emit("equilibria.json", doc);
  return kOk;
}

int cmd_simulate(const Command& cmd) {
  const RepeatedGame g = cmd.game();
  const auto& cfg = cmd.cfg();
  const Vec4d x0 = parse_simplex_point(cfg.x0);
  const Mat4d ar = to_double(reduced_matrix(g));
  const EquilibriumCatalog cat = full_catalog(g);
  const LimitPrediction pred = predict_limit(x0, g);
  const Trajectory traj = integrate_trajectory(x0, ar, cfg.integrator, cfg.stride);
  const CatalogMatch match = match_catalog(traj.summary.terminal, cat);
  const bool consistent = prediction_contains(pred, match);

  if (!cfg.out.empty()) {
    const Mat4d a = to_double(payoff_matrix(g));
    const RatioConstants b = ratio_constants(reduced_matrix(g));
    const CoopCounts c = cooperation_counts(g.rounds());
    cmd.write_file("trajectory.csv",
                   [&](std::ostream& os) { write_trajectory_csv(os, traj, a, b, c, g.rounds()); });
  }
  Json doc = cmd.header(g);
  doc["regime"] = to_json(cat.regime);
  doc["x0"] = to_json(x0);
  doc["initial_zone"] = to_string(zone_of(x0, ratio_constants(reduced_matrix(g))));
  doc["prediction"] = to_json(pred);
  doc["integration"] = to_json(traj.summary);
  doc["match"] = to_json(match);
  doc["consistent"] = consistent;
  cmd.emit("summary.json", doc);

  switch (traj.summary.status) {
    case TerminalStatus::Converged: return kOk;
    case TerminalStatus::MaxTime: return kUnresolved;
    case TerminalStatus::Failed: return kInternal;
  }
  return kInternal;
}

int cmd_basins(const Command& cmd) {
  const RepeatedGame g = cmd.game();
  const auto& cfg = cmd.cfg();
  const BasinStats stats = basin_sample(g, cfg.samples, cfg.integrator, cfg.seed);
  Json doc = cmd.header(g);
  doc["regime"] = to_json(classify_regime(g));
  doc["basins"] = to_json(stats);
  cmd.emit("basins.json", doc);
  return stats.unresolved > 0 || stats.failed > 0 ? kUnresolved : kOk;
}

int cmd_separatrix(const Command& cmd) {
  const RepeatedGame g = cmd.game();
  const auto& cfg = cmd.cfg();
  std::vector<SeparatrixSample> samples;
  if (!cfg.seed_a.empty() || !cfg.seed_b.empty()) {
    if (cfg.seed_a.empty() || cfg.seed_b.empty()) {
      throw SeparatrixError("give both --seed-a and --seed-b");
    }
    samples.push_back(separatrix_bisect(parse_simplex_point(cfg.seed_a),
                                        parse_simplex_point(cfg.seed_b), g, cfg.integrator,
                                        cfg.iters));
  } else {
    if (classify_regime(g).theorem != Theorem::SmallReward) {
      throw SeparatrixError("automatic seeds need R < (T+S)/2; give --seed-a and --seed-b");
    }
    const RatioConstants b = ratio_constants(reduced_matrix(g));
    Rng rng(cfg.seed);
    auto draw = [&](Zone want) {
      for (;;) {
        const Vec4d x = sample_simplex(rng);
        if (zone_of(x, b) == want) return x;
      }
    };
    for (int k = 0; k < cfg.pairs; ++k) {
      const Vec4d a = draw(Zone::D14);
      const Vec4d c = draw(Zone::D23);
      samples.push_back(separatrix_bisect(a, c, g, cfg.integrator, cfg.iters));
    }
  }
  if (!cfg.out.empty()) {
    cmd.write_file("separatrix.csv", [&](std::ostream& os) { write_separatrix_csv(os, samples); });
  }
  Json doc = cmd.header(g);
  Json arr = Json::array();
  for (const auto& s : samples) arr.push_back(to_json(s));
  doc["samples"] = arr;
  cmd.emit("separatrix.json", doc);
  return kOk;
}

int cmd_sweep(const Command& cmd) {
  const RepeatedGame g = cmd.game();
  const auto& cfg = cmd.cfg();
  const auto& p = g.payoffs();
  const Rational step = parse_rational(cfg.r_step);
  const Rational lo = cfg.r_min.empty() ? Rational(p.S + step) : parse_rational(cfg.r_min);
  const Rational hi = cfg.r_max.empty() ? Rational(p.T - step) : parse_rational(cfg.r_max);

  SweepOptions opts;
  opts.simulate = cfg.simulate;
  opts.runs_per_point = cfg.runs_per_point;
  opts.integrator = cfg.integrator;
  opts.seed = cfg.seed;
  const SweepResult sweep = sweep_R(p.T, p.S, p.P, g.rounds(), rational_grid(lo, hi, step), opts);

  if (cfg.out.empty()) {
    write_sweep_csv(cmd.out(), sweep);
    return kOk;
  }
  cmd.write_file("sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, sweep); });
  Json doc = cmd.header(g);
  doc["grid"] = {{"r_min", to_string(lo)}, {"r_max", to_string(hi)}, {"r_step", to_string(step)}};
  doc["rows"] = sweep.rows.size();
  doc["warnings"] = sweep.warnings;
  if (cfg.simulate) {
    Json hits = Json::array();
    for (const auto& row : sweep.rows) {
      hits.push_back({{"R", to_string(row.R)}, {"label", to_string(row.label)}, {"hits", row.simulated_hits}});
    }
    doc["simulation"] = {{"runs", sweep.simulated_runs}, {"unmatched", sweep.simulated_unmatched}, {"hits", hits}};
  }
  cmd.emit("sweep.json", doc);
  return kOk;
}

struct Flags {
  std::string config;
  std::string payoffs;
  int m = 0;
  std::uint64_t seed = 1;
  std::string out;
  double dt = 0.0;
  double t_max = 0.0;
  double eps_conv = 0.0;
  std::string x0;
  long stride = 1;
  int samples = 0;
  std::string seed_a;
  std::string seed_b;
  int pairs = 0;
  int iters = 0;
  std::string r_min;
  std::string r_max;
  std::string r_step;
  bool simulate = false;
  int runs_per_point = 0;
};

void add_shared(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON scenario file; flags override its values");
  sub->add_option("--payoffs", f.payoffs, "T,R,S,P as decimals or p/q");
  sub->add_option("--m", f.m, "number of rounds (>= 2)");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--dt", f.dt, "RK4 step size");
  sub->add_option("--t-max", f.t_max, "integration horizon");
  sub->add_option("--eps-conv", f.eps_conv, "RHS max-norm convergence threshold");
}

template <class T>
void override_if(const CLI::App* sub, const char* name, const T& value, T& field) {
  const CLI::Option* opt = sub->get_option_no_throw(name);
  if (opt != nullptr && opt->count() > 0) field = value;
}

ScenarioConfig resolve(const CLI::App* sub, const Flags& f) {
  ScenarioConfig cfg;
  if (sub->count("--config") > 0) {
    std::ifstream in(f.config);
    if (!in) throw std::invalid_argument("cannot read config file " + f.config);
    apply_config(cfg, Json::parse(in));
  }
  override_if(sub, "--payoffs", f.payoffs, cfg.payoffs);
  override_if(sub, "--m", f.m, cfg.m);
  override_if(sub, "--seed", f.seed, cfg.seed);
  override_if(sub, "--out", f.out, cfg.out);
  override_if(sub, "--dt", f.dt, cfg.integrator.dt);
  override_if(sub, "--t-max", f.t_max, cfg.integrator.t_max);
  override_if(sub, "--eps-conv", f.eps_conv, cfg.integrator.eps_conv);
  override_if(sub, "--x0", f.x0, cfg.x0);
  override_if(sub, "--stride", f.stride, cfg.stride);
  override_if(sub, "--samples", f.samples, cfg.samples);
  override_if(sub, "--seed-a", f.seed_a, cfg.seed_a);
  override_if(sub, "--seed-b", f.seed_b, cfg.seed_b);
  override_if(sub, "--pairs", f.pairs, cfg.pairs);
  override_if(sub, "--iters", f.iters, cfg.iters);
  override_if(sub, "--r-min", f.r_min, cfg.r_min);
  override_if(sub, "--r-max", f.r_max, cfg.r_max);
  override_if(sub, "--r-step", f.r_step, cfg.r_step);
  override_if(sub, "--simulate", f.simulate, cfg.simulate);
  override_if(sub, "--runs-per-point", f.runs_per_point, cfg.runs_per_point);
  if (cfg.samples < 0) throw std::invalid_argument("--samples must be nonnegative");
  if (cfg.stride < 1) throw std::invalid_argument("--stride must be positive");
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Replicator dynamics of the repeated snowdrift game with ALLC, TFT, STFT and ALLD"};
  app.require_subcommand(1);
  Flags f;

  using Handler = int (*)(const Command&);
  std::map<std::string, Handler> handlers;
  auto sub = [&](const char* name, const char* help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    add_shared(s, f);
    handlers[name] = h;
    return s;
  };

  sub("classify", "sign structure, equilibrium case and convergence regime", cmd_classify);
  sub("equilibria", "equilibrium catalog with Nash and spectrum data", cmd_equilibria);
  CLI::App* simulate = sub("simulate", "integrate one trajectory to its limit", cmd_simulate);
  simulate->add_option("--x0", f.x0, "initial shares x1,x2,x3,x4 summing to 1");
  simulate->add_option("--stride", f.stride, "record every n-th step in the CSV");
  CLI::App* basins = sub("basins", "limit statistics over random interior starts", cmd_basins);
  basins->add_option("--samples", f.samples, "number of starts");
  CLI::App* sep = sub("separatrix", "bisect segments between the two attractors", cmd_separatrix);
  sep->add_option("--seed-a", f.seed_a, "first segment end");
  sep->add_option("--seed-b", f.seed_b, "second segment end");
  sep->add_option("--pairs", f.pairs, "random D14/D23 seed pairs when no seeds are given");
  sep->add_option("--iters", f.iters, "bisection steps");
  CLI::App* sweep = sub("sweep", "payoff and cooperation at the equilibria over a grid of R", cmd_sweep);
  sweep->add_option("--r-min", f.r_min, "first R (default S + step)");
  sweep->add_option("--r-max", f.r_max, "last R (default T - step)");
  sweep->add_option("--r-step", f.r_step, "grid step (default 1/20)");
  sweep->add_flag("--simulate", f.simulate, "cross-check with simulated limits");
  sweep->add_option("--runs-per-point", f.runs_per_point, "simulated starts per grid value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  try {
    const ScenarioConfig cfg = resolve(chosen, f);
    return handlers.at(chosen->get_name())(Command(cfg, out));
  } catch (const InvalidGame& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad config: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace snowdrift
