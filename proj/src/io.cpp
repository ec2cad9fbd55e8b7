#include "snowdrift/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace snowdrift {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json labels(const std::vector<Threshold>& ts) {
  Json arr = Json::array();
  for (Threshold t : ts) arr.push_back(to_string(t));
  return arr;
}

const char* theorem_name(Theorem t) {
  switch (t) {
    case Theorem::SmallReward: return "small_reward";
    case Theorem::EvenRounds: return "even_rounds";
    case Theorem::OddRounds: return "odd_rounds";
    case Theorem::LargeReward: return "large_reward";
  }
  return "?";
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Vec4q& x) {
  Json arr = Json::array();
  for (int i = 0; i < 4; ++i) arr.push_back(to_string(x(i)));
  return arr;
}

Json to_json(const Vec4d& x) {
  Json arr = Json::array();
  for (int i = 0; i < 4; ++i) arr.push_back(number(x(i)));
  return arr;
}

Json to_json(const Mat4q& a) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 4; ++j) row.push_back(to_string(a(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const BasePayoffs& p) {
  return Json{{"T", to_string(p.T)}, {"R", to_string(p.R)}, {"S", to_string(p.S)}, {"P", to_string(p.P)}};
}

Json to_json(const RegimeThresholds& th) {
  return Json{{"a42_root", to_string(th.a42_root)},
              {"a32_root", to_string(th.a32_root)},
              {"a13_a23_tie", to_string(th.a13_a23_tie)},
              {"midpoint", to_string(th.midpoint)},
              {"large_reward", to_string(th.large_reward)}};
}

Json to_json(const SignStructure& s) {
  Json rows = Json::array();
  for (const auto& r : s.tags) {
    Json row = Json::array();
    for (SignTag t : r) row.push_back(to_string(t));
    rows.push_back(row);
  }
  return Json{{"case", s.case_id}, {"tags", rows}};
}

Json to_json(const RegimeClass& rc) {
  return Json{{"sign_case", rc.sign_case},
              {"equilibrium_case", rc.equilibrium_case},
              {"theorem", static_cast<int>(rc.theorem)},
              {"theorem_name", theorem_name(rc.theorem)},
              {"theorem_case", rc.theorem_case},
              {"parity", rc.even_rounds ? "even" : "odd"},
              {"boundary_equalities", labels(rc.boundary_equalities)}};
}

Json to_json(const RatioConstants& b) {
  return Json{{"b1", to_string(b.b1)}, {"b2", to_string(b.b2)}};
}

Json to_json(const Continuum& c) {
  Json j{{"label", to_string(c.label)},
         {"start", to_json(c.start)},
         {"end", to_json(c.end)},
         {"closed", c.closed}};
  if (c.plane) j["plane"] = to_json(*c.plane);
  return j;
}

Json to_json(const EquilibriumCatalog& cat) {
  Json points = Json::array();
  for (const auto& e : cat.points) points.push_back({{"label", to_string(e.label)}, {"point", to_json(e.point)}});
  Json continua = Json::array();
  for (const auto& c : cat.continua) continua.push_back(to_json(c));
  Json j{{"regime", to_json(cat.regime)}, {"points", points}, {"continua", continua}};
  if (cat.interior) {
    j["interior"] = Json{{"point", to_json(cat.interior->point)},
                         {"normalizer", to_string(cat.interior->normalizer)},
                         {"line", to_json(cat.interior->line)}};
  } else {
    j["interior"] = nullptr;
  }
  return j;
}

Json to_json(const IntegratorConfig& cfg) {
  return Json{{"dt", cfg.dt}, {"t_max", cfg.t_max}, {"eps_conv", cfg.eps_conv},
              {"eps_rate", cfg.eps_rate}, {"renormalize", cfg.renormalize}};
}

Json to_json(const IntegrationSummary& s) {
  Json tail = Json::array();
  for (const auto& c : s.tail_norms) tail.push_back({number(c.t), number(c.rhs_norm)});
  Json j{{"status", to_string(s.status)},
         {"t", number(s.t)},
         {"steps", s.steps},
         {"terminal", to_json(s.terminal)},
         {"rhs_norm", number(s.rhs_norm)},
         {"min_before_clip", number(s.min_before_clip)},
         {"max_sum_drift", number(s.max_sum_drift)},
         {"tail_norms", tail}};
  if (!s.failure.empty()) j["failure"] = s.failure;
  return j;
}

Json to_json(const LimitPrediction& p) {
  Json cands = Json::array();
  for (const auto& c : p.candidates) {
    Json item{{"label", to_string(c.label)}};
    if (c.range) item["range"] = Json::array({to_string(c.range->first), to_string(c.range->second)});
    cands.push_back(item);
  }
  return Json{{"candidates", cands}, {"deterministic", p.deterministic}};
}

Json to_json(const CatalogMatch& m) {
  if (!m.matched) return Json{{"matched", false}};
  Json j{{"matched", true}, {"label", to_string(m.label)}, {"distance", number(m.distance)}};
  if (m.parameter) j["parameter"] = number(*m.parameter);
  return j;
}

Json to_json(const NashInterval& n) {
  if (n.empty) return Json{{"empty", true}};
  return Json{{"empty", false}, {"alpha", Json::array({"0/1", to_string(n.upper)})}};
}

Json to_json(const SingletonNashFlags& f) {
  return Json{{"x13", f.x13}, {"x24", f.x24}, {"x14", f.x14}, {"x23", f.x23}};
}

Json to_json(const InteriorSpectrum& s) {
  return Json{{"a", number(s.a)},
              {"b", number(s.b)},
              {"c", number(s.c)},
              {"eigenvalues", Json::array({number(s.eigenvalues[0]), number(s.eigenvalues[1]),
                                           number(s.eigenvalues[2])})},
              {"max_imag", number(s.max_imag)},
              {"negative", s.negative},
              {"positive", s.positive}};
}

Json to_json(const BasinStats& s) {
  Json counts = Json::object();
  for (const auto& [label, n] : s.counts) counts[label] = n;
  return Json{{"n_samples", s.n_samples},
              {"seed", s.seed},
              {"counts", counts},
              {"converged", s.converged},
              {"unresolved", s.unresolved},
              {"failed", s.failed},
              {"unmatched", s.unmatched},
              {"violations", s.violations}};
}

Json to_json(const SeparatrixSample& s) {
  return Json{{"point", to_json(s.point)},
              {"parameter", number(s.parameter)},
              {"gap", number(s.gap)},
              {"iterations", s.iterations},
              {"label_a", to_string(s.label_a)},
              {"label_b", to_string(s.label_b)},
              {"closest_to_interior", number(s.closest_to_interior)}};
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (!text.empty() && text.back() == ',') throw std::invalid_argument("trailing comma in '" + text + "'");
  return out;
}

Vec4d parse_simplex_point(const std::string& text) {
  const auto v = parse_rational_list(text);
  if (v.size() != 4) throw std::invalid_argument("expected four shares, got '" + text + "'");
  Vec4q x;
  x << v[0], v[1], v[2], v[3];
  require_simplex(x, "state");
  return to_double(x);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Mat4d& a,
                          const RatioConstants& b, const CoopCounts& c, int rounds) {
  os << "t,x1,x2,x3,x4,ratio12,ratio43,zone,avg_payoff,coop_level\n";
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    const Vec4d& x = traj.x[k];
    const double r12 = x(1) > 0 ? x(0) / x(1) : NAN;
    const double r43 = x(2) > 0 ? x(3) / x(2) : NAN;
    os << format_double(traj.t[k]) << ',' << format_double(x(0)) << ',' << format_double(x(1))
       << ',' << format_double(x(2)) << ',' << format_double(x(3)) << ',' << format_double(r12)
       << ',' << format_double(r43) << ',' << to_string(zone_of(x, b)) << ','
       << format_double(average_payoff(x, a)) << ','
       << format_double(cooperation_level(x, c, rounds)) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << "R,label,avg_payoff,coop_level\n";
  for (const auto& row : sweep.rows) {
    os << format_double(row.R.get_d()) << ',' << to_string(row.label) << ','
       << format_double(row.avg_payoff) << ',' << format_double(row.coop_level) << '\n';
  }
}

void write_separatrix_csv(std::ostream& os, const std::vector<SeparatrixSample>& samples) {
  os << "index,x1,x2,x3,x4,gap,closest_to_interior,label_a,label_b\n";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    os << k << ',' << format_double(s.point(0)) << ',' << format_double(s.point(1)) << ','
       << format_double(s.point(2)) << ',' << format_double(s.point(3)) << ','
       << format_double(s.gap) << ',' << format_double(s.closest_to_interior) << ','
       << to_string(s.label_a) << ',' << to_string(s.label_b) << '\n';
  }
}

}  // namespace snowdrift
