#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "snowdrift/metrics.hpp"

namespace snowdrift {

using Json = nlohmann::ordered_json;

/// Round-trip text of a double ("%.17g").
std::string format_double(double v);

Json to_json(const Rational& q);
Json to_json(const Vec4q& x);
Json to_json(const Vec4d& x);
Json to_json(const Mat4q& a);
Json to_json(const BasePayoffs& p);
Json to_json(const RegimeThresholds& th);
Json to_json(const SignStructure& s);
Json to_json(const RegimeClass& rc);
Json to_json(const RatioConstants& b);
Json to_json(const Continuum& c);
Json to_json(const EquilibriumCatalog& cat);
Json to_json(const IntegratorConfig& cfg);
Json to_json(const IntegrationSummary& s);
Json to_json(const LimitPrediction& p);
Json to_json(const CatalogMatch& m);
Json to_json(const NashInterval& n);
Json to_json(const SingletonNashFlags& f);
Json to_json(const InteriorSpectrum& s);
Json to_json(const BasinStats& s);
Json to_json(const SeparatrixSample& s);

/// Parses "a,b,c,d" of rational literals.
std::vector<Rational> parse_rational_list(const std::string& text);

/// A simplex point from four rational literals; the sum must be exactly 1.
Vec4d parse_simplex_point(const std::string& text);

/// t,x1,x2,x3,x4,ratio12,ratio43,zone,avg_payoff,coop_level
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Mat4d& a,
                          const RatioConstants& b, const CoopCounts& c, int rounds);

/// R,label,avg_payoff,coop_level
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

void write_separatrix_csv(std::ostream& os, const std::vector<SeparatrixSample>& samples);

}  // namespace snowdrift
