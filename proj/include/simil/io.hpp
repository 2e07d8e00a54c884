#pragma once

// JSON file formats for distributions, state families, games, verdicts and
// witness bundles. Rationals are written as "num/den" strings. Numbers in
// input files are accepted through a rationalizing path that records a
// warning.

#include "simil/games.hpp"
#include "simil/orders.hpp"
#include "simil/state_family.hpp"
#include "simil/witnesses.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace simil {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Warnings = std::vector<std::string>;

// Scalars.

inline Json rational_json(const Rational& r) { return to_string(r); }

inline Rational rational_from(const Json& j, Warnings& warn, const std::string& where) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) {
    const double x = j.get<double>();
    Rational r = rationalize(x);
    warn.push_back(where + ": float " + j.dump() + " rationalized to " + to_string(r));
    return r;
  }
  throw InputError(where + ": expected a rational");
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::size_t count_from(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError(where + ": expected a nonnegative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

// Signal spaces and sets.

inline Json to_json(const SignalSpace& sp) {
  Json a = Json::array();
  for (const auto& s : sp.signals()) a.push_back({{"label", s.label}, {"value", to_string(s.value)}});
  return a;
}

inline SignalSpace space_from_json(const Json& j, Warnings& warn) {
  if (!j.is_array()) throw InputError("signals: expected an array");
  std::vector<SignalSpace::Signal> sigs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "signals[" + std::to_string(i) + "]";
    const auto& e = j[i];
    const auto& label = field(e, "label", where);
    if (!label.is_string()) throw InputError(where + ": label must be a string");
    sigs.push_back({label.get<std::string>(), rational_from(field(e, "value", where), warn, where + ".value")});
  }
  try {
    return SignalSpace(std::move(sigs));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("signals: ") + e.what());
  }
}

inline Json set_json(const SignalSpace& sp, SignalSet k) {
  Json a = Json::array();
  for (auto s : k.indices()) a.push_back(sp.label(s));
  return a;
}

inline SignalSet set_from_json(const SignalSpace& sp, const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of labels");
  SignalSet k;
  for (const auto& e : j) {
    if (!e.is_string()) throw InputError(where + ": labels must be strings");
    auto i = sp.find(e.get<std::string>());
    if (!i) throw InputError(where + ": unknown signal '" + e.get<std::string>() + "'");
    k = k.with(*i);
  }
  return k;
}

// Distributions.

namespace detail {

inline Json profile_json(const SignalSpace& sp, const Profile& p) {
  Json a = Json::array();
  for (auto x : p) a.push_back(sp.label(x));
  return a;
}

inline Profile profile_from(const SignalSpace& sp, const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": profile must be an array of labels");
  Profile p;
  for (const auto& e : j) {
    if (!e.is_string()) throw InputError(where + ": profile labels must be strings");
    auto i = sp.find(e.get<std::string>());
    if (!i) throw InputError(where + ": unknown signal '" + e.get<std::string>() + "'");
    p.push_back(static_cast<std::uint8_t>(*i));
  }
  return p;
}

template <typename Map>
Json masses_json(const SignalSpace& sp, const Map& m) {
  Json a = Json::array();
  for (const auto& [p, x] : m) a.push_back({{"profile", profile_json(sp, p)}, {"p", to_string(x)}});
  return a;
}

}  // namespace detail

/// Exchangeable masses are keyed by sorted profiles; "p" is the mass of the
/// whole multiset, spread evenly over its orderings.
inline Json to_json(const JointDist& d) {
  return Json{{"signals", to_json(d.space())},
              {"players", d.players()},
              {"exchangeable", true},
              {"mass", detail::masses_json(d.space(), d.masses())}};
}

inline Json to_json(const NonExchJointDist& d) {
  return Json{{"signals", to_json(d.space())},
              {"players", d.players()},
              {"exchangeable", false},
              {"mass", detail::masses_json(d.space(), d.masses())}};
}

inline Json to_json(const StateFamily& fam) {
  Json states = Json::array(), prior = Json::array(), per = Json::array();
  for (const auto& s : fam.states()) states.push_back({{"label", s.label}, {"value", to_string(s.value)}});
  for (const auto& p : fam.prior()) prior.push_back(to_string(p));
  for (const auto& d : fam.per_state()) per.push_back(to_json(d));
  return Json{{"stateFamily", {{"states", states}, {"prior", prior}, {"perState", per}}}};
}

using DistValue = std::variant<JointDist, NonExchJointDist, StateFamily>;

struct DistFile {
  DistValue value;
  Warnings warnings;
};

inline DistValue dist_value_from_json(const Json& j, Warnings& warn, const std::string& where = "dist");

namespace detail {

inline DistValue plain_dist_from_json(const Json& j, Warnings& warn, const std::string& where) {
  const SignalSpace sp = space_from_json(field(j, "signals", where), warn);
  const std::size_t players = count_from(field(j, "players", where), where + ".players");
  const bool exch = !j.contains("exchangeable") || j.at("exchangeable").get<bool>();
  const auto& mass = field(j, "mass", where);
  if (!mass.is_array()) throw InputError(where + ".mass: expected an array");
  std::map<Profile, Rational> m;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const std::string w = where + ".mass[" + std::to_string(i) + "]";
    Profile p = profile_from(sp, field(mass[i], "profile", w), w);
    if (exch && !std::is_sorted(p.begin(), p.end()))
      throw InputError(w + ": exchangeable profiles must be sorted");
    if (m.count(p)) throw InputError(w + ": duplicate profile");
    m[p] = rational_from(field(mass[i], "p", w), warn, w + ".p");
  }
  try {
    if (exch) return JointDist(sp, players, std::move(m));
    return NonExchJointDist(sp, players, std::move(m));
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace detail

inline DistValue dist_value_from_json(const Json& j, Warnings& warn, const std::string& where) {
  if (j.is_object() && j.contains("stateFamily")) {
    const auto& f = j.at("stateFamily");
    const std::string w = where + ".stateFamily";
    const auto& sj = field(f, "states", w);
    const auto& pj = field(f, "prior", w);
    const auto& dj = field(f, "perState", w);
    if (!sj.is_array() || !pj.is_array() || !dj.is_array()) throw InputError(w + ": expected arrays");
    std::vector<State> states;
    for (std::size_t i = 0; i < sj.size(); ++i) {
      const std::string ws = w + ".states[" + std::to_string(i) + "]";
      states.push_back({field(sj[i], "label", ws).get<std::string>(), rational_from(field(sj[i], "value", ws), warn, ws)});
    }
    std::vector<Rational> prior;
    for (std::size_t i = 0; i < pj.size(); ++i) prior.push_back(rational_from(pj[i], warn, w + ".prior"));
    std::vector<JointDist> per;
    for (std::size_t i = 0; i < dj.size(); ++i) {
      auto v = detail::plain_dist_from_json(dj[i], warn, w + ".perState[" + std::to_string(i) + "]");
      if (!std::holds_alternative<JointDist>(v)) throw InputError(w + ": per-state distributions must be exchangeable");
      per.push_back(std::get<JointDist>(v));
    }
    try {
      return StateFamily(std::move(states), std::move(prior), std::move(per));
    } catch (const std::invalid_argument& e) {
      throw InputError(w + ": " + e.what());
    }
  }
  return detail::plain_dist_from_json(j, warn, where);
}

// Files.

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Writes to a temporary sibling and renames it into place.
inline void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << text;
    if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

inline DistFile load_dist(const std::string& path) {
  DistFile f;
  Json j = load_json(path);
  f.value = dist_value_from_json(j, f.warnings, path);
  // Validity of masses is an input error for every consumer except `validate`.
  return f;
}

// Games.

inline Json aggregator_json(const Aggregator& h) {
  if (auto a = std::get_if<Affine>(&h)) return Json{{"affine", {{"k", to_string(a->k)}, {"l", to_string(a->l)}}}};
  Json t = Json::array();
  for (const auto& v : std::get<Table>(h).values) t.push_back(to_string(v));
  return Json{{"table", t}};
}

inline Aggregator aggregator_from_json(const Json& j, Warnings& warn, const std::string& where) {
  if (j.contains("affine")) {
    const auto& a = j.at("affine");
    return Affine{rational_from(field(a, "k", where), warn, where + ".k"),
                  rational_from(field(a, "l", where), warn, where + ".l")};
  }
  if (j.contains("table")) {
    Table t;
    for (const auto& v : j.at("table")) t.values.push_back(rational_from(v, warn, where + ".table"));
    return t;
  }
  throw InputError(where + ": h must be {affine: {k, l}} or {table: [...]}");
}

namespace detail {
inline Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}
inline std::vector<Rational> rationals_from(const Json& j, Warnings& warn, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from(j[i], warn, where + "[" + std::to_string(i) + "]"));
  return out;
}
}  // namespace detail

inline Json to_json(const PrivateValueGame& g, const std::optional<std::vector<Rational>>& weights = std::nullopt) {
  Json j{{"kind", "private"},
         {"signals", to_json(g.space())},
         {"players", g.players()},
         {"alpha", detail::rationals_json(g.alpha())},
         {"beta", detail::rationals_json(g.beta())},
         {"h", aggregator_json(g.h())}};
  if (weights) j["weights"] = detail::rationals_json(*weights);
  return j;
}

inline Json to_json(const CommonValueGame& g, const std::vector<std::string>& state_labels = {}) {
  Json j{{"kind", "common"}, {"players", g.players()}};
  if (!state_labels.empty()) j["states"] = state_labels;
  j["alpha"] = detail::rationals_json(g.alpha());
  j["beta"] = detail::rationals_json(g.beta());
  j["h"] = aggregator_json(g.h());
  return j;
}

struct GameFile {
  std::variant<PrivateValueGame, CommonValueGame> game;
  std::optional<std::vector<Rational>> weights;
  std::vector<std::string> state_labels;
  Warnings warnings;
};

inline GameFile game_from_json(const Json& j, const std::string& where = "game") {
  GameFile gf;
  auto& warn = gf.warnings;
  const std::string kind = j.contains("kind") ? j.at("kind").get<std::string>() : (j.contains("states") ? "common" : "private");
  const std::size_t players = count_from(field(j, "players", where), where + ".players");
  auto alpha = detail::rationals_from(field(j, "alpha", where), warn, where + ".alpha");
  auto beta = detail::rationals_from(field(j, "beta", where), warn, where + ".beta");
  Aggregator h = aggregator_from_json(field(j, "h", where), warn, where + ".h");
  try {
    if (kind == "private") {
      SignalSpace sp = space_from_json(field(j, "signals", where), warn);
      gf.game = PrivateValueGame(sp, players, alpha, beta, h);
      if (j.contains("weights")) gf.weights = detail::rationals_from(j.at("weights"), warn, where + ".weights");
    } else if (kind == "common") {
      if (j.contains("states"))
        for (const auto& s : j.at("states")) gf.state_labels.push_back(s.get<std::string>());
      gf.game = CommonValueGame(players, alpha, beta, h);
    } else {
      throw InputError(where + ": kind must be 'private' or 'common'");
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
  return gf;
}

// Reports.

inline Json violation_json(const SignalSpace& sp, const BaseViolation& v) {
  return std::visit(
      [&](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        Json j;
        if constexpr (std::is_same_v<T, MarginalMismatch>) {
          j["variant"] = "MarginalMismatch";
          j["indices"] = {{"s", sp.label(x.s)}, {"player", x.player}};
        } else if constexpr (std::is_same_v<T, PointViolation>) {
          j["variant"] = "Point";
          j["indices"] = {{"s", sp.label(x.s)}, {"s2", sp.label(x.s2)}};
        } else if constexpr (std::is_same_v<T, SetViolation>) {
          j["variant"] = "Set";
          j["indices"] = {{"s", sp.label(x.s)}, {"K", set_json(sp, x.k)}};
        } else if constexpr (std::is_same_v<T, ContourViolation>) {
          j["variant"] = "Contour";
          j["indices"] = {{"s", sp.label(x.s)}, {"shat", sp.label(x.shat)}, {"direction", direction_name(x.dir)}};
        } else if constexpr (std::is_same_v<T, CountViolation>) {
          j["variant"] = "Count";
          j["indices"] = {{"s", sp.label(x.s)}, {"K", set_json(sp, x.k)}, {"m", x.m}};
        } else {
          j["variant"] = "Orthant";
          j["indices"] = {{"x", sp.label(x.x)}, {"y", sp.label(x.y)}};
        }
        j["lhs"] = to_string(x.lhs);
        j["rhs"] = to_string(x.rhs);
        return j;
      },
      v);
}

inline Json violation_json(const SignalSpace& sp, const Violation& v, const std::vector<std::string>& state_labels = {}) {
  return std::visit(
      [&](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, StateViolation>) {
          Json inner = violation_json(sp, x.inner);
          Json theta = x.theta < state_labels.size() ? Json(state_labels[x.theta]) : Json(x.theta);
          return Json{{"variant", "State"}, {"indices", {{"theta", theta}}}, {"inner", inner},
                      {"lhs", inner["lhs"]}, {"rhs", inner["rhs"]}};
        } else if constexpr (std::is_same_v<T, PairViolation>) {
          Json inner = violation_json(sp, x.inner);
          return Json{{"variant", "Pair"}, {"indices", {{"i", x.i}, {"j", x.j}}}, {"inner", inner},
                      {"lhs", inner["lhs"]}, {"rhs", inner["rhs"]}};
        } else {
          return violation_json(sp, BaseViolation(x));
        }
      },
      v);
}

inline Json verdict_json(const SignalSpace& sp, const OrderVerdict& v) {
  Json j{{"order", order_name(v.order)}, {"holds", v.holds}};
  if (v.violation) {
    j["violation"] = violation_json(sp, *v.violation);
    j["certificate"] = describe(sp, *v.violation);
  }
  if (v.set_form) {
    Json s = violation_json(sp, BaseViolation(*v.set_form));
    if (v.set_players) s["indices"]["players"] = {v.set_players->first, v.set_players->second};
    j["setForm"] = s;
  }
  return j;
}

inline std::vector<std::string> state_labels(const StateFamily& fam) {
  std::vector<std::string> out;
  for (const auto& s : fam.states()) out.push_back(s.label);
  return out;
}

inline Json statewise_json(const StateFamily& fam, const StatewiseReport& r) {
  const auto labels = state_labels(fam);
  Json per = Json::object();
  for (std::size_t t = 0; t < r.per_state.size(); ++t) per[labels[t]] = verdict_json(fam.space(), r.per_state[t]);
  Json diff = Json::array();
  for (auto t : r.differing) diff.push_back(labels[t]);
  Json j{{"order", order_name(Order::CAD_STATEWISE)}, {"inner", order_name(r.order)}, {"holds", r.holds},
         {"T", diff}, {"perState", per}};
  if (r.violation) {
    j["violation"] = violation_json(fam.space(), Violation(*r.violation), labels);
    j["certificate"] = "State(" + labels[r.violation->theta] + ", " + describe(fam.space(), r.violation->inner) + ")";
  }
  return j;
}

inline Json equilibria_json(const SignalSpace& sp, const EquilibriumSet& e) {
  Json list = Json::array();
  for (const auto& s : e.equilibria) list.push_back(set_json(sp, s.participation));
  Json j{{"equilibria", list}, {"count", e.equilibria.size()}};
  if (e.stats.nonempty) {
    j["maxP"] = to_string(e.stats.max_p);
    j["minP"] = to_string(e.stats.min_p);
    j["argmax"] = set_json(sp, e.stats.argmax);
    j["argmin"] = set_json(sp, e.stats.argmin);
  }
  return j;
}

inline Json cutoffs_json(const SignalSpace& sp, const CutoffSet& c) {
  Json list = Json::array();
  const std::size_t n = sp.size();
  for (const auto& e : c.equilibria)
    list.push_back({{"cutoff", e.cutoff},
                    {"participation", set_json(sp, e.participation(n))},
                    {"empty", e.is_empty(n)}});
  Json j{{"cutoffEquilibria", list},
         {"emptyIsEquilibrium", c.empty_is_equilibrium},
         {"eqmaxp", to_string(c.eqmaxp)},
         {"eqminp", to_string(c.eqminp)}};
  return j;
}

// Witness bundles.

inline Json dist_value_json(const DistValue& v) {
  return std::visit([](const auto& x) { return to_json(x); }, v);
}

inline Json bundle_json(const WitnessPackage& p, const DistValue& f, const DistValue& g) {
  const SignalSpace& sp = std::visit([](const auto& x) -> const SignalSpace& { return x.space(); }, g);
  Json j{{"family", family_name(p.family)}, {"direction", direction_name(p.direction)}};
  if (p.is_private()) {
    j["game"] = to_json(std::get<PrivateValueGame>(p.game));
  } else {
    std::vector<std::string> labels;
    if (auto fam = std::get_if<StateFamily>(&g)) labels = state_labels(*fam);
    j["game"] = to_json(std::get<CommonValueGame>(p.game), labels);
  }
  if (auto s = std::get_if<Strategy>(&p.strategy))
    j["strategy"] = {{"participation", set_json(sp, s->participation)}};
  else
    j["strategy"] = {{"cutoff", std::get<CutoffStrategy>(p.strategy).cutoff},
                     {"participation", set_json(sp, p.participation(sp.size()))}};
  j["pivot"] = sp.label(p.pivot);
  j["certification"] = {{"pivotPayoffG", to_string(p.pivot_g)},
                        {"pivotPayoffF", to_string(p.pivot_f)},
                        {"boundG", to_string(p.bound_g)},
                        {"boundF", to_string(p.bound_f)}};
  j["F"] = dist_value_json(f);
  j["G"] = dist_value_json(g);
  return j;
}

struct Bundle {
  WitnessPackage package;
  DistValue f, g;
  Warnings warnings;
};

inline Bundle bundle_from_json(const Json& j) {
  Bundle b;
  const std::string fam = field(j, "family", "bundle").get<std::string>();
  bool found = false;
  for (auto w : {WitnessFamily::PrivateMax, WitnessFamily::PrivateMin, WitnessFamily::Common, WitnessFamily::Separable,
                 WitnessFamily::SCAD, WitnessFamily::Congestion})
    if (family_name(w) == fam) b.package.family = w, found = true;
  if (!found) throw InputError("bundle: unknown family '" + fam + "'");
  const std::string dir = field(j, "direction", "bundle").get<std::string>();
  found = false;
  for (auto d : {WitnessDirection::MaxParticipationDrops, WitnessDirection::MinParticipationRises,
                 WitnessDirection::MaxParticipationRises})
    if (direction_name(d) == dir) b.package.direction = d, found = true;
  if (!found) throw InputError("bundle: unknown direction '" + dir + "'");
  b.f = dist_value_from_json(field(j, "F", "bundle"), b.warnings, "bundle.F");
  b.g = dist_value_from_json(field(j, "G", "bundle"), b.warnings, "bundle.G");
  const SignalSpace sp = std::visit([](const auto& x) { return x.space(); }, b.g);
  auto gf = game_from_json(field(j, "game", "bundle"), "bundle.game");
  b.package.game = gf.game;
  const auto& st = field(j, "strategy", "bundle");
  if (st.contains("cutoff"))
    b.package.strategy = CutoffStrategy{count_from(st.at("cutoff"), "bundle.strategy.cutoff")};
  else
    b.package.strategy = Strategy{set_from_json(sp, field(st, "participation", "bundle.strategy"), "bundle.strategy")};
  auto pivot = sp.find(field(j, "pivot", "bundle").get<std::string>());
  if (!pivot) throw InputError("bundle: unknown pivot signal");
  b.package.pivot = *pivot;
  const auto& c = field(j, "certification", "bundle");
  b.package.pivot_g = rational_from(field(c, "pivotPayoffG", "bundle.certification"), b.warnings, "pivotPayoffG");
  b.package.pivot_f = rational_from(field(c, "pivotPayoffF", "bundle.certification"), b.warnings, "pivotPayoffF");
  b.package.bound_g = rational_from(field(c, "boundG", "bundle.certification"), b.warnings, "boundG");
  b.package.bound_f = rational_from(field(c, "boundF", "bundle.certification"), b.warnings, "boundF");
  return b;
}

/// Replays a bundle using only its own contents.
inline WitnessCheck verify_bundle(const Bundle& b) {
  if (auto g = std::get_if<JointDist>(&b.g)) {
    auto f = std::get_if<JointDist>(&b.f);
    if (!f) throw InputError("bundle: F and G must have the same kind");
    require_valid(*f, "F");
    require_valid(*g, "G");
    return verify_witness(b.package, *f, *g);
  }
  if (auto g = std::get_if<StateFamily>(&b.g)) {
    auto f = std::get_if<StateFamily>(&b.f);
    if (!f) throw InputError("bundle: F and G must have the same kind");
    return verify_witness(b.package, *f, *g);
  }
  throw InputError("bundle: non-exchangeable distributions carry no witness");
}

}  // namespace simil
