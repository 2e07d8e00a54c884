// simil: command-line front end over the header-only library.
//
// Exit codes: 0 success / order holds / bundle verified; 1 order violated,
// assertion or validation failed, or no violation to witness; 2 input
// error; 3 degenerate violation; 4 witness bundle failed to re-verify.

#include "simil/auction.hpp"
#include "simil/bank_run.hpp"
#include "simil/beliefs.hpp"
#include "simil/examples.hpp"
#include "simil/io.hpp"
#include "simil/random.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

using namespace simil;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;
constexpr int kDegenerate = 3;
constexpr int kUnverified = 4;

struct Globals {
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  bool format_given = false;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty())
    std::cout << text;
  else
    write_atomic(g.out, text);
}

void print_warnings(const Warnings& w) {
  for (const auto& x : w) std::cerr << "warning: " << x << "\n";
}

void require_json(const Globals& g, const char* cmd) {
  if (g.format != "json") throw InputError(std::string(cmd) + " only writes json");
}

template <typename T>
const T& expect_kind(const DistValue& v, const std::string& path, const char* what) {
  if (auto p = std::get_if<T>(&v)) return *p;
  throw InputError("'" + path + "' must hold " + what);
}

Json assertion(const std::string& name, bool pass) { return Json{{"name", name}, {"pass", pass}}; }

/// Appends the assertions to the report and returns the demo exit code.
int finish_assertions(Json& report, const Json& asserts) {
  report["assertions"] = asserts;
  int code = kOk;
  for (const auto& a : asserts)
    if (!a["pass"].get<bool>()) {
      std::cerr << "assertion failed: " << a["name"].get<std::string>() << "\n";
      code = kFail;
    }
  return code;
}

// validate

int cmd_validate(const Globals& g, const std::string& path) {
  require_json(g, "validate");
  Json j = load_json(path);
  Warnings warn;
  Json report;
  bool ok = true;
  auto one = [&](const DistValue& v) {
    auto r = std::visit(
        [](const auto& d) -> ValidationReport {
          if constexpr (std::is_same_v<std::decay_t<decltype(d)>, StateFamily>)
            return {};
          else
            return validate(d);
        },
        v);
    Json f = Json::array();
    for (const auto& x : r.failures()) f.push_back(x);
    ok = ok && r.passes();
    return Json{{"totalMass", to_string(r.total)},
                {"normalized", r.normalized},
                {"exchangeable", r.exchangeable},
                {"passes", r.passes()},
                {"failures", f}};
  };
  if (j.is_object() && j.contains("stateFamily")) {
    const auto& per = field(j.at("stateFamily"), "perState", path);
    Json states = Json::array();
    for (std::size_t i = 0; i < per.size(); ++i)
      states.push_back(one(dist_value_from_json(per[i], warn, path + ".perState[" + std::to_string(i) + "]")));
    report["perState"] = states;
    try {
      auto fam = dist_value_from_json(j, warn, path);
      (void)fam;
      report["family"] = {{"passes", true}};
    } catch (const InputError& e) {
      ok = false;
      report["family"] = {{"passes", false}, {"failures", {e.what()}}};
    }
  } else {
    report = one(dist_value_from_json(j, warn, path));
  }
  report["passes"] = ok;
  Json wj = Json::array();
  for (const auto& w : warn) wj.push_back(w);
  report["warnings"] = wj;
  print_warnings(warn);
  emit(g, dump(report));
  return ok ? kOk : kFail;
}

// check

Order parse_order(const std::string& name) {
  for (auto o : {Order::CAD, Order::CCAD, Order::ICAD, Order::SCAD, Order::CAD_STATEWISE, Order::PQD2, Order::CAD_NONEXCH})
    if (order_name(o) == name) return o;
  throw InputError("unknown order '" + name + "'");
}

int cmd_check(const Globals& g, const std::string& order_text, const std::string& fpath, const std::string& gpath,
              bool statewise) {
  require_json(g, "check");
  Order order = parse_order(order_text);
  auto ff = load_dist(fpath);
  auto gf = load_dist(gpath);
  print_warnings(ff.warnings);
  print_warnings(gf.warnings);
  if (statewise || order == Order::CAD_STATEWISE || std::holds_alternative<StateFamily>(gf.value)) {
    const auto& fa = expect_kind<StateFamily>(ff.value, fpath, "a state family");
    const auto& ga = expect_kind<StateFamily>(gf.value, gpath, "a state family");
    const Order inner = order == Order::CAD_STATEWISE ? Order::CAD : order;
    auto r = check_cad_statewise(fa, ga, inner);
    emit(g, dump(statewise_json(ga, r)));
    return r.holds ? kOk : kFail;
  }
  if (std::holds_alternative<NonExchJointDist>(ff.value) || std::holds_alternative<NonExchJointDist>(gf.value) ||
      order == Order::CAD_NONEXCH) {
    if (order != Order::CAD && order != Order::CAD_NONEXCH)
      throw InputError("non-exchangeable inputs support only " + order_name(Order::CAD_NONEXCH));
    auto to_nx = [](const DistValue& v) {
      if (auto d = std::get_if<JointDist>(&v)) return NonExchJointDist::from_exchangeable(*d);
      return std::get<NonExchJointDist>(v);
    };
    const auto fa = to_nx(ff.value), ga = to_nx(gf.value);
    require_valid(fa, fpath);
    require_valid(ga, gpath);
    auto v = check_cad_nonexch(fa, ga);
    emit(g, dump(verdict_json(ga.space(), v)));
    return v.holds ? kOk : kFail;
  }
  const auto& fa = expect_kind<JointDist>(ff.value, fpath, "an exchangeable distribution");
  const auto& ga = expect_kind<JointDist>(gf.value, gpath, "an exchangeable distribution");
  require_valid(fa, fpath);
  require_valid(ga, gpath);
  OrderVerdict v;
  switch (order) {
    case Order::CAD: v = check_cad(fa, ga); break;
    case Order::CCAD: v = check_ccad(fa, ga); break;
    case Order::ICAD: v = check_icad(fa, ga); break;
    case Order::SCAD: v = check_scad(fa, ga); break;
    case Order::PQD2: v = check_pqd_2d(fa, ga); break;
    default: throw InputError("order needs different inputs");
  }
  emit(g, dump(verdict_json(ga.space(), v)));
  return v.holds ? kOk : kFail;
}

// equilibria

int cmd_equilibria(const Globals& g, const std::string& game_path, const std::string& dist_path, bool cutoffs) {
  require_json(g, "equilibria");
  auto gfile = game_from_json(load_json(game_path), game_path);
  auto dfile = load_dist(dist_path);
  print_warnings(gfile.warnings);
  print_warnings(dfile.warnings);
  Json report;
  if (auto cg = std::get_if<CommonValueGame>(&gfile.game)) {
    const auto& fam = expect_kind<StateFamily>(dfile.value, dist_path, "a state family for a common-value game");
    if (cg->states() != fam.size()) throw InputError("game and family have different numbers of states");
    report = cutoffs_json(fam.space(), enumerate_cutoff_equilibria(*cg, fam));
    emit(g, dump(report));
    return kOk;
  }
  const auto& game = std::get<PrivateValueGame>(gfile.game);
  if (auto nx = std::get_if<NonExchJointDist>(&dfile.value)) {
    require_valid(*nx, dist_path);
    std::vector<Rational> lambda = gfile.weights.value_or(std::vector<Rational>(nx->players(), Rational(1)));
    const std::size_t n = nx->signals();
    Json list = Json::array();
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      Strategy sigma{SignalSet(bits)};
      if (nonexch_is_equilibrium(game, lambda, *nx, sigma).equilibrium) list.push_back(set_json(nx->space(), sigma.participation));
    }
    report = {{"equilibria", list}, {"count", list.size()}};
    emit(g, dump(report));
    return kOk;
  }
  const auto& d = expect_kind<JointDist>(dfile.value, dist_path, "a distribution for a private-value game");
  require_valid(d, dist_path);
  auto e = enumerate_equilibria_private(game, d);
  report = equilibria_json(d.space(), e);
  report["kind"] = game.kind() == GameKind::Coordination ? "coordination" : "congestion";
  if (cutoffs) {
    Json c = Json::array();
    const std::size_t n = d.signals();
    for (std::size_t k = 1; k <= n + 1; ++k) {
      CutoffStrategy cs{k};
      if (e.contains(Strategy{cs.participation(n)}))
        c.push_back({{"cutoff", k}, {"participation", set_json(d.space(), cs.participation(n))}});
    }
    report["cutoffEquilibria"] = c;
  }
  emit(g, dump(report));
  return kOk;
}

// witness and verify

std::optional<WitnessFamily> parse_family(const std::string& name) {
  for (auto w : {WitnessFamily::PrivateMax, WitnessFamily::PrivateMin, WitnessFamily::Common, WitnessFamily::Separable,
                 WitnessFamily::SCAD, WitnessFamily::Congestion})
    if (family_name(w) == name) return w;
  return std::nullopt;
}

int report_check(const WitnessCheck& c) {
  std::cerr << "verify: pivot payoff G " << to_string(c.pivot_g) << ", F " << to_string(c.pivot_f) << "; bound G "
            << to_string(c.bound_g) << ", F " << to_string(c.bound_f) << "\n";
  for (const auto& f : c.failures) std::cerr << "verify: FAILED " << f << "\n";
  std::cerr << (c.ok ? "verify: ok\n" : "verify: bundle does not re-verify\n");
  return c.ok ? kOk : kUnverified;
}

int no_violation() {
  std::cerr << "orders comparable - no witness exists\n";
  return kFail;
}

int cmd_witness(const Globals& g, const std::string& fpath, const std::string& gpath, const std::string& family_text) {
  require_json(g, "witness");
  auto family = parse_family(family_text);
  if (!family) throw InputError("unknown witness family '" + family_text + "'");
  auto ff = load_dist(fpath);
  auto gf = load_dist(gpath);
  print_warnings(ff.warnings);
  print_warnings(gf.warnings);
  WitnessPackage pkg;
  try {
    switch (*family) {
      case WitnessFamily::PrivateMax:
      case WitnessFamily::PrivateMin:
      case WitnessFamily::Congestion:
      case WitnessFamily::SCAD: {
        const auto& fa = expect_kind<JointDist>(ff.value, fpath, "an exchangeable distribution");
        const auto& ga = expect_kind<JointDist>(gf.value, gpath, "an exchangeable distribution");
        require_valid(fa, fpath);
        require_valid(ga, gpath);
        if (*family == WitnessFamily::SCAD) {
          auto v = check_scad(fa, ga);
          if (v.holds) return no_violation();
          auto cv = std::get_if<CountViolation>(&*v.violation);
          if (!cv) throw InputError("marginals differ: " + describe(ga.space(), *v.violation));
          pkg = witness_scad(ga, *cv);
        } else {
          auto v = check_cad(fa, ga);
          if (v.holds) return no_violation();
          if (!v.set_form) throw InputError("marginals differ: " + describe(ga.space(), *v.violation));
          pkg = *family == WitnessFamily::PrivateMax   ? witness_private_max(ga, *v.set_form)
                : *family == WitnessFamily::PrivateMin ? witness_private_min(ga, *v.set_form)
                                                       : witness_congestion(fa, *v.set_form);
        }
        break;
      }
      case WitnessFamily::Common: {
        const auto& fa = expect_kind<StateFamily>(ff.value, fpath, "a state family");
        const auto& ga = expect_kind<StateFamily>(gf.value, gpath, "a state family");
        auto r = check_cad_statewise(fa, ga, Order::CCAD);
        if (r.holds) return no_violation();
        pkg = witness_common(ga, *r.violation);
        break;
      }
      case WitnessFamily::Separable: {
        const auto& fa = expect_kind<StateFamily>(ff.value, fpath, "a state family");
        const auto& ga = expect_kind<StateFamily>(gf.value, gpath, "a state family");
        if (!same_state_marginals(fa, ga)) throw InputError("per-state marginals differ");
        auto v = check_ccad(mix_family(fa), mix_family(ga));
        if (v.holds) return no_violation();
        auto cv = std::get_if<ContourViolation>(&*v.violation);
        if (!cv) throw InputError("mixture marginals differ");
        pkg = witness_separable(ga, *cv);
        break;
      }
    }
  } catch (const DegenerateViolation& e) {
    std::cerr << "degenerate violation: " << e.what() << "\n";
    return kDegenerate;
  } catch (const AffineDependenceError& e) {
    std::cerr << "posteriors are affinely dependent: " << e.what() << "\n";
    return kDegenerate;
  }
  const std::string text = dump(bundle_json(pkg, ff.value, gf.value));
  emit(g, text);
  // Replay from the serialized bundle, not from the in-memory package.
  return report_check(verify_bundle(bundle_from_json(Json::parse(text))));
}

int cmd_verify(const Globals& g, const std::string& path) {
  require_json(g, "verify");
  auto b = bundle_from_json(load_json(path));
  print_warnings(b.warnings);
  auto c = verify_bundle(b);
  Json report{{"verified", c.ok},
              {"pivotPayoffG", to_string(c.pivot_g)},
              {"pivotPayoffF", to_string(c.pivot_f)},
              {"boundG", to_string(c.bound_g)},
              {"boundF", to_string(c.bound_f)},
              {"failures", c.failures}};
  emit(g, dump(report));
  return c.ok ? kOk : kFail;
}

// bankrun-sweep

std::string sweep_text(const Globals& g, const BankRunParams& base, std::size_t points, std::size_t first,
                       bool* consistent) {
  const auto th = bank_run_thresholds(base.epsilon, base.accuracy);
  const auto rows = bank_run_sweep(base, points, first);
  bool all = true;
  for (const auto& r : rows)
    all = all && r.analysis.eb_exists == (r.perturbation <= th.alpha_star) &&
          r.analysis.eg_exists == (r.perturbation <= th.alpha_star_star);
  if (consistent) *consistent = all;
  std::ostringstream out;
  if (g.format == "csv") {
    out << "# epsilon=" << to_string(base.epsilon) << "\n";
    out << "# accuracy=" << to_string(base.accuracy) << "\n";
    out << "# alpha_star=" << to_string(th.alpha_star) << "\n";
    out << "# alpha_star_star=" << to_string(th.alpha_star_star) << "\n";
    out << "# feasibility_bound=" << to_string(bank_run_feasibility_bound(base.accuracy)) << "\n";
    out << "a_prime,a_prime_float,eG,eB,maximal_expected_run,minimal_expected_run\n";
    for (const auto& r : rows)
      out << to_string(r.perturbation) << "," << to_double(r.perturbation) << "," << (r.analysis.eg_exists ? 1 : 0) << ","
          << (r.analysis.eb_exists ? 1 : 0) << "," << to_string(r.analysis.maximal_expected_run) << ","
          << to_string(r.analysis.minimal_expected_run) << "\n";
    return out.str();
  }
  Json arr = Json::array();
  for (const auto& r : rows)
    arr.push_back({{"aPrime", to_string(r.perturbation)},
                   {"eG", r.analysis.eg_exists},
                   {"eB", r.analysis.eb_exists},
                   {"maximalExpectedRun", to_string(r.analysis.maximal_expected_run)},
                   {"minimalExpectedRun", to_string(r.analysis.minimal_expected_run)}});
  Json j{{"epsilon", to_string(base.epsilon)},
         {"accuracy", to_string(base.accuracy)},
         {"alphaStar", to_string(th.alpha_star)},
         {"alphaStarStar", to_string(th.alpha_star_star)},
         {"feasibilityBound", to_string(bank_run_feasibility_bound(base.accuracy))},
         {"rows", arr}};
  return dump(j);
}

// demos

int demo_table1(const Globals& g) {
  const auto f = examples::table1_f(), q = examples::table1_g();
  const auto v = check_cad(f, q);
  const Rational f111 = f.ordered_mass({1, 1, 1}), g111 = q.ordered_mass({1, 1, 1});
  const Rational f000 = f.ordered_mass({0, 0, 0}), g000 = q.ordered_mass({0, 0, 0});
  Json report{{"cad", verdict_json(f.space(), v)},
              {"condProb", {{"F", to_string(f.cond_prob(0, SignalSet::single(0)))}, {"G", to_string(q.cond_prob(0, SignalSet::single(0)))}}},
              {"indicator111", {{"F", to_string(f111)}, {"G", to_string(g111)}}},
              {"indicator000", {{"F", to_string(f000)}, {"G", to_string(g000)}}}};
  Json a = Json::array();
  a.push_back(assertion("CAD holds", v.holds));
  a.push_back(assertion("E_F[1{111}] = 1/6 < 1/4 = E_G", f111 == frac(1, 6) && g111 == frac(1, 4)));
  a.push_back(assertion("E_F[1{000}] = 1/3 > 0 = E_G", f000 == frac(1, 3) && g000 == 0));
  const int code = finish_assertions(report, a);
  emit(g, dump(report));
  return code;
}

int demo_figure1(const Globals& g) {
  const auto f = examples::figure1_f(), q = examples::figure1_g();
  const auto& sp = f.space();
  const auto pqd = check_pqd_2d(f, q), cad = check_cad(f, q), ccad = check_ccad(f, q), icad = check_icad(f, q);
  Json report{{"alpha", to_string(examples::kFigure1Alpha)},
              {"accuracy", to_string(examples::kFigure1Accuracy)},
              {"pqd", verdict_json(sp, pqd)},
              {"cad", verdict_json(sp, cad)},
              {"ccad", verdict_json(sp, ccad)},
              {"icad", verdict_json(sp, icad)}};
  BankRunParams bp = examples::bankrun_base();
  bp.perturbation = examples::kFigure1Alpha;
  const auto intro = intro_example_suite(bp);
  report["bankRun"] = {{"alphaStar", to_string(intro.thresholds.alpha_star)},
                       {"alphaStarStar", to_string(intro.thresholds.alpha_star_star)},
                       {"feasibilityBound", to_string(bank_run_feasibility_bound(bp.accuracy))},
                       {"perturbationAboveAlphaStar", intro.perturbation_above_alpha_star},
                       {"eBEliminated", intro.eb_eliminated}};
  const auto mid = bank_run_space().index_of("1/2");
  Json a = Json::array();
  a.push_back(assertion("marginals equal", f.marginal() == q.marginal()));
  a.push_back(assertion("PQD holds", pqd.holds));
  a.push_back(assertion("CAD fails at Point(1/2, 1/2)",
                        !cad.holds && describe(sp, *cad.violation) == "Point(1/2, 1/2)"));
  a.push_back(assertion("cCAD fails at s = 1/2", !ccad.holds && std::get<ContourViolation>(*ccad.violation).s == mid));
  a.push_back(assertion("iCAD agrees with cCAD", icad.holds == ccad.holds));
  const int code = finish_assertions(report, a);
  emit(g, dump(report));
  return code;
}

int demo_figure2(const Globals& g) {
  const auto f = examples::figure2_f(), q = examples::figure2_g();
  const auto& sp = f.space();
  const auto cad = check_cad(f, q), ccad = check_ccad(f, q), icad = check_icad(f, q), pqd = check_pqd_2d(f, q);
  Json report{{"alpha", to_string(examples::kFigure2Alpha)},
              {"ccad", verdict_json(sp, ccad)},
              {"cad", verdict_json(sp, cad)},
              {"icad", verdict_json(sp, icad)},
              {"pqd", verdict_json(sp, pqd)}};
  Json a = Json::array();
  a.push_back(assertion("cCAD holds", ccad.holds));
  a.push_back(assertion("CAD fails at Point(2, 3)", !cad.holds && describe(sp, *cad.violation) == "Point(2, 3)"));
  a.push_back(assertion("iCAD agrees with cCAD", icad.holds == ccad.holds));
  a.push_back(assertion("PQD holds", pqd.holds));
  const int code = finish_assertions(report, a);
  emit(g, dump(report));
  return code;
}

int demo_bankrun(Globals g) {
  if (!g.format_given) g.format = "csv";
  bool consistent = false;
  const std::string text = sweep_text(g, examples::bankrun_base(), 20, 1, &consistent);
  emit(g, text);
  if (!consistent) std::cerr << "assertion failed: sweep disagrees with the threshold formulas\n";
  return consistent ? kOk : kFail;
}

int demo_auction(const Globals& g) {
  const JointDist base = examples::uniform_independent(3, 2);
  const JointDist mixed = diagonal_mixture(base, frac(1, 2));
  const auto dec = eti_decompose(mixed, base);
  Json steps = Json::array();
  Rational sum = 0;
  for (const auto& e : dec.steps) {
    const Rational inc = eti_revenue_increment(base.space(), e);
    sum += inc;
    steps.push_back({{"s", base.space().label(e.s)}, {"s2", base.space().label(e.s2)}, {"a", to_string(e.a)}, {"increment", to_string(inc)}});
  }
  const Rational rf = auction_revenue(mixed), rg = auction_revenue(base);
  Json report{{"revenueF", to_string(rf)}, {"revenueG", to_string(rg)}, {"steps", steps}};
  Json a = Json::array();
  a.push_back(assertion("decomposition succeeds", dec.ok));
  a.push_back(assertion("steps reproduce F", apply_steps(base, dec.steps) == mixed));
  a.push_back(assertion("increments sum to R(F) - R(G)", sum == rf - rg));
  a.push_back(assertion("R(F) >= R(G)", rf >= rg));
  const int code = finish_assertions(report, a);
  emit(g, dump(report));
  return code;
}

Json rationalize_json(const JointDist& d, const std::vector<Rational>& x) {
  const auto r = rationalizable_sets(d, x);
  return Json{{"invest", set_json(d.space(), r.invest)},
              {"notInvest", set_json(d.space(), r.not_invest)},
              {"investIterations", r.invest_iterations},
              {"notInvestIterations", r.not_invest_iterations}};
}

int demo_rationalize(const Globals& g) {
  const JointDist base = examples::uniform_independent(4, 2);
  const JointDist mixed = diagonal_mixture(base, frac(1, 2));
  const std::vector<Rational> x{frac(-1, 10), frac(1, 5), frac(3, 5), frac(4, 5)};
  Json xs = Json::array();
  for (const auto& v : x) xs.push_back(to_string(v));
  const auto rg = rationalizable_sets(base, x), rf = rationalizable_sets(mixed, x);
  Json report{{"x", xs}, {"G", rationalize_json(base, x)}, {"F", rationalize_json(mixed, x)}};
  Json a = Json::array();
  a.push_back(assertion("invest set grows under the mixture", rg.invest.subset_of(rf.invest)));
  a.push_back(assertion("fixpoints within n iterations",
                        rg.invest_iterations <= 4 && rf.invest_iterations <= 4 && rg.not_invest_iterations <= 4 &&
                            rf.not_invest_iterations <= 4));
  const int code = finish_assertions(report, a);
  emit(g, dump(report));
  return code;
}

int cmd_demo(const Globals& g, const std::string& name) {
  if (name == "table1") return demo_table1(g);
  if (name == "figure1") return demo_figure1(g);
  if (name == "figure2") return demo_figure2(g);
  if (name == "bankrun") return demo_bankrun(g);
  if (name == "auction") return demo_auction(g);
  if (name == "rationalize") return demo_rationalize(g);
  throw InputError("unknown demo '" + name + "'");
}

// auction, rationalize

int cmd_auction(const Globals& g, const std::string& fpath, const std::string& gpath) {
  require_json(g, "auction");
  auto ff = load_dist(fpath);
  print_warnings(ff.warnings);
  const auto& fa = expect_kind<JointDist>(ff.value, fpath, "an exchangeable distribution");
  require_valid(fa, fpath);
  Json report{{"revenueF", to_string(auction_revenue(fa))}};
  if (gpath.empty()) {
    emit(g, dump(report));
    return kOk;
  }
  auto gf = load_dist(gpath);
  print_warnings(gf.warnings);
  const auto& ga = expect_kind<JointDist>(gf.value, gpath, "an exchangeable distribution");
  require_valid(ga, gpath);
  report["revenueG"] = to_string(auction_revenue(ga));
  const auto dec = eti_decompose(fa, ga);
  report["decomposes"] = dec.ok;
  if (dec.ok) {
    Json steps = Json::array();
    for (const auto& e : dec.steps)
      steps.push_back({{"s", ga.space().label(e.s)},
                       {"s2", ga.space().label(e.s2)},
                       {"a", to_string(e.a)},
                       {"increment", to_string(eti_revenue_increment(ga.space(), e))}});
    report["steps"] = steps;
    report["roundTrip"] = apply_steps(ga, dec.steps) == fa;
  } else {
    report["cell"] = {{"s", ga.space().label(dec.cell->first)},
                      {"s2", ga.space().label(dec.cell->second)},
                      {"F", to_string(dec.f_cell)},
                      {"G", to_string(dec.g_cell)}};
  }
  emit(g, dump(report));
  return dec.ok ? kOk : kFail;
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_rational(item));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("--x: ") + e.what());
    }
  }
  return out;
}

int cmd_rationalize(const Globals& g, const std::string& path, const std::string& xtext) {
  require_json(g, "rationalize");
  auto df = load_dist(path);
  print_warnings(df.warnings);
  const auto& d = expect_kind<JointDist>(df.value, path, "an exchangeable distribution");
  require_valid(d, path);
  const auto x = parse_list(xtext);
  if (x.size() != d.signals()) throw InputError("--x needs one value per signal");
  emit(g, dump(rationalize_json(d, x)));
  return kOk;
}

// generate, fixtures

struct GenOptions {
  std::string kind;
  std::size_t signals = 3, players = 2, states = 3;
  std::string mixture;
};

int cmd_generate(const Globals& g, const GenOptions& o) {
  require_json(g, "generate");
  if (!g.seed) throw InputError("generate needs --seed");
  Rng rng(*g.seed);
  if (o.signals < 1 || o.signals > kMaxSignals) throw InputError("--signals out of range");
  if (o.players < 2 || o.players > kMaxPlayers) throw InputError("--players out of range");
  if (o.kind == "dist") {
    emit(g, dump(to_json(random_exchangeable(rng, o.signals, o.players))));
  } else if (o.kind == "pair") {
    JointDist gd = random_exchangeable(rng, o.signals, o.players);
    JointDist fd = o.mixture.empty() ? random_swaps(rng, gd, 1 + uniform_int(rng, 0, 3))
                                     : diagonal_mixture(gd, parse_rational(o.mixture));
    if (g.out.empty()) {
      std::cout << dump(Json{{"F", to_json(fd)}, {"G", to_json(gd)}});
    } else {
      std::filesystem::create_directories(g.out);
      write_atomic(g.out + "/F.json", dump(to_json(fd)));
      write_atomic(g.out + "/G.json", dump(to_json(gd)));
    }
  } else if (o.kind == "game") {
    emit(g, dump(to_json(random_affine_game(rng, SignalSpace::integers(o.signals), o.players))));
  } else if (o.kind == "family") {
    emit(g, dump(to_json(random_family(rng, o.signals, std::max(o.states, o.signals), o.players))));
  } else {
    throw InputError("unknown kind '" + o.kind + "' (dist, pair, game, family)");
  }
  return kOk;
}

int cmd_fixtures(const Globals& g) {
  if (g.out.empty()) throw InputError("fixtures needs --out DIR");
  std::filesystem::create_directories(g.out);
  auto put = [&](const std::string& name, const Json& j) { write_atomic(g.out + "/" + name, dump(j)); };
  put("table1_F.json", to_json(examples::table1_f()));
  put("table1_G.json", to_json(examples::table1_g()));
  put("fig1_F.json", to_json(examples::figure1_f()));
  put("fig1_G.json", to_json(examples::figure1_g()));
  put("fig2_F.json", to_json(examples::figure2_f()));
  put("fig2_G.json", to_json(examples::figure2_g()));
  put("b2_F.json", to_json(examples::b2_perturbed()));
  put("b2_G.json", to_json(examples::b2_base()));
  put("bankrun_G.json", to_json(bank_run_family(examples::bankrun_base())));
  put("bankrun_F.json", to_json(bank_run_family(examples::bankrun_perturbed())));
  put("bankrun_game.json", to_json(bank_run_game(), state_labels(bank_run_family(examples::bankrun_base()))));
  const auto u2 = examples::uniform_independent(2, 2);
  put("uniform2.json", to_json(u2));
  put("dominance_game.json", to_json(examples::dominance_game(u2.space(), 2)));
  put("congestion_G.json", to_json(examples::congestion_base()));
  put("congestion_F.json", to_json(examples::congestion_mixed()));
  put("congestion_game.json", to_json(examples::congestion_game()));
  put("nonexch_F.json", to_json(examples::nonexch_f()));
  put("nonexch_G.json", to_json(examples::nonexch_g()));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Similarity orders, equilibrium sets and witness games for exchangeable signal distributions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "Output path (stdout if omitted)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "Seed for randomized commands");

  std::string a1, a2, a3, family, xtext;
  bool statewise = false, cutoffs = false;
  std::size_t points = 20;
  BankRunParams bp;
  std::string eps_text = "1/20", acc_text = "97/100";
  GenOptions gen;

  auto* validate_cmd = app.add_subcommand("validate", "Check a distribution or state family file");
  validate_cmd->add_option("file", a1)->required();

  auto* check_cmd = app.add_subcommand("check", "Decide an order between F and G");
  check_cmd->add_option("order", a1, "cad, ccad, icad, scad, pqd, cad-nonexch, cad-statewise")->required();
  check_cmd->add_option("F", a2)->required();
  check_cmd->add_option("G", a3)->required();
  check_cmd->add_flag("--statewise", statewise, "Compare state families state by state");

  auto* eq_cmd = app.add_subcommand("equilibria", "Enumerate symmetric pure equilibria");
  eq_cmd->add_option("game", a1)->required();
  eq_cmd->add_option("dist", a2)->required();
  eq_cmd->add_flag("--cutoffs", cutoffs, "Report cutoff equilibria");

  auto* wit_cmd = app.add_subcommand("witness", "Build and replay a witness game bundle");
  wit_cmd->add_option("F", a1)->required();
  wit_cmd->add_option("G", a2)->required();
  wit_cmd->add_option("--family", family, "private-max, private-min, common, separable, scad, congestion")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Replay a witness bundle");
  verify_cmd->add_option("bundle", a1)->required();

  auto* demo_cmd = app.add_subcommand("demo", "Reproduce a worked example");
  demo_cmd->add_option("name", a1, "table1, figure1, figure2, bankrun, auction, rationalize")->required();

  auto* sweep_cmd = app.add_subcommand("bankrun-sweep", "Equilibria of the bank run over a perturbation grid");
  sweep_cmd->add_option("--points", points, "Grid points in (0, feasibility bound]");
  sweep_cmd->add_option("--epsilon", eps_text);
  sweep_cmd->add_option("--accuracy", acc_text);

  auto* auction_cmd = app.add_subcommand("auction", "Second-price revenue and ETI decomposition");
  auction_cmd->add_option("F", a1)->required();
  auction_cmd->add_option("G", a2);

  auto* rat_cmd = app.add_subcommand("rationalize", "Rationalizable invest / don't-invest sets");
  rat_cmd->add_option("dist", a1)->required();
  rat_cmd->add_option("--x", xtext, "Comma-separated payoff parameters, one per signal")->required();

  auto* gen_cmd = app.add_subcommand("generate", "Random instances from a seed");
  gen_cmd->add_option("kind", gen.kind, "dist, pair, game, family")->required();
  gen_cmd->add_option("--signals", gen.signals);
  gen_cmd->add_option("--players", gen.players);
  gen_cmd->add_option("--states", gen.states);
  gen_cmd->add_option("--mixture", gen.mixture, "For pair: F is the diagonal mixture of G with this weight");

  auto* fix_cmd = app.add_subcommand("fixtures", "Write the bundled example files to --out DIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  g.format_given = app.get_option("--format")->count() > 0;
  try {
    if (*validate_cmd) return cmd_validate(g, a1);
    if (*check_cmd) return cmd_check(g, a1, a2, a3, statewise);
    if (*eq_cmd) return cmd_equilibria(g, a1, a2, cutoffs);
    if (*wit_cmd) return cmd_witness(g, a1, a2, family);
    if (*verify_cmd) return cmd_verify(g, a1);
    if (*demo_cmd) return cmd_demo(g, a1);
    if (*sweep_cmd) {
      Globals gs = g;
      if (!gs.format_given) gs.format = "csv";
      bp.epsilon = parse_rational(eps_text);
      bp.accuracy = parse_rational(acc_text);
      emit(gs, sweep_text(gs, bp, points, 1, nullptr));
      return kOk;
    }
    if (*auction_cmd) return cmd_auction(g, a1, a2);
    if (*rat_cmd) return cmd_rationalize(g, a1, xtext);
    if (*gen_cmd) return cmd_generate(g, gen);
    if (*fix_cmd) return cmd_fixtures(g);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
