// Command-line driver: validation, K_0 and the checks built on it.

#include <chrono>
#include <iostream>
#include <numeric>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "waldkit/errors.hpp"
#include "waldkit/kzero.hpp"
#include "waldkit/sconstr.hpp"
#include "waldkit/zoo.hpp"

#ifndef WALDKIT_FIXTURE_DIR
#define WALDKIT_FIXTURE_DIR "tests/fixtures"
#endif

using namespace waldkit;
using Json = nlohmann::ordered_json;

namespace {

struct Config {
  std::string zoo;
  std::string file;
  std::optional<long> budget;
  std::string ladder;
  int m = 1;
  int M = 2;
  int K = 2;
  int D = 2;
  std::size_t limit_functors = 200'000;
  std::string format = "text";
  std::uint64_t seed = 0;
  bool timing = false;
  std::string sub;
  std::string labeling;
  std::string fixtures = WALDKIT_FIXTURE_DIR;
};

// Math failures exit with 1, malformed input with 2.
int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::UsageError:
    case ErrorKind::UnknownZoo:
    case ErrorKind::ParamTooLarge:
    case ErrorKind::SyntaxError:
    case ErrorKind::UnresolvedReference:
      return 2;
    default:
      return 1;
  }
}

std::string spec_of(const Config& c) {
  if (c.zoo.empty() == c.file.empty()) throw Error(ErrorKind::UsageError, "give exactly one of --zoo and --file");
  return c.file.empty() ? c.zoo : "file:" + c.file;
}

ZooContext load(const std::string& spec, const Config& c, std::optional<long> budget) {
  ZooOptions o;
  o.budget = budget;
  o.wald.order = SearchOrder{c.seed};
  return make_zoo(spec, o);
}

ZooContext load(const Config& c) { return load(spec_of(c), c, c.budget); }

FilteredOptions filtered_options(const Config& c) {
  FilteredOptions o;
  o.functor_limit = c.limit_functors;
  o.wald.order = SearchOrder{c.seed};
  return o;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Json context_info(const SizedWaldContext& ctx) {
  Json j;
  j["context"] = ctx.name;
  j["budget"] = ctx.budget;
  j["objects"] = ctx.num_objects();
  j["morphisms"] = ctx.cat().num_morphisms();
  return j;
}

std::string verdict(bool ok, const std::string& detail) { return std::string(ok ? "PASS" : "FAIL") + ": " + detail; }

Json dictionary(const K0& k) {
  Json d = Json::array();
  for (ObjId g : k.generators) d.push_back("[" + k.ctx->cat().object_name(g) + "] -> " + k.describe(g));
  return d;
}

// ---------------------------------------------------------------------------
// Commands. Each returns its report and whether it passed.

struct Outcome {
  Json report;
  bool ok = true;
};

Outcome cmd_validate(const Config& c) {
  const ZooContext z = load(c);
  Outcome o{context_info(*z.ctx)};
  std::size_t cofs = 0;
  for (MorId f = 0; f < static_cast<MorId>(z.ctx->cat().num_morphisms()); ++f) cofs += z.ctx->is_cof(f) ? 1 : 0;
  o.report["cofibrations"] = cofs;
  o.report["iso_classes"] = z.ctx->isos().num_classes();
  o.report["spans_in_budget"] = z.ctx->stats.spans_in_budget;
  o.report["spans_searched"] = z.ctx->stats.spans_searched;
  if (z.w) {
    const Labeling l = validate_labeling(z.ctx, *z.w);
    o.report["labeling"] = l.complete ? "valid" : "valid (cube cap reached)";
    o.report["gluing_cubes"] = l.cubes_checked;
  }
  o.report["result"] = "PASS: Waldhausen context";
  return o;
}

Outcome cmd_k0(const Config& c) {
  const ZooContext z = load(c);
  const K0 k = k0(z.ctx);
  Outcome o{context_info(*z.ctx)};
  o.report["generators"] = k.generators.size();
  o.report["relations"] = k.sequence_relations;
  o.report["k0"] = k.group().to_string();
  o.report["dictionary"] = dictionary(k);
  o.report["result"] = k.group().to_string();
  return o;
}

Outcome cmd_k0_pi1(const Config& c) {
  if (c.M != c.K) throw Error(ErrorKind::UsageError, "the diagonal needs --M equal to --K");
  const ZooContext z = load(c);
  const K0 k = k0(z.ctx);
  const IotaS io = iota_S_bisimplicial(z.ctx, c.M, c.K, 20'000'000, filtered_options(c));
  const Pi1Comparison p = k0_via_pi1(io, k);
  Outcome o{context_info(*z.ctx)};
  o.report["M"] = c.M;
  o.report["K"] = c.K;
  o.report["k0"] = k.group().to_string();
  o.report["pi1_abelianized"] = p.group.to_string();
  o.report["loops"] = p.loops;
  o.report["relators"] = p.relators;
  o.report["matching_well_defined"] = p.well_defined;
  o.report["matching_isomorphism"] = p.isomorphism;
  if (c.D >= 3 && c.M >= 3) o.report["h2_diagonal"] = homology(diagonal(io.bisimp), 2).to_string();
  o.ok = p.isomorphism && p.group == k.group();
  o.report["result"] = verdict(o.ok, p.group.to_string() + (p.reason.empty() ? "" : " (" + p.reason + ")"));
  return o;
}

Outcome cmd_additivity(const Config& c) {
  const ZooContext z = load(c);
  const AdditivityReport r = additivity_check(z.ctx, c.m, filtered_options(c));
  Outcome o{context_info(*z.ctx)};
  o.report["m"] = c.m;
  o.report["k0_Fm"] = r.fm.to_string();
  o.report["k0_C"] = r.base.to_string();
  o.report["k0_Sm"] = r.sm.to_string();
  o.report["kernel"] = r.map.kernel.to_string();
  o.report["cokernel"] = r.map.cokernel.to_string();
  o.ok = r.passed;
  o.report["result"] = verdict(r.passed, r.fm.to_string());
  return o;
}

MorSet labeling_for(const ZooContext& z, const std::string& kind) {
  const SizedWaldContext& ctx = *z.ctx;
  MorSet w(ctx.cat().num_morphisms(), 0);
  if (kind == "file" || (kind.empty() && z.w)) {
    if (!z.w) throw Error(ErrorKind::UsageError, "the context has no W section");
    return *z.w;
  }
  if (kind.empty() || kind == "iso") {
    for (MorId m = 0; m < static_cast<MorId>(w.size()); ++m) w[static_cast<std::size_t>(m)] = ctx.is_iso(m);
  } else if (kind == "all") {
    w.assign(w.size(), 1);
  } else if (kind == "factor") {
    if (!z.sum) throw Error(ErrorKind::UsageError, "--labeling factor needs a direct sum A+B");
    for (MorId m = 0; m < static_cast<MorId>(w.size()); ++m) {
      w[static_cast<std::size_t>(m)] = z.sum->left->is_iso(z.sum->split(m).first);
    }
  } else {
    throw Error(ErrorKind::UsageError, "unknown labeling '" + kind + "' (iso, all, factor, file)");
  }
  return w;
}

Outcome cmd_fibration(const Config& c) {
  const ZooContext z = load(c);
  const Labeling l = validate_labeling(z.ctx, labeling_for(z, c.labeling));
  const FibrationReport r = fibration_pi0_check(l);
  Outcome o{context_info(*z.ctx)};
  o.report["labeling"] = c.labeling.empty() ? (z.w ? "file" : "iso") : c.labeling;
  o.report["k0_Aw"] = r.aw.to_string();
  o.report["k0_A"] = r.a.to_string();
  o.report["k0_A_wA"] = r.aw_rel.to_string();
  o.report["inclusion_injective"] = r.inclusion.injective;
  o.report["exact_at_K0_A"] = r.exact_middle;
  o.report["quotient_surjective"] = r.surjective;
  o.ok = r.passed();
  o.report["result"] =
      verdict(o.ok, r.aw.to_string() + " -> " + r.a.to_string() + " -> " + r.aw_rel.to_string() + " -> 0");
  return o;
}

Outcome cmd_cofinality(const Config& c) {
  const ZooContext z = load(c);
  std::vector<ObjId> objects;
  for (const std::string& name : split(c.sub, ',')) {
    const auto x = z.ctx->cat().find_object(name);
    if (!x) throw Error(ErrorKind::UsageError, "no object named '" + name + "'");
    objects.push_back(*x);
  }
  if (objects.empty()) throw Error(ErrorKind::UsageError, "--sub lists the objects of the subcategory");
  std::sort(objects.begin(), objects.end());
  objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
  const CofinalityReport r = cofinality_check(full_subcontext(z.ctx, objects, z.ctx->name + "'"));
  Outcome o{context_info(*z.ctx)};
  o.report["sub"] = c.sub;
  o.report["weakly_cofinal"] = r.cofinal;
  if (!r.reason.empty()) o.report["reason"] = r.reason;
  o.report["k0_sub"] = r.sub.to_string();
  o.report["k0"] = r.ambient.to_string();
  o.report["inclusion_injective"] = r.injective;
  o.report["quotient"] = r.quotient.to_string();
  o.ok = r.passed();
  o.report["result"] = verdict(o.ok, "A = " + r.quotient.to_string());
  return o;
}

Outcome cmd_stats(const Config& c) {
  const ZooContext z = load(c);
  Outcome o{context_info(*z.ctx)};
  const FilteredOptions fo = filtered_options(c);
  Json levels = Json::array();
  for (int m = 0; m <= c.m; ++m) {
    const FilteredPtr F = build_Fm(z.ctx, m, fo);
    const SmContext S = build_Sm(z.ctx, m, fo);
    Json row;
    row["m"] = m;
    row["F_objects"] = F->cat().num_objects();
    row["F_morphisms"] = F->cat().num_morphisms();
    row["S_objects"] = S.cat().num_objects();
    row["S_morphisms"] = S.cat().num_morphisms();
    levels.push_back(row);
  }
  o.report["filtered"] = levels;
  const IotaS io = iota_S_bisimplicial(z.ctx, c.M, c.K, 20'000'000, fo);
  Json entries = Json::array();
  for (int m = 0; m <= c.M; ++m) {
    std::string line;
    for (int k = 0; k <= c.K; ++k) line += (k ? " " : "") + std::to_string(io.bisimp.count[m][k]);
    entries.push_back("m=" + std::to_string(m) + ": " + line);
  }
  o.report["iota_S_counts"] = entries;
  o.report["result"] = "PASS: statistics";
  return o;
}

// N=... parameters follow the budget so that the context holds exactly the
// objects of size at most B.
CtxPtr ladder_context(const std::string& spec, const Config& c, long b) {
  const std::string s = std::regex_replace(spec, std::regex("N=[0-9]+"), "N=" + std::to_string(b));
  return load(s, c, b).ctx;
}

Outcome cmd_stabilization(const Config& c) {
  std::vector<long> budgets;
  for (const std::string& s : split(c.ladder, ',')) {
    try {
      budgets.push_back(std::stol(s));
    } catch (const std::exception&) {
      throw Error(ErrorKind::UsageError, "bad budget '" + s + "'");
    }
  }
  if (budgets.empty() || !std::is_sorted(budgets.begin(), budgets.end()) ||
      std::adjacent_find(budgets.begin(), budgets.end()) != budgets.end()) {
    throw Error(ErrorKind::UsageError, "--budget-ladder must be strictly increasing");
  }
  const std::string spec = spec_of(c);
  const StabilizationReport r =
      budget_stabilization([&](long b) { return ladder_context(spec, c, b); }, budgets);
  Outcome o;
  o.report["context"] = spec;
  Json steps = Json::array();
  for (const StabilizationStep& s : r.steps) {
    Json row;
    row["budget"] = s.budget;
    row["k0"] = s.group.to_string();
    row["map_from_previous"] = s.map_isomorphism ? "iso" : "not iso";
    if (!s.note.empty()) row["note"] = s.note;
    steps.push_back(row);
  }
  o.report["steps"] = steps;
  o.report["result"] = r.stable_from ? "stable from budget " + std::to_string(*r.stable_from) : "not stable";
  return o;
}

// ---------------------------------------------------------------------------
// The fixed suite behind the acceptance criteria.

Outcome run_check(const std::string& name, const std::function<Outcome()>& body,
                  std::optional<ErrorKind> expected_error = std::nullopt) {
  Outcome o;
  o.report["check"] = name;
  try {
    Outcome r = body();
    o.ok = r.ok && !expected_error;
    o.report["result"] = r.report["result"];
  } catch (const Error& e) {
    o.ok = expected_error == e.kind();
    o.report["result"] = std::string(o.ok ? "PASS: " : "FAIL: ") + std::string(to_string(e.kind()));
  }
  return o;
}

Outcome cmd_suite(const Config& base) {
  std::vector<Outcome> checks;
  auto with = [&](std::string spec, auto&& fn) {
    return [spec, fn, &base] {
      Config c = base;
      c.zoo = spec;
      return fn(c);
    };
  };
  auto file = [&](const std::string& name) { return "file:" + base.fixtures + "/" + name; };

  for (const char* s : {"trivial", "vect:q=2,N=1", "vect:q=2,N=2", "vect:q=2,N=3", "vect:q=3,N=1", "vect:q=3,N=2",
                        "pointed_sets:N=1", "pointed_sets:N=2", "pointed_sets:N=3", "pointed_sets:N=4"}) {
    checks.push_back(run_check(std::string("validate ") + s, with(s, cmd_validate)));
    checks.push_back(run_check(std::string("k0 ") + s, with(s, cmd_k0)));
  }
  for (const char* f : {"iso_pair.cat", "pointed_one.cat", "pointed_one_maximal.cat", "square_ok.cat"}) {
    checks.push_back(run_check(std::string("validate ") + f, with(file(f), cmd_validate)));
  }
  checks.push_back(run_check("validate zero_map_not_ingressive.cat", with(file("zero_map_not_ingressive.cat"), cmd_validate),
                             ErrorKind::ZeroMapNotIngressive));
  checks.push_back(run_check("validate pushout_not_ingressive.cat", with(file("pushout_not_ingressive.cat"), cmd_validate),
                             ErrorKind::PushoutNotIngressive));
  checks.push_back(run_check("validate poset01", with("poset01", cmd_validate), ErrorKind::NoZeroObject));
  for (const char* s : {"trivial", "vect:q=2,N=2", "pointed_sets:N=3", "vect:q=2,N=2+pointed_sets:N=2"}) {
    checks.push_back(run_check(std::string("k0-pi1 ") + s, with(s, cmd_k0_pi1)));
  }
  for (const char* s : {"vect:q=2,N=2", "pointed_sets:N=2"}) {
    for (int m = 1; m <= 2; ++m) {
      checks.push_back(run_check("additivity m=" + std::to_string(m) + " " + s, [&, s, m] {
        Config c = base;
        c.zoo = s;
        c.m = m;
        return cmd_additivity(c);
      }));
    }
  }
  for (const char* s : {"vect:q=2,N=2", "pointed_sets:N=2"}) {
    for (int m = 0; m <= 2; ++m) {
      checks.push_back(run_check("face-equivalence m=" + std::to_string(m) + " " + s, [&, s, m] {
        const CtxPtr ctx = load(s, base, std::nullopt).ctx;
        const FilteredOptions fo = filtered_options(base);
        const EquivalenceWitness w =
            equivalence_check(face_zero_functor(build_Sm(ctx, m + 1, fo), *build_Fm(ctx, m, fo)));
        Outcome o;
        o.ok = w.equivalent;
        o.report["result"] = verdict(w.equivalent, w.equivalent ? "S_" + std::to_string(m + 1) + " ~ F_" +
                                                                      std::to_string(m)
                                                                : w.reason);
        return o;
      }));
      checks.push_back(run_check("segal m=" + std::to_string(m) + " " + s, [&, s, m] {
        const CtxPtr ctx = load(s, base, std::nullopt).ctx;
        const FilteredOptions fo = filtered_options(base);
        const SegalReport r = segal_check(*build_Fm(ctx, m, fo), *build_Fm(ctx, 1, fo));
        Outcome o;
        o.ok = r.holds;
        o.report["result"] = verdict(r.holds, r.holds ? std::to_string(r.objects) + " objects, " +
                                                            std::to_string(r.morphisms) + " morphisms"
                                                      : r.reason);
        return o;
      }));
    }
  }
  for (const char* l : {"iso", "all"}) {
    checks.push_back(run_check(std::string("fibration ") + l + " vect:q=2,N=2", [&, l] {
      Config c = base;
      c.zoo = "vect:q=2,N=2";
      c.labeling = l;
      return cmd_fibration(c);
    }));
  }
  checks.push_back(run_check("fibration factor vect:q=2,N=2+vect:q=2,N=2", [&] {
    Config c = base;
    c.zoo = "vect:q=2,N=2+vect:q=2,N=2";
    c.labeling = "factor";
    return cmd_fibration(c);
  }));
  checks.push_back(run_check("cofinality even vect:q=2,N=4", [&] {
    Config c = base;
    c.zoo = "vect:q=2,N=4";
    c.sub = "0,F2^2,F2^4";
    return cmd_cofinality(c);
  }));
  checks.push_back(run_check("stabilization vect:q=2", [&] {
    Config c = base;
    c.zoo = "vect:q=2,N=1";
    c.ladder = "1,2,3";
    return cmd_stabilization(c);
  }));

  Outcome o;
  Json list = Json::array();
  std::size_t passed = 0;
  for (const Outcome& c : checks) {
    list.push_back(c.report);
    passed += c.ok ? 1 : 0;
  }
  o.report["seed"] = base.seed;
  o.report["checks"] = list;
  o.ok = passed == checks.size();
  o.report["result"] = verdict(o.ok, std::to_string(passed) + "/" + std::to_string(checks.size()) + " checks");
  return o;
}

// ---------------------------------------------------------------------------
// Output

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render_text(const Json& j, std::ostream& os, const std::string& pad) {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      os << pad << key << ":\n";
      render_text(value, os, pad + "  ");
    } else if (value.is_array()) {
      os << pad << key << ":\n";
      for (const Json& item : value) {
        if (item.is_object()) {
          std::string line;
          for (const auto& [k, v] : item.items()) line += (line.empty() ? "" : ", ") + k + "=" + scalar_text(v);
          os << pad << "  - " << line << "\n";
        } else {
          os << pad << "  - " << scalar_text(item) << "\n";
        }
      }
    } else {
      os << pad << key << ": " << scalar_text(value) << "\n";
    }
  }
}

void emit(Json report, const Config& c) {
  if (c.format == "structured") {
    std::cout << report.dump(2) << "\n";
  } else {
    render_text(report, std::cout, "");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite Waldhausen contexts: validation, K_0, additivity, fibration and cofinality checks"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* s) {
    s->add_option("--zoo", cfg.zoo, "built-in context, e.g. vect:q=2,N=2 or A+B");
    s->add_option("--file", cfg.file, "category file");
    s->add_option("--budget", cfg.budget, "size budget (overrides the default)");
    s->add_option("--format", cfg.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    s->add_option("--seed", cfg.seed, "pushout search order (0 = natural order)");
    s->add_option("--limit-functors", cfg.limit_functors, "enumeration ceiling for filtered objects")
        ->check(CLI::PositiveNumber);
    s->add_flag("--timing", cfg.timing, "append wall-clock time");
  };
  auto trunc = [&](CLI::App* s) {
    s->add_option("--m", cfg.m, "filtration length")->check(CLI::NonNegativeNumber);
    s->add_option("--M", cfg.M, "iota S: largest m")->check(CLI::PositiveNumber);
    s->add_option("--K", cfg.K, "iota S: largest nerve degree")->check(CLI::PositiveNumber);
    s->add_option("--D", cfg.D, "diagonal truncation (3 adds H_2)")->check(CLI::PositiveNumber);
  };

  struct Command {
    CLI::App* app;
    std::function<Outcome(const Config&)> run;
  };
  std::vector<Command> commands;
  auto add = [&](const std::string& name, const std::string& help, std::function<Outcome(const Config&)> run) {
    CLI::App* s = app.add_subcommand(name, help);
    common(s);
    trunc(s);
    commands.push_back({s, std::move(run)});
    return s;
  };
  add("validate", "validate the pair, Waldhausen axioms and labeling", cmd_validate);
  add("k0", "K_0 by generators and relations", cmd_k0);
  add("k0-pi1", "compare K_0 with pi_1 of the diagonal of iota S", cmd_k0_pi1);
  add("additivity", "K_0(F_m) -> K_0(C) + K_0(S_m) is an isomorphism", cmd_additivity);
  add("fibration", "exactness of K_0(A^w) -> K_0(A) -> K_0(A, wA) -> 0", cmd_fibration)
      ->add_option("--labeling", cfg.labeling, "iso, all, factor or file");
  add("cofinality", "K_0(C) / K_0(C') for a weakly cofinal C'", cmd_cofinality)
      ->add_option("--sub", cfg.sub, "comma-separated object names of C'");
  add("stats", "sizes of F_m, S_m and iota S", cmd_stats);
  add("stabilization", "K_0 along a budget ladder", cmd_stabilization)
      ->add_option("--budget-ladder", cfg.ladder, "increasing budgets a,b,c");
  add("suite", "the fixed acceptance suite", cmd_suite)->add_option("--fixtures", cfg.fixtures, "fixture directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (cfg.D > 2 && !app.get_subcommand(0)->count("--M") && !app.get_subcommand(0)->count("--K")) {
    cfg.M = cfg.D;
    cfg.K = cfg.D;
  }

  for (const Command& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    const auto start = std::chrono::steady_clock::now();
    Json report;
    report["command"] = cmd.app->get_name();
    int code = 0;
    try {
      Outcome o = cmd.run(cfg);
      for (auto& [k, v] : o.report.items()) report[k] = v;
      code = o.ok ? 0 : 1;
    } catch (const Error& e) {
      report["error"] = std::string(to_string(e.kind()));
      report["detail"] = e.detail();
      report["result"] = "FAIL: " + std::string(to_string(e.kind()));
      code = exit_code(e.kind());
    }
    if (cfg.timing) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
      report["wall_clock_ms"] = ms.count();
    }
    emit(std::move(report), cfg);
    return code;
  }
  return 2;
}
