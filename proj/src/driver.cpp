#include "toposqt/driver.hpp"

#include "toposqt/kochen.hpp"
#include "toposqt/scenario.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace toposqt {

using nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Minimal aligned key/value and list rendering for --format table.
std::string as_table(const json& j, const std::string& indent = "") {
  std::ostringstream os;
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object() || v.is_array()) {
        os << indent << k << ":\n" << as_table(v, indent + "  ");
      } else {
        os << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_object() || v.is_array()) {
        os << indent << "-\n" << as_table(v, indent + "  ");
      } else {
        os << indent << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else {
    os << indent << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
  return os.str();
}

int default_stage(const Scenario& s) {
  const auto maxima = s.poset.maximal_contexts();
  if (maxima.size() != 1)
    fail("ValidationError",
         "the poset has several maximal contexts; pick a stage with --at");
  return maxima.front();
}

int stage_from_flag(const Scenario& s, const std::string& at) {
  return at.empty() ? default_stage(s) : s.poset.require_label(at);
}

json projector_family_json(const ContextPoset& poset, const std::vector<Projector>& per) {
  json out = json::object();
  for (int v = 0; v < poset.size(); ++v)
    out[poset.at(v).label] = matrix_to_json(per[static_cast<size_t>(v)].mat());
  return out;
}

std::pair<int, Rational> parse_root(const Scenario& s, const std::string& spec) {
  const auto comma = spec.rfind(',');
  if (comma == std::string::npos)
    fail("ValidationError", "--root expects \"<context>,<p/q>\", got '" + spec + "'");
  const int v = s.poset.require_label(spec.substr(0, comma));
  const Rational r = parse_rational(spec.substr(comma + 1));
  return {v, r};
}

json sections_json(const ContextPoset& poset) {
  const auto sections = global_sections_sigma(poset);
  json list = json::array();
  for (const auto& sec : sections) {
    json one = json::object();
    for (int v = 0; v < poset.size(); ++v) one[poset.at(v).label] = sec[static_cast<size_t>(v)];
    list.push_back(std::move(one));
  }
  return json{{"count", sections.size()}, {"sections", std::move(list)}};
}

json ks_json(const kochen::BasisSystem& sys) {
  const kochen::KsResult res = kochen::ks_colorable(sys);
  json rays = json::array();
  for (const auto& r : sys.rays) rays.push_back(r);
  json bases = json::array();
  for (const auto& b : sys.bases) bases.push_back(b);
  json out{{"dim", sys.dim},
           {"rays", std::move(rays)},
           {"bases", std::move(bases)},
           {"colorable", res.coloring.has_value()}};
  if (res.coloring) {
    out["coloring"] = res.coloring->assignment;
  }
  if (res.certificate) {
    out["certificate"] = json{{"kind", "parity"},
                              {"basis_count", res.certificate->basis_count},
                              {"multiplicities", res.certificate->multiplicities}};
  }
  return out;
}

struct Options {
  std::string scenario_path;
  std::string format = "json";
  std::string at;
  std::string r;
  std::string root;
  bool inner = false;
};

int run(const std::vector<std::string>& args, std::string& out_text, std::string& err_text) {
  CLI::App app{"topos quantum theory engine"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--scenario,-s", opt.scenario_path, "scenario JSON file");
  app.add_option("--format,-f", opt.format, "output format")
      ->check(CLI::IsMember({"json", "table", "dot"}))
      ->capture_default_str();

  std::vector<std::string> positional;

  auto* cmd_contexts = app.add_subcommand("contexts", "list the context poset");
  auto* cmd_dasein = app.add_subcommand("daseinise", "approximate an operator in every context");
  cmd_dasein->add_option("name", positional, "proposition/projector or operator name")->expected(1);
  cmd_dasein->add_flag("--inner", opt.inner, "inner approximation instead of outer");
  cmd_dasein->add_option("--at", opt.at, "restrict the report to one context");
  auto* cmd_truth = app.add_subcommand("truth-value", "sieve-valued truth of a proposition");
  cmd_truth->add_option("args", positional, "<proposition> <state>")->expected(2);
  cmd_truth->add_option("--at", opt.at, "stage context (default: the maximal one)");
  cmd_truth->add_option("--r", opt.r, "threshold for density states, p/q in (0,1]");
  auto* cmd_pseudo = app.add_subcommand("pseudo-state", "daseinised rank-one projector of a state");
  cmd_pseudo->add_option("state", positional, "state vector name")->expected(1);
  auto* cmd_measure = app.add_subcommand("measure", "weight of a clopen subobject");
  cmd_measure->add_option("args", positional, "<density> <proposition|Sigma|empty>")->expected(2);
  auto* cmd_prob = app.add_subcommand("prob-truth", "truth value over <context,threshold> pairs");
  cmd_prob->add_option("args", positional, "<proposition> <density>")->expected(2);
  cmd_prob->add_option("--root", opt.root, "root pair \"<context>,<p/q>\"")->required();
  auto* cmd_ks = app.add_subcommand("ks-check", "colorability of an orthogonal-basis system");
  cmd_ks->add_option("system", positional, "'kernaghan' or a basis file")->expected(1);
  auto* cmd_sections = app.add_subcommand("global-sections", "compatible point families of the state presheaf");
  auto* cmd_cov = app.add_subcommand("covariance", "transport of truth values along a unitary");
  cmd_cov->add_option("args", positional, "<proposition> <state> <unitary>")->expected(3);
  cmd_cov->add_option("--at", opt.at, "stage context (default: the maximal one)");
  auto* cmd_interval = app.add_subcommand("value-interval", "quantity value interval at a point");
  cmd_interval->add_option("args", positional, "<operator> <context:atom>")->expected(2);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream os;
    os << app.help();
    out_text = os.str();
    return 0;
  } catch (const CLI::ParseError& e) {
    err_text = std::string(e.what()) + "\n";
    return 2;
  }

  auto need_scenario = [&]() -> Scenario {
    if (opt.scenario_path.empty())
      fail("ValidationError", "this subcommand needs --scenario <file>");
    return load_scenario(opt.scenario_path);
  };

  json result;
  std::string dot_text;

  if (cmd_contexts->parsed()) {
    const Scenario s = need_scenario();
    json list = json::array();
    for (int v = 0; v < s.poset.size(); ++v) {
      const Context& c = s.poset.at(v);
      json atoms = json::array();
      for (const auto& n : c.atom_names) atoms.push_back(n);
      list.push_back(json{{"label", c.label},
                          {"atoms", std::move(atoms)},
                          {"atom_count", c.atom_count()},
                          {"maximal", s.poset.is_maximal(v)}});
    }
    json covers = json::array();
    for (int a = 0; a < s.poset.size(); ++a)
      for (int b = 0; b < s.poset.size(); ++b) {
        if (a == b || !s.poset.leq(a, b)) continue;
        bool covering = true;
        for (int c = 0; c < s.poset.size() && covering; ++c)
          if (c != a && c != b && s.poset.leq(a, c) && s.poset.leq(c, b)) covering = false;
        if (covering) covers.push_back(json::array({s.poset.at(a).label, s.poset.at(b).label}));
      }
    result = json{{"dim", s.dim}, {"count", s.poset.size()}, {"contexts", std::move(list)},
                  {"covers", std::move(covers)}};
    dot_text = s.poset.dot();
  } else if (cmd_dasein->parsed()) {
    const Scenario s = need_scenario();
    const std::string& name = positional.at(0);
    const bool is_projector = s.propositions.count(name) || s.projectors.count(name);
    if (is_projector && !opt.inner) {
      const DaseinisedProposition d = dasein_proj_global(s.poset, s.proposition(name));
      result = json{{"source", name},
                    {"per_context", projector_family_json(s.poset, d.per_context)},
                    {"subobject", subobject_to_json(d.subobject)}};
    } else if (is_projector) {
      json per = json::object();
      for (int v = 0; v < s.poset.size(); ++v)
        per[s.poset.at(v).label] =
            matrix_to_json(dasein_inner_proj(s.proposition(name), s.poset.at(v)).mat());
      result = json{{"source", name}, {"per_context", std::move(per)}};
    } else {
      const Hermitian& h = s.hermitian(name);
      json per = json::object();
      for (int v = 0; v < s.poset.size(); ++v) {
        const Hermitian d = opt.inner ? dasein_inner_sa(h, s.poset.at(v))
                                      : dasein_outer_sa(h, s.poset.at(v));
        per[s.poset.at(v).label] = matrix_to_json(d.mat());
      }
      result = json{{"source", name}, {"per_context", std::move(per)}};
    }
    if (!opt.at.empty()) {
      const std::string label = s.poset.at(s.poset.require_label(opt.at)).label;
      result["per_context"] = json{{label, result["per_context"].at(label)}};
      if (result.contains("subobject"))
        result["subobject"] = json{{label, result["subobject"].at(label)}};
    }
  } else if (cmd_truth->parsed()) {
    const Scenario s = need_scenario();
    const std::string& prop_name = positional.at(0);
    const std::string& state_name = positional.at(1);
    const int stage = stage_from_flag(s, opt.at);
    const DaseinisedProposition prop = dasein_proj_global(s.poset, s.proposition(prop_name));
    Sieve sieve = [&] {
      if (s.vectors.count(state_name)) {
        if (!opt.r.empty())
          fail("ValidationError", "--r applies to density states only");
        const PseudoState w = pseudo_state(s.poset, s.vector(state_name));
        return truth_value_pseudostate(s.poset, prop, w, stage);
      }
      const Rational r = opt.r.empty() ? Rational(1) : parse_rational(opt.r);
      const TruthObject t = TruthObject::mixed(s.poset, s.density(state_name), r);
      return truth_value_truthobject(s.poset, prop, t, stage);
    }();
    result = sieve_to_json(sieve);
    result["proposition"] = prop_name;
    result["state"] = state_name;
    dot_text = s.poset.dot(sieve.members());
  } else if (cmd_pseudo->parsed()) {
    const Scenario s = need_scenario();
    const PseudoState w = pseudo_state(s.poset, s.vector(positional.at(0)));
    result = json{{"state", positional.at(0)},
                  {"per_context", projector_family_json(s.poset, w.per_context)},
                  {"subobject", subobject_to_json(w.subobject)}};
  } else if (cmd_measure->parsed()) {
    const Scenario s = need_scenario();
    const Density& rho = s.density(positional.at(0));
    const std::string& sub_name = positional.at(1);
    const ClopenSubobject sub = [&] {
      if (sub_name == "Sigma") return ClopenSubobject::full(s.poset);
      if (sub_name == "empty") return ClopenSubobject::empty(s.poset);
      return dasein_proj_global(s.poset, s.proposition(sub_name)).subobject;
    }();
    result = json{{"density", positional.at(0)},
                  {"subobject", sub_name},
                  {"weight", weight_to_json(measure(s.poset, rho, sub))}};
  } else if (cmd_prob->parsed()) {
    const Scenario s = need_scenario();
    const DaseinisedProposition prop = dasein_proj_global(s.poset, s.proposition(positional.at(0)));
    const Density& rho = s.density(positional.at(1));
    const auto [root_ctx, root_r] = parse_root(s, opt.root);
    const ProductSieve ps = truth_value_probabilistic(s.poset, prop, rho, root_ctx, root_r);
    result = product_sieve_to_json(ps);
    result["proposition"] = positional.at(0);
    result["density"] = positional.at(1);
  } else if (cmd_ks->parsed()) {
    const std::string& spec = positional.at(0);
    if (spec == "kernaghan") {
      result = ks_json(kochen::kernaghan_system());
    } else {
      std::ifstream in(spec);
      if (!in) fail("ParseError", "cannot open basis file '" + spec + "'");
      result = ks_json(kochen::parse_basis_file(in));
    }
  } else if (cmd_sections->parsed()) {
    const Scenario s = need_scenario();
    result = sections_json(s.poset);
  } else if (cmd_cov->parsed()) {
    const Scenario s = need_scenario();
    const int stage = stage_from_flag(s, opt.at);
    const CovarianceResult c = covariance_check(s.poset, s.proposition(positional.at(0)),
                                                s.vector(positional.at(1)),
                                                s.unitary(positional.at(2)), stage);
    result = json{{"transported", sieve_to_json(c.transported)},
                  {"transformed", sieve_to_json(c.transformed)},
                  {"equal", c.equal}};
  } else if (cmd_interval->parsed()) {
    const Scenario s = need_scenario();
    const Hermitian& h = s.hermitian(positional.at(0));
    const std::string& point = positional.at(1);
    const auto colon = point.rfind(':');
    if (colon == std::string::npos)
      fail("ValidationError", "point must be \"<context>:<atom-index>\", got '" + point + "'");
    const int ctx = s.poset.require_label(point.substr(0, colon));
    int atom = -1;
    try {
      size_t used = 0;
      atom = std::stoi(point.substr(colon + 1), &used);
      if (used != point.size() - colon - 1) atom = -1;
    } catch (const std::exception&) {
      atom = -1;
    }
    if (atom < 0 || atom >= s.poset.at(ctx).atom_count())
      fail("ValidationError", "atom index out of range for '" + point + "'");
    const ValueInterval vi = breve_delta(s.poset, h, {ctx, atom});
    json at = json::object();
    for (const auto& [v, pair] : vi.at)
      at[s.poset.at(v).label] = json::array({to_string(pair.first), to_string(pair.second)});
    result = json{{"operator", positional.at(0)},
                  {"root", s.poset.at(vi.root).label},
                  {"intervals", std::move(at)}};
  }

  if (opt.format == "dot") {
    if (dot_text.empty())
      fail("ValidationError", "this subcommand has no dot rendering");
    out_text = dot_text;
  } else if (opt.format == "table") {
    out_text = as_table(result);
  } else {
    out_text = dump(result);
  }
  return 0;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args) {
  CommandResult res;
  try {
    res.exit_code = run(args, res.out, res.err);
  } catch (const Error& e) {
    res.exit_code = 1;
    res.err = dump(json{{"error", {{"kind", e.kind()}, {"message", e.what()}}}});
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.err = dump(json{{"error", {{"kind", "Internal"}, {"message", e.what()}}}});
  }
  return res;
}

}  // namespace toposqt
