#include "parfell/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>

#include "parfell/bernoulli.hpp"
#include "parfell/crossed_product.hpp"
#include "parfell/error.hpp"
#include "parfell/io.hpp"
#include "parfell/random.hpp"
#include "parfell/representation.hpp"

namespace parfell::cli {

namespace {

using io::Json;

struct Config {
  Tolerances tol;
  std::size_t radius = kDefaultRadius;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::string json_out;

  std::string input;
  std::string family;
  std::string hom;
  std::vector<std::string> tables;
  std::string group = "free:1";
  double eta = 0.0;
  std::optional<double> noise;
  std::optional<std::size_t> expect_dim;
  double delta = 0.0;
  std::size_t pairs = 200;
  std::size_t trials = 500;
};

struct Loaded {
  FinitePartialAction action;
  std::string sha;
};

Loaded load_action(const std::string& path) {
  std::string raw;
  const Json j = io::read_json_file(path, &raw);
  return {io::parse_action(j), io::sha256_hex(raw)};
}

Json envelope(const std::string& command, const Config& c, const std::string& sha) {
  return Json{{"command", command}, {"input_sha256", sha}, {"seed", c.seed}, {"tolerances", io::tolerances_to_json(c.tol)}};
}

std::vector<GroupElement> family_check_elements(const PartialRepFamily& v, const FinitePartialAction& a, std::size_t radius) {
  std::vector<GroupElement> out;
  for (const auto& t : a.check_elements(radius))
    if (v.has(t)) out.push_back(t);
  return out;
}

int cmd_validate(const Config& c, Json& report) {
  const auto in = load_action(c.input);
  report = envelope("validate-action", c, in.sha);
  const auto r = validate(in.action, c.radius, c.jobs);
  report["result"] = io::validation_to_json(r);
  return r.valid() ? kOk : kDefect;
}

int cmd_covariant_rep(const Config& c, Json& report) {
  const auto in = load_action(c.input);
  report = envelope("covariant-rep", c, in.sha);
  const auto rep = std_covariant_rep(in.action, c.radius);
  const auto elems = in.action.check_elements(c.radius);
  DefectReport d = partial_rep_defects(rep.v, elems, c.jobs);
  d.merge(covariance_defects(rep, elems));

  Json mats = Json::array();
  const GroupSpec& G = in.action.group();
  for (const auto& [t, data] : in.action.declared()) {
    const auto& vt = rep.v.at(t);
    mats.push_back(Json{{"t", G.format(t)},
                        {"v", io::matrix_to_json(vt)},
                        {"range_projection", io::matrix_to_json(vt * vt.adjoint())}});
  }
  report["result"] = Json{{"dim", rep.dim()}, {"matrices", mats}, {"defects", io::defects_to_json(d)}};
  return d.max() <= c.tol.axiom ? kOk : kDefect;
}

int cmd_defects(const Config& c, Json& report) {
  const auto in = load_action(c.input);
  const auto rep = std_covariant_rep(in.action, c.radius);
  std::string sha = in.sha;
  PartialRepFamily v = rep.v;
  if (!c.family.empty()) {
    std::string raw;
    v = io::parse_family(io::read_json_file(c.family, &raw), in.action.group());
    if (v.dim != rep.dim()) throw MalformedInput("family dimension must equal |Z|");
    sha = io::sha256_hex(in.sha + io::sha256_hex(raw));
  }
  report = envelope("defects", c, sha);
  const auto elems = family_check_elements(v, in.action, c.radius);
  DefectReport d = partial_rep_defects(v, elems, c.jobs);
  d.merge(covariance_defects(CovariantRep{rep.phi, v, rep.dual}, elems));
  report["result"] = io::defects_to_json(d);
  return d.max() <= c.tol.axiom ? kOk : kDefect;
}

int cmd_perturb(const Config& c, Json& report) {
  if (!(c.eta > 0.0 && c.eta < 0.125)) throw PreconditionError("--eta must satisfy 0 < eta < 1/8");
  const auto in = load_action(c.input);
  const GroupSpec& G = in.action.group();
  const auto rep = G.is_finite() ? std_covariant_rep(in.action) : std_covariant_rep(in.action, ball(G, 2));
  std::string sha = in.sha;
  PartialRepFamily v = rep.v;
  if (!c.family.empty()) {
    std::string raw;
    v = io::parse_family(io::read_json_file(c.family, &raw), G);
    if (v.dim != rep.dim()) throw MalformedInput("family dimension must equal |Z|");
    sha = io::sha256_hex(in.sha + io::sha256_hex(raw));
  } else {
    Rng rng(c.seed);
    v = add_noise(rep.v, c.noise.value_or(c.eta / 8), rng);
  }
  report = envelope("perturb", c, sha);
  const auto res = perturb_to_partial_isometries(v, c.eta, &rep);
  report["result"] = Json{{"certificate", io::perturbation_to_json(res.certificate, G)},
                          {"input_defects", io::defects_to_json(partial_rep_defects(v, v.elements(), c.jobs))}};
  return res.certificate.holds() ? kOk : kDefect;
}

int cmd_crossed_product(const Config& c, Json& report) {
  const auto in = load_action(c.input);
  report = envelope("crossed-product", c, in.sha);
  const CrossedProductModel model(in.action);
  const std::size_t dim = algebra_dimension(model);
  const std::size_t center = center_dimension(model);
  Rng rng(c.seed);
  const ModelDefects md = check_model(model, c.pairs, rng);
  const BundleAxiomReport axioms = bundle_axiom_report(model.dual(), c.trials, rng, c.tol.axiom);

  Json res{{"points", model.points()},
           {"group_order", model.order()},
           {"model_size", model.dim()},
           {"dimension", dim},
           {"expected_dimension", model.expected_dimension()},
           {"center_dimension", center},
           {"model_defects",
            Json{{"pairs", md.pairs},
                 {"multiplicative", md.multiplicative},
                 {"involutive", md.involutive},
                 {"c_star_identity", md.c_star},
                 {"expectation_contractivity", md.contractivity},
                 {"expectation_min", md.expectation_min},
                 {"expectation_imag", md.expectation_imag},
                 {"expectation_faithfulness_failures", md.faithfulness_failures}}},
           {"bundle_axioms", io::bundle_report_to_json(axioms)}};
  bool ok = dim == model.expected_dimension() && md.multiplicative <= 1e-10 && md.involutive <= 1e-10 &&
            md.c_star <= c.tol.norm && md.contractivity <= c.tol.norm && md.expectation_min >= -c.tol.exact &&
            md.faithfulness_failures == 0 && axioms.ok();
  if (c.expect_dim) {
    res["expect_dim"] = *c.expect_dim;
    ok = ok && dim == *c.expect_dim;
  }
  report["result"] = std::move(res);
  return ok ? kOk : kDefect;
}

int cmd_bundle_axioms(const Config& c, Json& report) {
  const auto in = load_action(c.input);
  report = envelope("bundle-axioms", c, in.sha);
  const DualSystem dual = dualize(in.action, c.radius);
  Rng rng(c.seed);
  const auto r = bundle_axiom_report(dual, c.trials, rng, c.tol.axiom);
  report["result"] = io::bundle_report_to_json(r);
  return r.ok() ? kOk : kDefect;
}

struct BernoulliSetup {
  GroupSpec group;
  std::optional<GroupHom> hom;
  std::vector<GroupSpec> extra;
  std::string sha;
};

BernoulliSetup bernoulli_setup(const Config& c) {
  BernoulliSetup s{parse_group_template(c.group), std::nullopt, {}, {}};
  if (!s.group.is_free()) throw MalformedInput("--group must be a free group, e.g. free:2");
  std::string material = c.group + "|" + std::to_string(c.delta);
  if (!c.hom.empty()) {
    std::string raw;
    s.hom = io::parse_hom(io::read_json_file(c.hom, &raw), s.group);
    material += "|" + raw;
  }
  for (const auto& path : c.tables) {
    std::string raw;
    s.extra.push_back(io::parse_group(io::read_json_file(path, &raw)));
    material += "|" + raw;
  }
  s.sha = io::sha256_hex(material);
  return s;
}

int cmd_bernoulli_certify(const Config& c, Json& report) {
  const auto s = bernoulli_setup(c);
  report = envelope("bernoulli certify", c, s.sha);
  const auto cert = certify_rfd(s.group, c.delta, s.hom, s.extra, c.jobs);
  report["result"] = io::certificate_to_json(cert);
  return cert.valid ? kOk : kDefect;
}

int cmd_measure(const Config& c, Json& report) {
  const auto s = bernoulli_setup(c);
  report = envelope("measure", c, s.sha);
  const auto cert = certify_rfd(s.group, c.delta, s.hom, s.extra, c.jobs);
  Json res{{"certificate", io::certificate_to_json(cert)}};
  if (!cert.hom) {
    report["result"] = std::move(res);
    return kDefect;
  }
  const BernoulliWindow window(s.group, cert.depth);
  const QuotientApprox q(window, *cert.hom);
  std::vector<CylinderFunction> tests{CylinderFunction::constant(1.0)};
  for (std::size_t k = 1; k < window.coords().size(); ++k)
    tests.push_back(CylinderFunction::indicator(window.coords()[k], "x(" + s.group.format(window.coords()[k]) + ")=1"));
  const auto m = invariant_measure_approx(q, tests, window.coords());

  Json values = Json::array();
  bool zero_defects = true;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    Json defects = Json::object();
    for (const auto& [t, d] : m.defects[i]) {
      defects[s.group.format(t)] = d;
      zero_defects = zero_defects && d == 0.0;
    }
    values.push_back(Json{{"function", tests[i].name}, {"mu", m.values[i]}, {"invariance_defects", defects}});
  }
  res["quotient_points"] = q.size();
  res["normalization"] = m.normalization;
  res["positive"] = m.positive;
  res["values"] = values;
  report["result"] = std::move(res);
  return cert.valid && m.normalization == 1.0 && m.positive && zero_defects ? kOk : kDefect;
}

}  // namespace

Result run(const std::vector<std::string>& args) {
  Result out;
  Config c;
  CLI::App app{"Finite partial dynamical systems, covariant representations and crossed products", "parfell"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tol", c.tol.axiom, "Axiom tolerance for pass/fail decisions")->check(CLI::PositiveNumber);
  app.add_option("--radius", c.radius, "Ball radius for free-group checks");
  app.add_option("--seed", c.seed, "Seed for randomized checks (PARFELL_SEED overrides)");
  app.add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--json-out", c.json_out, "Also write the report to this path");

  auto* validate_cmd = app.add_subcommand("validate-action", "Check the partial action axioms");
  validate_cmd->add_option("action", c.input)->required();

  auto* rep_cmd = app.add_subcommand("covariant-rep", "Standard covariant representation and its defects");
  rep_cmd->add_option("action", c.input)->required();

  auto* defects_cmd = app.add_subcommand("defects", "Partial-representation and covariance defects");
  defects_cmd->add_option("action", c.input)->required();
  defects_cmd->add_option("--family", c.family, "Matrix family JSON (default: the standard representation)");

  auto* perturb_cmd = app.add_subcommand("perturb", "Correct an approximate family to partial isometries");
  perturb_cmd->add_option("action", c.input)->required();
  perturb_cmd->add_option("--eta", c.eta, "Defect bound eta, 0 < eta < 1/8")->required();
  perturb_cmd->add_option("--noise", c.noise, "Noise scale for the generated family (default eta/8)");
  perturb_cmd->add_option("--family", c.family, "Approximate family JSON");

  auto* cp_cmd = app.add_subcommand("crossed-product", "Matrix model of the crossed product");
  cp_cmd->add_option("action", c.input)->required();
  cp_cmd->add_option("--expect-dim", c.expect_dim, "Fail unless the algebra has this dimension");
  cp_cmd->add_option("--pairs", c.pairs, "Random section pairs");
  cp_cmd->add_option("--trials", c.trials, "Random fiber pairs for the bundle axioms");

  auto* bundle_cmd = app.add_subcommand("bundle-axioms", "Fell bundle axioms on random fiber pairs");
  bundle_cmd->add_option("action", c.input)->required();
  bundle_cmd->add_option("--trials", c.trials, "Random fiber pairs");

  auto* bern_cmd = app.add_subcommand("bernoulli", "Partial Bernoulli shift");
  bern_cmd->require_subcommand(1);
  auto* certify_cmd = bern_cmd->add_subcommand("certify", "RFD certificate for a window of the given delta");
  for (auto* sub : {certify_cmd, app.add_subcommand("measure", "Invariant measure approximants")}) {
    sub->add_option("--group", c.group, "Free group template, e.g. free:2")->required();
    sub->add_option("--delta", c.delta, "Density target delta > 0")->required();
    sub->add_option("--hom", c.hom, "Hom JSON {\"target\":..., \"images\":[...]}");
    sub->add_option("--table", c.tables, "Extra quotient group JSON, searched after the built-in families");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out.report = app.help();
    return out;
  } catch (const CLI::ParseError& e) {
    out.exit_code = kBadInput;
    out.error = e.what();
    return out;
  }
  if (const char* env = std::getenv("PARFELL_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      out.exit_code = kBadInput;
      out.error = "PARFELL_SEED is not an unsigned integer";
      return out;
    }
  }

  Json report;
  try {
    if (validate_cmd->parsed())
      out.exit_code = cmd_validate(c, report);
    else if (rep_cmd->parsed())
      out.exit_code = cmd_covariant_rep(c, report);
    else if (defects_cmd->parsed())
      out.exit_code = cmd_defects(c, report);
    else if (perturb_cmd->parsed())
      out.exit_code = cmd_perturb(c, report);
    else if (cp_cmd->parsed())
      out.exit_code = cmd_crossed_product(c, report);
    else if (bundle_cmd->parsed())
      out.exit_code = cmd_bundle_axioms(c, report);
    else if (certify_cmd->parsed())
      out.exit_code = cmd_bernoulli_certify(c, report);
    else
      out.exit_code = cmd_measure(c, report);
  } catch (const MalformedInput& e) {
    out.exit_code = kBadInput;
    out.error = std::string("malformed input: ") + e.what();
  } catch (const PreconditionError& e) {
    out.exit_code = kBadInput;
    out.error = std::string("precondition failed: ") + e.what();
  } catch (const UndeclaredElement& e) {
    out.exit_code = kBadInput;
    out.error = std::string("undeclared element: ") + e.what();
  } catch (const NumericalError& e) {
    out.exit_code = kDefect;
    out.error = std::string("numerical failure: ") + e.what();
  } catch (const std::exception& e) {
    out.exit_code = kBadInput;
    out.error = e.what();
  }
  if (!out.error.empty()) return out;

  report["status"] = out.exit_code == kOk ? "ok" : "defect";
  out.report = io::dump(report);
  if (!c.json_out.empty()) {
    std::ofstream f(c.json_out, std::ios::binary);
    if (!f) {
      out.exit_code = kBadInput;
      out.error = "cannot write '" + c.json_out + "'";
      return out;
    }
    f << out.report;
  }
  return out;
}

}  // namespace parfell::cli
