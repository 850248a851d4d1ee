// Command line surface: parses .frm germ files, runs the requested
// computation, and prints either a short text summary or the JSON report
// envelope. Exit code 0 means a definite verdict, 2 inconclusive, 1 error.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "martinet/dsl.hpp"
#include "martinet/exterior.hpp"
#include "martinet/report.hpp"

using namespace martinet;
using nlohmann::ordered_json;

namespace {

constexpr int kExitDefinite = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

ParsedForm read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return parse_form_source(buf.str());
  }
  return load_form_file(path);
}

ordered_json input_echo(const ParsedForm& in) {
  ordered_json echo = ordered_json::object();
  echo["chart"] = in.chart.vars();
  if (in.chart.weights()) echo["weights"] = *in.chart.weights();
  echo["form"] = print_form(in.form);
  return echo;
}

// MARTINET_SEED wins over --seed so scripted sweeps can pin runs externally.
unsigned long long resolve_seed(unsigned long long cli_seed) {
  const char* env = std::getenv("MARTINET_SEED");
  if (!env || !*env) return cli_seed;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw Error("MARTINET_SEED must be an unsigned integer");
  }
}

struct Emit {
  bool json = false;
  bool timings = false;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void operator()(const std::string& kind, ordered_json flags, ordered_json payload,
                  const std::function<void()>& text) const {
    if (!json) {
      text();
      return;
    }
    ordered_json env = report_envelope(kind, std::move(flags), std::move(payload));
    if (timings) {
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
      env["timings"] = ordered_json::object();
      env["timings"]["total_ms"] = ms;
    }
    std::cout << env.dump(2) << "\n";
  }
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void print_invariants_text(const InvariantReport& r) {
  const Chart& chart = r.martinet.omega_flat.chart();
  std::cout << "chart:";
  for (const auto& v : chart.vars()) std::cout << " " << v;
  std::cout << "\n";
  std::cout << "f: " << print_poly(r.martinet.f) << "\n";
  std::cout << "singular: " << yes_no(r.martinet.singular()) << "\n";
  std::cout << "structurally smooth: " << yes_no(r.martinet.structurally_smooth) << "\n";
  if (r.martinet.pivot >= 0)
    std::cout << "pivot: " << chart.vars()[static_cast<size_t>(r.martinet.pivot)] << "\n";
  if (r.rank_sigma_0) std::cout << "rank sigma|0: " << *r.rank_sigma_0 << "\n";
  if (r.orientation)
    std::cout << "orientation: " << (*r.orientation > 0 ? "+1" : "-1") << "\n";
  else if (!r.orientation_reason.empty())
    std::cout << "orientation: n/a (" << r.orientation_reason << ")\n";
  if (r.dim_span)
    std::cout << "dim span j1: " << *r.dim_span << "\n";
  else if (!r.dim_span_reason.empty())
    std::cout << "dim span j1: n/a (" << r.dim_span_reason << ")\n";
  if (r.ideal)
    std::cout << "coefficient ideal: " << to_string(r.ideal->verdict) << "\n";
  if (r.kernel_field)
    std::cout << "kernel field: " << to_string(*r.kernel_field) << "\n";
  if (r.sigma22)
    std::cout << "sigma22 label: " << to_string(r.sigma22->label)
              << " (discriminant " << to_string(r.sigma22->discriminant) << ")\n";
  std::cout << "classification: " << r.classification << "\n";
}

struct BridgeChoice {
  std::string name;
  MoserField field;
};

BridgeChoice build_bridge(const DiffForm& w0, const DiffForm& w1,
                          const std::string& which) {
  auto collar = [&] {
    int pivot = 0;
    const MartinetData md = martinet_data(w0);
    if (md.structurally_smooth) pivot = md.pivot;
    return moser_collar_field(w0, w1, pivot);
  };
  if (which == "collar") return {"collar", collar()};
  if (which == "frame") return {"frame", moser_frame_field(w0, w1)};
  if (which == "volume") return {"volume", moser_volume_field(w0, w1)};

  std::vector<std::string> notes;
  try {
    return {"collar", collar()};
  } catch (const Error& e) {
    notes.push_back(std::string("collar: ") + e.what());
  }
  try {
    return {"volume", moser_volume_field(w0, w1)};
  } catch (const Error& e) {
    notes.push_back(std::string("volume: ") + e.what());
  }
  try {
    return {"frame", moser_frame_field(w0, w1)};
  } catch (const Error& e) {
    notes.push_back(std::string("frame: ") + e.what());
  }
  std::string msg = "no flow bridge applies to this pair";
  for (const auto& n : notes) msg += "\n  " + n;
  throw Error(msg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact invariants and equivalence checks for singular symplectic form germs"};
  app.require_subcommand(1);

  Emit emit;
  int jet = 8;
  unsigned long long seed = 0;

  std::string in_a, in_b;
  std::string category = "R";
  int degree_bound = 3;
  int trials = 50;
  FlowOptions flow;
  std::string bridge = "auto";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_flag("--json", emit.json, "emit the JSON report envelope");
    cmd->add_flag("--timings", emit.timings, "attach wall-clock timings to JSON output");
    cmd->add_option("--jet", jet, "working jet order")->capture_default_str();
  };

  CLI::App* c_inv = app.add_subcommand("invariants", "full invariant report for a germ");
  c_inv->add_option("file", in_a, "input .frm file or - for stdin")->required();
  add_common(c_inv);
  c_inv->add_option("--seed", seed, "seed for randomized searches")->capture_default_str();

  CLI::App* c_equiv = app.add_subcommand("equiv", "decide local equivalence of two germs");
  c_equiv->add_option("first", in_a, "first .frm file")->required();
  c_equiv->add_option("second", in_b, "second .frm file")->required();
  c_equiv->add_option("--category", category, "C (complex analytic) or R (real)")
      ->check(CLI::IsMember({"C", "R"}))
      ->capture_default_str();
  add_common(c_equiv);
  c_equiv->add_option("--seed", seed, "seed for randomized searches")->capture_default_str();

  CLI::App* c_dec = app.add_subcommand("decompose", "split a germ along its degeneracy locus");
  c_dec->add_option("file", in_a, "input .frm file or - for stdin")->required();
  add_common(c_dec);

  CLI::App* c_real = app.add_subcommand("realize", "restriction realizability of a 2-form");
  c_real->add_option("file", in_a, "input .frm file or - for stdin")->required();
  c_real->add_option("--degree", degree_bound, "annihilator search degree bound")
      ->capture_default_str();
  add_common(c_real);
  c_real->add_option("--seed", seed, "seed for randomized searches")->capture_default_str();

  CLI::App* c_vol = app.add_subcommand("from-volume", "closed 2-form with a given volume density");
  c_vol->add_option("file", in_a, "input .frm file with a scalar expression")->required();
  add_common(c_vol);

  CLI::App* c_moser = app.add_subcommand("moser-verify", "numerical flow check for a pair");
  c_moser->add_option("first", in_a, "first .frm file")->required();
  c_moser->add_option("second", in_b, "second .frm file")->required();
  c_moser->add_option("--grid", flow.grid, "sample points per axis")->capture_default_str();
  c_moser->add_option("--steps", flow.steps, "time steps to t=1")->capture_default_str();
  c_moser->add_option("--tol", flow.tol, "pullback residual tolerance")->capture_default_str();
  c_moser->add_option("--box", flow.box, "half width of the sample box")->capture_default_str();
  c_moser->add_option("--seed", flow.seed, "grid jitter seed, 0 keeps the lattice")
      ->capture_default_str();
  c_moser->add_option("--bridge", bridge, "collar, frame, volume, or auto")
      ->check(CLI::IsMember({"auto", "collar", "frame", "volume"}))
      ->capture_default_str();
  add_common(c_moser);

  CLI::App* c_cls = app.add_subcommand("classify", "rank-zero restriction label");
  c_cls->add_option("file", in_a, "input .frm file or - for stdin")->required();
  add_common(c_cls);

  CLI::App* c_har = app.add_subcommand("harness", "randomized pullback invariance suite");
  c_har->add_option("file", in_a, "input .frm file or - for stdin")->required();
  c_har->add_option("--trials", trials, "number of random chart changes")
      ->capture_default_str();
  c_har->add_option("--seed", seed, "master seed for the trial stream")->capture_default_str();
  add_common(c_har);

  CLI11_PARSE(app, argc, argv);

  try {
    seed = resolve_seed(seed);
    flow.seed = resolve_seed(flow.seed);

    if (*c_inv) {
      const ParsedForm in = read_input(in_a);
      const InvariantReport rep = full_report(in.form, jet, 8, seed);
      ordered_json flags = input_echo(in);
      flags["jet"] = jet;
      flags["seed"] = seed;
      emit("invariants", std::move(flags), to_json(rep), [&] { print_invariants_text(rep); });
      return kExitDefinite;
    }

    if (*c_equiv) {
      const ParsedForm a = read_input(in_a);
      const ParsedForm b = read_input(in_b);
      const Category cat =
          category == "C" ? Category::c_analytic : Category::r_analytic_or_smooth;
      const EquivalenceVerdict v = decide_equivalence(a.form, b.form, cat, jet, seed);
      ordered_json flags = ordered_json::object();
      flags["first"] = input_echo(a);
      flags["second"] = input_echo(b);
      flags["category"] = category;
      flags["jet"] = jet;
      flags["seed"] = seed;
      emit("equivalence", std::move(flags), to_json(v), [&] {
        std::cout << "verdict: " << to_string(v.outcome) << "\n";
        std::cout << "rule: " << v.rule << "\n";
        for (const auto& line : v.evidence) std::cout << "  " << line << "\n";
      });
      return v.outcome == Outcome::inconclusive ? kExitInconclusive : kExitDefinite;
    }

    if (*c_dec) {
      const ParsedForm in = read_input(in_a);
      const Decomposition d = decompose(in.form, jet);
      ordered_json flags = input_echo(in);
      flags["jet"] = jet;
      emit("decomposition", std::move(flags), to_json(d), [&] {
        std::cout << "pivot: "
                  << in.chart.vars()[static_cast<size_t>(d.pivot)] << "\n";
        std::cout << "alpha: " << print_form(d.alpha) << "\n";
        std::cout << "sigma: " << print_form(d.sigma) << "\n";
        std::cout << "theta: " << print_form(d.theta) << "\n";
        std::cout << "residual order: " << d.residual_order << "\n";
      });
      return kExitDefinite;
    }

    if (*c_real) {
      const ParsedForm in = read_input(in_a);
      const Realizability r = realizability(in.form, degree_bound, seed);
      ordered_json flags = input_echo(in);
      flags["degree"] = degree_bound;
      flags["seed"] = seed;
      emit("realizability", std::move(flags), to_json(r), [&] {
        std::cout << "status: " << to_string(r.status) << "\n";
        if (r.alpha) std::cout << "alpha: " << print_form(*r.alpha) << "\n";
      });
      return r.status == RealizabilityStatus::open ? kExitInconclusive : kExitDefinite;
    }

    if (*c_vol) {
      const ParsedForm in = read_input(in_a);
      if (in.form.degree() != 0)
        throw DomainError("from-volume expects a scalar (degree zero) expression");
      const TruncatedPoly f = in.form.coeff({});
      const DiffForm w = from_volume(f);
      const int n = in.chart.dim() / 2;
      const bool exact_density =
          top_coefficient(wedge_power(w, n)) == f && ext_d(w).is_zero();
      ordered_json flags = input_echo(in);
      ordered_json payload = ordered_json::object();
      payload["f"] = print_poly(f);
      payload["omega"] = print_form(w);
      payload["density_check"] = exact_density;
      emit("from-volume", std::move(flags), std::move(payload), [&] {
        std::cout << "omega: " << print_form(w) << "\n";
        std::cout << "density check: " << yes_no(exact_density) << "\n";
      });
      return kExitDefinite;
    }

    if (*c_moser) {
      const ParsedForm a = read_input(in_a);
      const ParsedForm b = read_input(in_b);
      const BridgeChoice choice = build_bridge(a.form, b.form, bridge);
      const FlowReport rep = verify_flow(choice.field, flow);
      ordered_json flags = ordered_json::object();
      flags["first"] = input_echo(a);
      flags["second"] = input_echo(b);
      flags["bridge"] = choice.name;
      flags["grid"] = flow.grid;
      flags["steps"] = flow.steps;
      flags["tol"] = flow.tol;
      flags["box"] = flow.box;
      flags["seed"] = flow.seed;
      ordered_json payload = to_json(rep);
      payload["bridge"] = choice.name;
      payload["divisor"] = print_poly(choice.field.divisor);
      payload["locus"] = print_poly(choice.field.locus);
      emit("moser-verify", std::move(flags), std::move(payload), [&] {
        std::cout << "bridge: " << choice.name << "\n";
        std::cout << "verified: " << yes_no(rep.verified) << "\n";
        std::cout << "max residual: " << rep.max_residual << "\n";
        std::cout << "max locus drift: " << rep.max_locus_drift << "\n";
        std::cout << "points: " << rep.points << " (" << rep.locus_points
                  << " on the locus)\n";
        if (rep.failures) std::cout << "failures: " << rep.failures << "\n";
      });
      return rep.verified ? kExitDefinite : kExitInconclusive;
    }

    if (*c_cls) {
      const ParsedForm in = read_input(in_a);
      DiffForm sigma = in.form;
      if (in.chart.dim() % 2 == 0) {
        const MartinetData md = martinet_data(in.form, jet);
        if (!md.sigma)
          throw DomainError(
              "classify: the degeneracy locus is not structurally smooth, no "
              "restriction to classify");
        sigma = *md.sigma;
      }
      if (sigma.chart().dim() != 3)
        throw DomainError("classify: labels live on a 3 dimensional restriction");
      const int r0 = rank_at_0(sigma);
      std::string stratum = "sigma-20";
      std::optional<Sigma22Data> data;
      if (r0 == 0) {
        data = classify_sigma22_intrinsic(sigma);
        stratum = data->label == Sigma22Label::parabolic ? "sigma-221" : "sigma-220";
      }
      ordered_json flags = input_echo(in);
      flags["jet"] = jet;
      ordered_json payload = ordered_json::object();
      payload["stratum"] = stratum;
      payload["rank_sigma_0"] = r0;
      payload["label"] = data ? ordered_json(to_string(data->label)) : ordered_json();
      payload["discriminant"] =
          data ? ordered_json(to_string(data->discriminant)) : ordered_json();
      emit("classification", std::move(flags), std::move(payload), [&] {
        std::cout << "stratum: " << stratum << "\n";
        std::cout << "rank sigma|0: " << r0 << "\n";
        if (data)
          std::cout << "label: " << to_string(data->label) << " (discriminant "
                    << to_string(data->discriminant) << ")\n";
      });
      return kExitDefinite;
    }

    if (*c_har) {
      const ParsedForm in = read_input(in_a);
      const InvarianceSummary s = invariance_suite(in.form, trials, seed, jet);
      ordered_json flags = input_echo(in);
      flags["trials"] = trials;
      flags["seed"] = seed;
      flags["jet"] = jet;
      emit("harness", std::move(flags), to_json(s), [&] {
        std::cout << "trials: " << s.trials << "\n";
        std::cout << "decided equivalent: " << s.decided_equivalent << "\n";
        std::cout << "inconclusive: " << s.inconclusive << "\n";
        std::cout << "issues: " << s.issues.size() << "\n";
        for (const auto& issue : s.issues)
          std::cout << "  " << issue.what << " (seed " << issue.seed << ")\n";
      });
      return s.ok() ? kExitDefinite : kExitError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
