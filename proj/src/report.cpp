#include "martinet/report.hpp"

#include "martinet/dsl.hpp"

namespace martinet {

namespace {

using nlohmann::ordered_json;

const char* certificate_name(Certificate c) {
  switch (c) {
    case Certificate::proved: return "proved";
    case Certificate::refuted: return "refuted";
    case Certificate::unknown: return "unknown";
  }
  return "unknown";
}

const char* kernel_status_name(KernelFieldStatus s) {
  switch (s) {
    case KernelFieldStatus::exists: return "exists";
    case KernelFieldStatus::obstructed: return "obstructed";
    case KernelFieldStatus::open: return "open";
  }
  return "open";
}

ordered_json chart_json(const Chart& c) {
  ordered_json out = ordered_json::object();
  out["vars"] = c.vars();
  if (c.weights()) out["weights"] = *c.weights();
  return out;
}

ordered_json matrix_json(const RatMat& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json field_json(const PolyVectorField& x) {
  ordered_json comps = ordered_json::array();
  for (const TruncatedPoly& p : x.components()) comps.push_back(print_poly(p));
  return comps;
}

ordered_json point_json(const std::vector<double>& x) {
  ordered_json out = ordered_json::array();
  for (double v : x) out.push_back(v);
  return out;
}

}  // namespace

ordered_json to_json(const InvariantReport& r) {
  ordered_json out = ordered_json::object();
  out["chart"] = chart_json(r.martinet.omega_flat.chart());
  out["n"] = r.n;
  out["f"] = print_poly(r.martinet.f);
  out["singular"] = r.martinet.singular();
  out["structurally_smooth"] = r.martinet.structurally_smooth;
  out["pivot"] = r.martinet.pivot;
  out["f_flat"] = print_poly(r.martinet.f_flat);
  out["sigma"] = r.martinet.sigma ? ordered_json(print_form(*r.martinet.sigma)) : ordered_json();
  out["rank_sigma_0"] = r.rank_sigma_0 ? ordered_json(*r.rank_sigma_0) : ordered_json();
  out["kernel_basis"] = r.kernel_basis ? matrix_json(*r.kernel_basis) : ordered_json();
  out["orientation"] = r.orientation ? ordered_json(*r.orientation) : ordered_json();
  out["orientation_reason"] = r.orientation_reason;
  out["dim_span"] = r.dim_span ? ordered_json(*r.dim_span) : ordered_json();
  out["dim_span_reason"] = r.dim_span_reason;
  if (r.ideal) {
    ordered_json ideal = ordered_json::object();
    ideal["a"] = print_poly(r.ideal->a);
    ideal["b"] = print_poly(r.ideal->b);
    ideal["alpha"] = print_form(r.ideal->alpha);
    ideal["certificate"] = certificate_name(r.ideal->certificate);
    ideal["verdict"] = to_string(r.ideal->verdict);
    out["ideal"] = std::move(ideal);
  } else {
    out["ideal"] = ordered_json();
  }
  out["ideal_reason"] = r.ideal_reason;
  if (r.kernel_field) {
    ordered_json kf = ordered_json::object();
    kf["status"] = kernel_status_name(r.kernel_field->status);
    kf["order"] = r.kernel_field->order;
    kf["witness"] =
        r.kernel_field->witness ? field_json(*r.kernel_field->witness) : ordered_json();
    out["kernel_field"] = std::move(kf);
  } else {
    out["kernel_field"] = ordered_json();
  }
  out["kernel_field_reason"] = r.kernel_field_reason;
  if (r.sigma22) {
    ordered_json s22 = ordered_json::object();
    s22["discriminant"] = to_string(r.sigma22->discriminant);
    s22["label"] = to_string(r.sigma22->label);
    out["sigma22"] = std::move(s22);
  } else {
    out["sigma22"] = ordered_json();
  }
  out["classification"] = r.classification;
  return out;
}

ordered_json to_json(const EquivalenceVerdict& v) {
  ordered_json out = ordered_json::object();
  out["outcome"] = to_string(v.outcome);
  out["rule"] = v.rule;
  out["evidence"] = v.evidence;
  return out;
}

ordered_json to_json(const Realizability& r) {
  ordered_json out = ordered_json::object();
  out["status"] = to_string(r.status);
  out["alpha"] = r.alpha ? ordered_json(print_form(*r.alpha)) : ordered_json();
  return out;
}

ordered_json to_json(const Decomposition& d) {
  ordered_json out = ordered_json::object();
  out["pivot"] = d.pivot;
  out["alpha"] = print_form(d.alpha);
  out["sigma"] = print_form(d.sigma);
  out["theta"] = print_form(d.theta);
  out["residual_order"] = d.residual_order;
  ordered_json flatten = ordered_json::array();
  for (const TruncatedPoly& p : d.martinet.flatten.components())
    flatten.push_back(print_poly(p));
  out["flatten"] = std::move(flatten);
  return out;
}

ordered_json to_json(const KernelTemplate& t) {
  ordered_json out = ordered_json::object();
  out["shape"] = to_string(t.shape);
  out["c"] = to_string(t.c);
  out["g"] = print_poly(t.g);
  return out;
}

ordered_json to_json(const Sigma22Data& d) {
  ordered_json out = ordered_json::object();
  out["discriminant"] = to_string(d.discriminant);
  out["label"] = to_string(d.label);
  return out;
}

ordered_json to_json(const FlowReport& r) {
  ordered_json out = ordered_json::object();
  out["verified"] = r.verified;
  out["max_residual"] = r.max_residual;
  out["max_locus_drift"] = r.max_locus_drift;
  out["points"] = r.points;
  out["locus_points"] = r.locus_points;
  out["failures"] = r.failures;
  ordered_json worst = ordered_json::object();
  worst["start"] = point_json(r.worst.start);
  worst["end"] = point_json(r.worst.end);
  worst["residual"] = r.worst.residual;
  worst["locus_drift"] = r.worst.locus_drift;
  worst["failed"] = r.worst.failed;
  out["worst"] = std::move(worst);
  return out;
}

ordered_json to_json(const InvarianceSummary& s) {
  ordered_json out = ordered_json::object();
  out["trials"] = s.trials;
  out["decided_equivalent"] = s.decided_equivalent;
  out["inconclusive"] = s.inconclusive;
  ordered_json issues = ordered_json::array();
  for (const auto& issue : s.issues) {
    ordered_json item = ordered_json::object();
    item["what"] = issue.what;
    item["seed"] = issue.seed;
    issues.push_back(std::move(item));
  }
  out["issues"] = std::move(issues);
  out["ok"] = s.ok();
  return out;
}

ordered_json report_envelope(const std::string& kind, ordered_json flags,
                             ordered_json payload) {
  ordered_json out = ordered_json::object();
  out["schema_version"] = kReportSchemaVersion;
  out["kind"] = kind;
  out["flags"] = std::move(flags);
  out["result"] = std::move(payload);
  return out;
}

}  // namespace martinet
