#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <martinet/dsl.hpp>
#include <martinet/exterior.hpp>
#include <martinet/report.hpp>

using namespace martinet;
using nlohmann::ordered_json;

namespace {

Chart pxyz() { return Chart({"p1", "x", "y", "z"}); }

TruncatedPoly var(const Chart& c, int i) { return TruncatedPoly::variable(c, i, kExactJet); }

TruncatedPoly cst(const Chart& c, long v) { return TruncatedPoly::constant(c, v, kExactJet); }

DiffForm omega0(const Chart& c) {
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 1}, cst(c, 1));
  w.add_term({0, 2}, -var(c, 3));
  w.add_term({2, 3}, var(c, 0));
  w.add_term({1, 2}, var(c, 1));
  return w;
}

DiffForm omega1(const Chart& c) {
  DiffForm w = DiffForm::zero(c, 2, kExactJet);
  w.add_term({0, 2}, cst(c, 1));
  w.add_term({0, 1}, var(c, 3));
  w.add_term({1, 3}, -var(c, 0));
  w.add_term({1, 2}, var(c, 1));
  return w;
}

}  // namespace

TEST_CASE("invariant reports serialize exactly and deterministically") {
  Chart c = pxyz();
  InvariantReport rep = full_report(omega0(c));
  ordered_json j = to_json(rep);

  CHECK(j["f"] == "2*p1");
  CHECK(j["singular"] == true);
  CHECK(j["structurally_smooth"] == true);
  CHECK(j["pivot"] == 0);
  CHECK(j["n"] == 2);
  CHECK(j["rank_sigma_0"] == 0);
  CHECK(j["chart"]["vars"] == std::vector<std::string>({"p1", "x", "y", "z"}));

  // the printed restriction parses back to the computed one
  REQUIRE(j["sigma"].is_string());
  Chart sub = Chart({"x", "y", "z"});
  CHECK(parse_form(j["sigma"].get<std::string>(), sub) == *rep.martinet.sigma);

  // byte-stable across repeated serialization
  CHECK(to_json(full_report(omega0(c))).dump() == j.dump());
}

TEST_CASE("equivalence verdicts carry outcome, rule, and evidence") {
  Chart c = pxyz();
  ordered_json j = to_json(decide_equivalence(omega0(c), omega1(c)));
  CHECK(j["outcome"] == "not-equivalent");
  CHECK(j["rule"] == "kernel-position-mismatch");
  CHECK(j["evidence"].is_array());
  CHECK(!j["evidence"].empty());
}

TEST_CASE("payload serializers expose their fields") {
  Chart c = pxyz();

  ordered_json d = to_json(decompose(omega0(c)));
  CHECK(d["pivot"] == 0);
  CHECK(d["alpha"] == "dx - z ^ dy");
  CHECK(d["sigma"] == "x ^ dx ^ dy");
  CHECK(d["theta"] == "0");

  Chart s = Chart({"x", "y", "z"});
  DiffForm plane = DiffForm::term({0, 1}, TruncatedPoly::variable(s, 0, kExactJet));
  ordered_json r = to_json(realizability(plane));
  CHECK(r["status"] == "realizable");
  CHECK(r["alpha"].is_string());

  ordered_json t = to_json(fit_kernel_template(omega1(c)));
  CHECK(t["shape"] == "second-shape");
  CHECK(t["c"] == "0");
  CHECK(t["g"] == "x");

  FlowReport flow;
  flow.verified = true;
  flow.max_residual = 1.5e-12;
  flow.points = 625;
  flow.worst.start = {0.1, 0.0, 0.0, -0.1};
  ordered_json f = to_json(flow);
  CHECK(f["verified"] == true);
  CHECK(f["points"] == 625);
  CHECK(f["worst"]["start"].size() == 4);
}

TEST_CASE("the envelope pins schema version, kind, and flags") {
  ordered_json flags = ordered_json::object();
  flags["jet"] = 8;
  flags["seed"] = 0;
  ordered_json env = report_envelope("invariants", flags, ordered_json::object());
  CHECK(env["schema_version"] == kReportSchemaVersion);
  CHECK(env["kind"] == "invariants");
  CHECK(env["flags"]["jet"] == 8);
  CHECK(env.dump().rfind("{\"schema_version\":1,\"kind\":\"invariants\"", 0) == 0);
}
