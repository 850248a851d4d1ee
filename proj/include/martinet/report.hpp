#pragma once

#include <json.hpp>

#include "martinet/harness.hpp"
#include "martinet/invariants.hpp"
#include "martinet/moser.hpp"
#include "martinet/normal_form.hpp"

namespace martinet {

inline constexpr int kReportSchemaVersion = 1;

// JSON views of the result types. Exact data (rationals, polynomials, forms)
// is rendered through the expression printer, so values are reproducible
// byte for byte and can be parsed back. Key order is fixed.
nlohmann::ordered_json to_json(const InvariantReport& r);
nlohmann::ordered_json to_json(const EquivalenceVerdict& v);
nlohmann::ordered_json to_json(const Realizability& r);
nlohmann::ordered_json to_json(const Decomposition& d);
nlohmann::ordered_json to_json(const KernelTemplate& t);
nlohmann::ordered_json to_json(const Sigma22Data& d);
nlohmann::ordered_json to_json(const FlowReport& r);
nlohmann::ordered_json to_json(const InvarianceSummary& s);

// Standard envelope: schema version, the subcommand that produced the
// payload, and the flags it ran with. Timings, when measured, are attached
// by the caller afterwards so that default output stays byte-stable.
nlohmann::ordered_json report_envelope(const std::string& kind,
                                       nlohmann::ordered_json flags,
                                       nlohmann::ordered_json payload);

}  // namespace martinet
