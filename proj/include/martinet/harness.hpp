#pragma once

#include <random>
#include <string>
#include <vector>

#include "martinet/invariants.hpp"
#include "martinet/normal_form.hpp"

namespace martinet {

// Random polynomial chart changes for invariance testing: an invertible
// integer linear part found by rejection plus sparse higher-order terms with
// small rational coefficients.
class DiffeoGen {
 public:
  DiffeoGen(Chart chart, unsigned long long seed, int degree = 3);
  PolyMapGerm next();

 private:
  Chart chart_;
  std::mt19937_64 rng_;
  int degree_;
};

// Inverse of phi as a formal map germ, correct to jet order `order`. The
// linear part must be invertible; the tail is removed by Picard iteration.
PolyMapGerm formal_inverse(const PolyMapGerm& phi, int order);

struct InvarianceIssue {
  std::string what;
  unsigned long long seed = 0;  // per-trial generator seed, for replay
};

struct InvarianceSummary {
  int trials = 0;
  int decided_equivalent = 0;
  int inconclusive = 0;
  std::vector<InvarianceIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Pulls omega back along random chart changes and checks that reported
// invariants are unchanged (degeneracy flags, restriction rank, span
// dimension, classification label), that the kernel of omega^(n-1)|_0 and
// the orientation transform by their stated laws, and that the decision
// procedure never separates a form from its own pullback.
InvarianceSummary invariance_suite(const DiffForm& omega, int trials,
                                   unsigned long long seed, int working_order = 8);

}  // namespace martinet
