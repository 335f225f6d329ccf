// Copyright 2026 The macrodiv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace macrodiv {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20260101;
  unsigned workers = 1;
  /// Reduced trial counts for smoke runs; the statistical margins stay the
  /// same, so quick runs are noisier but should still pass.
  bool quick = false;
};

CheckResult check_closed_form_agreement(const VerifyOptions& options);
CheckResult check_capacity_consistency(const VerifyOptions& options);
CheckResult check_monotonicity(const VerifyOptions& options);
CheckResult check_phase_diversity_concentration(const VerifyOptions& options);
CheckResult check_asymptotic_outage(const VerifyOptions& options);
CheckResult check_alamouti(const VerifyOptions& options);
CheckResult check_worst_case_delay(const VerifyOptions& options);
CheckResult check_riemann_limit(const VerifyOptions& options);
CheckResult check_hoeffding(const VerifyOptions& options);
CheckResult check_six_db(const VerifyOptions& options);
CheckResult check_determinism(const VerifyOptions& options);

/// Every check above, in order.
std::vector<CheckResult> run_acceptance(const VerifyOptions& options);

}  // namespace macrodiv
