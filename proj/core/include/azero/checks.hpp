// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace azero {

struct CheckOptions {
    // Test hook: perturbs one row of the position table used by the checks.
    bool corrupt_position_table = false;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast invariant suite: position table, window/global agreement at the last
/// frame, first-frame boundary, correction degeneracy, oracle equivalence,
/// key-list structure and first-frame exactness of a short animation.
/// Deterministic; output depends only on `options`.
std::vector<CheckResult> run_fast_checks(const CheckOptions& options = {});

}  // namespace azero
