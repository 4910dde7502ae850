#pragma once

// End-to-end acceptance suite shared by the CLI `verify` command and the
// acceptance test binary.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lifetime {

struct AcceptanceOptions {
    double constant_scale = 1.0;   ///< multiplies the sharp bounded-domain constant (fault injection)
    std::uint64_t seed = 20240617;
    unsigned workers = 1;
};

struct AcceptanceItem {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::vector<std::pair<std::string, double>> metrics;
};

std::vector<AcceptanceItem> run_acceptance(const AcceptanceOptions& options = {});

/// Run a single item by id (1-9).
AcceptanceItem run_acceptance_item(int id, const AcceptanceOptions& options = {});

}  // namespace lifetime
