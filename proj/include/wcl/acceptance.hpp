#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wcl {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string measured;   // headline numbers, formatted
    double runtime_seconds = 0.0;
};

struct AcceptanceOptions {
    double ito_corruption = 1.0;  // fault-injection hook for the self-test
};

/// Runs the full desk-scale acceptance suite; one result per criterion.
std::vector<CriterionResult> run_acceptance_suite(const AcceptanceOptions& options = {});

/// Runs a single criterion by id (1-based).
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});

int criterion_count();

}  // namespace wcl
