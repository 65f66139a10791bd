#ifndef CDAGLAB_SUITE_HPP
#define CDAGLAB_SUITE_HPP

#include <string>
#include <utility>
#include <vector>

#include "cdaglab/cdag.hpp"

namespace cdaglab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

struct SuiteResult {
    std::vector<CriterionResult> criteria;

    bool all_pass() const {
        for (const auto& c : criteria)
            if (!c.pass) return false;
        return true;
    }
};

/// Runs every verification criterion, timing included. Criteria assert the
/// published values as stated; mismatches against exact enumeration come out
/// as failures with the enumerated value in the details.
SuiteResult run_acceptance_suite(int threads = 0);

std::string suite_text(const SuiteResult& r);
std::string suite_json(const SuiteResult& r, int indent = 2);

/// Deterministic verification corpus: all nine families over small sizes plus
/// seeded random parse trees, sparse patterns and conv+pool shapes.
std::vector<std::pair<std::string, CDag>> oracle_corpus();

}  // namespace cdaglab

#endif
