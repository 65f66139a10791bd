#ifndef CDAGLAB_REPORT_HPP
#define CDAGLAB_REPORT_HPP

#include <string>
#include <vector>

#include "cdaglab/influence.hpp"
#include "cdaglab/sensitivity.hpp"
#include "cdaglab/separability.hpp"

namespace cdaglab {

/// Influence values are rendered as exact rationals; floats appear only in
/// the explicitly approximate columns.
std::string profile_json(const ComplexityProfile& p, bool symbolic = false, int indent = 2);
std::string profile_table(const ComplexityProfile& p, bool symbolic = false);
std::string profile_csv(const ComplexityProfile& p);

std::string compare_json(const std::vector<CompareReport>& reports, int indent = 2);
std::string compare_table(const std::vector<CompareReport>& reports);
std::string compare_csv(const std::vector<CompareReport>& reports);

std::string trial_summary_json(const TrialSummary& s, int indent = 2);
std::string class_bound_json(const ClassBoundReport& r, int indent = 2);

std::string parts_json(const std::vector<PartsDecomposition>& parts, int indent = 2);
std::string parts_table(const std::vector<PartsDecomposition>& parts);

}  // namespace cdaglab

#endif
