#pragma once

#include <string>
#include <vector>

namespace lf::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
};

struct SuiteOptions {
    bool run_simulation = true; // criterion 13 dominates the runtime
    int threads = 1;
};

// Full acceptance suite; each criterion carries its tolerance in code.
std::vector<CriterionResult> run_acceptance(const SuiteOptions& opt = {});

CriterionResult c01_det_value();
CriterionResult c02_det_identity();
CriterionResult c03_period_bracket();
CriterionResult c04_period_cross_oracles();
CriterionResult c05_conservation_closure();
CriterionResult c06_monotone_frequency();
CriterionResult c07_g0_agreement();
CriterionResult c08_residual_scaling();
CriterionResult c09_linearization_check();
CriterionResult c10_monodromy_perturbation();
CriterionResult c11_mode_one_solver();
CriterionResult c12_cantor_measure_trend();
CriterionResult c13_simulation_fidelity();

// one "PASS criterion N: ..." / "FAIL criterion N: ..." line per entry
std::string format_report(const std::vector<CriterionResult>& results);

} // namespace lf::verify
