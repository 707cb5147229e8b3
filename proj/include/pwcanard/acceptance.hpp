#pragma once

#include <string>
#include <vector>

namespace pwc::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    double limit_seconds = 0.0;
    std::string detail;
};

constexpr int kCriteria = 10;

// Runs one criterion; exceptions are caught and reported as failures.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_all(const std::vector<int>& ids = {});

// "PASS  3  Figure 6(a) reproduction  (1.20 s / 10 s)  <detail>"
std::string format_line(const CriterionResult& r);

} // namespace pwc::acceptance
