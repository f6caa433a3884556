#pragma once

#include "treeforms/suites.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace treeforms {

struct Job {
    std::string name;
    std::function<SuiteResult()> run;
};

struct JobOutcome {
    std::string name;
    enum class Status { done, skipped, resource_limit, error } status = Status::skipped;
    SuiteResult result;
    std::string message;

    bool pass() const { return status == Status::done && result.pass; }
    nlohmann::json to_json() const;
};

/// Runs the jobs on up to `threads` workers. Outcomes come back in job order.
/// With a positive budget, jobs not yet started once it has elapsed are
/// skipped.
std::vector<JobOutcome> run_jobs(const std::vector<Job>& jobs, std::size_t threads, double budget_seconds = 0);

struct SelftestOptions {
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    /// Seconds; 0 means no limit.
    double budget_seconds = 0;
    TreeGroupLimits limits;
};

struct SelftestReport {
    std::vector<JobOutcome> outcomes;
    std::uint64_t seed = 0;

    bool pass() const;
    bool budget_exhausted() const;
    bool resource_limited() const;
    /// Deterministic: no timings, no thread count.
    nlohmann::json to_json() const;
};

/// Every verification grid: exactness, the universal refinement, small group
/// values, split independence and invariance, the quadratic suites and the
/// lattice invariants.
std::vector<Job> selftest_jobs(std::uint64_t seed, TreeGroupCache& cache);

SelftestReport run_selftest(const SelftestOptions& options);

}  // namespace treeforms
