#include "treeforms/selftest.hpp"

#include "treeforms/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace treeforms {

nlohmann::json JobOutcome::to_json() const {
    switch (status) {
        case Status::done: return result.to_json();
        case Status::skipped: return {{"name", name}, {"pass", false}, {"skipped", true}};
        case Status::resource_limit:
            return {{"name", name}, {"pass", false}, {"error", "resource limit"}, {"message", message}};
        case Status::error: return {{"name", name}, {"pass", false}, {"error", "exception"}, {"message", message}};
    }
    return {};
}

std::vector<JobOutcome> run_jobs(const std::vector<Job>& jobs, std::size_t threads, double budget_seconds) {
    std::vector<JobOutcome> out(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) out[i].name = jobs[i].name;
    const auto start = std::chrono::steady_clock::now();
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            if (budget_seconds > 0 && elapsed.count() > budget_seconds) continue;
            auto& o = out[i];
            try {
                o.result = jobs[i].run();
                o.status = JobOutcome::Status::done;
            } catch (const ResourceLimit& e) {
                o.status = JobOutcome::Status::resource_limit;
                o.message = e.what();
            } catch (const std::exception& e) {
                o.status = JobOutcome::Status::error;
                o.message = e.what();
            }
        }
    };
    threads = std::max<std::size_t>(1, std::min(threads, jobs.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

bool SelftestReport::pass() const {
    for (const auto& o : outcomes)
        if (!o.pass()) return false;
    return true;
}

bool SelftestReport::budget_exhausted() const {
    for (const auto& o : outcomes)
        if (o.status == JobOutcome::Status::skipped) return true;
    return false;
}

bool SelftestReport::resource_limited() const {
    for (const auto& o : outcomes)
        if (o.status == JobOutcome::Status::resource_limit) return true;
    return false;
}

nlohmann::json SelftestReport::to_json() const {
    auto results = nlohmann::json::array();
    std::size_t passed = 0;
    for (const auto& o : outcomes) {
        results.push_back(o.to_json());
        if (o.pass()) ++passed;
    }
    return {{"seed", seed}, {"pass", pass()}, {"passed", passed}, {"total", outcomes.size()}, {"results", results}};
}

std::vector<Job> selftest_jobs(std::uint64_t seed, TreeGroupCache& cache) {
    std::vector<Job> jobs;
    auto add = [&](std::string name, std::function<SuiteResult()> run) { jobs.push_back({std::move(name), std::move(run)}); };
    auto at = [](const char* what, std::size_t n, Label m) {
        return std::string(what) + " n=" + std::to_string(n) + " m=" + std::to_string(m);
    };
    // The slow exactness checks go first so they overlap with the rest.
    for (auto [n, m] : std::vector<std::pair<std::size_t, Label>>{{2, 2}, {2, 1}})
        add(at("exact", n, m), [&cache, n, m] { return suite_exact(n, m, cache); });
    for (std::size_t n = 0; n <= 1; ++n)
        for (Label m = 1; m <= 3; ++m) add(at("exact", n, m), [&cache, n, m] { return suite_exact(n, m, cache); });
    for (std::size_t n = 0; n <= 1; ++n)
        for (Label m = 1; m <= 2; ++m) add(at("universal", n, m), [&cache, n, m] { return suite_universal(n, m, cache); });
    add("small groups", [&cache] { return suite_small_groups(cache); });
    add("split independence", [&cache, s = derive_seed(seed, 1)] { return suite_split_independence(3, 100, s, cache); });
    for (Label m = 1; m <= 3; ++m) add("invariance m=" + std::to_string(m), [&cache, m] { return suite_invariance(m, cache); });
    add("quadratic axioms", [s = derive_seed(seed, 2)] { return suite_quadratic(60, 20, s); });
    add("symmetric sequence", [s = derive_seed(seed, 3)] { return suite_symmetric_sequence(40, s); });
    add("lattice invariants", [s = derive_seed(seed, 4)] { return suite_lattice(s); });
    return jobs;
}

SelftestReport run_selftest(const SelftestOptions& options) {
    TreeGroupCache cache(options.limits);
    auto jobs = selftest_jobs(options.seed, cache);
    SelftestReport report;
    report.seed = options.seed;
    report.outcomes = run_jobs(jobs, options.jobs, options.budget_seconds);
    return report;
}

}  // namespace treeforms
