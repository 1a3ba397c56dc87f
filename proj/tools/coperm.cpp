// coperm: exact coprime-permutation counts, the limiting constant, bucket
// decompositions, convergence tables, a seeded generator of coprime
// bijections, and the acceptance checks.
//
// Exit codes: 0 success, 1 validation or limit error, 2 generator failure
// after retries.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coperm/bounds.hpp"
#include "coperm/bucketing.hpp"
#include "coperm/cache.hpp"
#include "coperm/counts.hpp"
#include "coperm/euler.hpp"
#include "coperm/sampler.hpp"
#include "coperm/verify.hpp"

namespace {

using nlohmann::json;

std::string cache_path() {
    if (const char* env = std::getenv("COPERM_CACHE")) return env;
    return "coperm.cache";
}

std::vector<std::int64_t> default_sample_basis(std::int64_t n) {
    // Odd primes up to min(13, n^(1/4)); keeps every pair-cell populated.
    const double quarter = std::pow(static_cast<double>(n), 0.25);
    const std::int64_t cap = std::min<std::int64_t>(13, static_cast<std::int64_t>(quarter));
    std::vector<std::int64_t> basis = coperm::sieve_primes(cap);
    if (!basis.empty() && basis.front() == 2) basis.erase(basis.begin());
    return basis;
}

json diagnostics_json(const coperm::SamplerDiagnostics& diag,
                      const std::vector<std::int64_t>& basis) {
    json cells = json::array();
    for (const auto& cell : diag.cells) {
        cells.push_back({{"s1", coperm::key_to_string(cell.s1, basis)},
                         {"s2", coperm::key_to_string(cell.s2, basis)},
                         {"size", cell.size}});
    }
    json out{{"attempts", diag.attempts},
             {"assignment_redraws", diag.assignment_redraws},
             {"star_left", diag.star_left},
             {"star_right", diag.star_right},
             {"cells", cells}};
    if (diag.failing_cell) {
        out["failing_cell"] = {{"s1", coperm::key_to_string(diag.failing_cell->first, basis)},
                               {"s2", coperm::key_to_string(diag.failing_cell->second, basis)}};
    } else {
        out["failing_cell"] = nullptr;
    }
    return out;
}

int run_count(const std::string& variant_name, int n, int kparam, const std::string& method) {
    const auto variant = coperm::variant_from_name(variant_name);
    if (!variant) {
        std::cerr << "error: unknown variant " << variant_name << "\n";
        return 1;
    }
    const int cache_k = *variant == coperm::Variant::Ck ? kparam : 0;
    const std::string path = cache_path();
    coperm::CountCache cache = coperm::CountCache::load(path);
    if (auto hit = cache.lookup(*variant, n, cache_k)) {
        std::cout << coperm::to_decimal(*hit) << "\n";
        return 0;
    }
    coperm::BigCount result;
    if (method == "brute") {
        result = coperm::brute_force_count(n, *variant, kparam);
    } else {
        switch (*variant) {
            case coperm::Variant::C: result = coperm::count_C(n); break;
            case coperm::Variant::C0: result = coperm::count_C0(n); break;
            case coperm::Variant::Ck: result = coperm::count_Ck(n, kparam); break;
        }
    }
    coperm::CountCache::append(path, *variant, n, cache_k, result);
    std::cout << coperm::to_decimal(result) << "\n";
    return 0;
}

int run_constant(std::int64_t cutoff) {
    const coperm::Interval c = coperm::limit_constant(cutoff);
    std::printf("[%.17g, %.17g] midpoint %.17g\n", c.lo, c.hi, c.mid());
    return 0;
}

int run_sample(std::int64_t n, std::int64_t basis_max, int k, std::uint64_t seed,
               int max_retries, bool lift) {
    std::vector<std::int64_t> basis;
    if (basis_max > 0) {
        basis = coperm::sieve_primes(basis_max);
        if (!basis.empty() && basis.front() == 2) basis.erase(basis.begin());
    } else {
        basis = default_sample_basis(n);
    }

    if (!lift) {
        const coperm::SampleResult res =
            coperm::sample_coprime_bijection(n, basis, k, seed, max_retries);
        if (!res.success()) {
            std::cerr << "error: no coprime bijection found after " << max_retries
                      << " attempts\n"
                      << diagnostics_json(res.diagnostics, basis).dump(2) << "\n";
            return 2;
        }
        std::cout << "j,f_j\n";
        for (std::int64_t j = 1; j <= 2 * n - 1; j += 2)
            std::cout << j << ',' << res.outcome->f[static_cast<std::size_t>((j - 1) / 2)]
                      << "\n";
        std::cout << "\n" << diagnostics_json(res.diagnostics, basis).dump(2) << "\n";
        return 0;
    }

    const coperm::SampleResult odd_res = coperm::sample_coprime_bijection(
        n, basis, k, coperm::derive_seed(seed, 1), max_retries);
    const coperm::SampleResult even_res = coperm::sample_coprime_bijection(
        n, basis, k, coperm::derive_seed(seed, 2), max_retries);
    if (!odd_res.success() || !even_res.success()) {
        const auto& bad = odd_res.success() ? even_res : odd_res;
        std::cerr << "error: no coprime bijection found after " << max_retries
                  << " attempts\n" << diagnostics_json(bad.diagnostics, basis).dump(2) << "\n";
        return 2;
    }
    // Invert the second bijection to get the even side [n] -> odd interval.
    std::vector<std::int64_t> f_even(static_cast<std::size_t>(n), 0);
    for (std::int64_t i = 0; i < n; ++i)
        f_even[static_cast<std::size_t>(even_res.outcome->f[static_cast<std::size_t>(i)] - 1)] =
            2 * i + 1;
    const std::vector<std::int64_t> sigma =
        coperm::lift_to_permutation(f_even, odd_res.outcome->f);
    std::cout << "j,sigma_j\n";
    for (std::size_t i = 0; i < sigma.size(); ++i)
        std::cout << i + 1 << ',' << sigma[i] << "\n";
    json diag{{"odd", diagnostics_json(odd_res.diagnostics, basis)},
              {"even", diagnostics_json(even_res.diagnostics, basis)}};
    std::cout << "\n" << diag.dump(2) << "\n";
    return 0;
}

int run_buckets(std::int64_t n, std::int64_t basis_max, int k, bool odd, bool exclude_two) {
    std::vector<std::int64_t> basis = coperm::sieve_primes(basis_max);
    if (exclude_two && !basis.empty() && basis.front() == 2) basis.erase(basis.begin());
    const coperm::Domain dom =
        odd ? coperm::Domain::odd_interval(n) : coperm::Domain::interval(n);
    std::cout << coperm::bucket_lines(coperm::partition(dom, basis, k));
    return 0;
}

int run_template(std::int64_t n, std::int64_t basis_max, int k, std::uint64_t seed) {
    std::vector<std::int64_t> basis = coperm::sieve_primes(basis_max);
    if (!basis.empty() && basis.front() == 2) basis.erase(basis.begin());
    const auto left = coperm::partition(coperm::Domain::interval(n), basis, k);
    const auto right = coperm::partition(coperm::Domain::odd_interval(n), basis, k);
    coperm::Rng rng(seed);
    const auto ar = coperm::random_assignment(left, right, rng);
    std::cout << coperm::template_csv(ar.weights, basis);
    return 0;
}

int run_table(int n_max, const std::string& format) {
    const auto rows = coperm::convergence_table(n_max);
    const double mid = coperm::limit_constant(1000000).mid();
    if (format == "json") {
        json jrows = json::array();
        for (const auto& row : rows)
            jrows.push_back({{"n", row.n},
                             {"count", coperm::to_decimal(row.count)},
                             {"rate", row.rate}});
        std::cout << json{{"rows", jrows}, {"constant_mid", mid}}.dump(2) << "\n";
    } else {
        std::cout << coperm::convergence_csv(rows);
        std::printf("# limit_constant_mid,%.12f\n", mid);
    }
    return 0;
}

int run_verify(std::vector<std::string> only) {
    auto names = coperm::acceptance_names();
    names.push_back("cache-consistency");
    for (const std::string& name : only) {
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            std::cerr << "error: unknown criterion " << name << "\nknown:";
            for (const auto& n : names) std::cerr << ' ' << n;
            std::cerr << "\n";
            return 1;
        }
    }
    const bool run_all = only.empty();
    const bool cache_check =
        run_all || std::find(only.begin(), only.end(), "cache-consistency") != only.end();
    std::erase(only, "cache-consistency");
    const bool run_criteria = run_all || !only.empty();

    bool all_pass = true;
    if (run_criteria) {
        for (const auto& result : coperm::run_acceptance(only)) {
            std::printf("%-4s %-20s %s\n", result.pass ? "PASS" : "FAIL", result.name.c_str(),
                        result.detail.c_str());
            all_pass = all_pass && result.pass;
        }
    }
    if (cache_check) {
        const std::string path = cache_path();
        std::string detail;
        bool pass = true;
        try {
            const coperm::CountCache cache = coperm::CountCache::load(path);
            detail = cache.size() == 0 ? "no cache entries"
                                       : std::to_string(cache.size()) + " entries verified";
        } catch (const coperm::CacheError& e) {
            pass = false;
            detail = e.what();
        }
        std::printf("%-4s %-20s %s\n", pass ? "PASS" : "FAIL", "cache-consistency",
                    detail.c_str());
        all_pass = all_pass && pass;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coprime permutation counting and sampling"};
    app.require_subcommand(1);

    // count
    std::string variant = "C", method = "permanent";
    int count_n = 1, kparam = 1;
    auto* count_cmd = app.add_subcommand("count", "exact count of coprime permutations");
    count_cmd->add_option("--variant", variant, "C, C0, or Ck")->default_val("C");
    count_cmd->add_option("--n", count_n, "problem size")->required();
    count_cmd->add_option("--kparam", kparam, "k for the Ck variant");
    count_cmd->add_option("--method", method, "permanent or brute")
        ->check(CLI::IsMember({"permanent", "brute"}));

    // constant
    std::int64_t cutoff = 1000000;
    auto* constant_cmd =
        app.add_subcommand("constant", "rigorous enclosure of the limiting constant");
    constant_cmd->add_option("--cutoff", cutoff, "finite product cutoff")->required();

    // sample
    std::int64_t sample_n = 0, basis_max = 0;
    int sample_k = 3, max_retries = 20;
    std::uint64_t seed = 1;
    bool lift = false;
    auto* sample_cmd = app.add_subcommand("sample", "generate a coprime bijection");
    sample_cmd->add_option("--n", sample_n, "domain size")->required();
    sample_cmd->add_option("--basis-max", basis_max,
                           "odd primes up to this bound form the basis (default: min(13, n^(1/4)))");
    sample_cmd->add_option("--k", sample_k, "bucket complexity threshold");
    sample_cmd->add_option("--seed", seed, "random seed");
    sample_cmd->add_option("--max-retries", max_retries, "attempts before failure");
    sample_cmd->add_flag("--lift", lift, "emit a coprime permutation of [2n] from two samples");

    // buckets
    std::int64_t buckets_n = 0, buckets_basis_max = 13;
    int buckets_k = 3;
    bool odd_domain = false, exclude_two = false;
    auto* buckets_cmd = app.add_subcommand("buckets", "bucket partition by basis divisors");
    buckets_cmd->add_option("--n", buckets_n, "domain size")->required();
    buckets_cmd->add_option("--basis-max", buckets_basis_max, "basis primes up to this bound");
    buckets_cmd->add_option("--k", buckets_k, "bucket complexity threshold");
    buckets_cmd->add_flag("--odd", odd_domain, "use the odd interval {1,3,...,2n-1}");
    buckets_cmd->add_flag("--exclude-two", exclude_two, "drop 2 from the basis");

    // template
    std::int64_t template_n = 0, template_basis_max = 13;
    int template_k = 3;
    std::uint64_t template_seed = 1;
    auto* template_cmd =
        app.add_subcommand("template", "balanced assignment weights as CSV");
    template_cmd->add_option("--n", template_n, "domain size")->required();
    template_cmd->add_option("--basis-max", template_basis_max,
                             "odd primes up to this bound form the basis");
    template_cmd->add_option("--k", template_k, "bucket complexity threshold");
    template_cmd->add_option("--seed", template_seed, "random seed");

    // table
    int n_max = 22;
    std::string format = "csv";
    auto* table_cmd = app.add_subcommand("table", "convergence table of n-th root rates");
    table_cmd->add_option("--n-max", n_max, "largest n (<= 30)");
    table_cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // verify
    std::vector<std::string> only;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance checks");
    verify_cmd->add_option("--only", only, "run only the named criteria");

    CLI11_PARSE(app, argc, argv);

    try {
        if (count_cmd->parsed()) return run_count(variant, count_n, kparam, method);
        if (constant_cmd->parsed()) return run_constant(cutoff);
        if (sample_cmd->parsed())
            return run_sample(sample_n, basis_max, sample_k, seed, max_retries, lift);
        if (buckets_cmd->parsed())
            return run_buckets(buckets_n, buckets_basis_max, buckets_k, odd_domain, exclude_two);
        if (template_cmd->parsed())
            return run_template(template_n, template_basis_max, template_k, template_seed);
        if (table_cmd->parsed()) return run_table(n_max, format);
        if (verify_cmd->parsed()) return run_verify(only);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
