#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tsirelson/tsirelson.hpp"

using namespace tsirelson;

namespace {

// A criterion appends detail lines and returns whether every check held.
struct Criterion {
    int id;
    std::string title;
    double seconds_limit;
    std::function<bool(std::ostream&)> body;
};

bool report(std::ostream& log, const ScanReport& r) {
    log << "    " << (r.passed() ? "ok   " : "FAIL ") << r.suite << " [" << r.universe << "] cases=" << r.cases
        << " violations=" << r.violation_count << (r.expect_violations ? " (violations expected)" : "") << "\n";
    if (!r.passed())
        for (std::size_t i = 0; i < std::min<std::size_t>(r.violations.size(), 4); ++i) log << "      " << r.violations[i] << "\n";
    return r.passed();
}

bool check(std::ostream& log, bool ok, const std::string& what) {
    log << "    " << (ok ? "ok   " : "FAIL ") << what << "\n";
    return ok;
}

bool c1_decomposition(std::ostream& log) {
    auto blocks = decompose_schreier(FiniteSet::interval(1, 10));
    std::vector<FiniteSet> expected{{1}, {2, 3}, {4, 5, 6, 7}, {8, 9, 10}};
    std::string got;
    for (const auto& b : blocks) got += "{" + b.to_string() + "}";
    return check(log, blocks == expected, "decompose_schreier([1,10]) = " + got);
}

bool c2_oracle(std::ostream& log) {
    bool ok = true;
    auto compare = [&](const RegularFamily& fam, Index n) {
        std::uint64_t mismatches = 0, members = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<Index> v;
            for (Index i = 0; i < n; ++i)
                if (mask >> i & 1) v.push_back(i + 1);
            FiniteSet f(v);
            const bool m = member(fam, f);
            members += m;
            if (m != member_oracle(fam, f)) ++mismatches;
        }
        ok &= check(log, mismatches == 0,
                    fam.name() + " over all subsets of [1," + std::to_string(n) + "]: mismatches=" + std::to_string(mismatches) +
                        " members=" + std::to_string(members));
    };
    compare(RegularFamily::ks1(2), 14);
    compare(RegularFamily::ks1(3), 14);
    compare(RegularFamily::s2(), 14);
    compare(RegularFamily::s3(), 10);
    return ok;
}

bool c3_ranges(std::ostream& log) {
    bool ok = true;
    struct Case {
        RegularFamily fam;
        std::function<BigNat(Index)> formula;
    };
    std::vector<Case> cases{
        {RegularFamily::s1(), [](Index a) { return BigNat(2 * a); }},
        {RegularFamily::sphi(Phi::power(2)), [](Index a) { return BigNat(a + a * a); }},
        {RegularFamily::sphi(Phi::exponential(2)), [](Index a) { return BigNat(a) + pow2(a); }},
        {RegularFamily::ks1(2), [](Index a) { return BigNat(4 * a); }},
        {RegularFamily::ks1(3), [](Index a) { return BigNat(8 * a); }},
        {RegularFamily::s2(), [](Index a) { return pow2(a) * a; }},
    };
    for (const auto& c : cases) {
        std::string bad;
        for (Index a = 1; a <= 10; ++a) {
            const BigNat scanned = range_by_scan(c.fam, a);
            if (scanned != c.formula(a) || range(c.fam, a) != scanned) bad += " a=" + std::to_string(a);
        }
        ok &= check(log, bad.empty(), c.fam.name() + " range by automaton scan equals the closed form for a in [1,10]" + bad);
    }
    const auto s3 = RegularFamily::s3();
    ok &= check(log, range_by_scan(s3, 1) == 2 && range_by_scan(s3, 2) == 2048, "s3 range by automaton scan: 2, 2048 for a = 1, 2");
    for (Index a = 1; a <= 3; ++a) {
        BigNat r = range(s3, a, std::uint64_t{1} << 30);
        const bool in = compare_tower(r, a, a) != std::strong_ordering::less && compare_tower(r, a, 3 * a) != std::strong_ordering::greater;
        ok &= check(log, in, "s3 range(" + std::to_string(a) + ") has " + std::to_string(bit_length(r)) + " bits, within [tau(a,a), tau(a,3a)]");
    }
    return ok;
}

bool c4_insertion(std::ostream& log) {
    bool ok = report(log, insertion_exhaustive_scan(RegularFamily::s1(), 25));
    ok &= report(log, insertion_exhaustive_scan(RegularFamily::s2(), 20));
    auto [f, g] = two_s1_insertion_counterexample();
    auto inst = insertion_instance(RegularFamily::ks1(2), f, g);
    ok &= check(log, inst.violation_count == 1, "2S1 instance " + inst.universe + ": " + (inst.violations.empty() ? "H is a member" : inst.violations[0]));
    return ok;
}

bool c5_strong(std::ostream& log) {
    bool ok = true;
    for (const auto& fam : detail::built_in_families()) ok &= report(log, strong_scan(fam, 25));
    log << "    (bound 25 is vacuous for ks1:3, s2 and s3; larger bounds follow)\n";
    ok &= report(log, strong_scan(RegularFamily::s2(), 40));
    ok &= report(log, strong_scan(RegularFamily::ks1(3), 64));
    return ok;
}

bool c6_full_sets(std::ostream& log) {
    bool ok = report(log, full_sequence_scan(RegularFamily::s1(), 64, SequenceReading::literal));
    auto relaxed = full_sequence_scan(RegularFamily::s1(), 64, SequenceReading::max_plus_one);
    log << "    info  " << relaxed.suite << " with b + 1 in place of b: violations=" << relaxed.violation_count << "\n";
    for (const auto& fam : {RegularFamily::s1(), RegularFamily::sphi(Phi::power(2)), RegularFamily::sphi(Phi::exponential(2))})
        ok &= report(log, sphi_window_scan(fam, 30));
    ok &= report(log, block_window_scan(RegularFamily::ks1(2), 40));
    ok &= report(log, block_window_scan(RegularFamily::ks1(3), 40));
    ok &= report(log, block_window_scan(RegularFamily::s2(), 24));
    ok &= report(log, two_s1_window_scan(40));
    ok &= report(log, full_sequence_scan(RegularFamily::s2(), 64, SequenceReading::literal));
    ok &= report(log, s3_window_scan(12));
    ok &= report(log, s3_packing_scan(4, 3));
    return ok;
}

bool c7_witnesses(std::ostream& log) {
    bool ok = true;
    const auto s1 = RegularFamily::s1();
    auto c1 = certify_witness(s1, 1);
    ok &= check(log, c1.norm_value == Dyadic(3, 1) && c1.depth == 1,
                "s1 d=1: vector " + c1.x.to_string() + " norm=" + c1.norm_value.to_string() + " j=" + std::to_string(c1.depth));
    auto c2 = certify_witness(s1, 2);
    FunctionalSearch search(s1, c2.x, 3);
    ok &= check(log, c2.x.to_string() == "3:8,4:1,5:1,6:1,7:1,8:8" && c2.norm_value == Dyadic(9) && c2.depth == 2,
                "s1 d=2: vector " + c2.x.to_string() + " norm=" + c2.norm_value.to_string() + " j=" + std::to_string(c2.depth));
    ok &= check(log, search.best(3) == Dyadic(9) && search.min_depth() == 2,
                "s1 d=2 exhaustive functional search: best=" + search.best(3).to_string() + " min depth=" + std::to_string(search.min_depth()));
    for (std::size_t d = 3; d <= 5; ++d) {
        const BigNat q = q_param(s1, 3, d + 2, d + 4);
        Index budget = 0;
        for (Index j = 3; j <= d + 3; ++j) budget += j;
        auto c = certify_witness(s1, d);
        const bool span_ok = c.x.span_lo() >= 3 && BigNat(c.x.span_hi()) <= q - 1;
        ok &= check(log, c.depth >= d && span_ok && q <= budget && q == BigNat(std::vector<Index>{13, 18, 24}[d - 3]),
                    "s1 d=" + std::to_string(d) + ": j=" + std::to_string(c.depth) + " span=[" + std::to_string(c.x.span_lo()) + "," +
                        std::to_string(c.x.span_hi()) + "] q=" + q.str() + " <= " + std::to_string(budget));
    }
    for (const auto& fam : {RegularFamily::ks1(2), RegularFamily::s2()}) {
        auto c = certify_witness(fam, 2);
        ok &= check(log, c.depth >= 2 && c.realizing.validate(fam) && c.realizing.evaluate(c.x) == c.norm_value,
                    fam.name() + " d=2: span=[" + std::to_string(c.x.span_lo()) + "," + std::to_string(c.x.span_hi()) + "] norm=" + c.norm_value.to_string() + " j=" + std::to_string(c.depth));
    }
    return ok;
}

bool c8_hatj(std::ostream& log) {
    const auto id = Phi::identity();
    bool ok = check(log, hat_j(id, 3, 5) == 1 && hat_j(id, 1, 2) == 3 && hat_j(id, 4, 9) == 3,
                    "hat-j(3,5)=" + std::to_string(hat_j(id, 3, 5)) + " hat-j(1,2)=" + std::to_string(hat_j(id, 1, 2)) +
                        " hat-j(4,9)=" + std::to_string(hat_j(id, 4, 9)));
    ok &= report(log, hatj_property_scan(id, 40, 80, 10));
    ok &= report(log, hatj_upper_scan(id, 300));
    return ok;
}

bool c9_sandwich(std::ostream& log) {
    bool ok = true;
    for (const auto& fam : detail::built_in_families()) ok &= report(log, sandwich_report(fam, 1'000'000));
    ok &= check(log, log_star(pow2(65536)) == 5, "log_star(2^65536) = " + std::to_string(log_star(pow2(65536))));
    return ok;
}

bool c10_soundness(std::ostream& log) {
    SampleOptions o;
    o.samples = 500;
    return report(log, engine_soundness_scan(RegularFamily::s1(), o));
}

bool c11_force_star(std::ostream& log) {
    SampleOptions o;
    o.samples = 200;
    return report(log, force_star_scan(RegularFamily::s1(), o));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    app.add_option("--only", only, "Run only these criteria (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "greedy Schreier decomposition of [1,10]", 1, c1_decomposition},
        {2, "automaton membership equals the brute-force oracle", 120, c2_oracle},
        {3, "range closed forms", 60, c3_ranges},
        {4, "insertion property", 120, c4_insertion},
        {5, "strong-family scan", 120, c5_strong},
        {6, "full-set lemma suite", 300, c6_full_sets},
        {7, "witness certificates", 600, c7_witnesses},
        {8, "hat-j suite", 60, c8_hatj},
        {9, "bound sandwich", 60, c9_sandwich},
        {10, "engine soundness against exhaustive search", 300, c10_soundness},
        {11, "shallow or full optimum", 300, c11_force_star},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        std::ostringstream log;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.body(log);
        } catch (const std::exception& e) {
            log << "    FAIL exception: " << e.what() << "\n";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.seconds_limit;
        ok = ok && in_time;
        failures += !ok;
        std::cout << (ok ? "PASS" : "FAIL") << " C" << c.id << " " << c.title << " (" << std::fixed << std::setprecision(2) << secs << " s, limit "
                  << std::setprecision(0) << c.seconds_limit << " s" << (in_time ? "" : ", over time") << ")\n"
                  << log.str() << std::flush;
    }
    return failures == 0 ? 0 : 1;
}
