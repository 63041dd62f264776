#pragma once

#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsirelson/tsirelson.hpp"

namespace tsirelson::cli {

enum class Format { text, json, csv };

enum ExitCode : int { ok = 0, failure = 1, usage = 2 };

struct Options {
    Format format = Format::text;
    unsigned threads = 0;
    std::vector<std::string> families;
    std::string set;
    std::string vector;
    std::string decomposition = "schreier";
    std::string suite = "all";
    Index a = 1;
    std::size_t d = 1;
    std::uint64_t n = 1;
    std::uint64_t n_min = 1;
    std::uint64_t n_max = 100;
    std::uint64_t step = 1;
    std::size_t max_span = 400;
    std::uint64_t bit_budget = default_bit_budget;
    std::size_t samples = 0;
    std::uint64_t seed = SampleOptions{}.seed;
    bool emit_vector = false;
    bool show_functional = false;
};

namespace detail {

inline RegularFamily single_family(const Options& o) {
    if (o.families.size() != 1) throw ParseError("exactly one --family is required");
    return RegularFamily::parse(o.families.front());
}

inline void emit(std::ostream& out, Format f, const std::vector<Json>& rows, const std::string& text) {
    if (f == Format::json) out << (rows.size() == 1 ? rows.front() : Json(rows)).dump(2) << "\n";
    else if (f == Format::csv) out << to_csv(rows);
    else out << text;
}

inline int cmd_member(const Options& o, std::ostream& out) {
    auto fam = single_family(o);
    auto f = FiniteSet::parse(o.set);
    const bool in = member(fam, f);
    emit(out, o.format, {Json{{"family", fam.name()}, {"set", f.to_string()}, {"member", in}}}, in ? "true\n" : "false\n");
    return ok;
}

inline int cmd_range(const Options& o, std::ostream& out) {
    auto fam = single_family(o);
    if (o.a < 1) throw ParseError("--a must be positive");
    const auto r = range(fam, o.a, o.bit_budget).str();
    emit(out, o.format, {Json{{"family", fam.name()}, {"a", o.a}, {"range", r}}}, r + "\n");
    return ok;
}

inline int cmd_decompose(const Options& o, std::ostream& out) {
    auto f = FiniteSet::parse(o.set);
    std::vector<FiniteSet> blocks;
    if (o.decomposition == "schreier") blocks = decompose_schreier(f);
    else if (o.decomposition == "s2") blocks = decompose_s2(f);
    else throw ParseError("--kind must be schreier or s2");
    std::vector<Json> rows;
    std::string text;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        rows.push_back(Json{{"block", i + 1}, {"set", blocks[i].to_string()}});
        text += (i ? " | " : "") + blocks[i].to_string();
    }
    if (o.format == Format::json) {
        Json arr = Json::array();
        for (const auto& b : blocks) arr.push_back(b.to_string());
        out << Json{{"set", f.to_string()}, {"kind", o.decomposition}, {"blocks", arr}}.dump(2) << "\n";
        return ok;
    }
    emit(out, o.format, rows, text + "\n");
    return ok;
}

inline int cmd_norm(const Options& o, std::ostream& out) {
    auto fam = single_family(o);
    auto x = Vector::parse(o.vector);
    NormEngine eng(fam, x, NormOptions{o.threads, o.max_span});
    const auto& r = eng.result();
    const auto fn = eng.realizing_functional();
    std::string text = "norm=" + r.value.to_string() + " j=" + std::to_string(r.j) + "\n";
    if (o.show_functional) text += "functional=" + fn.to_string() + "\n";
    emit(out, o.format,
         {Json{{"family", fam.name()},
               {"vector", x.to_string()},
               {"norm", r.value.to_string()},
               {"j", r.j},
               {"stable_level", r.stable_level},
               {"functional", fn.to_string()}}},
         text);
    return ok;
}

inline int cmd_witness(const Options& o, std::ostream& out) {
    auto fam = single_family(o);
    auto cert = certify_witness(fam, o.d, NormOptions{o.threads, o.max_span});
    const std::string certified = "certified j ≥ " + std::to_string(o.d) + "\n";
    std::string text;
    if (o.emit_vector) {
        text = cert.x.to_string() + "\n" + certified;
    } else {
        for (std::size_t i = 0; i < cert.chain.sets.size(); ++i)
            text += "F" + std::to_string(i + 1) + "=" + cert.chain.sets[i].to_string() + " anchors=(" +
                    std::to_string(cert.chain.anchors_a[i]) + "," + std::to_string(cert.chain.anchors_b[i]) + ")\n";
        text += "vector=" + cert.x.to_string() + "\nnorm=" + cert.norm_value.to_string() + " j=" + std::to_string(cert.depth) + "\n" +
                certified;
    }
    Json j = to_json(cert);
    if (o.format == Format::csv) {
        Json anchors = Json::array();
        for (const auto& a : j["anchors"]) anchors.push_back(std::to_string(a["a"].get<Index>()) + ":" + std::to_string(a["b"].get<Index>()));
        j["anchors"] = anchors;
    }
    emit(out, o.format, {j}, text);
    return ok;
}

inline Json bound_row(const BoundReport& r, Format f) {
    if (f != Format::csv) return to_json(r);
    return Json{{"n", r.n}, {"lower", r.lower}, {"upper", r.upper}, {"hat_j", r.hat_j ? Json(*r.hat_j) : Json(nullptr)}};
}

inline std::string bound_text(const BoundReport& r) {
    std::string s = "n=" + std::to_string(r.n) + " lower=" + std::to_string(r.lower) + " upper=" + std::to_string(r.upper);
    if (r.hat_j) s += " hat_j=" + std::to_string(*r.hat_j);
    return s + "\n";
}

inline int cmd_bounds(const Options& o, std::ostream& out) {
    auto fam = single_family(o);
    if (o.n < 1) throw ParseError("--n must be positive");
    auto r = bound_report(fam, o.n);
    emit(out, o.format, {bound_row(r, o.format)}, bound_text(r));
    return ok;
}

inline int cmd_table(const Options& o, std::ostream& out) {
    auto fam = single_family(o);
    if (o.n_min < 1 || o.n_max < o.n_min || o.step < 1) throw ParseError("table needs 1 <= --n-min <= --n-max and --step >= 1");
    std::vector<Json> rows;
    std::ostringstream text;
    text << std::setw(10) << "n" << std::setw(8) << "lower" << std::setw(8) << "upper" << std::setw(8) << "hat_j" << "\n";
    for (std::uint64_t n = o.n_min; n <= o.n_max; n += o.step) {
        auto r = bound_report(fam, n);
        rows.push_back(bound_row(r, o.format));
        text << std::setw(10) << r.n << std::setw(8) << r.lower << std::setw(8) << r.upper << std::setw(8)
             << (r.hat_j ? std::to_string(*r.hat_j) : "-") << "\n";
        if (o.n_max - n < o.step) break;
    }
    if (o.format == Format::json) {
        out << Json(rows).dump(2) << "\n";
        return ok;
    }
    if (o.format == Format::csv && rows.empty()) {
        out << "n,lower,upper,hat_j\n";
        return ok;
    }
    emit(out, o.format, rows, text.str());
    return ok;
}

inline std::vector<ScanReport> run_suite(const RegularFamily& fam, const Options& o) {
    const bool ks1 = fam.kind() == RegularFamily::Kind::ks1;
    const bool s2 = fam.kind() == RegularFamily::Kind::s2;
    SampleOptions so;
    so.threads = o.threads;
    so.seed = o.seed;
    const std::string& s = o.suite;
    std::vector<ScanReport> out;
    if (s == "all") {
        out = default_suite(fam, o.threads);
    } else if (s == "insertion") {
        out.push_back(insertion_scan(fam, ks1 ? 40 : s2 ? 20 : 25));
    } else if (s == "strong") {
        out.push_back(strong_scan(fam, 25));
    } else if (s == "full-set") {
        out = full_set_lemma_suite(fam, s2 ? 24 : ks1 ? 40 : 30);
    } else if (s == "force-star") {
        so.samples = o.samples ? o.samples : 200;
        out.push_back(force_star_scan(fam, so));
    } else if (s == "soundness") {
        so.samples = o.samples ? o.samples : 500;
        out.push_back(engine_soundness_scan(fam, so));
    } else if (s == "hatj") {
        if (fam.kind() == RegularFamily::Kind::sphi) {
            out.push_back(hatj_property_scan(fam.phi(), 40, 80, 10));
            out.push_back(hatj_upper_scan(fam.phi(), 300));
        }
    } else if (s == "sandwich") {
        out.push_back(sandwich_report(fam, 1000000));
    } else {
        throw ParseError("unknown suite '" + s + "'");
    }
    return out;
}

inline int cmd_check(const Options& o, std::ostream& out) {
    std::vector<RegularFamily> fams;
    if (o.families.empty()) fams = tsirelson::detail::built_in_families();
    for (const auto& f : o.families) fams.push_back(RegularFamily::parse(f));
    std::vector<Json> rows;
    std::ostringstream text;
    bool all_pass = true;
    for (const auto& fam : fams) {
        for (const auto& rep : run_suite(fam, o)) {
            all_pass = all_pass && rep.passed();
            Json j{{"family", fam.name()}};
            j.update(to_json(rep));
            if (o.format == Format::csv) j.erase("violations");
            rows.push_back(j);
            text << (rep.passed() ? "PASS " : "FAIL ") << fam.name() << " " << rep.suite << " " << rep.universe << " cases=" << rep.cases
                 << " violations=" << rep.violation_count << (rep.expect_violations ? " (violations expected)" : "") << "\n";
            for (std::size_t i = 0; i < std::min<std::size_t>(rep.violations.size(), 3); ++i) text << "  " << rep.violations[i] << "\n";
        }
    }
    if (o.format == Format::json) out << Json(rows).dump(2) << "\n";
    else emit(out, o.format, rows, text.str());
    return all_pass ? ok : failure;
}

}  // namespace detail

// Parses args (without the program name), runs one command and returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact computations for Tsirelson-type norms over regular families", "tsirelson-cli"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    const std::map<std::string, Format> formats{{"text", Format::text}, {"json", Format::json}, {"csv", Format::csv}};
    app.add_option("--format", o.format, "Output format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    app.add_option("--threads", o.threads, "Worker threads (0: available parallelism)");

    auto family = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--family", o.families, "s1 | sphi:poly:<p> | sphi:exp:<b> | ks1:<k> | s2 | s3");
        if (required) opt->required();
    };
    auto* member_cmd = app.add_subcommand("member", "Membership of a set literal");
    family(member_cmd, true);
    member_cmd->add_option("--set", o.set, "Set literal, e.g. 2,99,100-199")->required();

    auto* range_cmd = app.add_subcommand("range", "Largest m with [a, m-1] in the family");
    family(range_cmd, true);
    range_cmd->add_option("--a", o.a)->required();
    range_cmd->add_option("--bit-budget", o.bit_budget, "Bit budget for tower-sized ranges");

    auto* decompose_cmd = app.add_subcommand("decompose", "Greedy block decomposition");
    decompose_cmd->add_option("--set", o.set)->required();
    decompose_cmd->add_option("--kind", o.decomposition, "schreier | s2");

    auto* norm_cmd = app.add_subcommand("norm", "Exact norm and depth of a vector");
    family(norm_cmd, true);
    norm_cmd->add_option("--vector", o.vector, "Vector literal, e.g. 3:8,4:1,8:8")->required();
    norm_cmd->add_option("--max-span", o.max_span, "Largest coordinate span accepted by the engine");
    norm_cmd->add_flag("--functional", o.show_functional, "Also print a realizing functional");

    auto* witness_cmd = app.add_subcommand("witness", "Certified depth witness");
    family(witness_cmd, true);
    witness_cmd->add_option("--d", o.d)->required()->check(CLI::PositiveNumber);
    witness_cmd->add_option("--max-span", o.max_span);
    witness_cmd->add_flag("--emit-vector", o.emit_vector, "Print only the vector literal and the certified depth");

    auto* bounds_cmd = app.add_subcommand("bounds", "Lower and upper bounds on j(n)");
    family(bounds_cmd, true);
    bounds_cmd->add_option("--n", o.n)->required();

    auto* table_cmd = app.add_subcommand("table", "Bound rows over a range of n");
    family(table_cmd, true);
    table_cmd->add_option("--n-min", o.n_min);
    table_cmd->add_option("--n-max", o.n_max);
    table_cmd->add_option("--step", o.step);

    auto* check_cmd = app.add_subcommand("check", "Run verification suites");
    family(check_cmd, false);
    check_cmd->add_option("--suite", o.suite, "all | insertion | strong | full-set | force-star | soundness | hatj | sandwich");
    check_cmd->add_option("--samples", o.samples, "Sample count for sampled suites");
    check_cmd->add_option("--seed", o.seed, "Seed for sampled suites");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    }

    try {
        if (*member_cmd) return detail::cmd_member(o, out);
        if (*range_cmd) return detail::cmd_range(o, out);
        if (*decompose_cmd) return detail::cmd_decompose(o, out);
        if (*norm_cmd) return detail::cmd_norm(o, out);
        if (*witness_cmd) return detail::cmd_witness(o, out);
        if (*bounds_cmd) return detail::cmd_bounds(o, out);
        if (*table_cmd) return detail::cmd_table(o, out);
        if (*check_cmd) return detail::cmd_check(o, out);
    } catch (const ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const ConstraintError& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const PreconditionError& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << "\nhint: raise --max-span or --bit-budget, or choose a smaller instance\n";
        return failure;
    } catch (const VerificationError& e) {
        err << "verification failed: " << e.what() << "\n";
        return failure;
    }
    return usage;
}

}  // namespace tsirelson::cli
