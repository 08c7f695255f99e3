#pragma once

// Verification driver producing the machine-readable report. Everything in
// the document is deterministic for fixed inputs and flags except the
// "timing_ms" object, which consumers must ignore when comparing runs.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "construct.hpp"
#include "family_io.hpp"
#include "verify.hpp"

namespace diffset {

struct VerifyOptions {
    bool intersecting = false;
    bool coverage = false;
    bool bounds = false;
    bool sunflower_equiv = false;
    int jmax = -1;  // default: k-1
    unsigned threads = 1;
    std::string command_echo;
    std::string family_id;

    static VerifyOptions all() {
        VerifyOptions o;
        o.intersecting = o.coverage = o.bounds = o.sunflower_equiv = true;
        return o;
    }
};

struct VerificationReport {
    nlohmann::ordered_json doc;
    bool all_pass = true;
};

namespace detail {

inline nlohmann::ordered_json json_set(ESet s) { return nlohmann::ordered_json(to_elements(s)); }

class StopWatch {
public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

inline VerificationReport run_verification(const Family& f, const VerifyOptions& opt) {
    VerificationReport rep;
    auto& doc = rep.doc;
    doc["schema"] = "report/1";
    doc["command"] = opt.command_echo;
    doc["family"] = {{"id", opt.family_id}, {"kind", f.kind}, {"n", f.n}, {"k", f.k}, {"size", f.sets.size()}};
    doc["checks"] = nlohmann::ordered_json::object();
    nlohmann::ordered_json timing = nlohmann::ordered_json::object();

    std::optional<CheckResult> inter;
    if (opt.intersecting || (opt.coverage && f.n == 2 * f.k)) {
        detail::StopWatch sw;
        inter = is_intersecting(f, opt.threads);
        timing["intersecting"] = sw.ms();
    }
    if (opt.intersecting) {
        nlohmann::ordered_json c;
        c["pass"] = inter->pass;
        if (!inter->pass)
            c["counterexample"] = {{"f1", detail::json_set(inter->counterexample->f1)},
                                   {"f2", detail::json_set(inter->counterexample->f2)}};
        rep.all_pass = rep.all_pass && inter->pass;
        doc["checks"]["intersecting"] = std::move(c);
    }

    std::optional<DiffSet> dset;
    auto ensure_dset = [&] {
        if (!dset) dset.emplace(difference_set(f, opt.threads));
    };

    if (opt.coverage) {
        detail::StopWatch sw;
        ensure_dset();
        int jmax = opt.jmax >= 0 ? opt.jmax : f.k - 1;
        CoverageReport cov = check_layer_coverage(f, *dset, jmax);
        // On paired ground sets an intersecting family must not realize any
        // difference of size >= k, so fold that into the verdict there.
        bool enforce_oversize = (f.n == 2 * f.k) && inter && inter->pass;
        bool pass = cov.all_covered && (!enforce_oversize || cov.oversize_free);
        nlohmann::ordered_json c;
        c["pass"] = pass;
        c["jmax"] = jmax;
        c["diff_size"] = cov.diff_size;
        auto layers = nlohmann::ordered_json::array();
        for (const LayerCoverage& lc : cov.layers) {
            nlohmann::ordered_json l{{"j", lc.j}, {"covered", lc.covered}, {"total", lc.total}};
            if (lc.first_uncovered) l["first_uncovered"] = detail::json_set(*lc.first_uncovered);
            layers.push_back(std::move(l));
        }
        c["layers"] = std::move(layers);
        c["oversize_free"] = cov.oversize_free;
        if (cov.oversize_example) c["oversize_example"] = detail::json_set(*cov.oversize_example);
        rep.all_pass = rep.all_pass && pass;
        doc["checks"]["coverage"] = std::move(c);
        timing["coverage"] = sw.ms();
    }

    if (opt.bounds) {
        detail::StopWatch sw;
        BoundsReport b = classical_bounds(f, opt.threads);
        nlohmann::ordered_json c;
        c["pass"] = b.pass;
        c["family_size"] = b.family_size;
        c["diff_size"] = b.diff_size;
        c["lower_ok"] = b.lower_ok;
        c["intersecting"] = b.intersecting;
        c["upper"] = b.upper;
        c["upper_ok"] = b.upper_ok;
        rep.all_pass = rep.all_pass && b.pass;
        doc["checks"]["bounds"] = std::move(c);
        timing["bounds"] = sw.ms();
    }

    if (opt.sunflower_equiv) {
        detail::StopWatch sw;
        ensure_dset();
        SunflowerEquivReport s = check_sunflower_equivalence(f, *dset);
        nlohmann::ordered_json c;
        c["pass"] = s.pass;
        if (s.mismatch) c["mismatch"] = detail::json_set(*s.mismatch);
        rep.all_pass = rep.all_pass && s.pass;
        doc["checks"]["sunflower_equiv"] = std::move(c);
        timing["sunflower_equiv"] = sw.ms();
    }

    doc["witnesses"] = nlohmann::ordered_json::array();
    doc["all_pass"] = rep.all_pass;
    doc["timing_ms"] = std::move(timing);
    return rep;
}

inline void write_report(const VerificationReport& rep, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    out << rep.doc.dump(2) << "\n";
}

}  // namespace diffset
