// diffset: build the constructed families, verify their claimed properties
// with brute-force checks, print difference witnesses, and run the
// desk-scale exhaustive searches.
//
// Exit codes: 0 success / checks passed, 1 a check failed or no witness,
// 2 I/O, parse or usage error, 3 scale guard refusal.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diffset/construct.hpp"
#include "diffset/family_io.hpp"
#include "diffset/ground.hpp"
#include "diffset/report.hpp"
#include "diffset/verify.hpp"
#include "diffset/witness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitIo = 2;
constexpr int kExitScaleGuard = 3;

diffset::ESet parse_set(const std::string& csv, int n) {
    diffset::ESet s;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int v;
        try {
            std::size_t pos = 0;
            v = std::stoi(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw diffset::ParseError("--set: bad element '" + item + "'");
        }
        if (v < 0 || v >= n)
            throw diffset::ParseError("--set: element " + std::to_string(v) + " outside ground set of size " +
                                      std::to_string(n));
        s = s.with(v);
    }
    return s;
}

std::string join_args(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        out += argv[i];
    }
    return out;
}

struct BuildArgs {
    std::string construction;
    int k = 0;
    int lift = 1;
    std::string out;
    std::string format = "json";
    unsigned threads = 0;
};

int run_build(const BuildArgs& a) {
    diffset::Family f;
    if (a.construction == "fano") {
        if (a.k != 0 && a.k != 3) throw diffset::ParseError("build: the Fano family has k = 3");
        f = diffset::fano_family();
    } else if (a.construction == "odd") {
        if (a.k < 3 || a.k % 2 == 0) throw diffset::ParseError("build: odd construction needs odd --k >= 3");
        f = diffset::odd_family(diffset::GroundSet(a.k));
    } else {
        if (a.k < 4 || a.k % 2 != 0) throw diffset::ParseError("build: even construction needs even --k >= 4");
        diffset::BuildOptions opt;
        opt.threads = diffset::resolve_threads(a.threads);
        f = diffset::even_family(diffset::GroundSet(a.k), opt);
    }
    if (a.lift > 1) f = diffset::t_lift(f, a.lift);
    diffset::write_family(f, a.out, a.format);
    std::cout << "wrote " << f.sets.size() << " sets (kind=" << f.kind << ", n=" << f.n << ", k=" << f.k << ") to "
              << a.out << "\n";
    return kExitOk;
}

struct VerifyArgs {
    std::string family;
    std::string checks = "all";
    int jmax = -1;
    std::string report;
    unsigned threads = 0;
    std::string command_echo;
};

int run_verify(const VerifyArgs& a) {
    diffset::Family f = diffset::read_family(a.family);
    diffset::VerifyOptions opt;
    opt.jmax = a.jmax;
    opt.threads = diffset::resolve_threads(a.threads);
    opt.command_echo = a.command_echo;
    opt.family_id = a.family;
    std::stringstream ss(a.checks);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "all")
            opt.intersecting = opt.coverage = opt.bounds = opt.sunflower_equiv = true;
        else if (item == "intersecting")
            opt.intersecting = true;
        else if (item == "coverage")
            opt.coverage = true;
        else if (item == "bounds")
            opt.bounds = true;
        else if (item == "sunflower-equiv")
            opt.sunflower_equiv = true;
        else if (!item.empty())
            throw diffset::ParseError("verify: unknown check '" + item + "'");
    }
    diffset::VerificationReport rep = diffset::run_verification(f, opt);
    for (const auto& [name, check] : rep.doc["checks"].items())
        std::cout << name << ": " << (check["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
    if (!a.report.empty()) diffset::write_report(rep, a.report);
    return rep.all_pass ? kExitOk : kExitCheckFailed;
}

struct WitnessArgs {
    std::string family;
    std::string set_csv;
    bool one_based = false;
    std::string report;
};

int run_witness(const WitnessArgs& a) {
    diffset::Family f = diffset::read_family(a.family);
    diffset::ESet x = parse_set(a.set_csv, f.n);
    if (x.size() >= f.k) throw diffset::ParseError("witness: |X| must be smaller than k");
    const int off = a.one_based ? 1 : 0;
    auto w = diffset::witness_any(f, x);
    if (w) {
        // Independent of how the pair was produced, re-check it against the
        // brute-force definition before printing.
        if (!(w->f1.minus(w->f2) == x) || !f.contains(w->f1) || !f.contains(w->f2))
            throw std::logic_error("witness: produced pair failed self-check");
    } else {
        auto o = diffset::witness_oracle(f, x);
        if (o) throw std::logic_error("witness: dispatcher missed a covered set");
    }
    if (!a.report.empty()) {
        nlohmann::ordered_json doc;
        doc["schema"] = "report/1";
        doc["command"] = "witness";
        doc["family"] = {{"id", a.family}, {"kind", f.kind}, {"n", f.n}, {"k", f.k}, {"size", f.sets.size()}};
        doc["checks"] = nlohmann::ordered_json::object();
        auto witnesses = nlohmann::ordered_json::array();
        nlohmann::ordered_json entry;
        entry["x"] = diffset::to_elements(x);
        entry["found"] = static_cast<bool>(w);
        if (w) {
            entry["f1"] = diffset::to_elements(w->f1);
            entry["f2"] = diffset::to_elements(w->f2);
        }
        witnesses.push_back(std::move(entry));
        doc["witnesses"] = std::move(witnesses);
        doc["all_pass"] = static_cast<bool>(w);
        doc["timing_ms"] = nlohmann::ordered_json::object();
        diffset::VerificationReport rep{std::move(doc), static_cast<bool>(w)};
        diffset::write_report(rep, a.report);
    }
    std::cout << "X  = " << diffset::to_string(x, off) << "\n";
    if (!w) {
        std::cout << "NotCovered\n";
        return kExitCheckFailed;
    }
    std::cout << "F1 = " << diffset::to_string(w->f1, off) << "\n";
    std::cout << "F2 = " << diffset::to_string(w->f2, off) << "\n";
    return kExitOk;
}

struct SearchArgs {
    std::string kind;
    int k = 0;
    int n = 0;
    bool fano_tightness = false;
};

int run_search(const SearchArgs& a) {
    if (a.kind == "diffdesign") {
        auto fam = diffset::search_diffdesign(a.k, a.n);
        if (!fam) {
            std::cout << "NoFamily (exhaustive, k=" << a.k << ", n=" << a.n << ")\n";
            return kExitOk;
        }
        std::cout << "found a difference design, which contradicts the expected theorem:\n";
        for (diffset::ESet s : fam->sets) std::cout << "  " << diffset::to_string(s) << "\n";
        return kExitCheckFailed;
    }
    if (a.kind != "frontier") throw diffset::ParseError("search: unknown kind '" + a.kind + "'");
    if (a.fano_tightness) {
        if (a.k != 3 || a.n != 7)
            throw diffset::ParseError("search frontier --fano-tightness: expects --k 3 --n 7");
        diffset::Family fano = diffset::fano_family();
        bool inter = diffset::is_intersecting(fano).pass;
        diffset::DiffSet d = diffset::difference_set(fano);
        bool covered = true;
        for (diffset::ESet x : diffset::enumerate_subsets(7, 2))
            if (!d.contains(x)) covered = false;
        if (inter && covered) {
            std::cout << "pass: the n = 3k-2 frontier is tight at k=3 (Fano covers the whole (k-1)-layer)\n";
            return kExitOk;
        }
        std::cout << "FAIL: Fano tightness check\n";
        return kExitCheckFailed;
    }
    auto fam = diffset::check_3k2_frontier(a.k, a.n);
    if (!fam) {
        std::cout << "NoFamily (exhaustive, k=" << a.k << ", n=" << a.n << ")\n";
        return kExitOk;
    }
    std::cout << "found a fully covering family:\n";
    for (diffset::ESet s : fam->sets) std::cout << "  " << diffset::to_string(s) << "\n";
    return kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"intersecting k-uniform families with full lower-layer difference sets"};
    app.require_subcommand(1);

    BuildArgs b;
    auto* build = app.add_subcommand("build", "construct a family and write it to a file");
    build->add_option("--construction", b.construction, "odd | even | fano")
        ->required()
        ->check(CLI::IsMember({"odd", "even", "fano"}));
    build->add_option("--k", b.k, "set size k");
    build->add_option("--lift", b.lift, "t-lift the family (t >= 1)");
    build->add_option("--out", b.out, "output path")->required();
    build->add_option("--format", b.format, "json | hex")->check(CLI::IsMember({"json", "hex"}));
    build->add_option("--threads", b.threads, "worker threads (0 = auto)");

    VerifyArgs v;
    auto* verify = app.add_subcommand("verify", "run brute-force checks on a family file");
    verify->add_option("family", v.family, "family file")->required();
    verify->add_option("--checks", v.checks, "csv of intersecting,coverage,bounds,sunflower-equiv,all");
    verify->add_option("--jmax", v.jmax, "largest layer checked for coverage (default k-1)");
    verify->add_option("--report", v.report, "write a JSON report here");
    verify->add_option("--threads", v.threads, "worker threads (0 = auto)");

    WitnessArgs w;
    auto* witness = app.add_subcommand("witness", "produce F1, F2 with F1 \\ F2 = X");
    witness->add_option("family", w.family, "family file")->required();
    witness->add_option("--set", w.set_csv, "comma-separated elements of X")->required();
    witness->add_flag("--one-based", w.one_based, "display elements 1-based");
    witness->add_option("--report", w.report, "write a JSON report here");

    SearchArgs s;
    auto* search = app.add_subcommand("search", "desk-scale exhaustive searches");
    search->add_option("kind", s.kind, "diffdesign | frontier")->required();
    search->add_option("--k", s.k, "set size k")->required();
    search->add_option("--n", s.n, "ground set size n")->required();
    search->add_flag("--fano-tightness", s.fano_tightness, "check tightness at k=3, n=7 via the Fano family");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitIo;
    }

    v.command_echo = join_args(argc, argv);
    try {
        if (build->parsed()) return run_build(b);
        if (verify->parsed()) return run_verify(v);
        if (witness->parsed()) return run_witness(w);
        if (search->parsed()) return run_search(s);
        return kExitIo;
    } catch (const diffset::ScaleGuardError& e) {
        std::cerr << "scale guard: " << e.what() << "\n";
        return kExitScaleGuard;
    } catch (const diffset::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
