#include "wcf/cli.hpp"

#include "wcf/decompose.hpp"
#include "wcf/errors.hpp"
#include "wcf/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace wcf {

namespace {

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw InputError(std::string("empty entry in ") + what);
        const std::string tok = item.substr(b, e - b + 1);
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || errno == ERANGE || !std::isfinite(v))
            throw InputError(std::string("cannot parse '") + tok + "' in " + what);
        out.push_back(v);
    }
    if (out.empty() && !text.empty()) throw InputError(std::string("empty ") + what);
    return out;
}

void check_increasing(const std::vector<double>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw InputError("coordinates must be strictly increasing");
}

struct Problem {
    std::vector<double> coords;
    PolySpec f;
};

struct Flags {
    std::string coords, roots, weights, eps_sweep, out_path, batch, points, file, demo;
    std::optional<int> power;
    std::optional<double> tol;
    bool json = false;
};

Problem problem_from_flags(const Flags& fl) {
    if (fl.coords.empty()) throw InputError("--coords is required");
    Problem p;
    p.coords = parse_list(fl.coords, "--coords");
    check_increasing(p.coords);
    if (!fl.roots.empty()) p.f.roots = parse_list(fl.roots, "--roots");
    if (fl.power) {
        if (*fl.power < 0) throw InputError("--power must be non-negative");
        p.f.monomial_power = *fl.power;
    }
    return p;
}

Problem problem_from_json(const Json& j) {
    Problem p;
    p.coords = j.at("coords").get<std::vector<double>>();
    check_increasing(p.coords);
    if (j.contains("roots")) p.f.roots = j["roots"].get<std::vector<double>>();
    if (j.contains("power") && !j["power"].is_null()) p.f.monomial_power = j["power"].get<int>();
    return p;
}

SolveConfig solve_config(const Flags& fl) {
    SolveConfig cfg;
    if (fl.tol) {
        if (!(*fl.tol > 0.0)) throw InputError("--tol must be positive");
        cfg.verify.orth_tol = cfg.verify.map_tol = *fl.tol;
    }
    if (!fl.eps_sweep.empty()) {
        cfg.verify.eps_sweep = parse_list(fl.eps_sweep, "--eps-sweep");
        for (std::size_t i = 0; i < cfg.verify.eps_sweep.size(); ++i) {
            if (!(cfg.verify.eps_sweep[i] > 0.0)) throw InputError("eps values must be positive");
            if (i > 0 && !(cfg.verify.eps_sweep[i] < cfg.verify.eps_sweep[i - 1]))
                throw InputError("eps values must be strictly decreasing");
        }
    }
    return cfg;
}

Json problem_json(const Problem& p) {
    Json j = {{"coords", p.coords}, {"roots", p.f.roots}};
    j["power"] = p.f.monomial_power ? Json(*p.f.monomial_power) : Json(nullptr);
    return j;
}

double recombination_residual(const Problem& p, const std::vector<DecompositionTerm>& terms) {
    const Assignment t = lagrange_weights(p.coords, p.f);
    const Assignment r = recombine(terms);
    std::map<double, double> diff;
    for (const auto& pt : t.points()) diff[pt.x] += pt.p;
    for (const auto& pt : r.points()) diff[pt.x] -= pt.p;
    double worst = 0.0;
    for (const auto& [x, d] : diff) worst = std::max(worst, std::fabs(d));
    const double scale = t.max_abs_weight();
    return scale > 0.0 ? worst / scale : worst;
}

constexpr double kRecombinationTol = 1e-10;

// True when a = c b for some c > 0, up to relative 1e-9.
bool positive_multiple(const Assignment& a, const Assignment& b) {
    if (a.size() != b.size() || a.empty()) return false;
    const double c = a.points()[0].p / b.points()[0].p;
    if (!(c > 0.0)) return false;
    const double scale = a.max_abs_weight();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& pa = a.points()[i];
        const auto& pb = b.points()[i];
        if (std::fabs(pa.x - pb.x) > 1e-12 * std::max(1.0, std::fabs(pb.x))) return false;
        if (std::fabs(pa.p - c * pb.p) > 1e-9 * scale) return false;
    }
    return true;
}

// Decomposes, solves every term and packages the result. `pass` is the overall verdict.
Json solve_problem(const Problem& p, const SolveConfig& cfg, std::string_view command, bool& pass) {
    const auto terms = decompose_f_assignment(p.coords, p.f);
    Json sols = Json::array();
    pass = true;
    for (const auto& term : terms) {
        Solution s = solve_term(term, cfg);
        pass = pass && s.certificate.pass;
        sols.push_back({{"term", to_json(term)}, {"solution", to_json(s)}});
    }
    const double rr = recombination_residual(p, terms);
    pass = pass && rr <= kRecombinationTol;
    return {{"schema", kSchemaVersion},
            {"command", command},
            {"problem", problem_json(p)},
            {"assignment", to_json(lagrange_weights(p.coords, p.f))},
            {"recombination_residual", rr},
            {"terms", sols},
            {"verdict", pass ? "pass" : "fail"}};
}

void write_output(const Json& j, const Flags& fl) {
    if (!fl.out_path.empty()) {
        std::ofstream f(fl.out_path);
        if (!f) throw InputError("cannot write " + fl.out_path);
        f << j.dump(2) << '\n';
    }
}

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(3) << x;
    return s.str();
}

void print_terms(const Json& doc, std::ostream& out) {
    out << std::left << std::setw(4) << "#" << std::setw(22) << "kind" << std::setw(4) << "n"
        << std::setw(12) << "alpha" << std::setw(11) << "route" << std::setw(10) << "orth"
        << std::setw(10) << "map" << std::setw(14) << "psd" << "verdict\n";
    int i = 0;
    for (const auto& e : doc["terms"]) {
        const auto& term = e["term"];
        const auto& c = e["solution"]["certificate"];
        std::string psd = c["limit"].get<bool>() ? "C=" + fmt(number_from(c["eps_slope"]))
                                                 : fmt(number_from(c["psd_min_eig"]));
        std::string kind = term["kind"].get<std::string>();
        if (term["kind"] != "f0") kind += " k=" + std::to_string(term["power"].get<int>());
        out << std::setw(4) << ++i << std::setw(22) << kind << std::setw(4) << term["subset"].size()
            << std::setw(12) << fmt(term["alpha"].get<double>()) << std::setw(11)
            << e["solution"]["route"].get<std::string>() << std::setw(10)
            << fmt(number_from(c["orthogonality_residual"])) << std::setw(10)
            << fmt(number_from(c["mapping_residual"])) << std::setw(14) << psd
            << c["verdict"].get<std::string>() << '\n';
    }
    out << "recombination residual " << fmt(doc["recombination_residual"].get<double>()) << ", verdict "
        << doc["verdict"].get<std::string>() << '\n';
}

int cmd_solve(const Flags& fl, std::ostream& out) {
    const SolveConfig cfg = solve_config(fl);
    const Problem p = problem_from_flags(fl);
    bool pass = false;
    const Json doc = solve_problem(p, cfg, "solve", pass);
    write_output(doc, fl);
    if (fl.json)
        out << doc.dump(2) << '\n';
    else
        print_terms(doc, out);
    return pass ? kExitPass : kExitFail;
}

unsigned thread_count() {
    if (const char* env = std::getenv("WCF_FORGE_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(std::min(n, 256L));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_solve_batch(const Flags& fl, std::ostream& out) {
    const SolveConfig cfg = solve_config(fl);
    std::ifstream in(fl.batch);
    if (!in) throw InputError("cannot read " + fl.batch);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);

    std::vector<std::string> results(lines.size());
    std::vector<int> codes(lines.size(), kExitPass);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < lines.size(); i = next++) {
            Json r;
            try {
                const Problem p = problem_from_json(Json::parse(lines[i]));
                bool pass = false;
                r = solve_problem(p, cfg, "solve", pass);
                codes[i] = pass ? kExitPass : kExitFail;
            } catch (const Json::parse_error& e) {
                r = {{"schema", kSchemaVersion}, {"line", i + 1}, {"error", e.what()}};
                codes[i] = kExitBadJson;
            } catch (const Json::exception& e) {
                r = {{"schema", kSchemaVersion}, {"line", i + 1}, {"error", e.what()}};
                codes[i] = kExitBadJson;
            } catch (const InputError& e) {
                r = {{"schema", kSchemaVersion}, {"line", i + 1}, {"error", e.what()}};
                codes[i] = kExitUsage;
            } catch (const std::exception& e) {
                r = {{"schema", kSchemaVersion}, {"line", i + 1}, {"error", e.what()}};
                codes[i] = kExitFail;
            }
            results[i] = r.dump();
        }
    };
    const unsigned n = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max<std::size_t>(lines.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostringstream all;
    for (const auto& r : results) all << r << '\n';
    if (!fl.out_path.empty()) {
        std::ofstream f(fl.out_path);
        if (!f) throw InputError("cannot write " + fl.out_path);
        f << all.str();
    }
    if (fl.json || fl.out_path.empty()) out << all.str();

    int code = kExitPass;
    for (int c : codes) {
        if (c == kExitBadJson) return kExitBadJson;
        if (c == kExitUsage) code = kExitUsage;
        else if (c == kExitFail && code == kExitPass) code = kExitFail;
    }
    return code;
}

int cmd_decompose(const Flags& fl, std::ostream& out) {
    const Problem p = problem_from_flags(fl);
    const auto terms = decompose_f_assignment(p.coords, p.f);
    Json list = Json::array();
    for (const auto& t : terms) list.push_back(to_json(t));
    const double rr = recombination_residual(p, terms);
    const Json doc = {{"schema", kSchemaVersion},
                      {"command", "decompose"},
                      {"problem", problem_json(p)},
                      {"recombination_residual", rr},
                      {"terms", list}};
    write_output(doc, fl);
    if (fl.json) {
        out << doc.dump(2) << '\n';
    } else {
        for (const auto& t : terms) {
            out << to_string(t.kind);
            if (t.kind != TermKind::f0) out << " k=" << t.power;
            out << "  alpha=" << t.alpha << "  subset=";
            for (std::size_t i = 0; i < t.subset.size(); ++i) out << (i ? "," : "") << t.subset[i];
            out << '\n';
        }
        out << "recombination residual " << fmt(rr) << '\n';
    }
    return rr <= kRecombinationTol ? kExitPass : kExitFail;
}

// Rebuilds every instance from the stored term and re-checks the stored O against it.
int cmd_verify(const Flags& fl, std::ostream& out) {
    std::ifstream in(fl.file);
    if (!in) throw InputError("cannot read " + fl.file);
    const Json doc = Json::parse(in);
    const SolveConfig cfg = solve_config(fl);
    const Problem p = problem_from_json(doc.at("problem"));
    std::vector<DecompositionTerm> terms;
    Json report = Json::array();
    bool pass = true;
    for (const auto& e : doc.at("terms")) {
        DecompositionTerm term = term_from_json(e.at("term"));
        const auto& sol = e.at("solution");
        const Assignment t = assignment_from_json(sol.at("assignment"));
        const bool matches = positive_multiple(t, term_base(term));
        const auto [h, g] = split_h_g(t);
        const Shape shape = shape_from_string(sol.at("instance").at("shape").get<std::string>());
        const ExtendedMatrixInstance inst =
            build_instance(h, g, shape, sol.at("instance").value("vector_power", 0.0));
        const Mat O = mat_from_json(sol.at("certificate").at("O"));
        SolutionCertificate c;
        if (matches && O.rows() == inst.H.dim() && O.cols() == inst.G.dim()) {
            c = verify_solution(inst, O, cfg.verify);
        } else {
            c.O = O;
            c.orthogonality_residual = c.mapping_residual = std::numeric_limits<double>::infinity();
        }
        pass = pass && c.pass;
        Json r = {{"kind", to_string(term.kind)},
                  {"power", term.power},
                  {"orthogonality_residual", number(c.orthogonality_residual)},
                  {"mapping_residual", number(c.mapping_residual)},
                  {"psd_min_eig", number(c.psd_min_eig)}};
        if (c.limit) r["eps_slope"] = number(c.eps_slope);
        r["verdict"] = c.pass ? "pass" : "fail";
        report.push_back(r);
        terms.push_back(std::move(term));
    }
    const double rr = recombination_residual(p, terms);
    pass = pass && rr <= kRecombinationTol;
    const Json result = {{"schema", kSchemaVersion},
                         {"command", "verify"},
                         {"recombination_residual", rr},
                         {"terms", report},
                         {"verdict", pass ? "pass" : "fail"}};
    write_output(result, fl);
    if (fl.json) {
        out << result.dump(2) << '\n';
    } else {
        int i = 0;
        for (const auto& r : report)
            out << "term " << ++i << ": " << r["kind"].get<std::string>() << "  orth "
                << fmt(number_from(r["orthogonality_residual"])) << "  map "
                << fmt(number_from(r["mapping_residual"])) << "  " << r["verdict"].get<std::string>() << '\n';
        out << "recombination residual " << fmt(rr) << ", verdict " << (pass ? "pass" : "fail") << '\n';
    }
    return pass ? kExitPass : kExitFail;
}

int cmd_validity(const Flags& fl, std::ostream& out) {
    Assignment t;
    if (!fl.file.empty()) {
        std::ifstream in(fl.file);
        if (!in) throw InputError("cannot read " + fl.file);
        t = assignment_from_json(Json::parse(in));
    } else {
        if (fl.coords.empty()) throw InputError("give an assignment file or --coords");
        const auto xs = parse_list(fl.coords, "--coords");
        if (!fl.weights.empty()) {
            const auto ps = parse_list(fl.weights, "--weights");
            if (ps.size() != xs.size()) throw InputError("--weights and --coords differ in length");
            std::vector<Point> pts;
            for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back({xs[i], ps[i]});
            t = Assignment(std::move(pts));
        } else {
            t = lagrange_weights(xs, problem_from_flags(fl).f);
        }
    }
    GridConfig grid;
    if (fl.tol) {
        if (!(*fl.tol > 0.0)) throw InputError("--tol must be positive");
        grid.tol = *fl.tol;
    }
    const ValidityReport rep = check_validity(t, grid);
    Json doc = {{"schema", kSchemaVersion}, {"command", "validity"}, {"assignment", to_json(t)}};
    doc["report"] = to_json(rep);
    write_output(doc, fl);
    if (fl.json)
        out << doc.dump(2) << '\n';
    else
        out << to_string(rep.verdict) << "  sum residual " << fmt(rep.sum_zero_residual)
            << "  max transfer " << fmt(rep.min_transfer_value) << '\n';
    switch (rep.verdict) {
        case Verdict::valid: return kExitPass;
        case Verdict::inconclusive: return kExitInconclusive;
        case Verdict::invalid: return kExitFail;
    }
    return kExitFail;
}

int cmd_demo(const Flags& fl, std::ostream& out) {
    if (fl.demo != "one-tenth") throw InputError("unknown demo: " + fl.demo);
    const auto args = parse_list(fl.points.empty() ? "0,0.5,1,2,3,4,5,6" : fl.points, "--points");
    const MochonProblem mp = one_tenth_move(args);
    const SolveConfig cfg = solve_config(fl);
    bool pass = false;
    Json doc = solve_problem({mp.coords, mp.f}, cfg, "demo one-tenth", pass);
    write_output(doc, fl);
    if (fl.json) {
        out << doc.dump(2) << '\n';
    } else {
        out << "1/10 move: coords";
        for (double x : mp.coords) out << ' ' << x;
        out << ", roots";
        for (double r : mp.f.roots) out << ' ' << r;
        out << "\n";
        print_terms(doc, out);
    }
    return pass ? kExitPass : kExitFail;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Analytic unitaries for Mochon f-assignments", "wcf_forge"};
    app.require_subcommand(1);
    Flags fl;

    auto add_problem = [&](CLI::App* c) {
        c->add_option("--coords", fl.coords, "comma-separated strictly increasing coordinates");
        c->add_option("--roots", fl.roots, "comma-separated roots of f");
        c->add_option("--power", fl.power, "monomial power m, f(x) = (-x)^m");
    };
    auto add_output = [&](CLI::App* c) {
        c->add_option("--out", fl.out_path, "write the JSON document to this file");
        c->add_flag("--json", fl.json, "print JSON instead of a summary");
    };
    auto add_verify = [&](CLI::App* c) {
        c->add_option("--eps-sweep", fl.eps_sweep, "comma-separated decreasing eps values");
        c->add_option("--tol", fl.tol, "orthogonality and mapping tolerance");
    };

    auto* solve = app.add_subcommand("solve", "decompose, solve and certify an f-assignment");
    add_problem(solve);
    add_output(solve);
    add_verify(solve);
    solve->add_option("--batch", fl.batch, "newline-delimited JSON problems");

    auto* decompose = app.add_subcommand("decompose", "positive decomposition into solvable terms");
    add_problem(decompose);
    add_output(decompose);

    auto* verify = app.add_subcommand("verify", "re-check a solve document");
    verify->add_option("file", fl.file, "JSON written by solve")->required();
    add_output(verify);
    add_verify(verify);

    auto* validity = app.add_subcommand("validity", "grid check of the validity conditions");
    validity->add_option("file", fl.file, "assignment JSON");
    add_problem(validity);
    validity->add_option("--weights", fl.weights, "comma-separated weights for --coords");
    validity->add_option("--tol", fl.tol, "transfer-value tolerance");
    add_output(validity);

    auto* demo = app.add_subcommand("demo", "worked examples");
    demo->add_option("name", fl.demo, "one-tenth")->required();
    demo->add_option("--points", fl.points, "x0,l1,x1,x2,x3,x4,r1,r2");
    add_output(demo);
    add_verify(demo);

    std::vector<const char*> argv{"wcf_forge"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (solve->parsed()) return fl.batch.empty() ? cmd_solve(fl, out) : cmd_solve_batch(fl, out);
        if (decompose->parsed()) return cmd_decompose(fl, out);
        if (verify->parsed()) return cmd_verify(fl, out);
        if (validity->parsed()) return cmd_validity(fl, out);
        if (demo->parsed()) return cmd_demo(fl, out);
    } catch (const Json::exception& e) {
        err << "error: malformed JSON: " << e.what() << '\n';
        return kExitBadJson;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}

}  // namespace wcf
