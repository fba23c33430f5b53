// Command-line front end. Every subcommand prints one JSON report to stdout
// (or --out); timing goes to stderr so reports stay byte-identical for a
// fixed seed. Exit codes: 0 success, 1 usage or validation, 2 cross-check
// failure, 3 unsupported geometric spectrum, 4 span shortfall, 5 overflow,
// 6 any other library error.

#include <CLI11.hpp>

#include <uqcoh/json_io.hpp>
#include <uqcoh/pipeline.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace uqcoh;
using cocycle::OneCocycle;
using reps::RepPtr;

namespace {

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::CrossCheckFailed: return 2;
        case ErrorCode::UnsupportedGPCase: return 3;
        case ErrorCode::SpanShortfall: return 4;
        case ErrorCode::Overflow: return 5;
        default: return 6;
    }
}

int emit(const io::Json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    std::ofstream f(out_path);
    if (!f) {
        std::fprintf(stderr, "error: cannot open %s for writing\n", out_path.c_str());
        return 1;
    }
    f << text;
    return f.good() ? 0 : 1;
}

// Flat key=value overrides, '#' starts a comment. Returns an error message
// or an empty string.
std::string load_config(const std::string& path, pipeline::PipelineConfig& cfg) {
    std::ifstream f(path);
    if (!f) return "cannot read config file " + path;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string entry = strip(line);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            return "line " + std::to_string(lineno) + ": expected key=value";
        const std::string key = strip(entry.substr(0, eq));
        const std::string val = strip(entry.substr(eq + 1));
        try {
            if (key == "tail_tol")
                cfg.tail_tol = std::stod(val);
            else if (key == "truncation_cap")
                cfg.truncation_cap = std::stoi(val);
            else if (key == "seed")
                cfg.seed = std::stoull(val);
            else if (key == "max_samples")
                cfg.max_samples = std::stoi(val);
            else if (key == "sv_tol")
                cfg.sv_tol = std::stod(val);
            else if (key == "gp_tol")
                cfg.gp_tol = std::stod(val);
            else if (key == "trace_tol")
                cfg.trace_tol = std::stod(val);
            else
                return "line " + std::to_string(lineno) + ": unknown key " + key;
        } catch (const std::exception&) {
            return "line " + std::to_string(lineno) + ": bad value for " + key;
        }
    }
    return "";
}

double max_off_block(const OneCocycle& c) {
    const auto& s = c.rep->S;
    double worst = 0;
    for (int j = 0; j < c.rep->d; ++j)
        for (int k = 0; k < c.rep->d; ++k)
            if (!s.same_block(j, k)) worst = std::max(worst, c.V(j, k).norm());
    return worst;
}

io::Json kernel_summary(const cocycle::SolveResult& sol) {
    io::Json j;
    j["dimension"] = static_cast<int>(sol.basis.size());
    j["gap"] = io::gap_json(sol.gap);
    j["singular_values"] = io::to_json(sol.singular_values);
    double residual = 0, off = 0;
    for (const auto& b : sol.basis) {
        residual = std::max(residual, cocycle::verify(b).max());
        off = std::max(off, max_off_block(b));
    }
    j["max_identity_residual"] = residual;
    j["max_off_block"] = off;
    return j;
}

int run_h1(const std::vector<double>& qdiag, double sv_tol, const std::string& out) {
    const auto s = spectrum::build(qdiag);
    const auto sol = cocycle::solve_space(reps::epsilon(s), sv_tol);
    const int closed_form = s.sum_mult_squares();
    require(static_cast<int>(sol.basis.size()) == closed_form, ErrorCode::CrossCheckFailed,
            "kernel dimension disagrees with the closed form");
    io::Json j = io::report_envelope("h1");
    j["spectrum"] = io::to_json(s);
    j["result"] = kernel_summary(sol);
    j["result"]["closed_form"] = closed_form;
    return emit(j, out);
}

int run_h2(const std::vector<double>& qdiag, const pipeline::PipelineConfig& cfg,
           const std::string& out) {
    const auto s = spectrum::build(qdiag);
    const auto dim = pipeline::h2_dimension(s, cfg.gp_tol);
    io::Json j = io::report_envelope("h2");
    j["spectrum"] = io::to_json(s);
    j["config"] = io::to_json(cfg);
    if (dim.status == pipeline::H2Status::UnsupportedGPCase) {
        pipeline::H2Result res;
        res.status = dim.status;
        j["result"] = io::to_json(res);
        const int rc = emit(j, out);
        return rc != 0 ? rc : 3;
    }
    const auto res = pipeline::assemble_basis(s, cfg);
    const auto ind = pipeline::verify_independence(res, s, cfg.trace_tol);
    j["result"] = io::to_json(res);
    j["independence"] = io::to_json(ind);
    return emit(j, out);
}

int run_recurrence(double q, double a, double b, int k_max, const std::string& csv,
                   const std::string& out) {
    const recurrence::RecurrenceParams pr{q, a, b};
    const auto r = recurrence::run_recurrence(pr, k_max);
    io::Json j = io::report_envelope("recurrence");
    io::Json params;
    params["q"] = q;
    params["a"] = a;
    params["b"] = b;
    params["k_max"] = k_max;
    j["params"] = std::move(params);
    j["identity_residual"] = r.identity_residual;
    j["square_summable"] = recurrence::is_square_summable(pr);
    j["g_last"] = r.g.back();
    j["b_last"] = r.b.back();
    try {
        const auto lim = recurrence::ratio_limit(pr);
        io::Json ratio;
        ratio["estimate"] = lim.estimate;
        ratio["k_reached"] = lim.k_reached;
        j["ratio"] = std::move(ratio);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergenceWithinBudget) throw;
        j["ratio"] = nullptr;  // quotients did not settle within the budget
    }
    if (!csv.empty()) {
        std::ofstream f(csv);
        if (!f) {
            std::fprintf(stderr, "error: cannot open %s for writing\n", csv.c_str());
            return 1;
        }
        f << "k,b,ratio,g\n";
        f.precision(17);
        for (std::size_t k = 0; k < r.b.size(); ++k) {
            f << k << ',' << r.b[k] << ',';
            if (k > 0 && r.b[k - 1] != 0.0) f << r.b[k] / r.b[k - 1];
            f << ',' << r.g[k] << '\n';
        }
        if (!f.good()) return 1;
    }
    return emit(j, out);
}

int run_verify_rep(const std::string& kind, const std::vector<double>& qdiag, int m, int carrier,
                   std::uint64_t seed, const std::string& out) {
    RepPtr rep;
    if (kind == "epsilon") {
        rep = reps::epsilon(spectrum::build(qdiag));
    } else if (kind == "random") {
        rep = reps::random_block_unitary(spectrum::build(qdiag), m, seed);
    } else {
        if (qdiag.size() != 3) {
            std::fprintf(stderr, "error: %s carriers need exactly three spectrum values\n",
                         kind.c_str());
            return 1;
        }
        const auto tp = recurrence::triple_parameters(qdiag[0], qdiag[1], qdiag[2]);
        rep = kind == "corner" ? reps::suq2_corner_rep(tp.p, tp.q, carrier)
                               : reps::suq2_tail_rep(tp.p, tp.q, carrier);
    }
    io::Json j = io::report_envelope("verify-rep");
    io::Json meta;
    meta["kind"] = kind;
    meta["d"] = rep->d;
    meta["carrier"] = rep->m;
    meta["buffer"] = rep->buffer;
    meta["spectrum"] = io::to_json(rep->S);
    j["rep"] = std::move(meta);
    j["relations"] = io::to_json(reps::relation_residuals(*rep));
    j["relations_full"] = io::to_json(reps::relation_residuals(*rep, rep->m));
    if (rep->kind == reps::Kind::Exact) j["kernel"] = kernel_summary(cocycle::solve_space(rep));
    return emit(j, out);
}

int run_triples(const std::vector<double>& qdiag, double gp_tol, const std::string& out) {
    const auto s = spectrum::build(qdiag);
    io::Json j = io::report_envelope("triples");
    j["spectrum"] = io::to_json(s);
    pipeline::TripleSelection sel;
    if (s.blocks() == 3) {
        require(!spectrum::is_geometric_triple(s.values[0], s.values[1], s.values[2], gp_tol),
                ErrorCode::UnsupportedGPCase, "three blocks in geometric progression");
        sel.triples = {{0, 1, 2}};
        sel.elimination_order = {{0, 0}};
    } else {
        sel = pipeline::select_triples(s, gp_tol);
    }
    j["selection"] = io::to_json(sel);
    return emit(j, out);
}

int run_nogo(const std::vector<double>& qdiag, int samples, std::uint64_t seed,
             const std::string& out) {
    const auto s = spectrum::build(qdiag);
    const auto rep = pipeline::nogo_experiment(s, samples, seed);
    io::Json j = io::report_envelope("nogo");
    j["spectrum"] = io::to_json(s);
    j["seed"] = seed;
    j["result"] = io::to_json(rep);
    return emit(j, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cohomology of the free unitary compact quantum group"};
    app.require_subcommand(1);

    std::vector<double> qdiag;
    std::string out, config_path, csv_path;
    pipeline::PipelineConfig cfg;
    double sv_tol = 1e-10, gp_tol = 1e-9;
    std::uint64_t seed = 1;
    int samples = 50, m = 1, carrier = 64, k_max = 1000;
    double ra = 0, rb = 0, rq = 0;
    std::string rep_kind = "epsilon";

    auto add_q = [&](CLI::App* sub) {
        sub->add_option("--q", qdiag, "diagonal of the positive matrix Q, comma separated")
            ->required()
            ->delimiter(',');
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", out, "write the JSON report to a file instead of stdout");
    };

    CLI::App* h1 = app.add_subcommand("h1", "first cohomology over the counit representation");
    add_q(h1);
    add_out(h1);
    h1->add_option("--sv-tol", sv_tol, "relative singular value cutoff");

    double tail_tol = cfg.tail_tol;
    int cap = cfg.truncation_cap, max_samples = cfg.max_samples;
    CLI::App* h2 = app.add_subcommand("h2", "second cohomology basis and certificates");
    add_q(h2);
    add_out(h2);
    h2->add_option("--config", config_path, "key=value overrides for the pipeline settings");
    auto* o_seed = h2->add_option("--seed", seed, "seed for the block-part samples");
    auto* o_svt = h2->add_option("--sv-tol", sv_tol, "relative singular value cutoff");
    auto* o_gpt = h2->add_option("--gp-tol", gp_tol, "geometric progression tolerance");
    auto* o_tail = h2->add_option("--tail-tol", tail_tol, "truncation tail rule");
    auto* o_cap = h2->add_option("--cap", cap, "carrier length ceiling")->check(CLI::Range(4, 4096));
    auto* o_max = h2->add_option("--max-samples", max_samples, "block-part sample budget")
                      ->check(CLI::Range(1, 100000));

    CLI::App* rec = app.add_subcommand("recurrence", "three-term coefficient recurrence");
    add_out(rec);
    rec->add_option("--q", rq, "deformation parameter in (0, 1)")->required();
    rec->add_option("--a", ra, "first root")->required();
    rec->add_option("--b", rb, "second root")->required();
    rec->add_option("--K", k_max, "number of coefficients")->check(CLI::Range(2, 2000000));
    rec->add_option("--csv", csv_path, "write k, b_k, quotient, g_k rows to a file");

    CLI::App* vrep = app.add_subcommand("verify-rep", "defining-relation residuals of a carrier");
    add_q(vrep);
    add_out(vrep);
    vrep->add_option("--rep", rep_kind, "carrier kind")
        ->check(CLI::IsMember({"epsilon", "random", "corner", "tail"}));
    vrep->add_option("--m", m, "block carrier dimension for random")->check(CLI::Range(1, 64));
    vrep->add_option("--N", carrier, "carrier length for corner and tail")
        ->check(CLI::Range(2, 4096));
    vrep->add_option("--seed", seed, "seed for random");

    CLI::App* tri = app.add_subcommand("triples", "non-geometric covering triple selection");
    add_q(tri);
    add_out(tri);
    tri->add_option("--gp-tol", gp_tol, "geometric progression tolerance");

    CLI::App* nogo = app.add_subcommand("nogo", "partial-trace experiment over cup defects");
    add_q(nogo);
    add_out(nogo);
    nogo->add_option("--samples", samples, "number of sampled tables")
        ->check(CLI::Range(1, 100000));
    nogo->add_option("--seed", seed, "sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        if (h1->parsed()) {
            rc = run_h1(qdiag, sv_tol, out);
        } else if (h2->parsed()) {
            if (!config_path.empty()) {
                const std::string err = load_config(config_path, cfg);
                if (!err.empty()) {
                    std::fprintf(stderr, "error: %s\n", err.c_str());
                    return 1;
                }
            }
            if (o_seed->count()) cfg.seed = seed;
            if (o_svt->count()) cfg.sv_tol = sv_tol;
            if (o_gpt->count()) cfg.gp_tol = gp_tol;
            if (o_tail->count()) cfg.tail_tol = tail_tol;
            if (o_cap->count()) cfg.truncation_cap = cap;
            if (o_max->count()) cfg.max_samples = max_samples;
            rc = run_h2(qdiag, cfg, out);
        } else if (rec->parsed()) {
            rc = run_recurrence(rq, ra, rb, k_max, csv_path, out);
        } else if (vrep->parsed()) {
            rc = run_verify_rep(rep_kind, qdiag, m, carrier, seed, out);
        } else if (tri->parsed()) {
            rc = run_triples(qdiag, gp_tol, out);
        } else if (nogo->parsed()) {
            rc = run_nogo(qdiag, samples, seed, out);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 6;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "elapsed_ms %.1f\n", ms);
    return rc;
}
