#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "l2lab/approximation.hpp"
#include "l2lab/complexes.hpp"
#include "l2lab/error.hpp"
#include "l2lab/estimators.hpp"
#include "l2lab/json_io.hpp"
#include "l2lab/oracles.hpp"

using namespace l2lab;

namespace {

struct SeqFlags {
    std::string matrix_path;
    std::string complex_path;
    std::string mode = "exact";
    int p_max = 0;  // 0: family default
    std::string k2;
    long max_word_length = -1;
    double coeff_floor = 0.0;
    bool allow_exact_truncation = false;
    std::size_t max_support_terms = 60000000;
    int workers = 0;
    std::string out_path;
    std::string plot_path;
};

struct SnapFlags {
    long denominator = 0;  // 0: snapping off
    double tol = 0.05;
};

void add_common(CLI::App* c, SeqFlags& f) {
    c->add_option("--mode", f.mode, "scalar mode")->check(CLI::IsMember({"exact", "float"}));
    c->add_option("--p-max,--L", f.p_max, "series length (default 200, lamplighter exact 12)");
    c->add_option("--k-squared", f.k2, "asserted K^2 as a rational, overrides the derived bound");
    c->add_option("--max-word-length", f.max_word_length, "truncation: word radius cap");
    c->add_option("--coeff-floor", f.coeff_floor, "truncation: coefficient magnitude floor");
    c->add_flag("--allow-exact-truncation", f.allow_exact_truncation,
                "permit truncation in exact mode (results lose their guarantees)");
    c->add_option("--max-support-terms", f.max_support_terms, "support size resource cap");
    c->add_option("--workers", f.workers, "worker threads (default: L2LAB_WORKERS or all cores)");
    c->add_option("--out", f.out_path, "write the JSON report here instead of stdout");
    c->add_option("--emit-plot-data", f.plot_path, "write CSV series data for plotting");
}

void add_matrix(CLI::App* c, SeqFlags& f) {
    c->add_option("--matrix", f.matrix_path, "matrix JSON file")->required();
}

void add_snap(CLI::App* c, SnapFlags& s) {
    c->add_option("--snap-denominator", s.denominator, "snap results to multiples of 1/d");
    c->add_option("--snap-tol", s.tol, "snap tolerance");
}

Rational parse_rational_cli(const std::string& s, const char* what) {
    try {
        Rational r(s);
        if (r.get_den() == 0) throw ValidationError(std::string(what) + ": zero denominator");
        r.canonicalize();
        return r;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw ValidationError(std::string(what) + ": bad rational \"" + s + "\"");
    }
}

CharSeqOptions make_seq_options(const SeqFlags& f, const Group& g) {
    CharSeqOptions o;
    if (!f.k2.empty()) o.k2_override = parse_rational_cli(f.k2, "--k-squared");
    bool exact = f.mode == "exact";
    o.p_max = f.p_max > 0 ? f.p_max : (g.family() == Family::lamplighter && exact ? 12 : 200);
    o.policy.max_word_length = f.max_word_length;
    o.policy.coeff_floor = f.coeff_floor;
    o.policy.allow_exact_truncation = f.allow_exact_truncation;
    o.policy.max_support_terms = f.max_support_terms;
    o.workers = f.workers;
    return o;
}

SnapOptions make_snap_options(const SnapFlags& s) {
    SnapOptions o;
    if (s.denominator > 0) o.denominator = static_cast<unsigned long>(s.denominator);
    o.tol = s.tol;
    return o;
}

Json input_json(const std::string& path) {
    Json j;
    j["path"] = path;
    j["sha256"] = sha256_file(path);
    return j;
}

Json new_report(const char* command, const SeqFlags& f) {
    Json rep;
    rep["schema"] = 1;
    rep["command"] = command;
    rep["mode"] = f.mode;
    rep["inputs"] = Json::object();
    if (!f.matrix_path.empty()) rep["inputs"]["matrix"] = input_json(f.matrix_path);
    if (!f.complex_path.empty()) rep["inputs"]["complex"] = input_json(f.complex_path);
    return rep;
}

template <class C>
void seq_to_json(Json& rep, const CharSeq<C>& s) {
    Json c = Json::array();
    if constexpr (scalar_traits<C>::exact) {
        for (const auto& v : s.c) c.push_back(rational_str(v));
        rep["k_squared"] = rational_str(s.k_squared);
    } else {
        for (double v : s.c) c.push_back(v);
        rep["k_squared"] = s.k_squared;
    }
    rep["c"] = std::move(c);
    rep["p_done"] = s.p_done;
    rep["k_user_asserted"] = s.k_user_asserted;
    rep["monotone"] = s.monotone;
    rep["truncated"] = s.truncated;
    rep["resource_capped"] = s.resource_capped;
    rep["peak_support"] = s.peak_support;
    if (s.truncated) rep["dropped_mass"] = s.dropped_mass;
}

void emit_report(const Json& rep, const std::string& out_path) {
    std::string text = rep.dump(2);
    text += "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream o(out_path);
        if (!o) throw ValidationError("cannot write report to " + out_path);
        o << text;
        std::cout << "report written to " << out_path << "\n";
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class C>
void write_plot(const std::string& path, const CharSeq<C>& seq, const FkResult* fk) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write plot data to " + path);
    f << "kind,x,y\n";
    for (int p = 1; p <= seq.p_done; ++p) {
        double v;
        if constexpr (scalar_traits<C>::exact) v = seq.c[p - 1].get_d();
        else v = seq.c[p - 1];
        f << "c," << p << "," << fmt_double(v) << "\n";
    }
    if (fk)
        for (size_t i = 0; i < fk->series.size(); ++i)
            f << "s," << fk->series_index[i] << "," << fmt_double(fk->series[i]) << "\n";
}

// dim_ker resolution for the determinant and decay commands; the provenance
// string lands in the report
std::pair<Rational, std::string> resolve_dim_ker(const GRMat<ExactC>& m, const std::string& user,
                                                 const std::string& oracle) {
    if (!user.empty() && !oracle.empty())
        throw ValidationError("--dim-ker and --dim-ker-oracle are mutually exclusive");
    if (!user.empty()) return {parse_rational_cli(user, "--dim-ker"), "user"};
    if (oracle == "finite") return {finite_oracle(m).kernel_dim, "oracle:finite"};
    if (oracle == "torus") return {torus_kernel_dim(m), "oracle:torus"};
    if (!oracle.empty()) throw ValidationError("unknown oracle \"" + oracle + "\"");
    throw ValidationError("this command needs --dim-ker or --dim-ker-oracle");
}

void run_kernel_dim(const SeqFlags& f, const SnapFlags& sf) {
    GRMat<ExactC> m = parse_matrix(load_json_file(f.matrix_path));
    Json rep = new_report("kernel-dim", f);
    rep["group"] = group_json(m.g);
    DimKerOptions opt{make_seq_options(f, m.g), make_snap_options(sf)};
    auto fill = [&](const auto& r) {
        seq_to_json(rep, r.seq);
        rep["upper_bound"] = r.upper_bound;
        if (r.upper_bound_exact) rep["upper_bound_exact"] = rational_str(*r.upper_bound_exact);
        if (r.snapped) {
            rep["snapped"] = rational_str(*r.snapped);
            rep["dim_ker_provenance"] = "snapped:d=" + std::to_string(*opt.snap.denominator);
        }
        rep["snap_ambiguous"] = r.snap_ambiguous;
        rep["warnings"] = r.warnings;
        write_plot(f.plot_path, r.seq, nullptr);
    };
    if (f.mode == "exact") fill(kernel_dimension(m, opt));
    else fill(kernel_dimension(to_float(m), opt));
    emit_report(rep, f.out_path);
}

void run_det(const SeqFlags& f, const std::string& dk_user, const std::string& dk_oracle,
             double tail_alpha, double tail_c) {
    GRMat<ExactC> m = parse_matrix(load_json_file(f.matrix_path));
    auto [dk, prov] = resolve_dim_ker(m, dk_user, dk_oracle);
    Json rep = new_report("det", f);
    rep["group"] = group_json(m.g);
    FkOptions fo;
    fo.seq = make_seq_options(f, m.g);
    if (tail_alpha > 0 && tail_c > 0) fo.tail = std::make_pair(tail_alpha, tail_c);
    auto fill = [&](const auto& seq) {
        FkResult r = fk_from_seq(seq, m.rows, dk, fo);
        seq_to_json(rep, seq);
        rep["dim_ker"] = rational_str(dk);
        rep["dim_ker_provenance"] = prov;
        rep["log_det"] = r.value;
        rep["lead_term"] = r.lead_term;
        rep["log_det_partial"] = r.series;
        rep["log_det_partial_index"] = r.series_index;
        if (r.tail_bound) rep["tail_bound"] = *r.tail_bound;
        Json warnings = Json::array();
        if (r.still_decreasing) warnings.push_back("determinant series still decreasing at truncation");
        if (!seq.monotone) warnings.push_back("sequence not monotone; results unreliable");
        rep["warnings"] = std::move(warnings);
        write_plot(f.plot_path, seq, &r);
    };
    if (f.mode == "exact") fill(characteristic_sequence(m, fo.seq));
    else fill(characteristic_sequence(to_float(m), fo.seq));
    emit_report(rep, f.out_path);
}

void run_ns(const SeqFlags& f, const std::string& dk_user, const std::string& dk_oracle, int win_lo,
            int win_hi) {
    GRMat<ExactC> m = parse_matrix(load_json_file(f.matrix_path));
    auto [dk, prov] = resolve_dim_ker(m, dk_user, dk_oracle);
    Json rep = new_report("ns", f);
    rep["group"] = group_json(m.g);
    CharSeqOptions so = make_seq_options(f, m.g);
    NsOptions no;
    no.window_lo = win_lo;
    no.window_hi = win_hi;
    auto fill = [&](const auto& seq) {
        NsResult r = ns_beta(seq, dk, no);
        seq_to_json(rep, seq);
        rep["dim_ker"] = rational_str(dk);
        rep["dim_ker_provenance"] = prov;
        switch (r.beta_hat.kind) {
            case NsValue::Kind::finite:
                rep["beta_hat"] = r.beta_hat.value;
                break;
            case NsValue::Kind::infinite:
                rep["beta_hat"] = "inf";
                break;
            case NsValue::Kind::infinite_plus:
                rep["beta_hat"] = "inf+";
                break;
        }
        rep["raw_slope"] = r.raw_slope;
        rep["fit_rms"] = r.fit_rms;
        rep["window"] = Json::array({r.window_lo, r.window_hi});
        rep["points"] = r.points;
        write_plot(f.plot_path, seq, nullptr);
    };
    if (f.mode == "exact") fill(characteristic_sequence(m, so));
    else fill(characteristic_sequence(to_float(m), so));
    emit_report(rep, f.out_path);
}

void run_betti(const SeqFlags& f, const SnapFlags& sf) {
    ChainComplex<ExactC> cc = parse_complex(load_json_file(f.complex_path));
    Json rep = new_report("betti", f);
    rep["group"] = group_json(cc.g);
    rep["ranks"] = cc.ranks;
    BettiOptions bo{make_seq_options(f, cc.g), make_snap_options(sf)};
    auto fill = [&](const auto& r) {
        rep["betti_upper"] = r.upper;
        Json exact = Json::array(), snapped = Json::array(), kub = Json::array();
        for (const auto& v : r.exact_upper) exact.push_back(v ? Json(rational_str(*v)) : Json(nullptr));
        for (const auto& v : r.snapped) snapped.push_back(v ? Json(rational_str(*v)) : Json(nullptr));
        for (const auto& k : r.kernels) kub.push_back(k.upper_bound);
        rep["betti_exact"] = std::move(exact);
        rep["betti_snapped"] = std::move(snapped);
        rep["kernel_upper_bounds"] = std::move(kub);
        rep["euler_from_ranks"] = r.euler_from_ranks;
        rep["warnings"] = r.warnings;
    };
    if (f.mode == "exact") fill(l2_betti_numbers(cc, bo));
    else fill(l2_betti_numbers(to_float(cc), bo));
    emit_report(rep, f.out_path);
}

void run_torsion(const SeqFlags& f, const SnapFlags& sf, const std::string& route,
                 const std::string& provider, const std::string& dim_kers) {
    ChainComplex<ExactC> cc = parse_complex(load_json_file(f.complex_path));
    Json rep = new_report("torsion", f);
    rep["group"] = group_json(cc.g);
    rep["ranks"] = cc.ranks;
    TorsionOptions to;
    to.route = route == "laplacian" ? TorsionRoute::laplacian : TorsionRoute::direct;
    to.provider = provider == "mahler" ? DetProvider::mahler : DetProvider::charseq;
    to.fk.seq = make_seq_options(f, cc.g);
    to.snap = make_snap_options(sf);
    if (!dim_kers.empty()) {
        std::vector<Rational> dks;
        std::stringstream ss(dim_kers);
        std::string item;
        while (std::getline(ss, item, ',')) dks.push_back(parse_rational_cli(item, "--dim-ker"));
        to.dim_ker = std::move(dks);
    }
    auto fill = [&](const TorsionResult& r) {
        rep["torsion"] = r.value;
        rep["log_dets"] = r.log_dets;
        Json dks = Json::array();
        for (const auto& d : r.dim_kers) dks.push_back(rational_str(d));
        rep["dim_kers"] = std::move(dks);
        rep["route"] = route;
        rep["det_provider"] = provider;
        rep["warnings"] = r.warnings;
    };
    if (f.mode == "exact") fill(l2_torsion(cc, to));
    else fill(l2_torsion(to_float(cc), to));
    emit_report(rep, f.out_path);
}

void run_euler(const SeqFlags& f, const std::string& cells_path) {
    if (cells_path.empty() == f.complex_path.empty())
        throw ValidationError("euler needs exactly one of --cells or --complex");
    SeqFlags fx = f;
    Json rep;
    if (!cells_path.empty()) {
        auto cells = parse_cells(load_json_file(cells_path));
        rep = new_report("euler", fx);
        rep["inputs"]["cells"] = input_json(cells_path);
        Rational chi = l2_euler_from_cells(cells);
        rep["euler"] = rational_str(chi);
        rep["cell_count"] = cells.size();
    } else {
        ChainComplex<ExactC> cc = parse_complex(load_json_file(f.complex_path));
        validate_complex(cc);
        rep = new_report("euler", fx);
        rep["group"] = group_json(cc.g);
        rep["ranks"] = cc.ranks;
        Rational chi(0);
        for (int p = 0; p <= cc.top(); ++p) chi += (p % 2 ? Rational(-cc.ranks[p]) : Rational(cc.ranks[p]));
        rep["euler"] = rational_str(chi);
    }
    emit_report(rep, f.out_path);
}

std::vector<long> parse_long_list(const std::string& s, const char* what) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stol(item));
        } catch (const std::exception&) {
            throw ValidationError(std::string(what) + ": bad integer \"" + item + "\"");
        }
    }
    if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
    return out;
}

void run_approx(const SeqFlags& f, long quotient, const std::string& tower, const std::string& restrict_rows) {
    int picked = (quotient > 0) + !tower.empty() + !restrict_rows.empty();
    if (picked != 1) throw ValidationError("approx needs exactly one of --quotient, --tower, --restrict");
    Json rep;
    if (!f.matrix_path.empty() && !f.complex_path.empty())
        throw ValidationError("approx takes either --matrix or --complex, not both");
    if (!restrict_rows.empty()) {
        if (f.matrix_path.empty()) throw ValidationError("--restrict needs --matrix");
        GRMat<ExactC> m = parse_matrix(load_json_file(f.matrix_path));
        rep = new_report("approx", f);
        rep["group"] = group_json(m.g);
        std::vector<std::vector<int64_t>> rows;
        std::stringstream ss(restrict_rows);
        std::string row;
        while (std::getline(ss, row, ';')) {
            std::vector<int64_t> r;
            for (long v : parse_long_list(row, "--restrict")) r.push_back(v);
            rows.push_back(std::move(r));
        }
        Restriction res = restrict_index(m, rows);
        Json rj;
        rj["index"] = res.index;
        rj["transversal"] = res.transversal;
        rj["matrix"] = matrix_json(res.mat);
        rep["restriction"] = std::move(rj);
        emit_report(rep, f.out_path);
        return;
    }
    std::vector<long> params = quotient > 0 ? std::vector<long>{quotient} : parse_long_list(tower, "--tower");
    if (!f.matrix_path.empty()) {
        GRMat<ExactC> m = parse_matrix(load_json_file(f.matrix_path));
        rep = new_report("approx", f);
        rep["group"] = group_json(m.g);
        Json levels = Json::array();
        for (const auto& lvl : kernel_dim_tower(m, params)) {
            Json e;
            e["param"] = lvl.param;
            e["value"] = rational_str(lvl.value);
            e["value_float"] = lvl.value.get_d();
            levels.push_back(std::move(e));
        }
        if (quotient > 0) rep["quotient"] = levels[0];
        else rep["tower"] = std::move(levels);
    } else if (!f.complex_path.empty()) {
        ChainComplex<ExactC> cc = parse_complex(load_json_file(f.complex_path));
        rep = new_report("approx", f);
        rep["group"] = group_json(cc.g);
        rep["ranks"] = cc.ranks;
        Json levels = Json::array();
        for (long p : params) {
            Json e;
            e["param"] = p;
            Json bs = Json::array();
            for (const auto& b : quotient_betti(cc, p)) bs.push_back(rational_str(b));
            e["betti"] = std::move(bs);
            levels.push_back(std::move(e));
        }
        if (quotient > 0) rep["quotient"] = levels[0];
        else rep["tower"] = std::move(levels);
    } else {
        throw ValidationError("approx needs --matrix or --complex");
    }
    emit_report(rep, f.out_path);
}

void run_oracle(const SeqFlags& f, std::string method) {
    GRMat<ExactC> m = parse_matrix(load_json_file(f.matrix_path));
    if (method == "auto") {
        if (m.g.family() == Family::finite) method = "finite";
        else if (m.g.family() == Family::free_abelian) method = "torus";
        else throw ValidationError("no oracle for this group family");
    }
    Json rep = new_report("oracle", f);
    rep["group"] = group_json(m.g);
    Json o;
    o["method"] = method;
    if (method == "finite") {
        FiniteOracle r = finite_oracle(m);
        o["kernel_dim"] = rational_str(r.kernel_dim);
        o["kernel_dim_float"] = r.kernel_dim.get_d();
        o["log_det"] = r.log_det;
        o["rank"] = r.rank;
        o["reg_dim"] = r.reg_dim;
    } else if (method == "torus") {
        Rational kd = torus_kernel_dim(m);
        o["kernel_dim"] = rational_str(kd);
        o["kernel_dim_float"] = kd.get_d();
        TorusDet det = torus_fk_det(m);
        o["log_det"] = det.log_det;
        o["log_det_est_error"] = det.est_error;
        o["points"] = det.points;
    } else if (method == "mahler") {
        o["log_det"] = mahler_log_matrix(m);
    } else {
        throw ValidationError("unknown oracle method \"" + method + "\"");
    }
    rep["oracle"] = std::move(o);
    emit_report(rep, f.out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"estimators and oracles for matrices over group rings"};
    app.require_subcommand(1);

    SeqFlags kd_f;
    SnapFlags kd_s;
    auto* kd = app.add_subcommand("kernel-dim", "kernel dimension upper bound from the characteristic sequence");
    add_matrix(kd, kd_f);
    add_common(kd, kd_f);
    add_snap(kd, kd_s);
    kd->callback([&] { run_kernel_dim(kd_f, kd_s); });

    SeqFlags det_f;
    std::string det_dk, det_dko;
    double det_ta = 0.0, det_tc = 0.0;
    auto* det = app.add_subcommand("det", "log-determinant partial sums");
    add_matrix(det, det_f);
    add_common(det, det_f);
    det->add_option("--dim-ker", det_dk, "kernel dimension (rational), required unless an oracle supplies it");
    det->add_option("--dim-ker-oracle", det_dko, "oracle for the kernel dimension: finite or torus");
    det->add_option("--tail-alpha", det_ta, "decay exponent for the optional tail bound");
    det->add_option("--tail-c", det_tc, "constant for the optional tail bound");
    det->callback([&] { run_det(det_f, det_dk, det_dko, det_ta, det_tc); });

    SeqFlags ns_f;
    std::string ns_dk, ns_dko;
    int ns_lo = 0, ns_hi = 0;
    auto* ns = app.add_subcommand("ns", "polynomial decay exponent of the residual sequence");
    add_matrix(ns, ns_f);
    add_common(ns, ns_f);
    ns->add_option("--dim-ker", ns_dk, "kernel dimension (rational)");
    ns->add_option("--dim-ker-oracle", ns_dko, "oracle for the kernel dimension: finite or torus");
    ns->add_option("--window-lo", ns_lo, "fit window start (default: half of the series)");
    ns->add_option("--window-hi", ns_hi, "fit window end (default: series end)");
    ns->callback([&] { run_ns(ns_f, ns_dk, ns_dko, ns_lo, ns_hi); });

    SeqFlags betti_f;
    SnapFlags betti_s;
    auto* betti = app.add_subcommand("betti", "betti number upper bounds for a chain complex");
    betti->add_option("--complex", betti_f.complex_path, "complex JSON file")->required();
    add_common(betti, betti_f);
    add_snap(betti, betti_s);
    betti->callback([&] { run_betti(betti_f, betti_s); });

    SeqFlags tor_f;
    SnapFlags tor_s;
    std::string tor_route = "direct", tor_provider = "charseq", tor_dks;
    auto* tor = app.add_subcommand("torsion", "alternating log-determinant sum of a chain complex");
    tor->add_option("--complex", tor_f.complex_path, "complex JSON file")->required();
    add_common(tor, tor_f);
    add_snap(tor, tor_s);
    tor->add_option("--route", tor_route)->check(CLI::IsMember({"direct", "laplacian"}));
    tor->add_option("--det-provider", tor_provider)->check(CLI::IsMember({"charseq", "mahler"}));
    tor->add_option("--dim-ker", tor_dks, "comma list of kernel dimensions, one per matrix");
    tor->callback([&] { run_torsion(tor_f, tor_s, tor_route, tor_provider, tor_dks); });

    SeqFlags euler_f;
    std::string euler_cells;
    auto* euler = app.add_subcommand("euler", "weighted euler characteristic");
    euler->add_option("--cells", euler_cells, "cell data JSON file");
    euler->add_option("--complex", euler_f.complex_path, "complex JSON file");
    euler->add_option("--out", euler_f.out_path, "write the JSON report here instead of stdout");
    euler->callback([&] { run_euler(euler_f, euler_cells); });

    SeqFlags approx_f;
    long approx_q = 0;
    std::string approx_tower, approx_restrict;
    auto* approx = app.add_subcommand("approx", "finite quotient and subgroup approximations");
    approx->add_option("--matrix", approx_f.matrix_path, "matrix JSON file");
    approx->add_option("--complex", approx_f.complex_path, "complex JSON file");
    approx->add_option("--quotient", approx_q, "single quotient parameter");
    approx->add_option("--tower", approx_tower, "comma list of quotient parameters");
    approx->add_option("--restrict", approx_restrict, "subgroup basis rows, e.g. \"2,0;0,1\"");
    approx->add_option("--out", approx_f.out_path, "write the JSON report here instead of stdout");
    approx->callback([&] { run_approx(approx_f, approx_q, approx_tower, approx_restrict); });

    SeqFlags oracle_f;
    std::string oracle_method = "auto";
    auto* oracle = app.add_subcommand("oracle", "closed-form reference values");
    add_matrix(oracle, oracle_f);
    oracle->add_option("--method", oracle_method)->check(CLI::IsMember({"auto", "finite", "torus", "mahler"}));
    oracle->add_option("--out", oracle_f.out_path, "write the JSON report here instead of stdout");
    oracle->callback([&] { run_oracle(oracle_f, oracle_method); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const OracleError& e) {
        std::cerr << "oracle error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
