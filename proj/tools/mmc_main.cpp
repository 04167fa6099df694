// mmc — command-line front end: capacity of u.g.r. multiplicative matrix
// channels, Monte-Carlo rank estimation of layered relay networks, parameter
// sweeps, and exhaustive oracle comparisons on tiny instances.
//
// Exit codes: 0 ok, 2 parse/validation error, 3 optimizer non-convergence,
// 4 verification mismatch.

#include "mmc/mmc.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitVerify = 4;

mmc::BigRational parse_rational(const std::string& text) {
    auto parse_int = [](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("rational literal must be p or p/q with integers");
        return mmc::BigCount(s);
    };
    const auto slash = text.find('/');
    if (slash == std::string::npos) return mmc::BigRational(parse_int(text));
    mmc::BigCount den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return mmc::BigRational(parse_int(text.substr(0, slash)), den);
}

struct DistSpec {
    std::string kind;  // silva | jafari | point | file
    int point_rank = 0;
    std::string path;

    static DistSpec parse(const std::vector<std::string>& tokens) {
        if (tokens.empty()) throw std::invalid_argument("--dist needs a source");
        DistSpec spec;
        spec.kind = tokens[0];
        if (spec.kind == "silva" || spec.kind == "jafari") {
            if (tokens.size() != 1) throw std::invalid_argument("--dist " + spec.kind + " takes no argument");
        } else if (spec.kind == "point") {
            if (tokens.size() != 2) throw std::invalid_argument("--dist point needs a rank");
            spec.point_rank = std::stoi(tokens[1]);
        } else if (spec.kind == "file") {
            if (tokens.size() != 2) throw std::invalid_argument("--dist file needs a path");
            spec.path = tokens[1];
        } else {
            throw std::invalid_argument("unknown --dist source '" + spec.kind + "'");
        }
        return spec;
    }

    json to_json() const {
        json j{{"kind", kind}};
        if (kind == "point") j["rank"] = point_rank;
        if (kind == "file") j["path"] = path;
        return j;
    }

    static DistSpec from_json(const json& j) {
        DistSpec spec;
        spec.kind = j.at("kind").get<std::string>();
        if (spec.kind == "point") spec.point_rank = j.at("rank").get<int>();
        if (spec.kind == "file") spec.path = j.at("path").get<std::string>();
        return spec;
    }

    mmc::RankDistribution resolve(const mmc::ChannelDims& dims) const {
        if (kind == "silva") return mmc::rank_dist_silva(dims);
        if (kind == "jafari") return mmc::rank_dist_jafari(dims);
        if (kind == "point") return mmc::RankDistribution::point_mass(point_rank, dims.vmax());
        mmc::RankDistFile file = mmc::load_rank_distribution(path);
        if (file.q != dims.q)
            throw std::invalid_argument(path + ": file is for q=" + std::to_string(file.q));
        return file.dist;
    }

    // Exact rational rank marginal (the oracle path). File probabilities are
    // doubles; each one is an exact rational, normalized by the exact sum.
    std::vector<mmc::BigRational> resolve_exact(const mmc::ChannelDims& dims) const {
        using mmc::BigRational;
        std::vector<BigRational> p(static_cast<std::size_t>(dims.vmax()) + 1, BigRational(0));
        if (kind == "silva") {
            if (dims.n != dims.m) throw std::invalid_argument("silva model needs n = m");
            p.back() = 1;
        } else if (kind == "point") {
            p.at(static_cast<std::size_t>(point_rank)) = 1;
        } else if (kind == "jafari") {
            mmc::BigCount total = mmc::big_pow(dims.q, std::int64_t(dims.n) * dims.m);
            for (int r = 0; r <= dims.vmax(); ++r)
                p[static_cast<std::size_t>(r)] =
                    BigRational(mmc::count_rank_class(dims.m, dims.n, r, dims.q), total);
        } else {
            mmc::RankDistribution d = resolve(dims);
            BigRational sum(0);
            for (int r = 0; r <= d.max_rank(); ++r) {
                p.at(static_cast<std::size_t>(r)) = BigRational(d[r]);
                sum += p[static_cast<std::size_t>(r)];
            }
            for (auto& v : p) v /= sum;
        }
        return p;
    }
};

json capacity_result_json(const mmc::CapacityResult& res, const mmc::ChannelDims& dims,
                          const std::string& units) {
    double scale = 1.0;
    if (units == "bits") scale = std::log2(static_cast<double>(dims.q));
    else if (units == "packets") scale = 1.0 / static_cast<double>(dims.l);
    else if (units != "qary") throw std::invalid_argument("units must be qary, bits or packets");
    json j;
    j["units"] = units;
    j["capacity"] = res.capacity * scale;
    j["capacity_qary"] = res.capacity;
    j["optimal_pu"] = res.optimal_pu;
    j["per_rank_capacity"] = res.per_rank_capacity;
    j["h"] = res.h;
    j["u_star"] = res.u_star;
    j["bounds"] = {{"lower", res.lower_bound * scale}, {"upper", res.upper_bound * scale}};
    j["bounds_qary"] = {{"lower", res.lower_bound}, {"upper", res.upper_bound}};
    j["iterations"] = res.iterations;
    j["convergence_gap"] = res.convergence_gap;
    j["converged"] = res.converged;
    return j;
}

// ---------------------------------------------------------------------------
// Runners. Each consumes a canonical params object (also what manifests
// store) and returns the written outputs, so a manifest re-run takes exactly
// the same path as the original invocation.

std::vector<mmc::OutputRecord> run_capacity(const json& params, json& report) {
    mmc::ChannelDims dims(params.at("q").get<std::int64_t>(), params.at("n").get<int>(),
                          params.at("m").get<int>(), params.at("l").get<int>());
    DistSpec spec = DistSpec::from_json(params.at("dist"));
    mmc::RankKernel k = mmc::kernel(dims, spec.resolve(dims));
    mmc::CapacityResult res = mmc::optimize_capacity(k, params.at("tol").get<double>(),
                                                     params.at("max_iter").get<std::uint64_t>());
    report = capacity_result_json(res, dims, params.at("units").get<std::string>());
    report["schema"] = mmc::kCapacityReportSchema;
    report["q"] = dims.q; report["n"] = dims.n; report["m"] = dims.m; report["l"] = dims.l;
    report["dist"] = spec.to_json();
    std::vector<mmc::OutputRecord> outputs;
    if (params.contains("out")) {
        const std::string out = params.at("out").get<std::string>();
        const std::string bytes = report.dump(2) + "\n";
        mmc::write_file(out, bytes);
        outputs.push_back(mmc::record_output(out, bytes));
    }
    return outputs;
}

mmc::NetworkConfig network_config_from(const json& params) {
    mmc::NetworkConfig cfg;
    cfg.q = params.at("q").get<std::uint32_t>();
    cfg.layers = params.at("layers").get<int>();
    cfg.relays = params.at("relays").get<int>();
    cfg.repetitions = params.at("repetitions").get<int>();
    cfg.erasure_prob = params.at("eps").get<double>();
    cfg.trials = params.at("trials").get<std::uint64_t>();
    cfg.seed = params.at("seed").get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

std::vector<mmc::OutputRecord> run_simulate(const json& params, json& report) {
    mmc::NetworkConfig cfg = network_config_from(params);
    mmc::EmpiricalRankDistribution emp = mmc::estimate_rank_distribution(cfg);
    json meta;
    meta["source"] = "mmc simulate";
    meta["config"] = {{"q", cfg.q},       {"layers", cfg.layers},
                      {"relays", cfg.relays}, {"repetitions", cfg.repetitions},
                      {"eps", cfg.erasure_prob}, {"trials", cfg.trials},
                      {"seed", cfg.seed}};
    meta["counts"] = emp.counts;
    meta["std_err"] = emp.std_err;
    const std::string out = params.at("out").get<std::string>();
    const std::string bytes = mmc::rank_distribution_bytes(cfg.q, emp.distribution(), meta);
    mmc::write_file(out, bytes);
    report = {{"out", out}, {"trials", cfg.trials}, {"mean_rank", emp.distribution().mean()}};
    return {mmc::record_output(out, bytes)};
}

std::vector<mmc::OutputRecord> run_sweep(const json& params, json& report) {
    mmc::NetworkConfig base = network_config_from(params);
    const std::string vary = params.at("vary").get<std::string>();
    const auto values = params.at("values").get<std::vector<double>>();
    const int packet_len = params.at("l").get<int>();
    mmc::SweepVariable var;
    if (vary == "eps") var = mmc::SweepVariable::ErasureProb;
    else if (vary == "layers") var = mmc::SweepVariable::Layers;
    else throw std::invalid_argument("--vary must be eps or layers");

    auto points = mmc::capacity_sweep(base, var, values, packet_len,
                                      params.at("tol").get<double>(),
                                      params.at("max_iter").get<std::uint64_t>());
    std::ostringstream csv;
    csv << "# " << mmc::kSweepCsvSchema << "\n";
    csv << "sweep_var";
    const int rmax = base.mn();
    for (int r = 0; r <= rmax; ++r) csv << ",p_hat_" << r;
    csv << ",ugr_capacity,constant_rank_capacity,u_star,coherent_upper_bound,asymptotic_packet,seed\n";
    bool all_converged = true;
    for (const auto& pt : points) {
        csv << mmc::format_double(pt.sweep_value);
        const mmc::RankDistribution dist = pt.empirical.distribution();
        for (int r = 0; r <= rmax; ++r) csv << "," << mmc::format_double(dist[r]);
        csv << "," << mmc::format_double(pt.capacity.capacity)
            << "," << mmc::format_double(pt.constant_rank.c_u_star)
            << "," << pt.constant_rank.u_star
            << "," << mmc::format_double(pt.coherent_upper_bound)
            << "," << mmc::format_double(pt.asymptotic_packets)
            << "," << pt.config.seed << "\n";
        all_converged = all_converged && pt.capacity.converged;
    }
    const std::string out = params.at("out").get<std::string>();
    const std::string bytes = csv.str();
    mmc::write_file(out, bytes);
    report = {{"out", out}, {"points", points.size()}, {"all_converged", all_converged}};
    return {mmc::record_output(out, bytes)};
}

std::vector<mmc::OutputRecord> run_oracle(const json& params, json& report) {
    const std::string sub = params.at("sub").get<std::string>();
    report["schema"] = mmc::kOracleReportSchema;
    report["sub"] = sub;
    json checks = json::array();
    auto check = [&checks](const std::string& name, bool pass, json detail = json()) {
        json c{{"name", name}, {"pass", pass}};
        if (!detail.is_null()) c["detail"] = detail;
        checks.push_back(std::move(c));
    };

    if (sub == "verify-lemmas") {
        auto rep = mmc::verify_lemma_counts(params.at("q").get<std::int64_t>(),
                                            params.at("max_dim").get<int>(),
                                            params.at("max_len").get<int>());
        check("lemma-counts", rep.pass(), {{"checks", rep.checks}, {"failures", rep.failures}});
    } else if (sub == "capacity-compare") {
        mmc::ChannelDims dims(params.at("q").get<std::int64_t>(), params.at("n").get<int>(),
                              params.at("m").get<int>(), params.at("l").get<int>());
        DistSpec spec = DistSpec::from_json(params.at("dist"));
        auto exact_marg = spec.resolve_exact(dims);
        mmc::Field f(static_cast<std::uint32_t>(dims.q));
        auto transfer = mmc::ugr_matrix_dist(f, dims.m, dims.n, exact_marg);
        auto channel = mmc::build_explicit_channel(dims, transfer);
        const double tol = params.at("tol").get<double>();
        auto exact = mmc::exact_capacity(channel, tol);
        auto ugr = mmc::optimize_capacity(mmc::kernel(dims, mmc::to_rank_distribution(exact_marg)), tol);
        const double diff = exact.capacity - ugr.capacity;
        report["exact_capacity"] = exact.capacity;
        report["ugr_capacity"] = ugr.capacity;
        report["difference"] = diff;
        check("capacity-equivalence", std::abs(diff) < params.at("tol_compare").get<double>(),
              {{"difference", diff}});
        check("converged", exact.converged && ugr.converged);
    } else if (sub == "example2") {
        const mmc::BigRational eps = parse_rational(params.at("eps").get<std::string>());
        const int l = params.at("l").get<int>();
        mmc::ChannelDims dims(2, 2, 2, l);
        auto transfer = mmc::example2_transfer_dist(eps);
        auto marg = mmc::rank_marginal(transfer);
        auto channel = mmc::build_explicit_channel(dims, transfer);
        const double tol = params.at("tol").get<double>();
        auto exact = mmc::exact_capacity(channel, tol);
        auto ugr = mmc::optimize_capacity(mmc::kernel(dims, mmc::to_rank_distribution(marg)), tol);
        auto bound = mmc::entropy_bound_check(transfer);
        const double gap = exact.capacity - ugr.capacity;
        report["eps"] = params.at("eps");
        report["exact_capacity"] = exact.capacity;
        report["ugr_capacity"] = ugr.capacity;
        report["gap"] = gap;
        report["transfer_is_ugr"] = bound.is_ugr;
        report["transfer_entropy"] = bound.entropy;
        report["entropy_bound"] = bound.bound;
        double mean = 0.0;
        for (std::size_t r = 0; r < marg.size(); ++r)
            mean += static_cast<double>(r) * mmc::to_double(marg[r]);
        report["coherent_upper_bound"] = mean * l;
        check("worst-case-ordering", gap >= -1e-9, {{"gap", gap}});
        check("entropy-bound", bound.entropy <= bound.bound + 1e-12);
        check("entropy-equality-iff-ugr",
              bound.is_ugr == (std::abs(bound.entropy - bound.bound) < 1e-12));
        check("converged", exact.converged && ugr.converged);
    } else if (sub == "randomize") {
        const int n = params.at("n").get<int>();
        const int m = params.at("m").get<int>();
        mmc::Field f(params.at("q").get<std::uint32_t>());
        mmc::MatrixDist input(f, m, n);
        if (params.contains("eps")) {
            if (m != 2 || n != 2 || f.order() != 2)
                throw std::invalid_argument("--eps input is defined for q=2, n=m=2");
            input = mmc::example2_transfer_dist(parse_rational(params.at("eps").get<std::string>()));
        } else {
            const auto idx = params.at("point").get<std::uint64_t>();
            if (idx >= input.p.size()) throw std::invalid_argument("matrix index out of range");
            input.p[idx] = 1;
        }
        auto out = mmc::randomize_channel(input);
        auto in_marg = mmc::rank_marginal(input);
        auto out_marg = mmc::rank_marginal(out);
        check("output-ugr", mmc::is_ugr_exact(out));
        check("rank-marginal-preserved", in_marg == out_marg);
        check("idempotent", mmc::randomize_channel(out).p == out.p);
        report["already_ugr"] = mmc::is_ugr_exact(input);
    } else {
        throw std::invalid_argument("unknown oracle subcommand '" + sub + "'");
    }

    bool all_pass = true;
    for (const auto& c : checks) all_pass = all_pass && c.at("pass").get<bool>();
    report["checks"] = checks;
    report["all_pass"] = all_pass;

    std::vector<mmc::OutputRecord> outputs;
    if (params.contains("out")) {
        const std::string out = params.at("out").get<std::string>();
        const std::string bytes = report.dump(2) + "\n";
        mmc::write_file(out, bytes);
        outputs.push_back(mmc::record_output(out, bytes));
    }
    return outputs;
}

int dispatch(const std::string& command, const json& params, json& report,
             std::vector<mmc::OutputRecord>& outputs) {
    if (command == "capacity") {
        outputs = run_capacity(params, report);
        return report.at("converged").get<bool>() ? kExitOk : kExitNoConverge;
    }
    if (command == "simulate") {
        outputs = run_simulate(params, report);
        return kExitOk;
    }
    if (command == "sweep") {
        outputs = run_sweep(params, report);
        return report.at("all_converged").get<bool>() ? kExitOk : kExitNoConverge;
    }
    if (command == "oracle") {
        outputs = run_oracle(params, report);
        return report.at("all_pass").get<bool>() ? kExitOk : kExitVerify;
    }
    throw std::invalid_argument("unknown command '" + command + "'");
}

int run_and_record(const std::string& command, const json& params) {
    json report;
    std::vector<mmc::OutputRecord> outputs;
    const int code = dispatch(command, params, report, outputs);
    if (!outputs.empty())
        mmc::write_manifest(outputs.front().path, command, params, outputs);
    std::cout << report.dump(2) << "\n";
    return code;
}

int run_rerun(const std::string& manifest_path) {
    json manifest = json::parse(mmc::read_file(manifest_path));
    if (manifest.value("schema", std::string()) != mmc::kManifestSchema)
        throw std::invalid_argument(manifest_path + ": not a manifest");
    json report;
    std::vector<mmc::OutputRecord> outputs;
    const int code = dispatch(manifest.at("command").get<std::string>(),
                              manifest.at("params"), report, outputs);
    bool identical = true;
    json verify = json::array();
    for (const auto& rec : manifest.at("outputs")) {
        const std::string path = rec.at("path").get<std::string>();
        const std::string digest = mmc::fnv1a64_hex(mmc::read_file(path));
        const bool match = digest == rec.at("fnv1a64").get<std::string>();
        identical = identical && match;
        verify.push_back({{"path", path}, {"expected", rec.at("fnv1a64")},
                          {"actual", digest}, {"match", match}});
    }
    json out{{"command", manifest.at("command")}, {"reproduced", identical},
             {"outputs", verify}};
    std::cout << out.dump(2) << "\n";
    if (code != kExitOk) return code;
    return identical ? kExitOk : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiplicative finite-field matrix channel toolkit"};
    app.set_version_flag("--version", mmc::kToolVersion);
    app.require_subcommand(1);

    // capacity
    std::int64_t q = 2; int n = 2, m = 2, l = 3;
    std::vector<std::string> dist_tokens;
    double tol = 1e-9; std::uint64_t max_iter = 100000;
    std::string units = "qary", out_path;
    auto* cap = app.add_subcommand("capacity", "capacity of the u.g.r. channel from a rank distribution");
    cap->add_option("--q", q, "field size")->required();
    cap->add_option("--n", n, "input rows")->required();
    cap->add_option("--m", m, "output rows")->required();
    cap->add_option("--l", l, "packet length")->required();
    cap->add_option("--dist", dist_tokens, "rank distribution: silva | jafari | point <r> | file <path>")
        ->required()->expected(1, 2);
    cap->add_option("--tol", tol, "optimizer bracket tolerance");
    cap->add_option("--max-iter", max_iter, "optimizer iteration cap");
    cap->add_option("--units", units, "qary | bits | packets");
    cap->add_option("--out", out_path, "write the JSON report (and a manifest) here");

    // simulate
    mmc::NetworkConfig net;
    std::string sim_out;
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo rank distribution of the layered relay network");
    sim->add_option("--q", net.q, "field size (prime)")->required();
    sim->add_option("--layers,-L", net.layers, "layers");
    sim->add_option("--relays,-N", net.relays, "relays per layer");
    sim->add_option("--reps,-M", net.repetitions, "source repetitions");
    sim->add_option("--eps", net.erasure_prob, "erasure probability")->required();
    sim->add_option("--trials", net.trials, "sample count");
    sim->add_option("--seed", net.seed, "root seed");
    sim->add_option("--out", sim_out, "rank-distribution JSON output")->required();

    // sweep
    std::string vary; std::vector<double> values; int sweep_l = 8; std::string sweep_out;
    auto* swp = app.add_subcommand("sweep", "sweep eps or layer depth; emit per-point capacity CSV");
    swp->add_option("--q", net.q, "field size (prime)")->required();
    swp->add_option("--layers,-L", net.layers, "layers (fixed when sweeping eps)");
    swp->add_option("--relays,-N", net.relays, "relays per layer");
    swp->add_option("--reps,-M", net.repetitions, "source repetitions");
    swp->add_option("--eps", net.erasure_prob, "erasure probability (fixed when sweeping layers)");
    swp->add_option("--trials", net.trials, "sample count per grid point");
    swp->add_option("--seed", net.seed, "root seed");
    swp->add_option("--vary", vary, "eps | layers")->required();
    swp->add_option("--values", values, "grid values")->required()->expected(-1);
    swp->add_option("--l", sweep_l, "packet length for the capacity computation");
    swp->add_option("--tol", tol, "optimizer bracket tolerance");
    swp->add_option("--max-iter", max_iter, "optimizer iteration cap");
    swp->add_option("--out", sweep_out, "CSV output")->required();

    // oracle
    auto* ora = app.add_subcommand("oracle", "exhaustive ground-truth comparisons on tiny instances");
    ora->require_subcommand(1);
    std::string eps_text = "0";
    int max_dim = 3, max_len = 4;
    double tol_compare = 1e-5;
    std::uint64_t point_index = 1;
    std::string ora_out;

    auto* occ = ora->add_subcommand("capacity-compare",
                                    "exact matrix-level capacity vs the rank-level computation");
    occ->add_option("--q", q)->required();
    occ->add_option("--n", n)->required();
    occ->add_option("--m", m)->required();
    occ->add_option("--l", l)->required();
    occ->add_option("--dist", dist_tokens, "silva | jafari | point <r> | file <path>")
        ->required()->expected(1, 2);
    occ->add_option("--tol", tol, "optimizer tolerance");
    occ->add_option("--tol-compare", tol_compare, "equivalence tolerance");
    occ->add_option("--out", ora_out, "write the JSON report here");

    auto* ovl = ora->add_subcommand("verify-lemmas", "exhaustive counting checks");
    ovl->add_option("--q", q)->required();
    ovl->add_option("--max-dim", max_dim, "matrix dimension cap");
    ovl->add_option("--max-len", max_len, "packet length cap");
    ovl->add_option("--out", ora_out, "write the JSON report here");

    auto* orz = ora->add_subcommand("randomize", "two-sided invertible randomization of a transfer law");
    orz->add_option("--q", q)->required();
    orz->add_option("--n", n)->required();
    orz->add_option("--m", m)->required();
    orz->add_option("--point", point_index, "point-mass transfer matrix, by encoded index");
    auto* orz_eps = orz->add_option("--eps", eps_text, "use the two-relay example transfer law at this rational eps");
    orz->add_option("--out", ora_out, "write the JSON report here");

    auto* oe2 = ora->add_subcommand("example2", "two-relay network: true capacity vs u.g.r. bound");
    oe2->add_option("--eps", eps_text, "rational erasure probability p/q")->required();
    oe2->add_option("--l", l, "packet length")->capture_default_str();
    oe2->add_option("--tol", tol, "optimizer tolerance");
    oe2->add_option("--out", ora_out, "write the JSON report here");

    // rerun
    std::string manifest_path;
    auto* rr = app.add_subcommand("rerun", "re-execute a manifest and verify byte-identical outputs");
    rr->add_option("manifest", manifest_path, "manifest JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cap->parsed()) {
            json params{{"q", q}, {"n", n}, {"m", m}, {"l", l},
                        {"dist", DistSpec::parse(dist_tokens).to_json()},
                        {"tol", tol}, {"max_iter", max_iter}, {"units", units}};
            if (!out_path.empty()) params["out"] = out_path;
            return run_and_record("capacity", params);
        }
        if (sim->parsed()) {
            json params{{"q", net.q}, {"layers", net.layers}, {"relays", net.relays},
                        {"repetitions", net.repetitions}, {"eps", net.erasure_prob},
                        {"trials", net.trials}, {"seed", net.seed}, {"out", sim_out}};
            return run_and_record("simulate", params);
        }
        if (swp->parsed()) {
            json params{{"q", net.q}, {"layers", net.layers}, {"relays", net.relays},
                        {"repetitions", net.repetitions}, {"eps", net.erasure_prob},
                        {"trials", net.trials}, {"seed", net.seed}, {"vary", vary},
                        {"values", values}, {"l", sweep_l}, {"tol", tol},
                        {"max_iter", max_iter}, {"out", sweep_out}};
            return run_and_record("sweep", params);
        }
        if (ora->parsed()) {
            json params{{"tol", tol}};
            if (!ora_out.empty()) params["out"] = ora_out;
            if (occ->parsed()) {
                params["sub"] = "capacity-compare";
                params["q"] = q; params["n"] = n; params["m"] = m; params["l"] = l;
                params["dist"] = DistSpec::parse(dist_tokens).to_json();
                params["tol_compare"] = tol_compare;
            } else if (ovl->parsed()) {
                params["sub"] = "verify-lemmas";
                params["q"] = q; params["max_dim"] = max_dim; params["max_len"] = max_len;
            } else if (orz->parsed()) {
                params["sub"] = "randomize";
                params["q"] = q; params["n"] = n; params["m"] = m;
                if (orz_eps->count() > 0) params["eps"] = eps_text;
                else params["point"] = point_index;
            } else {
                params["sub"] = "example2";
                params["eps"] = eps_text;
                params["l"] = l;
            }
            return run_and_record("oracle", params);
        }
        if (rr->parsed()) return run_rerun(manifest_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
