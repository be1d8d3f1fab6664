#include <radnf/cli.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include <radnf/errors.hpp>
#include <radnf/flow.hpp>
#include <radnf/io.hpp>
#include <radnf/lower_order.hpp>
#include <radnf/oracle.hpp>
#include <radnf/principal.hpp>
#include <radnf/symbol.hpp>

namespace radnf
{

namespace
{

struct Outcome {
    int code = 0;
    json document;
    std::string text;
};

std::string json_text(const json &j)
{
    return j.dump(2) + "\n";
}

std::optional<std::string> resolve_out(const std::string &command, const std::string &flag)
{
    if (!flag.empty()) {
        return flag;
    }
    if (const char *dir = std::getenv("RADNF_OUT_DIR"); dir && *dir) {
        return (std::filesystem::path(dir) / (command + ".json")).string();
    }
    return std::nullopt;
}

std::string text_path(const std::string &json_path)
{
    std::filesystem::path p(json_path);
    if (p.extension() == ".json") {
        return p.replace_extension(".txt").string();
    }
    return json_path + ".txt";
}

std::string fixed(double v)
{
    std::ostringstream os;
    os << std::setprecision(6) << std::scientific << v;
    return os.str();
}

json vector_json(const Eigen::VectorXd &v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

FlowParams flow_params(std::optional<double> tol, std::optional<double> horizon, unsigned threads)
{
    FlowParams p;
    if (tol) {
        if (!(*tol > 0)) {
            throw std::invalid_argument("--tol must be positive");
        }
        p.abs_tol = p.rel_tol = *tol;
        p.cauchy_tol = 10 * *tol;
    }
    if (horizon) {
        if (!(*horizon > 0)) {
            throw std::invalid_argument("--T must be positive");
        }
        p.t_max = *horizon;
    }
    p.threads = threads;
    return p;
}

Outcome check_radial(const std::string &file)
{
    const ClassicalSymbol P = parse_symbol_file(file);
    const RadialReport r = radial_check(P);
    Outcome o;
    o.document = {{"command", "check-radial"}, {"input", file}, {"report", radial_report_to_json(r)}};
    o.text = std::string("in_class: ") + (r.in_class ? "true" : "false")
             + ", lambda: " + (r.lambda_factor.is_zero() ? "0" : to_string(r.lambda_factor)) + "\n";
    for (auto f : r.failures) {
        o.text += "failure: " + describe(f) + "\n";
    }
    o.code = r.in_class ? 0 : 2;
    return o;
}

Outcome normalize_principal_cmd(const std::string &file, const CapOverrides &caps)
{
    const ClassicalSymbol P = parse_symbol_file(file, caps);
    const PrincipalCertificate cert = normalize_principal(P.principal(), P.caps());
    const PrincipalReplay replay = replay_principal(cert, P.principal());
    Outcome o;
    o.document = {{"command", "normalize-principal"},
                  {"input", file},
                  {"certificate", principal_certificate_to_json(cert)},
                  {"replay",
                   {{"defect_order", replay.defect_order == infinite_order ? json(nullptr) : json(replay.defect_order)},
                    {"normalized", jet_to_json(replay.normalized)},
                    {"pass", replay.pass}}}};
    o.text = principal_report_text(cert, replay);
    o.code = replay.pass ? 0 : 4;
    return o;
}

Outcome normalize_full_cmd(const std::string &file, const CapOverrides &caps, int stages, const std::string &route)
{
    const ClassicalSymbol P = parse_symbol_file(file, caps);
    const routing r = route == "b" ? routing::eigen_to_b : routing::z_divisible_to_f;
    const NormalizationCertificate cert = normalize_full(P, stages, P.caps(), r);
    Outcome o;
    o.document = {{"command", "normalize-full"}, {"input", file}, {"certificate", normalization_certificate_to_json(cert)}};
    o.text = normalization_report_text(cert);
    o.code = cert.replay_pass ? 0 : 4;
    return o;
}

Outcome verify_hamilton(int n, int degree, int trials, std::uint64_t seed)
{
    if (degree < 0 || trials < 0) {
        throw std::invalid_argument("--degree and --trials must be non-negative");
    }
    const JetCaps caps = JetCaps::make(n, 2 * degree + 2, 2 * degree);
    std::mt19937_64 rng(seed);
    json records = json::array();
    int matches = 0;
    for (int i = 0; i < trials; ++i) {
        const JetSeries a = random_jet(rng, caps, degree, 6);
        const JetSeries b = random_jet(rng, caps, degree, 6);
        const int s = static_cast<int>(rng() % 5) - 2;
        const int t = static_cast<int>(rng() % 5) - 2;
        const HamiltonTrial trial = hamilton_oracle_trial(a, s, b, t);
        matches += trial.pass() ? 1 : 0;
        records.push_back({{"a", to_string(a)},
                           {"b", to_string(b)},
                           {"s", s},
                           {"t", t},
                           {"field_matches", trial.field_matches},
                           {"bracket_matches", trial.bracket_matches}});
    }
    Outcome o;
    o.document = {{"command", "verify-hamilton"}, {"n", n},        {"degree", degree},
                  {"seed", seed},                 {"trials", trials}, {"matches", matches},
                  {"records", records}};
    o.text = "oracle matches: " + std::to_string(matches) + "/" + std::to_string(trials) + "\n";
    o.code = matches == trials ? 0 : 4;
    return o;
}

Outcome flow_linearize(const std::string &file, const FlowParams &params)
{
    const FlowFile f = parse_flow_file(file);
    const Splitting split = stable_splitting(f.spec.A, f.spec.L);
    const std::vector<Eigen::VectorXd> pts = f.box.grid();
    std::vector<LimitResult> w(pts.size());
    parallel_for(pts.size(), params.threads, [&](std::size_t i) { w[i] = wminus_map(f.spec, pts[i], params); });
    double cauchy = 0;
    json points = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        cauchy = std::max(cauchy, w[i].cauchy_difference);
        points.push_back({{"x", vector_json(pts[i])},
                          {"w_minus", vector_json(w[i].value)},
                          {"cauchy_difference", w[i].cauchy_difference},
                          {"horizon", w[i].horizon}});
    }
    const double residual = linearization_residual(f.spec, f.box, params);
    const double tightened = linearization_residual(f.spec, f.box, params.tightened(10));
    Outcome o;
    o.document = {{"command", "flow-linearize"},
                  {"input", file},
                  {"splitting",
                   {{"stable_dim", split.stable.cols()},
                    {"unstable_dim", split.unstable.cols()},
                    {"L_dim", split.L.cols()},
                    {"projection_residual", split.projection_residual}}},
                  {"points", points},
                  {"max_cauchy_difference", cauchy},
                  {"linearization_residual", residual},
                  {"linearization_residual_tightened", tightened},
                  {"abs_tol", params.abs_tol},
                  {"t_max", params.t_max}};
    o.text = "splitting: stable " + std::to_string(split.stable.cols()) + ", unstable "
             + std::to_string(split.unstable.cols()) + ", L " + std::to_string(split.L.cols()) + "\n"
             + "max cauchy difference: " + fixed(cauchy) + "\n" + "linearization residual: " + fixed(residual) + "\n"
             + "residual at 10x tighter tolerances: " + fixed(tightened) + "\n";
    return o;
}

Outcome transport(const std::string &file, std::optional<double> c_flag, const FlowParams &params)
{
    const FlowFile f = parse_flow_file(file);
    const double c = c_flag.value_or(f.c);
    const std::vector<Eigen::VectorXd> pts = f.samples.empty() ? f.box.grid() : f.samples;
    std::vector<double> value(pts.size()), residual(pts.size());
    parallel_for(pts.size(), params.threads, [&](std::size_t i) {
        FlowParams serial = params;
        serial.threads = 1;
        value[i] = transport_solve(f.spec, f.source, c, pts[i], serial, f.direction);
        residual[i] = transport_residual(f.spec, f.source, c, pts[i], serial, f.direction);
    });
    json samples = json::array();
    double worst = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        worst = std::max(worst, residual[i]);
        samples.push_back({{"x", vector_json(pts[i])}, {"f", value[i]}, {"residual", residual[i]}});
    }
    Outcome o;
    o.document = {{"command", "transport-solve"}, {"input", file},     {"c", c},
                  {"direction", to_string(f.direction)}, {"samples", samples}, {"max_residual", worst}};
    o.text = "transport (" + to_string(f.direction) + ", c = " + fixed(c) + ") at " + std::to_string(pts.size())
             + " points\nmax |Vf + cf - g|: " + fixed(worst) + "\n";
    return o;
}

Outcome limit_probe(const std::string &file, const FlowParams &params)
{
    const FlowFile f = parse_flow_file(file);
    const LimitProbeReport r = limit_map_probe(f.spec, {f.probe_points, f.probe_h, 3}, params);
    json est = json::array();
    for (const auto &e : r.estimates) {
        json plus = json::array(), minus = json::array();
        for (const auto &v : e.plus) {
            plus.push_back(vector_json(v));
        }
        for (const auto &v : e.minus) {
            minus.push_back(vector_json(v));
        }
        est.push_back({{"base", vector_json(e.base)},
                       {"direction", e.direction + 1},
                       {"plus", plus},
                       {"minus", minus},
                       {"converged", e.converged}});
    }
    Outcome o;
    o.document = {{"command", "limit-probe"},
                  {"input", file},
                  {"mesh", r.mesh},
                  {"estimates", est},
                  {"refinement_spread", r.refinement_spread},
                  {"side_gap", r.side_gap},
                  {"nonconvergent_points", r.nonconvergent_points},
                  {"stabilized", r.stabilized},
                  {"stabilization_tol", params.stabilization_tol}};
    o.text = std::string("stabilized: ") + (r.stabilized ? "true" : "false") + "\nrefinement spread: "
             + fixed(r.refinement_spread) + "\nside gap: " + fixed(r.side_gap)
             + "\nnonconvergent points: " + std::to_string(r.nonconvergent_points) + "\n";
    o.code = r.nonconvergent_points > 0 ? 3 : 0;
    return o;
}

} // namespace

int run_command(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Radial-point normal forms: exact jet normalization and flow verification", "radnf"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path;
    app.add_option("--out", out_path, "JSON output path (text report goes next to it)");

    std::string file;
    std::optional<int> cap_fil, cap_y;
    int stages = 3;
    std::string route = "f";
    int n = 2, degree = 3, trials = 20;
    std::uint64_t seed = 0;
    std::optional<double> tol, horizon, c_flag;
    unsigned threads = 0;

    auto *cr = app.add_subcommand("check-radial", "Check the radial-point conditions of a symbol file");
    cr->add_option("file", file)->required()->check(CLI::ExistingFile);

    auto *np = app.add_subcommand("normalize-principal", "Normalize the principal symbol to z");
    np->add_option("file", file)->required()->check(CLI::ExistingFile);
    np->add_option("--cap-fil", cap_fil, "filtration cap N");
    np->add_option("--cap-y", cap_y, "y-degree cap M");

    auto *nf = app.add_subcommand("normalize-full", "Normalize principal and lower-order terms");
    nf->add_option("file", file)->required()->check(CLI::ExistingFile);
    nf->add_option("--stages", stages, "K: stages k = 0..K")->check(CLI::NonNegativeNumber);
    nf->add_option("--cap-fil", cap_fil, "filtration cap N");
    nf->add_option("--cap-y", cap_y, "y-degree cap M");
    nf->add_option("--routing", route, "f: z-divisible terms to f (default); b: to b")->check(CLI::IsMember({"f", "b"}));

    auto *vh = app.add_subcommand("verify-hamilton", "Check chart formulas against canonical coordinates");
    vh->add_option("--n", n, "space dimension");
    vh->add_option("--degree", degree, "maximal total degree of the random jets");
    vh->add_option("--trials", trials, "number of random pairs");
    vh->add_option("--seed", seed, "random seed");

    auto *fl = app.add_subcommand("flow-linearize", "Nelson map and conjugacy residual for a flow file");
    fl->add_option("file", file)->required()->check(CLI::ExistingFile);
    fl->add_option("--T", horizon, "maximal time horizon");
    fl->add_option("--tol", tol, "integrator tolerance");
    fl->add_option("--threads", threads, "worker threads (0: all cores)");

    auto *ts = app.add_subcommand("transport-solve", "Solve V f + c f = g along the flow of a flow file");
    ts->add_option("file", file)->required()->check(CLI::ExistingFile);
    ts->add_option("--c", c_flag, "constant c (default from file)");
    ts->add_option("--tol", tol, "integrator tolerance");
    ts->add_option("--threads", threads, "worker threads (0: all cores)");

    auto *lp = app.add_subcommand("limit-probe", "Smoothness of the limit map across L");
    lp->add_option("file", file)->required()->check(CLI::ExistingFile);
    lp->add_option("--threads", threads, "worker threads (0: all cores)");

    std::vector<std::string> reversed(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    const CapOverrides caps{cap_fil, cap_y};
    std::string command;
    try {
        Outcome o;
        if (*cr) {
            command = "check-radial";
            o = check_radial(file);
        } else if (*np) {
            command = "normalize-principal";
            o = normalize_principal_cmd(file, caps);
        } else if (*nf) {
            command = "normalize-full";
            o = normalize_full_cmd(file, caps, stages, route);
        } else if (*vh) {
            command = "verify-hamilton";
            o = verify_hamilton(n, degree, trials, seed);
        } else if (*fl) {
            command = "flow-linearize";
            o = flow_linearize(file, flow_params(tol, horizon, threads));
        } else if (*ts) {
            command = "transport-solve";
            o = transport(file, c_flag, flow_params(tol, std::nullopt, threads));
        } else {
            command = "limit-probe";
            o = limit_probe(file, flow_params(std::nullopt, std::nullopt, threads));
        }
        o.document["exit_code"] = o.code;
        out << o.text;
        if (const auto path = resolve_out(command, out_path)) {
            write_file_atomic(*path, json_text(o.document));
            write_file_atomic(text_path(*path), o.text);
        }
        return o.code;
    } catch (const parse_error &e) {
        err << command << ": parse error: " << e.what() << "\n";
        return 2;
    } catch (const error &e) {
        err << command << ": " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::ios_base::failure &e) {
        err << command << ": " << e.what() << "\n";
        return 1;
    } catch (const std::filesystem::filesystem_error &e) {
        err << command << ": " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument &e) {
        err << command << ": " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error &e) {
        err << command << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << command << ": internal error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace radnf
