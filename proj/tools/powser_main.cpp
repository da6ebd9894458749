#include "powser/document.hpp"
#include "powser/navier_stokes.hpp"
#include "powser/prandtl.hpp"
#include "powser/pvi.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace powser;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitVerifyFailed = 2;

struct PviArgs {
    std::string alpha = "0", beta = "0", gamma = "0", delta = "0";
    std::string a0 = "2", a1 = "0";
    std::string backend = "exact";
    int order = 9;
    std::string output;
};

pvi::PviParams params_from_doc(const doc::CoefficientDocument& d) {
    return pvi::make_params(d.param_scalar("alpha"), d.param_scalar("beta"),
                            d.param_scalar("gamma"), d.param_scalar("delta"));
}

doc::CoefficientDocument pvi_document(const Series1& series, const pvi::PviParams& params,
                                      const pvi::PviSeed& seed) {
    doc::CoefficientDocument d;
    d.kind = "pvi-solution";
    add_field(d, "y", lift(series));
    d.set_param("alpha", params.alpha.str());
    d.set_param("beta", params.beta.str());
    d.set_param("gamma", params.gamma.str());
    d.set_param("delta", params.delta.str());
    d.set_param("a0", seed.a0.str());
    d.set_param("a1", seed.a1.str());
    return d;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
}

template <int K>
void print_report(const char* label, const ResidualReport<K>& rep) {
    std::cout << label << ": ";
    if (!rep.assertable()) {
        std::cout << "nothing assertable (inputs too short for any trustworthy coefficient)\n";
        return;
    }
    std::cout << (rep.exact_zero ? "zero" : "NONZERO") << " through trusted order (";
    for (int ax = 0; ax < K; ++ax) std::cout << rep.trusted[ax] << (ax + 1 < K ? "," : ")");
    std::cout << ", max |coefficient| = " << rep.max_abs.str();
    if (rep.tolerance > 0) std::cout << ", tolerance " << rep.tolerance;
    std::cout << "\n";
}

std::vector<doc::GridAxis> parse_grid(const std::vector<std::string>& specs, std::size_t axes) {
    if (specs.size() != axes)
        throw std::invalid_argument("need one --grid lo:hi:count per axis (" +
                                    std::to_string(axes) + " axes)");
    std::vector<doc::GridAxis> grid;
    for (const auto& s : specs) {
        doc::GridAxis g;
        if (std::sscanf(s.c_str(), "%lf:%lf:%d", &g.lo, &g.hi, &g.count) != 3)
            throw std::invalid_argument("bad grid spec '" + s + "' (want lo:hi:count)");
        grid.push_back(g);
    }
    return grid;
}

int run(int argc, char** argv) {
    CLI::App app{"Truncated power-series construction and verification for the shifted "
                 "Painleve VI equation, the incompressible momentum system, and boundary-layer "
                 "flow"};
    app.require_subcommand(1);

    // ---- pvi-solve ----
    PviArgs ps;
    auto* pvi_solve = app.add_subcommand("pvi-solve", "construct a series solution");
    pvi_solve->add_option("--alpha", ps.alpha);
    pvi_solve->add_option("--beta", ps.beta);
    pvi_solve->add_option("--gamma", ps.gamma);
    pvi_solve->add_option("--delta", ps.delta);
    pvi_solve->add_option("--a0", ps.a0, "y(0); 0, 1 and -1 are singular seeds");
    pvi_solve->add_option("--a1", ps.a1, "y'(0)");
    pvi_solve->add_option("--order", ps.order)->check(CLI::PositiveNumber);
    pvi_solve->add_option("--backend", ps.backend)->check(CLI::IsMember({"exact", "float"}));
    pvi_solve->add_option("--output,-o", ps.output, "destination document (default stdout)");

    // ---- pvi-verify ----
    std::string in_path;
    auto* pvi_verify = app.add_subcommand("pvi-verify", "re-derive the residual of a solution document");
    pvi_verify->add_option("--input,-i", in_path)->required();

    // ---- pvi-oracle ----
    struct {
        std::string input, output;
        double x_max = 0.1, step = 1e-4;
    } po;
    auto* pvi_oracle = app.add_subcommand(
        "pvi-oracle", "compare a solution document against a fixed-step RK4 integration");
    pvi_oracle->add_option("--input,-i", po.input)->required();
    pvi_oracle->add_option("--x-max", po.x_max);
    pvi_oracle->add_option("--step", po.step);
    pvi_oracle->add_option("--output,-o", po.output, "error table CSV (default stdout)");

    // ---- pvi-crosscheck ----
    PviArgs pc;
    int imax = 15;
    auto* pvi_cross = app.add_subcommand(
        "pvi-crosscheck", "coefficient extraction vs the member-table route, exact equality");
    pvi_cross->add_option("--alpha", pc.alpha);
    pvi_cross->add_option("--beta", pc.beta);
    pvi_cross->add_option("--gamma", pc.gamma);
    pvi_cross->add_option("--delta", pc.delta);
    pvi_cross->add_option("--a0", pc.a0);
    pvi_cross->add_option("--a1", pc.a1);
    pvi_cross->add_option("--imax", imax)->check(CLI::NonNegativeNumber);

    // ---- ns-verify ----
    std::string ns_in;
    auto* ns_verify = app.add_subcommand("ns-verify", "residuals of a flow document");
    ns_verify->add_option("--input,-i", ns_in)->required();

    // ---- ns-march ----
    struct {
        std::string input, output;
        int levels = 1;
    } nm;
    auto* ns_march = app.add_subcommand(
        "ns-march", "fill time coefficients from level-0 data and the pressure series");
    ns_march->add_option("--input,-i", nm.input)->required();
    ns_march->add_option("--levels,-l", nm.levels)->check(CLI::NonNegativeNumber);
    ns_march->add_option("--output,-o", nm.output);

    // ---- prandtl-solve ----
    struct {
        std::string external, wall, output;
        std::string nu = "1", rho = "1";
        std::vector<int> caps{3, 8, 3};
        std::string backend = "exact";
    } pr;
    auto* prandtl_solve = app.add_subcommand("prandtl-solve", "construct a boundary-layer series");
    prandtl_solve->add_option("--external", pr.external, "external stream document")->required();
    prandtl_solve->add_option("--wall", pr.wall, "wall slope document")->required();
    prandtl_solve->add_option("--nu", pr.nu);
    prandtl_solve->add_option("--rho", pr.rho);
    prandtl_solve->add_option("--caps", pr.caps, "x,y,t caps of the output")->expected(3);
    prandtl_solve->add_option("--output,-o", pr.output);

    // ---- prandtl-verify ----
    struct {
        std::string input, external;
    } pv;
    auto* prandtl_verify = app.add_subcommand("prandtl-verify", "residuals of a boundary-layer document");
    prandtl_verify->add_option("--input,-i", pv.input)->required();
    prandtl_verify->add_option("--external", pv.external)->required();

    // ---- prandtl-shear ----
    struct {
        std::string input, output;
        double t = 0.0, x_lo = 0.0, x_hi = 1.0;
        int grid = 64;
    } sh;
    auto* prandtl_shear = app.add_subcommand(
        "prandtl-shear", "wall shear table and sign-change brackets along x");
    prandtl_shear->add_option("--input,-i", sh.input)->required();
    prandtl_shear->add_option("--t", sh.t);
    prandtl_shear->add_option("--x-lo", sh.x_lo);
    prandtl_shear->add_option("--x-hi", sh.x_hi);
    prandtl_shear->add_option("--grid", sh.grid)->check(CLI::PositiveNumber);
    prandtl_shear->add_option("--output,-o", sh.output);

    // ---- prandtl-match (best-effort utility) ----
    struct {
        std::string external, output;
        std::string nu = "1", rho = "1";
        std::vector<int> caps{2, 4, 2};
        double y_match = 0.0;
        int iterations = 40;
    } pm;
    auto* prandtl_match = app.add_subcommand(
        "prandtl-match",
        "best-effort wall-slope fit against the external stream (float backend; "
        "Newton iteration, not part of the verified construction path)");
    prandtl_match->add_option("--external", pm.external)->required();
    prandtl_match->add_option("--nu", pm.nu);
    prandtl_match->add_option("--rho", pm.rho);
    prandtl_match->add_option("--caps", pm.caps)->expected(3);
    prandtl_match->add_option("--y-match", pm.y_match, "matching distance from the wall")
        ->required();
    prandtl_match->add_option("--iterations", pm.iterations);
    prandtl_match->add_option("--output,-o", pm.output);

    // ---- emit-profile ----
    struct {
        std::string input, output;
        std::vector<std::string> grid;
    } ep;
    auto* emit_profile = app.add_subcommand("emit-profile", "evaluate a document on a grid as CSV");
    emit_profile->add_option("--input,-i", ep.input)->required();
    emit_profile->add_option("--grid", ep.grid, "lo:hi:count, one per axis")->required();
    emit_profile->add_option("--output,-o", ep.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInputError;
    }

    if (pvi_solve->parsed()) {
        const Backend be = backend_from_name(ps.backend);
        const auto params = pvi::make_params(Scalar::parse(ps.alpha, be), Scalar::parse(ps.beta, be),
                                             Scalar::parse(ps.gamma, be), Scalar::parse(ps.delta, be));
        const pvi::PviSeed seed{Scalar::parse(ps.a0, be), Scalar::parse(ps.a1, be)};
        const Series1 series = pvi::solve(params, seed, ps.order);
        write_text(ps.output, doc::to_json_text(pvi_document(series, params, seed)));
        return kExitOk;
    }
    if (pvi_verify->parsed()) {
        const auto d = doc::load(in_path);
        const Series1 series = lower(doc::read_field<1>(d, "y"));
        const auto rep = pvi::verify(series, params_from_doc(d));
        print_report("residual", rep);
        return rep.assertable() && rep.exact_zero ? kExitOk : kExitVerifyFailed;
    }
    if (pvi_oracle->parsed()) {
        const auto d = doc::load(po.input);
        const Series1 series = lower(doc::read_field<1>(d, "y"));
        const auto table = pvi::oracle_compare(series, params_from_doc(d), po.x_max, po.step);
        std::ostringstream csv;
        csv << "x,series,rk4,abs_diff\n";
        char buf[160];
        for (const auto& row : table.rows) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", row.x, row.series_value,
                          row.rk_value, row.abs_diff);
            csv << buf;
        }
        write_text(po.output, csv.str());
        std::cerr << "max |series - rk4| = " << table.max_abs_diff() << "\n";
        return kExitOk;
    }
    if (pvi_cross->parsed()) {
        const Backend be = Backend::exact;
        const auto params = pvi::make_params(Scalar::parse(pc.alpha, be), Scalar::parse(pc.beta, be),
                                             Scalar::parse(pc.gamma, be), Scalar::parse(pc.delta, be));
        const pvi::PviSeed seed{Scalar::parse(pc.a0, be), Scalar::parse(pc.a1, be)};
        const auto res = pvi::members_vs_engine(imax, params, seed);
        if (res.ok) {
            std::cout << "both coefficient routes agree exactly for i <= " << imax << "\n";
            return kExitOk;
        }
        std::cout << "routes disagree: " << res.detail << "\n";
        return kExitVerifyFailed;
    }
    if (ns_verify->parsed() || ns_march->parsed()) {
        const auto d = doc::load(ns_verify->parsed() ? ns_in : nm.input);
        auto A = doc::read_field<4>(d, "u");
        auto B = doc::read_field<4>(d, "v");
        auto C = doc::read_field<4>(d, "w");
        auto D = doc::read_field<4>(d, "P");
        const Scalar rho = d.param_scalar("rho");
        const Scalar nu = d.param_scalar("nu");
        if (ns_verify->parsed()) {
            ns::FlowSeries flow(std::move(A), std::move(B), std::move(C), std::move(D), rho, nu);
            if (!d.level_trust.empty()) {
                for (const auto& tr : d.level_trust)
                    flow.level_trust.push_back({tr.at(0), tr.at(1), tr.at(2)});
                if (static_cast<int>(flow.level_trust.size()) != flow.time_cap() + 1)
                    throw std::invalid_argument("level_trust must list every time level");
            }
            const auto rep = ns::verify(flow);
            print_report("momentum x", rep.momentum_x);
            print_report("momentum y", rep.momentum_y);
            print_report("momentum z", rep.momentum_z);
            print_report("continuity", rep.continuity);
            return rep.all_zero() ? kExitOk : kExitVerifyFailed;
        }
        const auto spatial = std::array<int, 3>{A.caps()[0], A.caps()[1], A.caps()[2]};
        SeriesK<3> u0(d.backend, spatial), v0(d.backend, spatial), w0(d.backend, spatial);
        for_each_index<3>(spatial, [&](const std::array<int, 3>& s) {
            u0.set(s, A.at({s[0], s[1], s[2], 0}));
            v0.set(s, B.at({s[0], s[1], s[2], 0}));
            w0.set(s, C.at({s[0], s[1], s[2], 0}));
        });
        const auto flow = ns::time_march(u0, v0, w0, D, rho, nu, nm.levels);
        doc::CoefficientDocument out;
        out.kind = "ns-flow";
        add_field(out, "u", flow.A);
        add_field(out, "v", flow.B);
        add_field(out, "w", flow.C);
        add_field(out, "P", flow.D);
        out.set_param("rho", rho.str());
        out.set_param("nu", nu.str());
        out.level_axis = 3;
        for (const auto& tr : flow.level_trust)
            out.level_trust.push_back({tr[0], tr[1], tr[2]});
        write_text(nm.output, doc::to_json_text(out));
        return kExitOk;
    }
    if (prandtl_solve->parsed()) {
        const auto ud = doc::load(pr.external);
        const prandtl::ExternalFlow ext{doc::read_field<2>(ud, "U")};
        const auto wd = doc::load(pr.wall);
        const prandtl::WallSlope wall{doc::read_field<2>(wd, "A1")};
        const Backend be = ext.U.backend();
        const auto bl = prandtl::construct(ext, wall, Scalar::parse(pr.nu, be),
                                           Scalar::parse(pr.rho, be),
                                           {pr.caps[0], pr.caps[1], pr.caps[2]});
        doc::CoefficientDocument out;
        out.kind = "boundary-layer";
        add_field(out, "u", bl.A);
        add_field(out, "v", bl.B);
        out.set_param("nu", bl.nu.str());
        out.set_param("rho", bl.rho.str());
        write_text(pr.output, doc::to_json_text(out));
        return kExitOk;
    }
    if (prandtl_verify->parsed()) {
        const auto d = doc::load(pv.input);
        const auto ud = doc::load(pv.external);
        prandtl::BoundaryLayerSeries bl{doc::read_field<3>(d, "u"), doc::read_field<3>(d, "v"),
                                        d.param_scalar("nu"), d.param_scalar("rho"), {}};
        const prandtl::ExternalFlow ext{doc::read_field<2>(ud, "U")};
        const auto rep = prandtl::verify(bl, ext);
        print_report("momentum", rep.momentum);
        print_report("continuity", rep.continuity);
        return rep.momentum.assertable() && rep.continuity.assertable() && rep.all_zero()
                   ? kExitOk
                   : kExitVerifyFailed;
    }
    if (prandtl_shear->parsed()) {
        const auto d = doc::load(sh.input);
        prandtl::BoundaryLayerSeries bl{doc::read_field<3>(d, "u"), doc::read_field<3>(d, "v"),
                                        d.param_scalar("nu"), d.param_scalar("rho"), {}};
        const auto shear = prandtl::wall_shear_profile(bl);
        std::ostringstream csv;
        csv << "i,k,value\n";
        shear.for_each_index([&](const std::array<int, 2>& ik) {
            csv << ik[0] << ',' << ik[1] << ',' << shear.at(ik).str() << '\n';
        });
        write_text(sh.output, csv.str());
        const auto brackets = prandtl::shear_sign_brackets(bl, sh.t, sh.x_lo, sh.x_hi, sh.grid);
        if (brackets.empty()) {
            std::cout << "no shear sign change on [" << sh.x_lo << ", " << sh.x_hi << "]\n";
        } else {
            for (const auto& [lo, hi] : brackets)
                std::cout << "shear sign change bracketed in [" << lo << ", " << hi << "]\n";
        }
        return kExitOk;
    }
    if (prandtl_match->parsed()) {
        const auto ud = doc::load(pm.external);
        const prandtl::ExternalFlow ext{doc::read_field<2>(ud, "U")};
        const auto res = prandtl::match_wall_slope(
            ext, Scalar::parse(pm.nu, Backend::float64), Scalar::parse(pm.rho, Backend::float64),
            {pm.caps[0], pm.caps[1], pm.caps[2]}, pm.y_match, pm.iterations);
        doc::CoefficientDocument out;
        out.kind = "wall-slope";
        add_field(out, "A1", res.slope.A1);
        out.set_param("residual_norm", Scalar::real(res.residual_norm).str());
        write_text(pm.output, doc::to_json_text(out));
        std::cerr << (res.converged ? "converged" : "did not converge") << " after "
                  << res.iterations << " iterations, residual norm " << res.residual_norm << "\n";
        return res.converged ? kExitOk : kExitVerifyFailed;
    }
    if (emit_profile->parsed()) {
        const auto d = doc::load(ep.input);
        write_text(ep.output, doc::emit_profile_csv(d, parse_grid(ep.grid, d.caps.size())));
        return kExitOk;
    }
    return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const powser::pvi::SingularSeed& e) {
        std::cerr << "error: singular seed: " << e.what() << "\n";
        return kExitInputError;
    } catch (const powser::BackendMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
