// Command-line front end. Each subcommand wraps one library operation and
// emits its documented CSV/JSON format, with the run configuration echoed into
// every output file. Exit codes: 0 pass, 1 numeric check failed, 2 solver
// failure, 64 usage error.

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "hml/hml.hpp"

namespace {

using hml::cplx;
using hml::Poly;

// "1,0.5+0.25i,-2i" -> coefficients by ascending degree
cplx parse_complex(std::string tok) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) throw CLI::ValidationError("empty complex token");
    double re = 0.0, im = 0.0;
    // split at the last +/- that is not an exponent sign or leading
    std::size_t split = std::string::npos;
    for (std::size_t i = tok.size(); i-- > 1;) {
        if ((tok[i] == '+' || tok[i] == '-') && tok[i - 1] != 'e' && tok[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto parse_part = [](const std::string& s, double& re_out, double& im_out) {
        if (!s.empty() && (s.back() == 'i' || s.back() == 'I')) {
            std::string body = s.substr(0, s.size() - 1);
            if (body.empty() || body == "+") body = "1";
            if (body == "-") body = "-1";
            im_out += std::stod(body);
        } else {
            re_out += std::stod(s);
        }
    };
    if (split == std::string::npos) {
        parse_part(tok, re, im);
    } else {
        parse_part(tok.substr(0, split), re, im);
        parse_part(tok.substr(split), re, im);
    }
    return {re, im};
}

Poly parse_poly(const std::string& csv) {
    std::vector<cplx> coeffs;
    std::string tok;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!tok.empty()) coeffs.push_back(parse_complex(tok));
            tok.clear();
        } else {
            tok += c;
        }
    }
    if (coeffs.empty()) throw CLI::ValidationError("empty coefficient list");
    return Poly(coeffs);
}

std::string poly_str(const Poly& p) {
    std::string s;
    for (int k = 0; k <= p.degree(); ++k) {
        if (k) s += ",";
        s += hml::fmt17(p.coeff(k));
    }
    return s;
}

struct CommonConfig {
    double rmin = 1e-4;
    double rmax = 12.0;
    int nodes = 4000;
};

hml::painleve::RadialProfile solve_profile(const CommonConfig& c) {
    return hml::painleve::solve_u1(c.rmin, c.rmax, c.nodes);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the large-t geometry of Hitchin moduli spaces"};
    app.require_subcommand(1);

    // ---- solve-u -----------------------------------------------------------
    auto* solve_u = app.add_subcommand("solve-u", "solve the model radial ODE");
    CommonConfig su;
    double su_t = 1.0;
    std::string su_out = "u1.csv";
    solve_u->add_option("--rmin", su.rmin);
    solve_u->add_option("--rmax", su.rmax);
    solve_u->add_option("--nodes", su.nodes);
    solve_u->add_option("--t", su_t);
    solve_u->add_option("--out", su_out);

    // ---- decay-scan --------------------------------------------------------
    auto* scan = app.add_subcommand("decay-scan", "g_app - g_sf over a t-ray with rate fit");
    CommonConfig dc;
    std::string dc_pdot = "1";
    double dc_tmin = 3.0, dc_tmax = 24.0, dc_r1 = 0.25, dc_r2 = 1.0;
    int dc_tcount = 12, dc_nr = 200, dc_ntheta = 64, dc_cells = 4000;
    std::string dc_out = "decay";
    scan->add_option("--pdot", dc_pdot, "deformation coefficients, ascending degree");
    scan->add_option("--tmin", dc_tmin);
    scan->add_option("--tmax", dc_tmax);
    scan->add_option("--tcount", dc_tcount);
    scan->add_option("--r1", dc_r1);
    scan->add_option("--r2", dc_r2);
    scan->add_option("--nr", dc_nr);
    scan->add_option("--ntheta", dc_ntheta);
    scan->add_option("--cells", dc_cells);
    scan->add_option("--rmin", dc.rmin);
    scan->add_option("--rmax", dc.rmax);
    scan->add_option("--nodes", dc.nodes);
    scan->add_option("--out", dc_out, "output prefix (.csv and .json)");

    // ---- stokes-check ------------------------------------------------------
    auto* stokes = app.add_subcommand("stokes-check", "disk integral vs boundary form");
    CommonConfig st;
    std::string st_pdot = "1";
    double st_t = 4.0, st_r1 = 0.25, st_r2 = 1.0;
    int st_nr = 200, st_ntheta = 64;
    std::string st_out = "stokes.json";
    stokes->add_option("--pdot", st_pdot);
    stokes->add_option("--t", st_t);
    stokes->add_option("--r1", st_r1);
    stokes->add_option("--r2", st_r2);
    stokes->add_option("--nr", st_nr);
    stokes->add_option("--ntheta", st_ntheta);
    stokes->add_option("--rmin", st.rmin);
    stokes->add_option("--rmax", st.rmax);
    stokes->add_option("--nodes", st.nodes);
    stokes->add_option("--out", st_out);

    // ---- identity-check ----------------------------------------------------
    auto* ident = app.add_subcommand("identity-check", "Coulomb-gauge packaging identity");
    int id_n = 2, id_degree = 2, id_count = 100;
    unsigned long id_seed = 1;
    std::string id_out = "identity.json";
    ident->add_option("--n", id_n);
    ident->add_option("--degree", id_degree);
    ident->add_option("--count", id_count);
    ident->add_option("--seed", id_seed);
    ident->add_option("--out", id_out);

    // ---- gauge-fix ---------------------------------------------------------
    auto* gfix = app.add_subcommand("gauge-fix", "SU(n) block normal form on a seeded instance");
    int gf_n = 4, gf_blocks = 2, gf_degree = 2;
    unsigned long gf_seed = 7;
    std::string gf_out = "gauge.json";
    gfix->add_option("--n", gf_n);
    gfix->add_option("--blocks", gf_blocks, "number of ramified 2x2 blocks");
    gfix->add_option("--degree", gf_degree);
    gfix->add_option("--seed", gf_seed);
    gfix->add_option("--out", gf_out);

    // ---- periods -----------------------------------------------------------
    auto* per = app.add_subcommand("periods", "saddle-connection periods of q2");
    std::string pe_q2 = "-1,0,1";
    std::string pe_out = "periods";
    per->add_option("--q2", pe_q2, "q2 coefficients, ascending degree");
    per->add_option("--out", pe_out, "output prefix (.csv and .json)");

    // ---- sf-consistency ----------------------------------------------------
    auto* sfc = app.add_subcommand("sf-consistency", "semiflat disk identity");
    std::string sf_pdot = "1";
    int sf_nr = 200, sf_ntheta = 64;
    std::string sf_out = "sf.json";
    sfc->add_option("--pdot", sf_pdot);
    sfc->add_option("--nr", sf_nr);
    sfc->add_option("--ntheta", sf_ntheta);
    sfc->add_option("--out", sf_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (*solve_u) {
            hml::painleve::RadialProfile prof;
            try {
                prof = hml::painleve::solve_radial(su_t, su.rmin, su.rmax, su.nodes);
            } catch (const hml::painleve::SolveError& e) {
                std::fprintf(stderr, "solver failure: %s\n", e.what());
                return 2;
            }
            std::vector<std::string> cfg = {
                "cmd=solve-u rmin=" + hml::fmt17(su.rmin) + " rmax=" + hml::fmt17(su.rmax) +
                " nodes=" + std::to_string(su.nodes) + " t=" + hml::fmt17(su_t)};
            prof.write_csv(su_out, cfg);
            const auto tail = hml::painleve::bessel_tail_match(prof);
            hml::JsonWriter cj;
            cj.field("rmin", su.rmin);
            cj.field("rmax", su.rmax);
            cj.field("nodes", su.nodes);
            cj.field("t", su_t);
            hml::JsonWriter j;
            j.object("config", cj);
            j.field("c0", prof.c0);
            j.field("solver_residual", prof.solver_residual);
            j.field("diagnostic_residual_r", hml::painleve::diagnostic_residual_r(prof));
            hml::JsonWriter bm;
            bm.field("max_deviation", tail.max_deviation);
            bm.field("flagged", tail.flagged);
            bm.field("window_lo", tail.window_lo);
            bm.field("window_hi", tail.window_hi);
            j.object("bessel_match", bm);
            j.write(su_out + ".json");
            std::printf("solve-u: residual %s, c0 %s, bessel match %s%s\n",
                        hml::fmt17(prof.solver_residual).c_str(), hml::fmt17(prof.c0).c_str(),
                        hml::fmt17(tail.max_deviation).c_str(), tail.flagged ? " [FLAGGED]" : "");
            return 0;
        }

        if (*scan) {
            const Poly pdot = parse_poly(dc_pdot);
            const double need = std::pow(dc_tmax, 2.0 / 3.0) * dc_r2 * 1.02;
            CommonConfig cc = dc;
            cc.rmax = std::max(cc.rmax, need);
            hml::painleve::RadialProfile u1;
            try {
                u1 = solve_profile(cc);
            } catch (const hml::painleve::SolveError& e) {
                std::fprintf(stderr, "solver failure: %s\n", e.what());
                return 2;
            }
            hml::metricdiff::ScanOptions opt;
            opt.r1 = dc_r1;
            opt.r2 = dc_r2;
            opt.grid.n_r = dc_nr;
            opt.grid.n_theta = dc_ntheta;
            opt.pde_cells = dc_cells;
            const auto tg = hml::metricdiff::log_spaced(dc_tmin, dc_tmax, dc_tcount);
            const auto rep = hml::metricdiff::decay_scan(u1, pdot, tg, opt);
            const std::string cfg = "cmd=decay-scan pdot=" + poly_str(pdot) +
                                    " tmin=" + hml::fmt17(dc_tmin) + " tmax=" + hml::fmt17(dc_tmax) +
                                    " tcount=" + std::to_string(dc_tcount) + " r1=" + hml::fmt17(dc_r1) +
                                    " r2=" + hml::fmt17(dc_r2) + " nr=" + std::to_string(dc_nr) +
                                    " ntheta=" + std::to_string(dc_ntheta) +
                                    " cells=" + std::to_string(dc_cells);
            rep.write_csv(dc_out + ".csv", {cfg});
            hml::JsonWriter j = rep.to_json();
            j.field("config", cfg);
            j.write(dc_out + ".json");
            std::printf("decay-scan: gamma_fit %s, r^2 %s, verdict %s\n",
                        hml::fmt17(rep.gamma_fit).c_str(), hml::fmt17(rep.r_squared).c_str(),
                        rep.pass ? "PASS" : "FAIL");
            return rep.pass ? 0 : 1;
        }

        if (*stokes) {
            const Poly pdot = parse_poly(st_pdot);
            CommonConfig cc = st;
            cc.rmax = std::max(cc.rmax, std::pow(st_t, 2.0 / 3.0) * st_r2 * 1.02);
            hml::painleve::RadialProfile u1;
            try {
                u1 = solve_profile(cc);
            } catch (const hml::painleve::SolveError& e) {
                std::fprintf(stderr, "solver failure: %s\n", e.what());
                return 2;
            }
            hml::localmodel::LocalModel model(u1, st_t, st_r1, st_r2);
            hml::metricdiff::DiskGrid grid{st_nr, st_ntheta, {st_r1}};
            const auto rep = hml::metricdiff::stokes_check(model, pdot, grid);
            hml::JsonWriter cj;
            cj.field("pdot", poly_str(pdot));
            cj.field("t", st_t);
            cj.field("r1", st_r1);
            cj.field("r2", st_r2);
            cj.field("n_r", st_nr);
            cj.field("n_theta", st_ntheta);
            hml::JsonWriter j;
            j.object("config", cj);
            j.field("lhs", rep.lhs);
            j.field("rhs", rep.rhs);
            j.field("rel_err", rep.rel_err);
            j.field("quad_drift", rep.quad_drift);
            j.write(st_out);
            std::printf("stokes-check: lhs %s rhs %s rel_err %s\n", hml::fmt17(rep.lhs).c_str(),
                        hml::fmt17(rep.rhs).c_str(), hml::fmt17(rep.rel_err).c_str());
            return rep.rel_err <= 1e-4 ? 0 : 1;
        }

        if (*ident) {
            std::mt19937_64 rng(id_seed);
            double worst_re = 0.0, worst_im = 0.0;
            for (int k = 0; k < id_count; ++k) {
                using namespace hml::instances;
                using hml::defalg::FormType;
                const auto a01 = random_sl_field(id_n, id_degree, FormType::form01, rng);
                const auto phi = random_sl_field(id_n, id_degree, FormType::form10, rng);
                const auto da01 = random_sl_field(id_n, id_degree, FormType::form01, rng);
                const auto dphi = random_sl_field(id_n, id_degree, FormType::form10, rng);
                const auto rep = hml::defalg::coulomb_identity_check(a01, phi, da01, dphi);
                worst_re = std::max(worst_re, rep.re_residual);
                worst_im = std::max(worst_im, rep.im_residual);
            }
            hml::JsonWriter cj;
            cj.field("n", id_n);
            cj.field("degree", id_degree);
            cj.field("count", id_count);
            cj.field("seed", (long)id_seed);
            hml::JsonWriter j;
            j.object("config", cj);
            j.field("worst_re_residual", worst_re);
            j.field("worst_im_residual", worst_im);
            j.write(id_out);
            std::printf("identity-check: worst re %s im %s\n", hml::fmt17(worst_re).c_str(),
                        hml::fmt17(worst_im).c_str());
            return (worst_re <= 1e-12 && worst_im <= 1e-12) ? 0 : 1;
        }

        if (*gfix) {
            if (2 * gf_blocks > gf_n) {
                std::fprintf(stderr, "gauge-fix: 2*blocks must be <= n\n");
                return 64;
            }
            std::mt19937_64 rng(gf_seed);
            const auto phi = hml::instances::random_block_higgs(gf_n, gf_blocks, rng);
            const auto pdot = hml::instances::random_holomorphic_sl_field(gf_n, gf_degree, rng);
            hml::sunform::GaugeFixResult fix;
            try {
                fix = hml::sunform::gauge_fix(phi, pdot);
            } catch (const hml::sunform::SeparationError& e) {
                std::fprintf(stderr, "separation failure: %s\n", e.what());
                return 2;
            }
            std::vector<hml::cplx> samples;
            for (int k = 0; k < 25; ++k) samples.push_back(std::polar(0.12 + 0.034 * k, 0.9 * k));
            const double dev = hml::sunform::gauge_fix_oracle_deviation(phi, pdot, fix, samples);
            hml::JsonWriter cj;
            cj.field("n", gf_n);
            cj.field("blocks", gf_blocks);
            cj.field("degree", gf_degree);
            cj.field("seed", (long)gf_seed);
            hml::JsonWriter j = fix.to_json();
            j.object("config", cj);
            j.field("oracle_deviation", dev);
            j.write(gf_out);
            std::printf("gauge-fix: residual %s, oracle deviation %s\n",
                        hml::fmt17(fix.residual).c_str(), hml::fmt17(dev).c_str());
            return (fix.residual <= 1e-10 && dev <= 1e-9) ? 0 : 1;
        }

        if (*per) {
            const Poly q2 = parse_poly(pe_q2);
            const auto q = hml::spectral::QuadraticDifferential::from_poly(q2);
            hml::spectral::PeriodTable table;
            try {
                table = hml::spectral::periods(q);
            } catch (const hml::spectral::BranchTrackingError& e) {
                std::fprintf(stderr, "branch tracking failure: %s\n", e.what());
                return 2;
            }
            const std::string cfg = "cmd=periods q2=" + poly_str(q2);
            table.write_csv(pe_out + ".csv", {cfg});
            hml::JsonWriter j = table.to_json();
            j.field("config", cfg);
            j.field("status", table.pairs.empty() ? "no saddle connections" : "ok");
            j.write(pe_out + ".json");
            std::printf("periods: %zu pairs, M %s\n", table.pairs.size(), hml::fmt17(table.M).c_str());
            return 0;
        }

        if (*sfc) {
            const Poly pdot = parse_poly(sf_pdot);
            hml::metricdiff::DiskGrid grid{sf_nr, sf_ntheta, {}};
            const auto rep = hml::metricdiff::sf_disk_consistency(pdot, 1.0, grid);
            hml::JsonWriter cj;
            cj.field("pdot", poly_str(pdot));
            cj.field("n_r", sf_nr);
            cj.field("n_theta", sf_ntheta);
            hml::JsonWriter j;
            j.object("config", cj);
            j.field("lhs", rep.lhs);
            j.field("rhs", rep.rhs);
            j.field("rel_err", rep.rel_err);
            j.write(sf_out);
            std::printf("sf-consistency: lhs %s rhs %s rel %s\n", hml::fmt17(rep.lhs).c_str(),
                        hml::fmt17(rep.rhs).c_str(), hml::fmt17(rep.rel_err).c_str());
            return rep.rel_err <= 1e-6 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 64;
}
