// Command-line front end: seed refinement, branch tracing, bifurcation
// search, periodic-solution location, direct integration, table verification
// and SVG rendering.
//
// Exit codes: 0 success, 1 numerical failure (reason line on stderr),
// 2 usage or I/O error.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "iso3bp/bifurcation.hpp"
#include "iso3bp/boundary.hpp"
#include "iso3bp/branch_io.hpp"
#include "iso3bp/continuation.hpp"
#include "iso3bp/errors.hpp"
#include "iso3bp/fixtures.hpp"
#include "iso3bp/integrator.hpp"
#include "iso3bp/parallel.hpp"
#include "iso3bp/periodic.hpp"
#include "iso3bp/svg.hpp"

namespace {

using namespace iso3bp;

struct CommonOpts {
    IntegratorConfig integ;
    ToleranceConfig tol;
    std::string out;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--tol-abs", c.integ.abs_tol, "integrator absolute tolerance");
    cmd->add_option("--tol-rel", c.integ.rel_tol, "integrator relative tolerance");
    cmd->add_option("--taylor-order", c.integ.taylor_order, "Taylor series order (4..40)");
    cmd->add_option("--eps1", c.tol.eps1, "pillar residual tolerance");
    cmd->add_option("--eps2", c.tol.eps2, "intermediate residual tolerance");
    cmd->add_option("--eps3", c.tol.eps3, "max corrector displacement");
    cmd->add_option("--h", c.tol.h, "predictor step length");
    cmd->add_option("--k", c.tol.k, "predictor steps per pillar segment");
    cmd->add_option("--orientation", c.tol.orientation, "initial tangent sign (+1/-1)");
    cmd->add_option("--out", c.out, "output file");
    cmd->add_option("--format", c.format, "output format: csv, branch or svg");
}

void numerical_error(const std::string& kind, const std::string& what) {
    std::cerr << "iso3bp-error kind=" << kind << " detail=\"" << what << "\"\n";
}

std::vector<StateSample> sample_dense(const DenseOutput<5>& dense, double t0, double t1,
                                      int samples) {
    std::vector<StateSample> out;
    out.reserve(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        const double t = t0 + (t1 - t0) * i / samples;
        const auto x = dense.eval(t);
        out.push_back({t, {x.begin(), x.end()}});
    }
    return out;
}

std::vector<StateSample> sample_dense15(const DenseOutput<15>& dense, double t0, double t1,
                                        int samples) {
    std::vector<StateSample> out;
    out.reserve(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        const double t = t0 + (t1 - t0) * i / samples;
        const auto x = dense.eval(t);
        out.push_back({t, {x.begin(), x.end()}});
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f << text;
}

int run(int argc, char** argv) {
    CLI::App app{"reduced-periodic and periodic solutions of the symmetric three-body family"};
    app.require_subcommand(1);

    // refine-seed
    auto* refine = app.add_subcommand("refine-seed", "Newton-refine a branch seed");
    CommonOpts rc;
    std::string r_kind = "odd-even";
    double r_t = 0, r_a = 0, r_b = 0;
    refine->add_option("--kind", r_kind, "branch kind: odd-even or odd");
    refine->add_option("--t", r_t, "seed tau (boundary time)")->required();
    refine->add_option("--a", r_a, "seed a")->required();
    refine->add_option("--b", r_b, "seed b")->required();
    add_common(refine, rc);

    // trace-branch
    auto* trace = app.add_subcommand("trace-branch", "trace a solution branch");
    CommonOpts tc;
    std::string t_kind = "odd-even";
    double t_t = 0, t_a = 0, t_b = 0;
    bool t_no_refine = false;
    double t_guard = 0.1, t_zero = 1e-8;
    int t_max_pillars = 400;
    std::vector<double> t_box_lo{1e-4, -10.0, -10.0}, t_box_hi{50.0, 50.0, 50.0};
    trace->add_option("--kind", t_kind, "branch kind");
    trace->add_option("--t", t_t, "seed tau")->required();
    trace->add_option("--a", t_a, "seed a")->required();
    trace->add_option("--b", t_b, "seed b")->required();
    trace->add_flag("--no-refine", t_no_refine, "use the seed as-is (must satisfy eps1)");
    trace->add_option("--guard-r", t_guard, "collision guard on min R");
    trace->add_option("--zero-tangent", t_zero, "relative zero-tangent threshold");
    trace->add_option("--max-pillars", t_max_pillars, "pillar cap");
    trace->add_option("--box-lo", t_box_lo, "lower corner tau,a,b")->expected(3);
    trace->add_option("--box-hi", t_box_hi, "upper corner tau,a,b")->expected(3);
    add_common(trace, tc);

    // find-bifurcation
    auto* bif = app.add_subcommand("find-bifurcation", "locate B on a traced S1 branch");
    CommonOpts bc;
    std::string b_in;
    bif->add_option("--in", b_in, "S1 branch file")->required();
    add_common(bif, bc);

    // locate-periodic
    auto* loc = app.add_subcommand("locate-periodic", "find Theta(T) = p*pi/q on a branch");
    CommonOpts lc;
    std::string l_in;
    int l_p = 0, l_q = 1;
    double l_hint = 0;
    int l_samples = 2000;
    std::string l_trajectory;
    loc->add_option("--in", l_in, "branch file")->required();
    loc->add_option("--p", l_p, "numerator")->required();
    loc->add_option("--q", l_q, "denominator")->required();
    auto* hint_opt =
        loc->add_option("--near-T", l_hint, "prefer the bracket with period nearest this");
    loc->add_option("--samples", l_samples, "trajectory samples per period");
    loc->add_option("--trajectory", l_trajectory, "also write the solution CSV here");
    add_common(loc, lc);

    // integrate
    auto* integ = app.add_subcommand("integrate", "integrate the family ODE and emit CSV");
    CommonOpts ic;
    double i_a = 0, i_b = 0, i_tend = 10.0;
    int i_samples = 1000;
    bool i_extended = false;
    integ->add_option("--a", i_a, "parameter a")->required();
    integ->add_option("--b", i_b, "parameter b")->required();
    integ->add_option("--t-end", i_tend, "integration end time");
    integ->add_option("--samples", i_samples, "number of output samples");
    integ->add_flag("--extended", i_extended, "include the ten parameter sensitivities");
    add_common(integ, ic);

    // verify-tables
    auto* ver = app.add_subcommand("verify-tables", "re-derive the 45 periodic-solution rows");
    CommonOpts vc;
    bool v_serial = false;
    int v_table = 0;
    ver->add_flag("--serial", v_serial, "disable the worker pool");
    ver->add_option("--table", v_table, "restrict to one table (1..5)");
    add_common(ver, vc);

    // render
    auto* ren = app.add_subcommand("render", "render a CSV trajectory or branch file to SVG");
    CommonOpts nc;
    std::string n_in, n_style = "fr", n_title;
    ren->add_option("--in", n_in, "input file (csv for fr/xy, branch for branch style)")
        ->required();
    ren->add_option("--style", n_style, "fr, xy or branch");
    ren->add_option("--title", n_title, "plot title");
    add_common(ren, nc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (refine->parsed()) {
            const BranchKind kind = branch_kind_from_string(r_kind);
            const Vec3 seed{r_t, r_a, r_b};
            const Vec3 dir = normalized(tangent_field(seed, kind, rc.integ));
            const CorrectorResult cr =
                newton_correct(seed, kind, dir, rc.tol.eps1, 25, rc.integ);
            std::printf("refined %s seed: tau=%s a=%s b=%s\n", r_kind.c_str(),
                        format_g17(cr.point.tau).c_str(), format_g17(cr.point.a).c_str(),
                        format_g17(cr.point.b).c_str());
            std::printf("residual = (%.3e, %.3e)  iterations = %d  moved = %.3e\n",
                        cr.point.residual[0], cr.point.residual[1], cr.iterations, cr.moved);
            return 0;
        }

        if (trace->parsed()) {
            const BranchKind kind = branch_kind_from_string(t_kind);
            CurvePoint seed{t_t, t_a, t_b, kind, {0, 0}, true, 0};
            if (!t_no_refine) {
                const Vec3 dir = normalized(tangent_field(seed.position(), kind, tc.integ));
                seed = newton_correct(seed.position(), kind, dir, tc.tol.eps1, 25, tc.integ)
                           .point;
            }
            StopPolicy sp;
            sp.collision_guard_r = t_guard;
            sp.zero_tangent_rel = t_zero;
            sp.max_pillars = t_max_pillars;
            sp.box.lo = {t_box_lo[0], t_box_lo[1], t_box_lo[2]};
            sp.box.hi = {t_box_hi[0], t_box_hi[1], t_box_hi[2]};
            const Branch br = trace_branch(seed, kind, tc.tol, sp, tc.integ);
            int pillars = 0;
            for (const auto& q : br.points) pillars += q.is_pillar ? 1 : 0;
            const auto& e = br.points.back();
            std::printf("branch: %zu points (%d pillars), termination %s\n",
                        br.points.size(), pillars, to_string(br.termination).c_str());
            std::printf("endpoint: tau=%s a=%s b=%s (T=%s)\n", format_g17(e.tau).c_str(),
                        format_g17(e.a).c_str(), format_g17(e.b).c_str(),
                        format_g17(e.period()).c_str());
            if (!tc.out.empty()) {
                write_branch_file(br, tc.out);
                std::printf("wrote %s\n", tc.out.c_str());
            }
            return 0;
        }

        if (bif->parsed()) {
            const Branch br = read_branch_file(b_in);
            const BifurcationReport rep = find_bifurcation(br, bc.integ);
            std::printf("B: T=%s a=%s b=%s\n", format_g17(rep.period()).c_str(),
                        format_g17(rep.point.a).c_str(), format_g17(rep.point.b).c_str());
            std::printf("|Z| = %.6e  bracket arc = %.3e  evaluations = %d\n", rep.z_norm,
                        rep.bracket_arc, rep.evaluations);
            return 0;
        }

        if (loc->parsed()) {
            const Branch br = read_branch_file(l_in);
            const PeriodicRecord rec = locate_rational_theta(
                br, l_p, l_q, lc.integ, hint_opt->count() ? &l_hint : nullptr);
            const double closure = closure_check(rec, lc.integ);
            std::printf("periodic solution with Theta(T) = %d pi / %d:\n", l_p, l_q);
            std::printf("T=%s a=%s b=%s\n", format_g17(rec.T).c_str(), format_g17(rec.a).c_str(),
                        format_g17(rec.b).c_str());
            std::printf("Theta(T)=%s (target %s), closure error %.3e\n",
                        format_g17(rec.theta).c_str(),
                        format_g17(l_p * std::numbers::pi / l_q).c_str(), closure);
            if (!l_trajectory.empty() || lc.format == "svg") {
                const Trajectory3D traj = full_trajectory(rec, 1, l_samples, lc.integ);
                if (!l_trajectory.empty()) {
                    std::vector<StateSample> rows;
                    rows.reserve(traj.samples.size());
                    for (const auto& s : traj.samples)
                        rows.push_back({s.t, {s.state.x.begin(), s.state.x.end()}});
                    std::ofstream f(l_trajectory, std::ios::binary);
                    if (!f) throw Error("cannot open for writing: " + l_trajectory);
                    write_state_csv(f, rows);
                }
                if (lc.format == "svg" && !lc.out.empty()) {
                    SvgOptions so;
                    so.title = "x-y projection";
                    write_text(lc.out, svg_xy_plot(traj, so));
                }
            }
            return 0;
        }

        if (integ->parsed()) {
            Parameters p{i_a, i_b};
            std::vector<StateSample> rows;
            if (i_extended) {
                DenseOutput<15> dense;
                integrate_to(initial_extended(p), p, i_tend, ic.integ, &dense);
                rows = sample_dense15(dense, 0.0, i_tend, i_samples);
            } else {
                DenseOutput<5> dense;
                integrate_to(initial_reduced(p), p, i_tend, ic.integ, &dense);
                rows = sample_dense(dense, 0.0, i_tend, i_samples);
            }
            std::ostringstream csv;
            write_state_csv(csv, rows);
            write_text(ic.out, csv.str());
            return 0;
        }

        if (ver->parsed()) {
            std::vector<fixtures::TableRow> rows;
            for (const auto& r : fixtures::table_rows())
                if (v_table == 0 || r.table == v_table) rows.push_back(r);
            std::vector<TableRowCheck> checks(rows.size());
            parallel_for_index(rows.size(), [&](std::size_t i) {
                checks[i] = verify_table_row(rows[i], vc.integ);
            }, v_serial);
            int failed = 0;
            for (const auto& c : checks) {
                std::string status = c.passed() ? "pass" : (c.row.advisory ? "ADVISORY-fail" : "FAIL");
                if (!c.passed()) status += ": " + c.failure;
                if (!c.passed() && !c.row.advisory) ++failed;
                std::printf(
                    "table %d (%d,%d) %-8s T=%.6f Theta=%.6f pi (target %d/%d) closure=%.2e "
                    "qdefect=%.2e %s\n",
                    c.row.table, c.row.grid_row, c.row.grid_col,
                    to_string(c.row.kind).c_str(), c.period_resolved,
                    c.theta / std::numbers::pi, c.row.p, c.row.q, c.closure_error,
                    c.quarter_defect, status.c_str());
            }
            std::printf("%zu rows, %d blocking failures\n", checks.size(), failed);
            return failed == 0 ? 0 : 1;
        }

        if (ren->parsed()) {
            SvgOptions so;
            so.title = n_title;
            std::string svg;
            if (n_style == "branch") {
                svg = svg_branch_plot(read_branch_file(n_in), true, so);
            } else {
                std::ifstream f(n_in, std::ios::binary);
                if (!f) throw Error("cannot open: " + n_in);
                const auto rows = read_state_csv(f);
                if (n_style == "fr") {
                    svg = svg_fr_plot(rows, so);
                } else if (n_style == "xy") {
                    Trajectory3D traj;
                    for (const auto& r : rows) {
                        ReducedState s;
                        s.t = r.t;
                        for (int i = 0; i < 5; ++i) s.x[i] = r.x[i];
                        traj.samples.push_back({r.t, s, embed_positions(s)});
                    }
                    svg = svg_xy_plot(traj, so);
                } else {
                    throw CLI::ValidationError("--style must be fr, xy or branch");
                }
            }
            write_text(nc.out, svg);
            return 0;
        }
    } catch (const CollisionError& e) {
        numerical_error("CollisionError", e.what());
        return 1;
    } catch (const StepSizeUnderflow& e) {
        numerical_error("StepSizeUnderflow", e.what());
        return 1;
    } catch (const NoConvergence& e) {
        numerical_error("NoConvergence", e.what());
        return 1;
    } catch (const SingularJacobian& e) {
        numerical_error("SingularJacobian", e.what());
        return 1;
    } catch (const ZeroTangent& e) {
        numerical_error("ZeroTangent", e.what());
        return 1;
    } catch (const NoInteriorMinimum& e) {
        numerical_error("NoInteriorMinimum", e.what());
        return 1;
    } catch (const TargetOutOfRange& e) {
        numerical_error("TargetOutOfRange", e.what());
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    return run(argc, argv);
}
