// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include "oracles.hpp"

#include "delayctl/bounds.hpp"
#include "delayctl/continuation.hpp"
#include "delayctl/error.hpp"
#include "delayctl/l1_norm.hpp"
#include "delayctl/lyapunov.hpp"
#include "delayctl/metrics.hpp"
#include "delayctl/scenario.hpp"
#include "delayctl/simulation.hpp"
#include "delayctl/stability_margin.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

using namespace delayctl;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s):%s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.str().c_str(), secs);
    std::fflush(stdout);
}

const PlantModel& plant() {
    static const PlantModel p = [] {
        const ScenarioConfig cfg = example_scenario(0.0, 0.0);
        return PlantModel(cfg.A_m, cfg.b);
    }();
    return p;
}

// Projection confinement is checked on every closed-loop run of the suite.
bool all_confined = true;
std::size_t confined_runs = 0;

SimTrace run(const ScenarioConfig& cfg) {
    SimTrace tr = simulate_closed_loop(cfg);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.theta_hat[i].norm() > cfg.theta_b * (1.0 + 1e-9)) all_confined = false;
        if (std::abs(tr.sigma_hat[i]) > cfg.sigma_bar_b * (1.0 + 1e-9)) all_confined = false;
    }
    ++confined_runs;
    return tr;
}

double sup_diff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i] - b[i]).cwiseAbs().maxCoeff());
    return m;
}

double sup_tilde(const SimTrace& tr) {
    double m = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) m = std::max(m, tr.x_tilde(i).cwiseAbs().maxCoeff());
    return m;
}

double max_state_norm(const SimTrace& tr) {
    double m = 0.0;
    for (const Vector& x : tr.x) m = std::max(m, x.norm());
    return m;
}

std::int64_t fact(int n) { return n <= 1 ? 1 : n * fact(n - 1); }

}  // namespace

int main() {
    double tau_s[3] = {0.0, 0.0, 0.0};

    criterion(1, "Pade coefficients", [](Outcome& o) {
        for (int i = 0; i <= kPadeOrder; ++i) {
            std::int64_t num = fact(10 - i) * fact(5);
            std::int64_t den = fact(10) * fact(i) * fact(5 - i);
            const std::int64_t g = std::gcd(num, den);
            num /= g;
            den /= g;
            const Fraction c = pade_coefficient_exact(i);
            o.detail << " c" << i << "=" << c.num << "/" << c.den;
            o.require(c.num == num && c.den == den, "c" + std::to_string(i));
        }
        const Fraction expected[] = {{1, 1}, {1, 2}, {1, 9}, {1, 72}, {1, 1008}, {1, 30240}};
        for (int i = 0; i <= kPadeOrder; ++i) o.require(pade_coefficient_exact(i) == expected[i], "closed form");
    });

    criterion(2, "L1 norms against dense-grid quadrature", [](Outcome& o) {
        const std::pair<const char*, RationalTf> cases[] = {
            {"k/(s+k)", RationalTf(Polynomial{25.0}, Polynomial{25.0, 1.0})},
            {"1/(s+1)^2", RationalTf(Polynomial{1.0}, Polynomial{1.0, 2.0, 1.0})},
            {"1/(s^2+0.2s+1)", RationalTf(Polynomial{1.0}, Polynomial{1.0, 0.2, 1.0})},
            {"F(25,0.07,0.02)", build_F(25.0, {0.07, 0.02})},
        };
        for (const auto& [name, tf] : cases) {
            const double v = l1_norm(tf).value;
            const double ref = oracle::dense_l1(tf, 1e-5);
            o.detail << " " << name << "=" << v << " (oracle " << ref << ")";
            o.require(std::abs(v - ref) <= 1e-4, name);
        }
    });

    criterion(3, "identity-line margins", [&](Outcome& o) {
        const double ks[] = {25.0, 50.0, 100.0};
        const double expected_tau_s[] = {0.212, 0.225, 0.233};
        for (int i = 0; i < 3; ++i) {
            tau_s[i] = find_tau_s(plant(), ks[i], 2.0);
            o.detail << " tau_s(k=" << ks[i] << ")=" << tau_s[i];
            o.require(std::abs(tau_s[i] - expected_tau_s[i]) <= 0.02, "k=" + std::to_string(ks[i]));
        }
        o.require(tau_s[0] < tau_s[1] && tau_s[1] < tau_s[2], "increasing in k");
    });

    criterion(4, "boundary curve and compensation band", [&](Outcome& o) {
        const CurveTrace curve = trace_level_curve(plant(), 25.0, 0.5);
        double worst = 0.0;
        for (const auto& p : curve.points) {
            worst = std::max(worst, std::abs(compute_f(plant(), 25.0, {p.tau, p.tau_hat}) - 0.5));
        }
        const auto crossings = curve.identity_crossings();
        const double ref = tau_s[0] > 0.0 ? tau_s[0] : find_tau_s(plant(), 25.0, 2.0);
        bool near = false;
        o.detail << " points=" << curve.points.size() << " termination=" << to_string(curve.termination)
                 << " max|f-0.5|=" << worst << " folds=" << curve.fold_count() << " crossings=";
        for (double x : crossings) {
            o.detail << x << ";";
            near = near || std::abs(x - ref) <= 0.02;
        }
        o.require(worst <= 2e-5, "|f - 0.5| <= 2e-5");
        o.require(curve.fold_count() >= 1, "at least one fold");
        o.require(near, "identity crossing within 0.02 of tau_s");

        double widths[3];
        const double ks[] = {25.0, 50.0, 100.0};
        for (int i = 0; i < 3; ++i) {
            const DeltaBand band = delta_band(plant(), ks[i], 2.0, 0.15);
            widths[i] = band.width();
            o.detail << " k=" << ks[i] << ": lower=" << band.delta_lower << " upper=" << band.delta_upper
                     << " band=" << widths[i];
            if (i == 0) o.require(std::abs(band.delta_lower - 0.071) <= 0.03, "delta_lower(k=25) = 0.071 +- 0.03");
        }
        o.require(widths[2] < widths[1] && widths[1] < widths[0], "band shrinks with k");
    });

    criterion(5, "fbar(0) bound", [](Outcome& o) {
        double f25 = 0.0, f100 = 0.0;
        for (double k : {25.0, 50.0, 100.0}) {
            const double f = compute_fbar(plant(), k, 0.0);
            const double bound = fbar0_upper_bound(plant().a_m(), plant().b(), k);
            o.detail << " k=" << k << ": f=" << f << " bound=" << bound;
            o.require(f <= bound, "f <= bound at k=" + std::to_string(k));
            if (k == 25.0) f25 = f;
            if (k == 100.0) f100 = f;
        }
        o.require(f100 < f25, "f(100) < f(25)");
    });

    double gamma = 1e7;
    criterion(6, "simulation scenarios", [&](Outcome& o) {
        ScenarioConfig a = example_scenario(0.06, 0.0);
        const SimTrace ta = run(a);
        ScenarioConfig half = a;
        half.h_step = 0.5 * a.effective_step();
        half.sample_stride = 2 * a.effective_stride();
        const SimTrace th = run(half);
        const double xa = max_state_norm(ta), xh = max_state_norm(th);
        const double rel = std::abs(xa - xh) / xh;
        o.detail << " step-halving rel change=" << rel << " (trajectory deviation " << sup_diff(ta.x, th.x) << ")";
        if (!(rel < 1e-3)) gamma = 1e6;
        o.detail << " Gamma=" << gamma;

        auto scenario = [&](double tau, double tau_hat) {
            ScenarioConfig c = example_scenario(tau, tau_hat);
            c.Gamma = gamma;
            return c;
        };
        const SimTrace sa = gamma == 1e7 ? ta : run(scenario(0.06, 0.0));
        const SimTrace sb = run(scenario(0.07, 0.0));
        const SimTrace sc = run(scenario(0.07, 0.02));
        const SimTrace sd = run(scenario(0.43, 0.43));
        o.require(!sa.diverged && !sb.diverged && !sc.diverged, "no divergence in (a)-(c)");
        const TrackingMetrics ma = tracking_metrics(sa, 5.0);
        const TrackingMetrics mb = tracking_metrics(sb, 5.0);
        const TrackingMetrics mc = tracking_metrics(sc, 5.0);
        o.detail << " (a) max_err=" << ma.max_err << " osc=" << ma.osc_freq << "; (b) max_err=" << mb.max_err
                 << " osc=" << mb.osc_freq << "; (c) max_err=" << mc.max_err;
        o.require(ma.max_err < 0.3, "(a) max_err < 0.3");
        o.require(mb.osc_freq >= 5.0 * ma.osc_freq || mb.max_err >= 3.0 * ma.max_err, "(b) degraded vs (a)");
        o.require(mc.max_err < 0.3, "(c) max_err < 0.3");
        const double xd = sd.diverged ? INFINITY : sup_norm(sd.x);
        o.detail << "; (d) sup|x|=" << xd;
        o.require(xd < 10.0, "(d) bounded");
    });

    criterion(7, "property suite", [&](Outcome& o) {
        // reference bound and Gamma sweep at tau = tau_hat = 0.06
        ReferenceInputs in;
        in.k = 25.0;
        in.delays = {0.06, 0.06};
        in.theta_b = 2.0;
        in.sigma_b = 1.0;
        in.yd_sup = 1.0;
        in.x0 = example_scenario(0.0, 0.0).x0;
        const BoundReport rep = reference_bounds(plant(), in);
        o.require(rep.stability_margin > 0.0 && rep.rho_ref.has_value(), "stability margin positive");

        double prev_tilde = INFINITY, prev_ref = INFINITY;
        bool monotone = true;
        double sup_ref = 0.0, last_tilde = 0.0, last_gap = 0.0;
        for (double g : {1e5, 1e6, 1e7}) {
            ScenarioConfig c = example_scenario(0.06, 0.06);
            c.Gamma = g;
            c.simulate_reference = true;
            const SimTrace tr = run(c);
            o.require(!tr.diverged, "sweep run bounded");
            last_tilde = sup_tilde(tr);
            last_gap = sup_diff(tr.x_ref, tr.x);
            sup_ref = std::max(sup_ref, sup_norm(tr.x_ref));
            o.detail << " Gamma=" << g << ": sup|x~|=" << last_tilde << " sup|x_ref-x|=" << last_gap << ";";
            monotone = monotone && last_tilde < prev_tilde && last_gap < prev_ref;
            prev_tilde = last_tilde;
            prev_ref = last_gap;
        }
        o.require(monotone, "Gamma-sweep monotone");
        o.detail << " sup|x_ref|=" << sup_ref << " rho_ref=" << rep.rho_ref.value_or(NAN);
        o.require(rep.rho_ref && sup_ref <= *rep.rho_ref, "sup|x_ref| <= rho_ref");

        // Lyapunov residuals
        double worst = lyapunov_residual(example_scenario(0.0, 0.0).A_sp, solve_lyapunov(example_scenario(0.0, 0.0).A_sp));
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> re(-10.0, -0.1), u(-1.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 2 + trial % 6;
            Matrix t(n, n), d = Matrix::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                d(i, i) = re(rng);
                for (int j = 0; j < n; ++j) t(i, j) = u(rng) + (i == j ? 2.0 : 0.0);
            }
            const Matrix a = t * d * t.inverse();
            worst = std::max(worst, lyapunov_residual(a, solve_lyapunov(a)));
        }
        o.detail << " lyapunov residual=" << worst;
        o.require(worst <= 1e-10, "Lyapunov residual <= 1e-10");

        // transient constants: sqrt(Gamma) scaling and the adaptive-to-reference bound
        TransientInputs ti;
        ti.k = 25.0;
        ti.delays = {0.06, 0.06};
        ti.a_sp = example_scenario(0.0, 0.0).A_sp;
        ti.sigma_b = 1.0;
        ti.rho_u = default_rho_u(rep.g, 2.0, *rep.rho_ref, 1.0, 1.0, 1.0);
        ti.d_theta = default_d_theta();
        ti.d_sigma = default_d_sigma_bar(0.5 * std::numbers::pi, 25.0, ti.rho_u, 2.0, *rep.rho_ref, 100.0, 1.0, 1.0);
        ti.gamma = 1e6;
        const TransientConstants c1 = transient_constants(plant(), ti);
        ti.gamma = 4e6;
        const TransientConstants c4 = transient_constants(plant(), ti);
        const double ratio = c4.est_error_bound / c1.est_error_bound;
        o.detail << " est_error_bound ratio(4x Gamma)=" << ratio << " b_r=" << c1.b_r;
        o.require(std::abs(ratio - 0.5) <= 1e-12, "est_error_bound scales as Gamma^-1/2");
        o.require(last_gap <= c1.b_r * last_tilde, "sup|x_ref-x| <= b_r sup|x~|");

        o.detail << " confinement over " << confined_runs << " runs";
        o.require(all_confined, "projection confinement");
    });

    criterion(8, "O(1/k) tracking", [&](Outcome& o) {
        // matched initial conditions so the window sees the steady state, not the x0 - x_des0 transient
        double err[2];
        const double ks[] = {25.0, 100.0};
        for (int i = 0; i < 2; ++i) {
            ScenarioConfig c = example_scenario(0.0, 0.0);
            c.k = ks[i];
            c.Gamma = gamma;
            c.x_des0 = c.x0;
            err[i] = tracking_metrics(run(c), 5.0).max_err;
            o.detail << " k=" << ks[i] << ": max_err=" << err[i];
        }
        o.detail << " ratio=" << err[1] / err[0];
        o.require(err[1] < 0.5 * err[0], "k=100 error < half of k=25 error");
        o.require(all_confined, "projection confinement");
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
