#include "delayctl/error.hpp"
#include "delayctl/history.hpp"
#include "delayctl/metrics.hpp"
#include "delayctl/projection.hpp"
#include "delayctl/scenario.hpp"
#include "delayctl/signal.hpp"
#include "delayctl/simulation.hpp"
#include "delayctl/trace_io.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace delayctl;

namespace {

ScenarioConfig quiet_scenario() {
    ScenarioConfig cfg = example_scenario(0.05, 0.02);
    for (auto& s : cfg.theta_signal) s = SignalSpec::constant(0.0);
    cfg.sigma_signal = SignalSpec::constant(0.0);
    cfg.yd_signal = SignalSpec::constant(0.0);
    cfg.x0 = Vector::Zero(2);
    cfg.x_des0 = Vector::Zero(2);
    cfg.Gamma = 1e5;
    cfg.t_final = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("signal_eval") {
    const ScenarioConfig cfg = example_scenario(0.0, 0.0);
    CHECK(signal_eval(cfg.sigma_signal, 1.0) == doctest::Approx(1.0));
    CHECK(signal_eval(cfg.theta_signal[0], 0.0) == doctest::Approx(1.5));
    CHECK(signal_eval(SignalSpec{}, 3.7) == 0.0);
    CHECK(signal_sup_bound(cfg.theta_signal[1]) == doctest::Approx(1.5));
    CHECK(signal_rate_bound(cfg.theta_signal[1]) == doctest::Approx(0.3 * std::numbers::pi + 0.4));
}

TEST_CASE("projection leaves interior updates alone and annihilates outward boundary updates") {
    const std::vector<double> zero{0.0, 0.0}, raw{0.3, -2.0};
    std::vector<double> out(2);
    proj(zero, raw, 2.0, 0.1, out);
    CHECK(out == raw);

    const std::vector<double> edge{2.0, 0.0};
    proj(edge, edge, 2.0, 0.1, out);
    CHECK(std::abs(out[0]) < 1e-12);
    CHECK(std::abs(out[1]) < 1e-12);
}

TEST_CASE("projection never increases the outward component or the magnitude") {
    std::mt19937 rng(1);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> shell(1.0 / std::sqrt(1.1), 1.0);
    const double bound = 2.0, nu = 0.1;
    std::vector<double> out(3);
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> est{g(rng), g(rng), g(rng)}, raw{g(rng), g(rng), g(rng)};
        const double n = std::sqrt(est[0] * est[0] + est[1] * est[1] + est[2] * est[2]);
        const double r = bound * (i % 2 ? 1.0 : shell(rng));
        for (double& e : est) e *= r / n;
        proj(est, raw, bound, nu, out);
        double out_grad = 0.0, raw_grad = 0.0, out_sq = 0.0, raw_sq = 0.0;
        for (int j = 0; j < 3; ++j) {
            out_grad += out[j] * est[j];
            raw_grad += raw[j] * est[j];
            out_sq += out[j] * out[j];
            raw_sq += raw[j] * raw[j];
        }
        CHECK(out_grad <= raw_grad + 1e-12);
        CHECK(out_sq <= raw_sq + 1e-12);
    }
    CHECK(proj(100.0, 5.0, 100.0, 0.1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(proj(100.0, -5.0, 100.0, 0.1) == -5.0);
}

TEST_CASE("history buffer") {
    HistoryBuffer h(0.1, 0.01);
    CHECK(h.capacity() == 18);
    for (int i = 0; i <= 50; ++i) h.push(0.01 * i, std::sin(0.01 * i));
    CHECK(h.lookup(-0.3) == 0.0);
    CHECK(h.lookup(0.0) == 0.0);
    const double t = 0.455;
    const double lin = 0.5 * (std::sin(0.45) + std::sin(0.46));
    CHECK(h.lookup(t) == doctest::Approx(lin).epsilon(1e-12));
    CHECK(h.lookup(0.41) == doctest::Approx(std::sin(0.41)).epsilon(1e-12));
    CHECK_THROWS_AS((void)h.lookup(0.1), Error);
}

TEST_CASE("scenario parsing and validation") {
    const ScenarioConfig cfg = parse_scenario(R"({"tau": 0.07, "tau_hat": 0.02, "description": "x"})");
    CHECK(cfg.tau == 0.07);
    CHECK(cfg.k == 25.0);
    const ScenarioConfig back = parse_scenario(scenario_to_json(cfg));
    CHECK(back.tau_hat == 0.02);
    CHECK(back.theta_signal.size() == 2);
    CHECK(signal_eval(back.theta_signal[1], 0.3) == signal_eval(cfg.theta_signal[1], 0.3));

    auto message = [](const std::string& text) {
        try {
            (void)parse_scenario(text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ConfigInvalid);
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(R"({"tau": -1})").find("'tau'") != std::string::npos);
    CHECK(message(R"({"bogus": 1})").find("'bogus'") != std::string::npos);
    CHECK(message("{\n\"tau\": ,}").find("line 2") != std::string::npos);
    CHECK(message(R"({"theta_hat0": [3, 0]})").find("theta_hat0") != std::string::npos);
}

TEST_CASE("equilibrium stays at zero") {
    const SimTrace tr = simulate_closed_loop(quiet_scenario());
    CHECK_FALSE(tr.diverged);
    CHECK(tr.size() == 1001);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr.x[i].isZero(0.0));
        CHECK(tr.u[i] == 0.0);
    }
    ScenarioConfig cfg = quiet_scenario();
    const SimTrace ref = simulate_reference(cfg);
    for (double u : ref.u_ref) CHECK(u == 0.0);
}

TEST_CASE("desired system") {
    ScenarioConfig cfg = quiet_scenario();
    cfg.x_des0 = Vector::Unit(2, 0);
    cfg.t_final = 10.0;
    const SimTrace free = simulate_desired(cfg);
    CHECK(std::abs(free.y_des.back()) < 0.05);

    cfg = example_scenario(0.0, 0.0);
    cfg.t_final = 40.0;
    cfg.h_step = 1e-4;
    cfg.sample_stride = 10;
    const SimTrace forced = simulate_desired(cfg);
    const double w = 2.0 / std::numbers::pi;
    const std::complex<double> s(0.0, w);
    const double gain = std::abs(1.0 / (s * s + 1.4 * s + 1.0));
    double peak = 0.0;
    for (std::size_t i = 0; i < forced.size(); ++i) {
        if (forced.t[i] >= 25.0) peak = std::max(peak, std::abs(forced.y_des[i]));
    }
    CHECK(std::abs(peak - gain) < 1e-3);
}

TEST_CASE("reference system with equal delays matches a direct delayed integration") {
    ScenarioConfig cfg = example_scenario(0.1, 0.1);
    cfg.t_final = 1.0;
    cfg.h_step = 1e-4;
    cfg.sample_stride = 1;
    const SimTrace tr = simulate_reference(cfg);

    // plant driven by u(t - 0.1); the delayed terms cancel in the filter equation
    const double h = cfg.h_step, k = cfg.k;
    const int lag = 1000;
    std::vector<double> us{0.0};
    Vector x = cfg.x0;
    double u = 0.0;
    auto past = [&](int i2) {  // u at time (i2 / 2) h - tau
        const int half = i2 - 2 * lag;
        if (half <= 0) return 0.0;
        return half % 2 == 0 ? us[half / 2] : 0.5 * (us[half / 2] + us[half / 2 + 1]);
    };
    auto rhs = [&](double t, const Vector& xs, double us_, double ud, Vector& dx, double& du) {
        const double eta = signal_eval(cfg.theta_signal[0], t) * xs(0) + signal_eval(cfg.theta_signal[1], t) * xs(1) +
                           signal_eval(cfg.sigma_signal, t);
        dx = cfg.A_m * xs + cfg.b * (ud + eta);
        du = -k * (us_ + eta - cfg.k_d * signal_eval(cfg.yd_signal, t));
    };
    double max_dev = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double t = i * h;
        Vector k1, k2, k3, k4;
        double l1, l2, l3, l4;
        rhs(t, x, u, past(2 * i), k1, l1);
        rhs(t + h / 2, x + h / 2 * k1, u + h / 2 * l1, past(2 * i + 1), k2, l2);
        rhs(t + h / 2, x + h / 2 * k2, u + h / 2 * l2, past(2 * i + 1), k3, l3);
        rhs(t + h, x + h * k3, u + h * l3, past(2 * i + 2), k4, l4);
        x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        u += h / 6 * (l1 + 2 * l2 + 2 * l3 + l4);
        us.push_back(u);
        max_dev = std::max({max_dev, std::abs(u - tr.u_ref[i + 1]), (x - tr.x_ref[i + 1]).cwiseAbs().maxCoeff()});
    }
    CHECK(max_dev < 1e-9);
}

TEST_CASE("closed loop keeps estimates in their sets and samples uniformly") {
    ScenarioConfig cfg = example_scenario(0.06, 0.0);
    cfg.Gamma = 1e5;
    cfg.t_final = 2.0;
    cfg.simulate_reference = true;
    const SimTrace tr = simulate_closed_loop(cfg);
    REQUIRE_FALSE(tr.diverged);
    CHECK(tr.size() == 2001);
    CHECK(tr.x_ref.size() == tr.size());
    CHECK(tr.theta_hat.size() == tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr.t[i] == doctest::Approx(1e-3 * static_cast<double>(i)));
        CHECK(tr.theta_hat[i].norm() <= cfg.theta_b * (1.0 + 1e-9));
        CHECK(std::abs(tr.sigma_hat[i]) <= cfg.sigma_bar_b * (1.0 + 1e-9));
        CHECK(std::isfinite(tr.y[i]));
    }
}

TEST_CASE("divergence truncates the trace") {
    ScenarioConfig cfg = example_scenario(0.0, 0.0);
    cfg.theta_signal[0] = SignalSpec::constant(50.0);
    cfg.Gamma = 1e5;
    cfg.t_final = 10.0;
    const SimTrace tr = simulate_closed_loop(cfg);
    CHECK(tr.diverged);
    REQUIRE(tr.diverged_index);
    CHECK(*tr.diverged_index == tr.size() - 1);
    CHECK(tr.t.back() < 10.0);
    CHECK(tr.x.back().cwiseAbs().maxCoeff() > kDivergenceThreshold);
}

TEST_CASE("tracking metrics") {
    std::vector<double> t, zero, sine;
    for (int i = 0; i <= 10000; ++i) {
        t.push_back(1e-3 * i);
        zero.push_back(0.0);
        sine.push_back(0.1 * std::sin(40.0 * std::numbers::pi * t.back()));
    }
    const TrackingMetrics z = error_metrics(t, zero, 5.0);
    CHECK(z.max_err == 0.0);
    CHECK(z.rms_err == 0.0);
    CHECK(z.osc_freq == 0.0);
    const TrackingMetrics s = error_metrics(t, sine, 5.0);
    CHECK(std::abs(s.osc_freq - 20.0) <= 0.5);
    CHECK(s.max_err == doctest::Approx(0.1).epsilon(1e-3));
    CHECK_THROWS_AS(error_metrics(t, sine, 10.0), Error);
}

TEST_CASE("trace CSV round trip") {
    ScenarioConfig cfg = example_scenario(0.03, 0.01);
    cfg.Gamma = 1e5;
    cfg.t_final = 0.2;
    cfg.simulate_reference = true;
    const SimTrace tr = simulate_closed_loop(cfg);
    std::stringstream ss;
    write_trace_csv(ss, tr);
    const CsvTable table = read_csv(ss);
    CHECK(table.columns.front() == "t");
    CHECK(table.columns.back() == "uref");
    CHECK(table.columns.size() == 3 * 2 + 7);
    REQUIRE(table.rows.size() == tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(table.rows[i][0] == tr.t[i]);
        CHECK(table.rows[i][1] == tr.x[i](0));
        CHECK(table.rows[i][9] == tr.y[i]);
        CHECK(table.rows[i][12] == tr.u_ref[i]);
    }
    CHECK(trace_csv_header(2, false) == "t,x1,x2,xhat1,xhat2,u,thetahat1,thetahat2,sigmahat,y,ydes");
}
