#include "delayctl/simulation.hpp"

#include "delayctl/error.hpp"
#include "delayctl/history.hpp"
#include "delayctl/lyapunov.hpp"
#include "delayctl/projection.hpp"
#include "delayctl/spectral.hpp"

#include <cmath>
#include <span>

namespace delayctl {

namespace {

struct Modes {
    bool adaptive;
    bool reference;
};

// Exogenous signals at one time instant.
struct Exogenous {
    std::vector<double> theta;
    double sigma = 0.0;
    double yd = 0.0;
};

class ClosedLoop {
public:
    ClosedLoop(const ScenarioConfig& cfg, Modes modes)
        : cfg_(cfg),
          modes_(modes),
          n_(cfg.n()),
          h_(cfg.effective_step()),
          u_hist_(std::max(cfg.tau, cfg.tau_hat), h_),
          uref_hist_(std::max(cfg.tau, cfg.tau_hat), h_) {
        validate(cfg);
        if (modes_.adaptive) {
            if (!is_hurwitz(cfg.A_sp)) throw Error(ErrorCode::NotHurwitz, "A_sp is not Hurwitz");
            pb_ = solve_lyapunov(cfg.A_sp) * cfg.b;
        }
        X = 0;
        XH = n_;
        U = 2 * n_;
        TH = 2 * n_ + 1;
        SH = 3 * n_ + 1;
        XD = 3 * n_ + 2;
        XR = 4 * n_ + 2;
        UR = 5 * n_ + 2;
        dim_ = 5 * n_ + 3;
        for (auto* e : {&ex0_, &ex_mid_, &ex1_}) e->theta.resize(n_);
        raw_.resize(n_);
        projected_.resize(n_);
    }

    SimTrace run() {
        std::vector<double> s(dim_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            s[X + i] = cfg_.x0(static_cast<Eigen::Index>(i));
            s[XH + i] = cfg_.x0(static_cast<Eigen::Index>(i));
            s[TH + i] = cfg_.theta_hat0(static_cast<Eigen::Index>(i));
            s[XD + i] = cfg_.x_des0(static_cast<Eigen::Index>(i));
            s[XR + i] = cfg_.x0(static_cast<Eigen::Index>(i));
        }
        s[SH] = cfg_.sigma_hat0;

        SimTrace trace;
        trace.n = n_;
        const auto steps = static_cast<long long>(std::llround(cfg_.t_final / h_));
        const int stride = cfg_.effective_stride();
        std::vector<double> k1(dim_), k2(dim_), k3(dim_), k4(dim_), stage(dim_);

        u_hist_.push(0.0, 0.0);
        uref_hist_.push(0.0, 0.0);
        record(trace, 0.0, s);

        for (long long step = 0; step < steps; ++step) {
            const double t = static_cast<double>(step) * h_;
            exogenous(t, ex0_);
            exogenous(t + 0.5 * h_, ex_mid_);
            exogenous(t + h_, ex1_);

            derivative(t, s, ex0_, k1);
            axpy(s, 0.5 * h_, k1, stage);
            derivative(t + 0.5 * h_, stage, ex_mid_, k2);
            axpy(s, 0.5 * h_, k2, stage);
            derivative(t + 0.5 * h_, stage, ex_mid_, k3);
            axpy(s, h_, k3, stage);
            derivative(t + h_, stage, ex1_, k4);
            for (std::size_t i = 0; i < dim_; ++i) s[i] += h_ / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

            if (modes_.adaptive) confine(s);
            const double t_next = static_cast<double>(step + 1) * h_;
            u_hist_.push(t_next, s[U]);
            uref_hist_.push(t_next, s[UR]);

            const bool blown = diverging(s);
            if (blown || (step + 1) % stride == 0) record(trace, t_next, s);
            if (blown) {
                trace.diverged = true;
                trace.diverged_index = trace.size() - 1;
                break;
            }
        }
        return trace;
    }

private:
    void exogenous(double t, Exogenous& e) const {
        for (std::size_t i = 0; i < n_; ++i) e.theta[i] = signal_eval(cfg_.theta_signal[i], t);
        e.sigma = signal_eval(cfg_.sigma_signal, t);
        e.yd = signal_eval(cfg_.yd_signal, t);
    }

    static void axpy(const std::vector<double>& s, double a, const std::vector<double>& k, std::vector<double>& out) {
        for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + a * k[i];
    }

    double delayed(const HistoryBuffer& hist, double t, double delay, double current) const {
        if (delay == 0.0) return current;
        return hist.lookup(t - delay);
    }

    // out = A_m v + b * scalar, over n entries starting at the given offsets
    void plant_rhs(const std::vector<double>& s, std::size_t v, double input, std::vector<double>& out,
                   std::size_t o) const {
        for (std::size_t i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n_; ++j) acc += cfg_.A_m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * s[v + j];
            out[o + i] = acc + cfg_.b(static_cast<Eigen::Index>(i)) * input;
        }
    }

    double dot_theta(const std::vector<double>& s, std::size_t v, std::span<const double> theta) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i) acc += theta[i] * s[v + i];
        return acc;
    }

    void derivative(double t, const std::vector<double>& s, const Exogenous& ex, std::vector<double>& d) {
        std::fill(d.begin(), d.end(), 0.0);
        plant_rhs(s, XD, ex.yd, d, XD);

        if (modes_.adaptive) {
            const double u_tau = delayed(u_hist_, t, cfg_.tau, s[U]);
            const double u_tau_hat = delayed(u_hist_, t, cfg_.tau_hat, s[U]);
            const double eta = dot_theta(s, X, ex.theta) + ex.sigma;
            plant_rhs(s, X, u_tau + eta, d, X);

            const std::span<const double> theta_hat(s.data() + TH, n_);
            const double eta_hat = dot_theta(s, X, theta_hat) + s[SH];
            // predictor: A_m x + A_sp x~ + b (u(t - tau_hat) + theta_hat^T x + sigma_hat)
            plant_rhs(s, X, u_tau_hat + eta_hat, d, XH);
            double xt_pb = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n_; ++j) {
                    acc += cfg_.A_sp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * (s[XH + j] - s[X + j]);
                }
                d[XH + i] += acc;
                xt_pb += (s[XH + i] - s[X + i]) * pb_(static_cast<Eigen::Index>(i));
            }

            d[U] = -cfg_.k * (s[U] + eta_hat - cfg_.k_d * ex.yd);

            for (std::size_t i = 0; i < n_; ++i) raw_[i] = -xt_pb * s[X + i];
            proj(theta_hat, raw_, cfg_.theta_b, cfg_.nu, projected_);
            for (std::size_t i = 0; i < n_; ++i) d[TH + i] = cfg_.Gamma * projected_[i];
            d[SH] = cfg_.Gamma * proj(s[SH], -xt_pb, cfg_.sigma_bar_b, cfg_.nu);
        }

        if (modes_.reference) {
            const double ur_tau = delayed(uref_hist_, t, cfg_.tau, s[UR]);
            const double ur_tau_hat = delayed(uref_hist_, t, cfg_.tau_hat, s[UR]);
            const double eta_ref = dot_theta(s, XR, ex.theta) + ex.sigma;
            plant_rhs(s, XR, ur_tau + eta_ref, d, XR);
            d[UR] = -cfg_.k * (ur_tau - ur_tau_hat + s[UR] + eta_ref - cfg_.k_d * ex.yd);
        }
    }

    // keeps the estimates inside their balls after each full step
    void confine(std::vector<double>& s) const {
        double sq = 0.0;
        for (std::size_t i = 0; i < n_; ++i) sq += s[TH + i] * s[TH + i];
        const double norm = std::sqrt(sq);
        if (norm > cfg_.theta_b * (1.0 + 1e-9)) {
            for (std::size_t i = 0; i < n_; ++i) s[TH + i] *= cfg_.theta_b / norm;
        }
        if (std::abs(s[SH]) > cfg_.sigma_bar_b * (1.0 + 1e-9)) s[SH] = std::copysign(cfg_.sigma_bar_b, s[SH]);
    }

    bool diverging(const std::vector<double>& s) const {
        for (std::size_t i = 0; i < n_; ++i) {
            if (modes_.adaptive && !(std::abs(s[X + i]) <= kDivergenceThreshold)) return true;
            if (modes_.reference && !(std::abs(s[XR + i]) <= kDivergenceThreshold)) return true;
            if (!(std::abs(s[XD + i]) <= kDivergenceThreshold)) return true;
        }
        return false;
    }

    Vector slice(const std::vector<double>& s, std::size_t off) const {
        Vector v(static_cast<Eigen::Index>(n_));
        for (std::size_t i = 0; i < n_; ++i) v(static_cast<Eigen::Index>(i)) = s[off + i];
        return v;
    }

    void record(SimTrace& tr, double t, const std::vector<double>& s) const {
        tr.t.push_back(t);
        const Vector xd = slice(s, XD);
        tr.y_des.push_back(cfg_.c.dot(xd));
        if (modes_.adaptive) {
            Vector x = slice(s, X);
            tr.y.push_back(cfg_.c.dot(x));
            tr.x.push_back(std::move(x));
            tr.x_hat.push_back(slice(s, XH));
            tr.u.push_back(s[U]);
            tr.theta_hat.push_back(slice(s, TH));
            tr.sigma_hat.push_back(s[SH]);
        }
        if (modes_.reference) {
            Vector xr = slice(s, XR);
            tr.y_ref.push_back(cfg_.c.dot(xr));
            tr.x_ref.push_back(std::move(xr));
            tr.u_ref.push_back(s[UR]);
        }
    }

    const ScenarioConfig& cfg_;
    Modes modes_;
    std::size_t n_;
    double h_;
    HistoryBuffer u_hist_;
    HistoryBuffer uref_hist_;
    Vector pb_;
    std::size_t X = 0, XH = 0, U = 0, TH = 0, SH = 0, XD = 0, XR = 0, UR = 0, dim_ = 0;
    Exogenous ex0_, ex_mid_, ex1_;
    std::vector<double> raw_;
    std::vector<double> projected_;
};

}  // namespace

SimTrace simulate_closed_loop(const ScenarioConfig& cfg) {
    return ClosedLoop(cfg, {true, cfg.simulate_reference}).run();
}

SimTrace simulate_reference(const ScenarioConfig& cfg) { return ClosedLoop(cfg, {false, true}).run(); }

SimTrace simulate_desired(const ScenarioConfig& cfg) { return ClosedLoop(cfg, {false, false}).run(); }

double sup_norm(const std::vector<Vector>& column) {
    double m = 0.0;
    for (const Vector& v : column) m = std::max(m, v.cwiseAbs().maxCoeff());
    return m;
}

}  // namespace delayctl
