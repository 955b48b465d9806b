#pragma once

// Monte Carlo paths of X_t = p t + sigma W_t + (compound Poisson jumps).
//
// Jumps are placed exactly in time. Between consecutive event times (grid
// points and jump arrivals) the continuous part is a Brownian motion with
// drift, whose minimum given both endpoints is drawn exactly from the bridge
// law when bridge correction is on. Ruin at level u means X_t <= -u for some
// t in (0, T]; one running minimum per path serves every u at once.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "levyruin/format.hpp"
#include "levyruin/laplace_exponent.hpp"
#include "levyruin/levy_model.hpp"
#include "levyruin/quadrature.hpp"
#include "levyruin/rng.hpp"
#include "levyruin/ruin_classifier.hpp"

namespace levyruin {

struct SimulationConfig {
    double horizon = 1000.0;
    double dt = 0.1;
    std::uint64_t n_paths = 10000;
    std::uint64_t master_seed = 1;
    bool bridge_correction = true;
    unsigned workers = 1;

    void validate() const {
        if (!(horizon > 0.0) || !std::isfinite(horizon))
            throw std::invalid_argument("simulation: horizon must be positive and finite");
        if (!(dt > 0.0) || !(dt <= horizon)) throw std::invalid_argument("simulation: dt must be in (0, horizon]");
        if (n_paths < 1) throw std::invalid_argument("simulation: n_paths must be >= 1");
        if (workers < 1) throw std::invalid_argument("simulation: workers must be >= 1");
    }
};

/// max(1e3, 50 u / delta) for delta > 0, else 1e3.
inline double default_horizon(double delta, double u_max) {
    if (delta > 0.0) return std::max(1e3, 50.0 * u_max / delta);
    return 1e3;
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

enum class Verdict { certified, violation, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::certified: return "certified";
        case Verdict::violation: return "violation";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct RuinEstimate {
    double u = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t ruined = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    double bound = std::numeric_limits<double>::quiet_NaN();
    std::optional<RuinCase> ruin_case;
    Verdict verdict = Verdict::inconclusive;
};

/// Sample of jump sizes for tempered Pareto claims, by inversion of a
/// tabulated distribution function. Cells are uniform in log(y / cutoff);
/// cell masses come from quadrature and the density is taken log-linear
/// inside a cell.
class TemperedParetoSampler {
public:
    static constexpr std::size_t cells = 2048;

    explicit TemperedParetoSampler(const TemperedParetoNegative& tp) : tp_(tp) {
        const double y_max = tp.cutoff + 50.0 / tp.alpha;
        const double v_max = std::log(y_max / tp.cutoff);
        y_.resize(cells + 1);
        log_f_.resize(cells + 1);
        for (std::size_t i = 0; i <= cells; ++i) {
            y_[i] = tp.cutoff * std::exp(v_max * static_cast<double>(i) / cells);
            log_f_[i] = log_density(y_[i]);
        }
        y_[cells] = y_max;
        cdf_.resize(cells + 1);
        cdf_[0] = 0.0;
        const auto f = [this](double y) { return std::exp(log_density(y)); };
        for (std::size_t i = 0; i < cells; ++i)
            cdf_[i + 1] = cdf_[i] + quad::integrate(f, y_[i], y_[i + 1], 1e-12, 16).value;
        const auto tail = quad::integrate(f, y_max, quad::infinity, 1e-10, 64).value;
        total_ = cdf_[cells] + tail;
    }

    /// Total mass of the (unnormalised) measure.
    double mass() const { return total_; }

    /// Positive claim size y >= cutoff.
    double operator()(Xoshiro256pp& rng) const {
        const double target = rng.uniform() * total_;
        if (target >= cdf_[cells]) return y_[cells] + rng.exponential() / tp_.alpha;
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
        const std::size_t i = static_cast<std::size_t>(it - cdf_.begin()) - 1;
        const double w = (target - cdf_[i]) / (cdf_[i + 1] - cdf_[i]);
        const double h = y_[i + 1] - y_[i];
        const double k = (log_f_[i] - log_f_[i + 1]) / h;
        double s = w * h;
        if (k * h > 1e-12) s = -std::log1p(w * std::expm1(-k * h)) / k;
        return std::clamp(y_[i] + s, y_[i], y_[i + 1]);
    }

private:
    double log_density(double y) const {
        return std::log(tp_.scale) - tp_.power * std::log(y) - tp_.alpha * y;
    }

    TemperedParetoNegative tp_;
    std::vector<double> y_;
    std::vector<double> log_f_;
    std::vector<double> cdf_;
    double total_ = 0.0;
};

/// Compound Poisson part of a triplet: total rate plus a size sampler that
/// first picks a component in proportion to its rate.
class JumpSampler {
public:
    explicit JumpSampler(const LevyTriplet& t) {
        for (const auto& c : t.jumps.components()) {
            Entry e{c, jump_rate(c), std::nullopt};
            if (const auto* tp = std::get_if<TemperedParetoNegative>(&c)) {
                e.tempered.emplace(*tp);
                e.rate = e.tempered->mass();
            }
            rate_ += e.rate;
            entries_.push_back(std::move(e));
        }
        double acc = 0.0;
        for (const auto& e : entries_) {
            acc += e.rate;
            cumulative_.push_back(acc / rate_);
        }
    }

    double rate() const { return rate_; }

    /// Signed jump size.
    double operator()(Xoshiro256pp& rng) const {
        std::size_t k = 0;
        if (entries_.size() > 1) {
            const double w = rng.uniform();
            while (k + 1 < entries_.size() && w > cumulative_[k]) ++k;
        }
        const Entry& e = entries_[k];
        return std::visit(detail::overloaded{
                              [&](const ExponentialNegative& c) { return -rng.exponential() / c.alpha; },
                              [&](const ExponentialPositive& c) { return rng.exponential() / c.alpha; },
                              [&](const TemperedParetoNegative&) { return -(*e.tempered)(rng); },
                          },
                          e.component);
    }

private:
    struct Entry {
        JumpComponent component;
        double rate;
        std::optional<TemperedParetoSampler> tempered;
    };
    std::vector<Entry> entries_;
    std::vector<double> cumulative_;
    double rate_ = 0.0;
};

/// Minimum over (0, h] of a Brownian bridge from a to b with variance rate
/// sigma2, given a uniform v in (0, 1). Monotone in v.
inline double bridge_minimum(double a, double b, double sigma2, double h, double v) {
    const double d = b - a;
    return 0.5 * (a + b - std::sqrt(d * d - 2.0 * sigma2 * h * std::log(v)));
}

namespace detail {

// Random lanes of a path; each gets its own stream so that switching the
// bridge correction off leaves the Brownian and jump draws unchanged.
enum Lane : std::uint64_t { brownian_lane = 1, jump_lane = 2, bridge_lane = 3 };

/// Shared per-run state for walking paths.
struct PathModel {
    const LevyTriplet& triplet;
    const SimulationConfig& config;
    const JumpSampler& jumps;
    double sigma;
};

/// Walks one path on (0, T]. `visit(t, x)` is called at every event point
/// with the post-event value; `visit_min(m)` receives each segment
/// minimum (including bridge minima). Stops early when `stop()` is true.
template <class Visit, class VisitMin, class Stop>
void walk_path(const PathModel& m, std::uint64_t path_index, Visit&& visit, VisitMin&& visit_min, Stop&& stop) {
    auto brownian = Xoshiro256pp::stream(m.config.master_seed, path_index, brownian_lane);
    auto jump_rng = Xoshiro256pp::stream(m.config.master_seed, path_index, jump_lane);
    auto bridge_rng = Xoshiro256pp::stream(m.config.master_seed, path_index, bridge_lane);
    std::normal_distribution<double> normal;

    const double T = m.config.horizon;
    const double p = m.triplet.premium;
    const bool diffusive = m.sigma > 0.0;
    const double lambda = m.jumps.rate();
    double next_jump = lambda > 0.0 ? jump_rng.exponential() / lambda : std::numeric_limits<double>::infinity();

    double t = 0.0;
    double x = 0.0;
    std::uint64_t step = 0;
    while (t < T) {
        double next_grid = T;
        if (diffusive) next_grid = std::min(T, static_cast<double>(step + 1) * m.config.dt);
        const bool jump_now = next_jump <= next_grid;
        const double t_next = jump_now ? next_jump : next_grid;
        const double h = t_next - t;
        double x_next = x + p * h;
        if (diffusive && h > 0.0) x_next += m.sigma * std::sqrt(h) * normal(brownian);
        if (diffusive && m.config.bridge_correction) {
            visit_min(bridge_minimum(x, x_next, m.sigma * m.sigma, h, bridge_rng.uniform()));
        } else {
            visit_min(x_next);
        }
        t = t_next;
        x = x_next;
        visit(t, x);
        if (jump_now) {
            x += m.jumps(jump_rng);
            visit_min(x);
            visit(t, x);
            next_jump = t + jump_rng.exponential() / lambda;
        } else {
            ++step;
        }
        if (stop()) return;
    }
}

}  // namespace detail

struct PathSkeleton {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> running_min;  ///< min over (0, times[i]], bridge minima included
};

/// Event points of one path, deterministic in (master_seed, path_index).
/// Jump instants appear twice: pre-jump then post-jump value.
inline PathSkeleton simulate_path(const LevyTriplet& t, const SimulationConfig& cfg, std::uint64_t path_index) {
    require_valid(t);
    cfg.validate();
    const JumpSampler jumps(t);
    const detail::PathModel m{t, cfg, jumps, std::sqrt(t.sigma2)};
    PathSkeleton s;
    double lowest = std::numeric_limits<double>::infinity();
    detail::walk_path(
        m, path_index,
        [&](double time, double x) {
            s.times.push_back(time);
            s.values.push_back(x);
            s.running_min.push_back(lowest);
        },
        [&](double v) { lowest = std::min(lowest, v); }, [] { return false; });
    return s;
}

/// Minimum of X over (0, T] for one path, or any value <= stop_level once
/// the path has gone that low.
inline double path_minimum(const detail::PathModel& m, std::uint64_t path_index, double stop_level) {
    double lowest = std::numeric_limits<double>::infinity();
    detail::walk_path(
        m, path_index, [](double, double) {}, [&](double v) { lowest = std::min(lowest, v); },
        [&] { return lowest <= stop_level; });
    return lowest;
}

/// Ruin counts for every u in `us` from the same set of paths.
inline std::vector<std::uint64_t> count_ruined(const LevyTriplet& t, const SimulationConfig& cfg,
                                               const std::vector<double>& us) {
    require_valid(t);
    cfg.validate();
    if (us.empty()) return {};
    for (double u : us)
        if (!(u >= 0.0) || !std::isfinite(u)) throw std::invalid_argument("simulation: u must be finite and >= 0");
    const double u_max = *std::max_element(us.begin(), us.end());
    const JumpSampler jumps(t);
    const detail::PathModel m{t, cfg, jumps, std::sqrt(t.sigma2)};

    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, cfg.n_paths));
    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(us.size(), 0));
    const auto run = [&](unsigned w) {
        const std::uint64_t begin = cfg.n_paths * w / workers;
        const std::uint64_t end = cfg.n_paths * (w + 1) / workers;
        auto& counts = partial[w];
        for (std::uint64_t i = begin; i < end; ++i) {
            const double low = path_minimum(m, i, -u_max);
            for (std::size_t j = 0; j < us.size(); ++j)
                if (low <= -us[j]) ++counts[j];
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }
    std::vector<std::uint64_t> total(us.size(), 0);
    for (const auto& part : partial)
        for (std::size_t j = 0; j < us.size(); ++j) total[j] += part[j];
    return total;
}

inline RuinEstimate make_estimate(double u, std::uint64_t n, std::uint64_t ruined,
                                  const std::optional<RuinClassification>& cls) {
    RuinEstimate e;
    e.u = u;
    e.n_paths = n;
    e.ruined = ruined;
    e.estimate = static_cast<double>(ruined) / static_cast<double>(n);
    e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(n));
    if (cls) {
        e.ruin_case = cls->ruin_case;
        e.bound = bound(*cls, u);
        e.verdict = e.estimate <= e.bound + 3.0 * e.std_error ? Verdict::certified : Verdict::violation;
    }
    return e;
}

/// Ruin frequencies on (0, T] for each u, compared with the classification
/// bound when one is given (verdict inconclusive otherwise).
inline std::vector<RuinEstimate> estimate_ruin(const LevyTriplet& t, const SimulationConfig& cfg,
                                               const std::vector<double>& us,
                                               const std::optional<RuinClassification>& cls = std::nullopt) {
    const auto counts = count_ruined(t, cfg, us);
    std::vector<RuinEstimate> out;
    out.reserve(us.size());
    for (std::size_t j = 0; j < us.size(); ++j) out.push_back(make_estimate(us[j], cfg.n_paths, counts[j], cls));
    return out;
}

inline RuinEstimate estimate_ruin(const LevyTriplet& t, const SimulationConfig& cfg, double u,
                                  const std::optional<RuinClassification>& cls = std::nullopt) {
    return estimate_ruin(t, cfg, std::vector<double>{u}, cls).front();
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// Exact draw of X_t (no path needed).
inline double sample_endpoint(const LevyTriplet& t, const JumpSampler& jumps, double time, std::uint64_t seed,
                              std::uint64_t index) {
    auto rng = Xoshiro256pp::stream(seed, index, detail::brownian_lane);
    auto jump_rng = Xoshiro256pp::stream(seed, index, detail::jump_lane);
    double x = t.premium * time;
    if (t.sigma2 > 0.0) x += std::sqrt(t.sigma2 * time) * std::normal_distribution<double>()(rng);
    if (jumps.rate() > 0.0) {
        const auto n = std::poisson_distribution<std::uint64_t>(jumps.rate() * time)(jump_rng);
        for (std::uint64_t k = 0; k < n; ++k) x += jumps(jump_rng);
    }
    return x;
}

struct MeanCheck {
    double target = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    bool pass = false;

    double z() const { return std_error > 0.0 ? (mean - target) / std_error : 0.0; }
};

namespace detail {

template <class F>
MeanCheck mean_check(std::uint64_t n, double target, double slack, F&& draw) {
    // Welford keeps the variance stable when the mean is large.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double v = draw(i);
        const double d = v - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (v - mean);
    }
    MeanCheck c;
    c.target = target;
    c.n = n;
    c.mean = mean;
    c.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    c.pass = std::fabs(mean - target) <= 4.0 * c.std_error + slack;
    return c;
}

}  // namespace detail

/// mean(X_T / T) against delta, pass within 4 standard errors.
inline MeanCheck lln_diagnostic(const LevyTriplet& t, const SimulationConfig& cfg) {
    require_valid(t);
    cfg.validate();
    const JumpSampler jumps(t);
    const double T = cfg.horizon;
    return detail::mean_check(cfg.n_paths, delta(t), 1e-12 * std::max(1.0, std::fabs(delta(t))), [&](std::uint64_t i) {
        return sample_endpoint(t, jumps, T, cfg.master_seed, i) / T;
    });
}

struct MartingaleCheck {
    double gamma = 0.0;
    double time = 0.0;
    MeanCheck check;  ///< target e^{t Psi(gamma)}
};

/// mean(e^{-gamma X_t}) against e^{t Psi(gamma)} for one gamma in [0, gamma_c / 2),
/// where the estimator has finite variance.
inline MartingaleCheck exponential_moment_check(const LaplaceExponent& le, double gamma, double time,
                                                std::uint64_t n_paths, std::uint64_t seed) {
    if (!(gamma >= 0.0) || !(gamma < le.gamma_c()))
        throw std::domain_error("martingale check: gamma must be in [0, gamma_c)");
    if (!(time > 0.0)) throw std::invalid_argument("martingale check: t must be positive");
    const JumpSampler jumps(le.triplet());
    MartingaleCheck out{gamma, time, {}};
    const double target = std::exp(time * le.psi(gamma));
    out.check = detail::mean_check(n_paths, target, 0.0, [&](std::uint64_t i) {
        return std::exp(-gamma * sample_endpoint(le.triplet(), jumps, time, seed, i));
    });
    return out;
}

struct MartingaleReport {
    MartingaleCheck root;                ///< at gamma0, target 1
    std::vector<MartingaleCheck> others; ///< non-root gammas
    bool pass() const {
        bool ok = root.check.pass;
        for (const auto& c : others) ok = ok && c.check.pass;
        return ok;
    }
};

/// e^{-gamma0 X_t} has mean 1 when Psi(gamma0) = 0; additionally checks the
/// exponential moment identity at gamma0 / 2 and one gamma above gamma0.
inline MartingaleReport martingale_diagnostic(const LevyTriplet& t, double gamma0, double time,
                                              std::uint64_t n_paths, std::uint64_t seed) {
    const LaplaceExponent le(t);
    if (!(gamma0 >= 0.0) || !(gamma0 < le.gamma_c()))
        throw std::domain_error("martingale diagnostic: gamma0 must be in [0, gamma_c)");
    MartingaleReport r;
    r.root = exponential_moment_check(le, gamma0, time, n_paths, seed);
    r.root.check.target = 1.0;
    r.root.check.pass = std::fabs(r.root.check.mean - 1.0) <= 4.0 * r.root.check.std_error + 1e-12;
    if (gamma0 > 0.0) {
        const double half_c = 0.5 * le.gamma_c();
        double upper = 1.5 * gamma0;
        if (!(upper < half_c)) upper = 0.5 * (gamma0 + half_c);
        if (!(upper < half_c) || upper == gamma0) upper = 0.25 * gamma0;
        for (double g : {0.5 * gamma0, upper}) r.others.push_back(exponential_moment_check(le, g, time, n_paths, seed + 1));
    }
    return r;
}

}  // namespace levyruin
