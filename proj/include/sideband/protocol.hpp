#pragma once

#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sideband/entanglement.hpp"

namespace sideband {

/// Worker cap: SIDEBAND_THREADS if set, else available parallelism.
inline std::size_t worker_count(std::size_t jobs) {
    if (jobs <= 1) return jobs;
    std::size_t cap = std::thread::hardware_concurrency();
    if (cap == 0) cap = 1;
    if (const char* env = std::getenv("SIDEBAND_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) cap = static_cast<std::size_t>(v);
    }
    return std::min(cap, jobs);
}

/// Run fn(0..n-1) on a small pool; results must be written to per-index
/// slots by the caller, which keeps the output deterministic.
template <class Fn>
inline void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

/// One sample of every tracked observable.
struct ObservableRow {
    double t = 0.0;
    double C12 = 0.0;
    double EN_AB = 0.0;
    double Pgg = 0.0;
    double w2_plus = 0.0;
    double w2_minus = 0.0;
    std::optional<double> EN_2plus;   // absent when the manifold weight is ~0
    std::optional<double> EN_2minus;
    double edge_leakage = 0.0;
    double norm_drift = 0.0;
};

using ObservableSeries = std::vector<ObservableRow>;

/// Generic companion table (grid scenarios).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ScenarioResult {
    std::string scenario_id;
    ProtocolParams params;
    ObservableSeries series;
    std::map<std::string, double> summary;
    Table table;
};

namespace detail {

inline double manifold_weight_state(const JointPureState& psi, const SidebandWindow& w,
                                    ManifoldSign sign) {
    const int de = w.dim();
    const int i0 = w.index_of(w.n0);
    const int is = w.index_of(sign == ManifoldSign::plus ? w.n0 + 1 : w.n0 - 1);
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
        s += std::norm(psi.amp[((is * de + i0) * 4) + k]);
        s += std::norm(psi.amp[((i0 * de + is) * 4) + k]);
    }
    return s;
}

}  // namespace detail

/// Expectation of the joint excitation number n_A + n_B + (s1z + s2z)/2.
inline double excitation_expectation(const JointPureState& psi, const SidebandWindow& w) {
    const int de = w.dim();
    double acc = 0.0;
    for (int a = 0; a < de; ++a)
        for (int b = 0; b < de; ++b)
            for (int s1 = 0; s1 < 2; ++s1)
                for (int s2 = 0; s2 < 2; ++s2) {
                    const double val = w.sideband_at(a) + w.sideband_at(b) +
                                       (s1 ? 0.5 : -0.5) + (s2 ? 0.5 : -0.5);
                    acc += val * std::norm(psi.amp[((a * de + b) * 2 + s1) * 2 + s2]);
                }
    return acc;
}

/// Full observable extraction for one sampled state.
inline ObservableRow observables_from_state(const JointPureState& psi, const SidebandWindow& w,
                                            double t, double edge_leakage, double norm_drift,
                                            std::atomic<long>* wootters_fallbacks = nullptr) {
    ObservableRow row;
    row.t = t;
    row.edge_leakage = edge_leakage;
    row.norm_drift = norm_drift;

    const DensityMatrix rho12 = partial_trace(psi, {Slot::Tls1, Slot::Tls2});
    bool used_wootters = false;
    row.C12 = concurrence_auto(rho12, &used_wootters);
    if (used_wootters && wootters_fallbacks) wootters_fallbacks->fetch_add(1);

    const DensityMatrix rhoAB = partial_trace(psi, {Slot::ElectronA, Slot::ElectronB});
    row.EN_AB = log_negativity(rhoAB, Slot::ElectronB);
    row.Pgg = herald(psi, TlsOutcome::gg).probability;
    row.w2_plus = manifold_weight(rhoAB, ManifoldSign::plus, w);
    row.w2_minus = manifold_weight(rhoAB, ManifoldSign::minus, w);
    if (row.w2_plus >= detail::kManifoldWeightMin)
        row.EN_2plus = manifold_report(rhoAB, ManifoldSign::plus, w).log_negativity;
    if (row.w2_minus >= detail::kManifoldWeightMin)
        row.EN_2minus = manifold_report(rhoAB, ManifoldSign::minus, w).log_negativity;
    return row;
}

inline ObservableSeries series_from_trajectory(const Trajectory& traj, const SidebandWindow& w,
                                               std::atomic<long>* wootters_fallbacks = nullptr) {
    ObservableSeries series(traj.times.size());
    parallel_for(traj.times.size(), [&](std::size_t i) {
        series[i] = observables_from_state(traj.states[i], w, traj.times[i],
                                           traj.edge_leakage[i], traj.norm_drift[i],
                                           wootters_fallbacks);
    });
    return series;
}

/// Closed-form series for the resonant Bell-resource run: formula values
/// where closed forms exist, closed-form state otherwise. No integration.
inline ObservableSeries analytic_series(const ProtocolParams& p,
                                        const std::vector<double>& times) {
    ObservableSeries series(times.size());
    parallel_for(times.size(), [&](std::size_t i) {
        const double t = times[i];
        const double g_t = pulse_area(p.envelope_a, t);
        ObservableRow row;
        row.t = t;
        row.C12 = closed_form_C12(g_t);
        row.Pgg = closed_form_Pgg(g_t);
        row.w2_plus = closed_form_Pgg(g_t);
        row.w2_minus = closed_form_Pgg(g_t);
        if (row.w2_plus >= detail::kManifoldWeightMin) {
            row.EN_2plus = 1.0;
            row.EN_2minus = 1.0;
        }
        const JointPureState psi = closed_form_four_partite(p, t);
        const DensityMatrix rhoAB = partial_trace(psi, {Slot::ElectronA, Slot::ElectronB});
        row.EN_AB = log_negativity(rhoAB, Slot::ElectronB);
        row.edge_leakage = 0.0;
        row.norm_drift = 0.0;
        series[i] = row;
    });
    return series;
}

namespace detail {

inline void enforce_bell_resource(const ProtocolParams& p) {
    if (std::abs(p.alpha - std::numbers::sqrt2 / 2.0) > 1e-12 || p.phi != 0.0)
        throw ValidationError("scenario requires the Bell resource alpha=1/sqrt(2), phi=0");
}

inline void enforce_resonance(const ProtocolParams& p) {
    if (std::abs(p.detuning()) > 1e-12)
        throw OffResonanceError("scenario requires Delta = 0");
}

inline double max_dev(const ObservableSeries& x, const ObservableSeries& y,
                      double ObservableRow::* field) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        m = std::max(m, std::abs(x[i].*field - y[i].*field));
    return m;
}

// First zero crossing of the unclamped X-concurrence margin, linearly
// interpolated between samples. -1 when the margin never crosses.
inline double first_concurrence_zero(const Trajectory& traj) {
    double prev_margin = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const DensityMatrix rho12 = partial_trace(traj.states[i], {Slot::Tls1, Slot::Tls2});
        const double margin = x_concurrence_margin(rho12);
        if (i > 0 && prev_margin > 0.0 && margin <= 0.0) {
            const double t0 = traj.times[i - 1], t1 = traj.times[i];
            return t0 + (t1 - t0) * prev_margin / (prev_margin - margin);
        }
        prev_margin = margin;
    }
    return -1.0;
}

}  // namespace detail

struct Fig1Result {
    ScenarioResult rwa;
    ScenarioResult full;
    ScenarioResult analytic;
};

/// Resonant Bell-resource dynamics: RWA numerics, full-model numerics and
/// the closed-form benchmark on one time grid.
inline Fig1Result run_fig1(const ProtocolParams& p, int samples) {
    detail::enforce_resonance(p);
    detail::enforce_bell_resource(p);

    Fig1Result out;
    const Trajectory traj_rwa = evolve(p, Generator::Rwa, samples);
    const Trajectory traj_full = evolve(p, Generator::Full, samples);

    std::atomic<long> fallbacks_rwa{0}, fallbacks_full{0};
    out.rwa = ScenarioResult{"fig1_rwa", p,
                             series_from_trajectory(traj_rwa, p.window, &fallbacks_rwa),
                             {}, {}};
    out.full = ScenarioResult{"fig1_full", p,
                              series_from_trajectory(traj_full, p.window, &fallbacks_full),
                              {}, {}};
    out.analytic = ScenarioResult{"fig1_analytic", p, analytic_series(p, traj_rwa.times),
                                  {}, {}};

    const double g = p.envelope_a.area, T = p.envelope_a.duration;
    const auto sd_analytic =
        (p.envelope_a.shape == PulseShape::Square && g > 0.0) ? sudden_death_time(g, T)
                                                              : std::nullopt;

    auto& s = out.rwa.summary;
    s["sudden_death_numeric"] = detail::first_concurrence_zero(traj_rwa);
    s["sudden_death_analytic"] = sd_analytic ? *sd_analytic : -1.0;
    s["analytic_max_dev_C12"] =
        detail::max_dev(out.rwa.series, out.analytic.series, &ObservableRow::C12);
    s["analytic_max_dev_Pgg"] =
        detail::max_dev(out.rwa.series, out.analytic.series, &ObservableRow::Pgg);
    s["analytic_max_dev_w2_plus"] =
        detail::max_dev(out.rwa.series, out.analytic.series, &ObservableRow::w2_plus);
    s["analytic_max_dev_w2_minus"] =
        detail::max_dev(out.rwa.series, out.analytic.series, &ObservableRow::w2_minus);
    s["analytic_max_dev_EN_AB"] =
        detail::max_dev(out.rwa.series, out.analytic.series, &ObservableRow::EN_AB);
    s["max_norm_drift"] = traj_rwa.max_norm_drift();
    s["max_edge_leakage"] = traj_rwa.max_edge_leakage();
    s["final_EN_AB"] = out.rwa.series.back().EN_AB;
    s["wootters_fallbacks"] = static_cast<double>(fallbacks_rwa.load());

    auto& f = out.full.summary;
    f["rwa_max_dev_C12"] = detail::max_dev(out.full.series, out.rwa.series, &ObservableRow::C12);
    f["rwa_max_dev_Pgg"] = detail::max_dev(out.full.series, out.rwa.series, &ObservableRow::Pgg);
    f["rwa_max_dev_w2_plus"] =
        detail::max_dev(out.full.series, out.rwa.series, &ObservableRow::w2_plus);
    f["max_norm_drift"] = traj_full.max_norm_drift();
    f["max_edge_leakage"] = traj_full.max_edge_leakage();
    f["final_EN_AB"] = out.full.series.back().EN_AB;
    f["wootters_fallbacks"] = static_cast<double>(fallbacks_full.load());

    out.analytic.summary["sudden_death_analytic"] = sd_analytic ? *sd_analytic : -1.0;
    out.analytic.summary["final_EN_AB"] = out.analytic.series.back().EN_AB;
    return out;
}

/// Final state of one RWA/FULL run (integration granularity is unchanged;
/// only the two endpoint samples are stored).
inline JointPureState final_state(const ProtocolParams& p, Generator gen) {
    return evolve(p, gen, 2).states.back();
}

/// Transfer curve: postselected (2,-) log-negativity at t = T against the
/// resource entanglement, on an (alpha, phi) grid under the RWA generator.
inline ScenarioResult run_fig2(const std::vector<double>& alpha_grid,
                               const std::vector<double>& phi_grid, const ProtocolParams& p,
                               int samples) {
    detail::enforce_resonance(p);
    ScenarioResult res;
    res.scenario_id = "fig2";
    res.params = p;
    res.table.columns = {"alpha", "phi", "C12_0", "EN_numeric", "EN_analytic"};

    struct Job {
        double alpha, phi;
    };
    std::vector<Job> jobs;
    for (double a : alpha_grid)
        for (double ph : phi_grid) jobs.push_back({a, ph});
    std::vector<std::vector<double>> rows(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        ProtocolParams q = p;
        q.alpha = jobs[i].alpha;
        q.phi = jobs[i].phi;
        const JointPureState psi = final_state(q, Generator::Rwa);
        const DensityMatrix rhoAB = partial_trace(psi, {Slot::ElectronA, Slot::ElectronB});
        const ManifoldReport rep = manifold_report(rhoAB, ManifoldSign::minus, q.window);
        const double c12_0 = 2.0 * q.alpha * q.beta();
        rows[i] = {q.alpha, q.phi, c12_0, rep.log_negativity, transfer_law(q.alpha)};
    });
    res.table.rows = std::move(rows);

    double max_err = 0.0;
    for (const auto& r : res.table.rows) max_err = std::max(max_err, std::abs(r[3] - r[4]));
    double max_phi_spread = 0.0;
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
        double lo = 1e300, hi = -1e300;
        for (std::size_t j = 0; j < phi_grid.size(); ++j) {
            const double v = res.table.rows[i * phi_grid.size() + j][3];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        max_phi_spread = std::max(max_phi_spread, hi - lo);
    }
    res.summary["max_abs_err_vs_analytic"] = max_err;
    res.summary["max_phi_spread"] = max_phi_spread;
    res.summary["alpha_count"] = static_cast<double>(alpha_grid.size());
    res.summary["phi_count"] = static_cast<double>(phi_grid.size());

    // Reference time series: the Bell-resource run.
    ProtocolParams bell = p;
    bell.alpha = std::numbers::sqrt2 / 2.0;
    bell.phi = 0.0;
    res.series = series_from_trajectory(evolve(bell, Generator::Rwa, samples), bell.window);
    return res;
}

/// Detuning sweep at fixed pulse area: omega is held, omega0 = omega - delta.
inline ScenarioResult run_detuning_sweep(const std::vector<double>& delta_grid,
                                         const ProtocolParams& p, Generator gen, int samples) {
    for (double d : delta_grid) {
        bool has_partner = false;
        for (double e : delta_grid)
            if (std::abs(d + e) < 1e-12) has_partner = true;
        if (!has_partner)
            throw ValidationError("detuning grid must be symmetric around zero");
    }
    ScenarioResult res;
    res.scenario_id = "detuning";
    res.params = p;
    res.table.columns = {"delta", "w2_plus", "herald_fidelity", "EN_2plus", "Pgg"};
    res.table.rows.resize(delta_grid.size());
    parallel_for(delta_grid.size(), [&](std::size_t i) {
        ProtocolParams q = p;
        q.omega0 = q.omega - delta_grid[i];
        const JointPureState psi = final_state(q, gen);
        const DensityMatrix rhoAB = partial_trace(psi, {Slot::ElectronA, Slot::ElectronB});
        const double w2 = manifold_weight(rhoAB, ManifoldSign::plus, q.window);
        const HeraldOutcome h = herald(psi, TlsOutcome::gg);
        const double fid = herald_fidelity_bell(h, q.window, ManifoldSign::plus);
        const double en = w2 >= detail::kManifoldWeightMin
                              ? manifold_report(rhoAB, ManifoldSign::plus, q.window)
                                    .log_negativity
                              : -1.0;
        res.table.rows[i] = {delta_grid[i], w2, fid, en, h.probability};
    });

    const double g0 = p.envelope_a.peak();
    auto w2_at = [&](double target) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < delta_grid.size(); ++i)
            if (std::abs(delta_grid[i] - target) < std::abs(delta_grid[best] - target))
                best = i;
        return res.table.rows[best][1];
    };
    const double w2_zero = w2_at(0.0);
    res.summary["w2_at_zero"] = w2_zero;
    res.summary["w2_at_plus_4g0"] = w2_at(4.0 * g0);
    res.summary["w2_at_minus_4g0"] = w2_at(-4.0 * g0);
    res.summary["suppressed_at_4g0"] =
        (w2_at(4.0 * g0) < w2_zero && w2_at(-4.0 * g0) < w2_zero) ? 1.0 : 0.0;
    const double w2_10 = std::max(w2_at(10.0 * g0), w2_at(-10.0 * g0));
    res.summary["w2_ratio_at_10g0"] = w2_zero > 0.0 ? w2_10 / w2_zero : 0.0;
    double sym = 0.0;
    for (std::size_t i = 0; i < delta_grid.size(); ++i)
        for (std::size_t j = 0; j < delta_grid.size(); ++j)
            if (std::abs(delta_grid[i] + delta_grid[j]) < 1e-12)
                sym = std::max(sym, std::abs(res.table.rows[i][1] - res.table.rows[j][1]));
    res.summary["symmetry_max_diff"] = sym;

    // Reference series at Delta = 0.
    res.series = series_from_trajectory(evolve(p, gen, samples), p.window);
    return res;
}

/// Least-squares line through (x, y); also reports the RMS residual.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) throw FitDegenerateError("fit_line: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw FitDegenerateError("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    return f;
}

/// Heralded-branch infidelity L(T) = 1 - F(gg-heralded electron state,
/// Bell target) at fixed area over a grid of durations, with a log-log
/// slope fit. Points where L is swamped by integrator error are excluded.
inline ScenarioResult run_leakage_scaling(const std::vector<double>& t_grid,
                                          const ProtocolParams& p, Generator gen,
                                          int samples) {
    if (t_grid.size() < 2) throw ValidationError("leakage: need at least two durations");
    double tmin = t_grid.front(), tmax = t_grid.front();
    for (double t : t_grid) {
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    if (tmax < 10.0 * tmin - 1e-9)
        throw ValidationError("leakage: duration grid must span at least one decade");

    ScenarioResult res;
    res.scenario_id = "leakage";
    res.params = p;
    res.table.columns = {"T", "leakage", "norm_drift", "used_in_fit"};
    res.table.rows.resize(t_grid.size());
    parallel_for(t_grid.size(), [&](std::size_t i) {
        ProtocolParams q = p;
        q.envelope_a.duration = t_grid[i];
        q.envelope_b.duration = t_grid[i];
        const Trajectory traj = evolve(q, gen, 2);
        const HeraldOutcome h = herald(traj.states.back(), TlsOutcome::gg);
        const double fid = herald_fidelity_bell(h, q.window, ManifoldSign::plus);
        const double leak = 1.0 - fid;
        res.table.rows[i] = {t_grid[i], leak, traj.max_norm_drift(), 0.0};
    });

    std::vector<double> lx, ly;
    bool any_above_floor = false;
    for (auto& row : res.table.rows) {
        const double leak = row[1], drift = row[2];
        if (leak > 1e-14) any_above_floor = true;
        const bool used = leak > 1e-14 && leak > 100.0 * drift;
        row[3] = used ? 1.0 : 0.0;
        if (used) {
            lx.push_back(std::log(row[0]));
            ly.push_back(std::log(leak));
        }
    }
    if (!any_above_floor)
        throw FitDegenerateError("leakage: all points below 1e-14");
    const LineFit fit = fit_line(lx, ly);
    res.summary["slope"] = fit.slope;
    res.summary["intercept"] = fit.intercept;
    res.summary["residual_rms"] = fit.residual_rms;
    res.summary["points_used"] = static_cast<double>(lx.size());

    ProtocolParams ref = p;
    ref.envelope_a.duration = tmin;
    ref.envelope_b.duration = tmin;
    res.series = series_from_trajectory(evolve(ref, gen, samples), ref.window);
    return res;
}

/// Final target-manifold weight as a function of applied detuning; used to
/// locate the effective-resonance shift.
inline std::vector<double> detuning_response(const ProtocolParams& p,
                                             const std::vector<double>& delta_scan,
                                             Generator gen) {
    std::vector<double> w2(delta_scan.size());
    parallel_for(delta_scan.size(), [&](std::size_t i) {
        ProtocolParams q = p;
        q.omega0 = q.omega - delta_scan[i];
        const JointPureState psi = final_state(q, gen);
        w2[i] = detail::manifold_weight_state(psi, q.window, ManifoldSign::plus);
    });
    return w2;
}

/// Empirical effective-detuning shift: the detuning maximizing the final
/// w2(+), refined by a three-point parabola around the grid maximum.
inline double fit_effective_detuning(const ProtocolParams& p,
                                     const std::vector<double>& delta_scan, Generator gen) {
    if (delta_scan.size() < 3)
        throw ValidationError("fit_effective_detuning: need at least three scan points");
    const std::vector<double> w2 = detuning_response(p, delta_scan, gen);
    std::size_t k = 0;
    for (std::size_t i = 1; i < w2.size(); ++i)
        if (w2[i] > w2[k]) k = i;
    if (k == 0 || k + 1 == w2.size())
        throw NoInteriorMaxError("fit_effective_detuning: maximum sits on the scan boundary");
    const double x1 = delta_scan[k - 1], x2 = delta_scan[k], x3 = delta_scan[k + 1];
    const double y1 = w2[k - 1], y2 = w2[k], y3 = w2[k + 1];
    const double num = (x2 - x1) * (x2 - x1) * (y2 - y3) - (x2 - x3) * (x2 - x3) * (y2 - y1);
    const double den = (x2 - x1) * (y2 - y3) - (x2 - x3) * (y2 - y1);
    if (den == 0.0) return x2;
    return x2 - 0.5 * num / den;
}

/// Bloch-Siegert-style scenario wrapper around fit_effective_detuning.
inline ScenarioResult run_bloch_siegert(const std::vector<double>& delta_scan,
                                        const ProtocolParams& p, Generator gen, int samples) {
    ScenarioResult res;
    res.scenario_id = "bloch_siegert";
    res.params = p;
    res.table.columns = {"delta", "w2_plus"};
    const std::vector<double> w2 = detuning_response(p, delta_scan, gen);
    for (std::size_t i = 0; i < delta_scan.size(); ++i)
        res.table.rows.push_back({delta_scan[i], w2[i]});
    const double dstar = fit_effective_detuning(p, delta_scan, gen);
    const double g0 = p.envelope_a.peak();
    res.summary["delta_star"] = dstar;
    res.summary["delta_star_over_g0"] = g0 > 0.0 ? dstar / g0 : 0.0;
    res.summary["scan_points"] = static_cast<double>(delta_scan.size());
    res.series = series_from_trajectory(evolve(p, gen, samples), p.window);
    return res;
}

/// Custom scenario: one run of the configured generator.
inline ScenarioResult run_custom(const ProtocolParams& p, Generator gen, int samples) {
    ScenarioResult res;
    res.scenario_id = std::string("custom_") + to_string(gen);
    res.params = p;
    std::atomic<long> fallbacks{0};
    const Trajectory traj = evolve(p, gen, samples);
    res.series = series_from_trajectory(traj, p.window, &fallbacks);
    res.summary["max_norm_drift"] = traj.max_norm_drift();
    res.summary["max_edge_leakage"] = traj.max_edge_leakage();
    res.summary["final_EN_AB"] = res.series.back().EN_AB;
    res.summary["wootters_fallbacks"] = static_cast<double>(fallbacks.load());
    return res;
}

/// Max absolute FULL-vs-RWA deviation over {C12, Pgg, w2+, w2-} on a shared
/// time grid (cheap observables only).
inline double full_vs_rwa_deviation(const ProtocolParams& p, int samples) {
    const Trajectory rwa = evolve(p, Generator::Rwa, samples);
    const Trajectory full = evolve(p, Generator::Full, samples);
    std::vector<double> dev(samples, 0.0);
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        const DensityMatrix r12r = partial_trace(rwa.states[i], {Slot::Tls1, Slot::Tls2});
        const DensityMatrix r12f = partial_trace(full.states[i], {Slot::Tls1, Slot::Tls2});
        double d = std::abs(concurrence_auto(r12r) - concurrence_auto(r12f));
        d = std::max(d, std::abs(herald(rwa.states[i], TlsOutcome::gg).probability -
                                 herald(full.states[i], TlsOutcome::gg).probability));
        for (ManifoldSign sign : {ManifoldSign::plus, ManifoldSign::minus})
            d = std::max(d, std::abs(detail::manifold_weight_state(rwa.states[i], p.window,
                                                                   sign) -
                                     detail::manifold_weight_state(full.states[i], p.window,
                                                                   sign)));
        dev[i] = d;
    });
    double m = 0.0;
    for (double d : dev) m = std::max(m, d);
    return m;
}

}  // namespace sideband
