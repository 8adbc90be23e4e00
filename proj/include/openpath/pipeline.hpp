#pragma once

// Orchestration: one actual droop fans out into the three mechanism
// predictions. A mechanism failure is captured as a per-droop status and
// the total it feeds becomes a null marker; the other mechanisms are
// unaffected.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "openpath/balance.hpp"
#include "openpath/config.hpp"
#include "openpath/core_math.hpp"
#include "openpath/correlation.hpp"
#include "openpath/csv.hpp"
#include "openpath/errors.hpp"
#include "openpath/resonance.hpp"
#include "openpath/spectra.hpp"

namespace openpath {

inline constexpr const char* kVersion = "0.1.0";

// One expected droop with its status; value is NaN unless status is ok.
struct ExpectedDroop {
    double value = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";

    bool ok() const { return status == "ok"; }

    static ExpectedDroop success(double v) { return {v, "ok"}; }
    static ExpectedDroop failure(const error& e) {
        return {std::numeric_limits<double>::quiet_NaN(), errc_name(e.code())};
    }
};

// The actual droop plus the six expected droops.
struct DroopSet {
    double k_actual;
    ExpectedDroop res_f, res_p;
    ExpectedDroop corr_f, corr_p;
    ExpectedDroop bal_f, bal_p;
};

struct MechanismReport {
    ExpectedDroop f;
    ExpectedDroop p;
    std::optional<double> L_f;
    std::optional<double> L_p;
    std::optional<double> total;
};

struct PipelineResult {
    Reconstruction recon;
    std::array<MechanismReport, 3> mech;  // resonance, correlation, balance

    double k_actual() const { return recon.droop.k; }

    DroopSet droop_set() const {
        return {k_actual(),          mech[0].f, mech[0].p, mech[1].f,
                mech[1].p,           mech[2].f, mech[2].p};
    }

    std::optional<double> L_m() const { return mech[0].total; }
    std::optional<double> L_d() const { return mech[1].total; }
    std::optional<double> L_b() const { return mech[2].total; }

    // The full total-path report, present only when every mechanism ran.
    std::optional<TotalPathReport> complete_totals() const {
        if (mech[0].total && mech[1].total && mech[2].total) {
            return TotalPathReport{*mech[0].total, *mech[1].total,
                                   *mech[2].total};
        }
        return std::nullopt;
    }
};

// Pre-loaded mechanism inputs (the CLI reads them from the configured
// paths; tests can construct them directly).
struct ScenarioInputs {
    WingTrace wing;
    std::vector<HistoryRow> history;
};

namespace detail {

template <typename Fn>
ExpectedDroop try_droop(Fn&& fn) {
    try {
        return ExpectedDroop::success(fn());
    } catch (const error& e) {
        return ExpectedDroop::failure(e);
    }
}

// Combine the actual droop with a mechanism's expected droops; any failure
// leaves the paths and the total as null markers.
template <typename Total>
void finish_mechanism(MechanismReport& rep, double k_actual, Total&& total) {
    if (!rep.f.ok() || !rep.p.ok() || !(k_actual > 0.0)) {
        return;
    }
    rep.L_f = path_estimate(k_actual, rep.f.value);
    rep.L_p = path_estimate(k_actual, rep.p.value);
    rep.total = total(*rep.L_f, *rep.L_p);
}

} // namespace detail

// Run the full prediction with pre-loaded inputs.
inline PipelineResult run_pipeline(const ScenarioConfig& cfg,
                                   const DeviationSeries& f_series,
                                   const DeviationSeries& p_series,
                                   const ScenarioInputs& inputs) {
    validate_reconstruction_params(cfg);

    PipelineResult result{
        reconstruct_droop(f_series, p_series, cfg.k0, cfg.grid, cfg.lambda),
        {}};
    const double k_prev = result.k_actual();

    // Resonance. The lattice and the proper-time sum are also the source of
    // the derived potentials, so keep them around.
    std::optional<WeierstrassLattice> lattice;
    std::optional<double> dtau2;
    auto& res = result.mech[0];
    res.f = detail::try_droop([&] {
        lattice = invariants_qseries(cfg.omega1, cfg.omega2);
        return droop_resonance_f(*lattice).k;
    });
    res.p = detail::try_droop([&] {
        dtau2 = proper_time_sq(inputs.wing);
        return droop_resonance_p(*dtau2).k;
    });
    detail::finish_mechanism(res, k_prev, total_euclidean);

    // Correlation.
    auto& corr = result.mech[1];
    corr.f = detail::try_droop(
        [&] { return droop_corr_f(validate_quad(cfg.quad_omega, cfg.quad_bound)); });
    corr.p = detail::try_droop([&] {
        PotentialPair pot{};
        if (cfg.potential_mode == PotentialMode::explicit_pair) {
            pot = {cfg.v_in, cfg.v_out};
        } else {
            // Chain the resonance potentials into the correlation model.
            if (!lattice) {
                raise(errc::degenerate_lattice,
                      "derived potentials need a valid lattice");
            }
            if (!dtau2 || !(*dtau2 > 0.0)) {
                raise(errc::non_positive_droop,
                      "derived external potential needs a positive proper-time sum");
            }
            pot = {droop_resonance_f(*lattice).v_in, *dtau2};
        }
        return droop_corr_p(potential_correlation(pot));
    });
    detail::finish_mechanism(corr, k_prev, total_ropelength);

    // Balance.
    auto& bal = result.mech[2];
    bal.f = detail::try_droop([&] {
        const PoissonModel model = fit_poisson(inputs.history, cfg.link);
        return droop_balance_f(redundancy(model, cfg.colors));
    });
    bal.p = detail::try_droop(
        [&] { return droop_balance_p(entropy(cfg.colors, cfg.v0)); });
    detail::finish_mechanism(bal, k_prev, total_ropelength);

    return result;
}

// Run the full prediction, loading wing and history from the configured
// paths.
inline PipelineResult run_pipeline(const ScenarioConfig& cfg,
                                   const DeviationSeries& f_series,
                                   const DeviationSeries& p_series) {
    validate_for_predict(cfg);
    ScenarioInputs inputs{csv::read_wing(cfg.wing_path),
                          csv::read_history(cfg.regression_path)};
    return run_pipeline(cfg, f_series, p_series, inputs);
}

// Synthetic deviation pair: a smooth quadratic ramp plus seeded noise, with
// the power series an exact multiple of the frequency series. The ramp
// amplitude is large so the reconstructed endpoint dominates the nominal
// offset and the endpoint ratio lands near the requested droop.
inline std::pair<DeviationSeries, DeviationSeries> generate_synthetic(
    long long seed, double true_droop, int T, double noise_amplitude = 1e-3) {
    if (T < 8) {
        throw std::invalid_argument("synthetic series needs T >= 8");
    }
    if (!(true_droop > 0.0)) {
        throw std::invalid_argument("synthetic droop must be positive");
    }
    constexpr double amplitude = 500.0;
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::vector<double> f(T), p(T);
    for (int t = 1; t <= T; ++t) {
        const double s = static_cast<double>(t - 1) / (T - 1);
        const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double noise = noise_amplitude * (2.0 * unit - 1.0);
        f[t - 1] = amplitude * s * s + noise;
        p[t - 1] = true_droop * f[t - 1];
    }
    return {DeviationSeries(std::move(f)), DeviationSeries(std::move(p))};
}

// --- JSON report -----------------------------------------------------------

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline ordered_json opt_json(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

inline ordered_json droop_json(const ExpectedDroop& d) {
    return d.ok() ? ordered_json(d.value) : ordered_json(nullptr);
}

} // namespace detail

inline ordered_json config_echo_json(const ScenarioConfig& cfg) {
    ordered_json j;
    j["k0"] = cfg.k0;
    j["grid"] = cfg.grid;
    j["lambda"] = cfg.lambda;
    j["seed"] = cfg.seed;
    j["link"] = link_name(cfg.link);
    j["series"] = {{"f", cfg.series_f_path}, {"p", cfg.series_p_path}};
    j["lattice"] = {{"omega1", {{"re", cfg.omega1.real()}, {"im", cfg.omega1.imag()}}},
                    {"omega2", {{"re", cfg.omega2.real()}, {"im", cfg.omega2.imag()}}}};
    j["wing"] = {{"path", cfg.wing_path}};
    j["quad"] = {{"omega", cfg.quad_omega},
                 {"bound", cfg.quad_bound}};
    j["potentials"] = {
        {"mode", cfg.potential_mode == PotentialMode::derive ? "derive" : "explicit"},
        {"v_in", cfg.v_in},
        {"v_out", cfg.v_out}};
    j["colors"] = cfg.colors.c;
    j["v0"] = cfg.v0;
    j["regression"] = {{"path", cfg.regression_path}};
    return j;
}

inline ordered_json report_json(const PipelineResult& result,
                                const ScenarioConfig& cfg) {
    ordered_json j;
    j["version"] = kVersion;
    j["actual_droop"] = result.k_actual();

    ordered_json droops;
    ordered_json paths;
    for (int i = 0; i < 3; ++i) {
        const auto& m = result.mech[i];
        const char* name = mechanism_name(static_cast<Mechanism>(i));
        droops[name] = {{"f", detail::droop_json(m.f)},
                        {"p", detail::droop_json(m.p)},
                        {"status", {{"f", m.f.status}, {"p", m.p.status}}}};
        paths[name] = {{"L_f", detail::opt_json(m.L_f)},
                       {"L_p", detail::opt_json(m.L_p)}};
    }
    j["expected_droops"] = droops;
    j["paths"] = paths;
    j["totals"] = {{"L_m", detail::opt_json(result.L_m())},
                   {"L_d", detail::opt_json(result.L_d())},
                   {"L_b", detail::opt_json(result.L_b())}};
    j["config_echo"] = config_echo_json(cfg);
    return j;
}

// Report for the reconstruct subcommand: spectra, inspection paths, droop.
inline ordered_json reconstruction_json(const Reconstruction& rec,
                                        const ScenarioConfig& cfg) {
    auto spectrum = [](const SpectrumGrid& s, const PathTrace& trace) {
        ordered_json j;
        j["lambda"] = s.lambda;
        j["residual"] = s.residual;
        j["endpoint"] = s.phi.back();
        j["nodes"] = s.nodes;
        j["phi"] = s.phi;
        j["path"] = trace.x;
        return j;
    };
    ordered_json j;
    j["version"] = kVersion;
    j["actual_droop"] = {{"delta_f", rec.droop.delta_f},
                         {"delta_p", rec.droop.delta_P},
                         {"k", rec.droop.k}};
    j["frequency"] = spectrum(rec.spec_f, rec.path_f);
    j["power"] = spectrum(rec.spec_p, rec.path_p);
    j["config_echo"] = config_echo_json(cfg);
    return j;
}

} // namespace openpath
