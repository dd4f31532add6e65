//! Builds the output table for each subcommand.

use crate::table::{col, Cell, Table};
use scw_repeater::fock::verify as oracle;
use scw_repeater::herald::{self, LinkConfig, Parity};
use scw_repeater::link::{outcome_probs, PairSymmetry};
use scw_repeater::modes::CatSymmetry;
use scw_repeater::photodetect::{parity_prob, ChannelParams, ClickParity, DetectorParams, RelayStateLabel};
use scw_repeater::teleport::{self, Detector};
use scw_repeater::timing::{
    attempt_stats, link_success_from_distance, simulate_attempts, AttemptModel, FiberModel,
    VACUUM_VELOCITY_KM_S,
};

pub type CmdResult = Result<Table, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn pair_label(pair: PairSymmetry) -> &'static str {
    if pair.is_cross() {
        "cross"
    } else if pair.alice == CatSymmetry::Odd {
        "odd-odd"
    } else {
        "even-even"
    }
}

fn parity_label(parity: Parity) -> &'static str {
    match parity {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn fmt_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn grid_param(table: &mut Table, key: &str, values: &[f64]) {
    if values.len() > 8 {
        table.param(
            key,
            format!(
                "{} values in [{}, {}]",
                values.len(),
                values[0],
                values[values.len() - 1]
            ),
        );
    } else {
        table.param(key, fmt_list(values));
    }
}

pub fn link_probs(a_values: &[f64], r_values: &[f64], pairs: &[PairSymmetry]) -> CmdResult {
    let mut table = Table::new(
        "fig link-probs",
        vec![
            col("a", "mean photon number"),
            col("r_bs", "dimensionless"),
            col("pair", ""),
            col("p_minus", "probability"),
            col("p_plus", "probability"),
            col("p_vac", "probability"),
            col("at_limit", ""),
        ],
    );
    grid_param(&mut table, "a", a_values);
    grid_param(&mut table, "r_bs", r_values);
    for &a in a_values {
        for &r in r_values {
            for &pair in pairs {
                let p = outcome_probs(pair, r, a).map_err(err)?;
                table.push(vec![
                    Cell::Num(a),
                    Cell::Num(r),
                    pair_label(pair).into(),
                    Cell::Num(p.p_minus),
                    Cell::Num(p.p_plus),
                    Cell::Num(p.p_vac),
                    Cell::Bool(p.at_limit),
                ]);
            }
        }
    }
    Ok(table)
}

pub fn click_probs(a_values: &[f64], r_bs: f64, eta: f64, xi: f64) -> CmdResult {
    let channel = ChannelParams::new(eta).map_err(err)?;
    let det = DetectorParams::new(xi).map_err(err)?;
    let mut table = Table::new(
        "fig click-probs",
        vec![
            col("a", "mean photon number"),
            col("n_relay", "mean photon number"),
            col("state", ""),
            col("p_noclick", "probability"),
            col("p_even", "probability"),
            col("p_odd", "probability"),
        ],
    );
    grid_param(&mut table, "a", a_values);
    table.param("r_bs", r_bs);
    table.param("eta", eta);
    table.param("xi", xi);
    for &a in a_values {
        let n_relay = 2.0 * r_bs * a;
        for (state, label) in [
            (RelayStateLabel::MinusCat, "minus-cat"),
            (RelayStateLabel::PlusCat, "plus-cat"),
        ] {
            let p = |parity| parity_prob(parity, state, n_relay, channel, det).map_err(err);
            table.push(vec![
                Cell::Num(a),
                Cell::Num(n_relay),
                label.into(),
                Cell::Num(p(ClickParity::NoClick)?),
                Cell::Num(p(ClickParity::Even)?),
                Cell::Num(p(ClickParity::Odd)?),
            ]);
        }
    }
    Ok(table)
}

fn detectors_counted(per_detector: bool) -> (f64, i64) {
    if per_detector {
        (1.0, 1)
    } else {
        (2.0, 2)
    }
}

pub fn success(
    a_values: &[f64],
    r_values: &[f64],
    eta: f64,
    xi: f64,
    pairs: &[PairSymmetry],
    parities: &[Parity],
    per_detector: bool,
) -> CmdResult {
    let (factor, detectors) = detectors_counted(per_detector);
    let mut table = Table::new(
        "fig success",
        vec![
            col("a", "mean photon number"),
            col("r_bs", "dimensionless"),
            col("zeta", "dimensionless"),
            col("pair", ""),
            col("parity", ""),
            col("detectors", "count"),
            col("p_success", "probability"),
        ],
    );
    grid_param(&mut table, "a", a_values);
    grid_param(&mut table, "r_bs", r_values);
    table.param("eta", eta);
    table.param("xi", xi);
    for &a in a_values {
        for &r in r_values {
            let cfg = LinkConfig::new(a, r, eta, xi).map_err(err)?;
            for &pair in pairs {
                for &parity in parities {
                    let p = herald::success_prob(pair, parity, &cfg).map_err(err)?;
                    table.push(vec![
                        Cell::Num(a),
                        Cell::Num(r),
                        Cell::Num(cfg.zeta()),
                        pair_label(pair).into(),
                        parity_label(parity).into(),
                        Cell::Int(detectors),
                        Cell::Num(factor * p),
                    ]);
                }
            }
        }
    }
    Ok(table)
}

pub fn fidelity(
    a_values: &[f64],
    r_values: &[f64],
    eta: f64,
    xi: f64,
    pairs: &[PairSymmetry],
    parities: &[Parity],
) -> CmdResult {
    let mut table = Table::new(
        "fig fidelity",
        vec![
            col("a", "mean photon number"),
            col("r_bs", "dimensionless"),
            col("zeta", "dimensionless"),
            col("pair", ""),
            col("parity", ""),
            col("f_plus", "fidelity"),
            col("f_minus", "fidelity"),
        ],
    );
    grid_param(&mut table, "a", a_values);
    grid_param(&mut table, "r_bs", r_values);
    table.param("eta", eta);
    table.param("xi", xi);
    for &a in a_values {
        for &r in r_values {
            let cfg = LinkConfig::new(a, r, eta, xi).map_err(err)?;
            for &pair in pairs {
                for &parity in parities {
                    let (f_plus, f_minus) =
                        herald::heralded_fidelity(pair, parity, &cfg).map_err(err)?;
                    table.push(vec![
                        Cell::Num(a),
                        Cell::Num(r),
                        Cell::Num(cfg.zeta()),
                        pair_label(pair).into(),
                        parity_label(parity).into(),
                        Cell::Num(f_plus),
                        Cell::Num(f_minus),
                    ]);
                }
            }
        }
    }
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
pub fn timing(
    lengths: &[f64],
    kappa: f64,
    xi: f64,
    r_bs: f64,
    a: f64,
    velocity: f64,
    pair: PairSymmetry,
    parity: Parity,
    per_detector: bool,
) -> CmdResult {
    let (factor, detectors) = detectors_counted(per_detector);
    let template = LinkConfig::new(a, r_bs, 1.0, xi).map_err(err)?;
    let mut table = Table::new(
        "fig timing",
        vec![
            col("length", "km"),
            col("transmittance", "dimensionless"),
            col("p_link", "probability"),
            col("n_w", "attempts"),
            col("n_t", "attempts"),
            col("n_max", "attempts"),
            col("n_min", "attempts"),
            col("unit_time", "s"),
            col("t_prep", "s"),
            col("t_wait", "s"),
            col("t_wait_ms", "ms"),
        ],
    );
    grid_param(&mut table, "length_km", lengths);
    table.param("kappa_db_per_km", kappa);
    table.param("xi", xi);
    table.param("r_bs", r_bs);
    table.param("a", a);
    table.param("velocity_km_s", velocity);
    table.param("vacuum_velocity_km_s", VACUUM_VELOCITY_KM_S);
    table.param("pair", pair_label(pair));
    table.param("parity", parity_label(parity));
    table.param("detectors", detectors);
    for &length in lengths {
        let fiber = FiberModel::new(kappa, length, velocity).map_err(err)?;
        let p = factor / 2.0
            * link_success_from_distance(&template, &fiber, pair, parity).map_err(err)?;
        let model = AttemptModel::new(p, p).map_err(err)?;
        let stats = attempt_stats(&model, &fiber);
        table.push(vec![
            Cell::Num(length),
            Cell::Num(fiber.transmittance()),
            Cell::Num(p),
            Cell::Num(stats.n_w),
            Cell::Num(stats.n_t),
            Cell::Num(stats.n_max),
            Cell::Num(stats.n_min),
            Cell::Num(fiber.unit_time()),
            Cell::Num(stats.t_prep),
            Cell::Num(stats.t_wait),
            Cell::Num(stats.t_wait * 1e3),
        ]);
    }
    Ok(table)
}

pub fn teleport(amp: f64, index: f64) -> CmdResult {
    let entries = teleport::truth_table(amp, index).map_err(err)?;
    let mut table = Table::new(
        "fig teleport",
        vec![
            col("phi_offset", "rad"),
            col("detector", ""),
            col("sideband", ""),
            col("label", ""),
            col("fidelity", "fidelity"),
        ],
    );
    table.param("amp", amp);
    table.param("index", index);
    for entry in entries {
        let detector = match entry.detector {
            Detector::D1 => "D1",
            Detector::D2 => "D2",
        };
        let label = match entry.label {
            teleport::CoherentLabel::Alpha => "alpha",
            teleport::CoherentLabel::MinusAlpha => "-alpha",
            teleport::CoherentLabel::IAlpha => "i*alpha",
            teleport::CoherentLabel::MinusIAlpha => "-i*alpha",
        };
        table.push(vec![
            Cell::Num(entry.phi_offset),
            detector.into(),
            Cell::Int(entry.sideband as i64),
            label.into(),
            Cell::Num(entry.fidelity),
        ]);
    }
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
pub fn simulate(
    length: f64,
    kappa: f64,
    xi: f64,
    r_bs: f64,
    a: f64,
    velocity: f64,
    pair: PairSymmetry,
    parity: Parity,
    per_detector: bool,
    trials: u64,
    seed: u64,
) -> CmdResult {
    let (factor, detectors) = detectors_counted(per_detector);
    let template = LinkConfig::new(a, r_bs, 1.0, xi).map_err(err)?;
    let fiber = FiberModel::new(kappa, length, velocity).map_err(err)?;
    let p = factor / 2.0
        * link_success_from_distance(&template, &fiber, pair, parity).map_err(err)?;
    let model = AttemptModel::new(p, p).map_err(err)?;
    let exact = attempt_stats(&model, &fiber);
    let sim = simulate_attempts(&model, trials, seed).map_err(err)?;
    let mut table = Table::new(
        "simulate",
        vec![
            col("quantity", ""),
            col("analytic", "attempts"),
            col("mc_mean", "attempts"),
            col("mc_std_err", "attempts"),
            col("z_score", "dimensionless"),
        ],
    );
    table.param("length_km", length);
    table.param("kappa_db_per_km", kappa);
    table.param("xi", xi);
    table.param("r_bs", r_bs);
    table.param("a", a);
    table.param("velocity_km_s", velocity);
    table.param("pair", pair_label(pair));
    table.param("parity", parity_label(parity));
    table.param("detectors", detectors);
    table.param("p_link", p);
    table.param("trials", trials);
    table.param("seed", seed);
    for (name, analytic, estimate) in [
        ("n_w", exact.n_w, sim.n_w),
        ("n_t", exact.n_t, sim.n_t),
        ("n_max", exact.n_max, sim.n_max),
        ("n_min", exact.n_min, sim.n_min),
    ] {
        let z = if estimate.std_err > 0.0 {
            (estimate.mean - analytic) / estimate.std_err
        } else {
            0.0
        };
        table.push(vec![
            name.into(),
            Cell::Num(analytic),
            Cell::Num(estimate.mean),
            Cell::Num(estimate.std_err),
            Cell::Num(z),
        ]);
    }
    Ok(table)
}

/// Runs the oracle suite; the flag reports whether every check passed.
pub fn verify() -> Result<(Table, bool), String> {
    let reports = oracle::default_suite().map_err(err)?;
    let all_ok = oracle::all_passed(&reports);
    let mut table = Table::new(
        "verify",
        vec![
            col("quantity", ""),
            col("analytic", ""),
            col("oracle", ""),
            col("abs_diff", ""),
            col("tolerance", ""),
            col("cutoff", "photons"),
            col("passed", ""),
        ],
    );
    table.param("checks", reports.len());
    table.param("all_passed", all_ok);
    for r in reports {
        table.push(vec![
            Cell::Text(r.quantity),
            Cell::Num(r.analytic),
            Cell::Num(r.oracle),
            Cell::Num(r.abs_diff),
            Cell::Num(r.tolerance),
            Cell::Int(r.cutoff as i64),
            Cell::Bool(r.passed),
        ]);
    }
    Ok((table, all_ok))
}
