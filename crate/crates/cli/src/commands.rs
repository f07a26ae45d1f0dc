use std::path::Path;

use chlattice::average::{averaged_count_from_orbit, averaged_count_wave_from_orbit, BumpProfile};
use chlattice::chgeom::{volume_ball, BallPoint};
use chlattice::lattice::{count_lattice_points, enumerate_orbit, GroupSpec};
use chlattice::quad::{integrate_ball, BallRule};
use chlattice::spectral::{main_term_a, SpectralData};

use crate::table::{Cell, Table};
use crate::{parse_point, verify, CliError, RunConfig};

/// Slack for the sandwich comparison; the overlap masses are accurate to
/// about `1e-11` per term.
const SANDWICH_SLACK: f64 = 1e-9;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_group(cfg: &RunConfig) -> Result<(GroupSpec, BallPoint, BallPoint), CliError> {
    let path = cfg.group_file.as_deref().ok_or_else(|| CliError::Usage("--group is required".into()))?;
    let spec = GroupSpec::from_json(&read(path)?)
        .map_err(|source| CliError::Input { path: path.to_path_buf(), source })?
        .with_workers(cfg.workers);
    let z = parse_point("z", cfg.z.as_ref(), spec.n)?;
    let zp = parse_point("zp", cfg.z_prime.as_ref(), spec.n)?;
    Ok((spec, z, zp))
}

fn t_max(cfg: &RunConfig) -> f64 {
    cfg.t_grid.last().copied().unwrap_or(0.0)
}

/// Rows `(T, N, words_expanded, truncated)`; fails when any row is
/// truncated.
pub fn cmd_count(cfg: &RunConfig) -> Result<Table, CliError> {
    let (spec, z, zp) = load_group(cfg)?;
    let mut table = Table::new("count", &["T", "N", "words_expanded", "truncated"]);
    for &t in &cfg.t_grid {
        let r = count_lattice_points(&spec, &z, &zp, t)?;
        table.pass &= !r.truncated;
        table.push(vec![Cell::Real(t), Cell::Int(r.count), Cell::Int(r.words_expanded), Cell::Bool(r.truncated)]);
    }
    Ok(table)
}

/// Both routes to the averaged count with a bump of radius `alpha` about
/// `z`, the neighbouring counts `N(T ∓ α)`, and the two checks.
pub fn cmd_average(cfg: &RunConfig) -> Result<Table, CliError> {
    let (spec, z, zp) = load_group(cfg)?;
    let b = BumpProfile::new(z.clone(), cfg.alpha)?;
    let orbit = enumerate_orbit(&spec, &z, &zp, t_max(cfg) + cfg.alpha)?;
    let mut table = Table::new(
        "average",
        &[
            "T",
            "I_direct",
            "I_direct_err",
            "I_wave",
            "I_wave_err",
            "N_minus",
            "N_plus",
            "sandwich_ok",
            "routes_ok",
        ],
    );
    table.pass = !orbit.truncated;
    for &t in &cfg.t_grid {
        let direct = averaged_count_from_orbit(&orbit, &b, t)?;
        let wave = averaged_count_wave_from_orbit(&orbit, &b, t, &cfg.tolerances.wave)?;
        let lo = orbit.count(t - cfg.alpha)?.count;
        let hi = orbit.count(t + cfg.alpha)?.count;
        let sandwich = lo as f64 <= direct.value + SANDWICH_SLACK && direct.value <= hi as f64 + SANDWICH_SLACK;
        let routes = (wave.value - direct.value).abs() <= cfg.tolerances.route;
        table.pass &= sandwich && routes;
        table.push(vec![
            Cell::Real(t),
            Cell::Real(direct.value),
            Cell::Real(direct.est_error),
            Cell::Real(wave.value),
            Cell::Real(wave.est_error),
            Cell::Int(lo),
            Cell::Int(hi),
            Cell::Bool(sandwich),
            Cell::Bool(routes),
        ]);
    }
    Ok(table)
}

/// Rows `(T, N, A, N/A)`; the ratio is left empty where `A = 0`.
pub fn cmd_mainterm(cfg: &RunConfig) -> Result<Table, CliError> {
    let (spec, z, zp) = load_group(cfg)?;
    let path = cfg.spectral_file.as_deref().ok_or_else(|| CliError::Usage("--spectral is required".into()))?;
    let data = SpectralData::from_json(&read(path)?)
        .map_err(|source| CliError::Input { path: path.to_path_buf(), source })?;
    data.check_dimension(spec.n).map_err(|source| CliError::Input { path: path.to_path_buf(), source })?;
    let orbit = enumerate_orbit(&spec, &z, &zp, t_max(cfg))?;
    let mut table = Table::new("mainterm", &["T", "N", "A", "N_over_A"]);
    table.pass = !orbit.truncated;
    for &t in &cfg.t_grid {
        let n = orbit.count(t)?.count;
        let a = main_term_a(&data, spec.n, t, &z, &zp)?;
        let ratio = (a != 0.0).then(|| n as f64 / a);
        table.pass &= ratio.is_none_or(f64::is_finite) && a.is_finite();
        table.push(vec![Cell::Real(t), Cell::Int(n), Cell::Real(a), Cell::MaybeReal(ratio)]);
    }
    Ok(table)
}

/// Runs the identity battery in [`verify`].
pub fn cmd_verify(cfg: &RunConfig) -> Result<Table, CliError> {
    let items = verify::battery(cfg.kernel_constant_scale, cfg.verify_draws)?;
    Ok(verify::to_table(&items))
}

/// Rows `(T, closed, cubature, cubature_err, rel_diff, ok)`.
pub fn cmd_volume(cfg: &RunConfig) -> Result<Table, CliError> {
    let n = cfg.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let o = BallPoint::origin(n);
    let mut table = Table::new("volume", &["T", "closed", "cubature", "cubature_err", "rel_diff", "ok"]);
    for &t in &cfg.t_grid {
        let closed = volume_ball(n, t);
        // the cubature tolerance is relative to max(1, value); leave a margin
        let q = integrate_ball(|_| 1.0, &o, t, 0.1 * cfg.tolerances.volume, &BallRule::default())?;
        let rel = (q.value - closed).abs() / closed;
        let ok = rel <= cfg.tolerances.volume;
        table.pass &= ok;
        table.push(vec![
            Cell::Real(t),
            Cell::Real(closed),
            Cell::Real(q.value),
            Cell::Real(q.est_error),
            Cell::Real(rel),
            Cell::Bool(ok),
        ]);
    }
    Ok(table)
}
