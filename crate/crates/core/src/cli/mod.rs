//! Sweep drivers behind the `pdem` binary. Every command returns a report
//! that renders to CSV; the binary only handles flags, files and exit codes.

pub mod config;
pub mod output;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::{
    self, BoundSearchConfig, Method, ProfileSource, Regime, ScatteringResult, Side, SwitchingScan,
    WaveSample,
};
use crate::error::{Error, Result};
use crate::model::{self, DeviceParams};
use crate::oracle::{self, IntegratorConfig};

pub use config::{load_config, parse_config, ParamOverrides};
use output::{num, opt_num, row, text, Series};

/// Exit status for a command that produced output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Output was written but some points or states failed.
    Partial,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => EXIT_OK,
            Status::Partial => EXIT_PARTIAL,
        }
    }
}

/// Usage-class errors exit with 1, numerical failures with 2.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Usage(_)
        | Error::Config { .. }
        | Error::Io(_)
        | Error::InvalidParams(_)
        | Error::BelowThreshold { .. }
        | Error::UnknownBoundIndex { .. } => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideSel {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSel {
    Analytic,
    Oracle,
    Both,
}

impl MethodSel {
    pub fn methods(self) -> &'static [Method] {
        match self {
            MethodSel::Analytic => &[Method::Analytic],
            MethodSel::Oracle => &[Method::NumericOracle],
            MethodSel::Both => &[Method::Analytic, Method::NumericOracle],
        }
    }
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Analytic => "analytic",
        Method::NumericOracle => "oracle",
    }
}

/// A scattering sweep over a uniform energy grid and a list of μ₂ values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub e_min: f64,
    pub e_max: f64,
    pub n_e: usize,
    pub mu2_values: Vec<f64>,
    pub side: SideSel,
    pub method: MethodSel,
}

impl SweepSpec {
    /// n_e points on (V₀, e_max]: the grid starts one step above V₀.
    pub fn above_floor(p: &DeviceParams, e_max: f64, n_e: usize, mu2_values: Vec<f64>) -> Self {
        let step = (e_max - p.v0()) / n_e.max(1) as f64;
        SweepSpec {
            e_min: p.v0() + step,
            e_max,
            n_e,
            mu2_values,
            side: SideSel::Both,
            method: MethodSel::Analytic,
        }
    }

    pub fn validate(&self, p: &DeviceParams) -> Result<()> {
        if !(self.e_min > p.v0()) {
            return Err(Error::Usage(format!(
                "e_min = {} must lie above V0 = {}",
                self.e_min,
                p.v0()
            )));
        }
        if !(self.e_max > self.e_min) || self.n_e < 2 {
            return Err(Error::Usage(format!(
                "need e_max > e_min and at least 2 energies (got [{}, {}], n = {})",
                self.e_min, self.e_max, self.n_e
            )));
        }
        if self.mu2_values.is_empty() {
            return Err(Error::Usage("no mu2 values given".into()));
        }
        for &mu2 in &self.mu2_values {
            p.with_mu2(mu2).validate()?;
        }
        Ok(())
    }

    pub fn energies(&self) -> Vec<f64> {
        analytic::uniform_grid(self.e_min, self.e_max, self.n_e)
    }
}

/// One sweep point. Missing values are left empty in the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterRow {
    pub energy: f64,
    pub mu2: f64,
    pub method: Method,
    pub t2: Option<f64>,
    pub rl2: Option<f64>,
    pub rr2: Option<f64>,
    /// |T|² + |R_L||R_R| − 1, signed.
    pub deficit: Option<f64>,
    pub condition: Option<f64>,
    pub error: Option<String>,
}

fn solve_side(energy: f64, p: &DeviceParams, side: Side, method: Method) -> Result<ScatteringResult> {
    match method {
        Method::Analytic => analytic::match_scatter(energy, p, side),
        Method::NumericOracle => oracle::scatter_numeric(energy, p, side, &IntegratorConfig::default()),
    }
}

/// Evaluates one (E, μ₂, method) point; solver errors go into the row.
pub fn scatter_point(energy: f64, p: &DeviceParams, side: SideSel, method: Method) -> ScatterRow {
    let run = |s: Side, wanted: bool| wanted.then(|| solve_side(energy, p, s, method));
    let left = run(Side::Left, side != SideSel::Right);
    let right = run(Side::Right, side != SideSel::Left);

    let mut error = None;
    let mut take = |r: Option<Result<ScatteringResult>>| match r {
        Some(Ok(v)) => Some(v),
        Some(Err(e)) => {
            error.get_or_insert_with(|| e.to_string());
            None
        }
        None => None,
    };
    let left = take(left);
    let right = take(right);

    let t2 = left.or(right).map(|r| r.t.norm_sqr());
    let rl = left.map(|r| r.r.norm());
    let rr = right.map(|r| r.r.norm());
    let deficit = match (t2, rl, rr) {
        (Some(t2), Some(a), Some(b)) => Some(t2 + a * b - 1.0),
        _ => None,
    };
    let condition = [left, right]
        .iter()
        .flatten()
        .map(|r| r.condition_estimate)
        .reduce(f64::max);
    ScatterRow {
        energy,
        mu2: p.mu2,
        method,
        t2,
        rl2: rl.map(|x| x * x),
        rr2: rr.map(|x| x * x),
        deficit,
        condition,
        error,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterReport {
    pub rows: Vec<ScatterRow>,
}

impl ScatterReport {
    pub const HEADER: &'static str = "E,mu2,T2,RL2,RR2,pseudo_unitarity_deficit,method,error\n";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        for r in &self.rows {
            out.push_str(&row(&[
                num(r.energy),
                num(r.mu2),
                opt_num(r.t2),
                opt_num(r.rl2),
                opt_num(r.rr2),
                opt_num(r.deficit),
                method_name(r.method).to_string(),
                text(r.error.as_deref().unwrap_or("")),
            ]));
        }
        out
    }

    pub fn status(&self) -> Status {
        if self.rows.iter().any(|r| r.error.is_some()) {
            Status::Partial
        } else {
            Status::Success
        }
    }

    /// |T|², |R_L|², |R_R|² against E for the first μ₂ and method.
    pub fn to_svg(&self) -> String {
        let Some(first) = self.rows.first() else {
            return output::line_chart("scattering", "E", "coefficient", &[]);
        };
        let sel: Vec<&ScatterRow> = self
            .rows
            .iter()
            .filter(|r| r.mu2 == first.mu2 && r.method == first.method)
            .collect();
        let pick = |f: fn(&ScatterRow) -> Option<f64>| -> Vec<(f64, f64)> {
            sel.iter().map(|r| (r.energy, f(r).unwrap_or(f64::NAN))).collect()
        };
        output::line_chart(
            &format!("mu2 = {} ({})", first.mu2, method_name(first.method)),
            "E",
            "coefficient",
            &[
                Series {
                    label: "|T|^2",
                    points: pick(|r| r.t2),
                },
                Series {
                    label: "|R_L|^2",
                    points: pick(|r| r.rl2),
                },
                Series {
                    label: "|R_R|^2",
                    points: pick(|r| r.rr2),
                },
            ],
        )
    }
}

/// Runs the sweep with rows ordered E-major, then μ₂, then method.
pub fn cmd_scatter(spec: &SweepSpec, p: &DeviceParams) -> Result<ScatterReport> {
    cmd_scatter_with(spec, p, true)
}

/// As [`cmd_scatter`], optionally on the calling thread only.
pub fn cmd_scatter_with(spec: &SweepSpec, p: &DeviceParams, parallel: bool) -> Result<ScatterReport> {
    p.validate()?;
    spec.validate(p)?;
    let methods = spec.method.methods();
    let mut jobs = Vec::new();
    for e in spec.energies() {
        for &mu2 in &spec.mu2_values {
            for &m in methods {
                jobs.push((e, mu2, m));
            }
        }
    }
    let eval = |&(e, mu2, m): &(f64, f64, Method)| scatter_point(e, &p.with_mu2(mu2), spec.side, m);
    let rows = if parallel {
        jobs.par_iter().map(eval).collect()
    } else {
        jobs.iter().map(eval).collect()
    };
    Ok(ScatterReport { rows })
}

/// Real roots of the oracle shooting mismatch, from sign changes on a
/// uniform grid over [e_floor, V₀ − 10⁻⁶].
pub fn oracle_bound_energies(p: &DeviceParams, e_floor: f64, n_scan: usize) -> (Vec<f64>, Vec<Error>) {
    let cfg = IntegratorConfig::default();
    let top = p.v0() - 1e-6;
    let grid = analytic::uniform_grid(e_floor, top, n_scan);
    let values: Vec<Result<f64>> = grid
        .par_iter()
        .map(|&e| Ok(oracle::shooting_mismatch(Complex64::new(e, 0.0), p, &cfg)?.re))
        .collect();
    let mut roots = Vec::new();
    let mut failures = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        match (&values[i], &values[i + 1]) {
            (Ok(a), Ok(b)) if a.signum() != b.signum() => {
                match oracle::bound_numeric(p, (grid[i], grid[i + 1]), &cfg) {
                    Ok(e) => roots.push(e),
                    Err(e) => failures.push(e),
                }
            }
            (Err(e), _) => failures.push(e.clone()),
            _ => {}
        }
    }
    (roots, failures)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticLevel {
    pub energy: f64,
    pub energy_imag: f64,
    pub k_b: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub analytic: Option<AnalyticLevel>,
    pub oracle: Option<f64>,
}

impl BoundRow {
    pub fn energy(&self) -> f64 {
        self.analytic.as_ref().map(|a| a.energy).or(self.oracle).unwrap_or(f64::NAN)
    }

    pub fn difference(&self) -> Option<f64> {
        Some((self.analytic.as_ref()?.energy - self.oracle?).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    /// Near-real roots dropped by the |Im E| filter.
    pub rejected: Vec<Complex64>,
    pub failures: Vec<String>,
}

impl BoundReport {
    pub const HEADER: &'static str = "n,E_analytic,ImE_analytic,k_b,residual,E_oracle,abs_diff\n";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        for (i, r) in self.rows.iter().enumerate() {
            let a = r.analytic.as_ref();
            out.push_str(&row(&[
                i.to_string(),
                opt_num(a.map(|a| a.energy)),
                opt_num(a.map(|a| a.energy_imag)),
                opt_num(a.map(|a| a.k_b)),
                opt_num(a.map(|a| a.residual)),
                opt_num(r.oracle),
                opt_num(r.difference()),
            ]));
        }
        out
    }

    /// Human-readable table with rejected roots and failures appended.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:>3}  {:>18}  {:>12}  {:>10}  {:>18}  {:>10}\n",
            "n", "E (analytic)", "k_b", "|det|", "E (oracle)", "|diff|"
        );
        let cell = |x: Option<f64>, w: usize, prec: usize, sci: bool| match x {
            Some(v) if sci => format!("{v:>w$.prec$e}"),
            Some(v) => format!("{v:>w$.prec$}"),
            None => format!("{:>w$}", "-"),
        };
        for (i, r) in self.rows.iter().enumerate() {
            let a = r.analytic.as_ref();
            out.push_str(&format!(
                "{i:>3}  {}  {}  {}  {}  {}\n",
                cell(a.map(|a| a.energy), 18, 12, false),
                cell(a.map(|a| a.k_b), 12, 8, false),
                cell(a.map(|a| a.residual), 10, 2, true),
                cell(r.oracle, 18, 12, false),
                cell(r.difference(), 10, 2, true),
            ));
        }
        if self.rows.is_empty() {
            out.push_str("no bound states found\n");
        }
        for z in &self.rejected {
            out.push_str(&format!("rejected non-real root E = {z}\n"));
        }
        for f in &self.failures {
            out.push_str(&format!("failure: {f}\n"));
        }
        out
    }

    pub fn status(&self) -> Status {
        if self.failures.is_empty() {
            Status::Success
        } else {
            Status::Partial
        }
    }
}

/// Bound-state table from the analytic determinant, the shooting oracle,
/// or both (paired by nearest energy).
pub fn cmd_bound(p: &DeviceParams, method: MethodSel) -> Result<BoundReport> {
    p.validate()?;
    let cfg = BoundSearchConfig::for_device(p);
    let mut report = BoundReport {
        rows: Vec::new(),
        rejected: Vec::new(),
        failures: Vec::new(),
    };
    if method != MethodSel::Oracle {
        let spectrum = analytic::find_bound_states(p, &cfg)?;
        report.rejected = spectrum.rejected;
        report.failures.extend(spectrum.failures.iter().map(|e| e.to_string()));
        report.rows = spectrum
            .states
            .iter()
            .map(|s| BoundRow {
                analytic: Some(AnalyticLevel {
                    energy: s.energy,
                    energy_imag: s.energy_imag,
                    k_b: s.k_b,
                    residual: s.residual,
                }),
                oracle: None,
            })
            .collect();
    }
    if method != MethodSel::Analytic {
        let (roots, failures) = oracle_bound_energies(p, cfg.e_floor, 400);
        report.failures.extend(failures.iter().map(|e| e.to_string()));
        for e in roots {
            let nearest = report
                .rows
                .iter_mut()
                .filter(|r| r.oracle.is_none() && r.analytic.is_some())
                .min_by(|a, b| (a.energy() - e).abs().total_cmp(&(b.energy() - e).abs()));
            match nearest {
                Some(r) if (r.energy() - e).abs() < 1e-3 => r.oracle = Some(e),
                _ => report.rows.push(BoundRow {
                    analytic: None,
                    oracle: Some(e),
                }),
            }
        }
        report.rows.sort_by(|a, b| a.energy().total_cmp(&b.energy()));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchReport {
    pub scan: SwitchingScan,
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Bound => "bound",
        Regime::Resonance => "resonance",
    }
}

impl SwitchReport {
    pub const HEADER: &'static str = "mu2,ReE0,ImE0,regime\n";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        for pt in &self.scan.points {
            out.push_str(&row(&[
                num(pt.mu2),
                num(pt.energy.re),
                num(pt.energy.im),
                regime_name(pt.regime).to_string(),
            ]));
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut s = match self.scan.crossing {
            Some((mu2, regime)) => format!(
                "Re E0 crosses 0 at mu2* = {mu2:.6} (regime after crossing: {})",
                regime_name(regime)
            ),
            None => {
                let last = self.scan.points.last().map_or(f64::NAN, |p| p.mu2);
                format!("Re E0 does not cross 0 up to mu2 = {last}")
            }
        };
        if let Some(e) = &self.scan.error {
            s.push_str(&format!("; continuation stopped: {e}"));
        }
        s
    }

    pub fn status(&self) -> Status {
        if self.scan.error.is_some() {
            Status::Partial
        } else {
            Status::Success
        }
    }

    pub fn to_svg(&self) -> String {
        let pts = |f: fn(&Complex64) -> f64| -> Vec<(f64, f64)> {
            self.scan.points.iter().map(|p| (p.mu2, f(&p.energy))).collect()
        };
        output::line_chart(
            "ground-state continuation",
            "mu2",
            "E0",
            &[
                Series {
                    label: "Re E0",
                    points: pts(|e| e.re),
                },
                Series {
                    label: "Im E0",
                    points: pts(|e| e.im),
                },
            ],
        )
    }
}

/// Tracks the ground state from p.mu2 to mu2_max over n_mu2 uniform points.
pub fn cmd_switch(p: &DeviceParams, mu2_max: f64, n_mu2: usize) -> Result<SwitchReport> {
    p.validate()?;
    if !(mu2_max > p.mu2) || n_mu2 < 2 {
        return Err(Error::Usage(format!(
            "need mu2_max > mu2 = {} and at least 2 points (got {mu2_max}, {n_mu2})",
            p.mu2
        )));
    }
    let grid = analytic::uniform_grid(p.mu2, mu2_max, n_mu2);
    Ok(SwitchReport {
        scan: analytic::switching_scan(p, &grid)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    ScatterLeft,
    ScatterRight,
    Bound(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpec {
    /// Scattering energy; ignored for bound states.
    pub energy: f64,
    pub kind: ProfileKind,
    pub z_min: f64,
    pub z_max: f64,
    pub n_z: usize,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileReport {
    pub title: String,
    pub samples: Vec<WaveSample>,
    pub potential: Vec<Complex64>,
    pub mass: Vec<f64>,
}

impl ProfileReport {
    pub const HEADER: &'static str = "z,RePsi,ImPsi,ReV,ImV,m\n";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        for ((s, v), m) in self.samples.iter().zip(&self.potential).zip(&self.mass) {
            out.push_str(&row(&[
                num(s.z),
                num(s.psi.re),
                num(s.psi.im),
                num(v.re),
                num(v.im),
                num(*m),
            ]));
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let pts = |f: fn(&WaveSample) -> f64| -> Vec<(f64, f64)> {
            self.samples.iter().map(|s| (s.z, f(s))).collect()
        };
        output::line_chart(
            &self.title,
            "z",
            "psi",
            &[
                Series {
                    label: "Re psi",
                    points: pts(|s| s.psi.re),
                },
                Series {
                    label: "Im psi",
                    points: pts(|s| s.psi.im),
                },
            ],
        )
    }
}

fn normalise(samples: &mut [WaveSample]) {
    let peak = samples.iter().map(|s| s.psi.norm()).fold(0.0, f64::max);
    if peak > 0.0 {
        for s in samples.iter_mut() {
            s.psi /= peak;
            s.v /= peak;
        }
    }
}

/// Wavefunction samples with the device profile alongside. Bound states are
/// scaled to unit maximum modulus on the requested grid.
pub fn cmd_profile(p: &DeviceParams, spec: &ProfileSpec) -> Result<ProfileReport> {
    p.validate()?;
    if !(spec.z_max > spec.z_min) || spec.n_z < 2 {
        return Err(Error::Usage(format!(
            "need z_max > z_min and at least 2 points (got [{}, {}], n = {})",
            spec.z_min, spec.z_max, spec.n_z
        )));
    }
    let grid = analytic::uniform_grid(spec.z_min, spec.z_max, spec.n_z);
    let (title, samples) = match spec.kind {
        ProfileKind::ScatterLeft | ProfileKind::ScatterRight => {
            let side = if spec.kind == ProfileKind::ScatterLeft {
                Side::Left
            } else {
                Side::Right
            };
            let res = solve_side(spec.energy, p, side, spec.method)?;
            let title = format!("{side:?} incidence, E = {}", spec.energy).to_lowercase();
            (title, analytic::profile(ProfileSource::Scattering(&res), p, &grid)?)
        }
        ProfileKind::Bound(index) => {
            let cfg = BoundSearchConfig::for_device(p);
            let mut samples = match spec.method {
                Method::Analytic => {
                    let states = analytic::find_bound_states(p, &cfg)?.states;
                    let state = states.get(index).ok_or(Error::UnknownBoundIndex {
                        index,
                        available: states.len(),
                    })?;
                    analytic::profile(ProfileSource::Bound(state), p, &grid)?
                }
                Method::NumericOracle => {
                    let (roots, _) = oracle_bound_energies(p, cfg.e_floor, 400);
                    let e = *roots.get(index).ok_or(Error::UnknownBoundIndex {
                        index,
                        available: roots.len(),
                    })?;
                    oracle::bound_profile(e, p, &grid, &IntegratorConfig::default())?
                }
            };
            normalise(&mut samples);
            (format!("bound state {index}"), samples)
        }
    };
    Ok(ProfileReport {
        title,
        potential: grid.iter().map(|&z| model::potential(z, p)).collect(),
        mass: grid.iter().map(|&z| model::mass(z, p)).collect(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: DeviceParams = DeviceParams::REFERENCE;

    fn small_spec() -> SweepSpec {
        SweepSpec {
            method: MethodSel::Both,
            ..SweepSpec::above_floor(&P, 20.0, 4, vec![0.0, 0.3])
        }
    }

    #[test]
    fn sweep_rows_are_e_major() {
        let rep = cmd_scatter(&small_spec(), &P).unwrap();
        assert_eq!(rep.rows.len(), 4 * 2 * 2);
        let keys: Vec<(f64, f64)> = rep.rows.iter().map(|r| (r.energy, r.mu2)).collect();
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(rep.rows[0].method, Method::Analytic);
        assert_eq!(rep.rows[1].method, Method::NumericOracle);
    }

    #[test]
    fn serial_and_parallel_sweeps_agree() {
        let a = cmd_scatter_with(&small_spec(), &P, true).unwrap();
        let b = cmd_scatter_with(&small_spec(), &P, false).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn hermitian_rows_have_no_deficit() {
        let rep = cmd_scatter(&small_spec(), &P).unwrap();
        for r in rep.rows.iter().filter(|r| r.mu2 == 0.0) {
            assert!(r.deficit.unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn single_side_leaves_other_columns_empty() {
        let spec = SweepSpec {
            side: SideSel::Left,
            ..SweepSpec::above_floor(&P, 10.0, 2, vec![0.3])
        };
        let rep = cmd_scatter(&spec, &P).unwrap();
        assert!(rep.rows.iter().all(|r| r.rr2.is_none() && r.deficit.is_none() && r.t2.is_some()));
        assert!(rep.to_csv().lines().nth(1).unwrap().contains(",,,analytic,"));
    }

    #[test]
    fn invalid_sweeps_are_usage_errors() {
        let mut spec = small_spec();
        spec.e_min = P.v0();
        assert_eq!(exit_code(&cmd_scatter(&spec, &P).unwrap_err()), EXIT_USAGE);
        let mut spec = small_spec();
        spec.mu2_values.clear();
        assert!(cmd_scatter(&spec, &P).is_err());
    }

    #[test]
    fn profile_rejects_missing_bound_index() {
        let spec = ProfileSpec {
            energy: 0.0,
            kind: ProfileKind::Bound(7),
            z_min: -6.0,
            z_max: 6.0,
            n_z: 11,
            method: Method::Analytic,
        };
        assert!(matches!(
            cmd_profile(&P, &spec),
            Err(Error::UnknownBoundIndex { index: 7, available: 2 })
        ));
    }
}
