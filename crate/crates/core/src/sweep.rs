//! The depolarizing sweep: `D_N(ρ, E_p(ρ))` over a grid of Bloch norms and
//! channel strengths, by each available method.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::DepolarizingChannel;
use crate::distances::dn_mixed_closed;
use crate::error::{Error, Result};
use crate::purification::{dn_via_purification, Objective};
use crate::states::{from_bloch, random_bloch, BlochVector, DensityMatrix};

pub const CSV_HEADER: &str = "r,p,dn_closed,dn_procrustes_hs,dn_procrustes_exact,delta_exact_vs_closed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepMethod {
    Closed,
    ProcrustesHs,
    ProcrustesExact,
}

impl SweepMethod {
    pub const ALL: [SweepMethod; 3] = [SweepMethod::Closed, SweepMethod::ProcrustesHs, SweepMethod::ProcrustesExact];

    pub fn name(self) -> &'static str {
        match self {
            SweepMethod::Closed => "closed",
            SweepMethod::ProcrustesHs => "procrustes_hs",
            SweepMethod::ProcrustesExact => "procrustes_exact",
        }
    }
}

impl FromStr for SweepMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method `{s}` (expected closed, procrustes_hs or procrustes_exact)")))
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub r_values: Vec<f64>,
    pub p_steps: usize,
    pub methods: Vec<SweepMethod>,
    /// Selects the Bloch direction shared by all rows.
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            r_values: vec![0.2, 0.4, 0.6, 0.8, 0.999],
            p_steps: 101,
            methods: SweepMethod::ALL.to_vec(),
            seed: 42,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_steps < 2 {
            return Err(Error::Domain(format!("p_steps must be at least 2, got {}", self.p_steps)));
        }
        if self.r_values.is_empty() {
            return Err(Error::Domain("no r values".into()));
        }
        if let Some(r) = self.r_values.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::Domain(format!("r = {r} outside [0, 1]")));
        }
        if self.methods.is_empty() {
            return Err(Error::Domain("no methods selected".into()));
        }
        Ok(())
    }

    /// Uniform grid over `[0, 1]` with both endpoints.
    pub fn p_grid(&self) -> Vec<f64> {
        let n = self.p_steps - 1;
        (0..=n).map(|k| k as f64 / n as f64).collect()
    }

    /// Unit vector fixed by the seed.
    pub fn direction(&self) -> [f64; 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        loop {
            let v = random_bloch(&mut rng);
            if v.norm() > 1e-3 {
                return v.components().map(|c| c / v.norm());
            }
        }
    }

    fn has(&self, m: SweepMethod) -> bool {
        self.methods.contains(&m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    pub p: f64,
    pub closed: Option<f64>,
    pub procrustes_hs: Option<f64>,
    pub procrustes_exact: Option<f64>,
}

impl SweepRow {
    /// `procrustes_exact - closed` when both were computed.
    pub fn delta(&self) -> Option<f64> {
        Some(self.procrustes_exact? - self.closed?)
    }
}

fn compute_row(cfg: &SweepConfig, dir: [f64; 3], r: f64, p: f64) -> Result<SweepRow> {
    let bloch = BlochVector::new(dir.map(|c| c * r))?;
    let rho = from_bloch(&bloch);
    let sigma = DepolarizingChannel::new(p)?.apply(&rho)?;
    let run = |m: SweepMethod, f: &dyn Fn(&DensityMatrix, &DensityMatrix) -> Result<f64>| {
        if cfg.has(m) { f(&rho, &sigma).map(Some) } else { Ok(None) }
    };
    Ok(SweepRow {
        r,
        p,
        closed: run(SweepMethod::Closed, &|a, b| Ok(dn_mixed_closed(a, b)?.value))?,
        procrustes_hs: run(SweepMethod::ProcrustesHs, &|a, b| {
            Ok(dn_via_purification(a, b, Objective::HsNorm)?.value)
        })?,
        procrustes_exact: run(SweepMethod::ProcrustesExact, &|a, b| {
            Ok(dn_via_purification(a, b, Objective::ExactOverlap)?.value)
        })?,
    })
}

/// Rows in `(r, p)` order, whatever order they were computed in.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let dir = cfg.direction();
    let grid: Vec<(f64, f64)> =
        cfg.r_values.iter().flat_map(|&r| cfg.p_grid().into_iter().map(move |p| (r, p))).collect();
    grid.par_iter()
        .map(|&(r, p)| compute_row(cfg, dir, r, p).map_err(|e| Error::Sweep { r, p, source: Box::new(e) }))
        .collect()
}

/// 12 significant digits, decimal ASCII.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let s = if (-5..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s }
    } else {
        format!("{x:.11e}")
    };
    if s == "-0" { "0".into() } else { s }
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let cell = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig(row.r),
            format_sig(row.p),
            cell(row.closed),
            cell(row.procrustes_hs),
            cell(row.procrustes_exact),
            cell(row.delta()),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_uniform_and_inclusive() {
        let cfg = SweepConfig { p_steps: 5, ..Default::default() };
        assert_eq!(cfg.p_grid(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(SweepConfig::default().p_grid().len(), 101);
    }

    #[test]
    fn spot_values() {
        let cfg = SweepConfig { r_values: vec![0.8, 1.0], p_steps: 3, ..Default::default() };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 6);
        for row in &rows {
            if row.p == 0.0 {
                assert_eq!(row.closed, Some(0.0));
            }
            assert!(row.delta().unwrap().abs() <= 1e-6);
        }
        // D_N(diag(0.9, 0.1), diag(0.7, 0.3)) and √Φ(1/√2)
        assert!((rows[1].closed.unwrap() - 0.348_589_854_807_150_8).abs() < 1e-12);
        assert!((rows[5].closed.unwrap() - 0.775_161_942_237_140_6).abs() < 1e-9);
    }

    #[test]
    fn unselected_columns_are_empty() {
        let cfg = SweepConfig { r_values: vec![0.5], p_steps: 2, methods: vec![SweepMethod::Closed], seed: 1 };
        let csv = to_csv(&run_sweep(&cfg).unwrap());
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("0.5,0,0,,,"));
    }

    #[test]
    fn deterministic_output() {
        let cfg = SweepConfig { r_values: vec![0.3, 0.9], p_steps: 11, ..Default::default() };
        assert_eq!(to_csv(&run_sweep(&cfg).unwrap()), to_csv(&run_sweep(&cfg).unwrap()));
    }

    #[test]
    fn invalid_configs() {
        for cfg in [
            SweepConfig { p_steps: 1, ..Default::default() },
            SweepConfig { r_values: vec![1.2], ..Default::default() },
            SweepConfig { methods: vec![], ..Default::default() },
        ] {
            assert!(matches!(run_sweep(&cfg), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in SweepMethod::ALL {
            assert_eq!(m.name().parse::<SweepMethod>().unwrap(), m);
        }
        assert!("nope".parse::<SweepMethod>().is_err());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(0.5), "0.5");
        assert_eq!(format_sig(0.348_589_854_807_150_8), "0.348589854807");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(-2.5e-9), "-2.50000000000e-9");
        assert_eq!(format_sig(123.456_789_012_345), "123.456789012");
        let x = 0.775_161_942_237_140_6;
        assert!((format_sig(x).parse::<f64>().unwrap() - x).abs() < 1e-12);
    }
}
