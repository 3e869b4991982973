//! Convergence tables: statistics of a family over a range of parameters,
//! followed by the known limits and the gap at the last row.

use std::fmt::Write;

use crate::error::ParamError;
use crate::families;
use crate::limits;
use crate::par::Exec;
use crate::profile;
use crate::subtree::{analyze, analyze_log, LogBase, NONE};
use crate::tree::Tree;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Path,
    Star,
    Comb,
    Bethe,
    /// `comb_star(n, round(x n))`.
    CombStar {
        x: f64,
    },
    /// `double_broom(n, max(1, round(x log2 n)))`.
    DoubleBroom {
        x: f64,
    },
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Path => "path".into(),
            Family::Star => "star".into(),
            Family::Comb => "comb".into(),
            Family::Bethe => "bethe".into(),
            Family::CombStar { x } => format!("comb-star x={x}"),
            Family::DoubleBroom { x } => format!("double-broom x={x}"),
        }
    }

    pub fn min_parameter(&self) -> usize {
        match self {
            Family::Bethe => 0,
            Family::DoubleBroom { .. } => 2,
            _ => 1,
        }
    }

    pub fn build(&self, n: usize) -> Result<Tree, ParamError> {
        match *self {
            Family::Path => families::path(n),
            Family::Star => families::star(n),
            Family::Comb => families::comb(n),
            Family::Bethe => Ok(families::bethe(n)),
            Family::CombStar { x } => families::comb_star(n, ((x * n as f64).round() as usize).max(1)),
            Family::DoubleBroom { x } => {
                let lambda = (x * (n as f64).log2()).round().max(1.0) as usize;
                families::double_broom(n, lambda)
            }
        }
    }

    /// Limits of (entropy_e, entropy_2, density, q_density, path-ball
    /// fraction), where known.
    pub fn limits(&self) -> [Option<f64>; 5] {
        let ln2 = std::f64::consts::LN_2;
        match *self {
            Family::Path => [Some(0.0), Some(0.0), Some(1.0 / 3.0), None, Some(1.0)],
            Family::Star => [Some(ln2), Some(1.0), Some(0.5), Some(0.5), Some(0.0)],
            Family::Comb => [Some(ln2 / 2.0), Some(0.5), Some(0.75), Some(0.75), Some(0.0)],
            Family::Bethe => {
                let h = limits::canopy_entropy_limit().value;
                let d = limits::canopy_density_limit().value;
                [Some(h), Some(h / ln2), Some(d), Some(d), Some(0.0)]
            }
            Family::CombStar { x } => {
                let (h2, d) = limits::comb_star_limits(x).unwrap();
                [Some(h2 * ln2), Some(h2), Some(d), Some(d), Some(0.0)]
            }
            Family::DoubleBroom { x } => {
                let d = limits::double_broom_density_limit(x).unwrap();
                [Some(0.0), Some(0.0), Some(d), None, Some(1.0)]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Log,
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub family: Family,
    pub start: usize,
    pub end: usize,
    pub step: usize,
    pub mode: Mode,
    pub radii: Vec<usize>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.start > self.end {
            return Err(ParamError::Invalid(format!("empty range {}..{}", self.start, self.end)));
        }
        if self.step == 0 {
            return Err(ParamError::Invalid("step must be positive".into()));
        }
        let min = self.family.min_parameter();
        if self.start < min {
            return Err(ParamError::BelowMinimum { name: "n", value: self.start as i64, min: min as i64 });
        }
        if let Some(&r) = self.radii.iter().find(|&&r| r < 1) {
            return Err(ParamError::BelowMinimum { name: "radius", value: r as i64, min: 1 });
        }
        if let Family::CombStar { x } | Family::DoubleBroom { x } = self.family {
            if !(x > 0.0 && x.is_finite()) {
                return Err(ParamError::Invalid(format!("x must be positive, got {x}")));
            }
        }
        Ok(())
    }

    pub fn parameters(&self) -> Vec<usize> {
        (self.start..=self.end).step_by(self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub n: usize,
    pub size: usize,
    pub entropy_e: f64,
    pub entropy_2: f64,
    pub entropy_estimate: f64,
    pub density: f64,
    pub q_density: f64,
    pub path_ball_fraction: Vec<f64>,
}

pub fn compute_row(t: &Tree, n: usize, mode: Mode, radii: &[usize]) -> Row {
    let size = t.len();
    let (entropy_e, entropy_2, entropy_estimate, density, q_density) = match mode {
        Mode::Exact => {
            let s = analyze(t);
            // ln q(v) = -sum of f along the path to the core.
            let mut ln_q = vec![0.0f64; size];
            for &v in &s.core_order {
                let next = s.toward_core[v];
                if next != NONE {
                    ln_q[v] = ln_q[next] - s.f_value(v);
                }
            }
            let q_density = ln_q.iter().map(|x| x.exp()).sum::<f64>() / size as f64;
            (
                s.entropy(LogBase::E),
                s.entropy(LogBase::Two),
                s.entropy_estimate(),
                limits::ratio_to_f64(&s.density()),
                q_density,
            )
        }
        Mode::Log => {
            let s = analyze_log(t);
            (s.entropy(LogBase::E), s.entropy(LogBase::Two), s.entropy_estimate(), s.density(), s.q_density())
        }
    };
    let path_ball_fraction = radii.iter().map(|&r| profile::path_ball_count(t, r) as f64 / size as f64).collect();
    Row { n, size, entropy_e, entropy_2, entropy_estimate, density, q_density, path_ball_fraction }
}

pub fn run(spec: &ExperimentSpec, exec: Exec) -> Result<Vec<Row>, ParamError> {
    spec.validate()?;
    let params = spec.parameters();
    let trees = params.iter().map(|&n| spec.family.build(n)).collect::<Result<Vec<_>, _>>()?;
    let indexed: Vec<(usize, &Tree)> = params.iter().copied().zip(trees.iter()).collect();
    Ok(exec.map(&indexed, |&(n, t)| compute_row(t, n, spec.mode, &spec.radii)))
}

/// C-style `%.12g`.
pub fn format_g(x: f64) -> String {
    const DIGITS: usize = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -4 || exp >= DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_g).unwrap_or_default()
}

/// CSV with a header, one row per parameter, then `limit` and `gap` rows.
pub fn to_csv(spec: &ExperimentSpec, rows: &[Row]) -> String {
    let mut out = String::from("n,size,entropy_e,entropy_2,entropy_estimate,density,q_density");
    for r in &spec.radii {
        write!(out, ",path_ball_fraction_r{r}").unwrap();
    }
    out.push('\n');
    for row in rows {
        write!(
            out,
            "{},{},{},{},{},{},{}",
            row.n,
            row.size,
            format_g(row.entropy_e),
            format_g(row.entropy_2),
            format_g(row.entropy_estimate),
            format_g(row.density),
            format_g(row.q_density)
        )
        .unwrap();
        for f in &row.path_ball_fraction {
            write!(out, ",{}", format_g(*f)).unwrap();
        }
        out.push('\n');
    }
    let [h_e, h_2, d, q, pb] = spec.family.limits();
    let limit_cols = [h_e, h_2, h_e, d, q];
    write!(out, "limit,").unwrap();
    for l in limit_cols {
        write!(out, ",{}", opt(l)).unwrap();
    }
    for _ in &spec.radii {
        write!(out, ",{}", opt(pb)).unwrap();
    }
    out.push('\n');
    if let Some(last) = rows.last() {
        let values = [last.entropy_e, last.entropy_2, last.entropy_estimate, last.density, last.q_density];
        write!(out, "gap,").unwrap();
        for (l, v) in limit_cols.iter().zip(values) {
            write!(out, ",{}", opt(l.map(|l| (v - l).abs()))).unwrap();
        }
        for f in &last.path_ball_fraction {
            write!(out, ",{}", opt(pb.map(|l| (f - l).abs()))).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_matches_c() {
        assert_eq!(format_g(0.75), "0.75");
        assert_eq!(format_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_g(123456.0), "123456");
        assert_eq!(format_g(1e-5), "1e-05");
        assert_eq!(format_g(0.0001234), "0.0001234");
        assert_eq!(format_g(1e15), "1e+15");
        assert_eq!(format_g(-2.5), "-2.5");
        assert_eq!(format_g(999999999999.9), "1e+12");
    }

    #[test]
    fn comb_table() {
        let spec =
            ExperimentSpec { family: Family::Comb, start: 5, end: 20, step: 5, mode: Mode::Exact, radii: vec![1, 2] };
        let rows = run(&spec, Exec::Sequential).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![5, 10, 15, 20]);
        assert!(rows.windows(2).all(|w| w[0].density < w[1].density));
        // Only the two end spine vertices see a centred path at radius 1.
        assert_eq!(rows[0].path_ball_fraction, vec![0.2, 0.0]);
        let csv = to_csv(&spec, &rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 7);
        assert!(lines[0].ends_with("path_ball_fraction_r1,path_ball_fraction_r2"));
        assert!(lines[5].starts_with("limit,,0.34657359028,0.5,"));
        assert!(lines[6].starts_with("gap,"));
        assert_eq!(run(&spec, Exec::Parallel).unwrap(), rows);
    }

    #[test]
    fn log_and_exact_rows_agree() {
        let t = families::bethe(5);
        let a = compute_row(&t, 5, Mode::Exact, &[1]);
        let b = compute_row(&t, 5, Mode::Log, &[1]);
        assert!((a.entropy_e - b.entropy_e).abs() < 1e-12);
        assert!((a.density - b.density).abs() < 1e-12);
        assert!((a.q_density - b.q_density).abs() < 1e-12);
        assert!((a.entropy_estimate - b.entropy_estimate).abs() < 1e-12);
    }

    #[test]
    fn invalid_specs() {
        let base = ExperimentSpec { family: Family::Path, start: 3, end: 2, step: 1, mode: Mode::Exact, radii: vec![] };
        assert!(base.validate().is_err());
        assert!(ExperimentSpec { start: 0, end: 3, ..base.clone() }.validate().is_err());
        assert!(ExperimentSpec { start: 1, end: 3, radii: vec![0], ..base.clone() }.validate().is_err());
        assert!(ExperimentSpec { start: 1, end: 3, step: 0, ..base.clone() }.validate().is_err());
        let bad_x = ExperimentSpec { family: Family::CombStar { x: -1.0 }, start: 1, end: 3, ..base };
        assert!(bad_x.validate().is_err());
    }
}
