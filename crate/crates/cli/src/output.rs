use std::io::Write;

use anyhow::bail;
use htube_core::domains::{grid, rho_curve, RadialDomain};

/// Formats `x` rounded to 15 significant digits in the shortest form that
/// reads back to the rounded value.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    let mag = rounded.abs();
    if (1e-5..1e16).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Grid values snapped to multiples of 1e-12 so that, e.g., `-5 + 600 * 0.01`
/// prints as `1`.
fn snapped_grid(min: f64, max: f64, step: f64) -> anyhow::Result<Vec<f64>> {
    let g = grid(min, max, step)?;
    Ok(g.into_iter()
        .map(|x| {
            let s = (x * 1e12).round() / 1e12;
            if s == 0.0 {
                0.0
            } else {
                s
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCurve {
    F0,
    F1,
    F2,
    Rho,
}

impl BoundaryCurve {
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "f0" => BoundaryCurve::F0,
            "f1" => BoundaryCurve::F1,
            "f2" => BoundaryCurve::F2,
            "rho" => BoundaryCurve::Rho,
            _ => bail!("unknown curve `{s}` (expected f0, f1, f2 or rho)"),
        })
    }
}

/// CSV of the boundary radius `sqrt f(c)` (`c,value`) or of the level curve
/// `rho_A` (`t,a,c`) on `min + k step <= max`.
pub fn boundary_csv<W: Write>(
    out: W,
    curve: BoundaryCurve,
    level: Option<f64>,
    min: f64,
    max: f64,
    step: f64,
) -> anyhow::Result<()> {
    let xs = snapped_grid(min, max, step)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let domain = match curve {
        BoundaryCurve::F0 => Some(RadialDomain::O0),
        BoundaryCurve::F1 => Some(RadialDomain::O1),
        BoundaryCurve::F2 => Some(RadialDomain::O2),
        BoundaryCurve::Rho => None,
    };
    match domain {
        Some(d) => {
            w.write_record(["c", "value"])?;
            for c in xs {
                w.write_record([fmt_sig(c), fmt_sig(d.boundary_radius(c))])?;
            }
        }
        None => {
            let Some(level) = level else {
                bail!("the rho curve needs --A");
            };
            if !(level >= 0.0) {
                bail!("--A must be non-negative");
            }
            w.write_record(["t", "a", "c"])?;
            for t in xs {
                let p = rho_curve(level, t);
                w.write_record([fmt_sig(t), fmt_sig(p.a), fmt_sig(p.c)])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.1752011936438014569), "1.1752011936438");
        assert_eq!(fmt_sig(0.59328489803824530808), "0.593284898038245");
        assert_eq!(fmt_sig(1e-20 / 3.0), "3.33333333333333e-21");
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        boundary_csv(&mut buf, BoundaryCurve::F0, None, -1.0, 1.0, 0.5).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "c,value");
        assert_eq!(lines[3], format!("0,{}", fmt_sig(3f64.sqrt())));
        assert_eq!(lines.len(), 6);
        assert!(text.ends_with('\n') && !text.contains('\r'));

        let mut buf = Vec::new();
        assert!(boundary_csv(&mut buf, BoundaryCurve::Rho, None, 0.0, 1.0, 0.5).is_err());
        assert!(boundary_csv(Vec::new(), BoundaryCurve::F1, None, 1.0, 0.0, 0.5).is_err());
        assert!(BoundaryCurve::parse("f3").is_err());
    }
}
