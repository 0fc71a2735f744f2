//! Searching for distinct sources with equal `P~` images.
//!
//! Rotations about the `c`-axis commute with `P~` and preserve the direction of
//! `(a, b)`, so collisions can be searched in the half-plane `b = 0, a >= 0`.
//! Grid images are bucketed to find pairs of rows whose images come close;
//! each such pair of rows is then solved exactly. On rows `c1 != c2` equal first
//! components force `a2 = a1 l(c1)/l(c2)`, after which equal third components
//! is a linear equation in `a1^2`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::RadialDomain;
use crate::geodesic::TangentVector3;
use crate::kernel::{eval_scalar, ScalarFn};
use crate::ptilde::ptilde3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    /// Columns per row, placed at fractions `(i + 1/2)/n_a` of the boundary radius.
    pub n_a: usize,
    /// Rows at the midpoints of `n_c` equal cells of `[-c_max, c_max]`.
    pub n_c: usize,
    pub c_max: f64,
    /// Additional rows, each added together with its mirror image.
    pub extra_rows: Vec<f64>,
    /// Bucket size for finding candidate pairs of rows.
    pub cell: f64,
    /// Collisions agreeing after rounding to this are reported once.
    pub rounding: f64,
    /// Images must agree to `image_tol (1 + |image|)`.
    pub image_tol: f64,
    /// Sources must satisfy `a < (1 - margin) sqrt f(c)`.
    pub margin: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            n_a: 500,
            n_c: 1000,
            c_max: 6.0,
            extra_rows: vec![1.0],
            cell: 1e-2,
            rounding: 1e-6,
            image_tol: 1e-12,
            margin: 1e-9,
        }
    }
}

impl ScanConfig {
    /// The sorted row heights, symmetric under `c -> -c`.
    pub fn rows(&self) -> Vec<f64> {
        let n = self.n_c as f64;
        let mut rows: Vec<f64> = (0..self.n_c)
            .map(|j| self.c_max * (2.0 * j as f64 + 1.0 - n) / n)
            .collect();
        for &e in &self.extra_rows {
            rows.push(e);
            rows.push(-e);
        }
        rows.sort_by(f64::total_cmp);
        rows.dedup();
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Collision {
    /// The source with the smaller `c`.
    pub first: TangentVector3,
    pub second: TangentVector3,
    pub image: TangentVector3,
    pub image_gap: f64,
}

impl Collision {
    pub fn is_mirror_pair(&self, tol: f64) -> bool {
        (self.first.a - self.second.a).abs() <= tol && (self.first.c + self.second.c).abs() <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub domain: RadialDomain,
    pub rows: usize,
    pub grid_points: usize,
    pub candidate_row_pairs: usize,
    pub collisions: Vec<Collision>,
}

type Cell = (i64, i64);

fn cell_of(p: TangentVector3, size: f64) -> Cell {
    ((p.a / size).floor() as i64, (p.c / size).floor() as i64)
}

/// Exact collision on the rows `c1 != c2`, if one exists with both sources in `d`.
fn solve_row_pair(d: RadialDomain, c1: f64, c2: f64, cfg: &ScanConfig) -> Option<Collision> {
    let (l1, l2) = (eval_scalar(ScalarFn::L, c1), eval_scalar(ScalarFn::L, c2));
    let (m1, m2) = (eval_scalar(ScalarFn::M, c1), eval_scalar(ScalarFn::M, c2));
    let ratio = l1 / l2;
    let s = (c2 - c1) / (c1 * m1 - c2 * m2 * ratio * ratio);
    if !(s > 0.0 && s.is_finite()) {
        return None;
    }
    let a1 = s.sqrt();
    let first = TangentVector3::new(a1, 0.0, c1);
    let second = TangentVector3::new(a1 * ratio, 0.0, c2);
    if !(d.contains_with_margin(first, cfg.margin) && d.contains_with_margin(second, cfg.margin)) {
        return None;
    }
    let (i1, i2) = (ptilde3(first), ptilde3(second));
    let gap = i1.dist(i2);
    (gap <= cfg.image_tol * (1.0 + i1.norm())).then_some(Collision {
        first,
        second,
        image: i1,
        image_gap: gap,
    })
}

/// Scans the half-plane grid of `d` for pairs of distinct sources with equal images.
pub fn injectivity_scan(d: RadialDomain, cfg: &ScanConfig) -> ScanReport {
    let rows = cfg.rows();
    let n_a = cfg.n_a;

    let mut keyed: Vec<(Cell, u32)> = rows
        .par_iter()
        .enumerate()
        .flat_map_iter(|(j, &c)| {
            let r = d.boundary_radius(c);
            (0..n_a).map(move |i| {
                let a = (i as f64 + 0.5) / n_a as f64 * r;
                (cell_of(ptilde3(TangentVector3::new(a, 0.0, c)), cfg.cell), j as u32)
            })
        })
        .collect();
    let grid_points = keyed.len();
    keyed.par_sort_unstable();
    keyed.dedup();

    let mut cells: HashMap<Cell, Vec<u32>> = HashMap::new();
    for (cell, row) in keyed {
        cells.entry(cell).or_default().push(row);
    }

    let mut pairs: Vec<(u32, u32)> = cells
        .par_iter()
        .flat_map_iter(|(&(x, y), here)| {
            let mut out = Vec::new();
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(there) = cells.get(&(x + dx, y + dy)) else {
                        continue;
                    };
                    for &r1 in here {
                        for &r2 in there {
                            if r1 < r2 {
                                out.push((r1, r2));
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    pairs.par_sort_unstable();
    pairs.dedup();

    let mut collisions: Vec<Collision> = pairs
        .par_iter()
        .filter_map(|&(r1, r2)| solve_row_pair(d, rows[r1 as usize], rows[r2 as usize], cfg))
        .collect();
    collisions.sort_by(|x, y| {
        (x.first.c, x.second.c, x.first.a)
            .partial_cmp(&(y.first.c, y.second.c, y.first.a))
            .expect("finite sources")
    });
    let key = |p: &TangentVector3| ((p.a / cfg.rounding).round() as i64, (p.c / cfg.rounding).round() as i64);
    collisions.dedup_by(|x, y| key(&x.first) == key(&y.first) && key(&x.second) == key(&y.second));

    ScanReport {
        domain: d,
        rows: rows.len(),
        grid_points,
        candidate_row_pairs: pairs.len(),
        collisions,
    }
}
