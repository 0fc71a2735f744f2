//! Affine convexity of the image regions `P~(O0)`, `P~(O1)`, `P~(O2)`.
//!
//! Two of the regions miss only a planar set (a circle, or the part of the
//! plane `C = 0` outside a disk). Random pairs almost never see such a set, so
//! besides random midpoint tests the check places symmetric pairs `e +- d`
//! around sampled excluded points `e`, and every segment is also intersected
//! exactly with the excluded set.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::RadialDomain;
use crate::geodesic::TangentVector3;

/// Distance at which a point counts as lying on a planar excluded set.
const SET_TOL: f64 = 1e-12;
const BOX: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ImageRegion {
    /// `{A^2 + B^2 < 3}`, the image of `O2`.
    Cylinder,
    /// Everything except the circle `{A^2 + B^2 = 3, C = 0}`, the image of `O0`.
    PuncturedByCircle,
    /// Everything except `{A^2 + B^2 >= 3, C = 0}`, the image of `O1`.
    SlitOutsideDisk,
}

impl ImageRegion {
    pub fn of_domain(d: RadialDomain) -> Self {
        match d {
            RadialDomain::O0 => ImageRegion::PuncturedByCircle,
            RadialDomain::O1 => ImageRegion::SlitOutsideDisk,
            RadialDomain::O2 => ImageRegion::Cylinder,
        }
    }

    pub fn contains(self, p: TangentVector3) -> bool {
        let r = p.radius_sq().sqrt();
        let s3 = 3f64.sqrt();
        match self {
            ImageRegion::Cylinder => r < s3,
            ImageRegion::PuncturedByCircle => !((r - s3).abs() <= SET_TOL && p.c.abs() <= SET_TOL),
            ImageRegion::SlitOutsideDisk => !(r >= s3 - SET_TOL && p.c.abs() <= SET_TOL),
        }
    }

    fn complement_sample<R: Rng>(self, rng: &mut R) -> TangentVector3 {
        let theta = rng.random_range(0.0..TAU);
        let s3 = 3f64.sqrt();
        let (r, c) = match self {
            ImageRegion::Cylinder => (rng.random_range(s3..BOX), rng.random_range(-BOX..BOX)),
            ImageRegion::PuncturedByCircle => (s3, 0.0),
            ImageRegion::SlitOutsideDisk => (rng.random_range(s3..BOX), 0.0),
        };
        TangentVector3::new(r * theta.cos(), r * theta.sin(), c)
    }
}

fn lerp(p: TangentVector3, q: TangentVector3, s: f64) -> TangentVector3 {
    TangentVector3::new(p.a + s * (q.a - p.a), p.b + s * (q.b - p.b), p.c + s * (q.c - p.c))
}

/// Parameters `s in [0, 1]` where `|x(s)|^2 = 3` for `x(s) = p + s (q - p)`
/// restricted to the `(A, B)` components.
fn circle_hits(p: TangentVector3, q: TangentVector3) -> Vec<f64> {
    let (da, db) = (q.a - p.a, q.b - p.b);
    let qa = da * da + db * db;
    let qb = 2.0 * (p.a * da + p.b * db);
    let qc = p.radius_sq() - 3.0;
    if qa == 0.0 {
        return if qc.abs() <= SET_TOL { vec![0.0] } else { Vec::new() };
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let mut roots = vec![(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)];
    roots.retain(|s| (0.0..=1.0).contains(s));
    roots
}

/// First point of the closed segment `[p, q]` outside `region`, if any.
pub fn segment_escape(region: ImageRegion, p: TangentVector3, q: TangentVector3) -> Option<TangentVector3> {
    for end in [p, q] {
        if !region.contains(end) {
            return Some(end);
        }
    }
    match region {
        // convex: the squared radius along a segment peaks at an endpoint
        ImageRegion::Cylinder => None,
        ImageRegion::PuncturedByCircle | ImageRegion::SlitOutsideDisk => {
            let in_plane: Vec<f64> = if p.c == 0.0 && q.c == 0.0 {
                match region {
                    ImageRegion::PuncturedByCircle => circle_hits(p, q),
                    // both ends lie in the open disk, and so does the segment
                    _ => Vec::new(),
                }
            } else if p.c.signum() != q.c.signum() || p.c == 0.0 || q.c == 0.0 {
                vec![p.c / (p.c - q.c)]
            } else {
                Vec::new()
            };
            in_plane
                .into_iter()
                .map(|s| {
                    let mut x = lerp(p, q, s);
                    x.c = 0.0;
                    x
                })
                .find(|&x| !region.contains(x))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityWitness {
    pub p: TangentVector3,
    pub q: TangentVector3,
    /// A point of the segment `[p, q]` outside the region.
    pub excluded: TangentVector3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub region: ImageRegion,
    pub pairs_tested: usize,
    pub convex: bool,
    pub witness: Option<ConvexityWitness>,
}

fn test_pair(region: ImageRegion, p: TangentVector3, q: TangentVector3) -> Option<ConvexityWitness> {
    if !(region.contains(p) && region.contains(q)) {
        return None;
    }
    let mid = lerp(p, q, 0.5);
    let excluded = if region.contains(mid) {
        segment_escape(region, p, q)?
    } else {
        mid
    };
    Some(ConvexityWitness { p, q, excluded })
}

/// Midpoint and segment tests on `pairs` random pairs in `[-4, 4]^3` and on
/// `pairs` symmetric pairs around excluded points; returns the first failure.
pub fn convexity_check(region: ImageRegion, pairs: usize, seed: u64) -> ConvexityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng, half: f64| {
        TangentVector3::new(
            rng.random_range(-half..half),
            rng.random_range(-half..half),
            rng.random_range(-half..half),
        )
    };
    let mut tested = 0;
    for k in 0..2 * pairs {
        let (p, q) = if k < pairs {
            (point(&mut rng, BOX), point(&mut rng, BOX))
        } else {
            let e = region.complement_sample(&mut rng);
            let d = point(&mut rng, 0.5 * BOX);
            (
                TangentVector3::new(e.a + d.a, e.b + d.b, e.c + d.c),
                TangentVector3::new(e.a - d.a, e.b - d.b, e.c - d.c),
            )
        };
        tested += 1;
        if let Some(w) = test_pair(region, p, q) {
            return ConvexityReport {
                region,
                pairs_tested: tested,
                convex: false,
                witness: Some(w),
            };
        }
    }
    ConvexityReport {
        region,
        pairs_tested: tested,
        convex: true,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(a: f64) -> TangentVector3 {
        TangentVector3::new(a, 0.0, 0.0)
    }

    #[test]
    fn cylinder_is_convex() {
        let r = convexity_check(ImageRegion::Cylinder, 20_000, 1);
        assert!(r.convex && r.witness.is_none());
        assert_eq!(r.pairs_tested, 40_000);
    }

    #[test]
    fn documented_witness_segment() {
        let region = ImageRegion::PuncturedByCircle;
        assert!(region.contains(axis(0.5)) && region.contains(axis(2.5)));
        let hit = segment_escape(region, axis(0.5), axis(2.5)).unwrap();
        assert!((hit.a - 3f64.sqrt()).abs() < 1e-15 && hit.c == 0.0);

        // (2.5, 0, 0) itself is excluded from the slit region, so lift the ends
        let slit = ImageRegion::SlitOutsideDisk;
        assert!(!slit.contains(axis(2.5)));
        let (p, q) = (TangentVector3::new(2.5, 0.0, 1.0), TangentVector3::new(2.5, 0.0, -1.0));
        assert_eq!(segment_escape(slit, p, q), Some(axis(2.5)));
        assert_eq!(segment_escape(slit, axis(0.5), axis(2.5)), Some(axis(2.5)));
    }

    #[test]
    fn punctured_and_slit_images_are_not_convex() {
        for region in [ImageRegion::PuncturedByCircle, ImageRegion::SlitOutsideDisk] {
            let r = convexity_check(region, 1000, 2);
            let w = r.witness.expect("a witness");
            assert!(!r.convex);
            assert!(region.contains(w.p) && region.contains(w.q));
            assert!(!region.contains(w.excluded));
            let s3 = 3f64.sqrt();
            assert!(w.excluded.c.abs() <= 1e-12 && w.excluded.radius_sq().sqrt() >= s3 - 1e-12);
        }
    }

    #[test]
    fn segments_crossing_the_plane_elsewhere_stay_inside() {
        let region = ImageRegion::PuncturedByCircle;
        let p = TangentVector3::new(0.2, 0.1, 1.0);
        let q = TangentVector3::new(0.3, -0.4, -2.0);
        assert!(segment_escape(region, p, q).is_none());
        assert!(segment_escape(ImageRegion::SlitOutsideDisk, p, q).is_none());
        let far = TangentVector3::new(3.0, 0.0, 1.0);
        let far_m = TangentVector3::new(3.0, 0.0, -1.0);
        assert!(segment_escape(region, far, far_m).is_none());
        assert!(segment_escape(ImageRegion::SlitOutsideDisk, far, far_m).is_some());
        assert!(segment_escape(ImageRegion::Cylinder, axis(0.0), axis(1.8)).is_some());
    }

    #[test]
    fn region_of_each_domain() {
        assert_eq!(ImageRegion::of_domain(RadialDomain::O2), ImageRegion::Cylinder);
        assert_eq!(ImageRegion::of_domain(RadialDomain::O0), ImageRegion::PuncturedByCircle);
        assert_eq!(ImageRegion::of_domain(RadialDomain::O1), ImageRegion::SlitOutsideDisk);
    }
}
