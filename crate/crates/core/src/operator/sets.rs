use crate::scalar::C64;

/// Analytic reference sets in the complex plane.
#[derive(Clone, Debug, PartialEq)]
pub enum ReferenceSet {
    Points(Vec<C64>),
    /// Closed segment between two points.
    Segment(C64, C64),
    Disc {
        center: C64,
        radius: f64,
    },
    Annulus {
        center: C64,
        inner: f64,
        outer: f64,
    },
    /// Closed polyline through the samples.
    Curve(Vec<C64>),
    /// `(filled ellipse + [-dilation, dilation]) ∩ (ellipse + closed ball of radius band)`,
    /// ellipse `{center + a cos t + i b sin t}`.
    EllipseBand {
        center: C64,
        a: f64,
        b: f64,
        dilation: f64,
        band: f64,
    },
    Union(Vec<ReferenceSet>),
}

fn seg_dist(z: C64, p: C64, q: C64) -> f64 {
    let d = q - p;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (z - p).norm();
    }
    let t = (((z - p) * d.conj()).re / l2).clamp(0.0, 1.0);
    (z - (p + d * t)).norm()
}

fn ellipse_points(center: C64, a: f64, b: f64, n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            center + C64::new(a * t.cos(), b * t.sin())
        })
        .collect()
}

fn polyline_dist(z: C64, pts: &[C64], closed: bool) -> f64 {
    match pts.len() {
        0 => f64::INFINITY,
        1 => (z - pts[0]).norm(),
        n => {
            let mut best = f64::INFINITY;
            let segs = if closed { n } else { n - 1 };
            for k in 0..segs {
                best = best.min(seg_dist(z, pts[k], pts[(k + 1) % n]));
            }
            best
        }
    }
}

impl ReferenceSet {
    /// Ellipse `{e^{g+iθ} + e^{-g-iθ}}`: semi-axes `2 cosh g` and `2 sinh g`, sampled.
    pub fn hopping_ellipse(g: f64, samples: usize) -> ReferenceSet {
        ReferenceSet::Curve(ellipse_points(C64::new(0.0, 0.0), 2.0 * g.cosh(), 2.0 * g.sinh(), samples))
    }

    /// Image of the unit circle under a Laurent polynomial `Σ c_k t^k`.
    pub fn symbol_curve(coeffs: &[(i64, C64)], samples: usize) -> ReferenceSet {
        let pts = (0..samples)
            .map(|s| {
                let th = 2.0 * std::f64::consts::PI * s as f64 / samples as f64;
                coeffs
                    .iter()
                    .map(|&(k, c)| c * C64::from_polar(1.0, th * k as f64))
                    .fold(C64::new(0.0, 0.0), |a, b| a + b)
            })
            .collect();
        ReferenceSet::Curve(pts)
    }

    pub fn dist(&self, z: C64) -> f64 {
        match self {
            ReferenceSet::Points(p) => p.iter().map(|&w| (z - w).norm()).fold(f64::INFINITY, f64::min),
            ReferenceSet::Segment(p, q) => seg_dist(z, *p, *q),
            ReferenceSet::Disc { center, radius } => ((z - center).norm() - radius).max(0.0),
            ReferenceSet::Annulus { center, inner, outer } => {
                let r = (z - center).norm();
                if r < *inner {
                    inner - r
                } else {
                    (r - outer).max(0.0)
                }
            }
            ReferenceSet::Curve(p) => polyline_dist(z, p, true),
            ReferenceSet::EllipseBand { .. } => {
                if self.contains(z, 0.0) {
                    0.0
                } else {
                    self.sample(4096).iter().map(|&w| (z - w).norm()).fold(f64::INFINITY, f64::min)
                }
            }
            ReferenceSet::Union(parts) => parts.iter().map(|s| s.dist(z)).fold(f64::INFINITY, f64::min),
        }
    }

    /// Membership in the set enlarged by `slack`.
    pub fn contains(&self, z: C64, slack: f64) -> bool {
        match self {
            ReferenceSet::EllipseBand { center, a, b, dilation, band } => {
                let w = z - center;
                let near_curve = polyline_dist(z, &ellipse_points(*center, *a, *b, 2048), true) <= band + slack;
                // horizontal dilation of the filled ellipse, then enlarged by slack
                let (bb, aa) = (b + slack, a + slack);
                let in_hull = if w.im.abs() > bb {
                    false
                } else {
                    let half = aa * (1.0 - (w.im / bb).powi(2)).max(0.0).sqrt();
                    w.re.abs() <= half + dilation
                };
                near_curve && in_hull
            }
            ReferenceSet::Union(parts) => parts.iter().any(|s| s.contains(z, slack)),
            _ => self.dist(z) <= slack,
        }
    }

    /// Finite sample for Hausdorff comparisons. Two-dimensional sets are sampled on a grid
    /// of roughly `n` points.
    pub fn sample(&self, n: usize) -> Vec<C64> {
        let n = n.max(2);
        match self {
            ReferenceSet::Points(p) => p.clone(),
            ReferenceSet::Segment(p, q) => (0..n).map(|k| p + (q - p) * (k as f64 / (n - 1) as f64)).collect(),
            ReferenceSet::Curve(p) => p.clone(),
            ReferenceSet::Disc { center, radius } => grid_fill(*center, *radius, n, |w| w.norm() <= *radius),
            ReferenceSet::Annulus { center, inner, outer } => grid_fill(*center, *outer, n, |w| {
                let r = w.norm();
                r >= *inner && r <= *outer
            }),
            ReferenceSet::EllipseBand { center, a, b, dilation, band } => {
                let half = (a + dilation).max(b + band);
                let set = self.clone();
                grid_fill(*center, half, n, move |w| set.contains(w + center, 0.0))
            }
            ReferenceSet::Union(parts) => parts.iter().flat_map(|s| s.sample(n)).collect(),
        }
    }

    pub fn translated(&self, s: C64) -> ReferenceSet {
        match self {
            ReferenceSet::Points(p) => ReferenceSet::Points(p.iter().map(|&z| z + s).collect()),
            ReferenceSet::Segment(p, q) => ReferenceSet::Segment(p + s, q + s),
            ReferenceSet::Disc { center, radius } => ReferenceSet::Disc { center: center + s, radius: *radius },
            ReferenceSet::Annulus { center, inner, outer } => {
                ReferenceSet::Annulus { center: center + s, inner: *inner, outer: *outer }
            }
            ReferenceSet::Curve(p) => ReferenceSet::Curve(p.iter().map(|&z| z + s).collect()),
            ReferenceSet::EllipseBand { center, a, b, dilation, band } => {
                ReferenceSet::EllipseBand { center: center + s, a: *a, b: *b, dilation: *dilation, band: *band }
            }
            ReferenceSet::Union(parts) => ReferenceSet::Union(parts.iter().map(|p| p.translated(s)).collect()),
        }
    }
}

fn grid_fill(center: C64, half: f64, n: usize, keep: impl Fn(C64) -> bool) -> Vec<C64> {
    let side = (n as f64).sqrt().ceil().max(2.0) as usize;
    let mut out = Vec::new();
    for a in 0..side {
        for b in 0..side {
            let w = C64::new(
                -half + 2.0 * half * a as f64 / (side - 1) as f64,
                -half + 2.0 * half * b as f64 / (side - 1) as f64,
            );
            if keep(w) {
                out.push(center + w);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_distance() {
        let a = ReferenceSet::Annulus { center: C64::new(0.0, 0.0), inner: 1.0, outer: 2.0 };
        assert_eq!(a.dist(C64::new(0.5, 0.0)), 0.5);
        assert_eq!(a.dist(C64::new(0.0, 1.5)), 0.0);
        assert_eq!(a.dist(C64::new(3.0, 0.0)), 1.0);
    }

    #[test]
    fn segment_distance() {
        let s = ReferenceSet::Segment(C64::new(-2.0, 0.0), C64::new(2.0, 0.0));
        assert!((s.dist(C64::new(1.0, 0.5)) - 0.5).abs() < 1e-15);
        assert!((s.dist(C64::new(3.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ellipse_axes() {
        let g: f64 = 0.1;
        let ReferenceSet::Curve(p) = ReferenceSet::hopping_ellipse(g, 8) else { panic!() };
        let z0 = C64::new(g, 0.0).exp() + C64::new(-g, 0.0).exp();
        assert!((p[0] - z0).norm() < 1e-14);
        let th = std::f64::consts::FRAC_PI_2;
        let z2 = C64::new(g, th).exp() + C64::new(-g, -th).exp();
        assert!((p[2] - z2).norm() < 1e-14);
    }

    #[test]
    fn band_membership() {
        let s = ReferenceSet::EllipseBand { center: C64::new(0.0, 0.0), a: 2.0, b: 1.5, dilation: 1.0, band: 1.0 };
        assert!(s.contains(C64::new(2.5, 0.0), 0.0));
        assert!(!s.contains(C64::new(0.0, 0.0), 0.0));
        assert!(!s.contains(C64::new(3.5, 0.0), 0.0));
    }
}
