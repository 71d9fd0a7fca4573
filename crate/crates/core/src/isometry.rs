//! Orientation-preserving isometries of the upper half-plane as unimodular
//! 2×2 real matrices, together with the ideal-boundary geometry needed to
//! measure closed geodesics and orthogeodesic arcs.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use thiserror::Error;

/// Classification boundary for `|trace| = 2`.
pub const TRACE_TOL: f64 = 1e-9;

/// Maximum tolerated `|det - 1|` for a matrix to count as an isometry.
pub const DET_TOL: f64 = 1e-9;

/// Number of factors after which long products are renormalized.
pub const RENORMALIZE_EVERY: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsometryError {
    #[error("matrix is not unimodular (det = {det})")]
    MalformedIsometry { det: f64 },
    #[error("isometry is not hyperbolic (trace = {trace})")]
    NotHyperbolic { trace: f64 },
    #[error("geodesics intersect or share an endpoint")]
    CrossingGeodesics,
    #[error("ideal point has zero homogeneous coordinates")]
    DegeneratePoint,
}

/// A point of the ideal boundary `R ∪ {∞}` in homogeneous coordinates `(x : w)`.
///
/// Stored canonically: either `(x : 1)` or `(1 : 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdealPoint {
    x: f64,
    w: f64,
}

impl IdealPoint {
    pub const INFINITY: IdealPoint = IdealPoint { x: 1.0, w: 0.0 };

    pub fn finite(x: f64) -> Self {
        IdealPoint { x, w: 1.0 }
    }

    pub fn homogeneous(x: f64, w: f64) -> Result<Self, IsometryError> {
        let n = x.hypot(w);
        if !(n > 0.0) || !n.is_finite() {
            return Err(IsometryError::DegeneratePoint);
        }
        // Points this close to ∞ are indistinguishable from it at f64 precision.
        if w.abs() <= 1e-14 * n {
            Ok(Self::INFINITY)
        } else {
            Ok(IdealPoint { x: x / w, w: 1.0 })
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.w == 0.0
    }

    /// Real coordinate, `None` for ∞.
    pub fn value(&self) -> Option<f64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.x)
        }
    }

    fn unit(&self) -> (f64, f64) {
        let n = self.x.hypot(self.w);
        (self.x / n, self.w / n)
    }

    /// `sin` of the projective angle between two ideal points; zero iff equal.
    fn separation(&self, other: &IdealPoint) -> f64 {
        let (x1, w1) = self.unit();
        let (x2, w2) = other.unit();
        x1 * w2 - x2 * w1
    }

    fn diff(&self, other: &IdealPoint) -> f64 {
        self.x * other.w - other.x * self.w
    }
}

impl fmt::Display for IdealPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(x) => write!(f, "{x}"),
            None => write!(f, "∞"),
        }
    }
}

/// An oriented complete geodesic, given by its two ideal endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geodesic {
    pub start: IdealPoint,
    pub end: IdealPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossing {
    Disjoint,
    Cross,
    SharedEndpoint,
}

impl Geodesic {
    pub fn new(start: IdealPoint, end: IdealPoint) -> Result<Self, IsometryError> {
        if start.separation(&end).abs() < 1e-14 {
            return Err(IsometryError::DegeneratePoint);
        }
        Ok(Geodesic { start, end })
    }

    pub fn between(a: f64, b: f64) -> Result<Self, IsometryError> {
        Self::new(IdealPoint::finite(a), IdealPoint::finite(b))
    }

    pub fn reversed(&self) -> Self {
        Geodesic {
            start: self.end,
            end: self.start,
        }
    }

    /// Unordered equality of the underlying point sets.
    pub fn same_line(&self, other: &Geodesic, tol: f64) -> bool {
        let close = |p: &IdealPoint, q: &IdealPoint| p.separation(q).abs() <= tol;
        (close(&self.start, &other.start) && close(&self.end, &other.end))
            || (close(&self.start, &other.end) && close(&self.end, &other.start))
    }

    /// Cross-ratio `(a-c)(b-d) / ((a-d)(b-c))` of the four endpoints.
    fn cross_ratio(&self, other: &Geodesic) -> f64 {
        let (a, b, c, d) = (&self.start, &self.end, &other.start, &other.end);
        (a.diff(c) * b.diff(d)) / (a.diff(d) * b.diff(c))
    }

    /// Point of the geodesic at signed arclength `s` from the point
    /// `frame(i)`, where `frame` is the standard frame sending `0 ↦ start`
    /// and `∞ ↦ end`.
    pub fn point_at(&self, s: f64) -> Complex64 {
        Isometry::frame(self).apply(Complex64::new(0.0, s.exp()))
    }
}

/// Classifies the relative position of two geodesics on the ideal boundary.
pub fn geodesics_cross(g1: &Geodesic, g2: &Geodesic) -> Crossing {
    const SHARED_TOL: f64 = 1e-12;
    let seps = [
        g1.start.separation(&g2.start),
        g1.start.separation(&g2.end),
        g1.end.separation(&g2.start),
        g1.end.separation(&g2.end),
    ];
    if seps.iter().any(|s| s.abs() < SHARED_TOL) {
        return Crossing::SharedEndpoint;
    }
    if g1.cross_ratio(g2) < 0.0 {
        Crossing::Cross
    } else {
        Crossing::Disjoint
    }
}

/// Hyperbolic distance between two disjoint geodesics, i.e. the length of
/// their common perpendicular.
///
/// With the endpoints normalized to `(0, ∞)` and `(u, v)`, `0 < u < v`, the
/// distance satisfies `tanh²(D/2) = u/v`, which is the cross-ratio.
pub fn ortho_distance(g1: &Geodesic, g2: &Geodesic) -> Result<f64, IsometryError> {
    if geodesics_cross(g1, g2) != Crossing::Disjoint {
        return Err(IsometryError::CrossingGeodesics);
    }
    let (a, b, c, d) = (&g1.start, &g1.end, &g2.start, &g2.end);
    let (ac_bd, ad_bc, ab_dc) = (a.diff(c) * b.diff(d), a.diff(d) * b.diff(c), a.diff(b) * d.diff(c));
    // q = min(χ, 1/χ); 1 − q is formed directly to avoid cancellation
    let (q, one_minus_q) = if (ac_bd / ad_bc).abs() <= 1.0 {
        (ac_bd / ad_bc, ab_dc / ad_bc)
    } else {
        (ad_bc / ac_bd, -ab_dc / ac_bd)
    };
    let r = q.sqrt();
    Ok(((1.0 + r) * (1.0 + r) / one_minus_q).ln())
}

/// Foot on `g1` of the common perpendicular to `g2`.
pub fn perpendicular_foot(g1: &Geodesic, g2: &Geodesic) -> Result<Complex64, IsometryError> {
    if geodesics_cross(g1, g2) != Crossing::Disjoint {
        return Err(IsometryError::CrossingGeodesics);
    }
    let frame = Isometry::frame(g1);
    let inv = frame.inverse();
    let u = inv.apply_ideal(&g2.start).value();
    let v = inv.apply_ideal(&g2.end).value();
    match (u, v) {
        (Some(u), Some(v)) => Ok(frame.apply(Complex64::new(0.0, (u * v).sqrt()))),
        _ => Err(IsometryError::CrossingGeodesics),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceClass {
    pub kind: TraceKind,
    pub translation_length: f64,
}

/// Translation length `2·arccosh(|t|/2)` of an isometry with trace `t`.
pub fn translation_length_from_trace(trace: f64) -> f64 {
    let h = trace.abs() / 2.0;
    if h <= 1.0 {
        0.0
    } else {
        2.0 * h.acosh()
    }
}

/// Unimodular real 2×2 matrix `[[a, b], [c, d]]` acting by `z ↦ (az+b)/(cz+d)`.
/// A matrix and its negative are the same isometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, IsometryError> {
        let m = Isometry { a, b, c, d };
        let det = m.det();
        if !det.is_finite() || (det - 1.0).abs() > m.det_tolerance() {
            return Err(IsometryError::MalformedIsometry { det });
        }
        Ok(m.normalized())
    }

    /// Rescales any matrix of positive determinant to determinant one.
    pub fn from_positive(a: f64, b: f64, c: f64, d: f64) -> Result<Self, IsometryError> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(IsometryError::MalformedIsometry { det });
        }
        let s = det.sqrt();
        Ok(Isometry {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    // Long words have huge entries, so `ad - bc` carries absolute roundoff
    // proportional to the squared norm.
    fn det_tolerance(&self) -> f64 {
        DET_TOL.max(1e-14 * self.norm_sqr())
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Rescales to unit determinant when the computed determinant has
    /// drifted by more than roundoff but is still trustworthy.
    pub fn normalized(&self) -> Self {
        let det = self.det();
        let drift = (det - 1.0).abs();
        if det > 0.0 && drift > 1e-15 && drift < 1e-6 && drift > 1e-15 * self.norm_sqr() {
            let s = det.sqrt();
            Isometry {
                a: self.a / s,
                b: self.b / s,
                c: self.c / s,
                d: self.d / s,
            }
        } else {
            *self
        }
    }

    pub fn inverse(&self) -> Self {
        Isometry {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn neg(&self) -> Self {
        Isometry {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    pub fn conjugate_by(&self, m: &Isometry) -> Self {
        *m * *self * m.inverse()
    }

    /// Diagonal translation by `length` along the geodesic `0 → ∞`.
    pub fn dilation(length: f64) -> Self {
        let h = (length / 2.0).exp();
        Isometry {
            a: h,
            b: 0.0,
            c: 0.0,
            d: 1.0 / h,
        }
    }

    /// Orientation-preserving frame taking `0 ↦ g.start`, `∞ ↦ g.end`.
    pub fn frame(g: &Geodesic) -> Self {
        let (px, pw) = (g.start.x, g.start.w);
        let (qx, qw) = (g.end.x, g.end.w);
        let det = qx * pw - px * qw;
        let (px, pw) = if det < 0.0 { (-px, -pw) } else { (px, pw) };
        Isometry::from_positive(qx, px, qw, pw).expect("distinct endpoints give nonzero det")
    }

    /// Translation by signed `length` along `g`, moving points toward `g.end`.
    pub fn translation_along(g: &Geodesic, length: f64) -> Self {
        Isometry::dilation(length).conjugate_by(&Isometry::frame(g))
    }

    /// Orientation-preserving isometry taking `g1` to `g2` (endpoints in
    /// order) and the point `p1 ∈ g1` to `p2 ∈ g2`.
    pub fn align(g1: &Geodesic, p1: Complex64, g2: &Geodesic, p2: Complex64) -> Self {
        let f1 = Isometry::frame(g1);
        let f2 = Isometry::frame(g2);
        let h1 = f1.inverse().apply(p1).norm();
        let h2 = f2.inverse().apply(p2).norm();
        f2 * Isometry::dilation((h2 / h1).ln()) * f1.inverse()
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    pub fn apply_ideal(&self, p: &IdealPoint) -> IdealPoint {
        let x = self.a * p.x + self.b * p.w;
        let w = self.c * p.x + self.d * p.w;
        IdealPoint::homogeneous(x, w).expect("invertible map keeps points nonzero")
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        Geodesic {
            start: self.apply_ideal(&g.start),
            end: self.apply_ideal(&g.end),
        }
    }

    pub fn classify(&self) -> Result<TraceClass, IsometryError> {
        let det = self.det();
        if !det.is_finite() || (det - 1.0).abs() > self.det_tolerance() {
            return Err(IsometryError::MalformedIsometry { det });
        }
        let t = self.trace().abs();
        let kind = if t > 2.0 + TRACE_TOL {
            TraceKind::Hyperbolic
        } else if t < 2.0 - TRACE_TOL {
            TraceKind::Elliptic
        } else if self.b.abs().max(self.c.abs()).max((self.a - self.d).abs()) <= 1e-9 {
            TraceKind::Identity
        } else {
            TraceKind::Parabolic
        };
        let translation_length = match kind {
            TraceKind::Hyperbolic => translation_length_from_trace(t),
            _ => 0.0,
        };
        Ok(TraceClass {
            kind,
            translation_length,
        })
    }

    pub fn translation_length(&self) -> f64 {
        translation_length_from_trace(self.trace())
    }

    /// Axis ordered from repelling to attracting fixed point.
    pub fn axis(&self) -> Result<Geodesic, IsometryError> {
        let class = self.classify()?;
        if class.kind != TraceKind::Hyperbolic {
            return Err(IsometryError::NotHyperbolic {
                trace: self.trace(),
            });
        }
        // Work with the positive-trace representative so the eigenvalue
        // bookkeeping below is sign-free.
        let m = if self.trace() < 0.0 { self.neg() } else { *self };
        let t = m.trace();
        let disc = (t * t - 4.0).sqrt();
        let lambda_big = (t + disc) / 2.0;
        let lambda_small = 1.0 / lambda_big;
        // Eigenvector for eigenvalue λ: (b, λ - a) or (λ - d, c), take the
        // better-conditioned one.
        let eig = |lambda: f64| -> IdealPoint {
            let v1 = (m.b, lambda - m.a);
            let v2 = (lambda - m.d, m.c);
            let (x, w) = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) {
                v1
            } else {
                v2
            };
            IdealPoint::homogeneous(x, w).expect("hyperbolic matrix has eigenvectors")
        };
        Geodesic::new(eig(lambda_small), eig(lambda_big))
    }

    /// Product of a sequence, renormalizing every [`RENORMALIZE_EVERY`] factors.
    pub fn product<'a, I>(factors: I) -> Self
    where
        I: IntoIterator<Item = &'a Isometry>,
    {
        let mut acc = Isometry::IDENTITY;
        for (k, f) in factors.into_iter().enumerate() {
            acc = acc * *f;
            if (k + 1) % RENORMALIZE_EVERY == 0 {
                acc = acc.normalized();
            }
        }
        acc.normalized()
    }

    /// Entrywise comparison up to the sign ambiguity.
    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        let close = |o: &Isometry| {
            (self.a - o.a).abs() <= tol
                && (self.b - o.b).abs() <= tol
                && (self.c - o.c).abs() <= tol
                && (self.d - o.d).abs() <= tol
        };
        close(other) || close(&other.neg())
    }
}

impl Mul for Isometry {
    type Output = Isometry;

    fn mul(self, o: Isometry) -> Isometry {
        Isometry {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// Reflection of the upper half-plane, stored as a determinant −1 matrix
/// acting by `z ↦ (a·z̄ + b)/(c·z̄ + d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reflection {
    m: [f64; 4],
}

impl Reflection {
    /// Reflection fixing `g` pointwise.
    pub fn across(g: &Geodesic) -> Self {
        // z ↦ -z̄ fixes the imaginary axis; transport it by the frame of g.
        let f = Isometry::frame(g);
        let fi = f.inverse();
        let r = [-1.0, 0.0, 0.0, 1.0];
        let fr = mat_mul([f.a, f.b, f.c, f.d], r);
        Reflection {
            m: mat_mul(fr, [fi.a, fi.b, fi.c, fi.d]),
        }
    }

    /// `R·M·R`, an orientation-preserving isometry.
    pub fn conjugate(&self, iso: &Isometry) -> Isometry {
        let p = mat_mul(mat_mul(self.m, [iso.a, iso.b, iso.c, iso.d]), self.m);
        Isometry {
            a: p[0],
            b: p[1],
            c: p[2],
            d: p[3],
        }
        .normalized()
    }

    /// Composition `self ∘ other` of two reflections.
    pub fn compose(&self, other: &Reflection) -> Isometry {
        // det(-1)·det(-1) = 1; the antiholomorphic conjugations cancel.
        let p = mat_mul(self.m, other.m);
        Isometry {
            a: p[0],
            b: p[1],
            c: p[2],
            d: p[3],
        }
        .normalized()
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let zc = z.conj();
        (zc * self.m[0] + self.m[1]) / (zc * self.m[2] + self.m[3])
    }
}

fn mat_mul(x: [f64; 4], y: [f64; 4]) -> [f64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// Hyperbolic distance between two points of the upper half-plane.
pub fn point_distance(z1: Complex64, z2: Complex64) -> f64 {
    let arg = 1.0 + (z1 - z2).norm_sqr() / (2.0 * z1.im * z2.im);
    arg.max(1.0).acosh()
}
