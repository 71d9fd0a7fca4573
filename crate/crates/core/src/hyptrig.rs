//! Right-angled polygon trigonometry and the closed-form geometry of a pair
//! of pants: seams, self-arcs and their cusp degenerations.
//!
//! Public functions take full boundary lengths; formulas are evaluated in
//! half-lengths. A boundary length of `0` encodes a cusp.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrigError {
    #[error("no right-angled hexagon with these sides (cosh = {value})")]
    NoSuchHexagon { value: f64 },
    #[error("no right-angled pentagon with these sides (sinh·sinh = {value})")]
    NoSuchPentagon { value: f64 },
    #[error("arc endpoint lies on cusp {index}")]
    CuspEndpoint { index: usize },
    #[error("pants have different cusp patterns")]
    CuspMismatch,
    #[error("invalid pants data: {0}")]
    InvalidPants(String),
    #[error("boundary index {0} out of range")]
    BadIndex(usize),
    #[error("non-positive polygon side {0}")]
    NonPositive(f64),
}

// Slack for `cosh ≥ 1` style tests, so exactly degenerate polygons survive roundoff.
const ONE_TOL: f64 = 1e-12;

fn positive(x: f64) -> Result<f64, TrigError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(TrigError::NonPositive(x))
    }
}

/// Side `a` of a right-angled hexagon from the opposite side `a'` and the
/// two sides `b`, `c` adjacent to `a'`:
/// `cosh a = −cosh b·cosh c + sinh b·sinh c·cosh a'`.
pub fn hexagon_side(b: f64, c: f64, a_prime: f64) -> Result<f64, TrigError> {
    let (b, c, a_prime) = (positive(b)?, positive(c)?, positive(a_prime)?);
    let value = -b.cosh() * c.cosh() + b.sinh() * c.sinh() * a_prime.cosh();
    if value <= 1.0 {
        return Err(TrigError::NoSuchHexagon { value });
    }
    Ok(value.acosh())
}

/// Inverse of [`hexagon_side`]: the side `a'` opposite `a`, given `a` and the
/// two sides `b`, `c` flanking `a'`. Any three alternating sides determine
/// the hexagon, so this always succeeds for positive input.
pub fn hexagon_opposite(b: f64, c: f64, a: f64) -> Result<f64, TrigError> {
    let (b, c) = (positive(b)?, positive(c)?);
    if !(a >= 0.0 && a.is_finite()) {
        return Err(TrigError::NonPositive(a));
    }
    let value = (a.cosh() + b.cosh() * c.cosh()) / (b.sinh() * c.sinh());
    Ok(value.acosh())
}

/// Side `a` of a right-angled pentagon opposite the two non-adjacent sides
/// `b`, `c`: `cosh a = sinh b·sinh c`.
pub fn pentagon_side(b: f64, c: f64) -> Result<f64, TrigError> {
    let (b, c) = (positive(b)?, positive(c)?);
    let value = b.sinh() * c.sinh();
    if value < 1.0 - ONE_TOL {
        return Err(TrigError::NoSuchPentagon { value });
    }
    Ok(value.max(1.0).acosh())
}

/// Quadrilateral with three right angles and one ideal vertex:
/// the side `b` with `sinh a·sinh b = 1`.
pub fn cusp_square(a: f64) -> Result<f64, TrigError> {
    let a = positive(a)?;
    Ok((1.0 / a.sinh()).asinh())
}

/// Boundary lengths of a pair of pants; `0` marks a cusp.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PantsGeometry {
    boundary_lengths: [f64; 3],
}

/// One of the six essential arc classes of a pair of pants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PantsArc {
    /// Orthogeodesic between two distinct boundaries `i < j`.
    Seam(usize, usize),
    /// Orthogeodesic from boundary `i` back to itself, separating the other two holes.
    SelfArc(usize),
}

impl PantsGeometry {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self, TrigError> {
        let ls = [l1, l2, l3];
        if ls.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return Err(TrigError::InvalidPants(format!("lengths {ls:?}")));
        }
        if ls.iter().all(|l| *l == 0.0) {
            return Err(TrigError::InvalidPants("thrice-punctured sphere has no boundary".into()));
        }
        Ok(PantsGeometry {
            boundary_lengths: ls,
        })
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.boundary_lengths
    }

    pub fn is_cusp(&self, i: usize) -> bool {
        self.boundary_lengths[i] == 0.0
    }

    fn half(&self, i: usize) -> f64 {
        self.boundary_lengths[i] / 2.0
    }

    fn check(&self, i: usize) -> Result<(), TrigError> {
        if i > 2 {
            return Err(TrigError::BadIndex(i));
        }
        if self.is_cusp(i) {
            return Err(TrigError::CuspEndpoint { index: i });
        }
        Ok(())
    }

    fn cusp_pattern(&self) -> [bool; 3] {
        [self.is_cusp(0), self.is_cusp(1), self.is_cusp(2)]
    }

    /// The arc classes with both endpoints on genuine boundary.
    pub fn arcs(&self) -> Vec<PantsArc> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in (i + 1)..3 {
                if !self.is_cusp(i) && !self.is_cusp(j) {
                    out.push(PantsArc::Seam(i, j));
                }
            }
        }
        for i in 0..3 {
            if !self.is_cusp(i) {
                out.push(PantsArc::SelfArc(i));
            }
        }
        out
    }

    pub fn arc_length(&self, arc: PantsArc) -> Result<f64, TrigError> {
        match arc {
            PantsArc::Seam(i, j) => pants_seam(self, i, j),
            PantsArc::SelfArc(i) => {
                let via = (i + 1) % 3;
                pants_self_arc(self, i, via)
            }
        }
    }
}

fn other(i: usize, j: usize) -> usize {
    3 - i - j
}

/// Length of the simple orthogeodesic between boundaries `i ≠ j`:
/// `cosh b = (cosh a″ + cosh a·cosh a′)/(sinh a·sinh a′)` in half-lengths,
/// with `a″ = 0` when the third hole is a cusp.
pub fn pants_seam(p: &PantsGeometry, i: usize, j: usize) -> Result<f64, TrigError> {
    p.check(i)?;
    p.check(j)?;
    if i == j {
        return Err(TrigError::BadIndex(j));
    }
    hexagon_opposite(p.half(i), p.half(j), p.half(other(i, j)))
}

/// Full length of the simple orthogeodesic from boundary `i` to itself.
///
/// The arc cuts each hexagon into two right-angled pentagons; `via` picks
/// the hole `j ≠ i` whose pentagon is used, `cosh(l/2) = sinh(l_j/2)·sinh(seam_ij)`.
/// Both choices give the same length. A cusp `via` falls back to the other
/// hole; with two cusps the quadrilateral relation `sinh(l_i/4)·sinh(l/2) = 1` applies.
pub fn pants_self_arc(p: &PantsGeometry, i: usize, via: usize) -> Result<f64, TrigError> {
    p.check(i)?;
    if via > 2 || via == i {
        return Err(TrigError::BadIndex(via));
    }
    let rest = other(i, via);
    let j = if p.is_cusp(via) { rest } else { via };
    if p.is_cusp(j) {
        return Ok(2.0 * cusp_square(p.boundary_lengths[i] / 4.0)?);
    }
    let seam = pants_seam(p, i, j)?;
    Ok(2.0 * pentagon_side(p.half(j), seam)?)
}

/// Exact `(δ_L, d_L)` between two pants structures with the same cusp pattern.
///
/// On a pair of pants the simple closed curves are the boundaries and the
/// arcs are the (at most) six classes of [`PantsGeometry::arcs`].
pub fn pants_delta_exact(p1: &PantsGeometry, p2: &PantsGeometry) -> Result<(f64, f64), TrigError> {
    if p1.cusp_pattern() != p2.cusp_pattern() {
        return Err(TrigError::CuspMismatch);
    }
    let mut curve_sup: f64 = 1.0;
    for i in 0..3 {
        if !p1.is_cusp(i) {
            let (x, y) = (p1.boundary_lengths[i], p2.boundary_lengths[i]);
            curve_sup = curve_sup.max(x / y).max(y / x);
        }
    }
    let mut all_sup = curve_sup;
    for arc in p1.arcs() {
        let (x, y) = (p1.arc_length(arc)?, p2.arc_length(arc)?);
        all_sup = all_sup.max(x / y).max(y / x);
    }
    Ok((all_sup.ln(), curve_sup.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn regular_hexagon() {
        // cosh²s − cosh s − 2 = 0 ⇒ cosh s = 2
        let s = 2f64.acosh();
        assert!(close(hexagon_side(s, s, s).unwrap(), s, 1e-12));
        assert!(close(hexagon_opposite(s, s, s).unwrap(), s, 1e-12));
    }

    #[test]
    fn hexagon_failure() {
        assert!(matches!(hexagon_side(1.0, 1.0, 0.1), Err(TrigError::NoSuchHexagon { .. })));
        assert!(hexagon_side(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn hexagon_round_trip_grid() {
        for &b in &[0.2, 0.7, 1.5, 3.0] {
            for &c in &[0.3, 1.0, 2.2] {
                for &a in &[0.0, 0.4, 1.0, 2.5] {
                    let ap = hexagon_opposite(b, c, a).unwrap();
                    if a > 0.0 {
                        assert!(close(hexagon_side(b, c, ap).unwrap(), a, 1e-9 * (1.0 + a)));
                    }
                }
            }
        }
    }

    #[test]
    fn pentagon_examples() {
        let s = 1f64.asinh();
        assert!(close(pentagon_side(s, s).unwrap(), 0.0, 1e-12));
        assert!(close(pentagon_side(1.0, 1.0).unwrap(), 0.847450581295851, 1e-12));
        assert!(matches!(pentagon_side(2.0, 0.1), Err(TrigError::NoSuchPentagon { .. })));
    }

    #[test]
    fn cusp_square_examples() {
        let s = 1f64.asinh();
        assert!(close(cusp_square(s).unwrap(), s, 1e-12));
        let b = cusp_square(2.0 * s).unwrap();
        assert!(close(b, (1.0 / (2.0 * s).sinh()).asinh(), 1e-15));
        assert!(close(b, 0.3465735902799727, 1e-12));
        let mut prev = f64::INFINITY;
        for k in 1..40 {
            let v = cusp_square(k as f64 * 0.5).unwrap();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn seam_examples() {
        let p = PantsGeometry::new(2.0, 2.0, 2.0).unwrap();
        let b = pants_seam(&p, 0, 1).unwrap();
        assert!(close(b, 1.7049128323580138, 1e-12));
        assert!(close(pants_seam(&p, 1, 0).unwrap(), b, 1e-15));

        // case (iv): cusp as third hole equals the sum of two cusp quadrilaterals
        let q = PantsGeometry::new(2.0, 2.0, 0.0).unwrap();
        let s = pants_seam(&q, 0, 1).unwrap();
        let expect = ((1.0 + 1f64.cosh().powi(2)) / 1f64.sinh().powi(2)).acosh();
        assert!(close(s, expect, 1e-12));
        let split = cusp_square(1.0).unwrap() * 2.0;
        assert!(close(s, split, 1e-12));

        let q = PantsGeometry::new(1.3, 2.7, 0.0).unwrap();
        let split = cusp_square(0.65).unwrap() + cusp_square(1.35).unwrap();
        assert!(close(pants_seam(&q, 0, 1).unwrap(), split, 1e-12));

        assert_eq!(pants_seam(&q, 0, 2), Err(TrigError::CuspEndpoint { index: 2 }));
    }

    #[test]
    fn hexagon_degenerates_to_cusp_case() {
        let cusp = PantsGeometry::new(1.7, 2.4, 0.0).unwrap();
        let target = pants_seam(&cusp, 0, 1).unwrap();
        let mut last = f64::INFINITY;
        for k in 1..8 {
            let eps = 10f64.powi(-k);
            let p = PantsGeometry::new(1.7, 2.4, eps).unwrap();
            let err = (pants_seam(&p, 0, 1).unwrap() - target).abs();
            assert!(err <= last);
            last = err;
        }
        assert!(last < 1e-12);
    }

    #[test]
    fn self_arc_examples() {
        let p = PantsGeometry::new(2.0, 2.0, 2.0).unwrap();
        let l = pants_self_arc(&p, 0, 1).unwrap();
        assert!(close(l, 3.612225999682252, 1e-12));
        assert!(close(pants_self_arc(&p, 0, 2).unwrap(), l, 1e-12));

        // case (iii)
        for &t in &[0.5, 1.0, 3.0] {
            let q = PantsGeometry::new(t, 0.0, 0.0).unwrap();
            let l = pants_self_arc(&q, 0, 1).unwrap();
            assert!(close(l, 2.0 * (1.0 / (t / 4.0f64).sinh()).asinh(), 1e-12));
        }
    }

    #[test]
    fn both_pentagons_agree() {
        for &(x, y, z) in &[(1.0, 2.0, 3.0), (0.3, 4.0, 1.1), (5.0, 0.5, 0.5)] {
            let p = PantsGeometry::new(x, y, z).unwrap();
            for i in 0..3 {
                let a = pants_self_arc(&p, i, (i + 1) % 3).unwrap();
                let b = pants_self_arc(&p, i, (i + 2) % 3).unwrap();
                assert!(close(a, b, 1e-9 * a.max(1.0)), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn self_arc_cusp_limits() {
        // case (v): boundary 0 with the other two holes (γ′, cusp)
        let cusp = PantsGeometry::new(1.5, 2.0, 0.0).unwrap();
        let l = pants_self_arc(&cusp, 0, 2).unwrap();
        let near = PantsGeometry::new(1.5, 2.0, 1e-9).unwrap();
        assert!(close(pants_self_arc(&near, 0, 1).unwrap(), l, 1e-7));
        // Two cusps as a limit of one: the pentagon has a side (the seam)
        // running off to infinity and converges to the cusp quadrilateral.
        let two = PantsGeometry::new(1.5, 0.0, 0.0).unwrap();
        let near = PantsGeometry::new(1.5, 1e-9, 0.0).unwrap();
        assert!(close(
            pants_self_arc(&near, 0, 1).unwrap(),
            pants_self_arc(&two, 0, 1).unwrap(),
            1e-7
        ));
    }

    #[test]
    fn seams_decrease_in_adjacent_lengths() {
        let grid = [0.3, 0.8, 1.5, 2.5, 4.0];
        for &l3 in &grid {
            for &l2 in &grid {
                let mut prev = f64::INFINITY;
                for &l1 in &grid {
                    let s = pants_seam(&PantsGeometry::new(l1, l2, l3).unwrap(), 0, 1).unwrap();
                    assert!(s < prev);
                    prev = s;
                }
            }
        }
    }

    #[test]
    fn delta_exact_examples() {
        let x = PantsGeometry::new(1.0, 1.0, 1.0).unwrap();
        let y = PantsGeometry::new(4.0, 4.0, 4.0).unwrap();
        let (delta, dl) = pants_delta_exact(&x, &y).unwrap();
        assert!(close(dl, 4f64.ln(), 1e-12));
        // seam ratio at t = 4 is only 3.468, so the boundary still dominates
        assert!(close(delta, dl, 1e-12));
        let y8 = PantsGeometry::new(8.0, 8.0, 8.0).unwrap();
        let (delta8, dl8) = pants_delta_exact(&x, &y8).unwrap();
        assert!(close(dl8, 8f64.ln(), 1e-12));
        assert!(close(delta8, 10.437137670655076f64.ln(), 1e-9));
        assert_eq!(pants_delta_exact(&x, &x).unwrap(), (0.0, 0.0));
        let c = PantsGeometry::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(pants_delta_exact(&x, &c), Err(TrigError::CuspMismatch));
    }

    #[test]
    fn arcs_skip_cusps() {
        assert_eq!(PantsGeometry::new(1.0, 1.0, 1.0).unwrap().arcs().len(), 6);
        assert_eq!(PantsGeometry::new(1.0, 1.0, 0.0).unwrap().arcs().len(), 3);
        assert_eq!(PantsGeometry::new(1.0, 0.0, 0.0).unwrap().arcs().len(), 1);
    }
}
