//! Fenchel–Nielsen structures, their holonomy, and length functions.
//!
//! A pants with cuffs `α₀, α₁, α₂` is the double of a right-angled hexagon
//! with seams `s₀₁, s₁₂, s₂₀`. The cuff elements are products of reflections
//! in the seams, `x₀ = σ₂₀σ₀₁`, `x₁ = σ₀₁σ₁₂`, `x₂ = σ₁₂σ₂₀`, so `x₀x₁x₂ = 1`
//! and every cuff is oriented with its pants on the left. Cusps are ideal
//! vertices of the hexagon.
//!
//! Gluing: the reference point of a cuff is the foot of the seam running to
//! the lowest-numbered other cuff (`s₀₁` for cuffs 0 and 1, `s₂₀` for 2).
//! At twist zero the reference points of glued cuffs coincide; a twist `τ`
//! shifts the far side by `τ` to the left (a left earthquake).

use num_complex::Complex64;

use crate::hyptrig::{pants_seam, PantsGeometry, TrigError};
use crate::isometry::{ortho_distance, perpendicular_foot, Geodesic, IdealPoint, Isometry, IsometryError, Reflection, TraceKind};
use crate::surface::{
    default_pants_decomposition, enumerate_curves, is_simple, ArcClass, CurveClass,
    DoubledSurface, Hole, PantsDecomposition, Simplicity, Slot, SlotRole, SurfaceError, SurfaceType, Word,
    WordImage,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("word {0} is not hyperbolic")]
    NotHyperbolicClass(String),
    #[error("boundary {0} is a cusp")]
    CuspEndpoint(usize),
    #[error("the boundary lifts of the arc cross")]
    CrossingAxes,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl From<TrigError> for GeometryError {
    fn from(e: TrigError) -> Self {
        GeometryError::NumericalDegeneracy(e.to_string())
    }
}

impl From<IsometryError> for GeometryError {
    fn from(e: IsometryError) -> Self {
        GeometryError::NumericalDegeneracy(e.to_string())
    }
}

/// A marked hyperbolic structure in Fenchel–Nielsen coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct HypStructure {
    pub surface: SurfaceType,
    pub decomposition: PantsDecomposition,
    pub curve_lengths: Vec<f64>,
    pub twists: Vec<f64>,
    pub boundary_lengths: Vec<f64>,
    /// Set on doubles: the holonomy is then built by reflection in `∂S`.
    pub doubled_from: Option<Box<HypStructure>>,
}

impl HypStructure {
    pub fn new(
        st: SurfaceType,
        curve_lengths: Vec<f64>,
        twists: Vec<f64>,
        boundary_lengths: Vec<f64>,
    ) -> Result<Self, GeometryError> {
        let pd = default_pants_decomposition(st)?;
        Self::with_decomposition(pd, curve_lengths, twists, boundary_lengths)
    }

    pub fn with_decomposition(
        decomposition: PantsDecomposition,
        curve_lengths: Vec<f64>,
        twists: Vec<f64>,
        boundary_lengths: Vec<f64>,
    ) -> Result<Self, GeometryError> {
        let x = HypStructure {
            surface: decomposition.surface_type(),
            decomposition,
            curve_lengths,
            twists,
            boundary_lengths,
            doubled_from: None,
        };
        x.validate()?;
        Ok(x)
    }

    pub fn pants(l1: f64, l2: f64, l3: f64) -> Result<Self, GeometryError> {
        Self::new(SurfaceType::PANTS, vec![], vec![], vec![l1, l2, l3])
    }

    /// One-holed torus with pants curve length `ell`, twist `tau`, boundary `boundary`.
    pub fn one_holed_torus(ell: f64, tau: f64, boundary: f64) -> Result<Self, GeometryError> {
        Self::new(SurfaceType::ONE_HOLED_TORUS, vec![ell], vec![tau], vec![boundary])
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let st = self.surface;
        let pd = &self.decomposition;
        let bad = |m: String| Err(GeometryError::InvalidStructure(m));
        if self.curve_lengths.len() != pd.gluings.len() || self.twists.len() != pd.gluings.len() {
            return bad(format!("expected {} interior curves", pd.gluings.len()));
        }
        if self.boundary_lengths.len() != st.boundary {
            return bad(format!("expected {} boundary lengths", st.boundary));
        }
        for &l in self.curve_lengths.iter().chain(&self.boundary_lengths) {
            if !(l > 0.0 && l.is_finite()) {
                return bad(format!("length {l} must be positive and finite"));
            }
        }
        if self.twists.iter().any(|t| !t.is_finite()) {
            return bad("twists must be finite".into());
        }
        Ok(())
    }

    /// Cuff length of a slot; punctures have length 0.
    pub fn slot_length(&self, s: Slot) -> f64 {
        match self.decomposition.slot_role(s) {
            SlotRole::Glued(e) => self.curve_lengths[e],
            SlotRole::Hole(Hole::Boundary(i)) => self.boundary_lengths[i],
            SlotRole::Hole(Hole::Puncture(_)) => 0.0,
        }
    }
}

/// One pants in standard position.
#[derive(Clone, Debug)]
pub struct PantsFrame {
    pub elements: [Isometry; 3],
    /// Oriented cuff axes; `None` for cusps.
    pub axes: [Option<Geodesic>; 3],
    /// Reference point on each cuff.
    pub feet: [Option<Complex64>; 3],
}

/// Intersection point of two perpendicular geodesics.
fn crossing_point(g: &Geodesic, h: &Geodesic) -> Result<Complex64, GeometryError> {
    let f = Isometry::frame(g);
    let inv = f.inverse();
    match (inv.apply_ideal(&h.start).value(), inv.apply_ideal(&h.end).value()) {
        (Some(u), Some(v)) if u * v < 0.0 => Ok(f.apply(Complex64::new(0.0, (-u * v).sqrt()))),
        _ => Err(GeometryError::NumericalDegeneracy("seam misses cuff".into())),
    }
}

enum Cuff {
    Line(Geodesic),
    Ideal(f64),
}

fn reflect_ideal(g: &Geodesic, p: f64) -> Result<IdealPoint, GeometryError> {
    let r = Reflection::across(g);
    // a reflection is determined by its action on the real line
    let z = r.apply(Complex64::new(p, 0.0));
    if z.re.is_finite() && z.re.abs() < 1e15 {
        Ok(IdealPoint::finite(z.re))
    } else {
        Ok(IdealPoint::INFINITY)
    }
}

/// Builds the pants with cuff lengths `lengths` (zero for cusps).
pub fn pants_frame(lengths: [f64; 3]) -> Result<PantsFrame, GeometryError> {
    let geom = PantsGeometry::new(lengths[0], lengths[1], lengths[2])?;
    let r = (0..3)
        .find(|&i| lengths[i] > 0.0)
        .ok_or_else(|| GeometryError::NumericalDegeneracy("thrice-punctured sphere".into()))?;
    // role k is played by actual cuff (r + k) % 3
    let act = |k: usize| (r + k) % 3;
    let h0 = lengths[act(0)] / 2.0;
    let a0 = Geodesic::new(IdealPoint::finite(0.0), IdealPoint::INFINITY)?;
    let s01 = Geodesic::between(1.0, -1.0)?;
    let s20 = Geodesic::between(h0.exp(), -h0.exp())?;
    let cuff_at = |seam: &Geodesic, far: f64, role: usize| -> Result<Cuff, GeometryError> {
        if geom.is_cusp(act(role)) {
            return Ok(Cuff::Ideal(far));
        }
        let d = pants_seam(&geom, act(0), act(role))?;
        Ok(Cuff::Line(Isometry::translation_along(seam, d).apply_geodesic(&a0)))
    };
    let c1 = cuff_at(&s01, -1.0, 1)?;
    let c2 = cuff_at(&s20, -h0.exp(), 2)?;
    let s12 = match (&c1, &c2) {
        (Cuff::Line(g1), Cuff::Line(g2)) => Reflection::across(g1).compose(&Reflection::across(g2)).axis()?,
        (Cuff::Ideal(p), Cuff::Line(g)) => Geodesic::new(IdealPoint::finite(*p), reflect_ideal(g, *p)?)?,
        (Cuff::Line(g), Cuff::Ideal(p)) => Geodesic::new(reflect_ideal(g, *p)?, IdealPoint::finite(*p))?,
        (Cuff::Ideal(p), Cuff::Ideal(q)) => Geodesic::between(*p, *q)?,
    };
    let (r01, r12, r20) = (Reflection::across(&s01), Reflection::across(&s12), Reflection::across(&s20));
    let x = [r20.compose(&r01), r01.compose(&r12), r12.compose(&r20)];
    let mut elements = [Isometry::IDENTITY; 3];
    let mut axes = [None; 3];
    let mut feet = [None; 3];
    // seam between roles k and k+1
    let seams = [&s01, &s12, &s20];
    for k in 0..3 {
        let i = act(k);
        elements[i] = x[k];
        if !geom.is_cusp(i) {
            let axis = x[k].axis()?;
            let partner = if i == 0 { 1 } else { 0 };
            let seam = if act((k + 1) % 3) == partner { seams[k] } else { seams[(k + 2) % 3] };
            feet[i] = Some(crossing_point(&axis, seam)?);
            axes[i] = Some(axis);
        }
    }
    Ok(PantsFrame { elements, axes, feet })
}

/// Images of the free generators, with the convention that a word acts by
/// left-to-right matrix product.
#[derive(Clone, Debug)]
pub struct Holonomy {
    images: Vec<Isometry>,
    inverses: Vec<Isometry>,
    pub basepoint: String,
}

impl Holonomy {
    pub fn from_images(images: Vec<Isometry>, basepoint: impl Into<String>) -> Self {
        let inverses = images.iter().map(|m| m.inverse()).collect();
        Holonomy { images, inverses, basepoint: basepoint.into() }
    }

    pub fn generator_images(&self) -> &[Isometry] {
        &self.images
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn word_image(&self, w: &Word) -> Isometry {
        let m = Isometry::product(w.letters().iter().map(|l| {
            let g = l.generator as usize;
            if l.inverse {
                &self.inverses[g]
            } else {
                &self.images[g]
            }
        }));
        m.normalized()
    }

    /// Conjugates so that `i` minimizes `Σ cosh d(p, g·p)` over the
    /// generators, i.e. the sum of squared matrix norms. Smaller entries mean
    /// less cancellation in long products. The objective is convex, so a
    /// pattern search in `(x, log y)` suffices.
    pub fn balanced(&self) -> Self {
        let conj = |x: f64, t: f64| {
            let sy = (t / 2.0).exp();
            // z ↦ (z − x)/y
            Isometry { a: 1.0 / sy, b: -x / sy, c: 0.0, d: sy }
        };
        let cost = |x: f64, t: f64| -> f64 {
            let m = conj(x, t);
            self.images
                .iter()
                .map(|g| {
                    let h = g.conjugate_by(&m);
                    h.a * h.a + h.b * h.b + h.c * h.c + h.d * h.d
                })
                .sum()
        };
        let (mut x, mut t) = (0.0, 0.0);
        let mut best = cost(x, t);
        let mut step = 1.0;
        while step > 1e-4 {
            let mut moved = false;
            for (dx, dt) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let c = cost(x + dx * (t / 2.0).exp(), t + dt);
                if c < best {
                    best = c;
                    x += dx * (t / 2.0).exp();
                    t += dt;
                    moved = true;
                    break;
                }
            }
            if !moved {
                step /= 2.0;
            }
        }
        let m = conj(x, t);
        Holonomy::from_images(
            self.images.iter().map(|g| g.conjugate_by(&m).normalized()).collect(),
            format!("{}, balanced", self.basepoint),
        )
    }

    /// Same representation conjugated by `m` (a change of marking basepoint).
    pub fn conjugated(&self, m: &Isometry) -> Self {
        Holonomy::from_images(self.images.iter().map(|g| g.conjugate_by(m)).collect(), self.basepoint.clone())
    }
}

impl WordImage for Holonomy {
    fn image(&self, w: &Word) -> Isometry {
        self.word_image(w)
    }
}

/// Holonomy of `X`: generic gluing, or reflection in `∂S` for doubles.
pub fn build_holonomy(x: &HypStructure) -> Result<Holonomy, GeometryError> {
    x.validate()?;
    match &x.doubled_from {
        Some(base) => double_holonomy(base),
        None => glued_holonomy(x),
    }
}

fn glued_holonomy(x: &HypStructure) -> Result<Holonomy, GeometryError> {
    let pd = &x.decomposition;
    let pres = pd.presentation();
    let frames = (0..pd.pants)
        .map(|k| pants_frame([0, 1, 2].map(|i| x.slot_length(Slot::new(k, i)))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut place: Vec<Option<Isometry>> = vec![None; pd.pants];
    place[pd.center()] = Some(Isometry::IDENTITY);
    // oriented axis and reference point of a slot in its placed pants
    let placed = |place: &[Option<Isometry>], s: Slot| -> Result<(Geodesic, Complex64), GeometryError> {
        let g = place[s.pants].expect("pants placed");
        let f = &frames[s.pants];
        match (f.axes[s.index], f.feet[s.index]) {
            (Some(a), Some(p)) => Ok((g.apply_geodesic(&a), g.apply(p))),
            _ => Err(GeometryError::NumericalDegeneracy("glued cuff is a cusp".into())),
        }
    };
    // takes the cuff (axis, foot) onto the reverse of (to_axis, to_foot), then twists
    let glue = |axis: &Geodesic, foot: Complex64, to_axis: &Geodesic, to_foot: Complex64, twist: f64| {
        Isometry::translation_along(to_axis, twist) * Isometry::align(axis, foot, &to_axis.reversed(), to_foot)
    };
    let (tree, _) = pd.spanning_tree();
    for &(e, parent, child) in &tree {
        let (axis, foot) = placed(&place, parent)?;
        let f = &frames[child.pants];
        let (ca, cf) = (f.axes[child.index].unwrap(), f.feet[child.index].unwrap());
        place[child.pants] = Some(glue(&ca, cf, &axis, foot, x.twists[e]));
    }
    // hyperbolic cuffs are rebuilt from their placed axes, which keeps the
    // matrices accurate relative to their own size
    let slot_image = |s: Slot| -> Result<Isometry, GeometryError> {
        let l = x.slot_length(s);
        if l > 0.0 {
            let (axis, _) = placed(&place, s)?;
            Ok(Isometry::translation_along(&axis, l))
        } else {
            Ok(frames[s.pants].elements[s.index].conjugate_by(&place[s.pants].unwrap()))
        }
    };
    let mut raw = Vec::with_capacity(pres.raw_count);
    for k in 0..pd.pants {
        raw.push(slot_image(Slot::new(k, 0))?);
        raw.push(slot_image(Slot::new(k, 1))?);
    }
    for &e in &pres.stable_gluings {
        let (s, t) = pd.gluings[e];
        let (axis, foot) = placed(&place, s)?;
        let (ta, tf) = placed(&place, t)?;
        raw.push(glue(&ta, tf, &axis, foot, x.twists[e]));
    }
    let images: Vec<Isometry> = pres.basis.iter().map(|&g| raw[g].normalized()).collect();
    Ok(Holonomy::from_images(images, "central pants").balanced())
}

fn double_holonomy(base: &HypStructure) -> Result<Holonomy, GeometryError> {
    let h = glued_holonomy(base)?;
    let pres = base.decomposition.presentation();
    let axes = (0..base.surface.boundary)
        .map(|i| {
            let w = pres.hole_word(&base.decomposition, Hole::Boundary(i)).unwrap();
            h.word_image(&w).axis().map_err(GeometryError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let r = Reflection::across(&axes[0]);
    let mut images: Vec<Isometry> = h.generator_images().to_vec();
    images.extend(h.generator_images().iter().map(|g| r.conjugate(g)));
    images.extend(axes[1..].iter().map(|a| Reflection::across(a).compose(&r)));
    Ok(Holonomy::from_images(images, "base surface with mirror across boundary 0").balanced())
}

/// FN data of the double: interior data, its mirror (twists negate), then the
/// former boundary curves with twist zero.
pub fn double_structure(x: &HypStructure, dc: &DoubledSurface) -> Result<HypStructure, GeometryError> {
    x.validate()?;
    if dc.base != x.surface || dc.base_decomposition != x.decomposition {
        return Err(GeometryError::InvalidStructure("double built from another decomposition".into()));
    }
    let mut curve_lengths = x.curve_lengths.clone();
    curve_lengths.extend_from_slice(&x.curve_lengths);
    let mut twists = x.twists.clone();
    twists.extend(x.twists.iter().map(|t| -t));
    for &(_, h) in &x.decomposition.holes {
        if let Hole::Boundary(i) = h {
            curve_lengths.push(x.boundary_lengths[i]);
            twists.push(0.0);
        }
    }
    let d = HypStructure {
        surface: dc.double_type,
        decomposition: dc.pants_double.clone(),
        curve_lengths,
        twists,
        boundary_lengths: vec![],
        doubled_from: Some(Box::new(x.clone())),
    };
    d.validate()?;
    Ok(d)
}

/// A structure together with its holonomy and boundary data, for repeated
/// length queries.
#[derive(Clone, Debug)]
pub struct Realization {
    pub structure: HypStructure,
    pub holonomy: Holonomy,
    pub boundary_words: Vec<Word>,
    boundary_axes: Vec<Geodesic>,
}

impl Realization {
    pub fn new(x: &HypStructure) -> Result<Self, GeometryError> {
        let holonomy = build_holonomy(x)?;
        let boundary_words = if x.doubled_from.is_some() {
            vec![]
        } else {
            let pres = x.decomposition.presentation();
            (0..x.surface.boundary)
                .map(|i| pres.hole_word(&x.decomposition, Hole::Boundary(i)).unwrap())
                .collect()
        };
        let boundary_axes = boundary_words
            .iter()
            .map(|w| holonomy.word_image(w).axis().map_err(GeometryError::from))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Realization { structure: x.clone(), holonomy, boundary_words, boundary_axes })
    }

    pub fn word_length(&self, w: &Word) -> Result<f64, GeometryError> {
        let m = self.holonomy.word_image(w);
        match m.classify() {
            Ok(c) if c.kind == TraceKind::Hyperbolic => Ok(c.translation_length),
            _ => Err(GeometryError::NotHyperbolicClass(w.to_string())),
        }
    }

    pub fn curve_length(&self, c: &CurveClass) -> Result<f64, GeometryError> {
        self.word_length(&c.word)
    }

    pub fn arc_length(&self, a: &ArcClass) -> Result<f64, GeometryError> {
        for i in [a.start, a.end] {
            if i >= self.boundary_axes.len() {
                return Err(GeometryError::CuspEndpoint(i));
            }
        }
        let lift = self.holonomy.word_image(&a.connector).apply_geodesic(&self.boundary_axes[a.end]);
        ortho_distance(&self.boundary_axes[a.start], &lift).map_err(|_| GeometryError::CrossingAxes)
    }

    /// Foot on the start boundary of the arc's lift; used to compare arcs.
    pub fn arc_foot(&self, a: &ArcClass) -> Result<Complex64, GeometryError> {
        let lift = self.holonomy.word_image(&a.connector).apply_geodesic(&self.boundary_axes[a.end]);
        perpendicular_foot(&self.boundary_axes[a.start], &lift).map_err(|_| GeometryError::CrossingAxes)
    }

    pub fn boundary_axis(&self, i: usize) -> Option<&Geodesic> {
        self.boundary_axes.get(i)
    }
}

pub fn curve_length(x: &HypStructure, c: &CurveClass) -> Result<f64, GeometryError> {
    Realization::new(x)?.curve_length(c)
}

pub fn arc_length(x: &HypStructure, a: &ArcClass) -> Result<f64, GeometryError> {
    Realization::new(x)?.arc_length(a)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThickPartSpec {
    pub epsilon: f64,
    pub epsilon0: f64,
}

impl ThickPartSpec {
    pub fn new(epsilon: f64, epsilon0: f64) -> Result<Self, GeometryError> {
        if !(epsilon > 0.0 && epsilon <= epsilon0 && epsilon0.is_finite()) {
            return Err(GeometryError::InvalidStructure(format!(
                "thick part needs 0 < ε ≤ ε₀, got ({epsilon}, {epsilon0})"
            )));
        }
        Ok(ThickPartSpec { epsilon, epsilon0 })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ThickWitness {
    BoundaryTooLong { index: usize, length: f64 },
    BoundaryTooShort { index: usize, length: f64 },
    ShortCurve { word: Word, length: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ThickMembership {
    Yes,
    No(ThickWitness),
    Unknown(usize),
}

/// Half-width `arcsinh(1/sinh(ℓ/2))` of the standard collar.
pub fn collar_half_width(l: f64) -> f64 {
    (1.0 / (l / 2.0).sinh()).asinh()
}

/// Lower bound on every essential simple closed curve: a curve is either a
/// pants curve or boundary, or it crosses a whole collar of a pants curve.
pub fn systole_lower_bound(x: &HypStructure) -> f64 {
    x.boundary_lengths
        .iter()
        .chain(&x.curve_lengths)
        .copied()
        .chain(x.curve_lengths.iter().map(|&l| 2.0 * collar_half_width(l)))
        .fold(f64::INFINITY, f64::min)
}

pub fn in_thick_part(x: &HypStructure, spec: ThickPartSpec, bound: usize) -> Result<ThickMembership, GeometryError> {
    for (index, &length) in x.boundary_lengths.iter().enumerate() {
        if length > spec.epsilon0 {
            return Ok(ThickMembership::No(ThickWitness::BoundaryTooLong { index, length }));
        }
        if length < spec.epsilon {
            return Ok(ThickMembership::No(ThickWitness::BoundaryTooShort { index, length }));
        }
    }
    if x.doubled_from.is_none() && x.surface.family().is_some() {
        let real = Realization::new(x)?;
        for c in enumerate_curves(x.surface, bound)? {
            let length = real.curve_length(&c)?;
            if length < spec.epsilon && is_simple(x.surface, &c.word, &real.holonomy)? != Simplicity::NonSimple {
                return Ok(ThickMembership::No(ThickWitness::ShortCurve { word: c.word, length }));
            }
        }
    }
    for (e, &l) in x.curve_lengths.iter().enumerate() {
        if l < spec.epsilon {
            let word = x.decomposition.presentation().interior_word(&x.decomposition, e);
            return Ok(ThickMembership::No(ThickWitness::ShortCurve { word, length: l }));
        }
    }
    if systole_lower_bound(x) >= spec.epsilon {
        Ok(ThickMembership::Yes)
    } else {
        Ok(ThickMembership::Unknown(bound))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyptrig::pants_self_arc;
    use crate::surface::{double, enumerate_arcs, slope_word, Word};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    /// Whether `z` lies to the left of the oriented geodesic `g`.
    fn left_of(g: &Geodesic, z: Complex64) -> bool {
        Isometry::frame(g).inverse().apply(z).re < 0.0
    }

    #[test]
    fn pants_frame_lengths_and_orientation() {
        for lengths in [[2.0, 2.0, 2.0], [0.3, 1.7, 4.0], [5.0, 0.0, 1.0], [1.0, 2.0, 0.0], [0.0, 0.0, 1.5]] {
            let f = pants_frame(lengths).unwrap();
            let prod = f.elements[0] * f.elements[1] * f.elements[2];
            assert!(prod.approx_eq(&Isometry::IDENTITY, 1e-9), "{lengths:?}");
            for i in 0..3 {
                let c = f.elements[i].classify().unwrap();
                if lengths[i] == 0.0 {
                    assert_eq!(c.kind, TraceKind::Parabolic, "{lengths:?}");
                    continue;
                }
                assert!((c.translation_length - lengths[i]).abs() < 1e-9, "{lengths:?}");
                let axis = f.axes[i].unwrap();
                for j in (0..3).filter(|&j| j != i) {
                    // the other cuffs sit on the pants side
                    let probe = match f.axes[j] {
                        Some(a) => a.point_at(0.0),
                        None => f.elements[j].apply(Complex64::new(0.0, 1.0)) * 0.0 + axis_probe(&f, i),
                    };
                    assert!(left_of(&axis, probe), "{lengths:?} cuff {j} not left of {i}");
                }
                let foot = f.feet[i].unwrap();
                let back = Isometry::frame(&axis).inverse().apply(foot);
                assert!(back.re.abs() < 1e-9);
            }
        }
    }

    // a point inside the pants near cuff i: the foot pushed off along the seam
    fn axis_probe(f: &PantsFrame, i: usize) -> Complex64 {
        let axis = f.axes[i].unwrap();
        let foot = Isometry::frame(&axis).inverse().apply(f.feet[i].unwrap());
        Isometry::frame(&axis).apply(Complex64::new(-0.1 * foot.im, foot.im))
    }

    #[test]
    fn pants_arcs_match_closed_forms() {
        let x = HypStructure::pants(2.0, 2.0, 2.0).unwrap();
        let r = Realization::new(&x).unwrap();
        for a in enumerate_arcs(SurfaceType::PANTS, 2).unwrap() {
            let l = r.arc_length(&a).unwrap();
            let expected = if a.start == a.end { 3.612225999682252 } else { 1.7049128323580138 };
            assert!((l - expected).abs() < 1e-9, "{a:?}: {l}");
        }
        let x = HypStructure::pants(0.7, 1.9, 3.3).unwrap();
        let r = Realization::new(&x).unwrap();
        let g = PantsGeometry::new(0.7, 1.9, 3.3).unwrap();
        for a in enumerate_arcs(SurfaceType::PANTS, 2).unwrap() {
            let l = r.arc_length(&a).unwrap();
            let expected = if a.start == a.end {
                pants_self_arc(&g, a.start, (a.start + 1) % 3).unwrap()
            } else {
                pants_seam(&g, a.start, a.end).unwrap()
            };
            assert!((l - expected).abs() < 1e-9, "{a:?}: {l} vs {expected}");
        }
    }

    #[test]
    fn arc_length_is_coset_invariant() {
        let x = HypStructure::one_holed_torus(1.3, 0.4, 2.1).unwrap();
        let r = Realization::new(&x).unwrap();
        let g = r.boundary_words[0].clone();
        for a in enumerate_arcs(SurfaceType::ONE_HOLED_TORUS, 3).unwrap() {
            let moved = ArcClass { connector: g.concat(&a.connector).concat(&g.inverse()), ..a.clone() };
            let (l1, l2) = (r.arc_length(&a).unwrap(), r.arc_length(&moved).unwrap());
            assert!((l1 - l2).abs() < 1e-9);
        }
    }

    #[test]
    fn boundary_calibration() {
        let cases = [
            HypStructure::pants(0.5, 1.0, 6.0).unwrap(),
            HypStructure::one_holed_torus(1.1, -0.7, 2.5).unwrap(),
            HypStructure::new(SurfaceType::FOUR_HOLED_SPHERE, vec![1.2], vec![0.3], vec![1.0, 2.0, 0.5, 1.5]).unwrap(),
            HypStructure::new(SurfaceType::TWO_HOLED_TORUS, vec![1.0, 0.8], vec![0.2, -1.1], vec![1.3, 0.4]).unwrap(),
            HypStructure::new(SurfaceType::new(2, 1, 2), vec![1.0, 0.9, 1.1, 1.2, 1.3, 0.7], vec![0.1, 0.2, 0.3, -0.4, 0.5, 0.0], vec![2.0, 1.0]).unwrap(),
        ];
        for x in &cases {
            let r = Realization::new(x).unwrap();
            for (i, bw) in r.boundary_words.iter().enumerate() {
                let l = r.word_length(bw).unwrap();
                assert!((l - x.boundary_lengths[i]).abs() < 1e-7, "{}", x.surface);
            }
            let pres = x.decomposition.presentation();
            for (e, &l) in x.curve_lengths.iter().enumerate() {
                let got = r.word_length(&pres.interior_word(&x.decomposition, e)).unwrap();
                assert!((got - l).abs() < 1e-7, "{} curve {e}: {got}", x.surface);
            }
        }
    }

    #[test]
    fn punctures_are_parabolic() {
        let cases = [
            HypStructure::new(SurfaceType::new(0, 1, 2), vec![], vec![], vec![1.0, 2.0]).unwrap(),
            HypStructure::new(SurfaceType::new(0, 2, 1), vec![], vec![], vec![1.5]).unwrap(),
            HypStructure::new(SurfaceType::new(1, 1, 1), vec![1.0, 1.5], vec![0.3, -0.2], vec![2.0]).unwrap(),
            HypStructure::new(SurfaceType::new(0, 2, 2), vec![1.0], vec![0.5], vec![1.0, 2.0]).unwrap(),
        ];
        for x in &cases {
            let r = Realization::new(x).unwrap();
            let pres = x.decomposition.presentation();
            for p in 0..x.surface.punctures {
                let pw = pres.hole_word(&x.decomposition, Hole::Puncture(p)).unwrap();
                let c = r.holonomy.word_image(&pw).classify().unwrap();
                assert_eq!(c.kind, TraceKind::Parabolic, "{}", x.surface);
            }
            for (i, bw) in r.boundary_words.iter().enumerate() {
                assert!((r.word_length(bw).unwrap() - x.boundary_lengths[i]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn closed_surface_relator() {
        let st = SurfaceType::new(2, 0, 0);
        let x = HypStructure::new(st, vec![1.0, 1.5, 2.0], vec![0.3, -0.2, 0.7], vec![]).unwrap();
        let r = Realization::new(&x).unwrap();
        let pres = x.decomposition.presentation();
        assert_eq!(pres.relators.len(), 1);
        let m = r.holonomy.word_image(&pres.relators[0]);
        assert!(m.approx_eq(&Isometry::IDENTITY, 1e-9));
    }

    #[test]
    fn fricke_identity() {
        for (ell, tau, big_l) in [(1.0, 0.0, 1.0), (2.0, 0.5, 2.0), (0.4, -1.3, 3.0)] {
            let x = HypStructure::one_holed_torus(ell, tau, big_l).unwrap();
            let h = build_holonomy(&x).unwrap();
            let (a, b) = (h.word_image(&w("a")), h.word_image(&w("b")));
            let (ta, tb, tab) = (a.trace(), b.trace(), (a * b).trace());
            let comm = a * b * a.inverse() * b.inverse();
            let fricke = ta * ta + tb * tb + tab * tab - ta * tb * tab - 2.0;
            assert!((comm.trace() - fricke).abs() < 1e-9);
            assert!((comm.trace().abs() - 2.0 * (big_l / 2.0).cosh()).abs() < 1e-9);
        }
    }

    /// A curve crossing `a` once is the seam of the cut pants closed up with
    /// offset `t`; perpendicular axes give `cosh(l/2) = cosh(d/2)·cosh(t/2)`.
    #[test]
    fn crossing_curves_match_trace_oracle() {
        for (ell, tau, big_l) in [(2.0, 0.0, 2.0), (1.0, 0.6, 1.5), (0.5, -0.9, 2.5)] {
            let x = HypStructure::one_holed_torus(ell, tau, big_l).unwrap();
            let r = Realization::new(&x).unwrap();
            let d = pants_seam(&PantsGeometry::new(ell, ell, big_l).unwrap(), 0, 1).unwrap();
            let oracle = |t: f64| 2.0 * ((d / 2.0).cosh() * (t / 2.0).cosh()).acosh();
            let lb = r.word_length(&slope_word(0, 1)).unwrap();
            assert!((lb - oracle(tau)).abs() < 1e-9, "b at {tau}");
            let l11 = r.word_length(&slope_word(1, 1)).unwrap();
            let lm11 = r.word_length(&slope_word(-1, 1)).unwrap();
            // Dehn twists shift the offset by ±ℓ
            let mut got = [l11, lm11];
            let mut want = [oracle(tau + ell), oracle(tau - ell)];
            got.sort_by(f64::total_cmp);
            want.sort_by(f64::total_cmp);
            assert!((got[0] - want[0]).abs() < 1e-9 && (got[1] - want[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn twisting_fixes_the_core_curve() {
        let l0 = Realization::new(&HypStructure::one_holed_torus(1.7, 0.0, 2.0).unwrap()).unwrap();
        let l1 = Realization::new(&HypStructure::one_holed_torus(1.7, 1.7, 2.0).unwrap()).unwrap();
        let a = w("a");
        assert!((l0.word_length(&a).unwrap() - l1.word_length(&a).unwrap()).abs() < 1e-9);
        // a full twist permutes the slopes: the length spectra agree
        let spec = |r: &Realization| {
            let mut v: Vec<f64> = (1..6).map(|q| r.word_length(&slope_word(q - 3, 1)).unwrap()).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let (s0, s1) = (spec(&l0), spec(&l1));
        // slopes k/1 for k in -2..=2 shift to (k+1)/1 under the twist
        assert!((s0[0] - s1[0]).abs() < 1e-9 || (s0[1] - s1[0]).abs() < 1e-9);
    }

    fn r_len(h: &Holonomy, w: &Word) -> f64 {
        h.word_image(w).translation_length()
    }

    #[test]
    fn marking_invariance() {
        use rand::{Rng, SeedableRng};
        let x = HypStructure::new(SurfaceType::TWO_HOLED_TORUS, vec![1.0, 0.8], vec![0.2, -1.1], vec![1.3, 0.4]).unwrap();
        let h = build_holonomy(&x).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            let rot = Isometry::new(theta.cos(), theta.sin(), -theta.sin(), theta.cos()).unwrap();
            let m = rot * Isometry::dilation(rng.gen_range(-0.5..0.5));
            let hc = h.conjugated(&m);
            for word in crate::surface::reduced_words(3, 3) {
                let (a, b) = (r_len(&h, &word), r_len(&hc, &word));
                assert!((a - b).abs() < 1e-9 * a.max(1.0), "{word}: {a} {b}");
            }
        }
    }

    #[test]
    fn doubling_identity() {
        for st in [SurfaceType::PANTS, SurfaceType::ONE_HOLED_TORUS, SurfaceType::FOUR_HOLED_SPHERE] {
            let x = match st.family() {
                Some(crate::surface::Family::Pants) => HypStructure::pants(1.0, 2.0, 3.0).unwrap(),
                Some(crate::surface::Family::OneHoledTorus) => HypStructure::one_holed_torus(1.2, 0.5, 1.7).unwrap(),
                _ => HypStructure::new(st, vec![1.2], vec![0.3], vec![1.0, 2.0, 0.5, 1.5]).unwrap(),
            };
            let dc = double(st, &x.decomposition).unwrap();
            let xd = double_structure(&x, &dc).unwrap();
            let (r, rd) = (Realization::new(&x).unwrap(), Realization::new(&xd).unwrap());
            for a in enumerate_arcs(st, 3).unwrap() {
                let la = r.arc_length(&a).unwrap();
                let ld = rd.word_length(&dc.double_arc_word(&a)).unwrap();
                // long arcs are accurate to relative precision
                assert!((ld - 2.0 * la).abs() < 1e-7 * la.max(1.0), "{st} {a:?}");
                // the involution is an isometry
                let lm = rd.word_length(&dc.mirror_word(&dc.double_arc_word(&a))).unwrap();
                assert!((lm - ld).abs() < 1e-7);
            }
            for c in enumerate_curves(st, 3).unwrap() {
                let l = r.curve_length(&c).unwrap();
                let ld = rd.curve_length(&dc.double_curve(&c)).unwrap();
                let lm = rd.word_length(&dc.mirror_word(&c.word)).unwrap();
                assert!((l - ld).abs() < 1e-9 && (l - lm).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn double_fn_data_is_consistent() {
        // the generic gluing of the double's FN data is closed and calibrated
        let x = HypStructure::one_holed_torus(1.2, 0.5, 1.7).unwrap();
        let dc = double(x.surface, &x.decomposition).unwrap();
        let xd = double_structure(&x, &dc).unwrap();
        assert_eq!(xd.surface, SurfaceType::new(2, 0, 0));
        let plain = HypStructure { doubled_from: None, ..xd.clone() };
        let r = Realization::new(&plain).unwrap();
        let pres = plain.decomposition.presentation();
        let m = r.holonomy.word_image(&pres.relators[0]);
        assert!(m.approx_eq(&Isometry::IDENTITY, 1e-8));
        for (e, &l) in plain.curve_lengths.iter().enumerate() {
            let got = r.word_length(&pres.interior_word(&plain.decomposition, e)).unwrap();
            assert!((got - l).abs() < 1e-7);
        }
    }

    #[test]
    fn thick_part_examples() {
        let spec = ThickPartSpec::new(0.5, 2.0).unwrap();
        let x = HypStructure::pants(1.0, 1.0, 1.0).unwrap();
        assert_eq!(in_thick_part(&x, spec, 4).unwrap(), ThickMembership::Yes);
        let x = HypStructure::pants(1.0, 1.0, 3.0).unwrap();
        assert!(matches!(
            in_thick_part(&x, spec, 4).unwrap(),
            ThickMembership::No(ThickWitness::BoundaryTooLong { index: 2, .. })
        ));
        let x = HypStructure::one_holed_torus(0.1, 0.0, 1.0).unwrap();
        match in_thick_part(&x, spec, 4).unwrap() {
            ThickMembership::No(ThickWitness::ShortCurve { word, length }) => {
                assert_eq!(word, w("a"));
                assert!((length - 0.1).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
        assert!(ThickPartSpec::new(1.0, 0.5).is_err());
    }

    #[test]
    fn collar_bound_is_below_enumerated_systole() {
        for (ell, tau, big_l) in [(1.0, 0.0, 1.0), (3.0, 1.0, 2.0), (0.6, 0.3, 0.6)] {
            let x = HypStructure::one_holed_torus(ell, tau, big_l).unwrap();
            let r = Realization::new(&x).unwrap();
            let sys = enumerate_curves(x.surface, 8)
                .unwrap()
                .iter()
                .map(|c| r.curve_length(c).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!(systole_lower_bound(&x) <= sys + 1e-12);
        }
    }
}
