//! Length-spectrum metrics as enumeration-bounded estimators.
//!
//! Every estimate is a lower bound for a supremum over an infinite family,
//! computed over the classes of size at most `bound`. `slack` is the change
//! between `bound/2` and `bound`: an empirical convergence diagnostic, not an
//! error bound.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::geometry::{
    double_structure, in_thick_part, GeometryError, HypStructure, Realization, ThickMembership, ThickPartSpec,
    ThickWitness,
};
use crate::hyptrig::{pants_self_arc, PantsGeometry};
use crate::isometry::Isometry;
use crate::surface::{
    double, enumerate_arcs, enumerate_curves, ArcClass, CurveClass, CurveTag, Family, Hole, SurfaceError, SurfaceType, Word,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("structures live on different surfaces or decompositions ({0} vs {1})")]
    SurfaceMismatch(SurfaceType, SurfaceType),
    #[error("simplicity of closed curves on {0} cannot be certified")]
    UncertifiedFamily(SurfaceType),
    #[error("the surface is a pair of pants")]
    IsPants,
    #[error("both neighborhood curves of the arc are peripheral")]
    BothPeripheral,
    #[error("sample {index} is not in the thick part: {witness:?}")]
    NotInThickPart { index: usize, witness: Option<ThickWitness> },
    #[error("bound must be at least 1")]
    InvalidBound,
}

/// Which classes a supremum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassFamily {
    /// Essential simple closed curves `C`.
    Curves,
    /// Essential arcs `B`.
    Arcs,
    /// `B ∪ C`.
    All,
}

impl fmt::Display for ClassFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassFamily::Curves => "C",
            ClassFamily::Arcs => "B",
            ClassFamily::All => "B∪C",
        })
    }
}

/// A curve or arc class achieving an estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Curve(CurveClass),
    Arc(ArcClass),
    /// A closed word on the double, in conjugacy-canonical form.
    Word(Word),
}

impl Witness {
    fn key(&self) -> (u8, usize, usize, &Word) {
        match self {
            Witness::Curve(c) => (0, 0, 0, &c.word),
            Witness::Arc(a) => (1, a.start, a.end, &a.connector),
            Witness::Word(w) => (2, 0, 0, w),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Curve(CurveClass { tag: CurveTag::Boundary(i), word }) => write!(f, "boundary {} {word}", i + 1),
            Witness::Curve(c) => write!(f, "curve {}", c.word),
            Witness::Arc(a) => write!(f, "arc {}-{} {}", a.start + 1, a.end + 1, a.connector),
            Witness::Word(w) => write!(f, "word {w}"),
        }
    }
}

/// B-only versus B∪C comparison attached to `d` and `d̄`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcsOnlyCheck {
    pub arcs_only: f64,
    pub all: f64,
    pub slack: f64,
}

impl ArcsOnlyCheck {
    pub fn holds(&self) -> bool {
        (self.arcs_only - self.all).abs() <= self.slack + 1e-12
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricEstimate {
    pub value: f64,
    pub bound: usize,
    pub witness: Option<Witness>,
    pub family: ClassFamily,
    /// The family is finite and fully enumerated.
    pub exact: bool,
    /// `|value(bound) − value(bound/2)|`.
    pub slack: f64,
    pub arcs_only: Option<ArcsOnlyCheck>,
}

/// The classes of a surface up to a bound, with their sizes.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub surface: SurfaceType,
    pub bound: usize,
    pub curves: Vec<CurveClass>,
    pub arcs: Vec<ArcClass>,
    curve_size: Vec<usize>,
    /// Whether the curve list is certified to be exactly the simple classes.
    pub certified: bool,
}

/// Lengths of every class of a [`Spectrum`] on one structure.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumLengths {
    pub curves: Vec<f64>,
    pub arcs: Vec<f64>,
}

impl Spectrum {
    pub fn new(st: SurfaceType, bound: usize) -> Result<Self, SpectrumError> {
        if bound == 0 {
            return Err(SpectrumError::InvalidBound);
        }
        let curves = enumerate_curves(st, bound)?;
        let arcs = if st.boundary > 0 { enumerate_arcs(st, bound)? } else { vec![] };
        let curve_size = curves.iter().map(|c| if c.is_boundary() { 0 } else { c.word.len() }).collect();
        let certified = matches!(st.family(), Some(Family::Pants | Family::OneHoledTorus));
        Ok(Spectrum { surface: st, bound, curves, arcs, curve_size, certified })
    }

    /// Pants have finitely many simple classes, all enumerated.
    pub fn is_exact(&self) -> bool {
        self.surface.family() == Some(Family::Pants)
    }

    pub fn lengths(&self, real: &Realization) -> Result<SpectrumLengths, SpectrumError> {
        let curves = self.curves.iter().map(|c| real.curve_length(c)).collect::<Result<Vec<_>, _>>()?;
        let arcs = self.arcs.iter().map(|a| real.arc_length(a)).collect::<Result<Vec<_>, _>>()?;
        Ok(SpectrumLengths { curves, arcs })
    }

    pub fn lengths_of(&self, x: &HypStructure) -> Result<SpectrumLengths, SpectrumError> {
        if x.surface != self.surface {
            return Err(SpectrumError::SurfaceMismatch(x.surface, self.surface));
        }
        self.lengths(&Realization::new(x)?)
    }

    /// `sup l_Y/l_X` over classes of size at most `limit`, with the least
    /// witness among maximizers.
    pub fn ratio_sup(
        &self,
        lx: &SpectrumLengths,
        ly: &SpectrumLengths,
        family: ClassFamily,
        limit: usize,
    ) -> (f64, Option<Witness>) {
        let mut best: Option<(f64, Witness)> = None;
        let mut consider = |r: f64, w: &dyn Fn() -> Witness| {
            let better = match &best {
                None => true,
                Some((v, bw)) => match r.partial_cmp(v) {
                    Some(Ordering::Greater) => true,
                    Some(Ordering::Equal) => w().key() < bw.key(),
                    _ => false,
                },
            };
            if better {
                best = Some((r, w()));
            }
        };
        if family != ClassFamily::Arcs {
            for (k, c) in self.curves.iter().enumerate() {
                if self.curve_size[k] <= limit {
                    consider(ly.curves[k] / lx.curves[k], &|| Witness::Curve(c.clone()));
                }
            }
        }
        if family != ClassFamily::Curves {
            for (k, a) in self.arcs.iter().enumerate() {
                if a.connector.len() <= limit {
                    consider(ly.arcs[k] / lx.arcs[k], &|| Witness::Arc(a.clone()));
                }
            }
        }
        match best {
            Some((v, w)) => (v, Some(w)),
            None => (f64::NAN, None),
        }
    }

    /// Log-ratio estimate at `self.bound`, with slack against `bound/2`.
    pub fn log_ratio(&self, lx: &SpectrumLengths, ly: &SpectrumLengths, family: ClassFamily) -> MetricEstimate {
        let (v, witness) = self.ratio_sup(lx, ly, family, self.bound);
        let (half, _) = self.ratio_sup(lx, ly, family, (self.bound / 2).max(1));
        MetricEstimate {
            value: v.ln(),
            bound: self.bound,
            witness,
            family,
            exact: self.is_exact(),
            slack: (v.ln() - half.ln()).abs(),
            arcs_only: None,
        }
    }

    /// `d(X,Y) = log sup l_Y/l_X` over `B ∪ C`, with the B-only comparison.
    pub fn d_weak(&self, lx: &SpectrumLengths, ly: &SpectrumLengths) -> MetricEstimate {
        let mut e = self.log_ratio(lx, ly, ClassFamily::All);
        if !self.arcs.is_empty() {
            let b = self.log_ratio(lx, ly, ClassFamily::Arcs);
            e.arcs_only = Some(ArcsOnlyCheck { arcs_only: b.value, all: e.value, slack: e.slack.max(b.slack) });
        }
        e
    }

    pub fn d_l(&self, lx: &SpectrumLengths, ly: &SpectrumLengths) -> Result<MetricEstimate, SpectrumError> {
        if !self.certified {
            return Err(SpectrumError::UncertifiedFamily(self.surface));
        }
        Ok(symmetric_max(self.log_ratio(lx, ly, ClassFamily::Curves), self.log_ratio(ly, lx, ClassFamily::Curves)))
    }

    pub fn delta_l(&self, lx: &SpectrumLengths, ly: &SpectrumLengths) -> MetricEstimate {
        symmetric_max(self.log_ratio(lx, ly, ClassFamily::All), self.log_ratio(ly, lx, ClassFamily::All))
    }

    /// `K(X,Y) = sup l_X/l_Y` over `C`, as a ratio.
    pub fn k_ratio(&self, lx: &SpectrumLengths, ly: &SpectrumLengths) -> Result<MetricEstimate, SpectrumError> {
        if !self.certified {
            return Err(SpectrumError::UncertifiedFamily(self.surface));
        }
        let mut e = self.log_ratio(ly, lx, ClassFamily::Curves);
        e.value = e.value.exp();
        let (half, _) = self.ratio_sup(ly, lx, ClassFamily::Curves, (self.bound / 2).max(1));
        e.slack = (e.value - half).abs();
        Ok(e)
    }
}

fn symmetric_max(a: MetricEstimate, b: MetricEstimate) -> MetricEstimate {
    let slack = a.slack.max(b.slack);
    let mut m = if b.value > a.value { b } else { a };
    m.slack = slack;
    m
}

fn prepare(x: &HypStructure, y: &HypStructure, bound: usize) -> Result<(Spectrum, SpectrumLengths, SpectrumLengths), SpectrumError> {
    if x.surface != y.surface || x.decomposition != y.decomposition {
        return Err(SpectrumError::SurfaceMismatch(x.surface, y.surface));
    }
    let s = Spectrum::new(x.surface, bound)?;
    let lx = s.lengths_of(x)?;
    let ly = s.lengths_of(y)?;
    Ok((s, lx, ly))
}

/// `sup l_Y/l_X` over `family` (not logged).
pub fn ratio_sup(x: &HypStructure, y: &HypStructure, family: ClassFamily, bound: usize) -> Result<MetricEstimate, SpectrumError> {
    let (s, lx, ly) = prepare(x, y, bound)?;
    let (v, witness) = s.ratio_sup(&lx, &ly, family, bound);
    let (half, _) = s.ratio_sup(&lx, &ly, family, (bound / 2).max(1));
    Ok(MetricEstimate { value: v, bound, witness, family, exact: s.is_exact(), slack: (v - half).abs(), arcs_only: None })
}

pub fn d_weak(x: &HypStructure, y: &HypStructure, bound: usize) -> Result<MetricEstimate, SpectrumError> {
    let (s, lx, ly) = prepare(x, y, bound)?;
    Ok(s.d_weak(&lx, &ly))
}

/// `d̄(X,Y) = d(Y,X)`.
pub fn d_bar(x: &HypStructure, y: &HypStructure, bound: usize) -> Result<MetricEstimate, SpectrumError> {
    d_weak(y, x, bound)
}

pub fn d_l(x: &HypStructure, y: &HypStructure, bound: usize) -> Result<MetricEstimate, SpectrumError> {
    let (s, lx, ly) = prepare(x, y, bound)?;
    s.d_l(&lx, &ly)
}

pub fn delta_l(x: &HypStructure, y: &HypStructure, bound: usize) -> Result<MetricEstimate, SpectrumError> {
    let (s, lx, ly) = prepare(x, y, bound)?;
    Ok(s.delta_l(&lx, &ly))
}

pub fn k_ratio(x: &HypStructure, y: &HypStructure, bound: usize) -> Result<MetricEstimate, SpectrumError> {
    let (s, lx, ly) = prepare(x, y, bound)?;
    s.k_ratio(&lx, &ly)
}

/// Running maximum of `l_Y/l_X` over closed words, at two size limits.
#[derive(Clone, Debug)]
struct WordSup {
    best: f64,
    word: Vec<u16>,
    best_half: f64,
}

impl WordSup {
    fn new() -> Self {
        WordSup { best: f64::NEG_INFINITY, word: vec![], best_half: f64::NEG_INFINITY }
    }

    fn merge(mut self, o: WordSup) -> WordSup {
        if beats(o.best, &o.word, self.best, &self.word) {
            self.best = o.best;
            self.word = o.word;
        }
        self.best_half = self.best_half.max(o.best_half);
        self
    }
}

// Ratios within roundoff of each other tie; the shortlex-least word wins,
// so a curve is preferred over its powers.
fn beats(r: f64, word: &[u16], best: f64, best_word: &[u16]) -> bool {
    if best_word.is_empty() || r > best * (1.0 + 1e-12) {
        return true;
    }
    r >= best * (1.0 - 1e-12) && (word.len(), word) < (best_word.len(), best_word)
}

// Traces this close to ±2 come from relators, not from closed geodesics.
const TRIVIAL_TRACE: f64 = 2.0 + 1e-6;

fn letter_of(code: u16) -> crate::surface::Letter {
    crate::surface::Letter::new(code / 2, code % 2 == 1)
}

#[allow(clippy::too_many_arguments)]
fn word_dfs(
    gx: &[Isometry],
    gy: &[Isometry],
    word: &mut Vec<u16>,
    mx: Isometry,
    my: Isometry,
    bound: usize,
    half: usize,
    acc: &mut WordSup,
) {
    let (tx, ty) = (mx.trace().abs(), my.trace().abs());
    let first = word[0];
    let last = *word.last().unwrap();
    // skip words that are not cyclically reduced; a shorter conjugate covers them
    if last != first ^ 1 && tx > TRIVIAL_TRACE && ty > TRIVIAL_TRACE {
        let r = (ty / 2.0).acosh() / (tx / 2.0).acosh();
        if beats(r, word, acc.best, &acc.word) {
            acc.best = r;
            acc.word = word.clone();
        }
        if word.len() <= half && r > acc.best_half {
            acc.best_half = r;
        }
    }
    if word.len() == bound {
        return;
    }
    for code in 0..gx.len() as u16 {
        if code == last ^ 1 {
            continue;
        }
        word.push(code);
        word_dfs(gx, gy, word, mx * gx[code as usize], my * gy[code as usize], bound, half, acc);
        word.pop();
    }
}

/// `d(X^d, Y^d)` on the double, over every reduced closed word of length at
/// most `bound`. No simplicity filter is applied.
pub fn d_weak_on_double(x: &HypStructure, y: &HypStructure, bound: usize) -> Result<MetricEstimate, SpectrumError> {
    if bound == 0 {
        return Err(SpectrumError::InvalidBound);
    }
    if x.surface != y.surface || x.decomposition != y.decomposition {
        return Err(SpectrumError::SurfaceMismatch(x.surface, y.surface));
    }
    let dc = double(x.surface, &x.decomposition)?;
    let images = |s: &HypStructure| -> Result<Vec<Isometry>, SpectrumError> {
        let r = Realization::new(&double_structure(s, &dc)?)?;
        Ok(r.holonomy.generator_images().iter().flat_map(|g| [*g, g.inverse()]).collect())
    };
    let (gx, gy) = (images(x)?, images(y)?);
    let half = (bound / 2).max(1);
    let sup = (0..gx.len() as u16)
        .into_par_iter()
        .map(|code| {
            let mut acc = WordSup::new();
            let mut word = vec![code];
            word_dfs(&gx, &gy, &mut word, gx[code as usize], gy[code as usize], bound, half, &mut acc);
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(WordSup::new(), WordSup::merge);
    let w = crate::surface::Word::new(sup.word.iter().map(|&c| letter_of(c)).collect());
    Ok(MetricEstimate {
        value: sup.best.ln(),
        bound,
        witness: Some(Witness::Word(w.conjugacy_canonical())),
        family: ClassFamily::All,
        exact: false,
        slack: (sup.best.ln() - sup.best_half.ln()).abs(),
        arcs_only: None,
    })
}

/// The closed curves bounding a regular neighborhood of an arc together
/// with the boundary components it meets: one curve for distinct endpoints,
/// two for an arc returning to its own boundary.
pub fn neighborhood_curves(x: &HypStructure, a: &ArcClass) -> Result<Vec<Word>, SpectrumError> {
    if x.surface.pants_count() == 1 && x.surface.interior_curve_count() == 0 {
        return Err(SpectrumError::IsPants);
    }
    let pres = x.decomposition.presentation();
    let gamma = |i: usize| pres.hole_word(&x.decomposition, Hole::Boundary(i)).unwrap();
    let w = &a.connector;
    Ok(if a.start != a.end {
        vec![gamma(a.start).concat(w).concat(&gamma(a.end)).concat(&w.inverse())]
    } else {
        vec![w.clone(), w.inverse().concat(&gamma(a.start).inverse())]
    })
}

fn is_peripheral(x: &HypStructure, w: &Word) -> bool {
    let c = w.conjugacy_canonical();
    if c.is_empty() {
        return true;
    }
    let pres = x.decomposition.presentation();
    let holes = (0..x.surface.boundary)
        .map(Hole::Boundary)
        .chain((0..x.surface.punctures).map(Hole::Puncture));
    holes
        .filter_map(|h| pres.hole_word(&x.decomposition, h))
        .any(|h| h.conjugacy_canonical() == c)
}

/// Simple closed curve associated with an arc: the non-peripheral
/// neighborhood curve of greater `X`-length, ties broken by canonical word.
pub fn companion_curve(x: &HypStructure, a: &ArcClass) -> Result<CurveClass, SpectrumError> {
    let real = Realization::new(x)?;
    let mut best: Option<(f64, Word)> = None;
    for w in neighborhood_curves(x, a)? {
        if is_peripheral(x, &w) {
            continue;
        }
        let c = w.conjugacy_canonical();
        let l = real.word_length(&c)?;
        let better = match &best {
            None => true,
            Some((bl, bw)) => l > *bl || (l == *bl && c < *bw),
        };
        if better {
            best = Some((l, c));
        }
    }
    best.map(|(_, w)| CurveClass::interior(&w)).ok_or(SpectrumError::BothPeripheral)
}

/// Residual of the right-angled hexagon relation on the neighborhood pants
/// of an arc with distinct endpoints `i`, `j`: `cosh(c/2) + cosh(l_i/2)·cosh(l_j/2)
/// − sinh(l_i/2)·sinh(l_j/2)·cosh(l_α)`, where `c` is the companion. For an arc
/// returning to boundary `i` the self-arc closed form on the pants
/// `(l_i, c₁, c₂)` is compared with `l_α` instead.
pub fn hexagon_residual(x: &HypStructure, a: &ArcClass) -> Result<f64, SpectrumError> {
    let real = Realization::new(x)?;
    let la = real.arc_length(a)?;
    let li = x.boundary_lengths[a.start];
    let curves = neighborhood_curves(x, a)?;
    if a.start != a.end {
        let lj = x.boundary_lengths[a.end];
        let c = real.word_length(&curves[0])?;
        let (hi, hj) = (li / 2.0, lj / 2.0);
        Ok((c / 2.0).cosh() + hi.cosh() * hj.cosh() - hi.sinh() * hj.sinh() * la.cosh())
    } else {
        let c1 = real.word_length(&curves[0])?;
        let c2 = real.word_length(&curves[1])?;
        let p = PantsGeometry::new(li, c1, c2).map_err(GeometryError::from)?;
        Ok(pants_self_arc(&p, 0, 1).map_err(GeometryError::from)? - la)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapRow {
    pub x: HypStructure,
    pub y: HypStructure,
    pub d_l: f64,
    pub delta_l: f64,
    pub d: f64,
    pub d_bar: f64,
    /// `δ_L − d_L`.
    pub gap: f64,
    pub arcs_only: ArcsOnlyCheck,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub pairs: Vec<GapRow>,
    pub max_gap: f64,
    pub spec: ThickPartSpec,
    pub bound: usize,
}

impl GapReport {
    /// Every gap `δ_L − d_L`, `δ_L − d`, `δ_L − d̄` is nonnegative.
    pub fn gaps_nonnegative(&self) -> bool {
        self.pairs
            .iter()
            .all(|r| r.gap >= 0.0 && r.delta_l >= r.d && r.delta_l >= r.d_bar)
    }
}

/// Per-pair `d_L`, `δ_L`, `d`, `d̄` over samples certified in the thick part.
pub fn comparison_experiment(
    samples: &[(HypStructure, HypStructure)],
    spec: ThickPartSpec,
    bound: usize,
) -> Result<GapReport, SpectrumError> {
    let st = match samples.first() {
        Some((x, _)) => x.surface,
        None => return Ok(GapReport { pairs: vec![], max_gap: 0.0, spec, bound }),
    };
    for (index, (x, y)) in samples.iter().enumerate() {
        for s in [x, y] {
            match in_thick_part(s, spec, bound)? {
                ThickMembership::Yes => {}
                ThickMembership::No(w) => return Err(SpectrumError::NotInThickPart { index, witness: Some(w) }),
                ThickMembership::Unknown(_) => return Err(SpectrumError::NotInThickPart { index, witness: None }),
            }
        }
    }
    let spectrum = Spectrum::new(st, bound)?;
    let pairs = samples
        .par_iter()
        .map(|(x, y)| -> Result<GapRow, SpectrumError> {
            if x.surface != st || y.surface != st {
                return Err(SpectrumError::SurfaceMismatch(x.surface, y.surface));
            }
            let lx = spectrum.lengths_of(x)?;
            let ly = spectrum.lengths_of(y)?;
            let dl = spectrum.d_l(&lx, &ly)?;
            let delta = spectrum.delta_l(&lx, &ly);
            let d = spectrum.d_weak(&lx, &ly);
            let db = spectrum.d_weak(&ly, &lx);
            let arcs_only = d.arcs_only.unwrap_or(ArcsOnlyCheck { arcs_only: d.value, all: d.value, slack: 0.0 });
            Ok(GapRow {
                x: x.clone(),
                y: y.clone(),
                d_l: dl.value,
                delta_l: delta.value,
                d: d.value,
                d_bar: db.value,
                gap: delta.value - dl.value,
                arcs_only,
                slack: [dl.slack, delta.slack, d.slack, db.slack].into_iter().fold(0.0, f64::max),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let max_gap = pairs.iter().map(|r| r.gap).fold(0.0, f64::max);
    Ok(GapReport { pairs, max_gap, spec, bound })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub d: f64,
    pub d_bar: f64,
    pub d_l: f64,
    pub delta_l: f64,
    pub slack: f64,
}

impl ConvergenceRow {
    pub fn values(&self) -> [f64; 4] {
        [self.d, self.d_bar, self.d_l, self.delta_l]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub bound: usize,
}

impl ConvergenceTable {
    /// Largest of the four estimators over rows where `d_L < tol`, if any.
    pub fn envelope(&self, tol: f64) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.d_l < tol)
            .map(|r| r.values().into_iter().fold(0.0, f64::max))
            .reduce(f64::max)
    }

    /// Whether every row with one estimator above `threshold` has all four above it.
    pub fn diverge_together(&self, threshold: f64) -> bool {
        self.rows.iter().all(|r| {
            let v = r.values();
            v.iter().all(|&x| x > threshold) || v.iter().all(|&x| x <= threshold)
        })
    }

    /// Each estimator is monotone in `n` (in `direction`, `1` increasing,
    /// `-1` decreasing) up to the row slack.
    pub fn monotone(&self, direction: f64) -> bool {
        self.rows.windows(2).all(|w| {
            let tol = w[0].slack.max(w[1].slack) + 1e-12;
            w[0].values().iter().zip(w[1].values()).all(|(&a, b)| direction * (b - a) >= -tol)
        })
    }
}

/// Estimators between `X_n = path(n)` and `X₀` for each `n`.
pub fn convergence_study<F>(path: F, x0: &HypStructure, ns: &[usize], bound: usize) -> Result<ConvergenceTable, SpectrumError>
where
    F: Fn(usize) -> Result<HypStructure, GeometryError> + Sync,
{
    let spectrum = Spectrum::new(x0.surface, bound)?;
    let l0 = spectrum.lengths_of(x0)?;
    let rows = ns
        .par_iter()
        .map(|&n| -> Result<ConvergenceRow, SpectrumError> {
            let ln = spectrum.lengths_of(&path(n)?)?;
            let d = spectrum.d_weak(&ln, &l0);
            let db = spectrum.d_weak(&l0, &ln);
            let dl = spectrum.d_l(&ln, &l0)?;
            let delta = spectrum.delta_l(&ln, &l0);
            Ok(ConvergenceRow {
                n,
                d: d.value,
                d_bar: db.value,
                d_l: dl.value,
                delta_l: delta.value,
                slack: [dl.slack, delta.slack, d.slack, db.slack].into_iter().fold(0.0, f64::max),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConvergenceTable { rows, bound })
}

/// Ranges used for sampled one-holed torus structures: pants curve, twist, boundary.
pub const TORUS_RANGES: [(f64, f64); 3] = [(1.0, 3.0), (-1.0, 1.0), (0.5, 2.5)];

pub fn random_torus(rng: &mut impl Rng) -> HypStructure {
    let [l, t, b] = TORUS_RANGES.map(|(lo, hi)| rng.gen_range(lo..hi));
    HypStructure::one_holed_torus(l, t, b).expect("sampled lengths are positive")
}

/// `n³` pairs: `X` runs over an `n×n×n` lattice of the sampling box and each
/// `Y` is drawn from a generator seeded with `seed`.
pub fn torus_grid(n: usize, seed: u64) -> Vec<(HypStructure, HypStructure)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let at = |k: usize, (lo, hi): (f64, f64)| if n == 1 { (lo + hi) / 2.0 } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let [rl, rt, rb] = TORUS_RANGES;
                let x = HypStructure::one_holed_torus(at(i, rl), at(k, rt), at(j, rb)).expect("lattice lengths are positive");
                out.push((x, random_torus(&mut rng)));
            }
        }
    }
    out
}

/// `count` seeded random pairs.
pub fn torus_pairs(count: usize, seed: u64) -> Vec<(HypStructure, HypStructure)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (random_torus(&mut rng), random_torus(&mut rng))).collect()
}
