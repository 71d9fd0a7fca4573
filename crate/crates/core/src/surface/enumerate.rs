use std::collections::BTreeSet;

use super::decomposition::{default_pants_decomposition, Family, Hole, Presentation, SurfaceType};
use super::word::{reduced_words, Letter, Word};
use super::SurfaceError;
use crate::isometry::{geodesics_cross, Crossing, Isometry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurveTag {
    Boundary(usize),
    Interior,
}

/// A closed curve class, stored in conjugacy-canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveClass {
    pub tag: CurveTag,
    pub word: Word,
}

impl CurveClass {
    pub fn interior(word: &Word) -> Self {
        CurveClass { tag: CurveTag::Interior, word: word.conjugacy_canonical() }
    }

    pub fn boundary(i: usize, word: &Word) -> Self {
        CurveClass { tag: CurveTag::Boundary(i), word: word.conjugacy_canonical() }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self.tag, CurveTag::Boundary(_))
    }
}

/// The arc class `⟨γ_start⟩ · connector · ⟨γ_end⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcClass {
    pub start: usize,
    pub end: usize,
    pub connector: Word,
}

/// Anything that can evaluate a word to an isometry.
pub trait WordImage {
    fn image(&self, w: &Word) -> Isometry;
}

impl<F: Fn(&Word) -> Isometry> WordImage for F {
    fn image(&self, w: &Word) -> Isometry {
        self(w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simplicity {
    Simple,
    NonSimple,
    Unknown(usize),
}

/// Conjugator length examined by the geometric simplicity test.
pub const SIMPLICITY_CONJUGATOR_BOUND: usize = 4;

/// Words of the boundary components `γ_i`, each with its pants on the left.
pub fn boundary_words(st: SurfaceType) -> Result<Vec<Word>, SurfaceError> {
    let pd = default_pants_decomposition(st)?;
    let pres = pd.presentation();
    Ok((0..st.boundary)
        .map(|i| pres.hole_word(&pd, Hole::Boundary(i)).unwrap())
        .collect())
}

fn puncture_words(st: SurfaceType) -> Result<Vec<Word>, SurfaceError> {
    let pd = default_pants_decomposition(st)?;
    let pres: Presentation = pd.presentation();
    Ok((0..st.punctures)
        .map(|i| pres.hole_word(&pd, Hole::Puncture(i)).unwrap())
        .collect())
}

/// Lower Christoffel word with `p` copies of `a` and `q` copies of `b`.
pub fn christoffel(p: usize, q: usize) -> Word {
    let n = p + q;
    let letters = (1..=n)
        .map(|i| {
            if (i * q) / n == ((i - 1) * q) / n {
                Letter::pos(0)
            } else {
                Letter::pos(1)
            }
        })
        .collect();
    Word::new(letters)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Reduced slopes `p/q` with `q ≥ 0` and `|p| + q ≤ bound`, `1/0` first.
pub fn slopes(bound: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for n in 1..=bound {
        for q in 0..=n {
            let p = n - q;
            if gcd(p, q) != 1 {
                continue;
            }
            out.push((p as i64, q as i64));
            if p > 0 && q > 0 {
                out.push((-(p as i64), q as i64));
            }
        }
    }
    out
}

/// Word of slope `p/q` on the one-holed torus (basis `a` = the pants curve).
pub fn slope_word(p: i64, q: i64) -> Word {
    let w = christoffel(p.unsigned_abs() as usize, q.unsigned_abs() as usize);
    w.map_letters(|l| {
        let flip = (l.generator == 0 && p < 0) || (l.generator == 1 && q < 0);
        if flip {
            l.inv()
        } else {
            l
        }
    })
}

/// Primitivity in the free group of rank 2.
pub fn is_primitive_rank2(w: &Word) -> bool {
    let core = w.cyclically_reduced();
    if core.is_empty() {
        return false;
    }
    let mut sign = [None::<bool>; 2];
    for l in core.letters() {
        let s = &mut sign[l.generator as usize];
        match s {
            None => *s = Some(l.inverse),
            Some(v) if *v != l.inverse => return false,
            _ => {}
        }
    }
    let positive = core.map_letters(|l| Letter::new(l.generator, false));
    let ab = positive.abelianization(2);
    let (p, q) = (ab[0] as usize, ab[1] as usize);
    if gcd(p, q) != 1 {
        return false;
    }
    positive.oriented_canonical() == christoffel(p, q).oriented_canonical()
}

/// Essential simple closed curves of word length at most `bound`, boundary
/// classes first. For the four-holed sphere and two-holed torus the list holds
/// every primitive non-peripheral class up to the bound; simplicity is not
/// certified there.
pub fn enumerate_curves(st: SurfaceType, bound: usize) -> Result<Vec<CurveClass>, SurfaceError> {
    st.validate()?;
    let mut out: Vec<CurveClass> = boundary_words(st)?
        .iter()
        .enumerate()
        .map(|(i, w)| CurveClass::boundary(i, w))
        .collect();
    match st.family() {
        Some(Family::Pants) => {}
        Some(Family::OneHoledTorus) => {
            out.extend(slopes(bound).into_iter().map(|(p, q)| CurveClass::interior(&slope_word(p, q))));
        }
        Some(_) => {
            let mut peripheral: BTreeSet<Word> = out.iter().map(|c| c.word.clone()).collect();
            peripheral.extend(puncture_words(st)?.iter().map(|w| w.conjugacy_canonical()));
            let mut seen = BTreeSet::new();
            for w in reduced_words(st.rank(), bound) {
                if !w.is_cyclically_reduced() || w.is_proper_power() {
                    continue;
                }
                let c = w.conjugacy_canonical();
                if !peripheral.contains(&c) {
                    seen.insert((c.len(), c));
                }
            }
            out.extend(seen.into_iter().map(|(_, c)| CurveClass { tag: super::CurveTag::Interior, word: c }));
        }
        None => return Err(SurfaceError::UnsupportedFamily(st)),
    }
    Ok(out)
}

/// Shortlex-least element of `⟨ci⟩ w ⟨cj⟩` found by searching powers.
pub fn double_coset_canonical(ci: &Word, w: &Word, cj: &Word) -> Word {
    let step = ci.cyclically_reduced().len().min(cj.cyclically_reduced().len()).max(1);
    let k = (w.len() / step + 2) as i64;
    let mut best = w.clone();
    for m in -k..=k {
        let left = ci.pow(m).concat(w);
        for n in -k..=k {
            let cand = left.concat(&cj.pow(n));
            if (cand.len(), &cand) < (best.len(), &best) {
                best = cand;
            }
        }
    }
    best
}

/// Canonical arc class; `None` when the arc is inessential.
pub fn canonical_arc(bw: &[Word], start: usize, connector: &Word, end: usize) -> Option<ArcClass> {
    let (i, j, w) = if start <= end {
        (start, end, connector.clone())
    } else {
        (end, start, connector.inverse())
    };
    let mut c = double_coset_canonical(&bw[i], &w, &bw[j]);
    if i == j {
        if c.is_empty() {
            return None;
        }
        let ci = double_coset_canonical(&bw[i], &w.inverse(), &bw[j]);
        if (ci.len(), &ci) < (c.len(), &c) {
            c = ci;
        }
    }
    Some(ArcClass { start: i, end: j, connector: c })
}

/// Essential arc classes with connector length at most `bound`, sorted by
/// endpoints, then connector length, then connector word. The pants give
/// exactly the three seams and three self-arcs at every bound.
pub fn enumerate_arcs(st: SurfaceType, bound: usize) -> Result<Vec<ArcClass>, SurfaceError> {
    st.validate()?;
    if st.boundary == 0 {
        return Err(SurfaceError::NoBoundary(st));
    }
    let bw = boundary_words(st)?;
    match st.family() {
        Some(Family::Pants) => Ok(pants_arcs(st)),
        Some(_) => {
            let mut words = vec![Word::empty()];
            words.extend(reduced_words(st.rank(), bound));
            let mut set = BTreeSet::new();
            for i in 0..st.boundary {
                for j in i..st.boundary {
                    for w in &words {
                        if let Some(a) = canonical_arc(&bw, i, w, j) {
                            if a.connector.len() <= bound {
                                set.insert((a.start, a.end, a.connector.len(), a.connector));
                            }
                        }
                    }
                }
            }
            Ok(set
                .into_iter()
                .map(|(start, end, _, connector)| ArcClass { start, end, connector })
                .collect())
        }
        None => Err(SurfaceError::UnsupportedFamily(st)),
    }
}

/// Seams have the trivial connector; the self-arc at a cuff goes around the
/// next cuff. Cuffs that are punctures carry no arcs.
fn pants_arcs(st: SurfaceType) -> Vec<ArcClass> {
    let pd = default_pants_decomposition(st).unwrap();
    let pres = pd.presentation();
    let bw = boundary_words(st).unwrap();
    let slot_of = |i: usize| pd.boundary_slot(i).unwrap();
    let mut out = Vec::new();
    for i in 0..st.boundary {
        for j in (i + 1)..st.boundary {
            out.push(canonical_arc(&bw, i, &Word::empty(), j).unwrap());
        }
    }
    for i in 0..st.boundary {
        let s = slot_of(i);
        let via = super::Slot::new(0, (s.index + 1) % 3);
        out.push(canonical_arc(&bw, i, &pres.slot_word(via), i).unwrap());
    }
    out.sort_by(|a, b| (a.start, a.end, a.connector.len(), &a.connector).cmp(&(b.start, b.end, b.connector.len(), &b.connector)));
    out
}

/// Simplicity of a primitive essential class.
pub fn is_simple(st: SurfaceType, w: &Word, holonomy: &dyn WordImage) -> Result<Simplicity, SurfaceError> {
    st.validate()?;
    let c = w.conjugacy_canonical();
    let bw = boundary_words(st)?;
    if bw.iter().any(|b| b.conjugacy_canonical() == c) {
        return Ok(Simplicity::Simple);
    }
    match st.family() {
        Some(Family::Pants) => return Ok(Simplicity::NonSimple),
        Some(Family::OneHoledTorus) => {
            return Ok(if is_primitive_rank2(&c) {
                Simplicity::Simple
            } else {
                Simplicity::NonSimple
            })
        }
        _ => {}
    }
    Ok(geometric_simplicity(&c, st.rank(), holonomy, SIMPLICITY_CONJUGATOR_BOUND))
}

/// Searches for a conjugate whose axis crosses the axis of `w`.
pub fn geometric_simplicity(w: &Word, rank: usize, holonomy: &dyn WordImage, bound: usize) -> Simplicity {
    let g = holonomy.image(w);
    let Ok(axis) = g.axis() else {
        return Simplicity::Unknown(0);
    };
    let core = w.cyclically_reduced();
    for h in reduced_words(rank, bound) {
        let conj = core.conjugate_by(&h);
        // conjugates by powers of w itself share the axis
        if conj == core {
            continue;
        }
        let other = holonomy.image(&h).apply_geodesic(&axis);
        if other.same_line(&axis, 1e-9) {
            continue;
        }
        if geodesics_cross(&axis, &other) == Crossing::Cross {
            return Simplicity::NonSimple;
        }
    }
    Simplicity::Unknown(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn euler_phi(n: usize) -> usize {
        (1..=n).filter(|&k| gcd(k, n) == 1).count()
    }

    /// Stern–Brocot count of reduced fractions p/q ≥ 0 with p + q ≤ n.
    fn stern_brocot(n: usize) -> usize {
        fn walk(a: (usize, usize), b: (usize, usize), n: usize) -> usize {
            let m = (a.0 + b.0, a.1 + b.1);
            if m.0 + m.1 > n {
                return 0;
            }
            1 + walk(a, m, n) + walk(m, b, n)
        }
        2 + walk((0, 1), (1, 0), n)
    }

    #[test]
    fn christoffel_examples() {
        assert_eq!(christoffel(1, 0), w("a"));
        assert_eq!(christoffel(0, 1), w("b"));
        assert_eq!(christoffel(2, 1), w("aab"));
        assert_eq!(christoffel(3, 2), w("aabab"));
    }

    #[test]
    fn farey_count() {
        for bound in 1..12 {
            let n_pos = stern_brocot(bound);
            // positive slopes and their negatives, minus the duplicated 0/1, 1/0
            let expected = 2 * n_pos - 2;
            assert_eq!(slopes(bound).len(), expected, "bound {bound}");
            let phi: usize = (2..=bound).map(|n| 2 * euler_phi(n)).sum();
            assert_eq!(slopes(bound).len(), 2 + phi);
            let curves = enumerate_curves(SurfaceType::ONE_HOLED_TORUS, bound).unwrap();
            assert_eq!(curves.len(), expected + 1);
        }
    }

    #[test]
    fn slope_words_are_primitive_and_distinct() {
        let curves = enumerate_curves(SurfaceType::ONE_HOLED_TORUS, 9).unwrap();
        let set: BTreeSet<_> = curves.iter().map(|c| c.word.clone()).collect();
        assert_eq!(set.len(), curves.len());
        for c in curves.iter().filter(|c| !c.is_boundary()) {
            assert!(is_primitive_rank2(&c.word), "{}", c.word);
        }
    }

    #[test]
    fn brute_force_primitive_classes_match_slopes() {
        // every primitive conjugacy class up to length 7 is some slope
        let bound = 7;
        let mut brute = BTreeSet::new();
        for x in reduced_words(2, bound) {
            if is_primitive_rank2(&x) {
                brute.insert(x.conjugacy_canonical());
            }
        }
        let from_slopes: BTreeSet<_> = slopes(bound).iter().map(|&(p, q)| slope_word(p, q).conjugacy_canonical()).collect();
        assert_eq!(brute, from_slopes);
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive_rank2(&w("a")));
        assert!(is_primitive_rank2(&w("aB")));
        assert!(!is_primitive_rank2(&w("abAB")));
        assert!(!is_primitive_rank2(&w("abaB")));
        assert!(!is_primitive_rank2(&w("aabb")));
        assert!(!is_primitive_rank2(&w("abab")));
    }

    #[test]
    fn pants_enumeration() {
        for bound in 1..5 {
            let curves = enumerate_curves(SurfaceType::PANTS, bound).unwrap();
            assert_eq!(curves.len(), 3);
            assert!(curves.iter().all(|c| c.is_boundary()));
            let arcs = enumerate_arcs(SurfaceType::PANTS, bound).unwrap();
            assert_eq!(arcs.len(), 6);
            let seams = arcs.iter().filter(|a| a.start != a.end).count();
            assert_eq!(seams, 3);
        }
        assert_eq!(enumerate_arcs(SurfaceType::new(0, 1, 2), 3).unwrap().len(), 3);
    }

    #[test]
    fn monotone_and_duplicate_free() {
        for st in [SurfaceType::ONE_HOLED_TORUS, SurfaceType::FOUR_HOLED_SPHERE, SurfaceType::TWO_HOLED_TORUS] {
            let a3 = enumerate_arcs(st, 3).unwrap();
            let a4 = enumerate_arcs(st, 4).unwrap();
            let s4: BTreeSet<_> = a4.iter().cloned().collect();
            assert_eq!(s4.len(), a4.len());
            assert!(a3.iter().all(|a| s4.contains(a)), "{st}");
            let c3 = enumerate_curves(st, 3).unwrap();
            let c4: BTreeSet<_> = enumerate_curves(st, 4).unwrap().into_iter().collect();
            assert!(c3.iter().all(|c| c4.contains(c)), "{st}");
        }
    }

    #[test]
    fn arc_canonical_is_coset_invariant() {
        let bw = boundary_words(SurfaceType::ONE_HOLED_TORUS).unwrap();
        let g = &bw[0];
        for x in reduced_words(2, 3) {
            let a = canonical_arc(&bw, 0, &x, 0);
            let moved = g.concat(&x).concat(&g.pow(-2));
            assert_eq!(a, canonical_arc(&bw, 0, &moved, 0), "{x}");
            assert_eq!(a, canonical_arc(&bw, 0, &x.inverse(), 0), "{x}");
        }
        assert!(canonical_arc(&bw, 0, g, 0).is_none());
    }

    #[test]
    fn torus_arcs_bound_two_brute_force() {
        // independent enumeration: orbit closure under the coset moves
        let bw = boundary_words(SurfaceType::ONE_HOLED_TORUS).unwrap();
        let g = &bw[0];
        let mut words = vec![Word::empty()];
        words.extend(reduced_words(2, 2));
        let mut classes: Vec<BTreeSet<Word>> = Vec::new();
        for x in &words {
            let mut orbit = BTreeSet::new();
            for m in -3..=3 {
                for n in -3..=3 {
                    let y = g.pow(m).concat(x).concat(&g.pow(n));
                    orbit.insert(y.clone());
                    orbit.insert(y.inverse());
                }
            }
            if orbit.contains(&Word::empty()) {
                continue;
            }
            if !classes.iter().any(|c| c.contains(x)) {
                classes.push(orbit);
            }
        }
        let arcs = enumerate_arcs(SurfaceType::ONE_HOLED_TORUS, 2).unwrap();
        assert_eq!(arcs.len(), classes.len());
    }

    #[test]
    fn no_boundary_errors() {
        assert!(matches!(
            enumerate_arcs(SurfaceType::new(2, 0, 0), 2),
            Err(SurfaceError::NoBoundary(_))
        ));
    }
}
