use super::decomposition::{Hole, PantsDecomposition, Presentation, Slot, SurfaceType};
use super::enumerate::{ArcClass, CurveClass};
use super::word::{Letter, Word};
use super::SurfaceError;

/// The double `S^d = S ∪ S̄` glued along `∂S`.
///
/// Alphabet of the double: base generators `0..r`, their mirrors `r..2r`, and
/// stable letters `s_k` (`2r + k − 1`) for boundary components `k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubledSurface {
    pub base: SurfaceType,
    pub double_type: SurfaceType,
    pub base_decomposition: PantsDecomposition,
    pub pants_double: PantsDecomposition,
    /// Mirror image of each slot of `pants_double`, indexed by `3·pants + slot`.
    pub mirror_slots: Vec<Slot>,
    pub base_rank: usize,
    /// Boundary words `γ_i` in the base alphabet.
    pub boundary_words: Vec<Word>,
}

pub fn double(st: SurfaceType, pd: &PantsDecomposition) -> Result<DoubledSurface, SurfaceError> {
    st.validate()?;
    if st.boundary == 0 {
        return Err(SurfaceError::NoBoundary(st));
    }
    if pd.surface_type() != st {
        return Err(SurfaceError::InvalidDecomposition(format!(
            "decomposition realizes {}, expected {st}",
            pd.surface_type()
        )));
    }
    let n = pd.pants;
    let mirror = |s: Slot| Slot::new(s.pants + n, s.index);
    let mut gluings = pd.gluings.clone();
    gluings.extend(pd.gluings.iter().map(|&(s, t)| (mirror(s), mirror(t))));
    let mut holes = Vec::new();
    for &(s, h) in &pd.holes {
        match h {
            Hole::Boundary(_) => gluings.push((s, mirror(s))),
            Hole::Puncture(i) => {
                holes.push((s, Hole::Puncture(i)));
                holes.push((mirror(s), Hole::Puncture(st.punctures + i)));
            }
        }
    }
    let pants_double = PantsDecomposition::new(2 * n, gluings, holes)?;
    let mirror_slots = (0..2 * n)
        .flat_map(|k| (0..3).map(move |i| Slot::new((k + n) % (2 * n), i)))
        .collect();
    let pres: Presentation = pd.presentation();
    let boundary_words = (0..st.boundary)
        .map(|i| pres.hole_word(pd, Hole::Boundary(i)).unwrap())
        .collect();
    let double_type = SurfaceType::new(2 * st.genus + st.boundary - 1, 2 * st.punctures, 0);
    Ok(DoubledSurface {
        base: st,
        double_type,
        base_decomposition: pd.clone(),
        pants_double,
        mirror_slots,
        base_rank: pres.rank(),
        boundary_words,
    })
}

impl DoubledSurface {
    pub fn alphabet_size(&self) -> usize {
        2 * self.base_rank + self.base.boundary - 1
    }

    /// Stable letter for boundary `k`; boundary 0 is the reference and has none.
    pub fn stable(&self, k: usize) -> Word {
        if k == 0 {
            Word::empty()
        } else {
            Word::generator(2 * self.base_rank + k - 1)
        }
    }

    pub fn mirror_letter(&self, l: Letter) -> Letter {
        let g = l.generator as usize;
        let r = self.base_rank;
        if g < r {
            Letter::new((g + r) as u16, l.inverse)
        } else if g < 2 * r {
            Letter::new((g - r) as u16, l.inverse)
        } else {
            l.inv()
        }
    }

    /// The orientation-reversing involution on words of the double.
    pub fn mirror_word(&self, w: &Word) -> Word {
        w.map_letters(|l| self.mirror_letter(l))
    }

    pub fn mirror_slot(&self, s: Slot) -> Slot {
        self.mirror_slots[3 * s.pants + s.index]
    }

    /// A base word viewed in the double.
    pub fn embed(&self, w: &Word) -> Word {
        w.clone()
    }

    /// The symmetric curve `α ∪ ᾱ`: `w · s_j · w̄⁻¹ · s_i⁻¹`.
    pub fn double_arc_word(&self, a: &ArcClass) -> Word {
        let w = &a.connector;
        w.concat(&self.stable(a.end))
            .concat(&self.mirror_word(w).inverse())
            .concat(&self.stable(a.start).inverse())
    }

    /// Boundary curves of the base become the fixed curves of the involution.
    pub fn double_curve(&self, c: &CurveClass) -> CurveClass {
        CurveClass::interior(&self.embed(&c.word))
    }
}

pub fn double_arc(dc: &DoubledSurface, a: &ArcClass) -> CurveClass {
    CurveClass::interior(&dc.double_arc_word(a))
}
