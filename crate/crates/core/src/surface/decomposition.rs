use std::collections::VecDeque;
use std::fmt;

use super::word::{Letter, Word};
use super::SurfaceError;

/// Topological type `(g, p, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceType {
    pub genus: usize,
    pub punctures: usize,
    pub boundary: usize,
}

/// Families with full curve and arc enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Pants,
    OneHoledTorus,
    FourHoledSphere,
    TwoHoledTorus,
}

impl SurfaceType {
    pub const PANTS: SurfaceType = SurfaceType::new(0, 0, 3);
    pub const ONE_HOLED_TORUS: SurfaceType = SurfaceType::new(1, 0, 1);
    pub const FOUR_HOLED_SPHERE: SurfaceType = SurfaceType::new(0, 0, 4);
    pub const TWO_HOLED_TORUS: SurfaceType = SurfaceType::new(1, 0, 2);

    pub const fn new(genus: usize, punctures: usize, boundary: usize) -> Self {
        SurfaceType { genus, punctures, boundary }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64 - self.boundary as i64
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        if self.euler_characteristic() < 0 {
            Ok(())
        } else {
            Err(SurfaceError::NonHyperbolicType(*self))
        }
    }

    pub fn pants_count(&self) -> usize {
        (-self.euler_characteristic()).max(0) as usize
    }

    pub fn interior_curve_count(&self) -> usize {
        (3 * self.genus + self.punctures + self.boundary).saturating_sub(3)
    }

    /// Rank of the free fundamental group (only meaningful when `b + p ≥ 1`).
    pub fn rank(&self) -> usize {
        2 * self.genus + self.boundary + self.punctures - 1
    }

    /// The enumeration family, if any. Punctures may replace boundary
    /// components of a pair of pants; the other families are boundary-only.
    pub fn family(&self) -> Option<Family> {
        match (self.genus, self.punctures, self.boundary) {
            (0, p, b) if p + b == 3 => Some(Family::Pants),
            (1, 0, 1) => Some(Family::OneHoledTorus),
            (0, 0, 4) => Some(Family::FourHoledSphere),
            (1, 0, 2) => Some(Family::TwoHoledTorus),
            _ => None,
        }
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, p={}, b={})", self.genus, self.punctures, self.boundary)
    }
}

/// One of the three cuffs of a pants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub pants: usize,
    pub index: usize,
}

impl Slot {
    pub const fn new(pants: usize, index: usize) -> Self {
        Slot { pants, index }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hole {
    Boundary(usize),
    Puncture(usize),
}

/// Pants glued along slot pairs. Gluing `e` is the interior curve `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PantsDecomposition {
    pub pants: usize,
    pub gluings: Vec<(Slot, Slot)>,
    pub holes: Vec<(Slot, Hole)>,
}

impl PantsDecomposition {
    pub fn new(
        pants: usize,
        gluings: Vec<(Slot, Slot)>,
        holes: Vec<(Slot, Hole)>,
    ) -> Result<Self, SurfaceError> {
        let pd = PantsDecomposition { pants, gluings, holes };
        pd.check()?;
        Ok(pd)
    }

    fn check(&self) -> Result<(), SurfaceError> {
        let bad = |msg: &str| Err(SurfaceError::InvalidDecomposition(msg.to_string()));
        if self.pants == 0 {
            return bad("no pants");
        }
        let mut seen = vec![0u8; 3 * self.pants];
        let slots = self
            .gluings
            .iter()
            .flat_map(|&(s, t)| [s, t])
            .chain(self.holes.iter().map(|&(s, _)| s));
        for s in slots {
            if s.pants >= self.pants || s.index > 2 {
                return bad("slot out of range");
            }
            seen[3 * s.pants + s.index] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return bad("every slot must be glued or a hole exactly once");
        }
        let (b, p) = self.hole_counts();
        for (kind, n) in [(true, b), (false, p)] {
            let mut idx: Vec<usize> = self
                .holes
                .iter()
                .filter_map(|&(_, h)| match (h, kind) {
                    (Hole::Boundary(i), true) | (Hole::Puncture(i), false) => Some(i),
                    _ => None,
                })
                .collect();
            idx.sort_unstable();
            if idx != (0..n).collect::<Vec<_>>() {
                return bad("hole labels must be 0..n without gaps");
            }
        }
        if !self.is_connected() {
            return bad("decomposition is disconnected");
        }
        Ok(())
    }

    fn hole_counts(&self) -> (usize, usize) {
        let b = self.holes.iter().filter(|(_, h)| matches!(h, Hole::Boundary(_))).count();
        (b, self.holes.len() - b)
    }

    fn is_connected(&self) -> bool {
        self.dual_distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// The topological type this decomposition realizes.
    pub fn surface_type(&self) -> SurfaceType {
        let (b, p) = self.hole_counts();
        let chi = -(self.pants as i64);
        let genus = (2 - chi - b as i64 - p as i64) / 2;
        SurfaceType::new(genus as usize, p, b)
    }

    pub fn hole_slot(&self, hole: Hole) -> Option<Slot> {
        self.holes.iter().find(|(_, h)| *h == hole).map(|(s, _)| *s)
    }

    pub fn boundary_slot(&self, i: usize) -> Option<Slot> {
        self.hole_slot(Hole::Boundary(i))
    }

    pub fn slot_role(&self, slot: Slot) -> SlotRole {
        for (e, &(s, t)) in self.gluings.iter().enumerate() {
            if s == slot || t == slot {
                return SlotRole::Glued(e);
            }
        }
        match self.holes.iter().find(|(s, _)| *s == slot) {
            Some((_, h)) => SlotRole::Hole(*h),
            None => unreachable!("validated decomposition covers every slot"),
        }
    }

    pub fn is_cusp_slot(&self, slot: Slot) -> bool {
        matches!(self.slot_role(slot), SlotRole::Hole(Hole::Puncture(_)))
    }

    /// Distances in the dual graph from pants `root`.
    fn dual_distances(&self, root: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.pants];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(k) = queue.pop_front() {
            for &(s, t) in &self.gluings {
                for (u, v) in [(s, t), (t, s)] {
                    if u.pants == k && dist[v.pants] == usize::MAX {
                        dist[v.pants] = dist[k] + 1;
                        queue.push_back(v.pants);
                    }
                }
            }
        }
        dist
    }

    /// A pants of least eccentricity in the dual graph (lowest index on ties).
    /// Rooting there keeps generators short, which matters numerically.
    pub fn center(&self) -> usize {
        (0..self.pants)
            .min_by_key(|&k| (self.dual_distances(k).into_iter().max().unwrap_or(0), k))
            .unwrap_or(0)
    }

    /// Spanning tree of the dual graph from the center: returns BFS order of
    /// tree edges `(gluing, parent slot, child slot)` and the remaining gluings.
    pub fn spanning_tree(&self) -> (Vec<(usize, Slot, Slot)>, Vec<usize>) {
        let root = self.center();
        let mut placed = vec![false; self.pants];
        placed[root] = true;
        let mut tree = Vec::new();
        let mut used = vec![false; self.gluings.len()];
        let mut queue = VecDeque::from([root]);
        while let Some(k) = queue.pop_front() {
            for (e, &(s, t)) in self.gluings.iter().enumerate() {
                if used[e] {
                    continue;
                }
                for (u, v) in [(s, t), (t, s)] {
                    if u.pants == k && !placed[v.pants] {
                        placed[v.pants] = true;
                        used[e] = true;
                        tree.push((e, u, v));
                        queue.push_back(v.pants);
                        break;
                    }
                }
            }
        }
        let rest = (0..self.gluings.len()).filter(|&e| !used[e]).collect();
        (tree, rest)
    }

    /// Free presentation of π₁ obtained from the pants generators by Tietze moves.
    pub fn presentation(&self) -> Presentation {
        Presentation::build(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotRole {
    Glued(usize),
    Hole(Hole),
}

/// Default decomposition.
///
/// Layout: each handle is a pants with slots 0 and 1 glued to each other.
/// The remaining free slots of the handles plus the holes (boundaries first,
/// then punctures) are the leaves of a caterpillar of pants. In the caterpillar
/// every pants keeps its first edge in slot 0, so cusps land in slots 1 or 2.
pub fn default_pants_decomposition(st: SurfaceType) -> Result<PantsDecomposition, SurfaceError> {
    st.validate()?;
    #[derive(Clone, Copy)]
    enum Leaf {
        Handle(usize),
        Hole(Hole),
    }
    let mut leaves: Vec<Leaf> = (0..st.genus).map(Leaf::Handle).collect();
    leaves.extend((0..st.boundary).map(|i| Leaf::Hole(Hole::Boundary(i))));
    leaves.extend((0..st.punctures).map(|i| Leaf::Hole(Hole::Puncture(i))));

    let mut gluings = Vec::new();
    let mut holes = Vec::new();
    // handle pants come first, 0..g
    for h in 0..st.genus {
        gluings.push((Slot::new(h, 0), Slot::new(h, 1)));
    }
    let attach = |leaf: Leaf, slot: Slot, gluings: &mut Vec<(Slot, Slot)>, holes: &mut Vec<(Slot, Hole)>| match leaf {
        Leaf::Handle(h) => gluings.push((Slot::new(h, 2), slot)),
        Leaf::Hole(hole) => holes.push((slot, hole)),
    };
    let k = leaves.len();
    if k <= 2 {
        // g = 1 with one hole, or g = 2 closed
        match (st.genus, k) {
            (1, 2) => {
                if let Leaf::Hole(hole) = leaves[1] {
                    holes.push((Slot::new(0, 2), hole));
                }
            }
            (2, 2) => gluings.push((Slot::new(0, 2), Slot::new(1, 2))),
            _ => return Err(SurfaceError::NonHyperbolicType(st)),
        }
        return PantsDecomposition::new(st.pants_count(), gluings, holes);
    }
    let base = st.genus;
    let chain = k - 2;
    for m in 0..chain {
        let p = base + m;
        if m == 0 {
            attach(leaves[0], Slot::new(p, 0), &mut gluings, &mut holes);
            attach(leaves[1], Slot::new(p, 1), &mut gluings, &mut holes);
        } else {
            gluings.push((Slot::new(p - 1, 2), Slot::new(p, 0)));
            attach(leaves[m + 1], Slot::new(p, 1), &mut gluings, &mut holes);
        }
        if m + 1 == chain {
            attach(leaves[k - 1], Slot::new(p, 2), &mut gluings, &mut holes);
        }
    }
    // With three or more punctures and few boundaries the first pants may
    // collect two leaves that are both punctures; that case is accepted here
    // and rejected by the holonomy builder.
    PantsDecomposition::new(st.pants_count(), gluings, holes)
}

/// Free generators of π₁ and the words that express the pants data in them.
///
/// Raw generators: `2k` and `2k+1` are the slot-0 and slot-1 boundary elements
/// of pants `k` (slot 2 is `(x₀x₁)⁻¹`); `2P + j` is the stable letter of the
/// `j`-th non-tree gluing. Every basis letter is one raw generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub raw_count: usize,
    /// Which raw generator each basis letter is.
    pub basis: Vec<usize>,
    /// Each raw generator as a word in the basis.
    pub raw_words: Vec<Word>,
    /// Non-tree gluings in stable-letter order.
    pub stable_gluings: Vec<usize>,
    /// Remaining relators (closed surfaces only).
    pub relators: Vec<Word>,
}

impl Presentation {
    fn build(pd: &PantsDecomposition) -> Self {
        let (tree, rest) = pd.spanning_tree();
        let n_pants = pd.pants;
        let raw_count = 2 * n_pants + rest.len();
        let raw_slot = |s: Slot| -> Word {
            match s.index {
                0 => Word::generator(2 * s.pants),
                1 => Word::generator(2 * s.pants + 1),
                _ => Word::generator(2 * s.pants)
                    .concat(&Word::generator(2 * s.pants + 1))
                    .inverse(),
            }
        };
        // subst[g] = current expression of raw generator g in raw generators
        let mut subst: Vec<Word> = (0..raw_count).map(Word::generator).collect();
        let mut eliminated = vec![false; raw_count];
        let mut relators = Vec::new();

        let mut relations: Vec<(Word, Option<usize>)> = Vec::new();
        for &(_, parent, child) in &tree {
            // ρ(child) = ρ(parent)⁻¹
            relations.push((raw_slot(child).concat(&raw_slot(parent)), None));
        }
        for (j, &e) in rest.iter().enumerate() {
            let (s, t) = pd.gluings[e];
            let stable = Word::generator(2 * n_pants + j);
            // T ρ(t) T⁻¹ = ρ(s)⁻¹
            let r = stable
                .concat(&raw_slot(t))
                .concat(&stable.inverse())
                .concat(&raw_slot(s));
            relations.push((r, Some(2 * n_pants + j)));
        }

        for (rel, protect) in relations {
            let r = rel.substitute(&subst).cyclically_reduced();
            let candidate = (0..raw_count).rev().find(|&g| {
                !eliminated[g] && Some(g) != protect && r.occurrences(g) == 1
            });
            let candidate = candidate.or_else(|| {
                protect.filter(|&g| !eliminated[g] && r.occurrences(g) == 1)
            });
            let Some(g) = candidate else {
                if !r.is_empty() {
                    relators.push(r);
                }
                continue;
            };
            // rotate so that g leads: r ~ g^{±1}·W
            let letters = r.letters();
            let pos = letters.iter().position(|l| l.generator as usize == g).unwrap();
            let mut rot = letters[pos..].to_vec();
            rot.extend_from_slice(&letters[..pos]);
            let lead = rot[0];
            let rest_word = Word::new(rot[1..].to_vec());
            let value = if lead.inverse { rest_word } else { rest_word.inverse() };
            let mut images: Vec<Word> = (0..raw_count).map(Word::generator).collect();
            images[g] = value;
            for w in subst.iter_mut() {
                *w = w.substitute(&images);
            }
            for w in relators.iter_mut() {
                *w = w.substitute(&images).cyclically_reduced();
            }
            eliminated[g] = true;
        }

        let basis: Vec<usize> = (0..raw_count).filter(|&g| !eliminated[g]).collect();
        let mut rename = vec![Word::empty(); raw_count];
        for (i, &g) in basis.iter().enumerate() {
            rename[g] = Word::generator(i);
        }
        let raw_words = subst.iter().map(|w| w.substitute(&rename)).collect();
        let relators = relators.iter().map(|w| w.substitute(&rename)).collect();
        Presentation { raw_count, basis, raw_words, stable_gluings: rest, relators }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// The slot element, oriented with its pants on the left, as a basis word.
    pub fn slot_word(&self, s: Slot) -> Word {
        let x0 = &self.raw_words[2 * s.pants];
        let x1 = &self.raw_words[2 * s.pants + 1];
        match s.index {
            0 => x0.clone(),
            1 => x1.clone(),
            _ => x0.concat(x1).inverse(),
        }
    }

    pub fn hole_word(&self, pd: &PantsDecomposition, hole: Hole) -> Option<Word> {
        pd.hole_slot(hole).map(|s| self.slot_word(s))
    }

    /// Word of interior curve `e`, taken from the first slot of the gluing.
    pub fn interior_word(&self, pd: &PantsDecomposition, e: usize) -> Word {
        self.slot_word(pd.gluings[e].0)
    }

    pub fn letter_name(&self, g: usize) -> char {
        Letter::pos(g).symbol()
    }
}
