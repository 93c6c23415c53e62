//! Finite abelian groups `∏ Z/mᵢ` in additive notation.
//!
//! These model the torsion points of a compact torus `(S¹)ʳ`: a sign matrix
//! `diag(±1, …)` is an `F₂` vector (`-1 ↔ 1`), and a `μ₄` entry is a `Z/4`
//! coordinate (`i ↔ 1`, `-1 ↔ 2`, `-i ↔ 3`).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::codes::{CodeSet, Layout, StateIndex};
use crate::error::{Error, Result};

/// Default cap on the number of elements any enumeration may materialize.
pub const DEFAULT_LIMIT: usize = 1 << 24;

/// The group `Z/m₁ × … × Z/m_r`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TorsionGroup {
    layout: Arc<Layout>,
}

impl TorsionGroup {
    /// Every modulus must be at least 1 and the order must fit in 64 bits.
    pub fn new(moduli: Vec<u32>) -> Result<Self> {
        if let Some(pos) = moduli.iter().position(|&m| m == 0) {
            return Err(Error::InvalidGroup(format!("modulus {pos} is zero")));
        }
        let layout = Layout::new(&moduli).ok_or_else(|| {
            Error::InvalidGroup(format!("order of {moduli:?} does not fit in 64 bits"))
        })?;
        Ok(Self {
            layout: Arc::new(layout),
        })
    }

    /// `(Z/m)^rank`.
    pub fn uniform(modulus: u32, rank: usize) -> Result<Self> {
        Self::new(vec![modulus; rank])
    }

    pub fn moduli(&self) -> &[u32] {
        self.layout.moduli()
    }

    pub fn rank(&self) -> usize {
        self.moduli().len()
    }

    pub fn order(&self) -> u64 {
        self.layout.order()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: vec![0; self.rank()],
        }
    }

    /// Builds an element from arbitrary integers, reducing each mod `mᵢ`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::CoordinateCount {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        let coords = coords
            .iter()
            .zip(self.moduli())
            .map(|(&c, &m)| c.rem_euclid(i64::from(m)) as u32)
            .collect();
        Ok(GroupElement {
            group: self.clone(),
            coords,
        })
    }

    /// The `i`-th standard generator `eᵢ`.
    pub fn basis(&self, i: usize) -> GroupElement {
        let mut e = self.zero();
        e.coords[i] = 1 % self.moduli()[i];
        e
    }

    /// The whole group as a subgroup of itself.
    pub fn full(&self) -> Result<SubgroupSpec> {
        SubgroupSpec::generated(self, (0..self.rank()).map(|i| self.basis(i)).collect())
    }

    /// Elements of order at most two: `{v : 2v = 0}`.
    pub fn two_torsion(&self) -> Result<SubgroupSpec> {
        let gens = self
            .moduli()
            .iter()
            .enumerate()
            .filter(|(_, &m)| m % 2 == 0)
            .map(|(i, &m)| {
                let mut e = self.zero();
                e.coords[i] = m / 2;
                e
            })
            .collect();
        SubgroupSpec::generated(self, gens)
    }

    pub(crate) fn layout(&self) -> &Layout {
        &self.layout
    }

    pub(crate) fn element_from_code(&self, code: u64) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: self.layout.decode(code),
        }
    }

    /// Wraps coordinates already reduced modulo each `mᵢ`.
    pub(crate) fn element_from_reduced(&self, coords: Vec<u32>) -> GroupElement {
        debug_assert!(coords.len() == self.rank());
        debug_assert!(coords.iter().zip(self.moduli()).all(|(c, m)| c < m));
        GroupElement {
            group: self.clone(),
            coords,
        }
    }

    pub(crate) fn check_same(&self, other: &TorsionGroup) -> Result<()> {
        if Arc::ptr_eq(&self.layout, &other.layout) || self.moduli() == other.moduli() {
            Ok(())
        } else {
            Err(Error::AmbientMismatch {
                left: self.moduli().to_vec(),
                right: other.moduli().to_vec(),
            })
        }
    }
}

impl fmt::Debug for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorsionGroup{:?}", self.moduli())
    }
}

/// An element of a [`TorsionGroup`], coordinates always reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: TorsionGroup,
    coords: Vec<u32>,
}

impl GroupElement {
    pub fn group(&self) -> &TorsionGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.group.check_same(&other.group)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.group.moduli())
            .map(|((&a, &b), &m)| ((u64::from(a) + u64::from(b)) % u64::from(m)) as u32)
            .collect();
        Ok(GroupElement {
            group: self.group.clone(),
            coords,
        })
    }

    pub fn neg(&self) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.moduli())
            .map(|(&a, &m)| (m - a) % m)
            .collect();
        GroupElement {
            group: self.group.clone(),
            coords,
        }
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.add(&other.neg())
    }

    /// `k · self`.
    pub fn scale(&self, k: i64) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.moduli())
            .map(|(&a, &m)| (i128::from(a) * i128::from(k)).rem_euclid(i128::from(m)) as u32)
            .collect();
        GroupElement {
            group: self.group.clone(),
            coords,
        }
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.coords.iter().filter(|&&c| c != 0).count()
    }

    pub(crate) fn code(&self) -> u64 {
        self.group.layout.encode(&self.coords)
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on coordinates; ties (different groups) broken by moduli.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords
            .cmp(&other.coords)
            .then_with(|| self.group.moduli().cmp(other.group.moduli()))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} mod {:?}", self.group.moduli())
    }
}

/// A subgroup given by generators, with its elements materialized (sorted,
/// duplicate-free) at construction.
#[derive(Clone)]
pub struct SubgroupSpec {
    ambient: TorsionGroup,
    generators: Vec<GroupElement>,
    codes: Arc<Vec<u64>>,
}

impl SubgroupSpec {
    /// Closure of `generators` under addition, capped at [`DEFAULT_LIMIT`].
    pub fn generated(ambient: &TorsionGroup, generators: Vec<GroupElement>) -> Result<Self> {
        Self::generated_with_limit(ambient, generators, DEFAULT_LIMIT)
    }

    pub fn generated_with_limit(
        ambient: &TorsionGroup,
        generators: Vec<GroupElement>,
        limit: usize,
    ) -> Result<Self> {
        for g in &generators {
            ambient.check_same(g.group())?;
        }
        let codes = closure(ambient, &generators, limit)?;
        Ok(Self {
            ambient: ambient.clone(),
            generators,
            codes: Arc::new(codes),
        })
    }

    /// The trivial subgroup `{0}`.
    pub fn trivial(ambient: &TorsionGroup) -> Self {
        Self {
            ambient: ambient.clone(),
            generators: Vec::new(),
            codes: Arc::new(vec![0]),
        }
    }

    pub fn ambient(&self) -> &TorsionGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.codes.len()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.ambient.check_same(x.group()).is_ok() && self.codes.binary_search(&x.code()).is_ok()
    }

    /// Sorted element list.
    pub fn enumerate(&self) -> Vec<GroupElement> {
        self.codes
            .iter()
            .map(|&c| self.ambient.element_from_code(c))
            .collect()
    }

    /// Like [`enumerate`](Self::enumerate) but refuses subgroups larger than
    /// `limit`.
    pub fn enumerate_with_limit(&self, limit: usize) -> Result<Vec<GroupElement>> {
        if self.order() > limit {
            return Err(Error::LimitExceeded { limit });
        }
        Ok(self.enumerate())
    }

    /// `{2s : s ∈ S}`.
    pub fn squares(&self) -> Result<SubgroupSpec> {
        let gens = self.generators.iter().map(|g| g.scale(2)).collect();
        SubgroupSpec::generated(&self.ambient, gens)
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &SubgroupSpec) -> bool {
        self.ambient.check_same(&other.ambient).is_ok()
            && self.generators.iter().all(|g| other.contains(g))
    }

    /// Coset representatives of `self / sub` and the projection onto them.
    pub fn quotient(&self, sub: &SubgroupSpec) -> Result<Quotient> {
        self.ambient.check_same(&sub.ambient)?;
        if !sub.is_subgroup_of(self) {
            return Err(Error::NotASubgroup(
                "divisor is not contained in the subgroup".into(),
            ));
        }
        let layout = self.ambient.layout();
        let index = StateIndex::build(&self.codes, layout.order());
        let mut scratch = layout.scratch();
        let mut coset = vec![u32::MAX; self.codes.len()];
        let mut reps = Vec::with_capacity(self.codes.len() / sub.codes.len());
        // Iterating in sorted order makes each fresh element the least of its coset.
        for (i, &s) in self.codes.iter().enumerate() {
            if coset[i] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(s);
            for &n in sub.codes.iter() {
                let j = index
                    .get(layout.add(s, n, &mut scratch))
                    .ok_or_else(|| Error::Internal("coset escaped the subgroup".into()))?;
                coset[j] = id;
            }
        }
        Ok(Quotient {
            subgroup: self.clone(),
            reps,
            coset,
        })
    }

    pub(crate) fn codes(&self) -> &[u64] {
        &self.codes
    }
}

impl fmt::Debug for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupSpec")
            .field("ambient", &self.ambient)
            .field("generators", &self.generators)
            .field("order", &self.order())
            .finish()
    }
}

/// Equal when they contain the same elements, whatever the generators.
impl PartialEq for SubgroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.codes == other.codes
    }
}

impl Eq for SubgroupSpec {}

/// Result of [`SubgroupSpec::quotient`].
pub struct Quotient {
    subgroup: SubgroupSpec,
    reps: Vec<u64>,
    /// Coset id of every subgroup element, aligned with its sorted codes.
    coset: Vec<u32>,
}

impl Quotient {
    /// Lexicographically least element of each coset, sorted.
    pub fn representatives(&self) -> Vec<GroupElement> {
        let ambient = self.subgroup.ambient();
        self.reps.iter().map(|&c| ambient.element_from_code(c)).collect()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Representative of the coset containing `s`.
    pub fn project(&self, s: &GroupElement) -> Result<GroupElement> {
        let id = self.coset_id(s)?;
        Ok(self.subgroup.ambient().element_from_code(self.reps[id]))
    }

    /// Index of the coset containing `s` into [`representatives`](Self::representatives).
    pub fn coset_id(&self, s: &GroupElement) -> Result<usize> {
        self.subgroup.ambient().check_same(s.group())?;
        let i = self
            .subgroup
            .codes()
            .binary_search(&s.code())
            .map_err(|_| Error::NotInSubgroup(s.coords().to_vec()))?;
        Ok(self.coset[i] as usize)
    }
}

/// Sorted closure of `generators`, built one cyclic extension at a time so
/// the work is linear in the size of the result.
fn closure(ambient: &TorsionGroup, generators: &[GroupElement], limit: usize) -> Result<Vec<u64>> {
    let layout = ambient.layout();
    let mut scratch = layout.scratch();
    let mut seen = CodeSet::for_universe(layout.order());
    seen.insert(0);
    let mut elems = vec![0u64];
    for g in generators {
        let g = g.code();
        if seen.contains(g) {
            continue;
        }
        // S' = S ∪ (S+g) ∪ (S+2g) ∪ … until the multiple of g falls back in S.
        let base = elems.len();
        let mut shift = g;
        while !seen.contains(shift) {
            if elems.len() + base > limit {
                return Err(Error::LimitExceeded { limit });
            }
            for k in 0..base {
                let x = layout.add(elems[k], shift, &mut scratch);
                seen.insert(x);
                elems.push(x);
            }
            shift = layout.add(shift, g, &mut scratch);
        }
    }
    elems.sort_unstable();
    Ok(elems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn g(moduli: &[u32]) -> TorsionGroup {
        TorsionGroup::new(moduli.to_vec()).unwrap()
    }

    fn el(group: &TorsionGroup, coords: &[i64]) -> GroupElement {
        group.element(coords).unwrap()
    }

    fn even_weight(rank: usize) -> SubgroupSpec {
        let grp = TorsionGroup::uniform(2, rank).unwrap();
        let gens = (0..rank - 1)
            .map(|i| grp.basis(i).add(&grp.basis(i + 1)).unwrap())
            .collect();
        SubgroupSpec::generated(&grp, gens).unwrap()
    }

    fn coords(xs: &[GroupElement]) -> Vec<Vec<u32>> {
        xs.iter().map(|x| x.coords().to_vec()).collect()
    }

    /// Repeatedly add generators until nothing new appears.
    fn naive_closure(grp: &TorsionGroup, gens: &[GroupElement]) -> BTreeSet<Vec<u32>> {
        let mut set: BTreeSet<Vec<u32>> = [grp.zero().coords().to_vec()].into();
        loop {
            let mut next = set.clone();
            for x in &set {
                let x = grp.element(&x.iter().map(|&c| c as i64).collect::<Vec<_>>()).unwrap();
                for g in gens {
                    next.insert(x.add(g).unwrap().coords().to_vec());
                }
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    #[test]
    fn add_examples() {
        let f2 = g(&[2, 2, 2]);
        assert_eq!(el(&f2, &[1, 1, 0]).add(&el(&f2, &[0, 1, 1])).unwrap().coords(), [1, 0, 1]);
        let z4 = g(&[4, 4]);
        assert_eq!(el(&z4, &[3, 2]).add(&el(&z4, &[1, 2])).unwrap().coords(), [0, 0]);
        let x = el(&z4, &[3, 1]);
        assert_eq!(x.add(&z4.zero()).unwrap(), x);
    }

    #[test]
    fn add_rejects_mismatched_ambients() {
        let a = el(&g(&[2, 2]), &[1, 0]);
        let b = el(&g(&[4, 4]), &[1, 0]);
        assert!(matches!(a.add(&b), Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn neg_examples() {
        assert_eq!(el(&g(&[2, 2]), &[1, 0]).neg().coords(), [1, 0]);
        assert_eq!(el(&g(&[4, 4]), &[1, 3]).neg().coords(), [3, 1]);
        assert!(g(&[4, 4]).zero().neg().is_zero());
    }

    #[test]
    fn element_reduces_coordinates() {
        assert_eq!(el(&g(&[4, 3]), &[-1, 7]).coords(), [3, 1]);
        assert!(matches!(
            g(&[4, 3]).element(&[1]),
            Err(Error::CoordinateCount { expected: 2, got: 1 })
        ));
        assert!(TorsionGroup::new(vec![2, 0]).is_err());
    }

    #[test]
    fn two_torsion_examples() {
        let t = g(&[4, 4]).two_torsion().unwrap();
        assert_eq!(coords(&t.enumerate()), [[0, 0], [0, 2], [2, 0], [2, 2]]);
        assert_eq!(g(&[2, 2, 2]).two_torsion().unwrap().order(), 8);
        assert_eq!(g(&[3]).two_torsion().unwrap().order(), 1);
        assert_eq!(g(&[2, 3, 4, 5]).two_torsion().unwrap().order(), 4);
    }

    #[test]
    fn squares_examples() {
        let z4 = g(&[4, 4]);
        let sq = z4.full().unwrap().squares().unwrap();
        assert_eq!(sq, z4.two_torsion().unwrap());
        assert_eq!(even_weight(5).squares().unwrap().order(), 1);
        assert_eq!(SubgroupSpec::trivial(&z4).squares().unwrap().order(), 1);
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            coords(&even_weight(3).enumerate()),
            [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]
        );
        let z4 = g(&[4]);
        let half = SubgroupSpec::generated(&z4, vec![el(&z4, &[2])]).unwrap();
        assert_eq!(coords(&half.enumerate()), [[0], [2]]);
        assert_eq!(coords(&SubgroupSpec::trivial(&z4).enumerate()), [[0]]);
    }

    #[test]
    fn limit_is_enforced() {
        let big = g(&[2; 12]);
        let err = SubgroupSpec::generated_with_limit(&big, (0..12).map(|i| big.basis(i)).collect(), 1000);
        assert!(matches!(err, Err(Error::LimitExceeded { limit: 1000 })));
        let s = even_weight(4);
        assert!(s.enumerate_with_limit(8).is_ok());
        assert!(matches!(s.enumerate_with_limit(7), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn quotient_examples() {
        let s = even_weight(3);
        let q = s.quotient(&SubgroupSpec::trivial(s.ambient())).unwrap();
        assert_eq!(q.len(), 4);

        let z4 = g(&[4]);
        let full = z4.full().unwrap();
        let half = SubgroupSpec::generated(&z4, vec![el(&z4, &[2])]).unwrap();
        let q = full.quotient(&half).unwrap();
        assert_eq!(coords(&q.representatives()), [[0], [1]]);
        assert_eq!(q.project(&el(&z4, &[3])).unwrap().coords(), [1]);
        assert_eq!(q.project(&el(&z4, &[2])).unwrap().coords(), [0]);

        let q = s.quotient(&s).unwrap();
        assert_eq!(coords(&q.representatives()), [[0, 0, 0]]);
    }

    #[test]
    fn quotient_requires_containment() {
        let z4 = g(&[4]);
        let half = SubgroupSpec::generated(&z4, vec![el(&z4, &[2])]).unwrap();
        let full = z4.full().unwrap();
        assert!(matches!(half.quotient(&full), Err(Error::NotASubgroup(_))));
    }

    fn arb_group_and_gens() -> impl Strategy<Value = (Vec<u32>, Vec<Vec<i64>>)> {
        prop::collection::vec(prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 8]), 1..5).prop_flat_map(
            |moduli| {
                let r = moduli.len();
                (
                    Just(moduli),
                    prop::collection::vec(prop::collection::vec(0i64..8, r), 0..4),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn group_laws((moduli, gens) in arb_group_and_gens()) {
            let grp = g(&moduli);
            let xs: Vec<_> = gens.iter().map(|c| el(&grp, c)).collect();
            for a in &xs {
                prop_assert_eq!(a.neg().neg(), a.clone());
                prop_assert!(a.add(&a.neg()).unwrap().is_zero());
                prop_assert_eq!(a.add(&grp.zero()).unwrap(), a.clone());
                for b in &xs {
                    prop_assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                    for c in &xs {
                        prop_assert_eq!(a.add(b).unwrap().add(c).unwrap(), a.add(&b.add(c).unwrap()).unwrap());
                    }
                }
            }
        }

        #[test]
        fn closure_matches_naive((moduli, gens) in arb_group_and_gens()) {
            let grp = g(&moduli);
            let xs: Vec<_> = gens.iter().map(|c| el(&grp, c)).collect();
            let s = SubgroupSpec::generated(&grp, xs.clone()).unwrap();
            let listed: Vec<Vec<u32>> = coords(&s.enumerate());
            let naive: Vec<Vec<u32>> = naive_closure(&grp, &xs).into_iter().collect();
            prop_assert_eq!(listed, naive);
            // Closed under addition and negation.
            let elems = s.enumerate();
            for a in elems.iter().take(16) {
                prop_assert!(s.contains(&a.neg()));
                for b in elems.iter().take(16) {
                    prop_assert!(s.contains(&a.add(b).unwrap()));
                }
            }
            prop_assert!(s.squares().unwrap().is_subgroup_of(&s));
            prop_assert!(grp.two_torsion().unwrap().enumerate().iter().all(|x| x.scale(2).is_zero()));
        }

        #[test]
        fn quotient_laws((moduli, gens) in arb_group_and_gens(), pick in 0usize..4) {
            let grp = g(&moduli);
            let xs: Vec<_> = gens.iter().map(|c| el(&grp, c)).collect();
            let s = SubgroupSpec::generated(&grp, xs.clone()).unwrap();
            let n = SubgroupSpec::generated(&grp, xs.iter().take(pick).map(|x| x.scale(2)).collect()).unwrap();
            let q = s.quotient(&n).unwrap();
            prop_assert_eq!(s.order(), n.order() * q.len());
            let reps = q.representatives();
            let mut sorted = reps.clone();
            sorted.sort();
            prop_assert_eq!(&sorted, &reps);
            for x in s.enumerate() {
                let p = q.project(&x).unwrap();
                prop_assert!(p <= x);
                prop_assert_eq!(q.project(&p).unwrap(), p.clone());
                for m in n.enumerate().iter().take(8) {
                    prop_assert_eq!(q.project(&x.add(m).unwrap()).unwrap(), p.clone());
                }
            }
        }
    }
}
