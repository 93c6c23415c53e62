//! The geometric side: points `x = t·x₀` of the slice `Z = T1·x₀`, modeled by
//! their torus coordinate `t`.
//!
//! If the states live in `∏ Z/mᵢ` (so a state is `s ∈ μ_m`), a slice point
//! `t` with `t² = s` lives in `∏ Z/2mᵢ`, and squaring becomes reduction mod
//! `mᵢ`. For the sign-matrix family that is `Z/4 → Z/2`: `i ↦ -1`,
//! `-1 ↦ 1`. The square root `a(n)` of a twist is only defined up to
//! 2-torsion, and `x` only depends on `t` modulo `T1 ∩ H`, so points are
//! compared modulo the *ambiguity* subgroup `K + 2·S`, where `K` is the
//! 2-torsion of `∏ Z/2mᵢ` and `2·S` the image of the states.

use serde::{Deserialize, Serialize};

use crate::abelian::{GroupElement, Quotient, SubgroupSpec, TorsionGroup};
use crate::action::{mod_inverse, Engine, OrbitOptions, OrbitSet, TwistedAction, TwistedGenerator};
use crate::error::{Error, Result};

/// A point `t` of the slice, over `∏ Z/2mᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlicePoint {
    t: GroupElement,
}

impl SlicePoint {
    /// Every modulus of `t`'s group must be even.
    pub fn new(t: GroupElement) -> Result<Self> {
        if t.group().moduli().iter().any(|m| m % 2 != 0) {
            return Err(Error::InvalidGroup(format!(
                "slice coordinates need even moduli, got {:?}",
                t.group().moduli()
            )));
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> &GroupElement {
        &self.t
    }
}

/// `∏ Z/2mᵢ` for states in `∏ Z/mᵢ`.
pub fn slice_ambient(states: &TorsionGroup) -> Result<TorsionGroup> {
    TorsionGroup::new(states.moduli().iter().map(|&m| 2 * m).collect())
}

fn state_ambient(slice: &TorsionGroup) -> Result<TorsionGroup> {
    TorsionGroup::new(slice.moduli().iter().map(|&m| m / 2).collect())
}

/// `s = t²`: each coordinate reduced mod `mᵢ`.
pub fn square_map(x: &SlicePoint) -> GroupElement {
    let states = state_ambient(x.t.group()).expect("halving keeps the order in range");
    let coords: Vec<i64> = x.t.coords().iter().map(|&c| i64::from(c)).collect();
    states.element(&coords).expect("same rank")
}

/// The canonical square root: each coordinate lifted to `0..mᵢ`, so `-1`
/// becomes `i` rather than `-i`.
pub fn sqrt_twist(c: &GroupElement) -> SlicePoint {
    let ambient = slice_ambient(c.group()).expect("doubling a valid group");
    let coords: Vec<i64> = c.coords().iter().map(|&v| i64::from(v)).collect();
    SlicePoint {
        t: ambient.element(&coords).expect("same rank"),
    }
}

/// Lift of a unit mod `m` to a unit mod `2m`, taking the signed
/// representative when possible so that `-1` lifts to `-1`.
fn lift_unit(u: u32, m: u32) -> i64 {
    let (u, m) = (i64::from(u), i64::from(m));
    let signed = if 2 * u > m { u - m } else { u };
    let lifted = signed.rem_euclid(2 * m);
    if mod_inverse(lifted as u32, (2 * m) as u32).is_some() {
        lifted
    } else {
        (lifted + m).rem_euclid(2 * m)
    }
}

/// The map `x = t·x₀ ↦ a(n)·(n t n⁻¹)·x₀` on slice coordinates.
pub fn slice_generator(n: &TwistedGenerator) -> Result<TwistedGenerator> {
    let moduli = n.ambient().moduli();
    let units = n
        .units()
        .iter()
        .zip(n.perm())
        .map(|(&u, &p)| lift_unit(u, moduli[p]))
        .collect();
    TwistedGenerator::new(n.label(), n.perm().to_vec(), units, sqrt_twist(n.twist()).t)
}

pub fn slice_action(n: &TwistedGenerator, x: &SlicePoint) -> Result<SlicePoint> {
    let lifted = slice_generator(n)?;
    lifted.ambient().check_same(x.t.group())?;
    SlicePoint::new(lifted.apply(&x.t)?)
}

/// The slice of a twisted action: all points whose square is a state, the
/// ambiguity subgroup, and the induced action.
#[derive(Debug, Clone)]
pub struct Slice {
    states: TwistedAction,
    action: TwistedAction,
    ambiguity: SubgroupSpec,
}

impl Slice {
    pub fn new(states: &TwistedAction) -> Result<Self> {
        let ambient = slice_ambient(states.ambient())?;
        let two_torsion = ambient.two_torsion()?;
        let lifts: Vec<GroupElement> = states
            .states()
            .generators()
            .iter()
            .map(|g| sqrt_twist(g).t)
            .collect();
        let mut point_gens = lifts.clone();
        point_gens.extend(two_torsion.generators().iter().cloned());
        let points = SubgroupSpec::generated(&ambient, point_gens)?;

        let mut ambiguity_gens: Vec<GroupElement> = two_torsion.generators().to_vec();
        ambiguity_gens.extend(lifts.iter().map(|t| t.scale(2)));
        let ambiguity = SubgroupSpec::generated(&ambient, ambiguity_gens)?;

        // Induced generators plus translations by the ambiguity subgroup, so
        // that orbits on points are full preimages of orbits on classes.
        let mut gens = states
            .generators()
            .iter()
            .map(slice_generator)
            .collect::<Result<Vec<_>>>()?;
        for (i, k) in ambiguity.generators().iter().enumerate() {
            gens.push(
                TwistedGenerator::identity(&ambient)
                    .with_label(format!("shift#{i}"))
                    .with_twist(k.clone())?,
            );
        }
        let action = TwistedAction::new(
            points,
            gens,
            format!("slice of {}", states.description()),
        )?;
        Ok(Self {
            states: states.clone(),
            action,
            ambiguity,
        })
    }

    pub fn ambient(&self) -> &TorsionGroup {
        self.action.ambient()
    }

    /// `{t : t² ∈ states}`.
    pub fn points(&self) -> &SubgroupSpec {
        self.action.states()
    }

    pub fn ambiguity(&self) -> &SubgroupSpec {
        &self.ambiguity
    }

    /// The induced action on points, including ambiguity translations.
    pub fn action(&self) -> &TwistedAction {
        &self.action
    }

    pub fn point(&self, t: GroupElement) -> Result<SlicePoint> {
        if !self.points().contains(&t) {
            return Err(Error::NotInSubgroup(t.coords().to_vec()));
        }
        SlicePoint::new(t)
    }

    /// Same as [`square_map`], reusing the state group.
    pub fn square(&self, x: &SlicePoint) -> Result<GroupElement> {
        let states = self.states.ambient();
        if x.t.group().rank() != states.rank() {
            return Err(Error::CoordinateCount {
                expected: states.rank(),
                got: x.t.group().rank(),
            });
        }
        let coords = x.t.coords().iter().zip(states.moduli()).map(|(&c, &m)| c % m).collect();
        Ok(states.element_from_reduced(coords))
    }

    /// Points modulo the ambiguity subgroup.
    pub fn classes(&self) -> Result<Quotient> {
        self.points().quotient(&self.ambiguity)
    }

    /// Orbits of the induced action on points; each is a union of
    /// ambiguity classes.
    pub fn orbits(&self) -> Result<OrbitSet> {
        // Most generators are translations; union-find skips their inverses.
        self.action.orbits_with(&OrbitOptions {
            engine: Engine::UnionFind,
            ..Default::default()
        })
    }

    /// States modulo squares, the target of the class-level square map.
    pub fn state_classes(&self) -> Result<Quotient> {
        let s = self.states.states();
        s.quotient(&s.squares()?)
    }

    /// Number of orbits of the torsion translations `K` on point classes
    /// modulo `T1 ∩ H`, i.e. `|points / (K + 2·S)|`.
    pub fn translation_orbit_count(&self) -> Result<usize> {
        Ok(self.classes()?.len())
    }
}

/// Signature `(positive, negative)` of a real diagonal quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignaturePair {
    pub pos: usize,
    pub neg: usize,
}

/// Signature of the form `t·x₀` whose square is `s`, for the `(p, q)`
/// family. Its `j`-th coefficient is `(-1)^{s_j}·εⱼ` with `εⱼ = -1` exactly
/// for `j > p`, so `t` itself is never needed.
pub fn signature(s: &GroupElement, p: usize, q: usize) -> Result<SignaturePair> {
    let n = p + q;
    let g = s.group();
    if g.rank() != n || g.moduli().iter().any(|&m| m != 2) || !s.weight().is_multiple_of(2) {
        return Err(Error::NotAState(s.coords().to_vec()));
    }
    let pos = s
        .coords()
        .iter()
        .enumerate()
        .filter(|&(j, &c)| (c == 1) == (j >= p))
        .count();
    Ok(SignaturePair { pos, neg: n - pos })
}

/// `(p - 2k, q + 2k)` for `0 ≤ 2k ≤ p`, then `(p + 2k, q - 2k)` for
/// `1 ≤ 2k ≤ q`: the signatures reachable from `(p, q)`.
pub fn realized_signatures(p: usize, q: usize) -> Vec<SignaturePair> {
    let mut out: Vec<SignaturePair> = (0..=p / 2)
        .map(|k| SignaturePair {
            pos: p - 2 * k,
            neg: q + 2 * k,
        })
        .collect();
    out.extend((1..=q / 2).map(|k| SignaturePair {
        pos: p + 2 * k,
        neg: q - 2 * k,
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_sl_so, build_z0_sl_so};

    fn el(moduli: u32, c: &[i64]) -> GroupElement {
        TorsionGroup::uniform(moduli, c.len()).unwrap().element(c).unwrap()
    }

    fn pt(c: &[i64]) -> SlicePoint {
        SlicePoint::new(el(4, c)).unwrap()
    }

    #[test]
    fn square_map_examples() {
        assert_eq!(square_map(&pt(&[1, 1, 0])), el(2, &[1, 1, 0]));
        assert!(square_map(&pt(&[0, 0, 0])).is_zero());
        assert!(square_map(&pt(&[2, 2, 0])).is_zero());
        assert_eq!(square_map(&pt(&[3, 2, 1])), el(2, &[1, 0, 1]));
    }

    #[test]
    fn sqrt_twist_examples() {
        let c = el(2, &[1, 1, 0]);
        let t = sqrt_twist(&c);
        assert_eq!(t.t(), &el(4, &[1, 1, 0]));
        assert_eq!(square_map(&t), c);
        assert!(sqrt_twist(&el(2, &[0, 0])).t().is_zero());
        for c in TorsionGroup::new(vec![2, 3, 4]).unwrap().full().unwrap().enumerate() {
            assert_eq!(square_map(&sqrt_twist(&c)), c);
        }
    }

    #[test]
    fn slice_action_examples() {
        let a = build_sl_so(2, 1).unwrap();
        let (swap, cross) = (&a.generators()[0], &a.generators()[1]);
        assert_eq!(slice_action(cross, &pt(&[0, 0, 0])).unwrap(), pt(&[0, 1, 1]));
        assert_eq!(slice_action(swap, &pt(&[1, 0, 1])).unwrap(), pt(&[0, 1, 1]));
        assert!(slice_action(swap, &pt(&[1, 0])).is_err());
    }

    #[test]
    fn unit_lifts() {
        assert_eq!(lift_unit(1, 2), 1);
        assert_eq!(lift_unit(3, 4), 7);
        assert_eq!(lift_unit(0, 1), 1);
        assert_eq!(lift_unit(2, 3), 5);
    }

    #[test]
    fn commuting_square_small() {
        for (p, q) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let a = build_sl_so(p, q).unwrap();
            let slice = Slice::new(&a).unwrap();
            for t in slice.points().enumerate() {
                let x = slice.point(t).unwrap();
                for n in a.generators() {
                    let lhs = square_map(&slice_action(n, &x).unwrap());
                    assert_eq!(lhs, n.apply(&square_map(&x)).unwrap());
                    assert_eq!(slice.square(&x).unwrap(), square_map(&x));
                }
            }
        }
    }

    #[test]
    fn class_counts() {
        let a = build_sl_so(2, 2).unwrap();
        let slice = Slice::new(&a).unwrap();
        assert_eq!(slice.points().order(), 8 * 16);
        assert_eq!(slice.classes().unwrap().len(), 8);
        assert_eq!(slice.orbits().unwrap().len(), a.orbits().unwrap().len());
        assert_eq!(slice.translation_orbit_count().unwrap(), build_z0_sl_so(2, 2).unwrap().orbits().unwrap().len());
    }

    #[test]
    fn slice_over_z4_states() {
        // States Z/4 with the inversion; the slice lives in Z/8.
        let g = TorsionGroup::uniform(4, 1).unwrap();
        let inv = TwistedGenerator::new("inv", vec![0], vec![-1], g.element(&[2]).unwrap()).unwrap();
        let a = TwistedAction::new(g.full().unwrap(), vec![inv], "").unwrap();
        let slice = Slice::new(&a).unwrap();
        assert_eq!(slice.points().order(), 8);
        // Ambiguity = {0,4} + 2·Z/4 lifted = {0,2,4,6}.
        assert_eq!(slice.ambiguity().order(), 4);
        assert_eq!(slice.classes().unwrap().len(), slice.state_classes().unwrap().len());
        let n = &a.generators()[0];
        for t in slice.points().enumerate() {
            let x = slice.point(t).unwrap();
            assert_eq!(square_map(&slice_action(n, &x).unwrap()), n.apply(&square_map(&x)).unwrap());
        }
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&el(2, &[0, 0, 0]), 2, 1).unwrap(), SignaturePair { pos: 2, neg: 1 });
        assert_eq!(signature(&el(2, &[1, 1, 0]), 2, 1).unwrap(), SignaturePair { pos: 0, neg: 3 });
        assert_eq!(signature(&el(2, &[0, 1, 1]), 2, 1).unwrap(), SignaturePair { pos: 2, neg: 1 });
        assert!(matches!(signature(&el(2, &[1, 0, 0]), 2, 1), Err(Error::NotAState(_))));
        assert!(matches!(signature(&el(2, &[0, 0]), 2, 1), Err(Error::NotAState(_))));
    }

    #[test]
    fn realized_signature_list() {
        let sigs: Vec<(usize, usize)> = realized_signatures(2, 3).iter().map(|s| (s.pos, s.neg)).collect();
        assert_eq!(sigs, [(2, 3), (0, 5), (4, 1)]);
    }
}
