//! Randomized actions on small mixed groups, checked against a naive
//! closure-based orbit computation.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use real_orbits::{
    Engine, GroupElement, OrbitOptions, OrbitSet, SubgroupSpec, TorsionGroup, TwistedAction,
    TwistedGenerator,
};

/// A random group, states = full group, and generators with random
/// modulus-respecting permutations, unit multipliers and twists.
fn arb_action() -> impl Strategy<Value = TwistedAction> {
    let moduli = prop::collection::vec(prop::sample::select(vec![2u32, 3, 4, 6, 8]), 1..=5);
    (moduli, any::<u64>(), 0usize..4).prop_map(|(moduli, seed, ngens)| {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = TorsionGroup::new(moduli.clone()).unwrap();
        let gens = (0..ngens)
            .map(|k| {
                // Permute within blocks of equal modulus.
                let mut perm: Vec<usize> = (0..moduli.len()).collect();
                for i in (1..perm.len()).rev() {
                    let j = rng.gen_range(0..=i);
                    if moduli[perm[i]] == moduli[perm[j]] {
                        perm.swap(i, j);
                    }
                }
                let units = perm
                    .iter()
                    .map(|&p| {
                        let m = moduli[p];
                        loop {
                            let u = rng.gen_range(1..m.max(2));
                            if gcd(u, m) == 1 {
                                break i64::from(u);
                            }
                        }
                    })
                    .collect();
                let twist: Vec<i64> = moduli.iter().map(|&m| i64::from(rng.gen_range(0..m))).collect();
                TwistedGenerator::new(format!("g{k}"), perm, units, g.element(&twist).unwrap()).unwrap()
            })
            .collect();
        TwistedAction::new(g.full().unwrap(), gens, "random").unwrap()
    })
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Orbits by repeated relabelling to the smallest reachable element.
fn naive_partition(action: &TwistedAction) -> BTreeSet<BTreeSet<GroupElement>> {
    let states = action.states().enumerate();
    let mut label: BTreeMap<GroupElement, GroupElement> =
        states.iter().map(|s| (s.clone(), s.clone())).collect();
    loop {
        let mut changed = false;
        for s in &states {
            for g in action.generators() {
                let t = g.apply(s).unwrap();
                let (ls, lt) = (label[s].clone(), label[&t].clone());
                let m = ls.clone().min(lt.clone());
                if ls != m {
                    label.insert(s.clone(), m.clone());
                    changed = true;
                }
                if lt != m {
                    label.insert(t, m);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut parts: BTreeMap<GroupElement, BTreeSet<GroupElement>> = BTreeMap::new();
    for (s, l) in label {
        parts.entry(l).or_default().insert(s);
    }
    parts.into_values().collect()
}

fn partition(o: &OrbitSet) -> BTreeSet<BTreeSet<GroupElement>> {
    o.orbits()
        .iter()
        .map(|orbit| orbit.members().unwrap().into_iter().collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_are_bijections(action in arb_action()) {
        let states = action.states().enumerate();
        for g in action.generators() {
            let image: BTreeSet<_> = states.iter().map(|s| g.apply(s).unwrap()).collect();
            prop_assert_eq!(image.len(), states.len());
            let inv = g.inverse().unwrap();
            for s in &states {
                prop_assert_eq!(&inv.apply(&g.apply(s).unwrap()).unwrap(), s);
            }
        }
    }

    #[test]
    fn compose_matches_sequential_apply(action in arb_action()) {
        for a in action.generators() {
            for b in action.generators() {
                let ab = a.compose(b).unwrap();
                for s in action.states().enumerate() {
                    prop_assert_eq!(ab.apply(&s).unwrap(), a.apply(&b.apply(&s).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn engines_match_naive_partition(action in arb_action()) {
        let expected = naive_partition(&action);
        let bfs = action.orbits().unwrap();
        prop_assert_eq!(partition(&bfs), expected);
        for threads in [1, 3] {
            let uf = action.orbits_with(&OrbitOptions {
                engine: Engine::UnionFind,
                threads,
                ..Default::default()
            }).unwrap();
            prop_assert_eq!(&uf, &bfs);
        }
        prop_assert_eq!(bfs.state_count(), action.states().order());
        for orbit in bfs.orbits() {
            let members = orbit.members().unwrap();
            prop_assert_eq!(&members[0], orbit.representative());
            prop_assert_eq!(members.len(), orbit.size());
        }
    }

    #[test]
    fn orbit_of_agrees_with_partition(action in arb_action(), pick in any::<prop::sample::Index>()) {
        let states = action.states().enumerate();
        let s = pick.get(&states);
        let all = action.orbits().unwrap();
        let i = all.orbit_index_of(s).unwrap();
        prop_assert_eq!(&action.orbit_of(s).unwrap(), &all.orbits()[i]);
    }
}

#[test]
fn subgroup_states_are_respected() {
    // Translations by (1,1) on (Z/2)^2 restricted to the diagonal subgroup.
    let g = TorsionGroup::uniform(2, 2).unwrap();
    let diag = SubgroupSpec::generated(&g, vec![g.element(&[1, 1]).unwrap()]).unwrap();
    let shift = TwistedGenerator::identity(&g).with_twist(g.element(&[1, 1]).unwrap()).unwrap();
    let action = TwistedAction::new(diag, vec![shift], "diagonal shift").unwrap();
    let orbits = action.orbits().unwrap();
    assert_eq!(orbits.len(), 1);
    assert_eq!(orbits.orbits()[0].size(), 2);
}
