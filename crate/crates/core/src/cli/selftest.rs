//! Invariant suites runnable from the command line.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::abelian::TorsionGroup;
use crate::action::{Engine, OrbitOptions, TwistedAction, TwistedGenerator};
use crate::error::Result;
use crate::families::{self, SlSoFamily};
use crate::slice::{realized_signatures, signature, square_map, Slice};

pub const SUITES: &[&str] = &[
    "abelian",
    "cocycle",
    "engine",
    "canonical",
    "signature",
    "borel-ji",
    "slice",
];

/// Slice checks touch `2^(2n-1)` points, so they stop earlier.
const SLICE_MAX_N: usize = 10;

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub max_n: usize,
    /// Build the sl-so family with its block-crossing twist zeroed.
    pub inject_fault: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            max_n: 12,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    /// First few failure messages.
    pub messages: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        if self.passed() {
            writeln!(s, "suite {:<10} {:>8} checks  ok", self.name, self.checks).unwrap();
        } else {
            writeln!(
                s,
                "suite {:<10} {:>8} checks  FAILED ({} failures)",
                self.name, self.checks, self.failures
            )
            .unwrap();
            for m in &self.messages {
                writeln!(s, "    {m}").unwrap();
            }
        }
        s
    }
}

struct Checker {
    result: SuiteResult,
}

impl Checker {
    fn new(name: &'static str) -> Self {
        Self {
            result: SuiteResult {
                name,
                checks: 0,
                failures: 0,
                messages: Vec::new(),
            },
        }
    }

    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.result.checks += 1;
        if !ok {
            self.result.failures += 1;
            if self.result.messages.len() < 8 {
                self.result.messages.push(message());
            }
        }
    }
}

fn pairs(max_n: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=max_n).flat_map(|n| (1..n).map(move |p| (p, n - p)))
}

fn family(p: usize, q: usize, config: &SelftestConfig) -> Result<TwistedAction> {
    let action = families::build_sl_so(p, q)?;
    Ok(if config.inject_fault {
        action.untwisted()
    } else {
        action
    })
}

pub fn run_suite(name: &str, config: &SelftestConfig) -> Result<SuiteResult> {
    let max_n = config.max_n.min(families::MAX_RANK);
    let mut c = Checker::new(SUITES.iter().copied().find(|s| *s == name).unwrap_or("unknown"));
    match name {
        "abelian" => abelian(&mut c, max_n)?,
        "cocycle" => cocycle(&mut c, max_n.min(8), config)?,
        "engine" => engine(&mut c, max_n, config)?,
        "canonical" => canonical(&mut c, max_n, config)?,
        "signature" => signatures(&mut c, max_n, config)?,
        "borel-ji" => borel_ji(&mut c, max_n, config)?,
        "slice" => slice(&mut c, max_n.min(SLICE_MAX_N), config)?,
        other => c.check(false, || format!("unknown suite {other:?}")),
    }
    Ok(c.result)
}

fn abelian(c: &mut Checker, max_n: usize) -> Result<()> {
    for n in 1..=max_n.min(10) {
        let f2 = families::even_weight_states(n)?;
        c.check(f2.order() == 1 << (n - 1), || format!("even-weight order for n={n}"));
        c.check(f2.squares()?.order() == 1, || format!("squares of F2^{n} not trivial"));
        let z4 = TorsionGroup::uniform(4, n)?;
        let full = z4.full()?;
        let tt = z4.two_torsion()?;
        c.check(tt.order() == 1 << n, || format!("2-torsion of (Z/4)^{n}"));
        c.check(full.squares()? == tt, || format!("squares of (Z/4)^{n} != 2-torsion"));
        if n <= 6 {
            let q = full.quotient(&tt)?;
            c.check(q.len() * tt.order() == full.order(), || "quotient order".into());
            for x in full.enumerate() {
                let p = q.project(&x)?;
                c.check(p <= x && q.project(&p)? == p, || format!("projection of {x}"));
                for k in tt.generators() {
                    c.check(q.project(&x.add(k)?)? == p, || format!("projection not constant on coset of {x}"));
                }
            }
        }
    }
    Ok(())
}

fn cocycle(c: &mut Checker, max_n: usize, config: &SelftestConfig) -> Result<()> {
    for (p, q) in pairs(max_n) {
        let action = family(p, q, config)?;
        let states = action.states().enumerate();
        let mut gens: Vec<TwistedGenerator> = action.generators().to_vec();
        gens.push(TwistedGenerator::identity(action.ambient()));
        for m in &gens {
            let inv = m.inverse()?;
            for s in &states {
                c.check(inv.apply(&m.apply(s)?)? == *s, || format!("{} inverse at {s}", m.label()));
            }
            for n in &gens {
                let mn = m.compose(n)?;
                for s in &states {
                    c.check(mn.apply(s)? == m.apply(&n.apply(s)?)?, || {
                        format!("({p},{q}) compose {}*{} at {s}", m.label(), n.label())
                    });
                }
            }
        }
    }
    Ok(())
}

fn engine(c: &mut Checker, max_n: usize, config: &SelftestConfig) -> Result<()> {
    for (p, q) in pairs(max_n) {
        let n = p + q;
        let actions = [
            family(p, q, config)?,
            families::build_plain_w0(p, q)?,
            families::build_plain_w00(p, q)?,
        ];
        for action in &actions {
            let states = action.states();
            if n <= 10 {
                for g in action.generators() {
                    let image: HashSet<_> = states.enumerate().iter().map(|s| g.apply(s)).collect::<Result<_>>()?;
                    c.check(image.len() == states.order() && image.iter().all(|x| states.contains(x)), || {
                        format!("{}: {} is not a bijection of the states", action.description(), g.label())
                    });
                }
            }
            let bfs = action.orbits()?;
            let uf = action.orbits_with(&OrbitOptions {
                engine: Engine::UnionFind,
                threads: 4,
                ..Default::default()
            })?;
            c.check(bfs == uf, || format!("{}: BFS and union-find disagree", action.description()));
            c.check(bfs.state_count() == states.order(), || {
                format!("{}: orbit sizes do not sum to the state count", action.description())
            });
            let reps: Vec<_> = bfs.orbits().iter().map(|o| o.representative().clone()).collect();
            c.check(reps.windows(2).all(|w| w[0] < w[1]), || "orbits not sorted".into());
            if n <= 8 {
                let mut seen = BTreeSet::new();
                for orbit in bfs.orbits() {
                    for m in orbit.members().unwrap_or_default() {
                        c.check(seen.insert(m.clone()), || format!("{m} in two orbits"));
                    }
                }
                for s in states.enumerate() {
                    let single = action.orbit_of(&s)?;
                    let idx = bfs.orbit_index_of(&s);
                    c.check(idx.is_some_and(|i| bfs.orbits()[i] == single), || {
                        format!("{}: orbit_of({s}) disagrees", action.description())
                    });
                }
            }
        }
    }
    Ok(())
}

fn canonical(c: &mut Checker, max_n: usize, config: &SelftestConfig) -> Result<()> {
    for (p, q) in pairs(max_n) {
        let fam = SlSoFamily::with_action(p, q, family(p, q, config)?)?;
        let orbits = fam.action().orbits()?;
        let expected = p / 2 + q / 2 + 1;
        c.check(orbits.len() == expected, || {
            format!("({p},{q}): {} orbits, expected {expected}", orbits.len())
        });
        for orbit in orbits.orbits() {
            let hits = fam
                .canonical_forms()
                .iter()
                .filter(|f| orbit.contains(f) == Some(true))
                .count();
            c.check(hits == 1, || {
                format!("({p},{q}): orbit of {} holds {hits} canonical forms", orbit.representative())
            });
        }
    }
    Ok(())
}

fn signatures(c: &mut Checker, max_n: usize, config: &SelftestConfig) -> Result<()> {
    for (p, q) in pairs(max_n) {
        let orbits = family(p, q, config)?.orbits()?;
        let mut per_orbit = Vec::new();
        for orbit in orbits.orbits() {
            let sigs: BTreeSet<_> = orbit
                .members()
                .unwrap_or_default()
                .iter()
                .map(|s| signature(s, p, q))
                .collect::<Result<_>>()?;
            c.check(sigs.len() == 1, || {
                format!("({p},{q}): signature varies on orbit of {}", orbit.representative())
            });
            per_orbit.extend(sigs.into_iter().next());
        }
        let distinct: BTreeSet<_> = per_orbit.iter().copied().collect();
        c.check(distinct.len() == per_orbit.len(), || format!("({p},{q}): two orbits share a signature"));
        let expected: BTreeSet<_> = realized_signatures(p, q).into_iter().collect();
        c.check(distinct == expected, || format!("({p},{q}): realized signatures {distinct:?}"));
    }
    Ok(())
}

fn borel_ji(c: &mut Checker, max_n: usize, config: &SelftestConfig) -> Result<()> {
    for (p, q) in pairs(max_n) {
        let twisted = family(p, q, config)?.orbits()?.len();
        let w00 = families::build_plain_w00(p, q)?.orbits()?.len();
        let formula = (0..=p)
            .flat_map(|a| (0..=q).map(move |b| a + b))
            .filter(|s| s % 2 == 0)
            .count();
        c.check(w00 == formula, || format!("({p},{q}): w00 count {w00}, expected {formula}"));
        if p + q >= 3 {
            c.check(w00 > twisted, || format!("({p},{q}): w00 {w00} <= twisted {twisted}"));
        }
    }
    Ok(())
}

fn slice(c: &mut Checker, max_n: usize, config: &SelftestConfig) -> Result<()> {
    for (p, q) in pairs(max_n) {
        let action = family(p, q, config)?;
        let sl = Slice::new(&action)?;
        let lifted: Vec<TwistedGenerator> = action
            .generators()
            .iter()
            .map(crate::slice::slice_generator)
            .collect::<Result<_>>()?;
        for t in sl.points().enumerate() {
            let x = sl.point(t)?;
            let s = sl.square(&x)?;
            for (n, l) in action.generators().iter().zip(&lifted) {
                let lhs = sl.square(&sl.point(l.apply(x.t())?)?)?;
                c.check(lhs == n.apply(&s)?, || format!("({p},{q}) square fails to commute at {}", x.t()));
            }
        }
        let classes = sl.classes()?;
        let targets = sl.state_classes()?;
        c.check(classes.len() == targets.len(), || format!("({p},{q}): class counts differ"));
        let images: HashSet<usize> = classes
            .representatives()
            .iter()
            .map(|t| targets.coset_id(&square_map(&sl.point(t.clone())?)))
            .collect::<Result<_>>()?;
        c.check(images.len() == classes.len(), || format!("({p},{q}): square map not injective on classes"));
        let n0 = action.orbits()?.len();
        let geometric = sl.orbits()?.len();
        c.check(n0 == geometric, || format!("({p},{q}): {geometric} slice orbits vs {n0}"));
        let z0 = families::build_z0_sl_so(p, q)?.orbits()?.len();
        c.check(z0 == sl.translation_orbit_count()?, || format!("({p},{q}): Z0 vs torus orbit counts"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_small_rank() {
        let config = SelftestConfig { max_n: 6, inject_fault: false };
        for name in SUITES {
            let r = run_suite(name, &config).unwrap();
            assert!(r.passed(), "{}", r.summary());
            assert!(r.checks > 0);
        }
    }

    #[test]
    fn zeroed_crossing_twist_breaks_signature_suite() {
        let config = SelftestConfig { max_n: 6, inject_fault: true };
        assert!(!run_suite("signature", &config).unwrap().passed());
        assert!(run_suite("cocycle", &config).unwrap().passed());
    }
}
