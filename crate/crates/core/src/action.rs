//! Twisted (affine monomial) actions on a subgroup of a [`TorsionGroup`] and
//! exact orbit enumeration.
//!
//! A generator `n` acts by `s ↦ L(s) + c`, where `L` is the monomial map
//! induced by conjugation with `n` and `c = c(n)` is its twist, the value of
//! the cocycle `n σ(n)⁻¹`. Composition follows the cocycle law
//! `c(mn) = c(m) + L_m(c(n))`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::abelian::{GroupElement, SubgroupSpec, TorsionGroup, DEFAULT_LIMIT};
use crate::codes::{Bitmap, Layout, StateIndex};
use crate::error::{Error, Result};

/// A monomial linear map followed by a translation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwistedGenerator {
    label: String,
    /// Coordinate `i` is sent to position `perm[i]` (0-based).
    perm: Vec<usize>,
    /// `units[i]` scales coordinate `i`, reduced mod the target modulus.
    units: Vec<u32>,
    twist: GroupElement,
}

impl TwistedGenerator {
    /// `perm` is 0-based; units are reduced modulo the modulus of the target
    /// coordinate. Only shapes are checked here, invertibility is reported by
    /// [`TwistedAction::validate`].
    pub fn new(
        label: impl Into<String>,
        perm: Vec<usize>,
        units: Vec<i64>,
        twist: GroupElement,
    ) -> Result<Self> {
        let ambient = twist.group();
        let r = ambient.rank();
        let label = label.into();
        if perm.len() != r || units.len() != r {
            return Err(Error::InvalidGenerator(format!(
                "{label}: permutation and units need {r} entries, got {} and {}",
                perm.len(),
                units.len()
            )));
        }
        if let Some(&bad) = perm.iter().find(|&&p| p >= r) {
            return Err(Error::InvalidGenerator(format!(
                "{label}: permutation image {bad} out of range"
            )));
        }
        let units = units
            .iter()
            .zip(&perm)
            .map(|(&u, &p)| u.rem_euclid(i64::from(ambient.moduli()[p])) as u32)
            .collect();
        Ok(Self {
            label,
            perm,
            units,
            twist,
        })
    }

    pub fn identity(ambient: &TorsionGroup) -> Self {
        let r = ambient.rank();
        Self {
            label: "id".into(),
            perm: (0..r).collect(),
            units: ambient.moduli().iter().map(|&m| 1 % m).collect(),
            twist: ambient.zero(),
        }
    }

    /// Swap of coordinates `i` and `j` (0-based) with unit scalars, then
    /// translation by `twist`.
    pub fn transposition(label: impl Into<String>, i: usize, j: usize, twist: GroupElement) -> Result<Self> {
        let r = twist.group().rank();
        if i >= r || j >= r {
            return Err(Error::InvalidGenerator(format!(
                "transposition ({i},{j}) out of range for rank {r}"
            )));
        }
        let mut perm: Vec<usize> = (0..r).collect();
        perm.swap(i, j);
        Self::new(label, perm, vec![1; r], twist)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn units(&self) -> &[u32] {
        &self.units
    }

    pub fn twist(&self) -> &GroupElement {
        &self.twist
    }

    pub fn ambient(&self) -> &TorsionGroup {
        self.twist.group()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_twist(mut self, twist: GroupElement) -> Result<Self> {
        self.ambient().check_same(twist.group())?;
        self.twist = twist;
        Ok(self)
    }

    /// The linear part `L(s)`.
    pub fn linear(&self, s: &GroupElement) -> Result<GroupElement> {
        let ambient = self.ambient();
        ambient.check_same(s.group())?;
        let moduli = ambient.moduli();
        let mut out = vec![0i64; moduli.len()];
        for (i, (&p, &u)) in self.perm.iter().zip(&self.units).enumerate() {
            out[p] = (u64::from(u) * u64::from(s.coords()[i]) % u64::from(moduli[p])) as i64;
        }
        ambient.element(&out)
    }

    /// `L(s) + twist`.
    pub fn apply(&self, s: &GroupElement) -> Result<GroupElement> {
        let ambient = self.ambient();
        ambient.check_same(s.group())?;
        let moduli = ambient.moduli();
        let twist = self.twist.coords();
        let mut out = vec![0u32; moduli.len()];
        for (i, (&p, &u)) in self.perm.iter().zip(&self.units).enumerate() {
            let m = u64::from(moduli[p]);
            out[p] = ((u64::from(u) * u64::from(s.coords()[i]) + u64::from(twist[p])) % m) as u32;
        }
        Ok(ambient.element_from_reduced(out))
    }

    /// `self ∘ other`: linear part `L_self ∘ L_other`, twist
    /// `twist(self) + L_self(twist(other))`.
    pub fn compose(&self, other: &TwistedGenerator) -> Result<TwistedGenerator> {
        let ambient = self.ambient();
        ambient.check_same(other.ambient())?;
        let moduli = ambient.moduli();
        let perm: Vec<usize> = other.perm.iter().map(|&p| self.perm[p]).collect();
        let units = other
            .perm
            .iter()
            .zip(&other.units)
            .map(|(&p, &u)| {
                let m = u64::from(moduli[self.perm[p]]);
                ((u64::from(self.units[p]) * u64::from(u)) % m) as i64
            })
            .collect();
        let twist = self.twist.add(&self.linear(&other.twist)?)?;
        TwistedGenerator::new(format!("{}*{}", self.label, other.label), perm, units, twist)
    }

    /// The inverse map `s ↦ L⁻¹(s - twist)`.
    pub fn inverse(&self) -> Result<TwistedGenerator> {
        let issues = self.invertibility_issues();
        if !issues.is_empty() {
            return Err(Error::InvalidGenerator(format!(
                "{}: {}",
                self.label,
                issues.join("; ")
            )));
        }
        let ambient = self.ambient();
        let r = ambient.rank();
        let mut perm = vec![0; r];
        let mut units = vec![0i64; r];
        for (i, (&p, &u)) in self.perm.iter().zip(&self.units).enumerate() {
            perm[p] = i;
            units[p] = i64::from(mod_inverse(u, ambient.moduli()[p]).expect("checked unit"));
        }
        let lin = TwistedGenerator::new("", perm.clone(), units.clone(), ambient.zero())?;
        let twist = lin.linear(&self.twist)?.neg();
        TwistedGenerator::new(format!("{}^-1", self.label), perm, units, twist)
    }

    /// Reasons the linear part fails to be an automorphism of the ambient
    /// group; empty when it is one.
    pub fn invertibility_issues(&self) -> Vec<String> {
        let moduli = self.ambient().moduli();
        let mut issues = Vec::new();
        let mut hit = vec![false; self.perm.len()];
        for &p in &self.perm {
            hit[p] = true;
        }
        if hit.iter().any(|h| !h) {
            issues.push("non-invertible linear part: permutation is not a bijection".to_string());
        }
        for (i, &p) in self.perm.iter().enumerate() {
            if moduli[i] != moduli[p] {
                issues.push(format!(
                    "non-invertible linear part: coordinate {} (mod {}) sent to coordinate {} (mod {})",
                    i + 1,
                    moduli[i],
                    p + 1,
                    moduli[p]
                ));
            } else if mod_inverse(self.units[i], moduli[p]).is_none() {
                issues.push(format!(
                    "non-invertible linear part: unit {} at coordinate {} is not invertible mod {}",
                    self.units[i],
                    i + 1,
                    moduli[p]
                ));
            }
        }
        issues
    }

    fn kernel(&self) -> Kernel {
        let r = self.perm.len();
        let mut src = vec![(0usize, 0u64); r];
        for (i, (&p, &u)) in self.perm.iter().zip(&self.units).enumerate() {
            src[p] = (i, u64::from(u));
        }
        Kernel {
            src,
            twist: self.twist.coords().iter().map(|&c| u64::from(c)).collect(),
            moduli: self.ambient().moduli().iter().map(|&m| u64::from(m)).collect(),
        }
    }
}

impl fmt::Debug for TwistedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: perm {:?} units {:?} twist {}",
            self.label,
            self.perm.iter().map(|p| p + 1).collect::<Vec<_>>(),
            self.units,
            self.twist
        )
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `u` mod `m`, if it exists.
pub(crate) fn mod_inverse(u: u32, m: u32) -> Option<u32> {
    if m == 1 {
        return Some(0);
    }
    let (m, u) = (i64::from(m), i64::from(u) % i64::from(m));
    if gcd(u as u64, m as u64) != 1 {
        return None;
    }
    let (mut r0, mut r1, mut s0, mut s1) = (m, u, 0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    Some(s0.rem_euclid(m) as u32)
}

/// A generator compiled for applying to packed codes.
struct Kernel {
    /// For each output coordinate: source coordinate and unit.
    src: Vec<(usize, u64)>,
    twist: Vec<u64>,
    moduli: Vec<u64>,
}

impl Kernel {
    #[inline]
    fn apply(&self, layout: &Layout, code: u64, input: &mut [u32], output: &mut [u32]) -> u64 {
        layout.decode_into(code, input);
        for (j, o) in output.iter_mut().enumerate() {
            let (i, u) = self.src[j];
            *o = ((u * u64::from(input[i]) + self.twist[j]) % self.moduli[j]) as u32;
        }
        layout.encode(output)
    }
}

/// Outcome of [`TwistedAction::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub generators: Vec<GeneratorCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCheck {
    pub label: String,
    pub twist_in_states: bool,
    pub preserves_states: bool,
    pub invertible: bool,
    pub issues: Vec<String>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            if g.issues.is_empty() {
                writeln!(f, "  {}: ok", g.label)?;
            } else {
                writeln!(f, "  {}: {}", g.label, g.issues.join("; "))?;
            }
        }
        Ok(())
    }
}

/// A finite group, given by generators, acting on a state subgroup by
/// twisted affine maps.
#[derive(Clone)]
pub struct TwistedAction {
    states: SubgroupSpec,
    generators: Vec<TwistedGenerator>,
    description: String,
    fingerprint: OnceLock<String>,
}

impl TwistedAction {
    pub fn new(
        states: SubgroupSpec,
        generators: Vec<TwistedGenerator>,
        description: impl Into<String>,
    ) -> Result<Self> {
        let mut labels = HashSet::new();
        for g in &generators {
            states.ambient().check_same(g.ambient())?;
            if !labels.insert(g.label()) {
                return Err(Error::InvalidGenerator(format!(
                    "duplicate generator label {:?}",
                    g.label()
                )));
            }
        }
        Ok(Self {
            states,
            generators,
            description: description.into(),
            fingerprint: OnceLock::new(),
        })
    }

    pub fn ambient(&self) -> &TorsionGroup {
        self.states.ambient()
    }

    pub fn states(&self) -> &SubgroupSpec {
        &self.states
    }

    pub fn generators(&self) -> &[TwistedGenerator] {
        &self.generators
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Same linear parts, every twist replaced by zero.
    pub fn untwisted(&self) -> TwistedAction {
        let zero = self.ambient().zero();
        let generators = self
            .generators
            .iter()
            .map(|g| g.clone().with_twist(zero.clone()).expect("same ambient"))
            .collect();
        TwistedAction::new(
            self.states.clone(),
            generators,
            format!("{} [untwisted]", self.description),
        )
        .expect("labels unchanged")
    }

    pub fn validate(&self) -> ValidationReport {
        let generators: Vec<GeneratorCheck> = self
            .generators
            .iter()
            .map(|g| {
                let mut issues = g.invertibility_issues();
                let invertible = issues.is_empty();
                let twist_in_states = self.states.contains(g.twist());
                if !twist_in_states {
                    issues.push(format!("twist outside state subgroup: {}", g.twist()));
                }
                // L is additive, so checking the subgroup generators suffices.
                let preserves_states = self
                    .states
                    .generators()
                    .iter()
                    .all(|s| g.linear(s).map(|x| self.states.contains(&x)).unwrap_or(false));
                if !preserves_states {
                    issues.push("linear part does not preserve the state subgroup".to_string());
                }
                GeneratorCheck {
                    label: g.label().to_string(),
                    twist_in_states,
                    preserves_states,
                    invertible,
                    issues,
                }
            })
            .collect();
        ValidationReport {
            ok: generators.iter().all(|g| g.issues.is_empty()),
            generators,
        }
    }

    /// Hex digest identifying the action up to generator labels, order and
    /// description.
    pub fn fingerprint(&self) -> &str {
        self.fingerprint.get_or_init(|| {
            let mut gens: Vec<Vec<u8>> = self
                .generators
                .iter()
                .map(|g| {
                    let mut bytes = Vec::new();
                    for (&p, &u) in g.perm.iter().zip(&g.units) {
                        bytes.extend_from_slice(&(p as u64).to_le_bytes());
                        bytes.extend_from_slice(&u.to_le_bytes());
                    }
                    bytes.extend_from_slice(&g.twist.code().to_le_bytes());
                    bytes
                })
                .collect();
            gens.sort();
            let mut h = Sha256::new();
            for &m in self.ambient().moduli() {
                h.update(m.to_le_bytes());
            }
            h.update((self.states.order() as u64).to_le_bytes());
            for &c in self.states.codes() {
                h.update(c.to_le_bytes());
            }
            for g in gens {
                h.update((g.len() as u64).to_le_bytes());
                h.update(g);
            }
            h.finalize()[..16].iter().map(|b| format!("{b:02x}")).collect()
        })
    }

    pub fn orbits(&self) -> Result<OrbitSet> {
        self.orbits_with(&OrbitOptions::default())
    }

    pub fn orbits_with(&self, opts: &OrbitOptions) -> Result<OrbitSet> {
        if self.states.order() > opts.limit {
            return Err(Error::LimitExceeded { limit: opts.limit });
        }
        let prepared = self.prepare()?;
        let partition = match opts.engine {
            Engine::Bfs => prepared.bfs(),
            Engine::UnionFind => match opts.threads {
                0 | 1 => prepared.union_find(false),
                t => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::Internal(e.to_string()))?
                    .install(|| prepared.union_find(true)),
            },
        }?;
        let ambient = self.ambient();
        let orbits = partition
            .into_iter()
            .map(|members| Orbit {
                representative: ambient.element_from_code(members[0]),
                size: members.len(),
                members: opts.keep_members.then_some(members),
            })
            .collect();
        Ok(OrbitSet {
            fingerprint: self.fingerprint().to_string(),
            orbits,
        })
    }

    /// The orbit through a single state.
    pub fn orbit_of(&self, s: &GroupElement) -> Result<Orbit> {
        if !self.states.contains(s) {
            return Err(Error::NotAState(s.coords().to_vec()));
        }
        let prepared = self.prepare()?;
        let layout = self.ambient().layout();
        let (mut a, mut b) = (vec![0; layout.moduli().len()], vec![0; layout.moduli().len()]);
        let start = s.code();
        let mut seen: HashSet<u64> = [start].into();
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for k in &prepared.kernels {
                let y = k.apply(layout, x, &mut a, &mut b);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut members: Vec<u64> = seen.into_iter().collect();
        members.sort_unstable();
        Ok(Orbit {
            representative: self.ambient().element_from_code(members[0]),
            size: members.len(),
            members: Some(members),
        })
    }

    fn prepare(&self) -> Result<Prepared<'_>> {
        let report = self.validate();
        if !report.ok {
            return Err(Error::ValidationFailed(report));
        }
        let mut kernels = Vec::with_capacity(2 * self.generators.len());
        for g in &self.generators {
            kernels.push(g.kernel());
        }
        let forward = kernels.len();
        for g in &self.generators {
            kernels.push(g.inverse()?.kernel());
        }
        let layout = self.ambient().layout();
        Ok(Prepared {
            layout,
            codes: self.states.codes(),
            index: StateIndex::build(self.states.codes(), layout.order()),
            kernels,
            forward,
        })
    }
}

impl fmt::Debug for TwistedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwistedAction")
            .field("description", &self.description)
            .field("states", &self.states)
            .field("generators", &self.generators)
            .finish()
    }
}

struct Prepared<'a> {
    layout: &'a Layout,
    codes: &'a [u64],
    index: StateIndex,
    /// Forward kernels first, then their inverses.
    kernels: Vec<Kernel>,
    forward: usize,
}

impl Prepared<'_> {
    fn scratch(&self) -> (Vec<u32>, Vec<u32>) {
        let r = self.layout.moduli().len();
        (vec![0; r], vec![0; r])
    }

    fn locate(&self, code: u64) -> Result<usize> {
        self.index
            .get(code)
            .ok_or_else(|| Error::Internal(format!("image {code} left the state set")))
    }

    /// Orbits as sorted code lists, ordered by least member.
    fn bfs(&self) -> Result<Vec<Vec<u64>>> {
        let n = self.codes.len();
        let (mut a, mut b) = self.scratch();
        let mut visited = Bitmap::new(n);
        let mut out = Vec::new();
        let mut stack = Vec::new();
        // Seeds in increasing order: an unvisited seed is the least of its orbit.
        for seed in 0..n {
            if visited.get(seed) {
                continue;
            }
            visited.set(seed);
            stack.push(seed);
            let mut members = vec![self.codes[seed]];
            while let Some(x) = stack.pop() {
                for k in &self.kernels {
                    let y = self.locate(k.apply(self.layout, self.codes[x], &mut a, &mut b))?;
                    if !visited.get(y) {
                        visited.set(y);
                        stack.push(y);
                        members.push(self.codes[y]);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        Ok(out)
    }

    fn union_find(&self, parallel: bool) -> Result<Vec<Vec<u64>>> {
        let n = self.codes.len();
        let mut uf = UnionFind::new(n);
        // Orbits of a finite group are the connected components of the
        // forward-generator graph; inverses are not needed here.
        for k in &self.kernels[..self.forward] {
            let image = |i: usize, a: &mut Vec<u32>, b: &mut Vec<u32>| {
                self.locate(k.apply(self.layout, self.codes[i], a, b))
            };
            let images: Vec<usize> = if parallel {
                (0..n)
                    .into_par_iter()
                    .map_init(|| self.scratch(), |(a, b), i| image(i, a, b))
                    .collect::<Result<_>>()?
            } else {
                let (mut a, mut b) = self.scratch();
                (0..n).map(|i| image(i, &mut a, &mut b)).collect::<Result<_>>()?
            };
            for (i, j) in images.into_iter().enumerate() {
                uf.union(i, j);
            }
        }
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<u64>> = Vec::new();
        for i in 0..n {
            let root = uf.find(i);
            if slot[root] == usize::MAX {
                slot[root] = out.len();
                out.push(Vec::new());
            }
            out[slot[root]].push(self.codes[i]);
        }
        Ok(out)
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Bfs,
    UnionFind,
}

#[derive(Debug, Clone)]
pub struct OrbitOptions {
    pub engine: Engine,
    /// Worker threads for the union-find engine; 0 or 1 runs inline.
    pub threads: usize,
    pub keep_members: bool,
    pub limit: usize,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            engine: Engine::Bfs,
            threads: 1,
            keep_members: true,
            limit: DEFAULT_LIMIT,
        }
    }
}

/// One orbit: least member, size and (optionally) all members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    representative: GroupElement,
    size: usize,
    members: Option<Vec<u64>>,
}

impl Orbit {
    pub fn representative(&self) -> &GroupElement {
        &self.representative
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Sorted members, when they were kept.
    pub fn members(&self) -> Option<Vec<GroupElement>> {
        let ambient = self.representative.group();
        self.members
            .as_ref()
            .map(|m| m.iter().map(|&c| ambient.element_from_code(c)).collect())
    }

    /// `None` when members were not kept.
    pub fn contains(&self, s: &GroupElement) -> Option<bool> {
        let members = self.members.as_ref()?;
        Some(
            self.representative.group().check_same(s.group()).is_ok()
                && members.binary_search(&s.code()).is_ok(),
        )
    }
}

/// The partition of the states into orbits, sorted by representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSet {
    fingerprint: String,
    orbits: Vec<Orbit>,
}

impl OrbitSet {
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Sum of orbit sizes.
    pub fn state_count(&self) -> usize {
        self.orbits.iter().map(Orbit::size).sum()
    }

    /// Index of the orbit containing `s`; `None` if absent or members were
    /// not kept.
    pub fn orbit_index_of(&self, s: &GroupElement) -> Option<usize> {
        self.orbits.iter().position(|o| o.contains(s) == Some(true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2(r: usize) -> TorsionGroup {
        TorsionGroup::uniform(2, r).unwrap()
    }

    fn el(g: &TorsionGroup, c: &[i64]) -> GroupElement {
        g.element(c).unwrap()
    }

    fn even_weight(g: &TorsionGroup) -> SubgroupSpec {
        let r = g.rank();
        SubgroupSpec::generated(g, (0..r - 1).map(|i| g.basis(i).add(&g.basis(i + 1)).unwrap()).collect())
            .unwrap()
    }

    fn crossing(g: &TorsionGroup) -> TwistedGenerator {
        TwistedGenerator::transposition("cross", 1, 2, el(g, &[0, 1, 1])).unwrap()
    }

    fn sl_so_21() -> TwistedAction {
        let g = f2(3);
        TwistedAction::new(
            even_weight(&g),
            vec![
                TwistedGenerator::transposition("swap", 0, 1, g.zero()).unwrap(),
                crossing(&g),
            ],
            "(2,1)",
        )
        .unwrap()
    }

    fn reps(o: &OrbitSet) -> Vec<Vec<u32>> {
        o.orbits().iter().map(|x| x.representative().coords().to_vec()).collect()
    }

    #[test]
    fn apply_examples() {
        let g = f2(3);
        assert_eq!(crossing(&g).apply(&el(&g, &[1, 1, 0])).unwrap().coords(), [1, 1, 0]);
        let swap = TwistedGenerator::transposition("s", 0, 1, g.zero()).unwrap();
        assert_eq!(swap.apply(&el(&g, &[0, 1, 1])).unwrap().coords(), [1, 0, 1]);
        let x = el(&g, &[1, 0, 1]);
        assert_eq!(TwistedGenerator::identity(&g).apply(&x).unwrap(), x);
        assert!(matches!(swap.apply(&f2(2).zero()), Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn apply_scales_by_units() {
        let g = TorsionGroup::new(vec![4, 4, 3]).unwrap();
        // (x, y, z) ↦ (-y, x, 2z) + (1, 0, 0)
        let gen = TwistedGenerator::new("r", vec![1, 0, 2], vec![1, -1, 2], el(&g, &[1, 0, 0])).unwrap();
        assert_eq!(gen.units(), [1, 3, 2]);
        assert_eq!(gen.apply(&el(&g, &[1, 2, 1])).unwrap().coords(), [3, 1, 2]);
        let inv = gen.inverse().unwrap();
        for x in g.full().unwrap().enumerate() {
            assert_eq!(inv.apply(&gen.apply(&x).unwrap()).unwrap(), x);
            assert_eq!(gen.apply(&inv.apply(&x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn compose_examples() {
        let g = f2(3);
        let c = crossing(&g);
        let cc = c.compose(&c).unwrap();
        assert_eq!(cc.perm(), [0, 1, 2]);
        assert!(cc.twist().is_zero());

        let swap = TwistedGenerator::transposition("s", 0, 1, g.zero()).unwrap();
        let m = swap.compose(&c).unwrap();
        assert_eq!(m.twist().coords(), [1, 0, 1]);
        for x in even_weight(&g).enumerate().into_iter().chain(g.full().unwrap().enumerate()) {
            assert_eq!(m.apply(&x).unwrap(), swap.apply(&c.apply(&x).unwrap()).unwrap());
        }

        let id = TwistedGenerator::identity(&g);
        let gi = c.compose(&id).unwrap();
        assert_eq!((gi.perm(), gi.units(), gi.twist()), (c.perm(), c.units(), c.twist()));
    }

    #[test]
    fn validate_examples() {
        assert!(sl_so_21().validate().ok);

        let g = f2(3);
        let bad_twist = TwistedGenerator::transposition("t", 0, 1, el(&g, &[1, 0, 0])).unwrap();
        let a = TwistedAction::new(even_weight(&g), vec![bad_twist], "").unwrap();
        let report = a.validate();
        assert!(!report.ok);
        assert!(!report.generators[0].twist_in_states);
        assert!(report.generators[0].issues[0].starts_with("twist outside state subgroup"));

        let z4 = TorsionGroup::uniform(4, 2).unwrap();
        let doubling = TwistedGenerator::new("d", vec![0, 1], vec![2, 1], z4.zero()).unwrap();
        let a = TwistedAction::new(z4.full().unwrap(), vec![doubling], "").unwrap();
        let report = a.validate();
        assert!(!report.ok && !report.generators[0].invertible);
        assert!(report.generators[0].issues[0].starts_with("non-invertible linear part"));
        assert!(matches!(a.orbits(), Err(Error::ValidationFailed(_))));
    }

    #[test]
    fn validate_flags_non_preserving_linear_part() {
        // States {(0,0),(1,0)} are not preserved by the swap.
        let g = f2(2);
        let states = SubgroupSpec::generated(&g, vec![el(&g, &[1, 0])]).unwrap();
        let swap = TwistedGenerator::transposition("s", 0, 1, g.zero()).unwrap();
        let report = TwistedAction::new(states, vec![swap], "").unwrap().validate();
        assert!(!report.generators[0].preserves_states);
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let g = f2(2);
        let s = TwistedGenerator::transposition("s", 0, 1, g.zero()).unwrap();
        assert!(TwistedAction::new(g.full().unwrap(), vec![s.clone(), s], "").is_err());
    }

    #[test]
    fn orbits_examples() {
        let g = f2(2);
        let one_one = TwistedAction::new(
            even_weight(&g),
            vec![TwistedGenerator::transposition("cross", 0, 1, el(&g, &[1, 1])).unwrap()],
            "(1,1)",
        )
        .unwrap();
        let o = one_one.orbits().unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o.orbits()[0].size(), 2);
        assert_eq!(one_one.untwisted().orbits().unwrap().len(), 2);

        let o = sl_so_21().orbits().unwrap();
        assert_eq!(reps(&o), [vec![0, 0, 0], vec![1, 1, 0]]);
        let members: Vec<Vec<u32>> = o.orbits()[0]
            .members()
            .unwrap()
            .iter()
            .map(|x| x.coords().to_vec())
            .collect();
        assert_eq!(members, [[0, 0, 0], [0, 1, 1], [1, 0, 1]]);

        let idle = TwistedAction::new(even_weight(&f2(4)), vec![], "").unwrap();
        assert_eq!(idle.orbits().unwrap().len(), 8);
    }

    #[test]
    fn orbit_of_examples() {
        let g = f2(3);
        let a = sl_so_21();
        let o = a.orbit_of(&el(&g, &[0, 1, 1])).unwrap();
        assert_eq!((o.representative().coords(), o.size()), (&[0, 0, 0][..], 3));
        let o = a.orbit_of(&el(&g, &[1, 1, 0])).unwrap();
        assert_eq!((o.representative().coords(), o.size()), (&[1, 1, 0][..], 1));
        assert!(matches!(a.orbit_of(&el(&g, &[1, 0, 0])), Err(Error::NotAState(_))));

        let idle = TwistedAction::new(even_weight(&g), vec![], "").unwrap();
        let s = el(&g, &[1, 0, 1]);
        assert_eq!(idle.orbit_of(&s).unwrap().representative(), &s);
    }

    #[test]
    fn engines_agree_and_fingerprint_ignores_labels() {
        let a = sl_so_21();
        let bfs = a.orbits().unwrap();
        for threads in [1, 3] {
            let uf = a
                .orbits_with(&OrbitOptions { engine: Engine::UnionFind, threads, ..Default::default() })
                .unwrap();
            assert_eq!(bfs, uf);
        }
        let relabeled = TwistedAction::new(
            a.states().clone(),
            a.generators().iter().rev().map(|g| g.clone().with_label(format!("x{}", g.label()))).collect(),
            "other",
        )
        .unwrap();
        assert_eq!(relabeled.fingerprint(), a.fingerprint());
        assert_ne!(a.untwisted().fingerprint(), a.fingerprint());
    }

    #[test]
    fn limit_is_checked() {
        let opts = OrbitOptions { limit: 3, ..Default::default() };
        assert!(matches!(sl_so_21().orbits_with(&opts), Err(Error::LimitExceeded { limit: 3 })));
    }

    #[test]
    fn mod_inverse_values() {
        assert_eq!(mod_inverse(3, 4), Some(3));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(0, 1), Some(0));
    }
}
