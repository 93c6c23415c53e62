//! Built-in actions for the quadratic forms family `G = SL_n`, `H = SO_{p,q}`,
//! its untwisted comparison actions, and user-defined actions from spec files.
//!
//! For this family `T1` is the diagonal torus and `T1 ∩ H` is the group of
//! sign matrices `diag(±1, …, ±1)` with an even number of minus signs, i.e.
//! the even-weight vectors of `F₂ⁿ`. The group `N0` is generated by sign
//! matrices (acting trivially) and root reflections for the transpositions
//! `(i, j)`. A reflection inside one block is represented by
//! `[[0, -1], [1, 0]]`, which is real, so its twist vanishes. A reflection
//! crossing the blocks (`i ≤ p < j`) is represented by `n = [[0, i], [i, 0]]`;
//! then `σ(n) = -n` and `c(n) = n σ(n)⁻¹ = -I` on the `(i, j)` block, i.e. the
//! twist `eᵢ + eⱼ`.

mod spec_file;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::abelian::{GroupElement, SubgroupSpec, TorsionGroup};
use crate::action::{TwistedAction, TwistedGenerator};
use crate::error::{Error, Result};

pub use spec_file::{load_spec, parse_spec, ActionFile, GeneratorEntry, StatesEntry};

/// Largest `n = p + q` the built-in constructors accept.
pub const MAX_RANK: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `N0` acting by twisted conjugation.
    #[default]
    Twisted,
    /// The full Weyl group `W0 = Sₙ` acting by plain permutations.
    PlainW0,
    /// The very little Weyl group `W00 = S_p × S_q` acting by plain
    /// permutations.
    PlainW00,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Twisted => "twisted",
            Mode::PlainW0 => "plain-w0",
            Mode::PlainW00 => "plain-w00",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    SlSo { p: usize, q: usize },
    Custom(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub mode: Mode,
}

impl FamilySpec {
    pub fn sl_so(p: usize, q: usize, mode: Mode) -> Self {
        Self {
            kind: FamilyKind::SlSo { p, q },
            mode,
        }
    }

    pub fn build(&self) -> Result<TwistedAction> {
        match (&self.kind, self.mode) {
            (FamilyKind::SlSo { p, q }, Mode::Twisted) => build_sl_so(*p, *q),
            (FamilyKind::SlSo { p, q }, Mode::PlainW0) => build_plain_w0(*p, *q),
            (FamilyKind::SlSo { p, q }, Mode::PlainW00) => build_plain_w00(*p, *q),
            (FamilyKind::Custom(path), Mode::Twisted) => load_spec(path),
            (FamilyKind::Custom(path), Mode::PlainW0) => Ok(load_spec(path)?.untwisted()),
            (FamilyKind::Custom(_), Mode::PlainW00) => Err(Error::InvalidFamily(
                "mode plain-w00 is only defined for the sl-so family".into(),
            )),
        }
    }
}

fn check_pq(p: usize, q: usize) -> Result<usize> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidFamily(format!(
            "sl-so needs p >= 1 and q >= 1, got ({p},{q})"
        )));
    }
    let n = p + q;
    if n > MAX_RANK {
        return Err(Error::RankLimit {
            rank: n,
            limit: MAX_RANK,
        });
    }
    Ok(n)
}

/// Even-weight vectors of `F₂ⁿ`: sign matrices with determinant 1.
pub fn even_weight_states(n: usize) -> Result<SubgroupSpec> {
    let g = TorsionGroup::uniform(2, n)?;
    let gens = (1..n)
        .map(|i| g.basis(i - 1).add(&g.basis(i)))
        .collect::<Result<_>>()?;
    SubgroupSpec::generated(&g, gens)
}

/// Twist `eᵢ + eⱼ` (0-based) of a block-crossing reflection.
///
/// On the `SL_2` block spanned by `i, j` the reflection is represented by
/// `n = [[0, i], [i, 0]]`. Complex conjugation sends it to `-n`, so
/// `c(n) = n·σ(n)⁻¹ = -I`, the sign vector with `-1` at both positions.
pub fn crossing_twist(ambient: &TorsionGroup, i: usize, j: usize) -> Result<GroupElement> {
    ambient.basis(i).add(&ambient.basis(j))
}

fn swap_label(i: usize) -> String {
    format!("swap({},{})", i + 1, i + 2)
}

/// `N0` for `SL_n / SO_{p,q}`: adjacent transpositions, the one at `(p, p+1)`
/// carrying the twist `e_p + e_{p+1}`. The sign matrices `Z0` act trivially
/// and are left out.
pub fn build_sl_so(p: usize, q: usize) -> Result<TwistedAction> {
    let n = check_pq(p, q)?;
    let states = even_weight_states(n)?;
    let g = states.ambient().clone();
    let gens = (0..n - 1)
        .map(|i| {
            if i + 1 == p {
                TwistedGenerator::transposition(
                    format!("cross({},{})", p, p + 1),
                    i,
                    i + 1,
                    crossing_twist(&g, i, i + 1)?,
                )
            } else {
                TwistedGenerator::transposition(swap_label(i), i, i + 1, g.zero())
            }
        })
        .collect::<Result<_>>()?;
    TwistedAction::new(states, gens, format!("sl-so p={p} q={q} twisted"))
}

/// Same group as [`build_sl_so`], generated by every transposition, each
/// block-crossing one with its own twist.
pub fn build_sl_so_all_crossings(p: usize, q: usize) -> Result<TwistedAction> {
    let n = check_pq(p, q)?;
    let states = even_weight_states(n)?;
    let g = states.ambient().clone();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let label = format!("r({},{})", i + 1, j + 1);
            let twist = if i < p && j >= p {
                crossing_twist(&g, i, j)?
            } else {
                g.zero()
            };
            gens.push(TwistedGenerator::transposition(label, i, j, twist)?);
        }
    }
    TwistedAction::new(states, gens, format!("sl-so p={p} q={q} twisted, all reflections"))
}

/// `W00 = S_p × S_q` permuting within each block, no twists.
pub fn build_plain_w00(p: usize, q: usize) -> Result<TwistedAction> {
    let n = check_pq(p, q)?;
    let states = even_weight_states(n)?;
    let g = states.ambient().clone();
    let gens = (0..n - 1)
        .filter(|&i| i + 1 != p)
        .map(|i| TwistedGenerator::transposition(swap_label(i), i, i + 1, g.zero()))
        .collect::<Result<_>>()?;
    TwistedAction::new(states, gens, format!("sl-so p={p} q={q} plain-w00"))
}

/// `W0 = Sₙ` permuting all entries, no twists.
pub fn build_plain_w0(p: usize, q: usize) -> Result<TwistedAction> {
    let n = check_pq(p, q)?;
    let states = even_weight_states(n)?;
    let g = states.ambient().clone();
    let gens = (0..n - 1)
        .map(|i| TwistedGenerator::transposition(swap_label(i), i, i + 1, g.zero()))
        .collect::<Result<_>>()?;
    TwistedAction::new(states, gens, format!("sl-so p={p} q={q} plain-w0"))
}

/// `Z0` (sign matrices of determinant 1) acting on `T1 ∩ H` by twisted
/// conjugation. Sign matrices are real and commute with the torus, so every
/// generator acts as the identity.
pub fn build_z0_sl_so(p: usize, q: usize) -> Result<TwistedAction> {
    let n = check_pq(p, q)?;
    let states = even_weight_states(n)?;
    let g = states.ambient().clone();
    let gens = (0..n - 1)
        .map(|i| {
            TwistedGenerator::identity(&g).with_label(format!("z({},{})", i + 1, i + 2))
        })
        .collect();
    TwistedAction::new(states, gens, format!("sl-so p={p} q={q} Z0"))
}

/// `s_k` (`0 ≤ 2k ≤ p`): `2k` minus signs ending at position `p`.
pub fn canonical_s(p: usize, q: usize, k: usize) -> Result<GroupElement> {
    let n = check_pq(p, q)?;
    if 2 * k > p {
        return Err(Error::InvalidFamily(format!("s_{k} needs 2k <= p = {p}")));
    }
    let coords: Vec<i64> = (0..n).map(|j| i64::from(j + 2 * k >= p && j < p)).collect();
    TorsionGroup::uniform(2, n)?.element(&coords)
}

/// `s'_k` (`1 ≤ 2k ≤ q`): `2k` minus signs starting at position `p + 1`.
pub fn canonical_s_prime(p: usize, q: usize, k: usize) -> Result<GroupElement> {
    let n = check_pq(p, q)?;
    if k == 0 || 2 * k > q {
        return Err(Error::InvalidFamily(format!("s'_{k} needs 1 <= 2k <= q = {q}")));
    }
    let coords: Vec<i64> = (0..n).map(|j| i64::from(j >= p && j < p + 2 * k)).collect();
    TorsionGroup::uniform(2, n)?.element(&coords)
}

/// `[s_0, s_1, …, s'_1, s'_2, …]`.
pub fn canonical_forms_sl_so(p: usize, q: usize) -> Result<Vec<GroupElement>> {
    let mut out: Vec<GroupElement> = (0..=p / 2).map(|k| canonical_s(p, q, k)).collect::<Result<_>>()?;
    for k in 1..=q / 2 {
        out.push(canonical_s_prime(p, q, k)?);
    }
    Ok(out)
}

/// The canonical form in the `N0`-orbit of `s`.
pub fn canonical_form_sl_so(s: &GroupElement, p: usize, q: usize) -> Result<GroupElement> {
    SlSoFamily::new(p, q)?.canonical_form(s)
}

/// The twisted `SL_n / SO_{p,q}` action together with its canonical forms.
#[derive(Debug, Clone)]
pub struct SlSoFamily {
    p: usize,
    q: usize,
    action: TwistedAction,
    canonical: Vec<GroupElement>,
}

impl SlSoFamily {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        Self::with_action(p, q, build_sl_so(p, q)?)
    }

    /// Wraps an arbitrary action over the family's states, e.g. a variant
    /// generating set.
    pub fn with_action(p: usize, q: usize, action: TwistedAction) -> Result<Self> {
        let n = check_pq(p, q)?;
        if action.states() != &even_weight_states(n)? {
            return Err(Error::InvalidFamily(
                "action states are not the even-weight vectors".into(),
            ));
        }
        Ok(Self {
            p,
            q,
            action,
            canonical: canonical_forms_sl_so(p, q)?,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn action(&self) -> &TwistedAction {
        &self.action
    }

    pub fn canonical_forms(&self) -> &[GroupElement] {
        &self.canonical
    }

    /// Canonical forms lying in the orbit of `s`; exactly one for a correct
    /// action.
    pub fn canonical_forms_in_orbit_of(&self, s: &GroupElement) -> Result<Vec<GroupElement>> {
        let orbit = self.action.orbit_of(s)?;
        Ok(self
            .canonical
            .iter()
            .filter(|c| orbit.contains(c) == Some(true))
            .cloned()
            .collect())
    }

    pub fn canonical_form(&self, s: &GroupElement) -> Result<GroupElement> {
        let mut hits = self.canonical_forms_in_orbit_of(s)?;
        if hits.len() != 1 {
            return Err(Error::Internal(format!(
                "orbit of {s} contains {} canonical forms",
                hits.len()
            )));
        }
        Ok(hits.remove(0))
    }

    /// `diag(±1, …)` rendering of a state.
    pub fn sign_string(s: &GroupElement) -> String {
        let entries: Vec<&str> = s
            .coords()
            .iter()
            .map(|&c| if c == 0 { "1" } else { "-1" })
            .collect();
        format!("diag({})", entries.join(","))
    }
}
