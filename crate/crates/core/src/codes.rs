//! Packed 64-bit codes for group elements, plus membership structures keyed
//! by them.
//!
//! An element of `∏ Z/mᵢ` is encoded in mixed radix with coordinate 0 as the
//! most significant digit, so numeric order on codes is lexicographic order
//! on coordinate vectors. When every modulus is a power of two the digits are
//! plain bit fields.

use std::collections::{HashMap, HashSet};

/// Universes up to this size get dense bitmaps / index tables.
const DENSE_LIMIT: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Layout {
    moduli: Vec<u32>,
    place: Vec<u64>,
    /// `(shift, mask)` per coordinate when all moduli are powers of two.
    fields: Option<Vec<(u32, u64)>>,
    order: u64,
}

impl Layout {
    /// `None` when the group order does not fit in a `u64`.
    pub(crate) fn new(moduli: &[u32]) -> Option<Self> {
        let mut place = vec![0u64; moduli.len()];
        let mut acc: u64 = 1;
        for (i, &m) in moduli.iter().enumerate().rev() {
            place[i] = acc;
            acc = acc.checked_mul(u64::from(m))?;
        }
        let fields = if moduli.iter().all(|m| m.is_power_of_two()) {
            Some(
                moduli
                    .iter()
                    .zip(&place)
                    .map(|(&m, &p)| (p.trailing_zeros(), u64::from(m) - 1))
                    .collect(),
            )
        } else {
            None
        };
        Some(Self {
            moduli: moduli.to_vec(),
            place,
            fields,
            order: acc,
        })
    }

    pub(crate) fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub(crate) fn order(&self) -> u64 {
        self.order
    }

    #[inline]
    pub(crate) fn encode(&self, coords: &[u32]) -> u64 {
        match &self.fields {
            Some(fields) => fields
                .iter()
                .zip(coords)
                .fold(0, |acc, (&(shift, _), &c)| acc | (u64::from(c) << shift)),
            None => self
                .place
                .iter()
                .zip(coords)
                .map(|(&p, &c)| p * u64::from(c))
                .sum(),
        }
    }

    #[inline]
    pub(crate) fn decode_into(&self, code: u64, out: &mut [u32]) {
        match &self.fields {
            Some(fields) => {
                for (o, &(shift, mask)) in out.iter_mut().zip(fields) {
                    *o = ((code >> shift) & mask) as u32;
                }
            }
            None => {
                for ((o, &p), &m) in out.iter_mut().zip(&self.place).zip(&self.moduli) {
                    *o = ((code / p) % u64::from(m)) as u32;
                }
            }
        }
    }

    pub(crate) fn decode(&self, code: u64) -> Vec<u32> {
        let mut out = vec![0; self.moduli.len()];
        self.decode_into(code, &mut out);
        out
    }

    /// Sum of two codes; `scratch` must hold two rank-length buffers.
    #[inline]
    pub(crate) fn add(&self, a: u64, b: u64, scratch: &mut [Vec<u32>; 2]) -> u64 {
        let [x, y] = scratch;
        self.decode_into(a, x);
        self.decode_into(b, y);
        for ((xi, &yi), &m) in x.iter_mut().zip(y.iter()).zip(&self.moduli) {
            *xi = ((u64::from(*xi) + u64::from(yi)) % u64::from(m)) as u32;
        }
        self.encode(x)
    }

    pub(crate) fn scratch(&self) -> [Vec<u32>; 2] {
        [vec![0; self.moduli.len()], vec![0; self.moduli.len()]]
    }
}

/// A set of codes: a bitmap over the whole universe when it is small enough,
/// a hash set otherwise.
pub(crate) enum CodeSet {
    Dense(Vec<u64>),
    Hashed(HashSet<u64>),
}

impl CodeSet {
    pub(crate) fn for_universe(order: u64) -> Self {
        if order <= DENSE_LIMIT {
            CodeSet::Dense(vec![0; order.div_ceil(64) as usize])
        } else {
            CodeSet::Hashed(HashSet::new())
        }
    }

    /// Returns `true` when `code` was not yet present.
    #[inline]
    pub(crate) fn insert(&mut self, code: u64) -> bool {
        match self {
            CodeSet::Dense(bits) => {
                let (w, b) = ((code / 64) as usize, code % 64);
                let fresh = bits[w] & (1 << b) == 0;
                bits[w] |= 1 << b;
                fresh
            }
            CodeSet::Hashed(set) => set.insert(code),
        }
    }

    #[inline]
    pub(crate) fn contains(&self, code: u64) -> bool {
        match self {
            CodeSet::Dense(bits) => bits[(code / 64) as usize] & (1 << (code % 64)) != 0,
            CodeSet::Hashed(set) => set.contains(&code),
        }
    }
}

/// Position of each code within a sorted code list.
pub(crate) enum StateIndex {
    Dense(Vec<u32>),
    Hashed(HashMap<u64, u32>),
}

impl StateIndex {
    pub(crate) fn build(sorted: &[u64], universe: u64) -> Self {
        if universe <= DENSE_LIMIT && universe <= 8 * sorted.len() as u64 + 1024 {
            let mut table = vec![u32::MAX; universe as usize];
            for (i, &c) in sorted.iter().enumerate() {
                table[c as usize] = i as u32;
            }
            StateIndex::Dense(table)
        } else {
            StateIndex::Hashed(
                sorted
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (c, i as u32))
                    .collect(),
            )
        }
    }

    #[inline]
    pub(crate) fn get(&self, code: u64) -> Option<usize> {
        match self {
            StateIndex::Dense(table) => match table.get(code as usize) {
                Some(&i) if i != u32::MAX => Some(i as usize),
                _ => None,
            },
            StateIndex::Hashed(map) => map.get(&code).map(|&i| i as usize),
        }
    }
}

/// Fixed-size bitmap over `0..len`.
pub(crate) struct Bitmap(Vec<u64>);

impl Bitmap {
    pub(crate) fn new(len: usize) -> Self {
        Bitmap(vec![0; len.div_ceil(64)])
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
}
