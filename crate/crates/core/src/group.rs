//! Concrete finite groups: Cayley tables, closures, quotients, operator sets.
//!
//! Elements are dense indices `0..n` with index 0 fixed as the identity.
//! Groups built from permutations enumerate elements identity-first in BFS
//! order over generator application, so element indices (and everything
//! derived from them: tuple codes, component ids, certificates) are
//! reproducible across runs.

use crate::error::{Error, Result};
use crate::DEFAULT_ORDER_CAP;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;

/// Controls how thoroughly [`FiniteGroup::validate`] checks associativity.
#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    /// Orders up to this bound get an exhaustive triple check.
    pub exhaustive_bound: usize,
    /// Number of sampled triples above the exhaustive bound.
    pub sampled_triples: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            exhaustive_bound: 256,
            sampled_triples: 200_000,
        }
    }
}

/// A finite group given by its full multiplication table.
///
/// `mul` is stored row-major: `mul[a * n + b]` is the index of `a * b`.
/// The identity is always element 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    generators: Vec<usize>,
    element_names: Option<Vec<String>>,
}

/// Index of the identity element in every [`FiniteGroup`].
pub const IDENTITY: usize = 0;

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `w^{-1} * a * w`.
    #[inline]
    pub fn conj(&self, a: usize, w: usize) -> usize {
        self.mul(self.mul(self.inv(w), a), w)
    }

    /// `a^{-1} b^{-1} a b`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut acc = IDENTITY;
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut ord = 1;
        while x != IDENTITY {
            x = self.mul(x, a);
            ord += 1;
        }
        ord
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_name(&self, a: usize) -> String {
        match &self.element_names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn element_names(&self) -> Option<&[String]> {
        self.element_names.as_deref()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order;
        for a in 0..n {
            for b in (a + 1)..n {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_perfect(&self) -> bool {
        self.commutator_subgroup().len() == self.order
    }

    /// SHA-256 of the canonical multiplication table bytes, hex-encoded.
    /// Used as the group identity for caches and persisted tables.
    pub fn table_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.order as u64).to_le_bytes());
        for &e in &self.mul {
            hasher.update(e.to_le_bytes());
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Builds the group generated by permutations of `{0..degree-1}`.
    ///
    /// Elements are enumerated by BFS from the identity, applying generators
    /// in the given order (right multiplication), so the numbering is
    /// deterministic.
    pub fn from_permutations(degree: usize, perm_gens: &[Vec<usize>], cap: usize) -> Result<Self> {
        Ok(Self::from_permutations_with_elements(degree, perm_gens, cap)?.0)
    }

    /// Like [`Self::from_permutations`] but also returns the permutation
    /// realizing each element index, which callers need to build
    /// automorphisms from external symmetries.
    pub fn from_permutations_with_elements(
        degree: usize,
        perm_gens: &[Vec<usize>],
        cap: usize,
    ) -> Result<(Self, Vec<Vec<usize>>)> {
        for p in perm_gens {
            if !is_bijection(p, degree) {
                return Err(Error::NotBijective {
                    degree,
                    perm: p.clone(),
                });
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elems: Vec<Vec<usize>> = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0;
        while head < elems.len() {
            let current = elems[head].clone();
            for g in perm_gens {
                let next = compose(&current, g);
                if !index.contains_key(&next) {
                    if elems.len() >= cap {
                        return Err(Error::OrderCapExceeded {
                            order: elems.len() + 1,
                            cap,
                        });
                    }
                    index.insert(next.clone(), elems.len());
                    elems.push(next);
                }
            }
            head += 1;
        }
        let n = elems.len();
        if n > u16::MAX as usize {
            return Err(Error::OrderCapExceeded {
                order: n,
                cap: u16::MAX as usize,
            });
        }
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let p = compose(&elems[a], &elems[b]);
                mul[a * n + b] = index[&p] as u16;
            }
        }
        let generators: Vec<usize> = perm_gens.iter().map(|g| index[g]).collect();
        let names = elems.iter().map(|p| cycle_notation(p)).collect();
        let group = Self::from_parts(n, mul, generators, Some(names))?;
        Ok((group, elems))
    }

    /// Direct product of cyclic groups of the given orders, written
    /// additively. Element `(a_1, .., a_d)` has index
    /// `a_1 + f_1*(a_2 + f_2*(...))`; generators are the unit vectors.
    pub fn abelian(factors: &[usize], cap: usize) -> Result<Self> {
        if factors.iter().any(|&f| f == 0) {
            return Err(Error::InvalidArgument("cyclic factor of order 0".into()));
        }
        let mut order: usize = 1;
        for &f in factors {
            order = order.checked_mul(f).ok_or(Error::OrderCapExceeded {
                order: usize::MAX,
                cap,
            })?;
        }
        if order > cap {
            return Err(Error::OrderCapExceeded { order, cap });
        }
        if order > u16::MAX as usize {
            return Err(Error::OrderCapExceeded {
                order,
                cap: u16::MAX as usize,
            });
        }
        let n = order;
        let d = factors.len();
        let decode = |mut idx: usize| -> Vec<usize> {
            let mut v = Vec::with_capacity(d);
            for &f in factors {
                v.push(idx % f);
                idx /= f;
            }
            v
        };
        let encode = |v: &[usize]| -> usize {
            let mut idx = 0;
            for (i, &f) in factors.iter().enumerate().rev() {
                idx = idx * f + v[i];
            }
            idx
        };
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            let va = decode(a);
            for b in 0..n {
                let vb = decode(b);
                let sum: Vec<usize> = va
                    .iter()
                    .zip(&vb)
                    .zip(factors)
                    .map(|((x, y), f)| (x + y) % f)
                    .collect();
                mul[a * n + b] = encode(&sum) as u16;
            }
        }
        let mut generators = Vec::new();
        let mut stride = 1;
        for &f in factors {
            generators.push(if f > 1 { stride } else { 0 });
            stride *= f;
        }
        let names = (0..n)
            .map(|i| {
                let v = decode(i);
                if d == 1 {
                    v[0].to_string()
                } else {
                    format!(
                        "({})",
                        v.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                }
            })
            .collect();
        Self::from_parts(n, mul, generators, Some(names))
    }

    /// Builds a group directly from a multiplication table. Row/column 0
    /// must behave as the identity. Generators default to all elements.
    pub fn from_table(table: &[Vec<usize>], generators: Option<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > u16::MAX as usize {
            return Err(Error::OrderCapExceeded {
                order: n,
                cap: u16::MAX as usize,
            });
        }
        let mut mul = vec![0u16; n * n];
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {a} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (b, &e) in row.iter().enumerate() {
                if e >= n {
                    return Err(Error::InvalidTable(format!(
                        "entry [{a}][{b}] = {e} out of range"
                    )));
                }
                mul[a * n + b] = e as u16;
            }
        }
        let generators = generators.unwrap_or_else(|| (0..n).collect());
        Self::from_parts(n, mul, generators, None)
    }

    /// Direct product with pairs indexed `(a, b) -> a + |A| * b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, cap: usize) -> Result<Self> {
        let n = a
            .order
            .checked_mul(b.order)
            .filter(|&o| o <= cap && o <= u16::MAX as usize)
            .ok_or(Error::OrderCapExceeded {
                order: a.order.saturating_mul(b.order),
                cap,
            })?;
        let na = a.order;
        let mut mul = vec![0u16; n * n];
        for x in 0..n {
            let (xa, xb) = (x % na, x / na);
            for y in 0..n {
                let (ya, yb) = (y % na, y / na);
                mul[x * n + y] = (a.mul(xa, ya) + na * b.mul(xb, yb)) as u16;
            }
        }
        let mut generators: Vec<usize> = a.generators.clone();
        generators.extend(b.generators.iter().map(|&g| na * g));
        let names = match (&a.element_names, &b.element_names) {
            (Some(an), Some(bn)) => Some(
                (0..n)
                    .map(|x| format!("({},{})", an[x % na], bn[x / na]))
                    .collect(),
            ),
            _ => None,
        };
        Self::from_parts(n, mul, generators, names)
    }

    fn from_parts(
        n: usize,
        mul: Vec<u16>,
        generators: Vec<usize>,
        element_names: Option<Vec<String>>,
    ) -> Result<Self> {
        let mut inv = vec![u16::MAX; n];
        for a in 0..n {
            let mut found = false;
            for b in 0..n {
                if mul[a * n + b] == IDENTITY as u16 {
                    inv[a] = b as u16;
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::InvalidTable(format!("element {a} has no inverse")));
            }
        }
        let group = FiniteGroup {
            order: n,
            mul,
            inv,
            generators,
            element_names,
        };
        group.validate(ValidationOptions::default())?;
        Ok(group)
    }

    /// Full invariant suite: identity laws, inverses, associativity
    /// (exhaustive under the bound, sampled above it), and that the
    /// declared generators generate the whole element set.
    pub fn validate(&self, opts: ValidationOptions) -> Result<()> {
        let n = self.order;
        for g in 0..n {
            if self.mul(IDENTITY, g) != g || self.mul(g, IDENTITY) != g {
                return Err(Error::InvalidTable(format!(
                    "identity law fails at element {g}"
                )));
            }
            let i = self.inv(g);
            if i >= n || self.mul(g, i) != IDENTITY || self.mul(i, g) != IDENTITY {
                return Err(Error::InvalidTable(format!(
                    "inverse law fails at element {g}"
                )));
            }
        }
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::InvalidTable(format!(
                    "associativity fails at triple ({a},{b},{c})"
                )));
            }
            Ok(())
        };
        if n <= opts.exhaustive_bound {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            // splitmix64 stream with a fixed seed; sampling is deterministic.
            let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
            let mut next = || {
                state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
                (z ^ (z >> 31)) as usize
            };
            for _ in 0..opts.sampled_triples {
                check(next() % n, next() % n, next() % n)?;
            }
        }
        let closure = self.subgroup_closure(&self.generators);
        if closure.len() != n {
            return Err(Error::InvalidTable(format!(
                "declared generators span only {} of {n} elements",
                closure.len()
            )));
        }
        Ok(())
    }

    /// Smallest subset containing `seed` and the identity, closed under
    /// multiplication (inverses come for free in a finite group). Returned
    /// sorted ascending.
    pub fn subgroup_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[IDENTITY] = true;
        let mut elems = vec![IDENTITY];
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head];
            head += 1;
            for &s in seed {
                let y = self.mul(x, s);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Normal closure of `seed` under conjugation by the whole group and
    /// under every automorphism of the operator set.
    pub fn normal_closure(&self, op: &OperatorSet, seed: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        let mut elems: Vec<usize> = Vec::new();
        let mut pending: Vec<usize> = Vec::new();
        member[IDENTITY] = true;
        elems.push(IDENTITY);
        for &s in seed {
            if !member[s] {
                member[s] = true;
                elems.push(s);
                pending.push(s);
            }
        }
        // Close the current subgroup, then push in missing conjugates and
        // automorphism images of members, repeating to a fixpoint. Closure
        // under conjugation by generators suffices: conjugators compose.
        loop {
            let mut head = 0;
            while head < elems.len() {
                let x = elems[head];
                head += 1;
                let snapshot = elems.len();
                for idx in 0..snapshot {
                    let y = self.mul(x, elems[idx]);
                    if !member[y] {
                        member[y] = true;
                        elems.push(y);
                    }
                }
            }
            let mut grew = false;
            for i in 0..elems.len() {
                let h = elems[i];
                for &g in &self.generators {
                    let c = self.conj(h, g);
                    if !member[c] {
                        member[c] = true;
                        elems.push(c);
                        grew = true;
                    }
                }
                for auto in &op.auto_gens {
                    let c = auto.apply(h);
                    if !member[c] {
                        member[c] = true;
                        elems.push(c);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        elems.sort_unstable();
        elems
    }

    /// The subgroup generated by all commutators; always normal.
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let mut comms = Vec::new();
        let mut seen = vec![false; self.order];
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.commutator(a, b);
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        self.subgroup_closure(&comms)
    }

    /// Verifies `n_set` is a normal subgroup and returns the quotient group
    /// together with the projection. Cosets are numbered deterministically:
    /// scanning elements in index order, each new coset gets the next id, so
    /// the identity coset is 0.
    pub fn quotient(&self, n_set: &[usize]) -> Result<(FiniteGroup, Homomorphism)> {
        let n = self.order;
        let mut member = vec![false; n];
        for &e in n_set {
            if e >= n {
                return Err(Error::IndexOutOfRange {
                    index: e,
                    order: n,
                });
            }
            member[e] = true;
        }
        if !member[IDENTITY] {
            return Err(Error::NotSubgroup {
                a: IDENTITY,
                b: IDENTITY,
            });
        }
        for &a in n_set {
            for &b in n_set {
                if !member[self.mul(a, b)] {
                    return Err(Error::NotSubgroup { a, b });
                }
            }
            if !member[self.inv(a)] {
                return Err(Error::NotSubgroup { a, b: a });
            }
        }
        for &h in n_set {
            for g in 0..n {
                if !member[self.conj(h, g)] {
                    return Err(Error::NotNormal { elem: h, by: g });
                }
            }
        }
        let mut coset = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for e in 0..n {
            if coset[e] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(e);
            for &h in n_set {
                coset[self.mul(e, h)] = id;
            }
        }
        let q = reps.len();
        let mut mul = vec![0u16; q * q];
        for (a, &ra) in reps.iter().enumerate() {
            for (b, &rb) in reps.iter().enumerate() {
                mul[a * q + b] = coset[self.mul(ra, rb)] as u16;
            }
        }
        let generators: Vec<usize> = {
            let mut gens: Vec<usize> = self.generators.iter().map(|&g| coset[g]).collect();
            gens.sort_unstable();
            gens.dedup();
            gens
        };
        let quotient = FiniteGroup::from_parts(q, mul, generators, None)?;
        let map = coset.iter().map(|&c| c as u16).collect();
        let hom = Homomorphism {
            map,
            source_order: n,
            target_order: q,
        };
        Ok((quotient, hom))
    }

    /// `G / [G,G]` with the canonical projection.
    pub fn abelianization(&self) -> (FiniteGroup, Homomorphism) {
        let derived = self.commutator_subgroup();
        self.quotient(&derived)
            .expect("commutator subgroup is always normal")
    }

    /// Minimal number of elements whose normal closure (relative to `op`)
    /// is the whole group; 0 exactly for the trivial group.
    pub fn d_normal(&self, op: &OperatorSet) -> usize {
        if self.order == 1 {
            return 0;
        }
        let index = NormalClosureIndex::new(self, op);
        index.minimal_generating_count()
    }

    /// Extracts the subgroup on `elems` (sorted ascending, must contain the
    /// identity and be closed) as a standalone group, plus the map from new
    /// indices back to indices in `self`.
    pub fn subgroup_group(&self, elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let m = elems.len();
        let mut back = vec![usize::MAX; self.order];
        for (i, &e) in elems.iter().enumerate() {
            back[e] = i;
        }
        if elems.is_empty() || elems[0] != IDENTITY {
            return Err(Error::NotSubgroup {
                a: IDENTITY,
                b: IDENTITY,
            });
        }
        let mut mul = vec![0u16; m * m];
        for (a, &ea) in elems.iter().enumerate() {
            for (b, &eb) in elems.iter().enumerate() {
                let p = self.mul(ea, eb);
                if back[p] == usize::MAX {
                    return Err(Error::NotSubgroup { a: ea, b: eb });
                }
                mul[a * m + b] = back[p] as u16;
            }
        }
        let generators = (0..m).collect();
        let names = self
            .element_names
            .as_ref()
            .map(|names| elems.iter().map(|&e| names[e].clone()).collect());
        let sub = FiniteGroup::from_parts(m, mul, generators, names)?;
        Ok((sub, elems.to_vec()))
    }
}

fn is_bijection(perm: &[usize], degree: usize) -> bool {
    if perm.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    for &p in perm {
        if p >= degree || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// Left-to-right composition: `(p * q)(x) = q(p(x))`.
fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&x| q[x]).collect()
}

fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = perm[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = perm[x];
        }
        out.push('(');
        out.push_str(
            &cycle
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// A homomorphism between two concrete groups, stored as the image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    map: Vec<u16>,
    source_order: usize,
    target_order: usize,
}

impl Homomorphism {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        let hom = Homomorphism {
            map: map.iter().map(|&m| m as u16).collect(),
            source_order: source.order(),
            target_order: target.order(),
        };
        hom.validate(source, target)?;
        Ok(hom)
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        Homomorphism {
            map: (0..group.order()).map(|i| i as u16).collect(),
            source_order: group.order(),
            target_order: group.order(),
        }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a] as usize
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }

    pub fn validate(&self, source: &FiniteGroup, target: &FiniteGroup) -> Result<()> {
        if self.map.len() != source.order() || self.source_order != source.order() {
            return Err(Error::InvalidArgument(
                "homomorphism table length differs from source order".into(),
            ));
        }
        if self.apply(IDENTITY) != IDENTITY {
            return Err(Error::NotHomomorphism { a: 0, b: 0 });
        }
        for a in 0..source.order() {
            if self.apply(a) >= target.order() {
                return Err(Error::IndexOutOfRange {
                    index: self.apply(a),
                    order: target.order(),
                });
            }
            for b in 0..source.order() {
                if self.apply(source.mul(a, b)) != target.mul(self.apply(a), self.apply(b)) {
                    return Err(Error::NotHomomorphism { a, b });
                }
            }
        }
        Ok(())
    }

    /// Smallest source index mapping to `t`, if any.
    pub fn preimage(&self, t: usize) -> Option<usize> {
        (0..self.source_order).find(|&a| self.apply(a) == t)
    }

    /// Elements mapping to the identity.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.source_order)
            .filter(|&a| self.apply(a) == IDENTITY)
            .collect()
    }
}

/// A bijective self-homomorphism, stored with its inverse for cheap
/// two-way application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    perm: Vec<u16>,
    inv_perm: Vec<u16>,
}

impl Automorphism {
    pub fn new(group: &FiniteGroup, perm: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if !is_bijection(&perm, n) {
            return Err(Error::NotBijective { degree: n, perm });
        }
        for a in 0..n {
            for b in 0..n {
                if perm[group.mul(a, b)] != group.mul(perm[a], perm[b]) {
                    return Err(Error::NotHomomorphism { a, b });
                }
            }
        }
        let mut inv_perm = vec![0u16; n];
        for (i, &p) in perm.iter().enumerate() {
            inv_perm[p] = i as u16;
        }
        Ok(Automorphism {
            perm: perm.iter().map(|&p| p as u16).collect(),
            inv_perm,
        })
    }

    /// Inner automorphism `x -> g^{-1} x g`.
    pub fn inner(group: &FiniteGroup, g: usize) -> Self {
        let perm: Vec<usize> = (0..group.order()).map(|x| group.conj(x, g)).collect();
        Self::new(group, perm).expect("conjugation is always an automorphism")
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.perm[a] as usize
    }

    #[inline]
    pub fn apply_inverse(&self, a: usize) -> usize {
        self.inv_perm[a] as usize
    }

    pub fn degree(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> Vec<usize> {
        self.perm.iter().map(|&p| p as usize).collect()
    }

    /// Pushes the automorphism through a surjection `G -> Q`. Fails if the
    /// kernel is not invariant, in which case no induced map exists.
    pub fn induce_on_quotient(
        &self,
        hom: &Homomorphism,
        source: &FiniteGroup,
        quotient: &FiniteGroup,
    ) -> Result<Automorphism> {
        let mut perm = vec![usize::MAX; quotient.order()];
        for a in 0..source.order() {
            let q = hom.apply(a);
            let image = hom.apply(self.apply(a));
            if perm[q] == usize::MAX {
                perm[q] = image;
            } else if perm[q] != image {
                return Err(Error::Hypothesis(
                    "automorphism does not stabilize the kernel".into(),
                ));
            }
        }
        Automorphism::new(quotient, perm)
    }

    /// Restricts to an invariant subgroup, reindexed through `elems`
    /// (sorted element list of the subgroup).
    pub fn restrict(&self, group: &FiniteGroup, sub: &FiniteGroup, elems: &[usize]) -> Result<Automorphism> {
        let mut back = vec![usize::MAX; group.order()];
        for (i, &e) in elems.iter().enumerate() {
            back[e] = i;
        }
        let mut perm = Vec::with_capacity(elems.len());
        for &e in elems {
            let image = self.apply(e);
            if back[image] == usize::MAX {
                return Err(Error::Hypothesis(
                    "automorphism does not stabilize the subgroup".into(),
                ));
            }
            perm.push(back[image]);
        }
        Automorphism::new(sub, perm)
    }
}

/// A group of operators given by generating automorphisms. The empty list
/// is the plain case: only inner conjugations act.
#[derive(Debug, Clone, Default)]
pub struct OperatorSet {
    pub auto_gens: Vec<Automorphism>,
}

impl OperatorSet {
    pub fn trivial() -> Self {
        OperatorSet::default()
    }

    pub fn new(auto_gens: Vec<Automorphism>) -> Self {
        OperatorSet { auto_gens }
    }

    pub fn is_trivial(&self) -> bool {
        self.auto_gens.is_empty()
    }

    /// Deterministic descriptor folded into alphabet and cache identities.
    pub fn descriptor(&self) -> String {
        if self.auto_gens.is_empty() {
            return "autos=0".to_string();
        }
        let mut hasher = Sha256::new();
        for auto in &self.auto_gens {
            for &p in &auto.perm {
                hasher.update(p.to_le_bytes());
            }
            hasher.update([0xFF]);
        }
        let digest = hasher.finalize();
        let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        format!("autos={}:{hex}", self.auto_gens.len())
    }
}

/// Quick membership check: does the tuple normally generate the group?
/// For repeated queries over many tuples use [`NormalClosureIndex`].
pub fn is_n_generating(group: &FiniteGroup, op: &OperatorSet, entries: &[usize]) -> bool {
    group.normal_closure(op, entries).len() == group.order()
}

/// Precomputed normal-closure machinery for one `(G, operators)` pair.
///
/// Elements in the same (conjugacy + operator)-orbit share a normal closure,
/// so the index computes one closure per orbit, interns every normal
/// subgroup it encounters, and precloses the whole set under pairwise joins.
/// After that, deciding whether a tuple normally generates costs one array
/// lookup per entry. Since every normal subgroup is the join of the
/// single-orbit closures it contains, the interned set is exactly the
/// lattice of normal operator-stable subgroups.
pub struct NormalClosureIndex {
    order: usize,
    elem_class: Vec<u32>,
    class_ncl: Vec<u32>,
    subgroups: Vec<Vec<usize>>,
    join: Vec<u32>,
    full_id: u32,
    trivial_id: u32,
}

impl NormalClosureIndex {
    pub fn new(group: &FiniteGroup, op: &OperatorSet) -> Self {
        let n = group.order();
        // Orbits of elements under conjugation by generators plus the
        // automorphism generators.
        let mut elem_class = vec![u32::MAX; n];
        let mut class_reps = Vec::new();
        for e in 0..n {
            if elem_class[e] != u32::MAX {
                continue;
            }
            let class_id = class_reps.len() as u32;
            class_reps.push(e);
            let mut stack = vec![e];
            elem_class[e] = class_id;
            while let Some(x) = stack.pop() {
                let push = |y: usize, elem_class: &mut Vec<u32>, stack: &mut Vec<usize>| {
                    if elem_class[y] == u32::MAX {
                        elem_class[y] = class_id;
                        stack.push(y);
                    }
                };
                for &g in group.generators() {
                    push(group.conj(x, g), &mut elem_class, &mut stack);
                }
                for auto in &op.auto_gens {
                    push(auto.apply(x), &mut elem_class, &mut stack);
                }
            }
        }

        let mut interned: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut subgroups: Vec<Vec<usize>> = Vec::new();
        let mut intern = |elems: Vec<usize>, subgroups: &mut Vec<Vec<usize>>| -> u32 {
            if let Some(&id) = interned.get(&elems) {
                return id;
            }
            let id = subgroups.len() as u32;
            interned.insert(elems.clone(), id);
            subgroups.push(elems);
            id
        };

        let trivial_id = intern(vec![IDENTITY], &mut subgroups);
        let class_ncl: Vec<u32> = class_reps
            .iter()
            .map(|&rep| intern(group.normal_closure(op, &[rep]), &mut subgroups))
            .collect();

        // Close the interned set under joins. The join of two normal
        // subgroups is their product set, which is again a subgroup.
        let mut i = 0;
        while i < subgroups.len() {
            let mut j = 0;
            while j <= i {
                let joined = join_sets(group, &subgroups[i], &subgroups[j]);
                intern(joined, &mut subgroups);
                j += 1;
            }
            i += 1;
        }

        let m = subgroups.len();
        let mut join = vec![0u32; m * m];
        for a in 0..m {
            for b in 0..m {
                let joined = join_sets(group, &subgroups[a], &subgroups[b]);
                join[a * m + b] = *interned
                    .get(&joined)
                    .expect("join closure reached a fixpoint");
            }
        }
        let full: Vec<usize> = (0..n).collect();
        let full_id = *interned.get(&full).unwrap_or(&u32::MAX);
        debug_assert_ne!(full_id, u32::MAX, "whole group missing from lattice");
        NormalClosureIndex {
            order: n,
            elem_class,
            class_ncl,
            subgroups,
            join,
            full_id,
            trivial_id,
        }
    }

    #[inline]
    pub fn element_closure_id(&self, e: usize) -> u32 {
        self.class_ncl[self.elem_class[e] as usize]
    }

    #[inline]
    pub fn join_ids(&self, a: u32, b: u32) -> u32 {
        self.join[a as usize * self.subgroups.len() + b as usize]
    }

    pub fn full_id(&self) -> u32 {
        self.full_id
    }

    pub fn trivial_id(&self) -> u32 {
        self.trivial_id
    }

    pub fn subgroup(&self, id: u32) -> &[usize] {
        &self.subgroups[id as usize]
    }

    /// All normal operator-stable subgroups, by interned id.
    pub fn lattice_ids(&self) -> impl Iterator<Item = u32> {
        0..self.subgroups.len() as u32
    }

    pub fn closure_id_of(&self, entries: &[usize]) -> u32 {
        entries.iter().fold(self.trivial_id, |acc, &e| {
            self.join_ids(acc, self.element_closure_id(e))
        })
    }

    #[inline]
    pub fn is_generating(&self, entries: &[usize]) -> bool {
        self.closure_id_of(entries) == self.full_id
    }

    /// Minimal count of elements joining to the full group. Searches over
    /// distinct single-element closures, which is equivalent to searching
    /// over tuples.
    pub fn minimal_generating_count(&self) -> usize {
        if self.order == 1 {
            return 0;
        }
        let mut base: Vec<u32> = self.class_ncl.clone();
        base.sort_unstable();
        base.dedup();
        let mut reachable: Vec<u32> = vec![self.trivial_id];
        for t in 1..=self.subgroups.len().max(1) {
            let mut next: Vec<u32> = Vec::new();
            for &r in &reachable {
                for &b in &base {
                    let id = self.join_ids(r, b);
                    if id == self.full_id {
                        return t;
                    }
                    next.push(id);
                }
            }
            next.sort_unstable();
            next.dedup();
            reachable = next;
        }
        unreachable!("some tuple of class representatives must normally generate");
    }
}

fn join_sets(group: &FiniteGroup, a: &[usize], b: &[usize]) -> Vec<usize> {
    if a.len() == group.order() {
        return a.to_vec();
    }
    if b.len() == group.order() {
        return b.to_vec();
    }
    if a.len() == 1 {
        return b.to_vec();
    }
    if b.len() == 1 {
        return a.to_vec();
    }
    let mut member = vec![false; group.order()];
    let mut out = Vec::new();
    for &x in a {
        for &y in b {
            let p = group.mul(x, y);
            if !member[p] {
                member[p] = true;
                out.push(p);
            }
        }
    }
    out.sort_unstable();
    out
}

/// JSON description of a group, as accepted from disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupSpecFile {
    Permutation {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<usize>>,
    },
    Abelian {
        factors: Vec<usize>,
    },
}

impl GroupSpecFile {
    pub fn build(&self, cap: usize) -> Result<FiniteGroup> {
        match self {
            GroupSpecFile::Permutation { degree, generators } => {
                FiniteGroup::from_permutations(*degree, generators, cap)
            }
            GroupSpecFile::Table { table, generators } => {
                if table.len() > cap {
                    return Err(Error::OrderCapExceeded {
                        order: table.len(),
                        cap,
                    });
                }
                FiniteGroup::from_table(table, generators.clone())
            }
            GroupSpecFile::Abelian { factors } => FiniteGroup::abelian(factors, cap),
        }
    }
}

/// JSON description of an operator set: permutations of element indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutoSpecFile {
    pub autos: Vec<Vec<usize>>,
}

impl AutoSpecFile {
    pub fn build(&self, group: &FiniteGroup) -> Result<OperatorSet> {
        let autos = self
            .autos
            .iter()
            .map(|p| Automorphism::new(group, p.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(OperatorSet::new(autos))
    }
}

/// Convenience for building groups at the default cap in tests and tools.
pub fn default_cap() -> usize {
    DEFAULT_ORDER_CAP
}
