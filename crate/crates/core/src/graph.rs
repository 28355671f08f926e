//! Andrews-Curtis graphs of finite groups: moves, membership, exhaustive
//! component computation, and equivalence certificates.
//!
//! Vertices are k-tuples of element indices packed into 64-bit codes
//! (`code = sum entries[i] * n^i`). Edges are the elementary moves: multiply
//! one entry by another on the right or left, invert an entry, or conjugate
//! an entry by an allowed conjugator (a group element from `S + S^-1` or an
//! operator automorphism). The graph is never stored; neighbors are
//! regenerated on the fly and components are collected with a union-find.

use crate::error::{Error, Result};
use crate::group::{
    Automorphism, FiniteGroup, Homomorphism, NormalClosureIndex, OperatorSet, IDENTITY,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;

/// Combined bidirectional search depth cap, in plies.
pub const DEFAULT_DEPTH_CAP: usize = 64;

/// A fixed-length tuple of element indices; a vertex of an AC-graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KTuple {
    entries: Vec<usize>,
}

impl KTuple {
    pub fn new(group: &FiniteGroup, entries: Vec<usize>) -> Result<Self> {
        for &e in &entries {
            if e >= group.order() {
                return Err(Error::IndexOutOfRange {
                    index: e,
                    order: group.order(),
                });
            }
        }
        Ok(KTuple { entries })
    }

    pub fn identity(k: usize) -> Self {
        KTuple {
            entries: vec![IDENTITY; k],
        }
    }

    pub fn from_code(code: u64, k: usize, n: usize) -> Self {
        let mut entries = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            entries.push((c % n as u64) as usize);
            c /= n as u64;
        }
        KTuple { entries }
    }

    pub fn code(&self, n: usize) -> u64 {
        encode(&self.entries, n)
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn display(&self, group: &FiniteGroup) -> String {
        format!(
            "({})",
            self.entries
                .iter()
                .map(|&e| group.element_name(e))
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

#[inline]
fn encode(entries: &[usize], n: usize) -> u64 {
    let mut code = 0u64;
    for &e in entries.iter().rev() {
        code = code * n as u64 + e as u64;
    }
    code
}

/// Conjugator of a conjugation move: a group element from the declared
/// alphabet, or one of the operator automorphisms (possibly inverted).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Conjugator {
    Element {
        element: usize,
    },
    Auto {
        auto: usize,
        #[serde(default)]
        inverse: bool,
    },
}

/// One elementary transformation of a k-tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MoveSpec {
    /// `x_i <- x_i * x_j^sign`, `i != j`.
    RightMult { i: usize, j: usize, sign: i8 },
    /// `x_i <- x_j^sign * x_i`, `i != j`.
    LeftMult { i: usize, j: usize, sign: i8 },
    /// `x_i <- x_i^-1`.
    Invert { i: usize },
    /// `x_i <- w^-1 x_i w` for an element, or `x_i <- a(x_i)` for an
    /// automorphism.
    Conjugate { i: usize, w: Conjugator },
}

impl MoveSpec {
    fn position(&self) -> usize {
        match *self {
            MoveSpec::RightMult { i, .. }
            | MoveSpec::LeftMult { i, .. }
            | MoveSpec::Invert { i }
            | MoveSpec::Conjugate { i, .. } => i,
        }
    }
}

/// Which conjugator elements the move alphabet contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjugatorPolicy {
    /// `S` = the group's declared generators (the default).
    Generators,
    /// `S` = every element.
    All,
    /// An explicit subset.
    Custom(Vec<usize>),
}

impl ConjugatorPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            ConjugatorPolicy::Generators => "gens",
            ConjugatorPolicy::All => "all",
            ConjugatorPolicy::Custom(_) => "custom",
        }
    }
}

/// The full move alphabet for one group and operator set.
pub struct MoveAlphabet<'g> {
    group: &'g FiniteGroup,
    op: &'g OperatorSet,
    conjugators: Vec<usize>,
    policy: ConjugatorPolicy,
}

impl<'g> MoveAlphabet<'g> {
    pub fn new(group: &'g FiniteGroup, op: &'g OperatorSet, policy: ConjugatorPolicy) -> Result<Self> {
        let base: Vec<usize> = match &policy {
            ConjugatorPolicy::Generators => group.generators().to_vec(),
            ConjugatorPolicy::All => (0..group.order()).collect(),
            ConjugatorPolicy::Custom(set) => set.clone(),
        };
        for &s in &base {
            if s >= group.order() {
                return Err(Error::IndexOutOfRange {
                    index: s,
                    order: group.order(),
                });
            }
        }
        // S union S^-1, first occurrences keep their position.
        let mut conjugators = Vec::new();
        let mut seen = vec![false; group.order()];
        for &s in &base {
            if !seen[s] {
                seen[s] = true;
                conjugators.push(s);
            }
        }
        for &s in &base {
            let si = group.inv(s);
            if !seen[si] {
                seen[si] = true;
                conjugators.push(si);
            }
        }
        Ok(MoveAlphabet {
            group,
            op,
            conjugators,
            policy,
        })
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn operators(&self) -> &'g OperatorSet {
        self.op
    }

    /// The closed conjugator element set `S + S^-1`.
    pub fn conjugators(&self) -> &[usize] {
        &self.conjugators
    }

    pub fn policy(&self) -> &ConjugatorPolicy {
        &self.policy
    }

    fn contains_conjugator(&self, w: usize) -> bool {
        self.conjugators.contains(&w)
    }

    /// Enumerates every valid move for tuples of length `k`, in a fixed
    /// order. The list length is at most `4k(k-1) + k + 2k(|S| + |autos|)`.
    pub fn moves(&self, k: usize) -> Vec<MoveSpec> {
        let mut out = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                for sign in [1i8, -1] {
                    out.push(MoveSpec::RightMult { i, j, sign });
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                for sign in [1i8, -1] {
                    out.push(MoveSpec::LeftMult { i, j, sign });
                }
            }
        }
        for i in 0..k {
            out.push(MoveSpec::Invert { i });
        }
        for i in 0..k {
            for &w in &self.conjugators {
                out.push(MoveSpec::Conjugate {
                    i,
                    w: Conjugator::Element { element: w },
                });
            }
            for (a, _) in self.op.auto_gens.iter().enumerate() {
                for inverse in [false, true] {
                    out.push(MoveSpec::Conjugate {
                        i,
                        w: Conjugator::Auto { auto: a, inverse },
                    });
                }
            }
        }
        out
    }

    /// The move undoing `m` within the same alphabet.
    pub fn inverse_move(&self, m: &MoveSpec) -> MoveSpec {
        match *m {
            MoveSpec::RightMult { i, j, sign } => MoveSpec::RightMult { i, j, sign: -sign },
            MoveSpec::LeftMult { i, j, sign } => MoveSpec::LeftMult { i, j, sign: -sign },
            MoveSpec::Invert { i } => MoveSpec::Invert { i },
            MoveSpec::Conjugate {
                i,
                w: Conjugator::Element { element },
            } => MoveSpec::Conjugate {
                i,
                w: Conjugator::Element {
                    element: self.group.inv(element),
                },
            },
            MoveSpec::Conjugate {
                i,
                w: Conjugator::Auto { auto, inverse },
            } => MoveSpec::Conjugate {
                i,
                w: Conjugator::Auto {
                    auto,
                    inverse: !inverse,
                },
            },
        }
    }

    /// Identity string for caches and persisted tables: pins the group
    /// order, tuple length, conjugator content and operator content.
    pub fn descriptor(&self, k: usize) -> String {
        let mut hasher = Sha256::new();
        for &c in &self.conjugators {
            hasher.update((c as u32).to_le_bytes());
        }
        let digest = hasher.finalize();
        let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        format!(
            "k={k};n={};S={}:{}:{hex};{}",
            self.group.order(),
            self.policy.name(),
            self.conjugators.len(),
            self.op.descriptor()
        )
    }

    pub(crate) fn apply_into(&self, entries: &mut [usize], m: &MoveSpec) {
        let g = self.group;
        match *m {
            MoveSpec::RightMult { i, j, sign } => {
                let b = if sign > 0 {
                    entries[j]
                } else {
                    g.inv(entries[j])
                };
                entries[i] = g.mul(entries[i], b);
            }
            MoveSpec::LeftMult { i, j, sign } => {
                let b = if sign > 0 {
                    entries[j]
                } else {
                    g.inv(entries[j])
                };
                entries[i] = g.mul(b, entries[i]);
            }
            MoveSpec::Invert { i } => {
                entries[i] = g.inv(entries[i]);
            }
            MoveSpec::Conjugate {
                i,
                w: Conjugator::Element { element },
            } => {
                entries[i] = g.conj(entries[i], element);
            }
            MoveSpec::Conjugate {
                i,
                w: Conjugator::Auto { auto, inverse },
            } => {
                let a: &Automorphism = &self.op.auto_gens[auto];
                entries[i] = if inverse {
                    a.apply_inverse(entries[i])
                } else {
                    a.apply(entries[i])
                };
            }
        }
    }

    fn validate_move(&self, m: &MoveSpec, k: usize) -> Result<()> {
        if m.position() >= k {
            return Err(Error::MalformedMove(format!(
                "position {} out of range for k = {k}",
                m.position()
            )));
        }
        match *m {
            MoveSpec::RightMult { i, j, sign } | MoveSpec::LeftMult { i, j, sign } => {
                if i == j {
                    return Err(Error::MalformedMove(
                        "multiplication positions must differ".into(),
                    ));
                }
                if j >= k {
                    return Err(Error::MalformedMove(format!(
                        "position {j} out of range for k = {k}"
                    )));
                }
                if sign != 1 && sign != -1 {
                    return Err(Error::MalformedMove(format!("sign must be +-1, got {sign}")));
                }
            }
            MoveSpec::Invert { .. } => {}
            MoveSpec::Conjugate {
                w: Conjugator::Element { element },
                ..
            } => {
                if !self.contains_conjugator(element) {
                    return Err(Error::MalformedMove(format!(
                        "conjugator {element} is not in the declared alphabet"
                    )));
                }
            }
            MoveSpec::Conjugate {
                w: Conjugator::Auto { auto, .. },
                ..
            } => {
                if auto >= self.op.auto_gens.len() {
                    return Err(Error::MalformedMove(format!(
                        "automorphism index {auto} out of range"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Applies a single validated move to a tuple.
pub fn apply_move(t: &KTuple, m: &MoveSpec, alphabet: &MoveAlphabet) -> Result<KTuple> {
    alphabet.validate_move(m, t.len())?;
    let mut entries = t.entries.clone();
    alphabet.apply_into(&mut entries, m);
    Ok(KTuple { entries })
}

/// All images of `t` under the alphabet's moves. Duplicates and self-loops
/// are not filtered.
pub fn neighbors(t: &KTuple, alphabet: &MoveAlphabet) -> Vec<KTuple> {
    alphabet
        .moves(t.len())
        .iter()
        .map(|m| {
            let mut entries = t.entries.clone();
            alphabet.apply_into(&mut entries, m);
            KTuple { entries }
        })
        .collect()
}

/// Does the tuple generate the group as a normal operator-stable subgroup?
pub fn is_n_generating(group: &FiniteGroup, op: &OperatorSet, t: &KTuple) -> bool {
    crate::group::is_n_generating(group, op, t.entries())
}

/// Checks `n^k` against the packing limit and the code budget.
pub fn state_space_size(n: usize, k: usize, budget: u64) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..k {
        total = total
            .checked_mul(n as u64)
            .filter(|&t| t < (1u64 << 63))
            .ok_or(Error::StateSpaceTooLarge(n, k))?;
    }
    if total > budget {
        return Err(Error::BudgetExceeded {
            required: total,
            budget,
        });
    }
    Ok(total)
}

/// Iterator over the normally generating k-tuples in increasing code order.
pub struct NkIter {
    index: NormalClosureIndex,
    n: usize,
    total: u64,
    next_code: u64,
    entries: Vec<usize>,
}

impl Iterator for NkIter {
    type Item = KTuple;

    fn next(&mut self) -> Option<KTuple> {
        while self.next_code < self.total {
            let code = self.next_code;
            let generating = self.index.is_generating(&self.entries);
            let item = if generating {
                Some(KTuple {
                    entries: self.entries.clone(),
                })
            } else {
                None
            };
            self.next_code = code + 1;
            // odometer increment
            for slot in self.entries.iter_mut() {
                *slot += 1;
                if *slot < self.n {
                    break;
                }
                *slot = 0;
            }
            if item.is_some() {
                return item;
            }
        }
        None
    }
}

/// Streams `N_k(G, operators)` in increasing code order.
pub fn enumerate_nk(
    group: &FiniteGroup,
    op: &OperatorSet,
    k: usize,
    budget: u64,
) -> Result<NkIter> {
    let total = state_space_size(group.order(), k, budget)?;
    Ok(NkIter {
        index: NormalClosureIndex::new(group, op),
        n: group.order(),
        total,
        next_code: 0,
        entries: vec![0; k],
    })
}

/// The component partition of an AC-graph, with deterministic ids:
/// components are numbered by their smallest tuple code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTable {
    k: usize,
    group_order: usize,
    group_hash: String,
    alphabet_descriptor: String,
    engine_version: String,
    codes: Vec<u64>,
    labels: Vec<u32>,
    reps: Vec<u64>,
}

impl ComponentTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn group_hash(&self) -> &str {
        &self.group_hash
    }

    pub fn alphabet_descriptor(&self) -> &str {
        &self.alphabet_descriptor
    }

    pub fn engine_version(&self) -> &str {
        &self.engine_version
    }

    pub fn vertex_count(&self) -> usize {
        self.codes.len()
    }

    pub fn component_count(&self) -> usize {
        self.reps.len()
    }

    /// Sorted codes of all vertices.
    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    /// Labels parallel to [`Self::codes`].
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Smallest code in each component, indexed by component id.
    pub fn reps(&self) -> &[u64] {
        &self.reps
    }

    pub fn label_of_code(&self, code: u64) -> Option<u32> {
        self.codes
            .binary_search(&code)
            .ok()
            .map(|idx| self.labels[idx])
    }

    pub fn label_of(&self, t: &KTuple) -> Option<u32> {
        self.label_of_code(t.code(self.group_order))
    }

    /// Rebuilds a table from persisted parts, re-checking internal
    /// consistency.
    #[allow(clippy::too_many_arguments)]
    pub fn from_raw_parts(
        k: usize,
        group_order: usize,
        group_hash: String,
        alphabet_descriptor: String,
        engine_version: String,
        codes: Vec<u64>,
        labels: Vec<u32>,
    ) -> Result<Self> {
        if codes.len() != labels.len() {
            return Err(Error::TableMismatch(
                "codes and labels have different lengths".into(),
            ));
        }
        if !codes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::TableMismatch("codes are not sorted".into()));
        }
        let count = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut reps = vec![u64::MAX; count];
        for (&code, &label) in codes.iter().zip(&labels) {
            if (label as usize) >= count {
                return Err(Error::TableMismatch("label out of range".into()));
            }
            if reps[label as usize] == u64::MAX {
                reps[label as usize] = code;
            }
        }
        if reps.iter().any(|&r| r == u64::MAX) {
            return Err(Error::TableMismatch("component id gap".into()));
        }
        if !reps.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::TableMismatch(
                "component ids are not ordered by smallest code".into(),
            ));
        }
        Ok(ComponentTable {
            k,
            group_order,
            group_hash,
            alphabet_descriptor,
            engine_version,
            codes,
            labels,
            reps,
        })
    }
}

/// Computes the full component partition of the AC-graph on
/// `N_k(G, operators)` for the given alphabet.
pub fn components(alphabet: &MoveAlphabet, k: usize, budget: u64) -> Result<ComponentTable> {
    let group = alphabet.group();
    let op = alphabet.operators();
    let n = group.order();
    let total = state_space_size(n, k, budget)?;
    let ncl = NormalClosureIndex::new(group, op);

    let mut codes: Vec<u64> = Vec::new();
    let mut entries = vec![0usize; k];
    for code in 0..total {
        if ncl.is_generating(&entries) {
            codes.push(code);
        }
        for slot in entries.iter_mut() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }

    // Dense code -> vertex lookup when the space is reasonably filled,
    // hash map when N_k is sparse relative to n^k.
    let dense = total <= (1 << 24) && codes.len() as u64 * 16 >= total;
    let mut dense_lookup: Vec<u32> = Vec::new();
    let mut sparse_lookup: HashMap<u64, u32> = HashMap::new();
    if dense {
        dense_lookup = vec![u32::MAX; total as usize];
        for (idx, &code) in codes.iter().enumerate() {
            dense_lookup[code as usize] = idx as u32;
        }
    } else {
        sparse_lookup.reserve(codes.len());
        for (idx, &code) in codes.iter().enumerate() {
            sparse_lookup.insert(code, idx as u32);
        }
    }
    let lookup = |code: u64| -> Option<u32> {
        if dense {
            let v = dense_lookup[code as usize];
            (v != u32::MAX).then_some(v)
        } else {
            sparse_lookup.get(&code).copied()
        }
    };

    let moves = alphabet.moves(k);
    let mut dsu = UnionFind::new(codes.len());
    let mut scratch = vec![0usize; k];
    for (idx, &code) in codes.iter().enumerate() {
        let base = KTuple::from_code(code, k, n);
        for m in &moves {
            scratch.copy_from_slice(base.entries());
            alphabet.apply_into(&mut scratch, m);
            let ncode = encode(&scratch, n);
            if ncode == code {
                continue;
            }
            let nidx = lookup(ncode).ok_or_else(|| {
                Error::Internal(format!(
                    "move {m:?} left N_k: code {code} -> {ncode}"
                ))
            })?;
            dsu.union(idx as u32, nidx);
        }
    }

    let mut label_of_root: HashMap<u32, u32> = HashMap::new();
    let mut labels = Vec::with_capacity(codes.len());
    let mut reps = Vec::new();
    for (idx, &code) in codes.iter().enumerate() {
        let root = dsu.find(idx as u32);
        let next = label_of_root.len() as u32;
        let label = *label_of_root.entry(root).or_insert(next);
        if label == next && reps.len() == next as usize {
            reps.push(code);
        }
        labels.push(label);
    }

    Ok(ComponentTable {
        k,
        group_order: n,
        group_hash: group.table_hash(),
        alphabet_descriptor: alphabet.descriptor(k),
        engine_version: crate::ENGINE_VERSION.to_string(),
        codes,
        labels,
        reps,
    })
}

/// A replayable move sequence transforming one tuple into another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub moves: Vec<MoveSpec>,
}

impl Certificate {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn replay(&self, from: &KTuple, alphabet: &MoveAlphabet) -> Result<KTuple> {
        let mut current = from.clone();
        for m in &self.moves {
            current = apply_move(&current, m, alphabet)?;
        }
        Ok(current)
    }
}

/// Outcome of an equivalence query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent(Certificate),
    DifferentComponents,
    /// The search hit the depth cap. Never used for a negative answer;
    /// those come from the component table only.
    Inconclusive,
}

/// Decides whether `u ~ v`, returning a certificate found by bidirectional
/// breadth-first search. Negative answers are read off the component table;
/// the search itself can only produce a certificate or give up at the
/// depth cap.
pub fn equivalent(
    u: &KTuple,
    v: &KTuple,
    alphabet: &MoveAlphabet,
    table: &ComponentTable,
    depth_cap: usize,
) -> Result<Equivalence> {
    let n = alphabet.group().order();
    let lu = table
        .label_of(u)
        .ok_or_else(|| Error::NotNGenerating(u.entries().to_vec()))?;
    let lv = table
        .label_of(v)
        .ok_or_else(|| Error::NotNGenerating(v.entries().to_vec()))?;
    if lu != lv {
        return Ok(Equivalence::DifferentComponents);
    }
    let k = u.len();
    let u_code = u.code(n);
    let v_code = v.code(n);
    if u_code == v_code {
        return Ok(Equivalence::Equivalent(Certificate { moves: vec![] }));
    }

    let moves = alphabet.moves(k);
    // predecessor maps: code -> (parent code, move applied to parent)
    let mut fwd: HashMap<u64, Option<(u64, MoveSpec)>> = HashMap::new();
    let mut bwd: HashMap<u64, Option<(u64, MoveSpec)>> = HashMap::new();
    fwd.insert(u_code, None);
    bwd.insert(v_code, None);
    let mut fwd_frontier = vec![u_code];
    let mut bwd_frontier = vec![v_code];

    let mut meet: Option<u64> = None;
    let mut plies = 0usize;
    while meet.is_none() {
        if plies >= depth_cap {
            return Ok(Equivalence::Inconclusive);
        }
        plies += 1;
        let expand_forward = fwd_frontier.len() <= bwd_frontier.len();
        let (visited, other, frontier) = if expand_forward {
            (&mut fwd, &bwd, &mut fwd_frontier)
        } else {
            (&mut bwd, &fwd, &mut bwd_frontier)
        };
        if frontier.is_empty() {
            // Same component, so the frontier cannot die before meeting.
            return Err(Error::Internal(
                "search frontier exhausted inside one component".into(),
            ));
        }
        let mut next_frontier = Vec::new();
        let mut scratch = vec![0usize; k];
        for &code in frontier.iter() {
            let base = KTuple::from_code(code, k, n);
            for m in &moves {
                scratch.copy_from_slice(base.entries());
                alphabet.apply_into(&mut scratch, m);
                let ncode = encode(&scratch, n);
                if visited.contains_key(&ncode) {
                    continue;
                }
                visited.insert(ncode, Some((code, *m)));
                next_frontier.push(ncode);
                if other.contains_key(&ncode) {
                    meet = Some(ncode);
                }
            }
            if meet.is_some() {
                break;
            }
        }
        *frontier = next_frontier;
    }

    let meet = meet.expect("loop exits only with a meeting point");
    let mut forward_moves = Vec::new();
    let mut cursor = meet;
    while let Some(&Some((parent, m))) = fwd.get(&cursor) {
        forward_moves.push(m);
        cursor = parent;
    }
    forward_moves.reverse();
    let mut backward_moves = Vec::new();
    let mut cursor = meet;
    while let Some(&Some((parent, m))) = bwd.get(&cursor) {
        // m takes parent (closer to v) to cursor; invert to walk toward v.
        backward_moves.push(alphabet.inverse_move(&m));
        cursor = parent;
    }
    let mut all_moves = forward_moves;
    all_moves.extend(backward_moves);
    let certificate = Certificate { moves: all_moves };
    let replayed = certificate.replay(u, alphabet)?;
    if replayed != *v {
        return Err(Error::Internal(format!(
            "certificate replay produced {:?}, expected {:?}",
            replayed.entries(),
            v.entries()
        )));
    }
    Ok(Equivalence::Equivalent(certificate))
}

/// Entrywise image of a tuple along a homomorphism.
pub fn project_tuple(hom: &Homomorphism, t: &KTuple) -> KTuple {
    KTuple {
        entries: t.entries.iter().map(|&e| hom.apply(e)).collect(),
    }
}

/// Maps a certificate through a surjection: element conjugators are
/// replaced by their images, positions and kinds stay fixed.
pub fn map_certificate(hom: &Homomorphism, cert: &Certificate) -> Certificate {
    Certificate {
        moves: cert
            .moves
            .iter()
            .map(|m| match *m {
                MoveSpec::Conjugate {
                    i,
                    w: Conjugator::Element { element },
                } => MoveSpec::Conjugate {
                    i,
                    w: Conjugator::Element {
                        element: hom.apply(element),
                    },
                },
                other => other,
            })
            .collect(),
    }
}

/// Replays a source-side certificate in the target: a certificate carrying
/// `U` to `V` must carry the image of `U` to the image of `V`. Divergence
/// signals an implementation bug and comes back as an error.
pub fn lift_equivalence_check(
    hom: &Homomorphism,
    u: &KTuple,
    v: &KTuple,
    cert: &Certificate,
    target_alphabet: &MoveAlphabet,
) -> Result<bool> {
    let mapped = map_certificate(hom, cert);
    let from = project_tuple(hom, u);
    let expect = project_tuple(hom, v);
    let got = mapped.replay(&from, target_alphabet)?;
    if got != expect {
        return Err(Error::Internal(format!(
            "projected certificate replay diverged: got {:?}, expected {:?}",
            got.entries(),
            expect.entries()
        )));
    }
    Ok(true)
}

/// Builds the image alphabet of `alphabet` under `hom`: conjugator elements
/// map through, operator generators are replaced by the supplied induced
/// operator set.
pub fn image_alphabet<'g>(
    alphabet: &MoveAlphabet,
    hom: &Homomorphism,
    target: &'g FiniteGroup,
    target_op: &'g OperatorSet,
) -> Result<MoveAlphabet<'g>> {
    let mut images: Vec<usize> = alphabet
        .conjugators()
        .iter()
        .map(|&w| hom.apply(w))
        .collect();
    images.sort_unstable();
    images.dedup();
    MoveAlphabet::new(target, target_op, ConjugatorPolicy::Custom(images))
}

/// Union-find with path halving and union by size.
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(len: usize) -> UnionFind {
        UnionFind {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut x = x;
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::OperatorSet;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], 64).unwrap()
    }

    fn a5() -> FiniteGroup {
        FiniteGroup::from_permutations(5, &[vec![1, 2, 3, 4, 0], vec![1, 2, 0, 3, 4]], 128)
            .unwrap()
    }

    #[test]
    fn code_round_trip() {
        let t = KTuple::from_code(17, 3, 6);
        assert_eq!(t.code(6), 17);
        assert_eq!(t.entries(), &[5, 2, 0]);
    }

    #[test]
    fn invert_twice_is_identity() {
        let g = s3();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&g, &op, ConjugatorPolicy::Generators).unwrap();
        let t = KTuple::new(&g, vec![2, 1]).unwrap();
        let m = MoveSpec::Invert { i: 0 };
        let once = apply_move(&t, &m, &alphabet).unwrap();
        let twice = apply_move(&once, &m, &alphabet).unwrap();
        assert_eq!(twice, t);
    }

    #[test]
    fn right_mult_in_cyclic_group() {
        let z6 = FiniteGroup::abelian(&[6], 64).unwrap();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&z6, &op, ConjugatorPolicy::Generators).unwrap();
        let t = KTuple::new(&z6, vec![2, 3]).unwrap();
        let m = MoveSpec::RightMult {
            i: 0,
            j: 1,
            sign: 1,
        };
        assert_eq!(apply_move(&t, &m, &alphabet).unwrap().entries(), &[5, 3]);
    }

    #[test]
    fn conjugation_move_matches_group_conjugation() {
        let g = s3();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&g, &op, ConjugatorPolicy::All).unwrap();
        let t = KTuple::new(&g, vec![2, 0]).unwrap();
        let m = MoveSpec::Conjugate {
            i: 0,
            w: Conjugator::Element { element: 1 },
        };
        let moved = apply_move(&t, &m, &alphabet).unwrap();
        assert_eq!(moved.entries(), &[4, 0]);
    }

    #[test]
    fn malformed_moves_rejected() {
        let g = s3();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&g, &op, ConjugatorPolicy::Generators).unwrap();
        let t = KTuple::new(&g, vec![2, 1]).unwrap();
        assert!(apply_move(
            &t,
            &MoveSpec::RightMult { i: 0, j: 0, sign: 1 },
            &alphabet
        )
        .is_err());
        assert!(apply_move(&t, &MoveSpec::Invert { i: 5 }, &alphabet).is_err());
        // 5 = (0 2) is not among the generators or their inverses.
        assert!(apply_move(
            &t,
            &MoveSpec::Conjugate {
                i: 0,
                w: Conjugator::Element { element: 5 }
            },
            &alphabet
        )
        .is_err());
    }

    #[test]
    fn neighbor_count_bound() {
        let g = s3();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&g, &op, ConjugatorPolicy::Generators).unwrap();
        let k = 2;
        let t = KTuple::new(&g, vec![2, 1]).unwrap();
        let degree = neighbors(&t, &alphabet).len();
        let s = alphabet.conjugators().len();
        assert!(degree <= 4 * k * (k - 1) + k + k * s);
        // Invert moves contribute exactly k of them.
        let inverts = alphabet
            .moves(k)
            .iter()
            .filter(|m| matches!(m, MoveSpec::Invert { .. }))
            .count();
        assert_eq!(inverts, k);
    }

    #[test]
    fn trivial_group_single_vertex() {
        let g = FiniteGroup::from_permutations(1, &[], 8).unwrap();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&g, &op, ConjugatorPolicy::All).unwrap();
        let table = components(&alphabet, 2, 1 << 20).unwrap();
        assert_eq!(table.vertex_count(), 1);
        assert_eq!(table.component_count(), 1);
        let t = KTuple::identity(2);
        for nb in neighbors(&t, &alphabet) {
            assert_eq!(nb, t);
        }
    }

    #[test]
    fn nk_counts() {
        let op = OperatorSet::trivial();
        let z2 = FiniteGroup::abelian(&[2], 64).unwrap();
        assert_eq!(enumerate_nk(&z2, &op, 2, 1 << 20).unwrap().count(), 3);
        let g = s3();
        assert_eq!(enumerate_nk(&g, &op, 1, 1 << 20).unwrap().count(), 3);
        assert_eq!(enumerate_nk(&a5(), &op, 2, 1 << 20).unwrap().count(), 3599);
    }

    #[test]
    fn nk_membership_examples() {
        let g = s3();
        let op = OperatorSet::trivial();
        assert!(is_n_generating(
            &g,
            &op,
            &KTuple::new(&g, vec![2, 0]).unwrap()
        ));
        // Both entries inside A3 only normally generate A3.
        assert!(!is_n_generating(
            &g,
            &op,
            &KTuple::new(&g, vec![1, 3]).unwrap()
        ));
        assert!(!is_n_generating(&g, &op, &KTuple::identity(2)));
    }

    #[test]
    fn z2_pairs_form_one_component() {
        let z2 = FiniteGroup::abelian(&[2], 64).unwrap();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&z2, &op, ConjugatorPolicy::All).unwrap();
        let table = components(&alphabet, 2, 1 << 20).unwrap();
        assert_eq!(table.vertex_count(), 3);
        assert_eq!(table.component_count(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let g = a5();
        let op = OperatorSet::trivial();
        assert!(matches!(
            enumerate_nk(&g, &op, 5, 1 << 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn equivalence_in_s3_with_certificate() {
        let g = s3();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&g, &op, ConjugatorPolicy::Generators).unwrap();
        let table = components(&alphabet, 2, 1 << 20).unwrap();
        let u = KTuple::new(&g, vec![2, 0]).unwrap();
        let v = KTuple::new(&g, vec![5, 0]).unwrap();
        match equivalent(&u, &v, &alphabet, &table, DEFAULT_DEPTH_CAP).unwrap() {
            Equivalence::Equivalent(cert) => {
                assert_eq!(cert.replay(&u, &alphabet).unwrap(), v);
            }
            other => panic!("expected certificate, got {other:?}"),
        }
        // Same tuple: empty certificate.
        match equivalent(&u, &u, &alphabet, &table, DEFAULT_DEPTH_CAP).unwrap() {
            Equivalence::Equivalent(cert) => assert!(cert.is_empty()),
            other => panic!("expected empty certificate, got {other:?}"),
        }
    }

    #[test]
    fn non_member_tuple_is_an_error() {
        let g = s3();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&g, &op, ConjugatorPolicy::Generators).unwrap();
        let table = components(&alphabet, 2, 1 << 20).unwrap();
        let u = KTuple::new(&g, vec![2, 0]).unwrap();
        let bad = KTuple::identity(2);
        assert!(equivalent(&u, &bad, &alphabet, &table, 8).is_err());
    }

    #[test]
    fn projection_examples() {
        let g = s3();
        let (ab, hom) = g.abelianization();
        assert_eq!(ab.order(), 2);
        let t = KTuple::new(&g, vec![2, 1]).unwrap();
        let p = project_tuple(&hom, &t);
        assert_eq!(p.entries(), &[1, 0]);
        let id = Homomorphism::identity(&g);
        assert_eq!(project_tuple(&id, &t), t);
        assert_eq!(
            project_tuple(&hom, &KTuple::identity(2)),
            KTuple::identity(2)
        );
    }

    #[test]
    fn certificate_lifts_through_abelianization() {
        let g = s3();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&g, &op, ConjugatorPolicy::Generators).unwrap();
        let table = components(&alphabet, 2, 1 << 20).unwrap();
        let (ab, hom) = g.abelianization();
        let ab_op = OperatorSet::trivial();
        let ab_alphabet = image_alphabet(&alphabet, &hom, &ab, &ab_op).unwrap();
        let u = KTuple::new(&g, vec![2, 0]).unwrap();
        let v = KTuple::new(&g, vec![4, 1]).unwrap();
        if let Equivalence::Equivalent(cert) =
            equivalent(&u, &v, &alphabet, &table, DEFAULT_DEPTH_CAP).unwrap()
        {
            assert!(lift_equivalence_check(&hom, &u, &v, &cert, &ab_alphabet).unwrap());
        } else {
            panic!("S3 pairs with a transposition entry are equivalent");
        }
        // Empty certificate lifts trivially.
        let empty = Certificate { moves: vec![] };
        assert!(lift_equivalence_check(&hom, &u, &u, &empty, &ab_alphabet).unwrap());
    }

    #[test]
    fn every_move_has_an_inverse() {
        let g = s3();
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(&g, &op, ConjugatorPolicy::All).unwrap();
        let t = KTuple::new(&g, vec![2, 1]).unwrap();
        for m in alphabet.moves(2) {
            let there = apply_move(&t, &m, &alphabet).unwrap();
            let back = apply_move(&there, &alphabet.inverse_move(&m), &alphabet).unwrap();
            assert_eq!(back, t, "move {m:?}");
        }
    }

    #[test]
    fn move_serialization_format() {
        let m = MoveSpec::RightMult {
            i: 0,
            j: 1,
            sign: -1,
        };
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"kind":"RightMult","i":0,"j":1,"sign":-1}"#
        );
        let c = MoveSpec::Conjugate {
            i: 2,
            w: Conjugator::Element { element: 5 },
        };
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"kind":"Conjugate","i":2,"w":{"element":5}}"#);
        let back: MoveSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
