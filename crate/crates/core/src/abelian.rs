//! Canonical decompositions of finite abelian groups and the component
//! count of their Andrews-Curtis graphs.
//!
//! For an abelian group the normally generating tuples are just the
//! generating tuples, and the component structure is governed by the
//! invariant-factor decomposition: with `d` factors and smallest factor
//! `m`, the graph on d-tuples splits into one component per `{+1,-1}`-orbit
//! of units mod `m`, while `k > d` gives a single component
//! (Diaconis-Graham).

use crate::error::{Error, Result};
use crate::graph::{components, ComponentTable, ConjugatorPolicy, KTuple, MoveAlphabet};
use crate::group::{FiniteGroup, OperatorSet, IDENTITY};

/// Invariant factors `m_1 | m_2 | ... | m_d` (each at least 2) together
/// with element indices generating the corresponding cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub factors: Vec<usize>,
    pub gens: Vec<usize>,
}

impl AbelianInvariants {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Smallest invariant factor; drives the component count.
    pub fn smallest_factor(&self) -> Option<usize> {
        self.factors.first().copied()
    }

    /// Re-checks the defining invariants against the group.
    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        if self.factors.len() != self.gens.len() {
            return Err(Error::Internal(
                "factor and generator counts differ".into(),
            ));
        }
        let mut product: usize = 1;
        for w in self.factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Internal(format!(
                    "divisibility chain broken: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        for (&f, &g) in self.factors.iter().zip(&self.gens) {
            if f < 2 {
                return Err(Error::Internal(format!("invariant factor {f} below 2")));
            }
            if group.element_order(g) != f {
                return Err(Error::Internal(format!(
                    "generator {g} has order {} instead of {f}",
                    group.element_order(g)
                )));
            }
            product *= f;
        }
        if product != group.order() {
            return Err(Error::Internal(format!(
                "factor product {product} differs from group order {}",
                group.order()
            )));
        }
        if group.subgroup_closure(&self.gens).len() != group.order() {
            return Err(Error::Internal(
                "invariant-factor generators do not span the group".into(),
            ));
        }
        // The cyclic factors intersect pairwise trivially.
        for i in 0..self.gens.len() {
            let a = group.subgroup_closure(&[self.gens[i]]);
            for j in (i + 1)..self.gens.len() {
                let b = group.subgroup_closure(&[self.gens[j]]);
                let common = a.iter().filter(|e| b.binary_search(e).is_ok()).count();
                if common != 1 {
                    return Err(Error::Internal(format!(
                        "cyclic factors {i} and {j} overlap in {common} elements"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn ensure_abelian(group: &FiniteGroup) -> Result<()> {
    let n = group.order();
    for a in 0..n {
        for b in (a + 1)..n {
            if group.mul(a, b) != group.mul(b, a) {
                return Err(Error::NotAbelian { a, b });
            }
        }
    }
    Ok(())
}

/// Invariant-factor decomposition of a concrete abelian group.
///
/// Peels off a cyclic subgroup of maximal order (smallest element index
/// wins ties), decomposes the quotient recursively, and corrects the lifted
/// generators by a power of the peeled generator so their orders match the
/// quotient factors. No matrix normal form is needed since the group is
/// given concretely.
pub fn invariant_factors(group: &FiniteGroup) -> Result<AbelianInvariants> {
    ensure_abelian(group)?;
    let pairs = decompose(group)?;
    let inv = AbelianInvariants {
        factors: pairs.iter().map(|&(f, _)| f).collect(),
        gens: pairs.iter().map(|&(_, g)| g).collect(),
    };
    inv.validate(group)?;
    Ok(inv)
}

fn decompose(group: &FiniteGroup) -> Result<Vec<(usize, usize)>> {
    if group.order() == 1 {
        return Ok(Vec::new());
    }
    let n = group.order();
    let orders: Vec<usize> = (0..n).map(|e| group.element_order(e)).collect();
    let exponent = *orders.iter().max().expect("group is nonempty");
    let z = (0..n)
        .find(|&e| orders[e] == exponent)
        .expect("some element realizes the exponent");
    let z_cyclic = group.subgroup_closure(&[z]);
    let (quotient, hom) = group.quotient(&z_cyclic)?;
    let inner = decompose(&quotient)?;
    let mut out = Vec::with_capacity(inner.len() + 1);
    for (order_q, gen_q) in inner {
        let lift = hom
            .preimage(gen_q)
            .expect("projection onto a quotient is surjective");
        // lift^order_q lands in <z>; divide out the right power of z.
        let excess = group.pow(lift, order_q as i64);
        let mut t = 0usize;
        let mut acc = IDENTITY;
        while acc != excess {
            acc = group.mul(acc, z);
            t += 1;
        }
        debug_assert_eq!(t % order_q, 0, "exponent maximality guarantees divisibility");
        let corrected = group.mul(lift, group.pow(z, -((t / order_q) as i64)));
        debug_assert_eq!(group.element_order(corrected), order_q);
        out.push((order_q, corrected));
    }
    out.push((exponent, z));
    Ok(out)
}

fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Number of components of the AC-graph on generating k-tuples, from the
/// invariant factors alone. Defined for `k >= 2` and `k >= d`: one
/// component when `k > d`, otherwise one per `{+1,-1}`-orbit of units
/// modulo the smallest factor (which is a single orbit for factors 1
/// and 2).
pub fn dg_component_count(inv: &AbelianInvariants, k: usize) -> Result<u64> {
    let d = inv.rank();
    if k < 2 {
        return Err(Error::Hypothesis(format!(
            "component-count formula is stated for k >= 2, got k = {k}"
        )));
    }
    if k < d {
        return Err(Error::Hypothesis(format!(
            "no normally generating {k}-tuples exist: rank is {d}"
        )));
    }
    if k > d {
        return Ok(1);
    }
    let m = inv.factors[0] as u64;
    if m <= 2 {
        Ok(1)
    } else {
        Ok(euler_phi(m) / 2)
    }
}

/// The representative tuple `(z_1^lambda, z_2, ..., z_d)` for a unit
/// `lambda` modulo the smallest factor.
pub fn dg_representative(
    group: &FiniteGroup,
    inv: &AbelianInvariants,
    lambda: u64,
) -> Result<KTuple> {
    let d = inv.rank();
    if d == 0 {
        return Err(Error::Hypothesis(
            "the trivial group has no representative tuples".into(),
        ));
    }
    let m = inv.factors[0] as u64;
    let lam = lambda % m;
    if gcd(lam, m) != 1 {
        return Err(Error::NotAUnit(lambda, m));
    }
    let mut entries = Vec::with_capacity(d);
    entries.push(group.pow(inv.gens[0], lam as i64));
    entries.extend_from_slice(&inv.gens[1..]);
    KTuple::new(group, entries)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Component labels of the AC-graph of an abelian group, computed once by
/// exhaustive search and then served per tuple.
pub struct AbelianComponentIndex {
    group_order: usize,
    table: ComponentTable,
}

impl AbelianComponentIndex {
    pub fn new(group: &FiniteGroup, k: usize, budget: u64) -> Result<Self> {
        ensure_abelian(group)?;
        let op = OperatorSet::trivial();
        let alphabet = MoveAlphabet::new(group, &op, ConjugatorPolicy::Generators)?;
        let table = components(&alphabet, k, budget)?;
        Ok(AbelianComponentIndex {
            group_order: group.order(),
            table,
        })
    }

    pub fn table(&self) -> &ComponentTable {
        &self.table
    }

    pub fn component_count(&self) -> usize {
        self.table.component_count()
    }

    /// Component id of a generating tuple; errors if the tuple does not
    /// generate.
    pub fn component_id(&self, t: &KTuple) -> Result<u32> {
        self.table
            .label_of(t)
            .ok_or_else(|| Error::NotNGenerating(t.entries().to_vec()))
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_nk;

    const CAP: usize = 2048;
    const BUDGET: u64 = 1 << 24;

    #[test]
    fn invariant_factors_of_direct_factor_forms() {
        let a = FiniteGroup::abelian(&[2, 4], CAP).unwrap();
        assert_eq!(invariant_factors(&a).unwrap().factors, vec![2, 4]);
        let a = FiniteGroup::abelian(&[2, 3], CAP).unwrap();
        assert_eq!(invariant_factors(&a).unwrap().factors, vec![6]);
        let a = FiniteGroup::abelian(&[5, 5], CAP).unwrap();
        assert_eq!(invariant_factors(&a).unwrap().factors, vec![5, 5]);
        let a = FiniteGroup::abelian(&[6, 10, 15], CAP).unwrap();
        assert_eq!(invariant_factors(&a).unwrap().factors, vec![30, 30]);
        let a = FiniteGroup::abelian(&[1], CAP).unwrap();
        assert_eq!(invariant_factors(&a).unwrap().factors, Vec::<usize>::new());
    }

    #[test]
    fn invariant_factors_of_s3_abelianization() {
        let s3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], 64).unwrap();
        let (ab, _) = s3.abelianization();
        assert_eq!(invariant_factors(&ab).unwrap().factors, vec![2]);
    }

    #[test]
    fn non_abelian_input_rejected() {
        let s3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], 64).unwrap();
        assert!(matches!(
            invariant_factors(&s3),
            Err(Error::NotAbelian { .. })
        ));
    }

    #[test]
    fn component_count_formula() {
        let a = FiniteGroup::abelian(&[5, 5], CAP).unwrap();
        let inv = invariant_factors(&a).unwrap();
        assert_eq!(dg_component_count(&inv, 2).unwrap(), 2);
        assert_eq!(dg_component_count(&inv, 3).unwrap(), 1);
        assert!(dg_component_count(&inv, 1).is_err());

        let a = FiniteGroup::abelian(&[3, 3, 3], CAP).unwrap();
        let inv = invariant_factors(&a).unwrap();
        assert_eq!(dg_component_count(&inv, 4).unwrap(), 1);
        assert_eq!(dg_component_count(&inv, 3).unwrap(), 1);
        assert!(dg_component_count(&inv, 2).is_err());

        let a = FiniteGroup::abelian(&[2, 2], CAP).unwrap();
        let inv = invariant_factors(&a).unwrap();
        assert_eq!(dg_component_count(&inv, 2).unwrap(), 1);

        let a = FiniteGroup::abelian(&[7, 7], CAP).unwrap();
        let inv = invariant_factors(&a).unwrap();
        assert_eq!(dg_component_count(&inv, 2).unwrap(), 3);
    }

    #[test]
    fn representatives_split_components_as_predicted() {
        let a = FiniteGroup::abelian(&[5, 5], CAP).unwrap();
        let inv = invariant_factors(&a).unwrap();
        let index = AbelianComponentIndex::new(&a, 2, BUDGET).unwrap();
        assert_eq!(index.component_count(), 2);
        let r1 = dg_representative(&a, &inv, 1).unwrap();
        let r2 = dg_representative(&a, &inv, 2).unwrap();
        let r4 = dg_representative(&a, &inv, 4).unwrap();
        let id1 = index.component_id(&r1).unwrap();
        let id2 = index.component_id(&r2).unwrap();
        let id4 = index.component_id(&r4).unwrap();
        assert_ne!(id1, id2);
        assert_eq!(id1, id4);
        assert!(dg_representative(&a, &inv, 5).is_err());
    }

    #[test]
    fn representatives_hit_every_component_exactly_once() {
        for factors in [vec![5, 5], vec![7, 7], vec![2, 4], vec![3, 3]] {
            let a = FiniteGroup::abelian(&factors, CAP).unwrap();
            let inv = invariant_factors(&a).unwrap();
            let k = inv.rank();
            let index = AbelianComponentIndex::new(&a, k, BUDGET).unwrap();
            let m = inv.factors[0] as u64;
            let mut hits: Vec<u32> = Vec::new();
            // one lambda per {lam, -lam} orbit of units
            for lam in 1..=m.max(1) {
                if lam > m || gcd(lam % m.max(1), m) != 1 {
                    continue;
                }
                let neg = (m - lam % m) % m;
                if neg != 0 && neg < lam {
                    continue;
                }
                let rep = dg_representative(&a, &inv, lam).unwrap();
                hits.push(index.component_id(&rep).unwrap());
            }
            let mut distinct = hits.clone();
            distinct.sort_unstable();
            distinct.dedup();
            assert_eq!(distinct.len(), hits.len(), "factors {factors:?}");
            assert_eq!(
                distinct.len(),
                index.component_count(),
                "factors {factors:?}"
            );
        }
    }

    #[test]
    fn z2_pairs_single_component() {
        let a = FiniteGroup::abelian(&[2], CAP).unwrap();
        let index = AbelianComponentIndex::new(&a, 2, BUDGET).unwrap();
        assert_eq!(index.table().vertex_count(), 3);
        assert_eq!(index.component_count(), 1);
        let ids: Vec<u32> = [vec![1, 0], vec![0, 1], vec![1, 1]]
            .into_iter()
            .map(|e| index.component_id(&KTuple::new(&a, e).unwrap()).unwrap())
            .collect();
        assert!(ids.iter().all(|&i| i == ids[0]));
    }

    #[test]
    fn exhaustive_counts_match_formula_on_abelian_matrix() {
        let cases: Vec<(Vec<usize>, usize)> = vec![
            (vec![2], 2),
            (vec![3], 2),
            (vec![4], 2),
            (vec![6], 2),
            (vec![2, 2], 2),
            (vec![2, 2], 3),
            (vec![2, 4], 2),
            (vec![2, 4], 3),
            (vec![5, 5], 2),
            (vec![5, 5], 3),
            (vec![3, 3], 2),
            (vec![8], 2),
            (vec![12], 2),
        ];
        for (factors, k) in cases {
            let a = FiniteGroup::abelian(&factors, CAP).unwrap();
            let inv = invariant_factors(&a).unwrap();
            let index = AbelianComponentIndex::new(&a, k, BUDGET).unwrap();
            let formula = dg_component_count(&inv, k).unwrap();
            assert_eq!(
                index.component_count() as u64,
                formula,
                "factors {factors:?}, k = {k}"
            );
        }
    }

    #[test]
    fn determinant_oracle_on_homocyclic_rank_two() {
        // For A = (Z/m)^2 at k = 2 the determinant of the exponent matrix,
        // taken up to sign mod m, is constant on components and separates
        // them.
        for m in [3usize, 4, 5, 7] {
            let a = FiniteGroup::abelian(&[m, m], CAP).unwrap();
            let index = AbelianComponentIndex::new(&a, 2, BUDGET).unwrap();
            let op = OperatorSet::trivial();
            let det_class = |t: &KTuple| -> usize {
                let (p, q) = (t.entries()[0], t.entries()[1]);
                let (a1, b1) = (p % m, p / m);
                let (a2, b2) = (q % m, q / m);
                let det = (a1 * b2 + m * m - b1 * a2) % m;
                det.min((m - det) % m)
            };
            let mut class_of_component: std::collections::HashMap<u32, usize> =
                std::collections::HashMap::new();
            for t in enumerate_nk(&a, &op, 2, BUDGET).unwrap() {
                let id = index.component_id(&t).unwrap();
                let class = det_class(&t);
                let prev = class_of_component.entry(id).or_insert(class);
                assert_eq!(*prev, class, "det not constant on a component, m = {m}");
            }
            let distinct: std::collections::BTreeSet<usize> =
                class_of_component.values().copied().collect();
            assert_eq!(
                distinct.len(),
                index.component_count(),
                "det does not separate components, m = {m}"
            );
        }
    }

    #[test]
    fn trivial_group_counts() {
        let a = FiniteGroup::abelian(&[1], CAP).unwrap();
        let inv = invariant_factors(&a).unwrap();
        assert_eq!(inv.rank(), 0);
        assert_eq!(dg_component_count(&inv, 2).unwrap(), 1);
        let index = AbelianComponentIndex::new(&a, 2, BUDGET).unwrap();
        assert_eq!(index.component_count(), 1);
        assert_eq!(index.table().vertex_count(), 1);
    }
}
