//! Structure theory used by the connectivity arguments: the lattice of
//! normal operator-stable subgroups, the N-Frattini subgroup `W(G)`, the
//! semisimple decomposition of `G/W(G)`, element supports, and the
//! normal-generation rank formula for groups splitting as
//! (non-abelian simple factors) x (abelian part).

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Homomorphism, NormalClosureIndex, OperatorSet, IDENTITY};

fn check_cap(group: &FiniteGroup, cap: usize) -> Result<()> {
    if group.order() > cap {
        return Err(Error::OrderCapExceeded {
            order: group.order(),
            cap,
        });
    }
    Ok(())
}

/// All normal operator-stable subgroups, with the maximal proper ones
/// flagged. Subgroups are sorted element lists; the list itself is ordered
/// by size then content, so output is deterministic.
#[derive(Debug, Clone)]
pub struct NormalSubgroupLattice {
    pub normals: Vec<Vec<usize>>,
    pub maximal_proper: Vec<usize>,
}

impl NormalSubgroupLattice {
    pub fn contains(&self, set: &[usize]) -> bool {
        self.normals.iter().any(|n| n == set)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|e| b.binary_search(e).is_ok())
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter()
        .copied()
        .filter(|e| b.binary_search(e).is_ok())
        .collect()
}

/// Enumerates every normal operator-stable subgroup. Every such subgroup
/// is the join of the single-orbit normal closures it contains, so closing
/// the orbit closures under pairwise joins yields the full lattice.
pub fn normal_subgroups(
    group: &FiniteGroup,
    op: &OperatorSet,
    cap: usize,
) -> Result<NormalSubgroupLattice> {
    check_cap(group, cap)?;
    let index = NormalClosureIndex::new(group, op);
    let mut normals: Vec<Vec<usize>> = index
        .lattice_ids()
        .map(|id| index.subgroup(id).to_vec())
        .collect();
    normals.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    normals.dedup();
    let n = group.order();
    let mut maximal_proper = Vec::new();
    for (i, cand) in normals.iter().enumerate() {
        if cand.len() == n {
            continue;
        }
        let covered = normals
            .iter()
            .any(|other| other.len() < n && other.len() > cand.len() && is_subset(cand, other));
        if !covered {
            maximal_proper.push(i);
        }
    }
    Ok(NormalSubgroupLattice {
        normals,
        maximal_proper,
    })
}

/// The N-Frattini subgroup: intersection of all maximal proper normal
/// operator-stable subgroups, or the whole group when none exist (trivial
/// group only, at finite orders).
pub fn n_frattini(group: &FiniteGroup, op: &OperatorSet, cap: usize) -> Result<Vec<usize>> {
    let lattice = normal_subgroups(group, op, cap)?;
    if lattice.maximal_proper.is_empty() {
        return Ok((0..group.order()).collect());
    }
    let mut acc: Vec<usize> = (0..group.order()).collect();
    for &i in &lattice.maximal_proper {
        acc = intersect(&acc, &lattice.normals[i]);
    }
    Ok(acc)
}

/// Is `g` non-N-generating: does removing it from any normally generating
/// set leave the set normally generating? It suffices to quantify over the
/// lattice, since a closure only sees a set through its normal closure.
pub fn non_n_generating(
    group: &FiniteGroup,
    op: &OperatorSet,
    g: usize,
    cap: usize,
) -> Result<bool> {
    check_cap(group, cap)?;
    if g >= group.order() {
        return Err(Error::IndexOutOfRange {
            index: g,
            order: group.order(),
        });
    }
    let index = NormalClosureIndex::new(group, op);
    let g_id = index.element_closure_id(g);
    for id in index.lattice_ids() {
        if index.subgroup(id).len() == group.order() {
            continue;
        }
        if index.join_ids(id, g_id) == index.full_id() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Order in which maximal normal subgroups are consumed by the greedy
/// decomposition; two orders give independent runs for uniqueness checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    SmallestFirst,
    LargestFirst,
}

/// `G/W(G)` decomposed into a direct product of operator-simple factors.
#[derive(Debug, Clone)]
pub struct SemisimpleDecomposition {
    /// The quotient `G/W(G)`.
    pub quotient: FiniteGroup,
    /// Projection `G -> G/W(G)`.
    pub to_quotient: Homomorphism,
    /// The operator action pushed down to the quotient.
    pub quotient_ops: OperatorSet,
    /// Element sets of the factors inside the quotient, ordered by their
    /// smallest non-identity element.
    pub factors: Vec<Vec<usize>>,
    /// `complements[i]` is the product of the other factors.
    pub complements: Vec<Vec<usize>>,
    /// `projections[i][q]` is the factor-i component of `q`.
    pub projections: Vec<Vec<usize>>,
}

impl SemisimpleDecomposition {
    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Indices of the factors where the image of `g` (an element of the
    /// original group) is nontrivial.
    pub fn support(&self, g: usize) -> Vec<usize> {
        self.support_in_quotient(self.to_quotient.apply(g))
    }

    pub fn support_in_quotient(&self, q: usize) -> Vec<usize> {
        (0..self.factors.len())
            .filter(|&i| self.projections[i][q] != IDENTITY)
            .collect()
    }
}

/// Decomposes `G/W(G)` into operator-simple direct factors.
pub fn semisimple_decompose(
    group: &FiniteGroup,
    op: &OperatorSet,
    cap: usize,
) -> Result<SemisimpleDecomposition> {
    semisimple_decompose_with(group, op, cap, TieBreak::SmallestFirst)
}

pub fn semisimple_decompose_with(
    group: &FiniteGroup,
    op: &OperatorSet,
    cap: usize,
    tie_break: TieBreak,
) -> Result<SemisimpleDecomposition> {
    check_cap(group, cap)?;
    let w = n_frattini(group, op, cap)?;
    let (quotient, to_quotient) = group.quotient(&w)?;
    let quotient_ops = OperatorSet::new(
        op.auto_gens
            .iter()
            .map(|a| a.induce_on_quotient(&to_quotient, group, &quotient))
            .collect::<Result<Vec<_>>>()?,
    );
    let nq = quotient.order();

    let lattice = normal_subgroups(&quotient, &quotient_ops, cap)?;
    let mut maximals: Vec<Vec<usize>> = lattice
        .maximal_proper
        .iter()
        .map(|&i| lattice.normals[i].clone())
        .collect();
    if tie_break == TieBreak::LargestFirst {
        maximals.reverse();
    }

    // Greedy irredundant family of maximal normals with trivial
    // intersection; the quotient has trivial N-Frattini subgroup, so the
    // full family always reaches 1.
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..nq).collect();
    for m in maximals {
        if current.len() == 1 {
            break;
        }
        let inter = intersect(&current, &m);
        if inter.len() < current.len() {
            chosen.push(m);
            current = inter;
        }
    }
    if current.len() != 1 {
        return Err(Error::Internal(
            "maximal normal subgroups of G/W(G) do not intersect trivially".into(),
        ));
    }
    // Prune until irredundant.
    loop {
        let mut removed = false;
        for i in 0..chosen.len() {
            let mut inter: Vec<usize> = (0..nq).collect();
            for (j, m) in chosen.iter().enumerate() {
                if j != i {
                    inter = intersect(&inter, m);
                }
            }
            if inter.len() == 1 {
                chosen.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }

    // Factor i is the intersection of the other chosen maximals; its
    // complement (the product of the other factors) is the chosen maximal
    // itself.
    let s = chosen.len();
    let mut pairs: Vec<(Vec<usize>, Vec<usize>)> = Vec::with_capacity(s);
    for i in 0..s {
        let mut factor: Vec<usize> = (0..nq).collect();
        for (j, m) in chosen.iter().enumerate() {
            if j != i {
                factor = intersect(&factor, m);
            }
        }
        pairs.push((factor, chosen[i].clone()));
    }
    pairs.sort_by_key(|(factor, _)| factor.iter().copied().find(|&e| e != IDENTITY));

    let product_order: usize = pairs.iter().map(|(f, _)| f.len()).product();
    if product_order != nq {
        return Err(Error::Internal(
            "factors do not multiply out to the quotient".into(),
        ));
    }
    for (i, (fi, _)) in pairs.iter().enumerate() {
        // Operator-simplicity: exactly the trivial subgroup and the factor
        // itself appear below the factor in the lattice.
        let below = lattice
            .normals
            .iter()
            .filter(|n| is_subset(n, fi))
            .count();
        if below != 2 && fi.len() > 1 {
            return Err(Error::Internal(format!(
                "factor {i} is not operator-simple ({below} normal subgroups below it)"
            )));
        }
        for (j, (fj, _)) in pairs.iter().enumerate() {
            if i < j && intersect(fi, fj).len() != 1 {
                return Err(Error::Internal(format!(
                    "factors {i} and {j} intersect nontrivially"
                )));
            }
        }
    }

    let mut projections = Vec::with_capacity(s);
    for (factor, complement) in &pairs {
        let mut in_complement = vec![false; nq];
        for &e in complement {
            in_complement[e] = true;
        }
        let mut proj = vec![usize::MAX; nq];
        for q in 0..nq {
            for &f in factor {
                if in_complement[quotient.mul(quotient.inv(f), q)] {
                    proj[q] = f;
                    break;
                }
            }
            if proj[q] == usize::MAX {
                return Err(Error::Internal(format!(
                    "element {q} has no factor component"
                )));
            }
        }
        projections.push(proj);
    }

    Ok(SemisimpleDecomposition {
        quotient,
        to_quotient,
        quotient_ops,
        factors: pairs.iter().map(|(f, _)| f.clone()).collect(),
        complements: pairs.into_iter().map(|(_, c)| c).collect(),
        projections,
    })
}

/// For a perfect group: a tuple normally generates exactly when the union
/// of its supports covers every factor of the semisimple decomposition.
pub fn perfect_generation_criterion(
    group: &FiniteGroup,
    decomp: &SemisimpleDecomposition,
    entries: &[usize],
) -> Result<bool> {
    if !group.is_perfect() {
        return Err(Error::NotPerfect);
    }
    let mut covered = vec![false; decomp.factor_count()];
    for &g in entries {
        for i in decomp.support(g) {
            covered[i] = true;
        }
    }
    Ok(covered.into_iter().all(|c| c))
}

/// Rank formula for groups splitting as (non-abelian operator-simple
/// factors) x (abelian part): the normal-generation rank is
/// `max(d(abelian part), 1)`. The split is reconstructed from the minimal
/// normal subgroups and verified; groups outside the hypothesis get an
/// error so callers can fall back to the exhaustive rank search.
pub fn d_normal_formula(group: &FiniteGroup, op: &OperatorSet, cap: usize) -> Result<usize> {
    check_cap(group, cap)?;
    if group.order() == 1 {
        return Ok(0);
    }
    let lattice = normal_subgroups(group, op, cap)?;
    let minimal: Vec<&Vec<usize>> = lattice
        .normals
        .iter()
        .filter(|n| n.len() > 1)
        .filter(|n| {
            !lattice
                .normals
                .iter()
                .any(|other| other.len() > 1 && other.len() < n.len() && is_subset(other, n))
        })
        .collect();
    let is_abelian_set = |set: &[usize]| -> bool {
        set.iter()
            .all(|&a| set.iter().all(|&b| group.mul(a, b) == group.mul(b, a)))
    };
    let mut simple_part: Vec<usize> = vec![IDENTITY];
    let mut expected_order = 1usize;
    for m in minimal.iter().filter(|m| !is_abelian_set(m)) {
        expected_order *= m.len();
        simple_part = product_of_normals(group, &simple_part, m);
    }
    if simple_part.len() != expected_order {
        return Err(Error::Internal(
            "non-abelian minimal normal subgroups are not independent".into(),
        ));
    }
    let mut in_simple = vec![false; group.order()];
    for &e in &simple_part {
        in_simple[e] = true;
    }
    let centralizer: Vec<usize> = (0..group.order())
        .filter(|&g| simple_part.iter().all(|&s| group.mul(g, s) == group.mul(s, g)))
        .collect();
    if !is_abelian_set(&centralizer) {
        return Err(Error::Hypothesis(
            "centralizer of the simple part is not abelian".into(),
        ));
    }
    if centralizer.iter().filter(|&&g| in_simple[g]).count() != 1 {
        return Err(Error::Hypothesis(
            "simple part and abelian part overlap".into(),
        ));
    }
    if simple_part.len() * centralizer.len() != group.order() {
        return Err(Error::Hypothesis(
            "group does not split as simple part x abelian part".into(),
        ));
    }
    for auto in &op.auto_gens {
        if centralizer.iter().any(|&g| {
            centralizer.binary_search(&auto.apply(g)).is_err()
        }) {
            return Err(Error::Hypothesis(
                "operators do not stabilize the abelian part".into(),
            ));
        }
    }
    let (abelian_part, elems) = group.subgroup_group(&centralizer)?;
    let restricted = OperatorSet::new(
        op.auto_gens
            .iter()
            .map(|a| a.restrict(group, &abelian_part, &elems))
            .collect::<Result<Vec<_>>>()?,
    );
    let d_abelian = abelian_part.d_normal(&restricted);
    Ok(d_abelian.max(1))
}

fn product_of_normals(group: &FiniteGroup, a: &[usize], b: &[usize]) -> Vec<usize> {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::DEFAULT_STRUCTURE_CAP;

    const CAP: usize = DEFAULT_STRUCTURE_CAP;

    #[test]
    fn s3_lattice_and_frattini() {
        let g = catalog::symmetric_3();
        let op = OperatorSet::trivial();
        let lattice = normal_subgroups(&g, &op, CAP).unwrap();
        let sizes: Vec<usize> = lattice.normals.iter().map(|n| n.len()).collect();
        assert_eq!(sizes, vec![1, 3, 6]);
        assert_eq!(lattice.maximal_proper.len(), 1);
        assert_eq!(lattice.normals[lattice.maximal_proper[0]], vec![0, 1, 3]);
        assert_eq!(n_frattini(&g, &op, CAP).unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn a5_lattice_and_frattini() {
        let g = catalog::alternating_5();
        let op = OperatorSet::trivial();
        let lattice = normal_subgroups(&g, &op, CAP).unwrap();
        assert_eq!(lattice.normals.len(), 2);
        assert_eq!(lattice.maximal_proper.len(), 1);
        assert_eq!(n_frattini(&g, &op, CAP).unwrap(), vec![0]);
    }

    #[test]
    fn z4_frattini() {
        let g = catalog::cyclic(4);
        let op = OperatorSet::trivial();
        let lattice = normal_subgroups(&g, &op, CAP).unwrap();
        let sizes: Vec<usize> = lattice.normals.iter().map(|n| n.len()).collect();
        assert_eq!(sizes, vec![1, 2, 4]);
        assert_eq!(n_frattini(&g, &op, CAP).unwrap(), vec![0, 2]);
    }

    #[test]
    fn trivial_group_frattini_is_whole_group() {
        let g = catalog::cyclic(1);
        let op = OperatorSet::trivial();
        assert_eq!(n_frattini(&g, &op, CAP).unwrap(), vec![0]);
    }

    #[test]
    fn non_n_generating_matches_frattini_on_s3() {
        let g = catalog::symmetric_3();
        let op = OperatorSet::trivial();
        assert!(non_n_generating(&g, &op, 1, CAP).unwrap());
        assert!(!non_n_generating(&g, &op, 2, CAP).unwrap());
        assert!(non_n_generating(&g, &op, IDENTITY, CAP).unwrap());
    }

    #[test]
    fn semisimple_of_s3_is_one_cyclic_factor() {
        let g = catalog::symmetric_3();
        let op = OperatorSet::trivial();
        let d = semisimple_decompose(&g, &op, CAP).unwrap();
        assert_eq!(d.quotient.order(), 2);
        assert_eq!(d.factor_count(), 1);
        assert_eq!(d.factors[0].len(), 2);
    }

    #[test]
    fn semisimple_of_klein_four_has_two_factors() {
        let g = catalog::klein_four();
        let op = OperatorSet::trivial();
        let d = semisimple_decompose(&g, &op, CAP).unwrap();
        assert_eq!(d.quotient.order(), 4);
        let sizes: Vec<usize> = d.factors.iter().map(|f| f.len()).collect();
        assert_eq!(sizes, vec![2, 2]);
    }

    #[test]
    fn semisimple_of_a5_squared_has_two_simple_factors() {
        let g = catalog::a5_times_a5();
        let op = OperatorSet::trivial();
        let d = semisimple_decompose(&g, &op, 4096).unwrap();
        assert_eq!(d.quotient.order(), 3600);
        let sizes: Vec<usize> = d.factors.iter().map(|f| f.len()).collect();
        assert_eq!(sizes, vec![60, 60]);
    }

    #[test]
    fn decomposition_factor_multisets_agree_across_tie_breaks() {
        let op = OperatorSet::trivial();
        for (name, g) in [
            ("S3".to_string(), catalog::symmetric_3()),
            ("V4".to_string(), catalog::klein_four()),
            ("Q8".to_string(), catalog::quaternion_8()),
            ("A4".to_string(), catalog::alternating_4()),
            ("Z12".to_string(), catalog::cyclic(12)),
            ("A5xZ2".to_string(), catalog::a5_times_z2()),
        ] {
            let a = semisimple_decompose_with(&g, &op, CAP, TieBreak::SmallestFirst).unwrap();
            let b = semisimple_decompose_with(&g, &op, CAP, TieBreak::LargestFirst).unwrap();
            let mut sa: Vec<usize> = a.factors.iter().map(|f| f.len()).collect();
            let mut sb: Vec<usize> = b.factors.iter().map(|f| f.len()).collect();
            sa.sort_unstable();
            sb.sort_unstable();
            assert_eq!(sa, sb, "{name}");
        }
    }

    #[test]
    fn support_on_a5_squared() {
        let g = catalog::a5_times_a5();
        let op = OperatorSet::trivial();
        let d = semisimple_decompose(&g, &op, 4096).unwrap();
        // Element indices in the product: (a, b) -> a + 60*b.
        let a = 7; // some non-identity element of A5
        assert_eq!(d.support(IDENTITY), Vec::<usize>::new());
        let left = d.support(a);
        let right = d.support(60 * a);
        let both = d.support(a + 60 * a);
        assert_eq!(left.len(), 1);
        assert_eq!(right.len(), 1);
        assert_ne!(left, right);
        assert_eq!(both.len(), 2);
    }

    #[test]
    fn support_of_frattini_elements_is_empty() {
        let g = catalog::symmetric_3();
        let op = OperatorSet::trivial();
        let d = semisimple_decompose(&g, &op, CAP).unwrap();
        for &w in &[0usize, 1, 3] {
            assert!(d.support(w).is_empty());
        }
        assert_eq!(d.support(2), vec![0]);
    }

    #[test]
    fn perfect_criterion_on_a5() {
        let g = catalog::alternating_5();
        let op = OperatorSet::trivial();
        let d = semisimple_decompose(&g, &op, CAP).unwrap();
        assert!(perfect_generation_criterion(&g, &d, &[1, IDENTITY]).unwrap());
        assert!(!perfect_generation_criterion(&g, &d, &[IDENTITY, IDENTITY]).unwrap());
    }

    #[test]
    fn perfect_criterion_on_a5_squared() {
        let g = catalog::a5_times_a5();
        let op = OperatorSet::trivial();
        let d = semisimple_decompose(&g, &op, 4096).unwrap();
        let a = 7;
        let b = 11;
        assert!(perfect_generation_criterion(&g, &d, &[a, 60 * b]).unwrap());
        assert!(!perfect_generation_criterion(&g, &d, &[a, b]).unwrap());
        assert!(perfect_generation_criterion(&g, &d, &[a + 60 * b]).unwrap());
    }

    #[test]
    fn perfect_criterion_rejects_non_perfect_groups() {
        let g = catalog::symmetric_3();
        let op = OperatorSet::trivial();
        let d = semisimple_decompose(&g, &op, CAP).unwrap();
        assert!(matches!(
            perfect_generation_criterion(&g, &d, &[2]),
            Err(Error::NotPerfect)
        ));
    }

    #[test]
    fn rank_formula_values() {
        let op = OperatorSet::trivial();
        assert_eq!(
            d_normal_formula(&catalog::alternating_5(), &op, CAP).unwrap(),
            1
        );
        assert_eq!(
            d_normal_formula(&catalog::a5_times_z2(), &op, CAP).unwrap(),
            1
        );
        assert_eq!(
            d_normal_formula(&catalog::klein_four(), &op, CAP).unwrap(),
            2
        );
        assert_eq!(d_normal_formula(&catalog::cyclic(1), &op, CAP).unwrap(), 0);
        assert!(d_normal_formula(&catalog::symmetric_3(), &op, CAP).is_err());
        assert!(d_normal_formula(&catalog::quaternion_8(), &op, CAP).is_err());
    }

    #[test]
    fn rank_formula_agrees_with_search_where_applicable() {
        let op = OperatorSet::trivial();
        for g in [
            catalog::alternating_5(),
            catalog::a5_times_z2(),
            catalog::klein_four(),
            catalog::abelian(&[5, 5]),
            catalog::abelian(&[2, 4]),
            catalog::cyclic(6),
        ] {
            assert_eq!(d_normal_formula(&g, &op, CAP).unwrap(), g.d_normal(&op));
        }
    }

    #[test]
    fn structure_cap_enforced() {
        let g = catalog::a5_times_a5();
        let op = OperatorSet::trivial();
        assert!(matches!(
            normal_subgroups(&g, &op, CAP),
            Err(Error::OrderCapExceeded { .. })
        ));
    }
}
