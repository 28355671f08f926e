//! Named small groups used across the test and verification suites.
//!
//! Everything here is built through the ordinary constructors, so element
//! numbering is the deterministic BFS order of [`FiniteGroup::from_permutations`].

use crate::error::Result;
use crate::group::{Automorphism, FiniteGroup, OperatorSet};
use crate::DEFAULT_ORDER_CAP;
use std::collections::HashMap;

pub fn cyclic(n: usize) -> FiniteGroup {
    FiniteGroup::abelian(&[n], DEFAULT_ORDER_CAP).expect("small cyclic group under cap")
}

pub fn abelian(factors: &[usize]) -> FiniteGroup {
    FiniteGroup::abelian(factors, DEFAULT_ORDER_CAP).expect("small abelian group under cap")
}

pub fn klein_four() -> FiniteGroup {
    abelian(&[2, 2])
}

pub fn symmetric_3() -> FiniteGroup {
    FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], DEFAULT_ORDER_CAP)
        .expect("S3")
}

pub fn dihedral_4() -> FiniteGroup {
    // rotation (0 1 2 3), reflection (1 3)
    FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]], DEFAULT_ORDER_CAP)
        .expect("D4")
}

pub fn quaternion_8() -> FiniteGroup {
    // Left multiplication by i and j on {1, -1, i, -i, j, -j, k, -k}.
    FiniteGroup::from_permutations(
        8,
        &[
            vec![2, 3, 1, 0, 6, 7, 5, 4],
            vec![4, 5, 7, 6, 1, 0, 2, 3],
        ],
        DEFAULT_ORDER_CAP,
    )
    .expect("Q8")
}

pub fn alternating_4() -> FiniteGroup {
    FiniteGroup::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]], DEFAULT_ORDER_CAP)
        .expect("A4")
}

pub fn symmetric_4() -> FiniteGroup {
    FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], DEFAULT_ORDER_CAP)
        .expect("S4")
}

pub fn alternating_5() -> FiniteGroup {
    FiniteGroup::from_permutations(
        5,
        &[vec![1, 2, 3, 4, 0], vec![1, 2, 0, 3, 4]],
        DEFAULT_ORDER_CAP,
    )
    .expect("A5")
}

/// `SL(2, p)` acting faithfully on the nonzero vectors of `F_p^2`,
/// generated by the elementary matrix `[[1,1],[0,1]]` and the rotation
/// `[[0,-1],[1,0]]`.
pub fn special_linear_2(p: usize) -> Result<FiniteGroup> {
    let mut vectors = Vec::new();
    for a in 0..p {
        for b in 0..p {
            if a != 0 || b != 0 {
                vectors.push((a, b));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = vectors
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let act = |m: [[usize; 2]; 2]| -> Vec<usize> {
        vectors
            .iter()
            .map(|&(x, y)| {
                let nx = (m[0][0] * x + m[0][1] * y) % p;
                let ny = (m[1][0] * x + m[1][1] * y) % p;
                index[&(nx, ny)]
            })
            .collect()
    };
    let shear = act([[1, 1], [0, 1]]);
    let rotate = act([[0, p - 1], [1, 0]]);
    FiniteGroup::from_permutations(vectors.len(), &[shear, rotate], DEFAULT_ORDER_CAP)
}

pub fn a5_times_z2() -> FiniteGroup {
    FiniteGroup::direct_product(&alternating_5(), &cyclic(2), DEFAULT_ORDER_CAP)
        .expect("A5 x Z2 under cap")
}

/// `A5 x A5` has order 3600, above the default caps; callers must pass
/// raised limits to anything order-sensitive.
pub fn a5_times_a5() -> FiniteGroup {
    FiniteGroup::direct_product(&alternating_5(), &alternating_5(), 4096).expect("A5 x A5")
}

/// A5 together with the outer automorphism induced by conjugating with the
/// transposition (0 1) inside S5.
pub fn a5_with_outer_automorphism() -> (FiniteGroup, OperatorSet) {
    let (group, elems) = FiniteGroup::from_permutations_with_elements(
        5,
        &[vec![1, 2, 3, 4, 0], vec![1, 2, 0, 3, 4]],
        DEFAULT_ORDER_CAP,
    )
    .expect("A5");
    let index: HashMap<Vec<usize>, usize> = elems
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let t = vec![1usize, 0, 2, 3, 4];
    let conj = |p: &[usize]| -> Vec<usize> {
        // t o p o t with t an involution
        (0..5).map(|x| t[p[t[x]]]).collect()
    };
    let perm: Vec<usize> = elems.iter().map(|p| index[&conj(p)]).collect();
    let auto = Automorphism::new(&group, perm).expect("conjugation by (0 1) is an automorphism");
    (group, OperatorSet::new(vec![auto]))
}

/// The default verification matrix: abelian, nilpotent, solvable, perfect
/// and non-split cases, all comfortably inside the default budgets.
pub fn standard_matrix() -> Vec<(String, FiniteGroup)> {
    vec![
        ("Z2".into(), cyclic(2)),
        ("Z3".into(), cyclic(3)),
        ("Z4".into(), cyclic(4)),
        ("Z6".into(), cyclic(6)),
        ("V4".into(), klein_four()),
        ("Z5xZ5".into(), abelian(&[5, 5])),
        ("Z2xZ4".into(), abelian(&[2, 4])),
        ("S3".into(), symmetric_3()),
        ("D4".into(), dihedral_4()),
        ("Q8".into(), quaternion_8()),
        ("A4".into(), alternating_4()),
        ("SL(2,3)".into(), special_linear_2(3).expect("SL(2,3)")),
        ("S4".into(), symmetric_4()),
        ("A5".into(), alternating_5()),
        ("SL(2,5)".into(), special_linear_2(5).expect("SL(2,5)")),
        ("A5xZ2".into(), a5_times_z2()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        assert_eq!(symmetric_3().order(), 6);
        assert_eq!(dihedral_4().order(), 8);
        assert_eq!(quaternion_8().order(), 8);
        assert_eq!(alternating_4().order(), 12);
        assert_eq!(symmetric_4().order(), 24);
        assert_eq!(alternating_5().order(), 60);
        assert_eq!(special_linear_2(3).unwrap().order(), 24);
        assert_eq!(special_linear_2(5).unwrap().order(), 120);
        assert_eq!(a5_times_z2().order(), 120);
        assert_eq!(a5_times_a5().order(), 3600);
    }

    #[test]
    fn quaternion_group_properties() {
        let q8 = quaternion_8();
        // Unique element of order 2 (the center's involution).
        let involutions: Vec<usize> = (0..8).filter(|&e| q8.element_order(e) == 2).collect();
        assert_eq!(involutions.len(), 1);
        let (v4, _) = q8.quotient(&q8.subgroup_closure(&[involutions[0]])).unwrap();
        assert_eq!(v4.order(), 4);
        assert!((1..4).all(|e| v4.element_order(e) == 2));
    }

    #[test]
    fn sl25_is_perfect_and_has_a_center_of_order_two() {
        let g = special_linear_2(5).unwrap();
        assert!(g.is_perfect());
        let central: Vec<usize> = (0..g.order())
            .filter(|&z| (0..g.order()).all(|x| g.mul(z, x) == g.mul(x, z)))
            .collect();
        assert_eq!(central.len(), 2);
    }

    #[test]
    fn outer_automorphism_is_not_inner() {
        let (a5, op) = a5_with_outer_automorphism();
        let auto = &op.auto_gens[0];
        let inner_perms: Vec<Vec<usize>> = (0..a5.order())
            .map(|g| (0..a5.order()).map(|x| a5.conj(x, g)).collect())
            .collect();
        assert!(!inner_perms.contains(&auto.perm()));
    }

    #[test]
    fn matrix_members_validate() {
        for (name, group) in standard_matrix() {
            assert!(group.order() >= 2, "{name}");
        }
    }
}
