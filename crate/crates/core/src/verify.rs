//! Verification harness: re-checks the structural connectivity statements
//! on concrete groups by exhaustive search and reports evidence.
//!
//! Each check returns a [`VerificationReport`]. A report only passes when
//! every sub-assertion holds; failures carry concrete counterexample tuple
//! codes. Hypothesis violations (wrong k, non-perfect input, budget) are
//! errors, not failed reports.

use crate::catalog;
use crate::error::{Error, Result};
use crate::graph::{
    components, equivalent, project_tuple, ComponentTable, ConjugatorPolicy, Equivalence, KTuple,
    MoveAlphabet, DEFAULT_DEPTH_CAP,
};
use crate::group::{FiniteGroup, OperatorSet};
use crate::words;
use serde::Serialize;
use serde_json::json;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// Outcome of one claim over one group, with enough context to reproduce
/// it: group hash, tuple length, alphabet descriptor, engine version.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub group: String,
    pub group_hash: String,
    pub k: usize,
    pub alphabet: String,
    pub engine_version: String,
    pub outcome: Outcome,
    pub evidence: serde_json::Value,
    pub runtime_ms: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// The report with volatile timing removed; equal across identical
    /// runs of the same engine version.
    pub fn reproducible_view(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut()
            .expect("report is an object")
            .remove("runtime_ms");
        v
    }
}

struct ReportBuilder {
    claim: String,
    group: String,
    group_hash: String,
    k: usize,
    alphabet: String,
    started: Instant,
}

impl ReportBuilder {
    fn new(claim: &str, label: &str, group: &FiniteGroup, k: usize, alphabet: String) -> Self {
        ReportBuilder {
            claim: claim.to_string(),
            group: label.to_string(),
            group_hash: group.table_hash(),
            k,
            alphabet,
            started: Instant::now(),
        }
    }

    fn finish(self, outcome: Outcome, evidence: serde_json::Value) -> VerificationReport {
        VerificationReport {
            claim: self.claim,
            group: self.group,
            group_hash: self.group_hash,
            k: self.k,
            alphabet: self.alphabet,
            engine_version: crate::ENGINE_VERSION.to_string(),
            outcome,
            evidence,
            runtime_ms: self.started.elapsed().as_millis(),
        }
    }
}

/// Components of the plain AC-graph partition equal the pullback of the
/// abelianized partition, for `k >= max(d, 2)`.
pub fn verify_lifting(
    group: &FiniteGroup,
    label: &str,
    k: usize,
    policy: ConjugatorPolicy,
    budget: u64,
) -> Result<VerificationReport> {
    let op = OperatorSet::trivial();
    let d = group.d_normal(&op);
    if k < d.max(2) {
        return Err(Error::Hypothesis(format!(
            "lifting check needs k >= max(d, 2) = {}, got k = {k}",
            d.max(2)
        )));
    }
    let alphabet = MoveAlphabet::new(group, &op, policy)?;
    let builder = ReportBuilder::new("lifting", label, group, k, alphabet.descriptor(k));
    let table = components(&alphabet, k, budget)?;
    let (ab, hom) = group.abelianization();
    let ab_op = OperatorSet::trivial();
    let ab_alphabet = MoveAlphabet::new(&ab, &ab_op, ConjugatorPolicy::Generators)?;
    let ab_table = components(&ab_alphabet, k, budget)?;

    let n = group.order();
    let mut component_image: Vec<Option<u32>> = vec![None; table.component_count()];
    for (idx, &code) in table.codes().iter().enumerate() {
        let tuple = KTuple::from_code(code, k, n);
        let image = project_tuple(&hom, &tuple);
        let Some(ab_label) = ab_table.label_of(&image) else {
            return Ok(builder.finish(
                Outcome::Fail,
                json!({
                    "reason": "projection leaves the abelian graph",
                    "counterexample_code": code,
                }),
            ));
        };
        let own = table.labels()[idx] as usize;
        match component_image[own] {
            None => component_image[own] = Some(ab_label),
            Some(prev) if prev != ab_label => {
                return Ok(builder.finish(
                    Outcome::Fail,
                    json!({
                        "reason": "abelian label not constant on a component",
                        "component_rep": table.reps()[own],
                        "counterexample_code": code,
                    }),
                ));
            }
            _ => {}
        }
    }
    let mut seen: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    for (own, image) in component_image.iter().enumerate() {
        let image = image.expect("every component has at least one vertex");
        if let Some(&other) = seen.get(&image) {
            return Ok(builder.finish(
                Outcome::Fail,
                json!({
                    "reason": "two components share an abelian image",
                    "counterexample_pair": [table.reps()[other], table.reps()[own]],
                }),
            ));
        }
        seen.insert(image, own);
    }
    Ok(builder.finish(
        Outcome::Pass,
        json!({
            "vertex_count": table.vertex_count(),
            "component_count": table.component_count(),
            "abelian_components_hit": seen.len(),
            "abelian_component_count": ab_table.component_count(),
            "reps": table.reps(),
        }),
    ))
}

/// Perfect groups have a connected relativized graph for every `k >= 2`.
pub fn verify_perfect(
    group: &FiniteGroup,
    label: &str,
    op: &OperatorSet,
    k: usize,
    policy: ConjugatorPolicy,
    budget: u64,
) -> Result<VerificationReport> {
    if !group.is_perfect() {
        return Err(Error::NotPerfect);
    }
    if k < 2 {
        return Err(Error::Hypothesis(format!(
            "connectivity of perfect groups is claimed for k >= 2, got {k}"
        )));
    }
    let alphabet = MoveAlphabet::new(group, op, policy)?;
    let builder = ReportBuilder::new("perfect", label, group, k, alphabet.descriptor(k));
    let table = components(&alphabet, k, budget)?;
    let outcome = if table.component_count() == 1 {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(builder.finish(
        outcome,
        json!({
            "vertex_count": table.vertex_count(),
            "component_count": table.component_count(),
            "reps": table.reps(),
        }),
    ))
}

/// Every group has a connected relativized graph once `k` exceeds the
/// normal-generation rank.
pub fn verify_k_plus_one(
    group: &FiniteGroup,
    label: &str,
    op: &OperatorSet,
    k: usize,
    policy: ConjugatorPolicy,
    budget: u64,
) -> Result<VerificationReport> {
    let d = group.d_normal(op);
    if k < d + 1 {
        return Err(Error::Hypothesis(format!(
            "rank-plus-one check needs k >= {} for this group, got {k}",
            d + 1
        )));
    }
    let alphabet = MoveAlphabet::new(group, op, policy)?;
    let builder = ReportBuilder::new("kplus1", label, group, k, alphabet.descriptor(k));
    let table = components(&alphabet, k, budget)?;
    let outcome = if table.component_count() == 1 {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(builder.finish(
        outcome,
        json!({
            "d_normal": d,
            "vertex_count": table.vertex_count(),
            "component_count": table.component_count(),
            "reps": table.reps(),
        }),
    ))
}

/// The Akbulut-Kirby pair evaluated at a normally generating image pair
/// lands in the same component as the pair itself, with a replayable
/// certificate.
pub fn ak_test(
    group: &FiniteGroup,
    label: &str,
    x_img: usize,
    y_img: usize,
    n: i64,
    policy: ConjugatorPolicy,
    budget: u64,
) -> Result<VerificationReport> {
    let op = OperatorSet::trivial();
    if !crate::group::is_n_generating(group, &op, &[x_img, y_img]) {
        return Err(Error::NotNGenerating(vec![x_img, y_img]));
    }
    let (u, v) = words::akbulut_kirby(n)?;
    let u_img = u.evaluate(group, &[x_img, y_img])?;
    let v_img = v.evaluate(group, &[x_img, y_img])?;
    let alphabet = MoveAlphabet::new(group, &op, policy)?;
    let builder = ReportBuilder::new("ak", label, group, 2, alphabet.descriptor(2));
    let table = components(&alphabet, 2, budget)?;
    let pair_uv = KTuple::new(group, vec![u_img, v_img])?;
    let pair_xy = KTuple::new(group, vec![x_img, y_img])?;
    let Some(label_uv) = table.label_of(&pair_uv) else {
        return Err(Error::Internal(
            "image of the Akbulut-Kirby pair must normally generate".into(),
        ));
    };
    let label_xy = table
        .label_of(&pair_xy)
        .expect("membership was checked above");
    let vectors = (u.abelianized_vector(), v.abelianized_vector());
    let det = vectors.0[0] * vectors.1[1] - vectors.0[1] * vectors.1[0];
    if label_uv != label_xy {
        return Ok(builder.finish(
            Outcome::Fail,
            json!({
                "reason": "pairs in different components",
                "uv_code": pair_uv.code(group.order()),
                "xy_code": pair_xy.code(group.order()),
            }),
        ));
    }
    let outcome = equivalent(&pair_uv, &pair_xy, &alphabet, &table, DEFAULT_DEPTH_CAP)?;
    match outcome {
        Equivalence::Equivalent(cert) => Ok(builder.finish(
            Outcome::Pass,
            json!({
                "n": n,
                "uv": pair_uv.entries(),
                "xy": pair_xy.entries(),
                "uv_code": pair_uv.code(group.order()),
                "xy_code": pair_xy.code(group.order()),
                "certificate_len": cert.len(),
                "certificate": cert,
                "abelianized_determinant": det,
            }),
        )),
        other => Ok(builder.finish(
            Outcome::Fail,
            json!({
                "reason": format!("search returned {other:?} inside one component"),
            }),
        )),
    }
}

fn plain_generating_codes(group: &FiniteGroup, table: &ComponentTable) -> Vec<u64> {
    let n = group.order();
    let k = table.k();
    table
        .codes()
        .iter()
        .copied()
        .filter(|&code| {
            let t = KTuple::from_code(code, k, n);
            group.subgroup_closure(t.entries()).len() == n
        })
        .collect()
}

/// All tuples that generate the group as a plain subgroup lie in one
/// component: the image of the free graph is connected.
pub fn verify_free_image_connected(
    group: &FiniteGroup,
    label: &str,
    k: usize,
    policy: ConjugatorPolicy,
    budget: u64,
) -> Result<VerificationReport> {
    if k < 2 {
        return Err(Error::Hypothesis(format!(
            "free-image check is stated for k >= 2, got {k}"
        )));
    }
    let op = OperatorSet::trivial();
    let alphabet = MoveAlphabet::new(group, &op, policy)?;
    let builder = ReportBuilder::new("free-image", label, group, k, alphabet.descriptor(k));
    let table = components(&alphabet, k, budget)?;
    let generating = plain_generating_codes(group, &table);
    if generating.is_empty() {
        return Ok(builder.finish(
            Outcome::Pass,
            json!({
                "vacuous": true,
                "generating_tuples": 0,
            }),
        ));
    }
    let first = table.label_of_code(generating[0]).expect("member of N_k");
    for &code in &generating[1..] {
        let l = table.label_of_code(code).expect("member of N_k");
        if l != first {
            return Ok(builder.finish(
                Outcome::Fail,
                json!({
                    "reason": "two generating tuples in different components",
                    "counterexample_pair": [generating[0], code],
                }),
            ));
        }
    }
    Ok(builder.finish(
        Outcome::Pass,
        json!({
            "generating_tuples": generating.len(),
            "component": first,
            "component_count": table.component_count(),
        }),
    ))
}

/// For perfect groups: every normally generating tuple shares a component
/// with a tuple that generates as a plain subgroup, so normally generating
/// tuples pull back to normally generating tuples of the free group.
pub fn verify_pullback_normal_generation(
    group: &FiniteGroup,
    label: &str,
    k: usize,
    policy: ConjugatorPolicy,
    budget: u64,
) -> Result<VerificationReport> {
    if group.order() > 1 && !group.is_perfect() {
        return Err(Error::NotPerfect);
    }
    if k < 2 {
        return Err(Error::Hypothesis(format!(
            "pullback check is stated for k >= 2, got {k}"
        )));
    }
    let op = OperatorSet::trivial();
    let alphabet = MoveAlphabet::new(group, &op, policy)?;
    let builder = ReportBuilder::new("pullback", label, group, k, alphabet.descriptor(k));
    let table = components(&alphabet, k, budget)?;
    let generating = plain_generating_codes(group, &table);
    let mut covered = vec![false; table.component_count()];
    for &code in &generating {
        covered[table.label_of_code(code).expect("member of N_k") as usize] = true;
    }
    match covered.iter().position(|&c| !c) {
        Some(id) => Ok(builder.finish(
            Outcome::Fail,
            json!({
                "reason": "component without a plain generating tuple",
                "component_rep": table.reps()[id],
            }),
        )),
        None => Ok(builder.finish(
            Outcome::Pass,
            json!({
                "component_count": table.component_count(),
                "generating_tuples": generating.len(),
            }),
        )),
    }
}

/// One entry of the open-question search: how the relativized partition
/// compares with its abelianized pullback at `k = d`. Reported without
/// pass/fail semantics.
#[derive(Debug, Clone, Serialize)]
pub struct RelSearchFinding {
    pub group: String,
    pub k: usize,
    pub d_normal: usize,
    pub relativized_components: usize,
    pub abelianized_components_hit: usize,
    pub partitions_match: bool,
}

/// Searches small operator groups with `k = d >= 2` for mismatches between
/// the relativized partition and the pullback of the abelianized one.
pub fn rel_conjecture_search(
    entries: &[(String, FiniteGroup, OperatorSet)],
    budget: u64,
) -> Result<Vec<RelSearchFinding>> {
    let mut findings = Vec::new();
    for (label, group, op) in entries {
        let d = group.d_normal(op);
        if d < 2 {
            continue;
        }
        let k = d;
        let alphabet = MoveAlphabet::new(group, op, ConjugatorPolicy::Generators)?;
        let table = components(&alphabet, k, budget)?;
        let derived = group.commutator_subgroup();
        let (ab, hom) = group.quotient(&derived)?;
        let ab_ops = OperatorSet::new(
            op.auto_gens
                .iter()
                .map(|a| a.induce_on_quotient(&hom, group, &ab))
                .collect::<Result<Vec<_>>>()?,
        );
        let ab_alphabet = MoveAlphabet::new(&ab, &ab_ops, ConjugatorPolicy::Generators)?;
        let ab_table = components(&ab_alphabet, k, budget)?;
        let n = group.order();
        let mut image_of_component: Vec<Option<u32>> = vec![None; table.component_count()];
        let mut matches = true;
        'scan: for (idx, &code) in table.codes().iter().enumerate() {
            let image = project_tuple(&hom, &KTuple::from_code(code, k, n));
            let Some(ab_label) = ab_table.label_of(&image) else {
                matches = false;
                break 'scan;
            };
            let own = table.labels()[idx] as usize;
            match image_of_component[own] {
                None => image_of_component[own] = Some(ab_label),
                Some(prev) if prev != ab_label => {
                    matches = false;
                    break 'scan;
                }
                _ => {}
            }
        }
        let mut hit: Vec<u32> = image_of_component.iter().flatten().copied().collect();
        hit.sort_unstable();
        hit.dedup();
        if matches && hit.len() != table.component_count() {
            matches = false;
        }
        findings.push(RelSearchFinding {
            group: label.clone(),
            k,
            d_normal: d,
            relativized_components: table.component_count(),
            abelianized_components_hit: hit.len(),
            partitions_match: matches,
        });
    }
    Ok(findings)
}

/// Standard image pairs for the Akbulut-Kirby check: a generating pair for
/// each of the two designated groups.
pub fn ak_standard_images(group_label: &str) -> Option<(FiniteGroup, usize, usize)> {
    match group_label {
        "S3" => {
            let g = catalog::symmetric_3();
            let (x, y) = (g.generators()[1], g.generators()[0]);
            Some((g, x, y))
        }
        "A5" => {
            let g = catalog::alternating_5();
            let (x, y) = (g.generators()[0], g.generators()[1]);
            Some((g, x, y))
        }
        _ => None,
    }
}

/// One independent unit of the default battery; tasks rebuild their group
/// from the catalog, so they can run on any thread in any order.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "check")]
pub enum CheckTask {
    Lifting { group: String, k: usize },
    Perfect { group: String, k: usize },
    PerfectWithOuter { k: usize },
    KPlusOne { group: String },
    Ak { group: String, n: i64 },
    FreeImage { group: String, k: usize },
    Pullback { group: String, k: usize },
}

/// The full default battery over the built-in matrix: lifting on
/// non-abelian members (k = 2, and k = 3 up to order 60), perfect-group
/// connectivity, rank-plus-one connectivity, the Akbulut-Kirby shadow on
/// S3 and A5, free-image connectivity, and the pullback claim on the
/// perfect members.
pub fn standard_check_tasks() -> Vec<CheckTask> {
    let matrix = catalog::standard_matrix();
    let mut tasks = Vec::new();
    for (label, group) in &matrix {
        if group.is_abelian() {
            continue;
        }
        tasks.push(CheckTask::Lifting {
            group: label.clone(),
            k: 2,
        });
        if group.order() <= 60 {
            tasks.push(CheckTask::Lifting {
                group: label.clone(),
                k: 3,
            });
        }
    }
    for (label, group) in &matrix {
        if group.is_perfect() && group.order() > 1 {
            tasks.push(CheckTask::Perfect {
                group: label.clone(),
                k: 2,
            });
        }
    }
    tasks.push(CheckTask::PerfectWithOuter { k: 2 });
    for (label, _) in &matrix {
        tasks.push(CheckTask::KPlusOne {
            group: label.clone(),
        });
    }
    for label in ["S3", "A5"] {
        for n in [2, 3, 4] {
            tasks.push(CheckTask::Ak {
                group: label.to_string(),
                n,
            });
        }
    }
    for (label, _) in &matrix {
        tasks.push(CheckTask::FreeImage {
            group: label.clone(),
            k: 2,
        });
    }
    for (label, group) in &matrix {
        if group.is_perfect() && group.order() > 1 {
            tasks.push(CheckTask::Pullback {
                group: label.clone(),
                k: 2,
            });
        }
    }
    tasks
}

fn matrix_group(label: &str) -> Result<FiniteGroup> {
    catalog::standard_matrix()
        .into_iter()
        .find(|(l, _)| l == label)
        .map(|(_, g)| g)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown matrix group {label}")))
}

pub fn run_check_task(
    task: &CheckTask,
    budget: u64,
    policy: ConjugatorPolicy,
) -> Result<VerificationReport> {
    let trivial = OperatorSet::trivial();
    match task {
        CheckTask::Lifting { group, k } => {
            verify_lifting(&matrix_group(group)?, group, *k, policy, budget)
        }
        CheckTask::Perfect { group, k } => {
            verify_perfect(&matrix_group(group)?, group, &trivial, *k, policy, budget)
        }
        CheckTask::PerfectWithOuter { k } => {
            let (a5, outer) = catalog::a5_with_outer_automorphism();
            verify_perfect(&a5, "A5+outer", &outer, *k, policy, budget)
        }
        CheckTask::KPlusOne { group } => {
            let g = matrix_group(group)?;
            let d = g.d_normal(&trivial);
            verify_k_plus_one(&g, group, &trivial, d + 1, policy, budget)
        }
        CheckTask::Ak { group, n } => {
            let (g, x, y) = ak_standard_images(group).ok_or_else(|| {
                Error::InvalidArgument(format!("no designated image pair for {group}"))
            })?;
            ak_test(&g, group, x, y, *n, policy, budget)
        }
        CheckTask::FreeImage { group, k } => {
            verify_free_image_connected(&matrix_group(group)?, group, *k, policy, budget)
        }
        CheckTask::Pullback { group, k } => {
            verify_pullback_normal_generation(&matrix_group(group)?, group, *k, policy, budget)
        }
    }
}

/// Runs every task of the default battery in order.
pub fn run_standard_checks(
    budget: u64,
    policy: ConjugatorPolicy,
) -> Result<Vec<VerificationReport>> {
    standard_check_tasks()
        .iter()
        .map(|t| run_check_task(t, budget, policy.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_CODE_BUDGET;

    const BUDGET: u64 = DEFAULT_CODE_BUDGET;

    #[test]
    fn lifting_on_s3_and_q8() {
        let r = verify_lifting(
            &catalog::symmetric_3(),
            "S3",
            2,
            ConjugatorPolicy::Generators,
            BUDGET,
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.evidence["component_count"], 1);

        let r = verify_lifting(
            &catalog::quaternion_8(),
            "Q8",
            2,
            ConjugatorPolicy::Generators,
            BUDGET,
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.evidence["component_count"], 1);
        assert_eq!(r.evidence["abelian_component_count"], 1);
    }

    #[test]
    fn lifting_on_sl23() {
        let r = verify_lifting(
            &catalog::special_linear_2(3).unwrap(),
            "SL(2,3)",
            2,
            ConjugatorPolicy::Generators,
            BUDGET,
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.evidence["component_count"], 1);
    }

    #[test]
    fn lifting_hypothesis_checked() {
        // V4 has d = 2, so k = 1 violates the hypothesis outright.
        assert!(matches!(
            verify_lifting(
                &catalog::klein_four(),
                "V4",
                1,
                ConjugatorPolicy::Generators,
                BUDGET
            ),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn perfect_connectivity_on_a5() {
        let op = OperatorSet::trivial();
        let r = verify_perfect(
            &catalog::alternating_5(),
            "A5",
            &op,
            2,
            ConjugatorPolicy::Generators,
            BUDGET,
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.evidence["vertex_count"], 3599);
        assert!(verify_perfect(
            &catalog::symmetric_3(),
            "S3",
            &op,
            2,
            ConjugatorPolicy::Generators,
            BUDGET
        )
        .is_err());
    }

    #[test]
    fn perfect_connectivity_with_outer_operator() {
        let (a5, outer) = catalog::a5_with_outer_automorphism();
        let r = verify_perfect(
            &a5,
            "A5+outer",
            &outer,
            2,
            ConjugatorPolicy::Generators,
            BUDGET,
        )
        .unwrap();
        assert!(r.passed());
    }

    #[test]
    fn rank_plus_one_cases() {
        let op = OperatorSet::trivial();
        for (label, group, k) in [
            ("S3", catalog::symmetric_3(), 2),
            ("Z6", catalog::cyclic(6), 2),
            ("V4", catalog::klein_four(), 3),
        ] {
            let r = verify_k_plus_one(
                &group,
                label,
                &op,
                k,
                ConjugatorPolicy::Generators,
                BUDGET,
            )
            .unwrap();
            assert!(r.passed(), "{label}");
        }
        assert!(verify_k_plus_one(
            &catalog::klein_four(),
            "V4",
            &op,
            2,
            ConjugatorPolicy::Generators,
            BUDGET
        )
        .is_err());
    }

    #[test]
    fn ak_shadow_on_s3() {
        let (g, x, y) = ak_standard_images("S3").unwrap();
        for n in [2, 3, 4] {
            let r = ak_test(&g, "S3", x, y, n, ConjugatorPolicy::Generators, BUDGET).unwrap();
            assert!(r.passed(), "n = {n}");
            assert_eq!(r.evidence["abelianized_determinant"], -1);
            let len = r.evidence["certificate_len"].as_u64().unwrap();
            assert!(len <= 64);
        }
    }

    #[test]
    fn ak_rejects_non_generating_images() {
        let g = catalog::symmetric_3();
        assert!(matches!(
            ak_test(&g, "S3", 1, 3, 2, ConjugatorPolicy::Generators, BUDGET),
            Err(Error::NotNGenerating(_))
        ));
    }

    #[test]
    fn free_image_examples() {
        for (label, group) in [
            ("A5", catalog::alternating_5()),
            ("Z4", catalog::cyclic(4)),
            ("S3", catalog::symmetric_3()),
        ] {
            let r = verify_free_image_connected(
                &group,
                label,
                2,
                ConjugatorPolicy::Generators,
                BUDGET,
            )
            .unwrap();
            assert!(r.passed(), "{label}");
        }
    }

    #[test]
    fn pullback_examples() {
        let r = verify_pullback_normal_generation(
            &catalog::alternating_5(),
            "A5",
            2,
            ConjugatorPolicy::Generators,
            BUDGET,
        )
        .unwrap();
        assert!(r.passed());
        let r = verify_pullback_normal_generation(
            &catalog::cyclic(1),
            "1",
            2,
            ConjugatorPolicy::Generators,
            BUDGET,
        )
        .unwrap();
        assert!(r.passed());
    }

    #[test]
    fn rel_search_reports_without_asserting() {
        let entries: Vec<(String, FiniteGroup, OperatorSet)> = vec![
            ("V4".into(), catalog::klein_four(), OperatorSet::trivial()),
            ("Q8".into(), catalog::quaternion_8(), OperatorSet::trivial()),
            ("S3".into(), catalog::symmetric_3(), OperatorSet::trivial()),
        ];
        let findings = rel_conjecture_search(&entries, BUDGET).unwrap();
        // S3 has d = 1 and is skipped.
        assert_eq!(findings.len(), 2);
        for f in &findings {
            assert_eq!(f.k, f.d_normal);
        }
    }

    #[test]
    fn reports_are_reproducible_modulo_runtime() {
        let make = || {
            verify_lifting(
                &catalog::symmetric_3(),
                "S3",
                2,
                ConjugatorPolicy::Generators,
                BUDGET,
            )
            .unwrap()
        };
        assert_eq!(make().reproducible_view(), make().reproducible_view());
    }
}
