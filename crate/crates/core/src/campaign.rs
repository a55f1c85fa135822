//! Seeded property campaigns over random spaces.
//!
//! Each trial draws a space from [`random_instance`] with seed
//! `seed + trial` and runs every property against it. The report lists pass
//! and fail counts per property and keeps the offending matrix of every
//! failure so it can be replayed.

use std::fmt::{self, Write as _};

use crate::diametrical::diametral_partition;
use crate::document::SpaceDocument;
use crate::oracle::{
    oracle_is_ugvl, oracle_isometric, oracle_open_balls, random_instance, RandomSpec,
    MAX_ORACLE_ISOMETRY_POINTS,
};
use crate::represent::{hausdorff_distance, isometric, representing_tree, RootedLabeledTree};
use crate::space::UltraSpace;
use crate::ugvl::{
    ball_sphere_criterion, contains_isometric_copy, delta, delta_from_tree, generating_tree, is_ugvl,
    leaf_child_criterion, minimal_extension,
};

pub const DEFAULT_SEED: u64 = 0x5EED_2024;
pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_MAX_POINTS: usize = 8;

/// Instances up to this size also get the exhaustive minimality sweep.
pub const MINIMALITY_MAX_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_points: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig { seed: DEFAULT_SEED, trials: DEFAULT_TRIALS, max_points: DEFAULT_MAX_POINTS }
    }
}

pub struct Trial {
    pub index: usize,
    pub seed: u64,
    pub shape: RootedLabeledTree,
    pub space: UltraSpace,
}

/// `None` when the property does not apply to the trial.
type Check = fn(&Trial) -> Option<Result<(), String>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub detail: String,
    pub matrix: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub instances: usize,
    pub properties: Vec<PropertyOutcome>,
}

impl CampaignReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.failed == 0)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyOutcome> {
        self.properties.iter().find(|p| p.name == name)
    }
}

impl fmt::Display for CampaignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "campaign seed={} trials={} max_points={} instances={}",
            c.seed, c.trials, c.max_points, self.instances
        )?;
        for p in &self.properties {
            let tag = if p.failed == 0 { "pass" } else { "FAIL" };
            writeln!(f, "[{tag}] {:<34} passed={} failed={}", p.name, p.passed, p.failed)?;
        }
        for p in &self.properties {
            for fail in &p.failures {
                writeln!(
                    f,
                    "failure {} trial={} seed={}: {}\n  {}",
                    p.name, fail.trial, fail.seed, fail.detail, fail.matrix
                )?;
            }
        }
        write!(f, "result: {}", if self.all_passed() { "PASS" } else { "FAIL" })
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn generate_eval_round_trip(t: &Trial) -> Option<Result<(), String>> {
    if !oracle_is_ugvl(&t.space) {
        return None;
    }
    Some((|| {
        let tree = generating_tree(&t.space).map_err(err)?;
        ensure(tree.generates_ultrametric(), || "generating tree violates the edge condition".into())?;
        ensure(tree.names() == t.space.names(), || "generating tree is on different points".into())?;
        ensure(tree.distance_matrix() == t.space.matrix(), || "d_l differs from the input".into())?;
        let max_label = tree.labels().iter().max().cloned().unwrap_or_default();
        ensure(t.space.len() < 2 || max_label == t.space.diameter_unchecked(&t.space.all_points()), || {
            "max label is not the diameter".into()
        })
    })())
}

fn criterion_agreement(t: &Trial) -> Option<Result<(), String>> {
    Some((|| {
        let by_balls = ball_sphere_criterion(&t.space);
        let tree = representing_tree(&t.space).map_err(err)?;
        let by_tree = leaf_child_criterion(&tree);
        ensure(by_balls == by_tree, || format!("balls say {by_balls}, tree says {by_tree}"))?;
        let d = delta(&t.space).map_err(err)?;
        let dt = delta_from_tree(&t.space).map_err(err)?;
        ensure(d == dt, || format!("delta {d} but {dt} internal nodes lack a leaf"))?;
        ensure((d == 0) == by_balls, || "delta and verdict disagree".into())
    })())
}

fn discrete_three_way(t: &Trial) -> Option<Result<(), String>> {
    let balls: Vec<Vec<usize>> = t.space.open_balls().iter().map(|b| b.members().to_vec()).collect();
    let spheres = t.space.centered_spheres();
    let subset = spheres.iter().all(|s| balls.contains(s));
    let equal = spheres == balls;
    let discrete = t.space.is_discrete();
    Some(ensure(subset == discrete && equal == discrete, || {
        format!("Cs subset of B: {subset}, discrete: {discrete}, Cs = B: {equal}")
    }))
}

fn ball_structure(t: &Trial) -> Option<Result<(), String>> {
    let s = &t.space;
    let balls = s.open_balls();
    Some((|| {
        for b in &balls {
            for &c in b.members() {
                ensure(s.closed_ball(c, b.diameter()) == b.members(), || {
                    format!("{:?} is not the ball of radius diam around {c}", b.members())
                })?;
            }
        }
        for (i, a) in balls.iter().enumerate() {
            for b in &balls[i + 1..] {
                let meet = a.members().iter().filter(|p| b.contains(**p)).count();
                ensure(meet == 0 || meet == a.len() || meet == b.len(), || {
                    format!("{:?} and {:?} overlap without nesting", a.members(), b.members())
                })?;
            }
        }
        for sphere in s.centered_spheres().iter().filter(|c| c.len() >= 2) {
            let diam = s.diameter_unchecked(sphere);
            ensure(
                (0..s.len()).any(|c| sphere.contains(&c) && s.centered_sphere(c, &diam) == *sphere),
                || format!("centered sphere {sphere:?} has no center at radius = diameter"),
            )?;
        }
        if s.len() <= 3 {
            ensure(ball_sphere_criterion(s), || {
                "a space with at most three points is not tree-generated".into()
            })?;
        }
        Ok(())
    })())
}

fn diametral_parts(t: &Trial) -> Option<Result<(), String>> {
    let s = &t.space;
    if s.len() < 2 {
        return None;
    }
    Some((|| {
        let partition = diametral_partition(s).map_err(err)?;
        let diam = partition.space_diameter().clone();
        for part in partition.parts() {
            let open: Vec<usize> = (0..s.len()).filter(|&x| *s.dist(part[0], x) < diam).collect();
            ensure(open == *part, || format!("part {part:?} is not the open ball of radius diam"))?;
            let d = s.diameter_unchecked(part);
            ensure(d < diam, || format!("part {part:?} reaches the diameter"))?;
        }
        let center = s.centered_sphere_center(&s.all_points()).map_err(err)?;
        ensure(partition.has_singleton_part() == center.is_some(), || {
            "singleton part and centered whole space disagree".into()
        })
    })())
}

fn hausdorff_equals_tree_metric(t: &Trial) -> Option<Result<(), String>> {
    Some((|| {
        let tree = representing_tree(&t.space).map_err(err)?;
        let free = tree.to_labeled_tree().map_err(err)?;
        ensure(free.generates_ultrametric(), || "representing tree violates the edge condition".into())?;
        let dl = free.distance_matrix();
        let balls: Vec<_> = tree
            .nodes()
            .iter()
            .map(|n| t.space.ball(n.payload.as_deref().unwrap_or(&[])).ok_or("payload is not a ball"))
            .collect::<Result<_, _>>()?;
        let mut hausdorff = Vec::with_capacity(balls.len());
        for (i, a) in balls.iter().enumerate() {
            let mut row = Vec::with_capacity(balls.len());
            for (j, b) in balls.iter().enumerate() {
                let h = hausdorff_distance(&t.space, a, b).map_err(err)?;
                ensure(h == dl[i][j], || format!("d_H({i}, {j}) = {h} but d_l = {}", dl[i][j]))?;
                row.push(h);
            }
            hausdorff.push(row);
        }
        let names = (0..balls.len()).map(|i| format!("b{i}")).collect();
        UltraSpace::new(names, hausdorff).map_err(|e| format!("Hausdorff matrix is not ultrametric: {e}"))?;

        let mut payloads: Vec<Vec<usize>> = tree.nodes().iter().filter_map(|n| n.payload.clone()).collect();
        payloads.sort();
        let open: Vec<Vec<usize>> = t.space.open_balls().iter().map(|b| b.members().to_vec()).collect();
        ensure(payloads == open, || "representing-tree nodes are not exactly the open balls".into())
    })())
}

fn extension_contract(t: &Trial) -> Option<Result<(), String>> {
    Some((|| {
        let s = &t.space;
        let ext = minimal_extension(s).map_err(err)?;
        let y = &ext.extended;
        let d = delta(s).map_err(err)?;
        ensure(y.len() == s.len() + d, || format!("card {} != {} + {d}", y.len(), s.len()))?;
        ensure(ext.added.len() == d, || "added list does not match delta".into())?;
        UltraSpace::new(y.names().to_vec(), y.matrix()).map_err(|e| format!("extension invalid: {e}"))?;
        ensure(is_ugvl(y).map_err(err)?, || "extension is not tree-generated".into())?;
        let restricted = y.induced_subspace(&ext.embedding).map_err(err)?;
        ensure(restricted == *s, || "restriction to the original points differs".into())?;

        let glued: Vec<usize> = {
            let tx = representing_tree(s).map_err(err)?;
            let at: Vec<usize> = tx
                .preorder()
                .into_iter()
                .filter(|&v| tx.node(v).payload.as_deref().is_some_and(|p| !s.is_centered_sphere(p)))
                .collect();
            let expected = tx.with_glued_leaves(&at);
            ensure(representing_tree(y).map_err(err)?.is_isomorphic(&expected), || {
                "extension tree is not the input tree with glued leaves".into()
            })?;
            at
        };
        ensure(glued.len() == d, || "glued leaf count differs from delta".into())?;

        let reversed: Vec<usize> = (0..s.len()).rev().collect();
        let rev = s.induced_subspace(&reversed).map_err(err)?;
        let ext_rev = minimal_extension(&rev).map_err(err)?;
        ensure(isometric(y, &ext_rev.extended), || "forward and reversed extensions are not isometric".into())
    })())
}

fn round_trips(t: &Trial) -> Option<Result<(), String>> {
    Some((|| {
        let rep = representing_tree(&t.space).map_err(err)?;
        ensure(rep.is_representing_shape(), || "representing tree has an invalid shape".into())?;
        let realized = rep.realize_space().map_err(err)?;
        ensure(isometric(&realized, &t.space), || "realize(represent(s)) is not isometric to s".into())?;
        let from_shape = t.shape.realize_space().map_err(err)?;
        let back = representing_tree(&from_shape).map_err(err)?;
        ensure(back.is_isomorphic(&t.shape), || "represent(realize(t)) is not isomorphic to t".into())?;
        ensure(rep.is_isomorphic(&t.shape), || "generated space does not represent its shape".into())
    })())
}

fn differential_oracles(t: &Trial) -> Option<Result<(), String>> {
    if t.space.len() > MAX_ORACLE_ISOMETRY_POINTS {
        return None;
    }
    Some((|| {
        let s = &t.space;
        ensure(oracle_open_balls(s) == s.open_balls(), || "open balls differ from the oracle".into())?;
        let fast = is_ugvl(s).map_err(err)?;
        ensure(fast == oracle_is_ugvl(s), || format!("is_ugvl {fast} disagrees with the oracle"))?;

        let reversed: Vec<usize> = (0..s.len()).rev().collect();
        let permuted = s.induced_subspace(&reversed).map_err(err)?;
        ensure(isometric(s, &permuted), || "permuted copy not isometric".into())?;

        let other_spec = RandomSpec::new(t.seed ^ 0x9E37_79B9_7F4A_7C15, s.len().max(1));
        let (_, other) = random_instance(&other_spec).map_err(err)?;
        let fast = isometric(s, &other);
        let slow = oracle_isometric(s, &other).map_err(err)?;
        ensure(fast == slow, || format!("isometric {fast} but brute force says {slow}"))
    })())
}

fn ball_heredity(t: &Trial) -> Option<Result<(), String>> {
    if !oracle_is_ugvl(&t.space) {
        return None;
    }
    Some((|| {
        let s = &t.space;
        let tree = generating_tree(s).map_err(err)?;
        for ball in s.open_balls() {
            let sub = s.induced_subspace(ball.members()).map_err(err)?;
            ensure(is_ugvl(&sub).map_err(err)?, || {
                format!("ball {:?} is not tree-generated", ball.members())
            })?;
            let subtree = tree.ball_subtree(s, &ball).map_err(err)?;
            ensure(subtree.to_space().map_err(err)? == sub, || {
                format!("ball subtree on {:?} does not generate the induced subspace", ball.members())
            })?;
        }
        Ok(())
    })())
}

fn minimality(t: &Trial) -> Option<Result<(), String>> {
    if t.space.len() > MINIMALITY_MAX_POINTS {
        return None;
    }
    Some((|| {
        let ext = minimal_extension(&t.space).map_err(err)?;
        let y = &ext.extended;
        let m = y.len();
        for mask in 1u32..(1 << m) - 1 {
            let subset: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
            if subset.len() < t.space.len() {
                continue;
            }
            let sub = y.induced_subspace(&subset).map_err(err)?;
            if is_ugvl(&sub).map_err(err)? && contains_isometric_copy(&sub, &t.space) {
                return Err(format!("proper subset {subset:?} is already an extension"));
            }
        }
        Ok(())
    })())
}

/// Every property, in report order.
pub const PROPERTIES: &[(&str, Check)] = &[
    ("generate_eval_round_trip", generate_eval_round_trip),
    ("criterion_agreement", criterion_agreement),
    ("discrete_three_way", discrete_three_way),
    ("ball_structure", ball_structure),
    ("diametral_parts", diametral_parts),
    ("hausdorff_equals_tree_metric", hausdorff_equals_tree_metric),
    ("extension_contract", extension_contract),
    ("round_trips", round_trips),
    ("differential_oracles", differential_oracles),
    ("ball_heredity", ball_heredity),
    ("minimality", minimality),
];

pub fn trial(config: &CampaignConfig, index: usize) -> Result<Trial, String> {
    let seed = config.seed.wrapping_add(index as u64);
    let (shape, space) = random_instance(&RandomSpec::new(seed, config.max_points)).map_err(err)?;
    Ok(Trial { index, seed, shape, space })
}

pub fn run_campaign(config: CampaignConfig) -> CampaignReport {
    let mut properties: Vec<PropertyOutcome> = PROPERTIES
        .iter()
        .map(|&(name, _)| PropertyOutcome { name, passed: 0, failed: 0, failures: Vec::new() })
        .collect();
    let mut instances = 0;
    for index in 0..config.trials {
        let t = match trial(&config, index) {
            Ok(t) => t,
            Err(e) => {
                // generator failures count against every property
                for p in &mut properties {
                    p.failed += 1;
                    p.failures.push(Failure {
                        trial: index,
                        seed: config.seed.wrapping_add(index as u64),
                        detail: format!("instance generation failed: {e}"),
                        matrix: String::new(),
                    });
                }
                continue;
            }
        };
        instances += 1;
        for (outcome, &(_, check)) in properties.iter_mut().zip(PROPERTIES) {
            match check(&t) {
                None => {}
                Some(Ok(())) => outcome.passed += 1,
                Some(Err(detail)) => {
                    outcome.failed += 1;
                    let matrix = serde_json::to_string(&SpaceDocument::from_space(&t.space))
                        .expect("documents serialize");
                    outcome.failures.push(Failure { trial: t.index, seed: t.seed, detail, matrix });
                }
            }
        }
    }
    CampaignReport { config, instances, properties }
}

/// Report text with a trailing newline.
pub fn render(report: &CampaignReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{report}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_campaign_passes_and_is_deterministic() {
        let config = CampaignConfig { seed: 7, trials: 60, max_points: 6 };
        let a = run_campaign(config);
        assert!(a.all_passed(), "{a}");
        assert_eq!(render(&a), render(&run_campaign(config)));
    }

    #[test]
    fn empty_campaign_is_trivially_green() {
        let r = run_campaign(CampaignConfig { seed: 1, trials: 0, max_points: 8 });
        assert!(r.all_passed());
        assert_eq!(r.instances, 0);
        assert!(r.properties.iter().all(|p| p.passed == 0));
    }
}
