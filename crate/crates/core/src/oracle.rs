//! Slow, literal reference implementations and a seeded instance generator.
//!
//! Nothing here shares code with the fast paths it is compared against:
//! balls come from enumerating radii, membership from testing every
//! candidate center and radius, isometry from trying every bijection.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rat::Rat;
use crate::represent::{Node, RootedLabeledTree};
use crate::space::{Ball, PointSet, UltraSpace};

/// Largest input [`oracle_isometric`] accepts.
pub const MAX_ORACLE_ISOMETRY_POINTS: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("invalid random spec: {0}")]
    InvalidSpec(String),
    #[error("label pool has no positive value to label an internal node")]
    PoolTooSmall,
    #[error("brute-force search limited to {max} points, got {got}")]
    InputTooLarge { max: usize, got: usize },
}

/// Parameters for [`random_space`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub seed: u64,
    pub max_points: usize,
    pub label_pool: Vec<Rat>,
}

/// `{0, 1, 2, 3, 5, 7, 11/2}`.
pub fn default_label_pool() -> Vec<Rat> {
    let mut pool: Vec<Rat> = [0, 1, 2, 3, 5, 7].into_iter().map(Rat::from_integer).collect();
    pool.push(Rat::new(11, 2));
    pool
}

impl RandomSpec {
    pub fn new(seed: u64, max_points: usize) -> Self {
        RandomSpec { seed, max_points, label_pool: default_label_pool() }
    }

    fn check(&self) -> Result<(), OracleError> {
        if self.max_points == 0 {
            return Err(OracleError::InvalidSpec("max_points must be at least 1".into()));
        }
        if self.label_pool.iter().any(Rat::is_negative) {
            return Err(OracleError::InvalidSpec("labels must be nonnegative".into()));
        }
        if !self.label_pool.iter().any(Rat::is_zero) {
            return Err(OracleError::InvalidSpec("label pool must contain 0".into()));
        }
        let distinct: BTreeSet<&Rat> = self.label_pool.iter().collect();
        if distinct.len() != self.label_pool.len() {
            return Err(OracleError::InvalidSpec("label pool values must be distinct".into()));
        }
        Ok(())
    }
}

/// Every `B_r(c) = {x : d(c, x) < r}` for every center and every radius in
/// the distance values, the midpoints between consecutive distinct values,
/// and one past the maximum.
pub fn oracle_open_balls(space: &UltraSpace) -> Vec<Ball> {
    let n = space.len();
    let values: BTreeSet<Rat> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| space.dist(i, j).clone()).collect();
    let values: Vec<Rat> = values.into_iter().collect();
    let mut radii = values.clone();
    radii.extend(values.windows(2).map(|w| w[0].midpoint(&w[1])));
    if let Some(max) = values.last() {
        radii.push(max + &Rat::from_integer(1));
    }

    let mut found: BTreeSet<PointSet> = BTreeSet::new();
    for c in 0..n {
        for r in &radii {
            let ball: PointSet = (0..n).filter(|&x| space.dist(c, x) < r).collect();
            if !ball.is_empty() {
                found.insert(ball);
            }
        }
    }
    found
        .into_iter()
        .map(|members| {
            let mut diam = Rat::zero();
            for &a in &members {
                for &b in &members {
                    if *space.dist(a, b) > diam {
                        diam = space.dist(a, b).clone();
                    }
                }
            }
            Ball::from_parts(members, diam)
        })
        .collect()
}

/// `set` equals `{x : d(x, c) = r} ∪ {c}` for some member `c` and some
/// radius `r` among the distances from `c`.
pub fn oracle_is_centered_sphere(space: &UltraSpace, set: &[usize]) -> bool {
    let n = space.len();
    set.iter().any(|&c| {
        (0..n).any(|y| {
            let r = space.dist(c, y);
            let sphere: Vec<usize> = (0..n).filter(|&x| x == c || space.dist(x, c) == r).collect();
            sphere == set
        })
    })
}

/// Every open ball is a centered sphere, checked by raw definition.
pub fn oracle_is_ugvl(space: &UltraSpace) -> bool {
    oracle_open_balls(space).iter().all(|b| oracle_is_centered_sphere(space, b.members()))
}

/// True iff some bijection between the point sets preserves all distances.
pub fn oracle_isometric(a: &UltraSpace, b: &UltraSpace) -> Result<bool, OracleError> {
    for s in [a, b] {
        if s.len() > MAX_ORACLE_ISOMETRY_POINTS {
            return Err(OracleError::InputTooLarge { max: MAX_ORACLE_ISOMETRY_POINTS, got: s.len() });
        }
    }
    if a.len() != b.len() {
        return Ok(false);
    }

    fn extend(a: &UltraSpace, b: &UltraSpace, image: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = image.len();
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || !image.iter().enumerate().all(|(k, &m)| a.dist(k, i) == b.dist(m, j)) {
                continue;
            }
            used[j] = true;
            image.push(j);
            if extend(a, b, image, used) {
                return true;
            }
            image.pop();
            used[j] = false;
        }
        false
    }
    Ok(extend(a, b, &mut Vec::new(), &mut vec![false; b.len()]))
}

/// Random composition of `total` into `parts` positive summands.
fn composition(rng: &mut ChaCha8Rng, total: usize, parts: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> =
        rand::seq::index::sample(rng, total - 1, parts - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    cuts.push(total);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let s = c - prev;
            prev = c;
            s
        })
        .collect()
}

fn grow(rng: &mut ChaCha8Rng, positives: &[Rat], label: Rat, leaves: usize, nodes: &mut Vec<Node>) -> usize {
    let id = nodes.len();
    if leaves == 1 {
        nodes.push(Node::leaf(Rat::zero()));
        return id;
    }
    let below: Vec<&Rat> = positives.iter().filter(|&p| *p < label).collect();
    let sizes = if below.is_empty() {
        vec![1; leaves]
    } else {
        let k = rng.random_range(2..=leaves);
        composition(rng, leaves, k)
    };
    nodes.push(Node::new(label, Vec::new()));
    for s in sizes {
        let child_label = if s == 1 { Rat::zero() } else { below[rng.random_range(0..below.len())].clone() };
        let child = grow(rng, positives, child_label, s, nodes);
        nodes[id].children.push(child);
    }
    id
}

/// A seeded random representing shape with at most `max_points` leaves and
/// the space it realizes, with the point order shuffled.
pub fn random_instance(spec: &RandomSpec) -> Result<(RootedLabeledTree, UltraSpace), OracleError> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut positives: Vec<Rat> = spec.label_pool.iter().filter(|l| l.is_positive()).cloned().collect();
    positives.sort_unstable();
    if spec.max_points >= 2 && positives.is_empty() {
        return Err(OracleError::PoolTooSmall);
    }

    let leaves = rng.random_range(1..=spec.max_points);
    let root_label =
        if leaves == 1 { Rat::zero() } else { positives[rng.random_range(0..positives.len())].clone() };
    let mut nodes = Vec::new();
    grow(&mut rng, &positives, root_label, leaves, &mut nodes);
    let shape = RootedLabeledTree::new(nodes, 0, Vec::new()).expect("grown shapes are trees");
    debug_assert!(shape.is_representing_shape());

    let realized = shape.realize_space().expect("grown shapes are valid");
    let mut order = realized.all_points();
    order.shuffle(&mut rng);
    let space = realized.induced_subspace(&order).expect("permutation of all points");
    Ok((shape, space))
}

pub fn random_space(spec: &RandomSpec) -> Result<UltraSpace, OracleError> {
    random_instance(spec).map(|(_, space)| space)
}
