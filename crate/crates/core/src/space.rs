//! Validated finite ultrametric spaces, their open balls and centered spheres.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::rat::Rat;

/// A sorted, duplicate-free list of point indices.
pub type PointSet = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("matrix has {rows} rows but {points} point names were given")]
    RowCount { points: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    RowLength { row: String, len: usize, expected: usize },
    #[error("duplicate point name {0:?}")]
    DuplicateName(String),
    #[error("invalid point name {0:?}: names must be nonempty and contain no whitespace, comma or quote")]
    InvalidName(String),
    #[error("negative distance d({0}, {1})")]
    NegativeDistance(String, String),
    #[error("nonzero diagonal entry d({0}, {0})")]
    NonzeroDiagonal(String),
    #[error("zero distance between distinct points {0} and {1}")]
    ZeroOffDiagonal(String, String),
    #[error("asymmetric distances d({0}, {1}) != d({1}, {0})")]
    Asymmetric(String, String),
    #[error("strong triangle inequality violated: d({0}, {1}) > max(d({0}, {2}), d({2}, {1}))")]
    StrongTriangleViolation(String, String, String),
    #[error("empty point subset")]
    EmptySubset,
    #[error("unknown point index {0}")]
    UnknownPoint(usize),
    #[error("point index {0} listed twice")]
    DuplicatePoint(usize),
}

/// Point names are free-form UTF-8 except for whitespace, commas and quotes.
pub fn is_valid_point_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == ',' || c == '"' || c == '\'')
}

/// A finite ultrametric space. Cannot be constructed without passing every
/// axiom check, so downstream code relies on the axioms unconditionally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltraSpace {
    names: Vec<String>,
    dist: Vec<Rat>,
}

/// An open ball, identified by its member set. The diameter is cached.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ball {
    members: PointSet,
    diameter: Rat,
}

impl Ball {
    /// Trusts the caller that `members` is sorted and `diameter` is its diameter.
    pub(crate) fn from_parts(members: PointSet, diameter: Rat) -> Self {
        Ball { members, diameter }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn diameter(&self) -> &Rat {
        &self.diameter
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.members.len() == 1
    }

    /// Lowest member index.
    pub fn representative(&self) -> usize {
        self.members[0]
    }

    pub fn contains(&self, point: usize) -> bool {
        self.members.binary_search(&point).is_ok()
    }
}

impl UltraSpace {
    /// Validates names and matrix against the ultrametric axioms, reporting
    /// the first violation in row-major order. Triples are scanned as
    /// `(x, y, z)` with `d(x, y) > max(d(x, z), d(z, y))`.
    pub fn new(names: Vec<String>, matrix: Vec<Vec<Rat>>) -> Result<Self, SpaceError> {
        let n = names.len();
        if matrix.len() != n {
            return Err(SpaceError::RowCount { points: n, rows: matrix.len() });
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !is_valid_point_name(name) {
                return Err(SpaceError::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(SpaceError::DuplicateName(name.clone()));
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(SpaceError::RowLength { row: names[i].clone(), len: row.len(), expected: n });
            }
        }

        let pair = |i: usize, j: usize| (names[i].clone(), names[j].clone());
        for (i, row) in matrix.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                if d.is_negative() {
                    let (a, b) = pair(i, j);
                    return Err(SpaceError::NegativeDistance(a, b));
                }
                if i == j {
                    if !d.is_zero() {
                        return Err(SpaceError::NonzeroDiagonal(names[i].clone()));
                    }
                    continue;
                }
                if d.is_zero() {
                    let (a, b) = pair(i, j);
                    return Err(SpaceError::ZeroOffDiagonal(a, b));
                }
                if *d != matrix[j][i] {
                    let (a, b) = pair(i, j);
                    return Err(SpaceError::Asymmetric(a, b));
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let d = &matrix[i][j];
                for k in (0..n).filter(|&k| k != i && k != j) {
                    if d > Rat::max_of(&matrix[i][k], &matrix[k][j]) {
                        return Err(SpaceError::StrongTriangleViolation(
                            names[i].clone(),
                            names[j].clone(),
                            names[k].clone(),
                        ));
                    }
                }
            }
        }

        Ok(UltraSpace { names, dist: matrix.into_iter().flatten().collect() })
    }

    /// Restriction and relabeling paths produce spaces that satisfy the
    /// axioms by construction; debug builds still re-check.
    pub(crate) fn from_trusted(names: Vec<String>, dist: Vec<Rat>) -> Self {
        debug_assert_eq!(dist.len(), names.len() * names.len());
        let space = UltraSpace { names, dist };
        debug_assert!(
            UltraSpace::new(space.names.clone(), space.matrix()).is_ok(),
            "trusted construction produced an invalid space"
        );
        space
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rat {
        &self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn matrix(&self) -> Vec<Vec<Rat>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn all_points(&self) -> PointSet {
        (0..self.len()).collect()
    }

    fn check_subset(&self, subset: &[usize]) -> Result<(), SpaceError> {
        if subset.is_empty() {
            return Err(SpaceError::EmptySubset);
        }
        let mut seen = vec![false; self.len()];
        for &p in subset {
            if p >= self.len() {
                return Err(SpaceError::UnknownPoint(p));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(SpaceError::DuplicatePoint(p));
            }
        }
        Ok(())
    }

    /// Max pairwise distance over `subset`; zero for a singleton.
    pub fn diameter(&self, subset: &[usize]) -> Result<Rat, SpaceError> {
        self.check_subset(subset)?;
        Ok(self.diameter_unchecked(subset))
    }

    pub(crate) fn diameter_unchecked(&self, subset: &[usize]) -> Rat {
        let mut diam = Rat::zero();
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                if *self.dist(i, j) > diam {
                    diam = self.dist(i, j).clone();
                }
            }
        }
        diam
    }

    /// `{x : d(x, c) <= radius}` as a sorted point set.
    pub fn closed_ball(&self, center: usize, radius: &Rat) -> PointSet {
        (0..self.len()).filter(|&x| self.dist(x, center) <= radius).collect()
    }

    /// `{x : d(x, c) = radius} ∪ {c}` as a sorted point set.
    pub fn centered_sphere(&self, center: usize, radius: &Rat) -> PointSet {
        (0..self.len()).filter(|&x| x == center || self.dist(x, center) == radius).collect()
    }

    /// True iff `members` is an open ball. In a finite ultrametric space a
    /// set is an open ball exactly when it is the closed ball of radius
    /// `diam` around any one of its members.
    pub fn is_ball(&self, members: &[usize]) -> bool {
        if self.check_subset(members).is_err() {
            return false;
        }
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let diam = self.diameter_unchecked(&sorted);
        self.closed_ball(sorted[0], &diam) == sorted
    }

    /// Wraps `members` as a [`Ball`], or `None` if it is not an open ball.
    pub fn ball(&self, members: &[usize]) -> Option<Ball> {
        if !self.is_ball(members) {
            return None;
        }
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let diameter = self.diameter_unchecked(&sorted);
        Some(Ball { members: sorted, diameter })
    }

    /// Every distinct open ball, sorted by member list.
    ///
    /// For each center the candidate radii are `{0} ∪ {d(c, y)}`; every open
    /// ball of a finite space is one of these closed balls.
    pub fn open_balls(&self) -> Vec<Ball> {
        let mut found = BTreeSet::new();
        for c in 0..self.len() {
            let mut radii: Vec<&Rat> = self.row(c).iter().collect();
            radii.sort_unstable();
            radii.dedup();
            for r in radii {
                found.insert(self.closed_ball(c, r));
            }
        }
        found
            .into_iter()
            .map(|members| {
                let diameter = self.diameter_unchecked(&members);
                Ball { members, diameter }
            })
            .collect()
    }

    /// Lowest-index `c` in `subset` such that `subset` is the centered
    /// sphere of radius `diam subset` around `c`.
    pub fn centered_sphere_center(&self, subset: &[usize]) -> Result<Option<usize>, SpaceError> {
        self.check_subset(subset)?;
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        let diam = self.diameter_unchecked(&sorted);
        Ok(sorted.iter().copied().find(|&c| self.centered_sphere(c, &diam) == sorted))
    }

    pub fn is_centered_sphere(&self, subset: &[usize]) -> bool {
        matches!(self.centered_sphere_center(subset), Ok(Some(_)))
    }

    /// All distinct centered spheres, sorted.
    pub fn centered_spheres(&self) -> Vec<PointSet> {
        let mut found = BTreeSet::new();
        for c in 0..self.len() {
            // the diagonal entry supplies the radius-0 case
            for r in self.row(c) {
                found.insert(self.centered_sphere(c, r));
            }
        }
        found.into_iter().collect()
    }

    /// All off-diagonal distances equal; vacuously true below two points.
    pub fn is_discrete(&self) -> bool {
        if self.len() < 2 {
            return true;
        }
        let k = self.dist(0, 1);
        (0..self.len()).all(|i| (0..self.len()).all(|j| i == j || self.dist(i, j) == k))
    }

    /// The subspace on `subset`, in the given order.
    pub fn induced_subspace(&self, subset: &[usize]) -> Result<UltraSpace, SpaceError> {
        self.check_subset(subset)?;
        let names = subset.iter().map(|&i| self.names[i].clone()).collect();
        let dist = subset
            .iter()
            .flat_map(|&i| subset.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.dist(i, j).clone())
            .collect();
        Ok(UltraSpace::from_trusted(names, dist))
    }

    /// Sorted list of all off-diagonal distances, one per unordered pair.
    pub fn distance_multiset(&self) -> Vec<Rat> {
        let n = self.len();
        let mut out: Vec<Rat> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| self.dist(i, j).clone())
            .collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{names, pyramid, quadruple, space};

    #[test]
    fn quadruple_is_valid() {
        let q = quadruple();
        assert_eq!(q.len(), 4);
        assert_eq!(q.dist(0, 2), &Rat::from_integer(1));
    }

    #[test]
    fn one_point_space_is_valid() {
        let s = UltraSpace::new(names(&["a"]), vec![vec![Rat::zero()]]).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn broken_triple_names_witnesses() {
        // quadruple with d(x, z) raised to 3
        let err = space(
            &["x", "y", "z", "t"],
            &[&["0", "2", "3", "2"], &["2", "0", "2", "1"], &["3", "2", "0", "2"], &["2", "1", "2", "0"]],
        )
        .unwrap_err();
        assert_eq!(err, SpaceError::StrongTriangleViolation("x".into(), "z".into(), "y".into()));
    }

    #[test]
    fn axiom_errors() {
        assert_eq!(
            space(&["a", "b"], &[&["0", "1"], &["2", "0"]]).unwrap_err(),
            SpaceError::Asymmetric("a".into(), "b".into())
        );
        assert_eq!(
            space(&["a", "b"], &[&["1", "1"], &["1", "0"]]).unwrap_err(),
            SpaceError::NonzeroDiagonal("a".into())
        );
        assert_eq!(
            space(&["a", "b"], &[&["0", "0"], &["0", "0"]]).unwrap_err(),
            SpaceError::ZeroOffDiagonal("a".into(), "b".into())
        );
        assert_eq!(
            space(&["a", "b"], &[&["0", "-1"], &["-1", "0"]]).unwrap_err(),
            SpaceError::NegativeDistance("a".into(), "b".into())
        );
        assert_eq!(
            space(&["a", "a"], &[&["0", "1"], &["1", "0"]]).unwrap_err(),
            SpaceError::DuplicateName("a".into())
        );
        assert_eq!(space(&["a b"], &[&["0"]]).unwrap_err(), SpaceError::InvalidName("a b".into()));
        assert!(matches!(space(&["a", "b"], &[&["0", "1"]]).unwrap_err(), SpaceError::RowCount { .. }));
        assert!(matches!(
            space(&["a", "b"], &[&["0", "1"], &["1"]]).unwrap_err(),
            SpaceError::RowLength { .. }
        ));
    }

    #[test]
    fn diameters() {
        let q = quadruple();
        assert_eq!(q.diameter(&[0, 1, 2, 3]).unwrap(), Rat::from_integer(2));
        assert_eq!(q.diameter(&[1]).unwrap(), Rat::zero());
        assert_eq!(q.diameter(&[0, 2]).unwrap(), Rat::from_integer(1));
        assert_eq!(q.diameter(&[]), Err(SpaceError::EmptySubset));
        assert_eq!(q.diameter(&[7]), Err(SpaceError::UnknownPoint(7)));
    }

    fn member_sets(balls: &[Ball]) -> Vec<PointSet> {
        balls.iter().map(|b| b.members().to_vec()).collect()
    }

    #[test]
    fn open_balls_of_worked_examples() {
        let q = quadruple();
        let balls = member_sets(&q.open_balls());
        assert_eq!(balls.len(), 7);
        for expected in [vec![0], vec![1], vec![2], vec![3], vec![0, 2], vec![1, 3], vec![0, 1, 2, 3]] {
            assert!(balls.contains(&expected), "missing {expected:?}");
        }

        let one = UltraSpace::new(names(&["a"]), vec![vec![Rat::zero()]]).unwrap();
        assert_eq!(member_sets(&one.open_balls()), vec![vec![0]]);

        let p = pyramid();
        let balls = p.open_balls();
        assert_eq!(balls.len(), 8);
        let big: Vec<PointSet> = balls.iter().filter(|b| b.len() > 1).map(|b| b.members().to_vec()).collect();
        assert_eq!(big, vec![vec![0, 1, 2, 3, 4], vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn centered_sphere_centers() {
        let p = pyramid();
        // w is index 4
        assert_eq!(p.centered_sphere_center(&p.all_points()).unwrap(), Some(4));
        assert_eq!(p.centered_sphere_center(&[2]).unwrap(), Some(2));
        let q = quadruple();
        assert_eq!(q.centered_sphere_center(&q.all_points()).unwrap(), None);
        assert_eq!(q.centered_sphere_center(&[]), Err(SpaceError::EmptySubset));
    }

    #[test]
    fn centered_sphere_enumeration() {
        let two = space(&["a", "b"], &[&["0", "1"], &["1", "0"]]).unwrap();
        assert_eq!(two.centered_spheres(), vec![vec![0], vec![0, 1], vec![1]]);
        let one = space(&["a"], &[&["0"]]).unwrap();
        assert_eq!(one.centered_spheres(), vec![vec![0]]);
        let q = quadruple();
        assert!(!q.centered_spheres().contains(&q.all_points()));
    }

    #[test]
    fn discreteness() {
        let d = space(&["a", "b", "c"], &[&["0", "5", "5"], &["5", "0", "5"], &["5", "5", "0"]]).unwrap();
        assert!(d.is_discrete());
        assert!(!quadruple().is_discrete());
        assert!(space(&["a"], &[&["0"]]).unwrap().is_discrete());
    }

    #[test]
    fn induced_subspaces() {
        let p = pyramid();
        assert_eq!(p.induced_subspace(&[0, 1, 2, 3]).unwrap(), quadruple());
        assert_eq!(p.induced_subspace(&p.all_points()).unwrap(), p);
        let xz = quadruple().induced_subspace(&[0, 2]).unwrap();
        assert_eq!(xz.names(), &["x", "z"]);
        assert_eq!(xz.dist(0, 1), &Rat::from_integer(1));
        assert_eq!(p.induced_subspace(&[0, 0]), Err(SpaceError::DuplicatePoint(0)));
    }

    #[test]
    fn ball_recognition() {
        let q = quadruple();
        assert!(q.is_ball(&[2, 0]));
        assert!(!q.is_ball(&[0, 1]));
        assert!(!q.is_ball(&[]));
        assert_eq!(q.ball(&[2, 0]).unwrap().members(), &[0, 2]);
    }
}
