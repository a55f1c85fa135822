//! Spaces shared by the unit tests.

use crate::rat::Rat;
use crate::space::{SpaceError, UltraSpace};

pub fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

pub fn space(ns: &[&str], rows: &[&[&str]]) -> Result<UltraSpace, SpaceError> {
    let matrix = rows.iter().map(|row| row.iter().map(|v| v.parse::<Rat>().unwrap()).collect()).collect();
    UltraSpace::new(names(ns), matrix)
}

/// Four points x, y, z, t: opposite pairs at 1, everything else at 2.
pub fn quadruple() -> UltraSpace {
    space(
        &["x", "y", "z", "t"],
        &[&["0", "2", "1", "2"], &["2", "0", "2", "1"], &["1", "2", "0", "2"], &["2", "1", "2", "0"]],
    )
    .unwrap()
}

/// The quadruple plus an apex w at distance 2 from every other point.
pub fn pyramid() -> UltraSpace {
    space(
        &["x", "y", "z", "t", "w"],
        &[
            &["0", "2", "1", "2", "2"],
            &["2", "0", "2", "1", "2"],
            &["1", "2", "0", "2", "2"],
            &["2", "1", "2", "0", "2"],
            &["2", "2", "2", "2", "0"],
        ],
    )
    .unwrap()
}

/// Triangle with d(x, y) = d(y, z) = a and d(x, z) = b.
pub fn triangle(a: i64, b: i64) -> UltraSpace {
    let (a, b) = (Rat::from_integer(a), Rat::from_integer(b));
    let z = Rat::zero();
    UltraSpace::new(
        names(&["x", "y", "z"]),
        vec![vec![z.clone(), a.clone(), b.clone()], vec![a.clone(), z.clone(), a.clone()], vec![b, a, z]],
    )
    .unwrap()
}
