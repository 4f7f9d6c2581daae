//! Small named groups used as structure groups and test fixtures.

use crate::green::GroupTable;
use crate::pmap::PartialMap;
use crate::semigroup::GeneratedSemigroup;

/// Cyclic group of order n.
pub fn cyclic(n: usize) -> GroupTable {
    assert!(n >= 1);
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    GroupTable::from_raw(&table).expect("cyclic table is a group")
}

fn from_permutations(gens: &[PartialMap]) -> GroupTable {
    let s = GeneratedSemigroup::close_generators(gens, 10_000).expect("closure");
    let n = s.size();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| s.product(a, b)).collect())
        .collect();
    GroupTable::from_raw(&table).expect("permutation closure is a group")
}

/// Symmetric group on 3 points (order 6).
pub fn symmetric3() -> GroupTable {
    let r = crate::pmap::parse_orbits(3, "(1,2,3)").unwrap();
    let t = crate::pmap::parse_orbits(3, "(1,2)(3)").unwrap();
    from_permutations(&[r, t])
}

/// Dihedral group of the square (order 8).
pub fn dihedral4() -> GroupTable {
    let r = crate::pmap::parse_orbits(4, "(1,2,3,4)").unwrap();
    let t = crate::pmap::parse_orbits(4, "(1,3)(2)(4)").unwrap();
    from_permutations(&[r, t])
}

/// Quaternion group of order 8, via its unit multiplication.
pub fn quaternion8() -> GroupTable {
    // Elements: 1, -1, i, -i, j, -j, k, -k as (axis, sign) with axis 0 = scalar.
    // Encode 0..7 = 1,-1,i,-i,j,-j,k,-k.
    let mul = |a: usize, b: usize| -> usize {
        let (ax, asim) = (a / 2, a % 2 == 1);
        let (bx, bsim) = (b / 2, b % 2 == 1);
        // axis multiplication with sign: scalar=0, i=1, j=2, k=3.
        let (axis, extra_neg) = match (ax, bx) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true), // i*i = -1
            (1, 2) => (3, false),          // ij = k
            (2, 1) => (3, true),           // ji = -k
            (2, 3) => (1, false),          // jk = i
            (3, 2) => (1, true),           // kj = -i
            (3, 1) => (2, false),          // ki = j
            (1, 3) => (2, true),           // ik = -j
            _ => unreachable!(),
        };
        let neg = asim ^ bsim ^ extra_neg;
        axis * 2 + usize::from(neg)
    };
    let table: Vec<Vec<usize>> = (0..8)
        .map(|a| (0..8).map(|b| mul(a, b)).collect())
        .collect();
    GroupTable::from_raw(&table).expect("quaternion table is a group")
}

/// The trivial group.
pub fn trivial() -> GroupTable {
    cyclic(1)
}

/// A named group lookup for parsers and tests.
pub fn by_name(name: &str) -> Option<GroupTable> {
    match name.to_ascii_lowercase().as_str() {
        "trivial" | "c1" => Some(trivial()),
        "c2" => Some(cyclic(2)),
        "c3" => Some(cyclic(3)),
        "c4" => Some(cyclic(4)),
        "c5" => Some(cyclic(5)),
        "c6" => Some(cyclic(6)),
        "s3" => Some(symmetric3()),
        "d4" => Some(dihedral4()),
        "q8" => Some(quaternion8()),
        _ => {
            let rest = name.strip_prefix(['c', 'C'])?;
            let n: usize = rest.parse().ok()?;
            (n >= 1 && n <= 64).then(|| cyclic(n))
        }
    }
}

/// Converts a group table to a standalone semigroup (for oracle runs).
pub fn to_semigroup(gt: &GroupTable) -> GeneratedSemigroup {
    let n = gt.order();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| gt.mul(a, b)).collect())
        .collect();
    GeneratedSemigroup::from_table(&table, None).expect("group table is associative")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(cyclic(6).order(), 6);
        assert_eq!(symmetric3().order(), 6);
        assert_eq!(dihedral4().order(), 8);
        assert_eq!(quaternion8().order(), 8);
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion8();
        // i*j = k, j*i = -k, i^2 = -1.
        assert_eq!(q.mul(2, 4), 6);
        assert_eq!(q.mul(4, 2), 7);
        assert_eq!(q.mul(2, 2), 1);
        // Unique element of order 2.
        let order2 = (0..8)
            .filter(|&x| x != q.identity as usize && q.mul(x, x) == q.identity as usize)
            .count();
        assert_eq!(order2, 1);
    }
}
