//! Deterministic constructors for the named example semigroups: the
//! identity-cycle families over a rank-one ideal, the three six/four-point
//! members, the eighteen-point aperiodic example, the two-letter family
//! over doubled points, bijection-copy semigroups, Brandt semigroups, and
//! the generic zero-glued union of a rank-one ideal with an acting
//! semigroup.

use crate::engine::{rees_to_semigroup, ReesSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pmap::{parse_orbits, PartialMap};
use crate::semigroup::GeneratedSemigroup;

/// Element cap for gallery closures; the largest member has ~600k elements.
pub const GALLERY_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GalleryId {
    /// 2p generators on 2p points: p rank-one links plus p shift maps;
    /// not strongly nilpotent, but every (2p-1)-generated subsemigroup is.
    Sp(u64),
    /// Rank-one ideal on n+1 points under an n-cycle a, a shifted
    /// theta-run b, and an identity. Nilpotent exactly for odd n.
    N(usize),
    /// N(6): the 7-point member.
    N1,
    /// N(15): the 16-point member.
    N2,
    M1,
    M2,
    M3,
    /// The 18-point aperiodic example with generators y1..y3, z1..z3.
    Example18,
    /// Rank-one partial bijections on n points (plus zero).
    Brandt(usize),
    /// Bijections on {1..n} copied onto a primed point set over a
    /// rank-one ideal on 2n points.
    SU(Vec<PartialMap>),
}

/// Singleton maps i -> i+1 (cyclically) on `n` points; their closure is
/// the full set of rank-one partial maps together with the empty map.
fn rank_one_generators(n: usize) -> Vec<(String, PartialMap)> {
    (0..n)
        .map(|i| (format!("m{}", i + 1), PartialMap::singleton(n, i, (i + 1) % n)))
        .collect()
}

fn close(gens: Vec<(String, PartialMap)>) -> Result<GeneratedSemigroup> {
    GeneratedSemigroup::close_named_generators(&gens, GALLERY_CAP)
}

fn build_n(n: usize) -> Result<GeneratedSemigroup> {
    if n < 2 {
        return Err(Error::BadParameter(format!("cycle length {n} must be at least 2")));
    }
    let deg = n + 1;
    let a_orbit = format!(
        "({})",
        (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    );
    let b_orbit = format!(
        "({},{},#)",
        deg,
        (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    );
    let mut gens = vec![
        ("1".to_string(), PartialMap::identity(deg)),
        ("a".to_string(), parse_orbits(deg, &a_orbit)?),
        ("b".to_string(), parse_orbits(deg, &b_orbit)?),
    ];
    gens.extend(rank_one_generators(deg));
    close(gens)
}

fn build_m(index: usize) -> Result<GeneratedSemigroup> {
    let (deg, letters): (usize, Vec<(&str, &str)>) = match index {
        1 => (6, vec![("c", "(1,4,#)(2,5,#)(3,6,#)"), ("d", "(1,5,#)(2,6,#)(3,4,#)")]),
        2 => (
            6,
            vec![
                ("c", "(1,4,#)(2,5,#)(3,6,#)"),
                ("d", "(1,5,#)(2,6,#)(3,4,#)"),
                ("e", "(1,6,#)(2,4,#)(3,5,#)"),
            ],
        ),
        3 => (4, vec![("c", "(1,2,#)(3,4,#)"), ("d", "(1,4,#)(3,2,#)")]),
        _ => unreachable!(),
    };
    let mut gens = vec![("1".to_string(), PartialMap::identity(deg))];
    for (name, orbit) in letters {
        gens.push((name.to_string(), parse_orbits(deg, orbit)?));
    }
    gens.extend(rank_one_generators(deg));
    close(gens)
}

fn build_example18() -> Result<GeneratedSemigroup> {
    let deg = 18;
    let defs = [
        ("y1", "(1,2,#)(13,14,#)(15,16,#)"),
        ("y2", "(5,6,#)(7,8,#)(17,18,#)"),
        ("y3", "(3,4,#)(9,10,#)(11,12,#)"),
        (
            "z1",
            "(2,7,#)(4,15,#)(6,11,#)(8,9,#)(10,1,#)(12,13,#)(14,5,#)(16,17,#)(18,3,#)",
        ),
        ("z2", "(2,3,#)(4,5,#)(6,1,#)"),
        (
            "z3",
            "(2,1,#)(4,3,#)(6,5,#)(8,7,#)(10,9,#)(12,11,#)(14,13,#)(16,15,#)(18,17,#)",
        ),
    ];
    let gens = defs
        .iter()
        .map(|&(name, orbit)| Ok((name.to_string(), parse_orbits(deg, orbit)?)))
        .collect::<Result<Vec<_>>>()?;
    close(gens)
}

fn build_sp(p: u64) -> Result<GeneratedSemigroup> {
    if !linalg::is_prime(p) {
        return Err(Error::BadParameter(format!("{p} is not prime")));
    }
    let p = p as usize;
    let deg = 2 * p;
    let mut gens = Vec::new();
    // Links alpha_i -> beta_i; the alphas are points 0..p, betas p..2p.
    for i in 0..p {
        gens.push((format!("x{}", i + 1), PartialMap::singleton(deg, i, p + i)));
    }
    // Shifts beta_j -> alpha_{j+i mod p}.
    for i in 1..=p {
        let images: Vec<Option<usize>> = (0..deg)
            .map(|pt| if pt >= p { Some((pt - p + i) % p) } else { None })
            .collect();
        gens.push((format!("w{i}"), PartialMap::from_images(deg, &images)?));
    }
    close(gens)
}

fn build_su(bijections: &[PartialMap]) -> Result<GeneratedSemigroup> {
    let n = bijections
        .first()
        .map(|b| b.degree())
        .ok_or_else(|| Error::BadParameter("at least one bijection required".into()))?;
    for b in bijections {
        if b.degree() != n {
            return Err(Error::DegreeMismatch(b.degree(), n));
        }
        if !b.is_total() || !b.is_partial_injection() {
            return Err(Error::BadParameter("generators must be bijections".into()));
        }
    }
    let deg = 2 * n;
    let mut gens = Vec::new();
    for (i, b) in bijections.iter().enumerate() {
        // The copy sends each point to the primed image of its original
        // image; primed points have no image.
        let images: Vec<Option<usize>> = (0..deg)
            .map(|pt| if pt < n { b.apply(pt).map(|q| n + q) } else { None })
            .collect();
        gens.push((format!("b{}", i + 1), PartialMap::from_images(deg, &images)?));
    }
    let prime_images: Vec<Option<usize>> =
        (0..deg).map(|pt| if pt < n { Some(n + pt) } else { None }).collect();
    gens.push(("a'".to_string(), PartialMap::from_images(deg, &prime_images)?));
    gens.extend(rank_one_generators(deg));
    close(gens)
}

pub fn build_brandt(n: usize) -> Result<GeneratedSemigroup> {
    if n == 0 {
        return Err(Error::BadParameter("at least one point required".into()));
    }
    close(rank_one_generators(n))
}

pub fn build(id: &GalleryId) -> Result<GeneratedSemigroup> {
    match id {
        GalleryId::Sp(p) => build_sp(*p),
        GalleryId::N(n) => build_n(*n),
        GalleryId::N1 => build_n(6),
        GalleryId::N2 => build_n(15),
        GalleryId::M1 => build_m(1),
        GalleryId::M2 => build_m(2),
        GalleryId::M3 => build_m(3),
        GalleryId::Example18 => build_example18(),
        GalleryId::Brandt(n) => build_brandt(*n),
        GalleryId::SU(bs) => build_su(bs),
    }
}

/// Builds an explicit Rees matrix semigroup from its data.
pub fn build_rees(spec: &ReesSpec) -> Result<GeneratedSemigroup> {
    rees_to_semigroup(spec)
}

/// Names accepted by `parse`, with parameter shapes.
pub fn list() -> Vec<&'static str> {
    vec![
        "Sp(p)        p prime",
        "N(n)         n >= 2",
        "N1           = N(6)",
        "N2           = N(15)",
        "M1",
        "M2",
        "M3",
        "Example18",
        "Brandt(n)",
        "SU           example instance (three-cycle and identity on 3 points)",
        "N4           listed for completeness; no construction is provided",
    ]
}

pub fn parse(text: &str) -> Result<GalleryId> {
    let text = text.trim();
    if let Some((head, tail)) = text.split_once(char::is_whitespace) {
        return parse(&format!("{head}({})", tail.trim()));
    }
    let (name, arg) = match text.find('(') {
        Some(open) => {
            let close = text
                .rfind(')')
                .ok_or_else(|| Error::UnknownGallery(text.to_string()))?;
            (&text[..open], Some(&text[open + 1..close]))
        }
        None => (text, None),
    };
    let num = |a: Option<&str>| -> Result<usize> {
        a.and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::BadParameter(format!("{text}: numeric parameter required")))
    };
    match name {
        "Sp" => Ok(GalleryId::Sp(num(arg)? as u64)),
        "N" => Ok(GalleryId::N(num(arg)?)),
        "N1" => Ok(GalleryId::N1),
        "N2" => Ok(GalleryId::N2),
        "M1" => Ok(GalleryId::M1),
        "M2" => Ok(GalleryId::M2),
        "M3" => Ok(GalleryId::M3),
        "Example18" => Ok(GalleryId::Example18),
        "Brandt" => Ok(GalleryId::Brandt(num(arg)?)),
        "SU" => Ok(GalleryId::SU(vec![
            parse_orbits(3, "(1,2,3)")?,
            PartialMap::identity(3),
        ])),
        "N4" => Err(Error::BadParameter(
            "N4 is listed for completeness only and is not constructed".into(),
        )),
        _ => Err(Error::UnknownGallery(text.to_string())),
    }
}

/// Zero-glued union of the rank-one ideal on n points with a semigroup T
/// acting on columns: delta gives, per element of T, a partial injection
/// on the n points; the empty map must belong to T's zero and nothing
/// else.
pub fn build_theta_union(
    n: usize,
    t: &GeneratedSemigroup,
    delta: &[PartialMap],
) -> Result<GeneratedSemigroup> {
    if n == 0 {
        return Err(Error::InvalidDelta("empty point set".into()));
    }
    if delta.len() != t.size() {
        return Err(Error::InvalidDelta(format!(
            "{} action maps for {} elements",
            delta.len(),
            t.size()
        )));
    }
    let zero_t = t
        .zero()
        .ok_or_else(|| Error::InvalidDelta("acting semigroup has no zero".into()))?;
    for (x, d) in delta.iter().enumerate() {
        if d.degree() != n {
            return Err(Error::InvalidDelta(format!(
                "element {x}: action degree {} differs from {n}",
                d.degree()
            )));
        }
        if !d.is_partial_injection() {
            return Err(Error::InvalidDelta(format!(
                "element {x}: action is not injective off its zero preimage"
            )));
        }
        if d.is_empty_map() != (x == zero_t) {
            return Err(Error::InvalidDelta(format!(
                "element {x}: exactly the zero must act as the empty map"
            )));
        }
    }
    for x in 0..t.size() {
        for y in 0..t.size() {
            if delta[x].then(&delta[y]) != delta[t.product(x, y)] {
                return Err(Error::InvalidDelta(format!(
                    "action is not a homomorphism at ({x}, {y})"
                )));
            }
        }
    }
    // Element layout mirrors the Rees construction: 0 is the zero,
    // 1 + i*n + j is the pair (i, j), and the nonzero elements of T follow.
    let pair = |i: usize, j: usize| 1 + i * n + j;
    let t_elems: Vec<usize> = (0..t.size()).filter(|&x| x != zero_t).collect();
    let t_index: std::collections::HashMap<usize, usize> = t_elems
        .iter()
        .enumerate()
        .map(|(k, &x)| (x, 1 + n * n + k))
        .collect();
    let size = 1 + n * n + t_elems.len();
    let mut table = vec![vec![0usize; size]; size];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if j == k {
                        table[pair(i, j)][pair(k, l)] = pair(i, l);
                    }
                }
            }
        }
    }
    for &x in &t_elems {
        let xi = t_index[&x];
        for i in 0..n {
            for j in 0..n {
                if let Some(jj) = delta[x].apply(j) {
                    table[pair(i, j)][xi] = pair(i, jj);
                }
                if let Some(ii) = delta[x].apply(i) {
                    // x * (ii, j) lands on (i, j) precisely when the action
                    // sends i to ii.
                    table[xi][pair(ii, j)] = pair(i, j);
                }
            }
        }
        for &y in &t_elems {
            let p = t.product(x, y);
            if p != zero_t {
                table[xi][t_index[&y]] = t_index[&p];
            }
        }
    }
    let mut names = vec!["0".to_string()];
    for i in 0..n {
        for j in 0..n {
            names.push(format!("({},{})", i + 1, j + 1));
        }
    }
    for &x in &t_elems {
        names.push(format!("t:{}", t.word_name(x)));
    }
    GeneratedSemigroup::from_table(&table, Some(names))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    #[test]
    fn brandt_and_rank_one_closure() {
        let b3 = build(&GalleryId::Brandt(3)).unwrap();
        assert_eq!(b3.size(), 10);
        assert!(b3.zero().is_some());
    }

    #[test]
    fn identity_cycle_member_small() {
        let n3 = build(&GalleryId::N(3)).unwrap();
        assert!(n3.identity().is_some());
        assert!(!n3.has_adjoined_identity());
        let a = n3.map_of(n3.generators()[1].1).unwrap().clone();
        assert_eq!(a, parse_orbits(4, "(1,2,3)").unwrap());
        // The ideal contains every rank-one map on the four points.
        for i in 0..4 {
            for j in 0..4 {
                assert!(n3.element_of_map(&PartialMap::singleton(4, i, j)).is_some());
            }
        }
        assert!(build(&GalleryId::N(1)).is_err());
    }

    #[test]
    fn shift_family_size() {
        let s2 = build(&GalleryId::Sp(2)).unwrap();
        // All rank-one maps on 4 points, the empty map, and the 2 shifts.
        assert_eq!(s2.size(), 19);
        assert!(build(&GalleryId::Sp(4)).is_err());
    }

    #[test]
    fn six_point_members() {
        let m1 = build(&GalleryId::M1).unwrap();
        let m2 = build(&GalleryId::M2).unwrap();
        let m3 = build(&GalleryId::M3).unwrap();
        // Identity, the letter maps, the rank-one ideal with zero.
        assert_eq!(m1.size(), 36 + 1 + 1 + 2);
        assert_eq!(m2.size(), 36 + 1 + 1 + 3);
        assert_eq!(m3.size(), 16 + 1 + 1 + 2);
        assert!(m3
            .element_of_map(&parse_orbits(4, "(1,2,#)(3,4,#)").unwrap())
            .is_some());
    }

    #[test]
    fn eighteen_point_example_size() {
        let s = build(&GalleryId::Example18).unwrap();
        assert_eq!(s.size(), 364);
        assert!(s.zero().is_some());
        assert!(s.identity().is_none());
    }

    #[test]
    fn bijection_copy_matches_inline_example() {
        let su = build(&parse("SU").unwrap()).unwrap();
        // The rank-one ideal on 6 points plus the two copy maps.
        assert_eq!(su.size(), 39);
        let w = parse_orbits(6, "(1,5,#)(2,6,#)(3,4,#)").unwrap();
        let v = parse_orbits(6, "(1,4,#)(2,5,#)(3,6,#)").unwrap();
        assert!(su.element_of_map(&w).is_some());
        assert!(su.element_of_map(&v).is_some());
        // Idempotents commute in this member.
        let es = su.idempotents();
        for &e in &es {
            for &f in &es {
                assert_eq!(su.product(e, f), su.product(f, e));
            }
        }
    }

    #[test]
    fn parse_and_list() {
        assert_eq!(parse("N1").unwrap(), GalleryId::N1);
        assert_eq!(parse("Brandt(4)").unwrap(), GalleryId::Brandt(4));
        assert_eq!(parse("Sp(3)").unwrap(), GalleryId::Sp(3));
        assert!(parse("Nope").is_err());
        assert!(parse("N4").is_err());
        assert!(!list().is_empty());
    }

    #[test]
    fn theta_union_of_trivial_actor_is_the_ideal() {
        // T = {zero}: the union is the plain Rees semigroup.
        let t = GeneratedSemigroup::close_generators(&[PartialMap::empty(2)], 10).unwrap();
        let zero_t = t.zero().unwrap();
        let delta: Vec<PartialMap> = (0..t.size())
            .map(|x| if x == zero_t { PartialMap::empty(3) } else { PartialMap::identity(3) })
            .collect();
        let u = build_theta_union(3, &t, &delta).unwrap();
        let spec = ReesSpec {
            group: groups::trivial(),
            n_rows: 3,
            n_cols: 3,
            sandwich: (0..3)
                .map(|c| (0..3).map(|r| if r == c { Some(0) } else { None }).collect())
                .collect(),
        };
        let rees = build_rees(&spec).unwrap();
        assert_eq!(u.size(), rees.size());
        for x in 0..u.size() {
            for y in 0..u.size() {
                assert_eq!(u.product(x, y), rees.product(x, y));
            }
        }
    }

    #[test]
    fn theta_union_rejects_non_injective_action() {
        // T = {t, zero} with t^2 = zero.
        let t = GeneratedSemigroup::close_generators(&[PartialMap::singleton(2, 0, 1)], 10)
            .unwrap();
        let bad = PartialMap::from_images(3, &[Some(0), Some(0), None]).unwrap();
        let delta: Vec<PartialMap> = (0..t.size())
            .map(|x| if x == t.zero().unwrap() { PartialMap::empty(3) } else { bad.clone() })
            .collect();
        assert!(matches!(
            build_theta_union(3, &t, &delta),
            Err(Error::InvalidDelta(_))
        ));
    }

    #[test]
    fn theta_union_with_nilpotent_actor() {
        // T = {t, zero} with t^2 = zero, t acting as the singleton 1 -> 2.
        let t = GeneratedSemigroup::close_generators(&[PartialMap::singleton(2, 0, 1)], 10)
            .unwrap();
        let zero_t = t.zero().unwrap();
        let act = PartialMap::singleton(3, 0, 1);
        let delta: Vec<PartialMap> = (0..t.size())
            .map(|x| if x == zero_t { PartialMap::empty(3) } else { act.clone() })
            .collect();
        let u = build_theta_union(3, &t, &delta).unwrap();
        assert_eq!(u.size(), 1 + 9 + 1);
        let pair = |i: usize, j: usize| 1 + i * 3 + j;
        let te = 10;
        // Columns move along the action, rows against it.
        assert_eq!(u.product(pair(2, 0), te), pair(2, 1));
        assert_eq!(u.product(pair(2, 1), te), 0);
        assert_eq!(u.product(te, pair(1, 2)), pair(0, 2));
        assert_eq!(u.product(te, pair(0, 2)), 0);
        assert_eq!(u.product(te, te), 0);
    }
}
