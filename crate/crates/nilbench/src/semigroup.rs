//! Finite semigroups presented by generators.
//!
//! Elements are either partial transformations (products computed by
//! composition, with a dense table cached only for small sizes) or rows of an
//! explicit multiplication table. Every element records a generator word.

use crate::error::{Error, Result};
use crate::pmap::PartialMap;
use std::collections::HashMap;

/// Sizes up to which a dense product table is cached for map-backed semigroups.
const TABLE_CACHE_CAP: usize = 2048;
/// Sizes up to which an explicit table is checked for associativity exhaustively.
const ASSOC_EXHAUSTIVE_CAP: usize = 512;

#[derive(Clone)]
pub(crate) enum Realization {
    Maps {
        maps: Vec<PartialMap>,
        index: HashMap<PartialMap, u32>,
    },
    Table,
}

#[derive(Clone)]
pub struct GeneratedSemigroup {
    realization: Realization,
    size: usize,
    /// Generator names paired with their element ids. Distinct names may share
    /// an element when generators coincide.
    generators: Vec<(String, usize)>,
    /// BFS parent links: `word_link[x] = (parent, gen)` with `x = parent * gen`;
    /// generators link to themselves.
    word_link: Vec<(u32, u32)>,
    /// x * g for each element and generator index, row-major.
    right_gen: Vec<u32>,
    /// g * x for each element and generator index, row-major.
    left_gen: Vec<u32>,
    table: Option<Vec<u32>>,
    identity: Option<usize>,
    zero: Option<usize>,
    has_adjoined_identity: bool,
}

/// Idempotent power data for one element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaData {
    /// x^omega, the unique idempotent power.
    pub omega: usize,
    /// x^(omega-1): the power congruent to -1 mod the period, at least the index.
    pub omega_minus_1: usize,
    pub index: usize,
    pub period: usize,
}

/// Variables of substitution words for `omega_iterate`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Y(usize),
    Z(usize),
}

fn default_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| {
            if k <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("g{}", i + 1)
            }
        })
        .collect()
}

impl GeneratedSemigroup {
    /// Closes a generating set of partial maps under composition. Generator
    /// names default to a, b, c, ...
    pub fn close_generators(gens: &[PartialMap], cap: usize) -> Result<Self> {
        let names = default_names(gens.len());
        let named: Vec<(String, PartialMap)> =
            names.into_iter().zip(gens.iter().cloned()).collect();
        Self::close_named_generators(&named, cap)
    }

    pub fn close_named_generators(gens: &[(String, PartialMap)], cap: usize) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::BadParameter("no generators".into()));
        }
        let degree = gens[0].1.degree();
        for (_, g) in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(g.degree(), degree));
            }
        }
        let mut maps: Vec<PartialMap> = Vec::new();
        let mut index: HashMap<PartialMap, u32> = HashMap::new();
        let mut word_link: Vec<(u32, u32)> = Vec::new();
        let mut generators = Vec::new();
        let mut gen_ids: Vec<u32> = Vec::new();
        for (gi, (name, g)) in gens.iter().enumerate() {
            let id = match index.get(g) {
                Some(&id) => id,
                None => {
                    let id = maps.len() as u32;
                    index.insert(g.clone(), id);
                    maps.push(g.clone());
                    word_link.push((id, gi as u32));
                    id
                }
            };
            gen_ids.push(id);
            generators.push((name.clone(), id as usize));
        }
        let ng = gens.len();
        let mut right_gen: Vec<u32> = Vec::new();
        let mut frontier = 0usize;
        while frontier < maps.len() {
            let x = maps[frontier].clone();
            for gi in 0..ng {
                let y = x.then(&gens[gi].1);
                let id = match index.get(&y) {
                    Some(&id) => id,
                    None => {
                        if maps.len() >= cap {
                            return Err(Error::CapExceeded(maps.len() + 1, cap));
                        }
                        let id = maps.len() as u32;
                        index.insert(y.clone(), id);
                        maps.push(y);
                        word_link.push((frontier as u32, gi as u32));
                        id
                    }
                };
                right_gen.push(id);
            }
            frontier += 1;
        }
        let size = maps.len();
        let mut left_gen = vec![0u32; size * ng];
        for x in 0..size {
            for gi in 0..ng {
                let y = gens[gi].1.then(&maps[x]);
                left_gen[x * ng + gi] = *index.get(&y).expect("closure is closed");
            }
        }
        let mut s = GeneratedSemigroup {
            realization: Realization::Maps { maps, index },
            size,
            generators,
            word_link,
            right_gen,
            left_gen,
            table: None,
            identity: None,
            zero: None,
            has_adjoined_identity: false,
        };
        s.cache_table_if_small();
        s.identity = s.find_identity();
        s.zero = s.find_zero();
        Ok(s)
    }

    /// Builds a semigroup from an explicit table; every element is a generator.
    /// `table[i][j]` is the product of elements i and j.
    pub fn from_table(table: &[Vec<usize>], names: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(Error::MalformedTable("table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::MalformedTable(format!("entry {v} out of range")));
                }
                flat.push(v as u32);
            }
        }
        // Associativity: exhaustive below the cap, generator spot checks above.
        if n <= ASSOC_EXHAUSTIVE_CAP {
            for a in 0..n {
                for b in 0..n {
                    let ab = flat[a * n + b] as usize;
                    for c in 0..n {
                        let bc = flat[b * n + c] as usize;
                        if flat[ab * n + c] != flat[a * n + bc] {
                            return Err(Error::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        }
        let names = match names {
            Some(v) => {
                if v.len() != n {
                    return Err(Error::MalformedTable("name count mismatch".into()));
                }
                v
            }
            None => (0..n).map(|i| format!("x{i}")).collect(),
        };
        let generators: Vec<(String, usize)> = names.into_iter().zip(0..n).collect();
        let word_link: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, i)).collect();
        let right_gen = flat.clone();
        let mut left_gen = vec![0u32; n * n];
        for x in 0..n {
            for g in 0..n {
                left_gen[x * n + g] = flat[g * n + x];
            }
        }
        let mut s = GeneratedSemigroup {
            realization: Realization::Table,
            size: n,
            generators,
            word_link,
            right_gen,
            left_gen,
            table: Some(flat),
            identity: None,
            zero: None,
            has_adjoined_identity: false,
        };
        s.identity = s.find_identity();
        s.zero = s.find_zero();
        Ok(s)
    }

    fn cache_table_if_small(&mut self) {
        if self.table.is_some() || self.size > TABLE_CACHE_CAP {
            return;
        }
        if let Realization::Maps { maps, index } = &self.realization {
            let n = self.size;
            let mut flat = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    flat[a * n + b] = index[&maps[a].then(&maps[b])];
                }
            }
            self.table = Some(flat);
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    pub fn generator_name(&self, gi: usize) -> &str {
        &self.generators[gi].0
    }

    /// Product of elements a and b.
    #[inline]
    pub fn product(&self, a: usize, b: usize) -> usize {
        if let Some(t) = &self.table {
            return t[a * self.size + b] as usize;
        }
        match &self.realization {
            Realization::Maps { maps, index } => {
                index[&maps[a].then(&maps[b])] as usize
            }
            Realization::Table => unreachable!("table realization always caches"),
        }
    }

    /// Product of a list of elements (left to right); `None` for the empty list.
    pub fn product_all(&self, xs: &[usize]) -> Option<usize> {
        let mut it = xs.iter();
        let first = *it.next()?;
        Some(it.fold(first, |acc, &x| self.product(acc, x)))
    }

    #[inline]
    pub fn right_by_gen(&self, x: usize, gi: usize) -> usize {
        self.right_gen[x * self.generators.len() + gi] as usize
    }

    #[inline]
    pub fn left_by_gen(&self, x: usize, gi: usize) -> usize {
        self.left_gen[x * self.generators.len() + gi] as usize
    }

    /// A generator word for the element (generator indices, left to right).
    pub fn word(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = x as u32;
        loop {
            let (parent, gen) = self.word_link[cur as usize];
            out.push(gen as usize);
            if parent == cur {
                break;
            }
            cur = parent;
        }
        out.reverse();
        out
    }

    pub fn word_name(&self, x: usize) -> String {
        self.word(x)
            .iter()
            .map(|&gi| self.generators[gi].0.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn eval_gen_word(&self, w: &[usize]) -> Option<usize> {
        let mut it = w.iter();
        let first = self.generators[*it.next()?].1;
        Some(it.fold(first, |acc, &gi| self.right_by_gen(acc, gi)))
    }

    pub fn map_of(&self, x: usize) -> Option<&PartialMap> {
        match &self.realization {
            Realization::Maps { maps, .. } => Some(&maps[x]),
            Realization::Table => None,
        }
    }

    pub fn element_of_map(&self, m: &PartialMap) -> Option<usize> {
        match &self.realization {
            Realization::Maps { index, .. } => index.get(m).map(|&i| i as usize),
            Realization::Table => None,
        }
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn has_adjoined_identity(&self) -> bool {
        self.has_adjoined_identity
    }

    fn find_identity(&self) -> Option<usize> {
        // e is a two-sided identity iff it fixes all generators on both sides.
        'outer: for e in 0..self.size {
            if self.product(e, e) != e {
                continue;
            }
            for gi in 0..self.generators.len() {
                let g = self.generators[gi].1;
                if self.right_by_gen(e, gi) != g || self.left_by_gen(e, gi) != g {
                    continue 'outer;
                }
            }
            return Some(e);
        }
        None
    }

    fn find_zero(&self) -> Option<usize> {
        'outer: for z in 0..self.size {
            for gi in 0..self.generators.len() {
                if self.right_by_gen(z, gi) != z || self.left_by_gen(z, gi) != z {
                    continue 'outer;
                }
            }
            return Some(z);
        }
        None
    }

    pub fn is_idempotent_elem(&self, x: usize) -> bool {
        self.product(x, x) == x
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&x| self.is_idempotent_elem(x)).collect()
    }

    /// Returns S^1: adjoins an identity as element 0 unless one is present.
    pub fn adjoin_identity(self, cap: usize) -> Result<Self> {
        if self.identity.is_some() {
            return Ok(self);
        }
        match &self.realization {
            Realization::Maps { maps, .. } => {
                let degree = maps.first().map(|m| m.degree()).unwrap_or(0);
                let mut gens: Vec<(String, PartialMap)> =
                    vec![("1".into(), PartialMap::identity(degree))];
                for (name, id) in &self.generators {
                    gens.push((name.clone(), maps[*id].clone()));
                }
                let mut s = Self::close_named_generators(&gens, cap)?;
                s.has_adjoined_identity = true;
                Ok(s)
            }
            Realization::Table => {
                let n = self.size;
                let old = self.table.as_ref().unwrap();
                let mut table = vec![vec![0usize; n + 1]; n + 1];
                for i in 0..=n {
                    table[0][i] = i;
                    table[i][0] = i;
                }
                for a in 0..n {
                    for b in 0..n {
                        table[a + 1][b + 1] = old[a * n + b] as usize + 1;
                    }
                }
                let mut names = vec!["1".to_string()];
                names.extend(self.generators.iter().map(|(n, _)| n.clone()));
                let mut s = Self::from_table(&table, Some(names))?;
                s.has_adjoined_identity = true;
                Ok(s)
            }
        }
    }

    /// Index and period of the cyclic subsemigroup of x, plus omega powers.
    pub fn omega(&self, x: usize) -> OmegaData {
        // Floyd-free: walk powers recording first occurrence indices.
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut p = x;
        let mut k = 1usize;
        let (mu, rho) = loop {
            if let Some(&first) = seen.get(&p) {
                break (first, k - first);
            }
            seen.insert(p, k);
            p = self.product(p, x);
            k += 1;
        };
        // Least multiple of rho that is >= mu.
        let l = ((mu + rho - 1) / rho) * rho;
        let omega = self.power(x, l);
        let lm1 = if rho == 1 {
            l
        } else {
            // Least power >= mu congruent to -1 mod rho.
            let mut c = rho - 1;
            while c < mu {
                c += rho;
            }
            c
        };
        let omega_minus_1 = self.power(x, lm1);
        OmegaData { omega, omega_minus_1, index: mu, period: rho }
    }

    fn power(&self, x: usize, k: usize) -> usize {
        debug_assert!(k >= 1);
        let mut acc = x;
        for _ in 1..k {
            acc = self.product(acc, x);
        }
        acc
    }

    /// Omega-iteration of the substitution y_i <- update_i(y, z): the limit of
    /// F^(n!) applied to y0, i.e. F^k(y0) for the least k >= mu with k = 0 mod
    /// the period of the eventual cycle.
    pub fn omega_iterate(
        &self,
        updates: &[Vec<Var>],
        y0: &[usize],
        z: &[usize],
    ) -> Result<Vec<usize>> {
        let t = updates.len();
        if y0.len() != t {
            return Err(Error::BadParameter("update/initial arity mismatch".into()));
        }
        let step = |y: &[usize]| -> Result<Vec<usize>> {
            let mut out = Vec::with_capacity(t);
            for u in updates {
                let mut acc: Option<usize> = None;
                for v in u {
                    let e = match *v {
                        Var::Y(i) => *y
                            .get(i)
                            .ok_or_else(|| Error::BadParameter(format!("y{} out of range", i + 1)))?,
                        Var::Z(i) => *z
                            .get(i)
                            .ok_or_else(|| Error::BadParameter(format!("z{} out of range", i + 1)))?,
                    };
                    acc = Some(match acc {
                        None => e,
                        Some(a) => self.product(a, e),
                    });
                }
                out.push(acc.ok_or_else(|| Error::BadParameter("empty update word".into()))?);
            }
            Ok(out)
        };
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut cur = y0.to_vec();
        let mut k = 0usize;
        let (mu, rho) = loop {
            if let Some(&first) = seen.get(&cur) {
                break (first, k - first);
            }
            seen.insert(cur.clone(), k);
            cur = step(&cur)?;
            k += 1;
        };
        let l = if mu == 0 { rho } else { ((mu + rho - 1) / rho) * rho };
        let mut out = y0.to_vec();
        for _ in 0..l {
            out = step(&out)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmap::parse_orbits;

    #[test]
    fn closure_of_cycle_singletons_is_brandt() {
        // Singletons i -> i+1 mod 3 generate all 9 singletons plus the empty map.
        let gens: Vec<PartialMap> =
            (0..3).map(|i| PartialMap::singleton(3, i, (i + 1) % 3)).collect();
        let s = GeneratedSemigroup::close_generators(&gens, 1000).unwrap();
        assert_eq!(s.size(), 10);
        assert!(s.zero().is_some());
        assert!(s.identity().is_none());
    }

    #[test]
    fn closure_is_generator_order_independent_in_content() {
        let a = parse_orbits(4, "(1,2,3,4)").unwrap();
        let b = parse_orbits(4, "(1,2,#)").unwrap();
        let s1 = GeneratedSemigroup::close_generators(&[a.clone(), b.clone()], 100000).unwrap();
        let s2 = GeneratedSemigroup::close_generators(&[b, a], 100000).unwrap();
        assert_eq!(s1.size(), s2.size());
    }

    #[test]
    fn words_evaluate_back() {
        let a = parse_orbits(4, "(1,2,3,4)").unwrap();
        let b = parse_orbits(4, "(1,2,#)").unwrap();
        let s = GeneratedSemigroup::close_generators(&[a, b], 100000).unwrap();
        for x in 0..s.size() {
            let w = s.word(x);
            assert_eq!(s.eval_gen_word(&w), Some(x));
        }
    }

    #[test]
    fn omega_in_cyclic_group() {
        // x = 4-cycle: period 4, index 1, omega = identity, omega-1 = x^3.
        let x = parse_orbits(4, "(1,2,3,4)").unwrap();
        let s = GeneratedSemigroup::close_generators(&[x.clone()], 100).unwrap();
        let xe = s.element_of_map(&x).unwrap();
        let om = s.omega(xe);
        assert_eq!(om.period, 4);
        assert_eq!(om.index, 1);
        assert_eq!(s.map_of(om.omega).unwrap(), &PartialMap::identity(4));
        assert_eq!(s.product(om.omega_minus_1, xe), om.omega);
    }

    #[test]
    fn omega_of_nilpotent_map() {
        let x = parse_orbits(3, "(1,2,3,#)").unwrap();
        let s = GeneratedSemigroup::close_generators(&[x.clone()], 100).unwrap();
        let xe = s.element_of_map(&x).unwrap();
        let om = s.omega(xe);
        assert_eq!(om.period, 1);
        assert!(s.map_of(om.omega).unwrap().is_empty_map());
        assert_eq!(om.omega, om.omega_minus_1);
    }

    #[test]
    fn adjoin_identity_is_idempotent() {
        let b = parse_orbits(3, "(1,2,#)").unwrap();
        let s = GeneratedSemigroup::close_generators(&[b], 100).unwrap();
        assert!(s.identity().is_none());
        let s1 = s.adjoin_identity(100).unwrap();
        assert!(s1.has_adjoined_identity());
        assert_eq!(s1.identity(), Some(0));
        let n = s1.size();
        let s2 = s1.adjoin_identity(100).unwrap();
        assert_eq!(s2.size(), n);
    }

    #[test]
    fn omega_iterate_reaches_cycle_multiple() {
        // In C_6 generated by x, F(y) = y * x has mu = 0, rho = 6; the limit of
        // F^(n!) from x is x * x^6 = x.
        let x = parse_orbits(6, "(1,2,3,4,5,6)").unwrap();
        let s = GeneratedSemigroup::close_generators(&[x.clone()], 100).unwrap();
        let xe = s.element_of_map(&x).unwrap();
        let out = s
            .omega_iterate(&[vec![Var::Y(0), Var::Z(0)]], &[xe], &[xe])
            .unwrap();
        assert_eq!(out, vec![xe]);
    }
}
