//! Partial transformations on a finite point set.
//!
//! Points are 0-based internally and 1-based in display and parse positions;
//! the undefined value (theta) prints as `#`.

use crate::error::{Error, Result};
use std::fmt;

/// Sentinel image meaning "undefined".
pub const THETA: u16 = u16::MAX;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialMap {
    degree: u16,
    images: Box<[u16]>,
}

impl PartialMap {
    /// Builds a map from 0-based optional images.
    pub fn from_images(degree: usize, images: &[Option<usize>]) -> Result<Self> {
        if images.len() != degree {
            return Err(Error::DegreeMismatch(images.len(), degree));
        }
        let mut v = Vec::with_capacity(degree);
        for im in images {
            match im {
                None => v.push(THETA),
                Some(p) => {
                    if *p >= degree {
                        return Err(Error::PointOutOfRange(p + 1, degree));
                    }
                    v.push(*p as u16);
                }
            }
        }
        Ok(PartialMap { degree: degree as u16, images: v.into_boxed_slice() })
    }

    pub fn identity(degree: usize) -> Self {
        let images: Vec<u16> = (0..degree as u16).collect();
        PartialMap { degree: degree as u16, images: images.into_boxed_slice() }
    }

    pub fn empty(degree: usize) -> Self {
        PartialMap { degree: degree as u16, images: vec![THETA; degree].into_boxed_slice() }
    }

    /// Singleton map sending `from` to `to` (0-based), undefined elsewhere.
    pub fn singleton(degree: usize, from: usize, to: usize) -> Self {
        let mut images = vec![THETA; degree];
        images[from] = to as u16;
        PartialMap { degree: degree as u16, images: images.into_boxed_slice() }
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    #[inline]
    pub fn apply(&self, p: usize) -> Option<usize> {
        let im = self.images[p];
        if im == THETA {
            None
        } else {
            Some(im as usize)
        }
    }

    #[inline]
    pub fn raw(&self, p: usize) -> u16 {
        self.images[p]
    }

    /// Diagrammatic composition: `(self.then(g))(x) = g(self(x))`.
    pub fn then(&self, g: &PartialMap) -> PartialMap {
        debug_assert_eq!(self.degree, g.degree);
        let mut images = Vec::with_capacity(self.images.len());
        for &im in self.images.iter() {
            images.push(if im == THETA { THETA } else { g.images[im as usize] });
        }
        PartialMap { degree: self.degree, images: images.into_boxed_slice() }
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(_, &im)| im != THETA)
            .map(|(p, _)| p)
    }

    pub fn domain_size(&self) -> usize {
        self.images.iter().filter(|&&im| im != THETA).count()
    }

    pub fn is_total(&self) -> bool {
        self.images.iter().all(|&im| im != THETA)
    }

    pub fn is_empty_map(&self) -> bool {
        self.images.iter().all(|&im| im == THETA)
    }

    pub fn is_partial_injection(&self) -> bool {
        let mut seen = vec![false; self.degree as usize];
        for &im in self.images.iter() {
            if im != THETA {
                if seen[im as usize] {
                    return false;
                }
                seen[im as usize] = true;
            }
        }
        true
    }

    /// Inverse of a partial injection; `None` when not injective.
    pub fn inverse(&self) -> Option<PartialMap> {
        let mut images = vec![THETA; self.degree as usize];
        for (p, &im) in self.images.iter().enumerate() {
            if im != THETA {
                if images[im as usize] != THETA {
                    return None;
                }
                images[im as usize] = p as u16;
            }
        }
        Some(PartialMap { degree: self.degree, images: images.into_boxed_slice() })
    }

    pub fn is_idempotent(&self) -> bool {
        self.then(self) == *self
    }

    /// Cycles of the map (length >= 1, reported with least point first).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        orbit_decomposition(self).cycles
    }
}

impl fmt::Debug for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_orbits(&orbit_decomposition(self)))
    }
}

impl fmt::Display for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_orbits(&orbit_decomposition(self)))
    }
}

/// Orbit decomposition of a partial map: cycles plus maximal runs ending in theta.
///
/// Canonical for partial injections. Implicit `(j, #)` singleton runs are
/// omitted, so unmentioned points are undefined on reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSpec {
    pub degree: usize,
    /// Cyclic orbits, 0-based points.
    pub cycles: Vec<Vec<usize>>,
    /// Runs `(j1, ..., jk)` with `jl -> j(l+1)` and `jk -> theta`; length >= 2.
    pub theta_runs: Vec<Vec<usize>>,
}

pub fn orbit_decomposition(m: &PartialMap) -> OrbitSpec {
    let n = m.degree();
    let mut on_cycle = vec![false; n];
    let mut cycles = Vec::new();
    // Locate cycles by walking forward with a visit stamp per start point.
    let mut stamp = vec![usize::MAX; n];
    for start in 0..n {
        if stamp[start] != usize::MAX || on_cycle[start] {
            continue;
        }
        let mut path = Vec::new();
        let mut p = start;
        loop {
            if on_cycle[p] || stamp[p] != usize::MAX && stamp[p] != start {
                break;
            }
            if stamp[p] == start {
                // Found a new cycle: the portion of the path from p onward.
                let pos = path.iter().position(|&q| q == p).unwrap();
                let mut cyc: Vec<usize> = path[pos..].to_vec();
                let min_pos = cyc
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, &q)| q)
                    .map(|(i, _)| i)
                    .unwrap();
                cyc.rotate_left(min_pos);
                for &q in &cyc {
                    on_cycle[q] = true;
                }
                cycles.push(cyc);
                break;
            }
            stamp[p] = start;
            path.push(p);
            match m.apply(p) {
                Some(q) => p = q,
                None => break,
            }
        }
    }
    cycles.sort();
    // Theta runs start at points with no predecessor outside cycles.
    let mut has_pred = vec![false; n];
    for p in 0..n {
        if let Some(q) = m.apply(p) {
            if !on_cycle[p] {
                has_pred[q] = true;
            }
        }
    }
    let mut emitted = vec![false; n];
    let mut theta_runs = Vec::new();
    for start in 0..n {
        if on_cycle[start] || has_pred[start] || m.apply(start).is_none() {
            continue;
        }
        let mut run = vec![start];
        emitted[start] = true;
        let mut p = start;
        while let Some(q) = m.apply(p) {
            run.push(q);
            if on_cycle[q] || emitted[q] {
                break;
            }
            emitted[q] = true;
            p = q;
        }
        theta_runs.push(run);
    }
    theta_runs.sort();
    OrbitSpec { degree: n, cycles, theta_runs }
}

impl OrbitSpec {
    /// Rebuilds the partial map; points not mentioned as sources go to theta.
    pub fn to_map(&self) -> Result<PartialMap> {
        let mut images: Vec<Option<usize>> = vec![None; self.degree];
        let mut set = |from: usize, to: usize| -> Result<()> {
            if from >= self.degree {
                return Err(Error::PointOutOfRange(from + 1, self.degree));
            }
            if to >= self.degree {
                return Err(Error::PointOutOfRange(to + 1, self.degree));
            }
            if let Some(prev) = images[from] {
                if prev != to {
                    return Err(Error::InconsistentPattern(from + 1));
                }
            }
            images[from] = Some(to);
            Ok(())
        };
        for cyc in &self.cycles {
            for (i, &p) in cyc.iter().enumerate() {
                set(p, cyc[(i + 1) % cyc.len()])?;
            }
        }
        for run in &self.theta_runs {
            for w in run.windows(2) {
                set(w[0], w[1])?;
            }
            // The final point of a run maps to theta unless claimed elsewhere.
        }
        PartialMap::from_images(self.degree, &images)
    }
}

/// Renders orbit notation, e.g. `(1,2,3)(4,5,#)`; identity-free empty map as `#`.
pub fn format_orbits(spec: &OrbitSpec) -> String {
    let mut out = String::new();
    for cyc in &spec.cycles {
        out.push('(');
        out.push_str(
            &cyc.iter()
                .map(|p| (p + 1).to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push(')');
    }
    for run in &spec.theta_runs {
        out.push('(');
        out.push_str(
            &run.iter()
                .map(|p| (p + 1).to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push_str(",#)");
    }
    if out.is_empty() {
        out.push('#');
    }
    out
}

/// Parses orbit notation over 1-based points, `#` for theta: `(1,2,3)(4,5,#)`.
/// `#` alone denotes the empty map.
pub fn parse_orbits(degree: usize, text: &str) -> Result<PartialMap> {
    let text = text.trim();
    if text == "#" {
        return Ok(PartialMap::empty(degree));
    }
    let mut spec = OrbitSpec { degree, cycles: Vec::new(), theta_runs: Vec::new() };
    let mut rest = text;
    while !rest.is_empty() {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('(') {
            return Err(Error::Semantic(format!("expected '(' in orbit notation: {rest:?}")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Semantic(format!("unclosed orbit in {text:?}")))?;
        let body = &rest[1..close];
        rest = &rest[close + 1..];
        let mut pts = Vec::new();
        let mut ends_theta = false;
        for (i, tok) in body.split(',').enumerate() {
            let tok = tok.trim();
            if tok == "#" {
                if i + 1 != body.split(',').count() {
                    return Err(Error::Semantic("theta must end an orbit".into()));
                }
                ends_theta = true;
            } else {
                let p: usize = tok
                    .parse()
                    .map_err(|_| Error::Semantic(format!("bad point {tok:?}")))?;
                if p == 0 || p > degree {
                    return Err(Error::PointOutOfRange(p, degree));
                }
                pts.push(p - 1);
            }
        }
        if pts.is_empty() {
            return Err(Error::Semantic("empty orbit".into()));
        }
        if ends_theta {
            spec.theta_runs.push(pts);
        } else {
            spec.cycles.push(pts);
        }
    }
    spec.to_map()
}

/// Parses an explicit 1-based image list `[2,3,#,1]`.
pub fn parse_image_list(degree: usize, text: &str) -> Result<PartialMap> {
    let text = text.trim();
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Semantic(format!("expected [..] image list: {text:?}")))?;
    let mut images = Vec::new();
    for tok in inner.split(',') {
        let tok = tok.trim();
        if tok == "#" {
            images.push(None);
        } else {
            let p: usize = tok
                .parse()
                .map_err(|_| Error::Semantic(format!("bad image {tok:?}")))?;
            if p == 0 || p > degree {
                return Err(Error::PointOutOfRange(p, degree));
            }
            images.push(Some(p - 1));
        }
    }
    PartialMap::from_images(degree, &images)
}

/// A set of required point-image pairs `beta -> alpha` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkPattern {
    pub pairs: Vec<(usize, usize)>,
}

impl LinkPattern {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        for &(b, a) in &pairs {
            if let Some(&(_, prev)) = seen.iter().find(|&&(b2, _)| b2 == b) {
                if prev != a {
                    return Err(Error::InconsistentPattern(b + 1));
                }
            }
            seen.push((b, a));
        }
        Ok(LinkPattern { pairs })
    }
}

/// Whether `m` realizes every pair of the pattern.
pub fn has_link_pattern(m: &PartialMap, pat: &LinkPattern) -> bool {
    pat.pairs.iter().all(|&(b, a)| m.apply(b) == Some(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_is_diagrammatic() {
        // s: 1->2 (0-based 0->1), t: 2->3 (1->2); s.then(t): 1->3.
        let s = PartialMap::singleton(3, 0, 1);
        let t = PartialMap::singleton(3, 1, 2);
        let st = s.then(&t);
        assert_eq!(st.apply(0), Some(2));
        assert_eq!(st.apply(1), None);
        let ts = t.then(&s);
        assert!(ts.is_empty_map());
    }

    #[test]
    fn orbit_roundtrip_examples() {
        let id3 = PartialMap::identity(3);
        let spec = orbit_decomposition(&id3);
        assert_eq!(format_orbits(&spec), "(1)(2)(3)");
        assert_eq!(spec.to_map().unwrap(), id3);

        // (1,2,3) with 4 -> theta on 4 points.
        let m = PartialMap::from_images(4, &[Some(1), Some(2), Some(0), None]).unwrap();
        let spec = orbit_decomposition(&m);
        assert_eq!(format_orbits(&spec), "(1,2,3)");
        assert_eq!(spec.to_map().unwrap(), m);

        // w = (1,5,#)(2,6,#)(3,4,#) on 6 points.
        let w = parse_orbits(6, "(1,5,#)(2,6,#)(3,4,#)").unwrap();
        assert_eq!(w.apply(0), Some(4));
        assert_eq!(w.apply(4), None);
        assert_eq!(format_orbits(&orbit_decomposition(&w)), "(1,5,#)(2,6,#)(3,4,#)");
    }

    #[test]
    fn theta_runs_absorb_tails() {
        // 1->2->3->theta as a single run.
        let m = PartialMap::from_images(3, &[Some(1), Some(2), None]).unwrap();
        let spec = orbit_decomposition(&m);
        assert_eq!(spec.cycles.len(), 0);
        assert_eq!(spec.theta_runs, vec![vec![0, 1, 2]]);
        assert_eq!(spec.to_map().unwrap(), m);
    }

    #[test]
    fn link_patterns() {
        let m = parse_orbits(6, "(1,4,#)(2,5,#)(3,6,#)").unwrap();
        let pat = LinkPattern::new(vec![(0, 3), (1, 4)]).unwrap();
        assert!(has_link_pattern(&m, &pat));
        let pat2 = LinkPattern::new(vec![(0, 4)]).unwrap();
        assert!(!has_link_pattern(&m, &pat2));
        assert!(LinkPattern::new(vec![(0, 1), (0, 2)]).is_err());
    }

    #[test]
    fn image_list_parse() {
        let m = parse_image_list(4, "[2,3,#,1]").unwrap();
        assert_eq!(m.apply(0), Some(1));
        assert_eq!(m.apply(2), None);
        assert_eq!(m.apply(3), Some(0));
    }
}
