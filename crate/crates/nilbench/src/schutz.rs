//! Right and left Schutzenberger graphs: the full subgraph of the Cayley
//! graph on one R-class (or L-class), with edges kept only when the product
//! stays in the class. Language questions about these graphs (emptiness of
//! intersections of the vertex-to-vertex word sets) reduce to membership in
//! the transition monoid, because every letter acts as a partial function on
//! the vertices.

use std::collections::HashMap;

use crate::action::{close_maps, MapClosure};
use crate::error::{Error, Result};
use crate::green::GreensStructure;
use crate::pmap::PartialMap;
use crate::semigroup::GeneratedSemigroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

pub struct SchutzGraph {
    pub side: Side,
    /// R-class id (right) or L-class id (left).
    pub class_id: u32,
    /// Element ids, ascending; vertex index = position.
    pub vertices: Vec<usize>,
    /// H-class id per vertex.
    pub h_class: Vec<u32>,
    pub letters: Vec<String>,
    /// Action of each letter on the vertex indices.
    pub edges: Vec<PartialMap>,
    /// Every letter acts as a partial injection.
    pub is_inverse: bool,
}

fn build_graph(
    s: &GeneratedSemigroup,
    g: &GreensStructure,
    side: Side,
    class_id: u32,
    members: Vec<usize>,
) -> SchutzGraph {
    let mut vertices = members;
    vertices.sort_unstable();
    let vindex: HashMap<usize, usize> =
        vertices.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let nv = vertices.len();
    let ng = s.generator_count();
    let mut edges = Vec::with_capacity(ng);
    for gi in 0..ng {
        let mut images = vec![None; nv];
        for (i, &x) in vertices.iter().enumerate() {
            let y = match side {
                Side::Right => s.right_by_gen(x, gi),
                Side::Left => s.left_by_gen(x, gi),
            };
            images[i] = vindex.get(&y).copied();
        }
        edges.push(PartialMap::from_images(nv, &images).expect("vertex indices in range"));
    }
    let is_inverse = edges.iter().all(|m| m.is_partial_injection());
    let h_class = vertices.iter().map(|&x| g.h_of[x]).collect();
    SchutzGraph {
        side,
        class_id,
        vertices,
        h_class,
        letters: s.generators().iter().map(|(n, _)| n.clone()).collect(),
        edges,
        is_inverse,
    }
}

/// The right Schutzenberger graph of the R-class of `x`.
pub fn right_schutz(s: &GeneratedSemigroup, g: &GreensStructure, x: usize) -> SchutzGraph {
    let r = g.r_of[x];
    let members: Vec<usize> = g.j_members[g.j_of[x] as usize]
        .iter()
        .map(|&y| y as usize)
        .filter(|&y| g.r_of[y] == r)
        .collect();
    build_graph(s, g, Side::Right, r, members)
}

/// The left Schutzenberger graph of the L-class of `x`.
pub fn left_schutz(s: &GeneratedSemigroup, g: &GreensStructure, x: usize) -> SchutzGraph {
    let l = g.l_of[x];
    let members: Vec<usize> = g.j_members[g.j_of[x] as usize]
        .iter()
        .map(|&y| y as usize)
        .filter(|&y| g.l_of[y] == l)
        .collect();
    build_graph(s, g, Side::Left, l, members)
}

/// Graphs of every regular R-class followed by every regular L-class, in
/// order of each class's least element.
pub fn schutz_graphs(s: &GeneratedSemigroup, g: &GreensStructure) -> Vec<SchutzGraph> {
    let mut out = Vec::new();
    let mut seen_r = vec![false; g.n_r];
    let mut seen_l = vec![false; g.n_l];
    for x in 0..s.size() {
        if !g.regular_j[g.j_of[x] as usize] {
            continue;
        }
        let r = g.r_of[x] as usize;
        if !seen_r[r] && g.r_class_regular(x) {
            seen_r[r] = true;
            out.push(right_schutz(s, g, x));
        }
    }
    for x in 0..s.size() {
        if !g.regular_j[g.j_of[x] as usize] {
            continue;
        }
        let l = g.l_of[x] as usize;
        if seen_l[l] {
            continue;
        }
        // L-class regular: contains an idempotent.
        let has_e = g.idempotents.iter().any(|&e| g.l_of[e as usize] == g.l_of[x]);
        if has_e {
            seen_l[l] = true;
            out.push(left_schutz(s, g, x));
        }
    }
    out
}

impl SchutzGraph {
    pub fn vertex_of_element(&self, x: usize) -> Option<usize> {
        self.vertices.binary_search(&x).ok()
    }

    /// Closure of the letter actions under composition; `complete` is false
    /// when the budget was hit.
    pub fn transition_monoid(&self, budget: usize) -> MapClosure {
        let nonempty: Vec<PartialMap> = self
            .edges
            .iter()
            .filter(|m| !m.is_empty_map())
            .cloned()
            .collect();
        close_maps(&nonempty, budget)
    }

    /// Graphviz text dump; vertices are labeled by generator words.
    pub fn dot(&self, s: &GeneratedSemigroup) -> String {
        let mut out = String::from("digraph schutz {\n");
        for (i, &x) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{} [label=\"{}\"];\n", i, s.word_name(x)));
        }
        for (gi, m) in self.edges.iter().enumerate() {
            for v in m.domain() {
                out.push_str(&format!(
                    "  v{} -> v{} [label=\"{}\"];\n",
                    v,
                    m.apply(v).unwrap(),
                    self.letters[gi]
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

const MONOID_BUDGET: usize = 100_000;

/// Whether the intersection of the word languages running beta_k to alpha_k
/// (nonempty words) is nonempty: some transition-monoid element maps every
/// beta_k to alpha_k.
pub fn l_intersection_nonempty(g: &SchutzGraph, pairs: &[(usize, usize)]) -> Result<bool> {
    let nv = g.vertices.len();
    for &(b, a) in pairs {
        if b >= nv || a >= nv {
            return Err(Error::PointOutOfRange(b.max(a), nv));
        }
    }
    let cl = g.transition_monoid(MONOID_BUDGET);
    for m in &cl.maps {
        if pairs.iter().all(|&(b, a)| m.apply(b) == Some(a)) {
            return Ok(true);
        }
    }
    if cl.complete {
        Ok(false)
    } else {
        Err(Error::BudgetExceeded("transition monoid closure".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilVariant {
    /// Distinct vertices.
    Plain,
    /// Vertices in distinct H-classes.
    HClass,
}

impl NilVariant {
    fn distinct(self, g: &SchutzGraph, a: usize, b: usize) -> bool {
        match self {
            NilVariant::Plain => a != b,
            NilVariant::HClass => g.h_class[a] != g.h_class[b],
        }
    }
}

/// The two-point nilpotency predicate: no pair of transition-monoid elements
/// swaps two (variant-)distinct targets over a common source pair.
pub fn plain_nilpotent(g: &SchutzGraph, variant: NilVariant) -> Result<bool> {
    let cl = g.transition_monoid(MONOID_BUDGET);
    let nv = g.vertices.len();
    for m1 in &cl.maps {
        for m2 in &cl.maps {
            for b1 in 0..nv {
                let (a1, a2) = match (m1.apply(b1), m2.apply(b1)) {
                    (Some(a1), Some(a2)) => (a1, a2),
                    _ => continue,
                };
                if !variant.distinct(g, a1, a2) {
                    continue;
                }
                for b2 in 0..nv {
                    if b2 == b1 {
                        continue;
                    }
                    if m1.apply(b2) == Some(a2) && m2.apply(b2) == Some(a1) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    if cl.complete {
        Ok(true)
    } else {
        Err(Error::BudgetExceeded("transition monoid closure".into()))
    }
}

/// The rotation nilpotency predicate up to tuple length n_max: false exactly
/// when some vertex tuple beta and transition elements m_0..m_{n-1} satisfy
/// m_i(beta_k) = alpha_{k+i} for the (not variant-constant) tuple
/// alpha = m_0(beta), i.e. every rotation of alpha is simultaneously
/// reachable from beta.
pub fn strongly_nilpotent(g: &SchutzGraph, variant: NilVariant, n_max: usize) -> Result<bool> {
    let cl = g.transition_monoid(MONOID_BUDGET);
    if !cl.complete {
        return Err(Error::BudgetExceeded("transition monoid closure".into()));
    }
    let nv = g.vertices.len();
    let nm = cl.maps.len();
    let words = nm.div_ceil(64);
    // For each (source, target): bitset of transition elements with that link.
    let mut link = vec![vec![0u64; words]; nv * nv];
    for (mi, m) in cl.maps.iter().enumerate() {
        for b in m.domain() {
            link[b * nv + m.apply(b).unwrap()][mi / 64] |= 1 << (mi % 64);
        }
    }
    let budget = crate::engine::eval_budget();
    let mut work: usize = 0;
    let mut beta = vec![0usize; n_max.max(2)];
    for n in 2..=n_max.max(2) {
        // Enumerate beta tuples minimal under rotation; the predicate is
        // rotation-invariant in the tuple.
        let tuples = nv.checked_pow(n as u32).ok_or_else(|| {
            Error::BudgetExceeded("rotation predicate tuple space".into())
        })?;
        for code in 0..tuples {
            let mut c = code;
            for slot in beta.iter_mut().take(n) {
                *slot = c % nv;
                c /= nv;
            }
            let minimal = (1..n).all(|r| {
                (0..n).map(|k| beta[(k + r) % n]).collect::<Vec<_>>() >= beta[..n].to_vec()
            });
            if !minimal {
                continue;
            }
            for m0 in &cl.maps {
                work += n * n * words;
                if work > budget {
                    return Err(Error::BudgetExceeded("rotation predicate scan".into()));
                }
                let alpha: Option<Vec<usize>> =
                    beta[..n].iter().map(|&b| m0.apply(b)).collect();
                let alpha = match alpha {
                    Some(a) => a,
                    None => continue,
                };
                if !(0..n).any(|i| (i + 1..n).any(|j| variant.distinct(g, alpha[i], alpha[j]))) {
                    continue;
                }
                let mut all_shifts = true;
                for i in 1..n {
                    let mut acc = vec![u64::MAX; words];
                    for k in 0..n {
                        let lk = &link[beta[k] * nv + alpha[(k + i) % n]];
                        for w in 0..words {
                            acc[w] &= lk[w];
                        }
                    }
                    if acc.iter().all(|&w| w == 0) {
                        all_shifts = false;
                        break;
                    }
                }
                if all_shifts {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
