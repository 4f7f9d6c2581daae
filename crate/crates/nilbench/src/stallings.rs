//! Inverse automata over a doubled alphabet: folding, spanning-tree bases,
//! vertex congruences, mod-p closures, nil closures, extendibility tests,
//! and the three named cycle families used throughout the test corpus.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::linalg;
use crate::pmap::PartialMap;

/// A literal: letter index plus an inversion flag.
pub type Lit = (usize, bool);

pub fn lit_inverse(l: Lit) -> Lit {
    (l.0, !l.1)
}

pub fn word_inverse(w: &[Lit]) -> Vec<Lit> {
    w.iter().rev().map(|&l| lit_inverse(l)).collect()
}

/// Cancels adjacent inverse pairs until none remain.
pub fn free_reduce(w: &[Lit]) -> Vec<Lit> {
    let mut out: Vec<Lit> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&lit_inverse(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Parses compact word notation: lowercase letters are forward edges,
/// uppercase their inverses ("aBa" = a b⁻¹ a). Whitespace is ignored.
pub fn parse_word(text: &str) -> Result<Vec<Lit>> {
    let mut out = Vec::new();
    for (i, ch) in text.chars().enumerate() {
        if ch.is_whitespace() {
            continue;
        }
        if ch.is_ascii_lowercase() {
            out.push((ch as usize - 'a' as usize, false));
        } else if ch.is_ascii_uppercase() {
            out.push((ch as usize - 'A' as usize, true));
        } else {
            return Err(Error::Parse {
                line: 1,
                col: i + 1,
                msg: format!("expected a letter, found {ch:?}"),
            });
        }
    }
    Ok(out)
}

pub fn word_string(w: &[Lit]) -> String {
    w.iter()
        .map(|&(l, inv)| {
            let c = (b'a' + l as u8) as char;
            if inv { c.to_ascii_uppercase() } else { c }
        })
        .collect()
}

/// A word list generating a subgroup; kept freely reduced and non-empty.
pub type SubgroupBasis = Vec<Vec<Lit>>;

/// A deterministic, co-deterministic automaton over a doubled alphabet.
/// Only the forward edges are stored; inverse edges are implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseAutomaton {
    pub n_letters: usize,
    pub n_vertices: usize,
    pub base: usize,
    pub edges: Vec<PartialMap>,
    inv_edges: Vec<PartialMap>,
}

impl InverseAutomaton {
    pub fn new(n_letters: usize, n_vertices: usize, base: usize, edges: Vec<PartialMap>) -> Result<Self> {
        if edges.len() != n_letters || base >= n_vertices {
            return Err(Error::Semantic("automaton shape mismatch".into()));
        }
        let mut inv_edges = Vec::with_capacity(n_letters);
        for e in &edges {
            if e.degree() != n_vertices {
                return Err(Error::DegreeMismatch(e.degree(), n_vertices));
            }
            inv_edges.push(e.inverse().ok_or(Error::NotInverse)?);
        }
        Ok(InverseAutomaton { n_letters, n_vertices, base, edges, inv_edges })
    }

    pub fn step(&self, v: usize, lit: Lit) -> Option<usize> {
        if lit.1 {
            self.inv_edges[lit.0].apply(v)
        } else {
            self.edges[lit.0].apply(v)
        }
    }

    pub fn run(&self, from: usize, word: &[Lit]) -> Option<usize> {
        let mut v = from;
        for &l in word {
            v = self.step(v, l)?;
        }
        Some(v)
    }

    /// Base-to-base acceptance of a word.
    pub fn accepts(&self, word: &[Lit]) -> bool {
        self.run(self.base, word) == Some(self.base)
    }

    /// All forward edges as (letter, from, to) triples.
    pub fn edge_list(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (l, e) in self.edges.iter().enumerate() {
            for v in e.domain() {
                out.push((l, v, e.apply(v).unwrap()));
            }
        }
        out
    }

    /// Letters with at least one edge.
    pub fn occurring_letters(&self) -> Vec<usize> {
        (0..self.n_letters)
            .filter(|&l| !self.edges[l].is_empty_map())
            .collect()
    }


    /// Renumbers vertices in breadth-first discovery order from the base,
    /// exploring letters in index order, forward before inverse. Two based
    /// automata are isomorphic exactly when their canonical forms are equal.
    pub fn canonical(&self) -> InverseAutomaton {
        let mut order = vec![usize::MAX; self.n_vertices];
        let mut seq = Vec::with_capacity(self.n_vertices);
        order[self.base] = 0;
        seq.push(self.base);
        let mut head = 0;
        while head < seq.len() {
            let v = seq[head];
            head += 1;
            for l in 0..self.n_letters {
                for w in [self.edges[l].apply(v), self.inv_edges[l].apply(v)].into_iter().flatten() {
                    if order[w] == usize::MAX {
                        order[w] = seq.len();
                        seq.push(w);
                    }
                }
            }
        }
        let n = seq.len();
        let mut edges = Vec::with_capacity(self.n_letters);
        for l in 0..self.n_letters {
            let mut images = vec![None; n];
            for (new_v, &old_v) in seq.iter().enumerate() {
                if let Some(old_w) = self.edges[l].apply(old_v) {
                    images[new_v] = Some(order[old_w]);
                }
            }
            edges.push(PartialMap::from_images(n, &images).unwrap());
        }
        InverseAutomaton::new(self.n_letters, n, 0, edges).unwrap()
    }

    /// Graphviz rendering for inspection.
    pub fn dot(&self) -> String {
        let mut out = String::from("digraph aut {\n  rankdir=LR;\n");
        out.push_str(&format!("  {} [shape=doublecircle];\n", self.base));
        for (l, from, to) in self.edge_list() {
            out.push_str(&format!(
                "  {from} -> {to} [label=\"{}\"];\n",
                (b'a' + l as u8) as char
            ));
        }
        out.push_str("}\n");
        out
    }
}

pub fn based_isomorphic(a: &InverseAutomaton, b: &InverseAutomaton) -> bool {
    a.n_letters == b.n_letters && a.canonical() == b.canonical()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Merges vertices until each letter acts deterministically in both
/// directions, then rebuilds the automaton. `seed` pre-identifies vertices.
/// Returns the automaton together with the class of every input vertex.
fn fold_edges(
    n_letters: usize,
    n_vertices: usize,
    base: usize,
    edges: &[(usize, usize, usize)],
    seed: Option<&[usize]>,
) -> (InverseAutomaton, Vec<usize>) {
    let mut uf = UnionFind::new(n_vertices);
    if let Some(classes) = seed {
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for (v, &c) in classes.iter().enumerate() {
            match rep.get(&c) {
                Some(&r) => {
                    uf.union(r, v);
                }
                None => {
                    rep.insert(c, v);
                }
            }
        }
    }
    loop {
        let mut fwd: HashMap<(usize, usize), usize> = HashMap::new();
        let mut bwd: HashMap<(usize, usize), usize> = HashMap::new();
        let mut changed = false;
        for &(l, from, to) in edges {
            let (rf, rt) = (uf.find(from), uf.find(to));
            if let Some(&other) = fwd.get(&(l, rf)) {
                if uf.union(other, rt) {
                    changed = true;
                }
            } else {
                fwd.insert((l, rf), rt);
            }
            if let Some(&other) = bwd.get(&(l, rt)) {
                if uf.union(other, rf) {
                    changed = true;
                }
            } else {
                bwd.insert((l, rt), rf);
            }
        }
        if !changed {
            break;
        }
    }
    let mut class_of = vec![usize::MAX; n_vertices];
    let mut count = 0;
    for v in 0..n_vertices {
        let r = uf.find(v);
        if class_of[r] == usize::MAX {
            class_of[r] = count;
            count += 1;
        }
        class_of[v] = class_of[r];
    }
    let mut images: Vec<Vec<Option<usize>>> = vec![vec![None; count]; n_letters];
    for &(l, from, to) in edges {
        images[l][class_of[from]] = Some(class_of[to]);
    }
    let maps: Vec<PartialMap> = images
        .into_iter()
        .map(|im| PartialMap::from_images(count, &im).unwrap())
        .collect();
    let aut = InverseAutomaton::new(n_letters, count, class_of[base], maps).unwrap();
    (aut, class_of)
}

/// Removes vertices of total degree ≤ 1 other than the base, repeatedly,
/// so only reduced loops at the base remain.
fn trim(aut: &InverseAutomaton) -> InverseAutomaton {
    let mut keep: Vec<bool> = vec![true; aut.n_vertices];
    loop {
        let mut removed = false;
        for v in 0..aut.n_vertices {
            if !keep[v] || v == aut.base {
                continue;
            }
            let mut d = 0;
            for l in 0..aut.n_letters {
                if aut.edges[l].apply(v).is_some_and(|w| keep[w]) {
                    d += 1;
                }
                if aut.inv_edges[l].apply(v).is_some_and(|w| keep[w]) {
                    d += 1;
                }
            }
            if d <= 1 {
                keep[v] = false;
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    let mut renum = vec![usize::MAX; aut.n_vertices];
    let mut count = 0;
    for v in 0..aut.n_vertices {
        if keep[v] {
            renum[v] = count;
            count += 1;
        }
    }
    let mut edges = Vec::with_capacity(aut.n_letters);
    for l in 0..aut.n_letters {
        let mut images = vec![None; count];
        for v in aut.edges[l].domain() {
            let w = aut.edges[l].apply(v).unwrap();
            if keep[v] && keep[w] {
                images[renum[v]] = Some(renum[w]);
            }
        }
        edges.push(PartialMap::from_images(count, &images).unwrap());
    }
    InverseAutomaton::new(aut.n_letters, count, renum[aut.base], edges).unwrap()
}

/// Builds the flower of the basis words and folds it to a reduced automaton.
pub fn fold(basis: &SubgroupBasis, n_letters: usize) -> Result<InverseAutomaton> {
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut n_vertices = 1;
    for raw in basis {
        let w = free_reduce(raw);
        for &(l, _) in &w {
            if l >= n_letters {
                return Err(Error::BadParameter(format!(
                    "letter {l} out of range for alphabet of size {n_letters}"
                )));
            }
        }
        if w.is_empty() {
            continue;
        }
        let mut prev = 0usize;
        for (i, &(l, inv)) in w.iter().enumerate() {
            let next = if i + 1 == w.len() { 0 } else { n_vertices + i };
            if inv {
                edges.push((l, next, prev));
            } else {
                edges.push((l, prev, next));
            }
            prev = next;
        }
        n_vertices += w.len() - 1;
    }
    let (aut, _) = fold_edges(n_letters, n_vertices, 0, &edges, None);
    Ok(trim(&aut).canonical())
}

/// Spanning-tree data: breadth-first tree words per vertex, plus the
/// non-tree forward edges in (letter, source) order.
pub struct SpanningTree {
    pub word_to: Vec<Vec<Lit>>,
    pub non_tree: Vec<(usize, usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl SpanningTree {
    pub fn build(aut: &InverseAutomaton) -> SpanningTree {
        let mut word_to: Vec<Option<Vec<Lit>>> = vec![None; aut.n_vertices];
        let mut tree_edges: HashSet<(usize, usize)> = HashSet::new();
        word_to[aut.base] = Some(Vec::new());
        let mut queue = VecDeque::from([aut.base]);
        while let Some(v) = queue.pop_front() {
            for l in 0..aut.n_letters {
                if let Some(w) = aut.edges[l].apply(v) {
                    if word_to[w].is_none() {
                        let mut word = word_to[v].clone().unwrap();
                        word.push((l, false));
                        word_to[w] = Some(word);
                        tree_edges.insert((l, v));
                        queue.push_back(w);
                    }
                }
                if let Some(w) = aut.inv_edges[l].apply(v) {
                    if word_to[w].is_none() {
                        let mut word = word_to[v].clone().unwrap();
                        word.push((l, true));
                        word_to[w] = Some(word);
                        tree_edges.insert((l, w));
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut non_tree = Vec::new();
        let mut index = HashMap::new();
        for l in 0..aut.n_letters {
            for v in aut.edges[l].domain() {
                if !tree_edges.contains(&(l, v)) {
                    index.insert((l, v), non_tree.len());
                    non_tree.push((l, v, aut.edges[l].apply(v).unwrap()));
                }
            }
        }
        SpanningTree {
            word_to: word_to.into_iter().map(|w| w.expect("automaton not connected")).collect(),
            non_tree,
            index,
        }
    }

    /// Runs a word from the base, accumulating signed traversal counts of
    /// the non-tree edges. Returns the end vertex and the count vector.
    pub fn run_signature(&self, aut: &InverseAutomaton, word: &[Lit]) -> Option<(usize, Vec<i64>)> {
        let mut sig = vec![0i64; self.non_tree.len()];
        let mut v = aut.base;
        for &(l, inv) in word {
            if inv {
                let u = aut.inv_edges[l].apply(v)?;
                if let Some(&i) = self.index.get(&(l, u)) {
                    sig[i] -= 1;
                }
                v = u;
            } else {
                let w = aut.edges[l].apply(v)?;
                if let Some(&i) = self.index.get(&(l, v)) {
                    sig[i] += 1;
                }
                v = w;
            }
        }
        Some((v, sig))
    }
}

/// One basis word per non-tree edge: the tree word to its source, the edge
/// itself, then the reversed tree word from its target.
pub fn tree_basis(aut: &InverseAutomaton) -> SubgroupBasis {
    let tree = SpanningTree::build(aut);
    tree.non_tree
        .iter()
        .map(|&(l, from, to)| {
            let mut w = tree.word_to[from].clone();
            w.push((l, false));
            w.extend(word_inverse(&tree.word_to[to]));
            free_reduce(&w)
        })
        .collect()
}

/// A partition of the vertices of an automaton, as class ids per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCongruence {
    pub class_of: Vec<usize>,
    pub n_classes: usize,
}

impl VertexCongruence {
    fn from_classes(class_of: Vec<usize>) -> VertexCongruence {
        let n_classes = class_of.iter().copied().max().map_or(0, |m| m + 1);
        VertexCongruence { class_of, n_classes }
    }

    pub fn universal(n: usize) -> VertexCongruence {
        VertexCongruence { class_of: vec![0; n], n_classes: if n == 0 { 0 } else { 1 } }
    }

    pub fn is_trivial(&self) -> bool {
        self.n_classes == self.class_of.len()
    }

    /// First pair of distinct identified vertices, if any.
    pub fn nontrivial_pair(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (v, &c) in self.class_of.iter().enumerate() {
            if let Some(&u) = seen.get(&c) {
                return Some((u, v));
            }
            seen.insert(c, v);
        }
        None
    }

    /// Common refinement with another partition of the same vertex set.
    pub fn meet(&self, other: &VertexCongruence) -> VertexCongruence {
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let class_of = self
            .class_of
            .iter()
            .zip(&other.class_of)
            .map(|(&a, &b)| {
                let next = ids.len();
                *ids.entry((a, b)).or_insert(next)
            })
            .collect();
        VertexCongruence::from_classes(class_of)
    }
}

/// The per-stage matrix of the closure iteration: translated basis rows
/// reduced mod p, one column per basis letter of the current stage.
pub struct ModPData {
    pub p: u64,
    pub rows: Vec<Vec<i64>>,
    pub n_cols: usize,
    pub rank: usize,
}

/// Quotient of an automaton by a vertex partition, folded back to
/// determinism. Returns the folded quotient and the (possibly coarser)
/// resulting partition.
pub fn quotient_fold(aut: &InverseAutomaton, cong: &VertexCongruence) -> (InverseAutomaton, VertexCongruence) {
    let (q, class_of) = fold_edges(
        aut.n_letters,
        aut.n_vertices,
        aut.base,
        &aut.edge_list(),
        Some(&cong.class_of),
    );
    (q, VertexCongruence::from_classes(class_of))
}

/// Result of a closure computation: the closure automaton and the final
/// congruence on the input automaton's vertices.
pub struct Closure {
    pub automaton: InverseAutomaton,
    pub congruence: VertexCongruence,
    pub stages: Vec<ModPData>,
}

/// Closure of the automaton's subgroup in the mod-p topology.
///
/// Iterates from the universal congruence (whose quotient is the one-vertex
/// bouquet over the occurring letters). Each stage translates the input's
/// basis through the current quotient, recording signed non-tree-edge
/// counts; full rank mod p stops the iteration, otherwise vertices whose
/// connecting words run base-to-base with a signature inside the row space
/// are identified and the quotient is refolded.
pub fn p_closure(aut: &InverseAutomaton, p: u64) -> Result<Closure> {
    if !linalg::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let basis = tree_basis(aut);
    let own_tree = SpanningTree::build(aut);
    let mut cong = VertexCongruence::universal(aut.n_vertices);
    let mut stages = Vec::new();
    loop {
        let (quot, cascaded) = quotient_fold(aut, &cong);
        cong = cascaded;
        let tree = SpanningTree::build(&quot);
        let k = tree.non_tree.len();
        let mut rows = Vec::with_capacity(basis.len());
        for w in &basis {
            match tree.run_signature(&quot, w) {
                Some((end, sig)) if end == quot.base => rows.push(sig),
                _ => {
                    return Err(Error::InternalInconsistency(
                        "basis word rejected by a closure stage".into(),
                    ))
                }
            }
        }
        let space = linalg::rowspace_mod_p(&rows, k, p);
        let rank = space.rank();
        stages.push(ModPData { p, rows, n_cols: k, rank });
        if rank == k {
            return Ok(Closure { automaton: quot.canonical(), congruence: cong, stages });
        }
        // Refine: vertices r, s stay identified when the word r → base → s
        // runs base-to-base in the quotient with a signature in the row
        // space mod p.
        let mut uf = UnionFind::new(aut.n_vertices);
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in cong.class_of.iter().enumerate() {
            by_class.entry(c).or_default().push(v);
        }
        for members in by_class.values() {
            for (i, &r) in members.iter().enumerate() {
                for &s in &members[i + 1..] {
                    if uf.find(r) == uf.find(s) {
                        continue;
                    }
                    let mut w = own_tree.word_to[r].clone();
                    w.extend(word_inverse(&own_tree.word_to[s]));
                    let w = free_reduce(&w);
                    if let Some((end, sig)) = tree.run_signature(&quot, &w) {
                        if end == quot.base && space.contains(&sig) {
                            uf.union(r, s);
                        }
                    }
                }
            }
        }
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let refined: Vec<usize> = (0..aut.n_vertices)
            .map(|v| {
                let r = uf.find(v);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect();
        let refined = VertexCongruence::from_classes(refined);
        if refined.n_classes <= cong.n_classes {
            return Err(Error::InternalInconsistency(
                "closure iteration failed to refine the congruence".into(),
            ));
        }
        cong = refined;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeStrategy {
    /// Primes dividing the elementary divisors of the integer signature
    /// matrix, plus every prime up to the floor.
    Auto { floor: u64 },
    Explicit(Vec<u64>),
}

impl Default for PrimeStrategy {
    fn default() -> Self {
        PrimeStrategy::Auto { floor: 7 }
    }
}

pub struct NilClosure {
    pub automaton: InverseAutomaton,
    pub congruence: VertexCongruence,
    pub primes: Vec<u64>,
    /// Whether the prime selection provably captures every prime that can
    /// refine the congruence.
    pub exact: bool,
}

/// Synchronous product of the per-prime closure automata, restricted to
/// the component of the base tuple and trimmed.
fn product_automaton(parts: &[InverseAutomaton], n_letters: usize) -> InverseAutomaton {
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let start: Vec<usize> = parts.iter().map(|a| a.base).collect();
    ids.insert(start.clone(), 0);
    let mut states = vec![start];
    let mut edges: Vec<Vec<Option<usize>>> = vec![Vec::new(); n_letters];
    let mut head = 0;
    while head < states.len() {
        let tuple = states[head].clone();
        for (l, images) in edges.iter_mut().enumerate() {
            if images.len() <= head {
                images.resize(states.len(), None);
            }
            let next: Option<Vec<usize>> = tuple
                .iter()
                .zip(parts)
                .map(|(&v, a)| a.edges[l].apply(v))
                .collect();
            if let Some(next) = next {
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        ids.insert(next.clone(), id);
                        states.push(next);
                        id
                    }
                };
                images[head] = Some(id);
            }
        }
        head += 1;
    }
    let n = states.len();
    let maps: Vec<PartialMap> = edges
        .into_iter()
        .map(|mut im| {
            im.resize(n, None);
            PartialMap::from_images(n, &im).unwrap()
        })
        .collect();
    let aut = InverseAutomaton::new(n_letters, n, 0, maps).unwrap();
    trim(&aut).canonical()
}

/// Intersection of the mod-p closures over a set of primes.
pub fn nil_closure(aut: &InverseAutomaton, strategy: &PrimeStrategy) -> Result<NilClosure> {
    let basis = tree_basis(aut);
    if basis.is_empty() {
        return Ok(NilClosure {
            automaton: aut.canonical(),
            congruence: VertexCongruence::universal(aut.n_vertices),
            primes: Vec::new(),
            exact: true,
        });
    }
    let letters = aut.occurring_letters();
    let col_of: HashMap<usize, usize> =
        letters.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let matrix: Vec<Vec<i64>> = basis
        .iter()
        .map(|w| {
            let mut row = vec![0i64; letters.len()];
            for &(l, inv) in w {
                row[col_of[&l]] += if inv { -1 } else { 1 };
            }
            row
        })
        .collect();
    let divisors = linalg::elementary_divisors(&matrix);
    let full_rank = divisors.len() == letters.len();
    let mut divisor_primes: Vec<u64> = divisors
        .iter()
        .flat_map(|&d| linalg::prime_factors(d as u64))
        .collect();
    divisor_primes.sort_unstable();
    divisor_primes.dedup();
    let (primes, exact) = match strategy {
        PrimeStrategy::Auto { floor } => {
            let mut ps = linalg::primes_up_to(*floor);
            for &p in &divisor_primes {
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
            ps.sort_unstable();
            (ps, full_rank)
        }
        PrimeStrategy::Explicit(ps) => {
            let mut ps = ps.clone();
            ps.sort_unstable();
            ps.dedup();
            let complete = divisor_primes.iter().all(|p| ps.contains(p));
            (ps, full_rank && complete)
        }
    };
    let mut congruence = VertexCongruence {
        class_of: (0..aut.n_vertices).collect(),
        n_classes: aut.n_vertices,
    };
    // Start from the universal partition and coarsen down: the meet of the
    // per-prime congruences.
    let mut acc: Option<VertexCongruence> = None;
    let mut parts = Vec::new();
    for &p in &primes {
        let cl = p_closure(aut, p)?;
        acc = Some(match acc {
            Some(c) => c.meet(&cl.congruence),
            None => cl.congruence,
        });
        parts.push(cl.automaton);
    }
    if let Some(c) = acc {
        congruence = c;
    }
    let automaton = if parts.is_empty() {
        aut.canonical()
    } else {
        product_automaton(&parts, aut.n_letters)
    };
    Ok(NilClosure { automaton, congruence, primes, exact })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendVerdict {
    Yes,
    /// A pair of distinct vertices identified by the nil-closure
    /// congruence, witnessing non-extendibility.
    No(usize, usize),
    UnknownAtBound,
}

/// Whether the automaton embeds in a complete automaton whose transition
/// group is nilpotent: yes exactly when the nil-closure congruence is
/// trivial. A nontrivial congruence refutes embeddability only when the
/// prime selection was exact.
pub fn is_gnil_extendible(aut: &InverseAutomaton, strategy: &PrimeStrategy) -> Result<ExtendVerdict> {
    let nc = nil_closure(aut, strategy)?;
    if nc.congruence.is_trivial() {
        return Ok(ExtendVerdict::Yes);
    }
    let (r, s) = nc.congruence.nontrivial_pair().unwrap();
    if nc.exact {
        Ok(ExtendVerdict::No(r, s))
    } else {
        Ok(ExtendVerdict::UnknownAtBound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    A,
    B,
    C,
}

/// The three two-letter cycle families: a cycle of l vertices with the
/// letters a, b in parallel on every edge, where the closing edge carries
/// a alone (B), both letters (C), or — for A — the B shape plus an extra
/// base vertex with a single b-edge into the start of the cycle.
pub fn build_family(kind: Family, l: usize) -> Result<InverseAutomaton> {
    if l < 2 {
        return Err(Error::BadParameter(format!("family size {l} must be at least 2")));
    }
    let n = match kind {
        Family::A => l + 1,
        Family::B | Family::C => l,
    };
    let mut a_images = vec![None; n];
    let mut b_images = vec![None; n];
    for i in 0..l {
        a_images[i] = Some((i + 1) % l);
    }
    for i in 0..l - 1 {
        b_images[i] = Some(i + 1);
    }
    let base = match kind {
        Family::A => {
            b_images[l] = Some(0);
            l
        }
        Family::B => 0,
        Family::C => {
            b_images[l - 1] = Some(0);
            0
        }
    };
    let edges = vec![
        PartialMap::from_images(n, &a_images)?,
        PartialMap::from_images(n, &b_images)?,
    ];
    InverseAutomaton::new(2, n, base, edges)
}
