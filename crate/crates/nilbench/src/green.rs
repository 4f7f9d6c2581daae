//! Green's relations, principal series, and Rees coordinatization of regular
//! J-classes.
//!
//! R, L and J classes are strongly connected components of the right, left and
//! two-sided generator Cayley graphs; no product table is needed.

use crate::error::{Error, Result};
use crate::semigroup::GeneratedSemigroup;
use std::collections::HashMap;

pub struct GreensStructure {
    pub r_of: Vec<u32>,
    pub l_of: Vec<u32>,
    pub j_of: Vec<u32>,
    pub h_of: Vec<u32>,
    pub n_r: usize,
    pub n_l: usize,
    pub n_j: usize,
    pub n_h: usize,
    pub j_members: Vec<Vec<u32>>,
    /// Direct J-order edges, from a class to the strictly lower classes hit by
    /// one generator step.
    pub j_lower: Vec<Vec<u32>>,
    pub regular_j: Vec<bool>,
    pub idempotents: Vec<u32>,
}

/// Iterative Tarjan SCC over a graph with constant out-degree `deg`;
/// `succ(v, i)` is the i-th successor of v.
pub(crate) fn scc<F: Fn(usize, usize) -> usize>(
    n: usize,
    deg: usize,
    succ: F,
) -> (usize, Vec<u32>) {
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut comp = vec![UNSEEN; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut n_comp = 0u32;
    // Call stack entries: (vertex, next child position).
    let mut call: Vec<(u32, u32)> = Vec::new();
    for start in 0..n {
        if index[start] != UNSEEN {
            continue;
        }
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start as u32);
        on_stack[start] = true;
        call.push((start as u32, 0));
        while let Some(&(v32, pos)) = call.last() {
            let v = v32 as usize;
            if (pos as usize) < deg {
                call.last_mut().unwrap().1 += 1;
                let w = succ(v, pos as usize);
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w as u32, 0));
                } else if on_stack[w] && index[w] < low[v] {
                    low[v] = index[w];
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap() as usize;
                        on_stack[w] = false;
                        comp[w] = n_comp;
                        if w == v {
                            break;
                        }
                    }
                    n_comp += 1;
                }
                let lv = low[v];
                call.pop();
                if let Some(&(p32, _)) = call.last() {
                    let p = p32 as usize;
                    if lv < low[p] {
                        low[p] = lv;
                    }
                }
            }
        }
    }
    (n_comp as usize, comp)
}

pub fn greens_structure(s: &GeneratedSemigroup) -> GreensStructure {
    let n = s.size();
    let ng = s.generator_count();
    let (n_r, r_of) = scc(n, ng, |v, i| s.right_by_gen(v, i));
    let (n_l, l_of) = scc(n, ng, |v, i| s.left_by_gen(v, i));
    let (n_j, j_of) = scc(n, 2 * ng, |v, i| {
        if i < ng {
            s.right_by_gen(v, i)
        } else {
            s.left_by_gen(v, i - ng)
        }
    });
    // H-classes: distinct (r, l) pairs.
    let mut h_ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut h_of = vec![0u32; n];
    for v in 0..n {
        let key = (r_of[v], l_of[v]);
        let next = h_ids.len() as u32;
        let id = *h_ids.entry(key).or_insert(next);
        h_of[v] = id;
    }
    let n_h = h_ids.len();
    let mut j_members: Vec<Vec<u32>> = vec![Vec::new(); n_j];
    for v in 0..n {
        j_members[j_of[v] as usize].push(v as u32);
    }
    let mut lower_sets: Vec<std::collections::HashSet<u32>> =
        vec![std::collections::HashSet::new(); n_j];
    for v in 0..n {
        let jv = j_of[v];
        for gi in 0..ng {
            for w in [s.right_by_gen(v, gi), s.left_by_gen(v, gi)] {
                let jw = j_of[w];
                if jw != jv {
                    lower_sets[jv as usize].insert(jw);
                }
            }
        }
    }
    let j_lower: Vec<Vec<u32>> = lower_sets
        .into_iter()
        .map(|set| {
            let mut v: Vec<u32> = set.into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect();
    let idempotents: Vec<u32> = (0..n)
        .filter(|&x| s.is_idempotent_elem(x))
        .map(|x| x as u32)
        .collect();
    let mut regular_j = vec![false; n_j];
    for &e in &idempotents {
        regular_j[j_of[e as usize] as usize] = true;
    }
    GreensStructure {
        r_of,
        l_of,
        j_of,
        h_of,
        n_r,
        n_l,
        n_j,
        n_h,
        j_members,
        j_lower,
        regular_j,
        idempotents,
    }
}

impl GreensStructure {
    /// Whether the R-class of x contains an idempotent.
    pub fn r_class_regular(&self, x: usize) -> bool {
        self.idempotents
            .iter()
            .any(|&e| self.r_of[e as usize] == self.r_of[x])
    }
}

/// A principal series: a maximal chain of two-sided ideals, recorded as the
/// sequence of J-classes removed from the top.
pub struct PrincipalSeries {
    /// J-class ids, top layer first. Layer p (0-based) is S_{p+1} \ S_{p+2}.
    pub layer_j: Vec<u32>,
    /// Position of each J-class in `layer_j`.
    pub layer_of_j: Vec<u32>,
    /// Layer position of each element.
    pub layer_of_elem: Vec<u32>,
}

pub fn principal_series(s: &GeneratedSemigroup, g: &GreensStructure) -> PrincipalSeries {
    let n_j = g.n_j;
    let mut indeg = vec![0usize; n_j];
    for j in 0..n_j {
        for &lo in &g.j_lower[j] {
            indeg[lo as usize] += 1;
        }
    }
    // Minimum element index per J-class, for a deterministic tie-break.
    let mut min_elem = vec![u32::MAX; n_j];
    for j in 0..n_j {
        min_elem[j] = *g.j_members[j].iter().min().unwrap();
    }
    let mut ready: Vec<u32> = (0..n_j as u32).filter(|&j| indeg[j as usize] == 0).collect();
    let mut layer_j = Vec::with_capacity(n_j);
    while !ready.is_empty() {
        let (pos, _) = ready
            .iter()
            .enumerate()
            .min_by_key(|(_, &j)| min_elem[j as usize])
            .unwrap();
        let j = ready.swap_remove(pos);
        layer_j.push(j);
        for &lo in &g.j_lower[j as usize] {
            indeg[lo as usize] -= 1;
            if indeg[lo as usize] == 0 {
                ready.push(lo);
            }
        }
    }
    debug_assert_eq!(layer_j.len(), n_j);
    let mut layer_of_j = vec![0u32; n_j];
    for (p, &j) in layer_j.iter().enumerate() {
        layer_of_j[j as usize] = p as u32;
    }
    let layer_of_elem: Vec<u32> = (0..s.size())
        .map(|x| layer_of_j[g.j_of[x] as usize])
        .collect();
    PrincipalSeries { layer_j, layer_of_j, layer_of_elem }
}

impl PrincipalSeries {
    pub fn depth(&self) -> usize {
        self.layer_j.len()
    }
}

/// Multiplication table of a maximal subgroup, indexed internally.
#[derive(Clone)]
pub struct GroupTable {
    /// Element ids of the ambient semigroup, position = group index.
    pub members: Vec<usize>,
    pub table: Vec<u16>,
    pub identity: u16,
    pub inverses: Vec<u16>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.members.len() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// Builds a group table from a raw multiplication table.
    pub fn from_raw(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        let mut flat = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(Error::NotAGroup("table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::NotAGroup(format!("entry {v} out of range")));
                }
                flat.push(v as u16);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b] as usize;
                for c in 0..n {
                    let bc = flat[b * n + c] as usize;
                    if flat[ab * n + c] != flat[a * n + bc] {
                        return Err(Error::NotAGroup(format!(
                            "not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] == x as u16 && flat[x * n + e] == x as u16))
            .ok_or_else(|| Error::NotAGroup("no identity".into()))? as u16;
        let mut inverses = vec![0u16; n];
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| flat[a * n + b] == identity && flat[b * n + a] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {a} has no inverse")))?;
            inverses[a] = inv as u16;
        }
        Ok(GroupTable { members: (0..n).collect(), table: flat, identity, inverses })
    }
}

/// Extracts the maximal subgroup at an idempotent e (its H-class).
pub fn maximal_subgroup(
    s: &GeneratedSemigroup,
    g: &GreensStructure,
    e: usize,
) -> Result<GroupTable> {
    if !s.is_idempotent_elem(e) {
        return Err(Error::NotAGroup(format!("element {e} is not idempotent")));
    }
    let h = g.h_of[e];
    let members: Vec<usize> = g.j_members[g.j_of[e] as usize]
        .iter()
        .map(|&x| x as usize)
        .filter(|&x| g.h_of[x] == h)
        .collect();
    let idx: HashMap<usize, u16> = members
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i as u16))
        .collect();
    let n = members.len();
    let mut table = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            let p = s.product(members[a], members[b]);
            let pi = idx
                .get(&p)
                .ok_or_else(|| Error::NotAGroup("H-class not closed".into()))?;
            table[a * n + b] = *pi;
        }
    }
    let identity = idx[&e];
    let mut inverses = vec![0u16; n];
    for a in 0..n {
        let inv = (0..n)
            .find(|&b| table[a * n + b] == identity && table[b * n + a] == identity)
            .ok_or_else(|| Error::NotAGroup("missing inverse in H-class".into()))?;
        inverses[a] = inv as u16;
    }
    Ok(GroupTable { members, table, identity, inverses })
}

/// Nilpotency class via the lower central series; `None` when not nilpotent.
pub fn group_nilpotency_class(gt: &GroupTable) -> Option<usize> {
    let n = gt.order();
    let e = gt.identity as usize;
    if n == 1 {
        return Some(0);
    }
    // current = subgroup generated by commutators [G, previous].
    let mut prev: Vec<bool> = vec![true; n];
    let mut class = 0usize;
    loop {
        // Commutators [g, h] with h in prev.
        let mut gens: Vec<usize> = Vec::new();
        for g in 0..n {
            for h in 0..n {
                if !prev[h] {
                    continue;
                }
                let c = gt.mul(gt.mul(gt.inv(g), gt.inv(h)), gt.mul(g, h));
                if c != e {
                    gens.push(c);
                }
            }
        }
        if gens.is_empty() {
            return Some(class + 1);
        }
        // Subgroup closure of the commutators.
        let mut in_sub = vec![false; n];
        in_sub[e] = true;
        let mut frontier = vec![e];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = gt.mul(x, g);
                if !in_sub[y] {
                    in_sub[y] = true;
                    frontier.push(y);
                }
            }
        }
        let same = in_sub == prev;
        if same {
            return None;
        }
        prev = in_sub;
        class += 1;
        if class > n {
            return None;
        }
    }
}

/// Coordinatization of a regular J-class as a Rees matrix semigroup over its
/// structure group, normalized so that the sandwich matrix P has identity
/// entries in the row and column of the chosen idempotent. When P can be
/// rescaled and reordered to an identity matrix this is done and
/// `is_inverse_square` is set.
pub struct ReesCoordinatization {
    pub j: u32,
    pub n_rows: usize,
    pub n_cols: usize,
    pub group: GroupTable,
    /// R-class id per row index.
    pub row_r: Vec<u32>,
    /// L-class id per column index.
    pub col_l: Vec<u32>,
    pub row_of_r: HashMap<u32, usize>,
    pub col_of_l: HashMap<u32, usize>,
    /// coordinates per member element: (group index, row, col).
    pub coords: HashMap<usize, (u16, u16, u16)>,
    pub element_at: HashMap<(u16, u16, u16), usize>,
    /// sandwich[col][row]: None is the zero entry.
    pub sandwich: Vec<Vec<Option<u16>>>,
    pub is_inverse_square: bool,
}

pub fn rees_coordinatize(
    s: &GeneratedSemigroup,
    g: &GreensStructure,
    j: u32,
) -> Result<ReesCoordinatization> {
    if !g.regular_j[j as usize] {
        return Err(Error::NotRegular);
    }
    let members = &g.j_members[j as usize];
    // Base idempotent: the least one in the class.
    let e = *g
        .idempotents
        .iter()
        .filter(|&&x| g.j_of[x as usize] == j)
        .min()
        .unwrap() as usize;
    let group = maximal_subgroup(s, g, e)?;
    let gidx: HashMap<usize, u16> = group
        .members
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i as u16))
        .collect();
    // Row / column orders: R classes and L classes in order of least member,
    // with e's classes first.
    let mut rows: Vec<u32> = Vec::new();
    let mut cols: Vec<u32> = Vec::new();
    for &x in members {
        let r = g.r_of[x as usize];
        let l = g.l_of[x as usize];
        if !rows.contains(&r) {
            rows.push(r);
        }
        if !cols.contains(&l) {
            cols.push(l);
        }
    }
    rows.sort_unstable();
    cols.sort_unstable();
    let re = g.r_of[e];
    let le = g.l_of[e];
    rows.retain(|&r| r != re);
    rows.insert(0, re);
    cols.retain(|&l| l != le);
    cols.insert(0, le);
    let trivial_group = group.order() == 1;
    // Representatives: r_i in cell (R_i, L_e), q_j in cell (R_e, L_j).
    let mut cell: HashMap<(u32, u32), usize> = HashMap::new();
    for &x in members {
        cell.entry((g.r_of[x as usize], g.l_of[x as usize]))
            .or_insert(x as usize);
    }
    let pick = |r: u32, l: u32| -> usize {
        *cell
            .get(&(r, l))
            .expect("regular J-class egg box has no empty cells")
    };
    let mut row_rep: Vec<usize> = rows.iter().map(|&r| pick(r, le)).collect();
    let mut col_rep: Vec<usize> = cols.iter().map(|&l| pick(re, l)).collect();
    row_rep[0] = e;
    col_rep[0] = e;
    let n_rows = rows.len();
    let n_cols = cols.len();
    let in_group = |x: usize| -> Option<u16> { gidx.get(&x).copied() };
    if !trivial_group {
        // Normalize so the sandwich entries in e's row and column are identity.
        for i in 1..n_rows {
            let q = s.product(col_rep[0], row_rep[i]); // = e * r_i
            if let Some(gi) = in_group(q) {
                let hinv = group.members[group.inv(gi as usize)];
                row_rep[i] = s.product(row_rep[i], hinv);
            }
        }
        for jx in 1..n_cols {
            let q = s.product(col_rep[jx], row_rep[0]); // = q_j * e
            if let Some(gi) = in_group(q) {
                let hinv = group.members[group.inv(gi as usize)];
                col_rep[jx] = s.product(hinv, col_rep[jx]);
            }
        }
    }
    let build_sandwich = |row_rep: &[usize], col_rep: &[usize]| -> Vec<Vec<Option<u16>>> {
        (0..n_cols)
            .map(|jx| {
                (0..n_rows)
                    .map(|i| in_group(s.product(col_rep[jx], row_rep[i])))
                    .collect()
            })
            .collect()
    };
    let mut sandwich = build_sandwich(&row_rep, &col_rep);
    // Inverse pattern: square with exactly one group entry per row and column.
    let mut is_inverse_square = n_rows == n_cols;
    if is_inverse_square {
        for jx in 0..n_cols {
            if sandwich[jx].iter().filter(|v| v.is_some()).count() != 1 {
                is_inverse_square = false;
                break;
            }
        }
        if is_inverse_square {
            for i in 0..n_rows {
                if (0..n_cols).filter(|&jx| sandwich[jx][i].is_some()).count() != 1 {
                    is_inverse_square = false;
                    break;
                }
            }
        }
    }
    if is_inverse_square {
        // Rescale rows of P to identity entries and reorder the R-classes so
        // that P becomes the identity matrix.
        for jx in 0..n_cols {
            let i = (0..n_rows).find(|&i| sandwich[jx][i].is_some()).unwrap();
            let entry = sandwich[jx][i].unwrap();
            if entry != group.identity {
                let hinv = group.members[group.inv(entry as usize)];
                col_rep[jx] = s.product(hinv, col_rep[jx]);
            }
        }
        sandwich = build_sandwich(&row_rep, &col_rep);
        let mut order: Vec<usize> = (0..n_rows).collect();
        for jx in 0..n_cols {
            let i = (0..n_rows).find(|&i| sandwich[jx][i].is_some()).unwrap();
            order[jx] = i;
        }
        let new_rows: Vec<u32> = order.iter().map(|&i| rows[i]).collect();
        let new_row_rep: Vec<usize> = order.iter().map(|&i| row_rep[i]).collect();
        rows = new_rows;
        row_rep = new_row_rep;
        sandwich = build_sandwich(&row_rep, &col_rep);
    }
    // Coordinates: x in cell (i, j) is r_i * g * q_j for a unique g.
    let mut coords: HashMap<usize, (u16, u16, u16)> = HashMap::new();
    let mut element_at: HashMap<(u16, u16, u16), usize> = HashMap::new();
    let row_of_r: HashMap<u32, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let col_of_l: HashMap<u32, usize> = cols.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    for &x in members {
        let x = x as usize;
        let i = row_of_r[&g.r_of[x]];
        let jx = col_of_l[&g.l_of[x]];
        let gi = if trivial_group {
            0u16
        } else {
            let mut found: Option<u16> = None;
            for cand in 0..group.order() {
                let p = s.product(s.product(row_rep[i], group.members[cand]), col_rep[jx]);
                if p == x {
                    found = Some(cand as u16);
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::InternalInconsistency("element has no Rees coordinates".into())
            })?
        };
        coords.insert(x, (gi, i as u16, jx as u16));
        element_at.insert((gi, i as u16, jx as u16), x);
    }
    Ok(ReesCoordinatization {
        j,
        n_rows,
        n_cols,
        group,
        row_r: rows,
        col_l: cols,
        row_of_r,
        col_of_l,
        coords,
        element_at,
        sandwich,
        is_inverse_square,
    })
}

impl ReesCoordinatization {
    /// Verifies the Rees product law exhaustively within the J-class.
    pub fn verify(&self, s: &GeneratedSemigroup, g: &GreensStructure) -> Result<()> {
        for (&x, &(gx, ix, jx)) in &self.coords {
            for (&y, &(gy, iy, jy)) in &self.coords {
                let p = s.product(x, y);
                match self.sandwich[jx as usize][iy as usize] {
                    None => {
                        if self.coords.contains_key(&p) {
                            return Err(Error::InternalInconsistency(
                                "zero sandwich entry but product stayed in class".into(),
                            ));
                        }
                    }
                    Some(h) => {
                        let gp = self
                            .group
                            .mul(self.group.mul(gx as usize, h as usize), gy as usize);
                        let expected = self.element_at[&(gp as u16, ix, jy)];
                        if p != expected {
                            return Err(Error::InternalInconsistency(
                                "Rees product law violated".into(),
                            ));
                        }
                    }
                }
            }
        }
        let _ = g;
        Ok(())
    }
}
