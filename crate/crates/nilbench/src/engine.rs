//! Membership checks for Mal'cev nilpotency (MN) and strong Mal'cev
//! nilpotency (SMN), with self-validating witness certificates, an
//! independent brute-force oracle over tuple graphs, nilpotency classes, and
//! the auxiliary pseudoidentity checks (the omega-term family, the delta
//! identity, and the two-variable J-class property).

use std::collections::HashMap;

use serde::Serialize;

use crate::action::close_maps;
use crate::error::{Error, Result};
use crate::green::{
    greens_structure, group_nilpotency_class, maximal_subgroup, principal_series, scc,
    GreensStructure, GroupTable, PrincipalSeries,
};
use crate::lm::LayerView;
use crate::pmap::PartialMap;
use crate::semigroup::GeneratedSemigroup;

/// Cap on the number of nodes of a brute-force tuple graph.
pub const ORACLE_NODE_BUDGET: usize = 5_000_000;
/// Cap on edges explored by the brute-force searches.
pub const ORACLE_EDGE_BUDGET: usize = 200_000_000;
/// Default cap on exhaustive pseudoidentity evaluations.
pub const EVAL_BUDGET: usize = 100_000_000;
/// Default cap for the per-layer closure of the column action.
pub const MAP_CLOSURE_BUDGET: usize = 200_000;

/// Evaluation budget, overridable through NILBENCH_BUDGET.
pub fn eval_budget() -> usize {
    std::env::var("NILBENCH_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(EVAL_BUDGET)
}

/// Shared structural context: Green's relations plus a principal series.
pub struct Structure {
    pub greens: GreensStructure,
    pub series: PrincipalSeries,
}

pub fn analyze(s: &GeneratedSemigroup) -> Structure {
    let greens = greens_structure(s);
    let series = principal_series(s, &greens);
    Structure { greens, series }
}

/// A layer-level rotation certificate: t distinct columns alpha, t columns
/// beta, and witnesses v_1..v_t whose column action sends beta_j to
/// alpha_{j+i mod t}. Validation replays the lambda recursion on the elements
/// (1_G; alpha_j, beta_j).
#[derive(Debug, Clone, Serialize)]
pub struct RotationWitness {
    pub layer: usize,
    pub t: usize,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub witnesses: Vec<usize>,
    pub witness_words: Vec<String>,
}

/// A tuple on a cycle of the lambda-step graph: replaying the word through
/// the recursion reproduces the tuple exactly.
#[derive(Debug, Clone, Serialize)]
pub struct TupleCycleWitness {
    pub t: usize,
    pub tuple: Vec<usize>,
    /// Multiplier elements, one per lambda step. `usize::MAX` stands for the
    /// formal identity when the step ranges over S^1.
    pub word: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub enum NotMemberReason {
    Rotation(RotationWitness),
    TupleCycle(TupleCycleWitness),
    Structural(String),
}

#[derive(Debug, Clone, Serialize)]
pub enum Verdict {
    Member,
    NotMember(NotMemberReason),
    Unknown(String),
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        matches!(self, Verdict::Member)
    }

    pub fn is_not_member(&self) -> bool {
        matches!(self, Verdict::NotMember(_))
    }

    pub fn rotation_witness(&self) -> Option<&RotationWitness> {
        match self {
            Verdict::NotMember(NotMemberReason::Rotation(w)) => Some(w),
            _ => None,
        }
    }
}

/// Evolution of the tuple (lambda_{k,1}, ..., lambda_{k,t}) for k = 0..|zs|.
/// A `None` multiplier is the formal identity (the S^1 variant).
pub fn lambda_sequences(
    s: &GeneratedSemigroup,
    xs: &[usize],
    zs: &[Option<usize>],
) -> Result<Vec<Vec<usize>>> {
    let t = xs.len();
    if t < 2 {
        return Err(Error::BadParameter("lambda recursion needs t >= 2".into()));
    }
    let mut rows = Vec::with_capacity(zs.len() + 1);
    rows.push(xs.to_vec());
    for &z in zs {
        let cur = rows.last().unwrap().clone();
        let mut next = Vec::with_capacity(t);
        for i in 0..t {
            let mut acc = cur[i];
            for d in 1..t {
                if let Some(z) = z {
                    acc = s.product(acc, z);
                }
                acc = s.product(acc, cur[(i + d) % t]);
            }
            next.push(acc);
        }
        rows.push(next);
    }
    Ok(rows)
}

impl TupleCycleWitness {
    pub fn validate(&self, s: &GeneratedSemigroup) -> Result<()> {
        if self.t < 2 || self.tuple.len() != self.t || self.word.is_empty() {
            return Err(Error::Semantic("malformed tuple cycle witness".into()));
        }
        if self.tuple.iter().all(|&x| x == self.tuple[0]) {
            return Err(Error::Semantic("tuple cycle witness is constant".into()));
        }
        let zs: Vec<Option<usize>> = self
            .word
            .iter()
            .map(|&z| if z == usize::MAX { None } else { Some(z) })
            .collect();
        let rows = lambda_sequences(s, &self.tuple, &zs)?;
        if rows.last().unwrap() != &self.tuple {
            return Err(Error::Semantic("tuple cycle witness does not replay".into()));
        }
        Ok(())
    }
}

impl RotationWitness {
    pub fn validate(&self, s: &GeneratedSemigroup, st: &Structure) -> Result<()> {
        let t = self.t;
        if t < 2
            || self.alpha.len() != t
            || self.beta.len() != t
            || self.witnesses.len() != t
        {
            return Err(Error::Semantic("malformed rotation witness".into()));
        }
        let lv = LayerView::new(s, &st.greens, &st.series, self.layer)?;
        let mut seen = vec![false; lv.q];
        for &a in &self.alpha {
            if a >= lv.q || seen[a] {
                return Err(Error::Semantic("alpha columns are not distinct".into()));
            }
            seen[a] = true;
        }
        if self.beta.iter().any(|&b| b >= lv.q) {
            return Err(Error::Semantic("beta column out of range".into()));
        }
        // Link conditions: witness i (zero-based) realizes the shift i+1.
        for (i, &v) in self.witnesses.iter().enumerate() {
            let gam = lv.gamma_of_element(v);
            for j in 0..t {
                if gam.apply(self.beta[j]) != Some(self.alpha[(j + i + 1) % t]) {
                    return Err(Error::Semantic(format!(
                        "witness {} does not realize its rotation links",
                        i + 1
                    )));
                }
            }
        }
        // Replay: one lambda step per witness keeps every row fixed and
        // rotates the columns back after t steps.
        let ys0: Vec<usize> = (0..t)
            .map(|j| lv.element_one(self.alpha[j], self.beta[j]))
            .collect();
        let mut ys = ys0.clone();
        for k in 0..t {
            let z = self.witnesses[k];
            let mut next = Vec::with_capacity(t);
            for j in 0..t {
                let mut acc = ys[j];
                for d in 1..t {
                    acc = s.product(s.product(acc, z), ys[(j + d) % t]);
                }
                if !lv.in_layer(acc) {
                    return Err(Error::Semantic("rotation replay fell out of the layer".into()));
                }
                if lv.coords_of(acc).1 as usize != self.alpha[j] {
                    return Err(Error::Semantic("rotation replay moved a row".into()));
                }
                next.push(acc);
            }
            ys = next;
        }
        for j in 0..t {
            let (_, row, col) = lv.coords_of(ys[j]);
            if row as usize != self.alpha[j] || col as usize != self.beta[j] {
                return Err(Error::Semantic("rotation replay did not return".into()));
            }
            if lv.group_is_trivial() && ys[j] != ys0[j] {
                return Err(Error::InternalInconsistency(
                    "trivial-group replay returned a different element".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Structural block-group-with-nilpotent-subgroups test: at most one
/// idempotent per R-class and per L-class, and every maximal subgroup
/// nilpotent. Returns a description of the first failure.
pub fn bg_nil_failure(s: &GeneratedSemigroup, st: &Structure) -> Option<String> {
    let g = &st.greens;
    let mut r_seen = vec![false; g.n_r];
    let mut l_seen = vec![false; g.n_l];
    for &e in &g.idempotents {
        let r = g.r_of[e as usize] as usize;
        if r_seen[r] {
            return Some(format!("two idempotents share the R-class of element {e}"));
        }
        r_seen[r] = true;
        let l = g.l_of[e as usize] as usize;
        if l_seen[l] {
            return Some(format!("two idempotents share the L-class of element {e}"));
        }
        l_seen[l] = true;
    }
    // One maximal subgroup per regular J-class, at its least idempotent.
    let mut least: HashMap<u32, u32> = HashMap::new();
    for &e in &g.idempotents {
        let j = g.j_of[e as usize];
        let cur = least.entry(j).or_insert(e);
        if e < *cur {
            *cur = e;
        }
    }
    let mut js: Vec<(u32, u32)> = least.into_iter().collect();
    js.sort_unstable();
    for (_, e) in js {
        let gt = match maximal_subgroup(s, g, e as usize) {
            Ok(gt) => gt,
            Err(err) => return Some(format!("maximal subgroup at {e}: {err}")),
        };
        if group_nilpotency_class(&gt).is_none() {
            return Some(format!(
                "maximal subgroup at idempotent {e} (order {}) is not nilpotent",
                gt.order()
            ));
        }
    }
    None
}

fn witness_words(s: &GeneratedSemigroup, elems: &[usize]) -> Vec<String> {
    elems.iter().map(|&x| s.word_name(x)).collect()
}

/// MN membership via the layer rotation criterion.
pub fn check_mn(s: &GeneratedSemigroup, st: &Structure) -> Verdict {
    if let Some(msg) = bg_nil_failure(s, st) {
        return Verdict::NotMember(NotMemberReason::Structural(msg));
    }
    for layer in (0..st.series.depth()).rev() {
        let j = st.series.layer_j[layer];
        if !st.greens.regular_j[j as usize] {
            continue;
        }
        let lv = match LayerView::new(s, &st.greens, &st.series, layer) {
            Ok(lv) => lv,
            Err(e) => return Verdict::Unknown(format!("layer {layer}: {e}")),
        };
        if lv.q < 2 {
            continue;
        }
        if let Some(w) = mn_layer_search(s, &lv, layer) {
            return Verdict::NotMember(NotMemberReason::Rotation(w));
        }
    }
    Verdict::Member
}

/// Searches one layer for the two-element swap pattern: columns beta < beta'
/// from which the pair action reaches both (x, y) and (y, x) with x != y.
/// Reachability is over the simultaneous action of the generators, which
/// covers every element of S acting on the layer.
fn mn_layer_search(
    s: &GeneratedSemigroup,
    lv: &LayerView,
    layer: usize,
) -> Option<RotationWitness> {
    let q = lv.q;
    let ng = s.generator_count();
    const ROOT: u32 = u32::MAX - 1;
    const UNSEEN: u32 = u32::MAX;
    let mut parent: Vec<(u32, u16)> = vec![(UNSEEN, 0); q * q];
    let mut queue: Vec<u32> = Vec::new();
    let rebuild_word = |parent: &[(u32, u16)], mut state: u32| -> Vec<usize> {
        let mut gens = Vec::new();
        loop {
            let (prev, gi) = parent[state as usize];
            gens.push(gi as usize);
            if prev == ROOT {
                break;
            }
            state = prev;
        }
        gens.reverse();
        gens
    };
    for b1 in 0..q {
        for b2 in (b1 + 1)..q {
            for e in parent.iter_mut() {
                *e = (UNSEEN, 0);
            }
            queue.clear();
            // Seed with one-step successors of (b1, b2); the start pair itself
            // only counts when it is re-reached by a nonempty word.
            for gi in 0..ng {
                if let (Some(x), Some(y)) = (lv.gen_gamma[gi].apply(b1), lv.gen_gamma[gi].apply(b2))
                {
                    let tgt = (x * q + y) as u32;
                    if parent[tgt as usize].0 == UNSEEN {
                        parent[tgt as usize] = (ROOT, gi as u16);
                        queue.push(tgt);
                    }
                }
            }
            let mut head = 0;
            while head < queue.len() {
                let cur = queue[head];
                head += 1;
                let (cx, cy) = ((cur as usize) / q, (cur as usize) % q);
                for gi in 0..ng {
                    if let (Some(x), Some(y)) =
                        (lv.gen_gamma[gi].apply(cx), lv.gen_gamma[gi].apply(cy))
                    {
                        let tgt = (x * q + y) as u32;
                        if parent[tgt as usize].0 == UNSEEN {
                            parent[tgt as usize] = (cur, gi as u16);
                            queue.push(tgt);
                        }
                    }
                }
            }
            for x in 0..q {
                for y in (x + 1)..q {
                    if parent[x * q + y].0 == UNSEEN || parent[y * q + x].0 == UNSEEN {
                        continue;
                    }
                    // Word w reaches (x, y): beta1 -> x, beta2 -> y.
                    // Word v reaches (y, x): beta1 -> y, beta2 -> x.
                    let w_word = rebuild_word(&parent, (x * q + y) as u32);
                    let v_word = rebuild_word(&parent, (y * q + x) as u32);
                    let w = s.eval_gen_word(&w_word).expect("nonempty word");
                    let v = s.eval_gen_word(&v_word).expect("nonempty word");
                    let witnesses = vec![w, v];
                    let words = witness_words(s, &witnesses);
                    return Some(RotationWitness {
                        layer,
                        t: 2,
                        alpha: vec![y, x],
                        beta: vec![b1, b2],
                        witnesses,
                        witness_words: words,
                    });
                }
            }
        }
    }
    None
}

enum LayerOutcome {
    Witness(RotationWitness),
    Clear,
    Truncated(String),
    NotInjective,
}

/// SMN membership via rotation cycles of the layer actions.
pub fn check_smn(s: &GeneratedSemigroup, st: &Structure) -> Verdict {
    if let Some(msg) = bg_nil_failure(s, st) {
        return Verdict::NotMember(NotMemberReason::Structural(msg));
    }
    let mut truncated: Option<String> = None;
    for layer in (0..st.series.depth()).rev() {
        let j = st.series.layer_j[layer];
        if !st.greens.regular_j[j as usize] {
            continue;
        }
        let lv = match LayerView::new(s, &st.greens, &st.series, layer) {
            Ok(lv) => lv,
            Err(e) => return Verdict::Unknown(format!("layer {layer}: {e}")),
        };
        if lv.q < 2 {
            continue;
        }
        match smn_layer_search(s, &lv, layer) {
            LayerOutcome::Witness(w) => {
                return Verdict::NotMember(NotMemberReason::Rotation(w));
            }
            LayerOutcome::Clear => {}
            LayerOutcome::Truncated(msg) => truncated = Some(msg),
            LayerOutcome::NotInjective => {
                // The column action is not by partial injections; hand the
                // whole question to the brute-force oracle.
                let t_max = lv.q.min(6);
                return match oracle_not_nilpotent(s, OracleMode::Smn, t_max) {
                    Ok(Some(w)) => Verdict::NotMember(NotMemberReason::TupleCycle(w)),
                    Ok(None) => Verdict::Member,
                    Err(e) => Verdict::Unknown(format!(
                        "layer {layer} action not injective and oracle fallback failed: {e}"
                    )),
                };
            }
        }
    }
    match truncated {
        Some(msg) => Verdict::Unknown(msg),
        None => Verdict::Member,
    }
}

/// A rotation witness built from one partial injection with a cycle: the
/// powers of its realizing element provide all t shifts on the cycle.
fn power_witness(
    s: &GeneratedSemigroup,
    layer: usize,
    m: &PartialMap,
    gen_word: &[usize],
) -> Option<RotationWitness> {
    let mut cycles: Vec<Vec<usize>> = m.cycles().into_iter().filter(|c| c.len() >= 2).collect();
    cycles.sort_by_key(|c| (c.len(), c[0]));
    let cyc = cycles.into_iter().next()?;
    let t = cyc.len();
    let x = s.eval_gen_word(gen_word).expect("nonempty word evaluates");
    let mut witnesses = Vec::with_capacity(t);
    let mut cur = x;
    for _ in 0..t {
        witnesses.push(cur);
        cur = s.product(cur, x);
    }
    let words = witness_words(s, &witnesses);
    Some(RotationWitness {
        layer,
        t,
        alpha: cyc.clone(),
        beta: cyc,
        witnesses,
        witness_words: words,
    })
}

fn smn_layer_search(s: &GeneratedSemigroup, lv: &LayerView, layer: usize) -> LayerOutcome {
    let mut gens: Vec<PartialMap> = Vec::new();
    let mut gen_ids: Vec<usize> = Vec::new();
    for (gi, g) in lv.gen_gamma.iter().enumerate() {
        if g.is_empty_map() {
            continue;
        }
        if !g.is_partial_injection() {
            return LayerOutcome::NotInjective;
        }
        if !gens.contains(g) {
            gens.push(g.clone());
            gen_ids.push(gi);
        }
    }
    // Fast path: a single generator whose action already has a cycle.
    for (k, g) in gens.iter().enumerate() {
        if let Some(w) = power_witness(s, layer, g, &[gen_ids[k]]) {
            return LayerOutcome::Witness(w);
        }
    }
    let cl = close_maps(&gens, MAP_CLOSURE_BUDGET);
    let translate = |word: Vec<usize>| -> Vec<usize> {
        word.into_iter().map(|i| gen_ids[i]).collect()
    };
    for m in &cl.maps {
        if !m.is_empty_map() && !m.is_partial_injection() {
            return LayerOutcome::NotInjective;
        }
    }
    // Single-map cycles: sound even on a truncated closure.
    for (mi, m) in cl.maps.iter().enumerate() {
        if m.is_empty_map() {
            continue;
        }
        if let Some(w) = power_witness(s, layer, m, &translate(cl.word_of(mi))) {
            return LayerOutcome::Witness(w);
        }
    }
    if !cl.complete {
        return LayerOutcome::Truncated(format!(
            "layer {layer}: column action closure exceeded {MAP_CLOSURE_BUDGET} maps"
        ));
    }
    // Complete pair scan: cycles of Gamma(v) o Gamma(u)^-1.
    let n = cl.maps.len();
    let budget = eval_budget();
    let mut work: usize = 0;
    for ui in 0..n {
        let u = &cl.maps[ui];
        if u.is_empty_map() {
            continue;
        }
        let uinv = u.inverse().expect("checked partial injection");
        for vi in 0..n {
            let v = &cl.maps[vi];
            if v.is_empty_map() {
                continue;
            }
            work += lv.q;
            if work > budget {
                return LayerOutcome::Truncated(format!(
                    "layer {layer}: pair scan exceeded the evaluation budget"
                ));
            }
            let h = uinv.then(v);
            let mut cycles: Vec<Vec<usize>> =
                h.cycles().into_iter().filter(|c| c.len() >= 2).collect();
            cycles.sort_by_key(|c| (c.len(), c[0]));
            'cycles: for alpha in cycles {
                let t = alpha.len();
                let beta: Vec<usize> =
                    alpha.iter().map(|&a| uinv.apply(a).expect("cycle point")).collect();
                // Shift 1 is v, shift t is u; middle shifts need realizers.
                let mut witnesses_m: Vec<usize> = vec![vi];
                for i in 2..t {
                    work += n * t;
                    if work > budget {
                        return LayerOutcome::Truncated(format!(
                            "layer {layer}: pair scan exceeded the evaluation budget"
                        ));
                    }
                    let found = cl.maps.iter().position(|m| {
                        (0..t).all(|j| m.apply(beta[j]) == Some(alpha[(j + i) % t]))
                    });
                    match found {
                        Some(mi) => witnesses_m.push(mi),
                        None => continue 'cycles,
                    }
                }
                witnesses_m.push(ui);
                let witnesses: Vec<usize> = witnesses_m
                    .into_iter()
                    .map(|mi| {
                        s.eval_gen_word(&translate(cl.word_of(mi)))
                            .expect("closure words evaluate")
                    })
                    .collect();
                let words = witness_words(s, &witnesses);
                return LayerOutcome::Witness(RotationWitness {
                    layer,
                    t,
                    alpha,
                    beta,
                    witnesses,
                    witness_words: words,
                });
            }
        }
    }
    LayerOutcome::Clear
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OracleMode {
    Mn,
    Smn,
}

#[inline]
fn decode(mut v: usize, n: usize, t: usize, buf: &mut [usize]) {
    for slot in buf.iter_mut().take(t) {
        *slot = v % n;
        v /= n;
    }
}

#[inline]
fn encode(buf: &[usize], n: usize, t: usize) -> usize {
    let mut v = 0usize;
    for i in (0..t).rev() {
        v = v * n + buf[i];
    }
    v
}

/// One lambda step on an encoded tuple; `z = None` is the formal identity.
#[inline]
fn lambda_step_encoded(
    s: &GeneratedSemigroup,
    n: usize,
    t: usize,
    v: usize,
    z: Option<usize>,
) -> usize {
    let mut x = [0usize; 8];
    let mut c = [0usize; 8];
    let mut y = [0usize; 8];
    decode(v, n, t, &mut x);
    for i in 0..t {
        c[i] = match z {
            Some(z) => s.product(x[i], z),
            None => x[i],
        };
    }
    for i in 0..t {
        let mut acc = c[i];
        for d in 1..t - 1 {
            acc = s.product(acc, c[(i + d) % t]);
        }
        y[i] = s.product(acc, x[(i + t - 1) % t]);
    }
    encode(&y, n, t)
}

pub fn oracle_not_nilpotent(
    s: &GeneratedSemigroup,
    mode: OracleMode,
    t_max: usize,
) -> Result<Option<TupleCycleWitness>> {
    oracle_not_nilpotent_opt(s, mode, t_max, false)
}

/// Brute-force search for a non-constant tuple on a cycle of the lambda-step
/// graph. `z_over_s1` additionally allows the formal identity as multiplier
/// (the S^1 variant of the recursion).
pub fn oracle_not_nilpotent_opt(
    s: &GeneratedSemigroup,
    mode: OracleMode,
    t_max: usize,
    z_over_s1: bool,
) -> Result<Option<TupleCycleWitness>> {
    let n = s.size();
    let ts: Vec<usize> = match mode {
        OracleMode::Mn => vec![2],
        OracleMode::Smn => (2..=t_max.max(2)).collect(),
    };
    if *ts.last().unwrap() > 8 {
        return Err(Error::BadParameter("oracle supports t up to 8".into()));
    }
    for &t in &ts {
        if let Some(w) = oracle_single_t(s, n, t, z_over_s1)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn oracle_single_t(
    s: &GeneratedSemigroup,
    n: usize,
    t: usize,
    z_over_s1: bool,
) -> Result<Option<TupleCycleWitness>> {
    let nodes = n
        .checked_pow(t as u32)
        .filter(|&m| m <= ORACLE_NODE_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded(format!("oracle tuple graph for t = {t}")))?;
    let extra = usize::from(z_over_s1 && s.identity().is_none());
    let deg = n + extra;
    if nodes.saturating_mul(deg) > ORACLE_EDGE_BUDGET {
        return Err(Error::BudgetExceeded(format!("oracle tuple graph edges for t = {t}")));
    }
    let z_of = |zi: usize| -> Option<usize> { if zi < n { Some(zi) } else { None } };
    let step = |v: usize, zi: usize| -> usize { lambda_step_encoded(s, n, t, v, z_of(zi)) };
    let (ncomp, comp) = scc(nodes, deg, &step);
    let mut comp_size = vec![0u32; ncomp];
    for &c in &comp {
        comp_size[c as usize] += 1;
    }
    let mut x = [0usize; 8];
    // Prefer pairwise-distinct tuples; fall back to any non-constant one.
    for pass in 0..2 {
        for v in 0..nodes {
            decode(v, n, t, &mut x);
            let constant = x[..t].iter().all(|&a| a == x[0]);
            if constant {
                continue;
            }
            let distinct = (0..t).all(|i| (i + 1..t).all(|j| x[i] != x[j]));
            if (pass == 0) != distinct {
                continue;
            }
            let on_cycle =
                comp_size[comp[v] as usize] > 1 || (0..deg).any(|zi| step(v, zi) == v);
            if !on_cycle {
                continue;
            }
            let word = cycle_word(nodes, deg, &step, &comp, v);
            let word: Vec<usize> = word
                .into_iter()
                .map(|zi| if zi < n { zi } else { usize::MAX })
                .collect();
            return Ok(Some(TupleCycleWitness { t, tuple: x[..t].to_vec(), word }));
        }
    }
    Ok(None)
}

/// Shortest nonempty multiplier word from v back to v within its strongly
/// connected component.
fn cycle_word<F: Fn(usize, usize) -> usize>(
    nodes: usize,
    deg: usize,
    step: &F,
    comp: &[u32],
    v: usize,
) -> Vec<usize> {
    const UNSEEN: u32 = u32::MAX;
    const ROOT: u32 = u32::MAX - 1;
    let mut parent: Vec<(u32, u32)> = vec![(UNSEEN, 0); nodes];
    let mut queue: Vec<u32> = Vec::new();
    let target = v as u32;
    for zi in 0..deg {
        let w = step(v, zi);
        if comp[w] != comp[v] {
            continue;
        }
        if w == v {
            return vec![zi];
        }
        if parent[w].0 == UNSEEN {
            parent[w] = (ROOT, zi as u32);
            queue.push(w as u32);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head];
        head += 1;
        for zi in 0..deg {
            let w = step(cur as usize, zi);
            if comp[w] != comp[v] {
                continue;
            }
            if w as u32 == target {
                let mut word = vec![zi];
                let mut state = cur;
                loop {
                    let (prev, z) = parent[state as usize];
                    word.push(z as usize);
                    if prev == ROOT {
                        break;
                    }
                    state = prev;
                }
                word.reverse();
                return word;
            }
            if parent[w].0 == UNSEEN {
                parent[w] = (cur, zi as u32);
                queue.push(w as u32);
            }
        }
    }
    unreachable!("node certified on a cycle has a return path");
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NilpotencyClasses {
    /// Least k with all lambda/rho pairs equal after k steps; None when the
    /// iteration stabilizes on a non-constant tuple set.
    pub mn_class: Option<usize>,
    /// The same over tuple arities 2..=t_max.
    pub smn_class: Option<usize>,
}

fn tuple_class(s: &GeneratedSemigroup, t: usize) -> Result<Option<usize>> {
    let n = s.size();
    let nodes = n
        .checked_pow(t as u32)
        .filter(|&m| m <= ORACLE_NODE_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded(format!("class iteration for t = {t}")))?;
    if t > 8 {
        return Err(Error::BadParameter("class iteration supports t up to 8".into()));
    }
    let is_constant = |v: usize| -> bool {
        let mut x = [0usize; 8];
        decode(v, n, t, &mut x);
        x[..t].iter().all(|&a| a == x[0])
    };
    let mut cur = vec![true; nodes];
    let mut k = 0usize;
    loop {
        if (0..nodes).all(|v| !cur[v] || is_constant(v)) {
            return Ok(Some(k));
        }
        let mut next = vec![false; nodes];
        for v in 0..nodes {
            if !cur[v] {
                continue;
            }
            for z in 0..n {
                next[lambda_step_encoded(s, n, t, v, Some(z))] = true;
            }
        }
        // The reachable tuple sets form a decreasing chain; a fixed point
        // still containing a non-constant tuple means class infinity.
        if next == cur {
            return Ok(None);
        }
        cur = next;
        k += 1;
    }
}

pub fn nilpotency_classes(s: &GeneratedSemigroup, t_max: usize) -> Result<NilpotencyClasses> {
    let mn_class = tuple_class(s, 2)?;
    let mut smn_class = mn_class;
    for t in 3..=t_max.max(2) {
        match (tuple_class(s, t)?, smn_class) {
            (None, _) => {
                smn_class = None;
                break;
            }
            (Some(c), Some(best)) => smn_class = Some(best.max(c)),
            (Some(_), None) => unreachable!("loop breaks on None"),
        }
    }
    Ok(NilpotencyClasses { mn_class, smn_class })
}

/// The omega-iterate pseudoidentity for arity t: after infinitely many
/// rounds of t lambda steps with multipliers z_1..z_t, all components agree.
pub fn check_smn_circ_t(s: &GeneratedSemigroup, t: usize) -> Result<bool> {
    if !(2..=8).contains(&t) {
        return Err(Error::BadParameter("omega check supports t in 2..=8".into()));
    }
    let n = s.size();
    let assignments = n
        .checked_pow(2 * t as u32)
        .filter(|&m| m <= eval_budget())
        .ok_or_else(|| Error::BudgetExceeded(format!("omega check for t = {t}")))?;
    let nodes = n.pow(t as u32);
    let mut zs = [0usize; 8];
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for a in 0..assignments {
        let y0 = a % nodes;
        decode(a / nodes, n, t, &mut zs);
        let phi = |v: usize| -> usize {
            let mut cur = v;
            for &z in zs.iter().take(t) {
                cur = lambda_step_encoded(s, n, t, cur, Some(z));
            }
            cur
        };
        // Lasso of the phi iteration from y0, then the omega power.
        seen.clear();
        let mut cur = y0;
        let mut k = 0usize;
        let (mu, rho) = loop {
            if let Some(&first) = seen.get(&cur) {
                break (first, k - first);
            }
            seen.insert(cur, k);
            cur = phi(cur);
            k += 1;
        };
        let l = if mu == 0 { rho } else { mu.div_ceil(rho) * rho };
        let mut lim = y0;
        for _ in 0..l {
            lim = phi(lim);
        }
        let mut x = [0usize; 8];
        decode(lim, n, t, &mut x);
        if !x[..t].iter().all(|&v| v == x[0]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The delta pseudoidentity: the term
/// ((y1 z2)^(w-1) y1 z1 (y2 z2)^(w-1) y2 z1)^w (y1 z2)^w
/// is symmetric in y1, y2 for all quadruples.
pub fn check_mn_star(s: &GeneratedSemigroup) -> Result<bool> {
    let n = s.size();
    let quads = n
        .checked_pow(4)
        .filter(|&m| m <= eval_budget())
        .ok_or_else(|| Error::BudgetExceeded("delta identity scan".into()))?;
    let _ = quads;
    let mut om = vec![0usize; n];
    let mut om1 = vec![0usize; n];
    for x in 0..n {
        let d = s.omega(x);
        om[x] = d.omega;
        om1[x] = d.omega_minus_1;
    }
    let delta = |y1: usize, y2: usize, z1: usize, z2: usize| -> usize {
        let a = s.product(y1, z2);
        let b = s.product(y2, z2);
        let inner = s.product(
            s.product(s.product(om1[a], y1), z1),
            s.product(s.product(om1[b], y2), z1),
        );
        s.product(om[inner], om[a])
    };
    for y1 in 0..n {
        for y2 in (y1 + 1)..n {
            for z1 in 0..n {
                for z2 in 0..n {
                    if delta(y1, y2, z1, z2) != delta(y2, y1, z1, z2) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Two-variable J-class property: whenever y1, y2 in the same J-class admit
/// z1 with y1 z1 y2 and y2 z1 y1 in J, and z2 with y1 z2 y1 and y2 z2 y2 in
/// J, then y1 and y2 are H-equivalent.
pub fn check_p2(s: &GeneratedSemigroup, st: &Structure) -> Result<bool> {
    let g = &st.greens;
    let n = s.size();
    let mut cost: usize = 0;
    for members in &g.j_members {
        cost = cost.saturating_add(members.len() * members.len() * n);
    }
    if cost > eval_budget() {
        return Err(Error::BudgetExceeded("J-class pair scan".into()));
    }
    for (j, members) in g.j_members.iter().enumerate() {
        let j = j as u32;
        for (ai, &a) in members.iter().enumerate() {
            for &b in &members[ai + 1..] {
                let (a, b) = (a as usize, b as usize);
                if g.h_of[a] == g.h_of[b] {
                    continue;
                }
                let in_j = |x: usize| g.j_of[x] == j;
                let z1_ok = (0..n).any(|z| {
                    in_j(s.product(s.product(a, z), b)) && in_j(s.product(s.product(b, z), a))
                });
                if !z1_ok {
                    continue;
                }
                let z2_ok = (0..n).any(|z| {
                    in_j(s.product(s.product(a, z), a)) && in_j(s.product(s.product(b, z), b))
                });
                if z2_ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Explicit Rees matrix data M^0(G, n_rows, n_cols; P), P given row-major
/// with None as the zero entry and Some(g) a group element index.
pub struct ReesSpec {
    pub group: GroupTable,
    pub n_rows: usize,
    pub n_cols: usize,
    pub sandwich: Vec<Vec<Option<usize>>>,
}

impl ReesSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_rows == 0 || self.n_cols == 0 {
            return Err(Error::MalformedRees("empty row or column set".into()));
        }
        if self.sandwich.len() != self.n_cols
            || self.sandwich.iter().any(|r| r.len() != self.n_rows)
        {
            return Err(Error::MalformedRees(
                "sandwich matrix must be n_cols x n_rows".into(),
            ));
        }
        let order = self.group.order();
        for row in &self.sandwich {
            for &e in row {
                if let Some(g) = e {
                    if g >= order {
                        return Err(Error::MalformedRees("entry outside the group".into()));
                    }
                }
            }
        }
        // Regularity: no zero row or zero column.
        for (l, row) in self.sandwich.iter().enumerate() {
            if row.iter().all(|e| e.is_none()) {
                return Err(Error::MalformedRees(format!("column {l} of P is zero")));
            }
        }
        for i in 0..self.n_rows {
            if self.sandwich.iter().all(|row| row[i].is_none()) {
                return Err(Error::MalformedRees(format!("row {i} of P is zero")));
            }
        }
        Ok(())
    }

    /// P is a permuted diagonal: exactly one nonzero entry per row and per
    /// column. Together with squareness this makes M^0 an inverse semigroup.
    pub fn is_inverse(&self) -> bool {
        self.n_rows == self.n_cols
            && self
                .sandwich
                .iter()
                .all(|row| row.iter().filter(|e| e.is_some()).count() == 1)
            && (0..self.n_rows).all(|i| {
                self.sandwich
                    .iter()
                    .filter(|row| row[i].is_some())
                    .count()
                    == 1
            })
    }
}

/// Materializes M^0(G, n, m; P) as a table-backed semigroup. Element 0 is
/// the zero; element 1 + (i*m + l)*|G| + g is (g; i, l).
pub fn rees_to_semigroup(spec: &ReesSpec) -> Result<GeneratedSemigroup> {
    spec.validate()?;
    let order = spec.group.order();
    let (nr, nc) = (spec.n_rows, spec.n_cols);
    let size = 1 + nr * nc * order;
    let id_of = |g: usize, i: usize, l: usize| 1 + (i * nc + l) * order + g;
    let mut table = vec![vec![0usize; size]; size];
    let mut names = vec!["0".to_string()];
    for i in 0..nr {
        for l in 0..nc {
            for g in 0..order {
                names.push(format!("({g};{i},{l})"));
            }
        }
    }
    for i in 0..nr {
        for l in 0..nc {
            for g in 0..order {
                let x = id_of(g, i, l);
                for k in 0..nr {
                    for j in 0..nc {
                        for h in 0..order {
                            let y = id_of(h, k, j);
                            table[x][y] = match spec.sandwich[l][k] {
                                Some(p) => {
                                    id_of(spec.group.mul(spec.group.mul(g, p), h), i, j)
                                }
                                None => 0,
                            };
                        }
                    }
                }
            }
        }
    }
    GeneratedSemigroup::from_table(&table, Some(names))
}

/// Direct criterion on Rees matrix data: member of both MN and SMN exactly
/// when the matrix is square and a permuted diagonal (the semigroup is
/// inverse) and the structure group is nilpotent.
pub fn rees_fast_path(spec: &ReesSpec) -> Result<Verdict> {
    spec.validate()?;
    if spec.n_rows != spec.n_cols {
        return Ok(Verdict::NotMember(NotMemberReason::Structural(format!(
            "sandwich matrix is {} x {}, not square",
            spec.n_cols, spec.n_rows
        ))));
    }
    if !spec.is_inverse() {
        return Ok(Verdict::NotMember(NotMemberReason::Structural(
            "sandwich matrix is not a permuted diagonal; the semigroup is not inverse".into(),
        )));
    }
    if group_nilpotency_class(&spec.group).is_none() {
        return Ok(Verdict::NotMember(NotMemberReason::Structural(
            "structure group is not nilpotent".into(),
        )));
    }
    Ok(Verdict::Member)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;
    use crate::pmap::parse_orbits;

    fn brandt(n: usize) -> GeneratedSemigroup {
        let gens: Vec<PartialMap> =
            (0..n).map(|i| PartialMap::singleton(n, i, (i + 1) % n)).collect();
        GeneratedSemigroup::close_generators(&gens, 10_000).unwrap()
    }

    /// B_2 together with the transposition of the two points; the minimal
    /// example of a block group that is not Mal'cev nilpotent.
    fn swapped_brandt() -> GeneratedSemigroup {
        let mut gens: Vec<PartialMap> =
            (0..2).map(|i| PartialMap::singleton(2, i, (i + 1) % 2)).collect();
        gens.push(parse_orbits(2, "(1,2)").unwrap());
        GeneratedSemigroup::close_generators(&gens, 10_000).unwrap()
    }

    #[test]
    fn lambda_base_and_null() {
        let b = parse_orbits(2, "(1,2,#)").unwrap();
        let s = GeneratedSemigroup::close_generators(&[b], 100).unwrap();
        assert_eq!(s.size(), 2);
        let rows = lambda_sequences(&s, &[0, 1], &[Some(0)]).unwrap();
        assert_eq!(rows[0], vec![0, 1]);
        // In a null semigroup all products of length >= 2 are zero.
        let zero = s.zero().unwrap();
        assert_eq!(rows[1], vec![zero, zero]);
    }

    #[test]
    fn brandt_is_mn_and_smn() {
        let s = brandt(3);
        let st = analyze(&s);
        assert!(bg_nil_failure(&s, &st).is_none());
        assert!(check_mn(&s, &st).is_member());
        assert!(check_smn(&s, &st).is_member());
        assert!(oracle_not_nilpotent(&s, OracleMode::Mn, 2).unwrap().is_none());
        assert!(oracle_not_nilpotent(&s, OracleMode::Smn, 4).unwrap().is_none());
    }

    #[test]
    fn swapped_brandt_is_not_mn() {
        let s = swapped_brandt();
        let st = analyze(&s);
        assert!(bg_nil_failure(&s, &st).is_none());
        let verdict = check_mn(&s, &st);
        let w = verdict.rotation_witness().expect("rotation witness");
        assert_eq!(w.t, 2);
        w.validate(&s, &st).unwrap();
        let smn = check_smn(&s, &st);
        let w2 = smn.rotation_witness().expect("rotation witness");
        w2.validate(&s, &st).unwrap();
        let oracle = oracle_not_nilpotent(&s, OracleMode::Mn, 2).unwrap().unwrap();
        oracle.validate(&s).unwrap();
    }

    #[test]
    fn groups_and_the_oracle() {
        let c6 = groups::to_semigroup(&groups::cyclic(6));
        assert!(oracle_not_nilpotent(&c6, OracleMode::Smn, 3).unwrap().is_none());
        let s3 = groups::to_semigroup(&groups::symmetric3());
        let w = oracle_not_nilpotent(&s3, OracleMode::Mn, 2).unwrap().unwrap();
        w.validate(&s3).unwrap();
        let st = analyze(&s3);
        assert!(check_mn(&s3, &st).is_not_member());
    }

    #[test]
    fn classes_of_groups() {
        let q8 = groups::to_semigroup(&groups::quaternion8());
        let c = nilpotency_classes(&q8, 3).unwrap();
        assert_eq!(c.mn_class, Some(2));
        assert_eq!(c.smn_class, Some(2));
        let s3 = groups::to_semigroup(&groups::symmetric3());
        let c = nilpotency_classes(&s3, 2).unwrap();
        assert_eq!(c.mn_class, None);
    }

    #[test]
    fn null_semigroup_has_class_one() {
        let b = parse_orbits(2, "(1,2,#)").unwrap();
        let s = GeneratedSemigroup::close_generators(&[b], 100).unwrap();
        let c = nilpotency_classes(&s, 3).unwrap();
        assert_eq!(c.mn_class, Some(1));
        assert_eq!(c.smn_class, Some(1));
    }

    #[test]
    fn omega_and_delta_identities() {
        let c6 = groups::to_semigroup(&groups::cyclic(6));
        assert!(check_smn_circ_t(&c6, 2).unwrap());
        assert!(check_mn_star(&c6).unwrap());
        let s = swapped_brandt();
        assert!(!check_smn_circ_t(&s, 2).unwrap());
        assert!(!check_mn_star(&s).unwrap());
    }

    #[test]
    fn p2_matches_mn_inside_bg_nil() {
        let b2 = brandt(2);
        let st = analyze(&b2);
        assert!(check_p2(&b2, &st).unwrap());
        assert!(check_mn(&b2, &st).is_member());
        let s = swapped_brandt();
        let st = analyze(&s);
        assert!(!check_p2(&s, &st).unwrap());
    }

    #[test]
    fn rees_criterion() {
        let i2 = ReesSpec {
            group: groups::trivial(),
            n_rows: 2,
            n_cols: 2,
            sandwich: vec![vec![Some(0), None], vec![None, Some(0)]],
        };
        assert!(rees_fast_path(&i2).unwrap().is_member());
        let s3 = ReesSpec {
            group: groups::symmetric3(),
            n_rows: 1,
            n_cols: 1,
            sandwich: vec![vec![Some(0)]],
        };
        assert!(rees_fast_path(&s3).unwrap().is_not_member());
        let dense = ReesSpec {
            group: groups::trivial(),
            n_rows: 1,
            n_cols: 2,
            sandwich: vec![vec![Some(0)], vec![Some(0)]],
        };
        assert!(rees_fast_path(&dense).unwrap().is_not_member());
    }

    #[test]
    fn rees_semigroup_round_trip() {
        let spec = ReesSpec {
            group: groups::trivial(),
            n_rows: 2,
            n_cols: 2,
            sandwich: vec![vec![Some(0), None], vec![None, Some(0)]],
        };
        let s = rees_to_semigroup(&spec).unwrap();
        assert_eq!(s.size(), 5);
        let st = analyze(&s);
        assert!(check_mn(&s, &st).is_member());
        assert!(check_smn(&s, &st).is_member());
    }

    #[test]
    fn verdicts_agree_with_oracle_on_small_inputs() {
        for s in [brandt(2), brandt(3), swapped_brandt()] {
            let st = analyze(&s);
            let mn = check_mn(&s, &st);
            let oracle = oracle_not_nilpotent(&s, OracleMode::Mn, 2).unwrap();
            assert_eq!(mn.is_member(), oracle.is_none());
            let smn = check_smn(&s, &st);
            let oracle = oracle_not_nilpotent(&s, OracleMode::Smn, 4).unwrap();
            assert_eq!(smn.is_member(), oracle.is_none());
        }
    }
}
