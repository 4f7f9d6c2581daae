//! Membership facade: aperiodicity, inverse/block-group structure,
//! nilpotency verdicts from the engine, the wreath-product membership test
//! via Schützenberger-graph extendibility, and report emission.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::engine::{self, Structure, Verdict};
use crate::error::{Error, Result};
use crate::green::{self, GreensStructure, GroupTable};
use crate::schutz::{self, SchutzGraph, Side};
use crate::semigroup::GeneratedSemigroup;
use crate::stallings::{self, ExtendVerdict, InverseAutomaton, PrimeStrategy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PVerdict {
    Member,
    NotMember,
    Unknown(String),
}

impl PVerdict {
    fn known(b: bool) -> PVerdict {
        if b {
            PVerdict::Member
        } else {
            PVerdict::NotMember
        }
    }

    pub fn is_member(&self) -> bool {
        matches!(self, PVerdict::Member)
    }

    pub fn is_not_member(&self) -> bool {
        matches!(self, PVerdict::NotMember)
    }

    fn label(&self) -> String {
        match self {
            PVerdict::Member => "member".into(),
            PVerdict::NotMember => "not a member".into(),
            PVerdict::Unknown(r) => format!("unknown ({r})"),
        }
    }
}

/// Cap on the quadratic cross-derivations (unique-inverse counting,
/// idempotent-pair identities); above it only the linear structural
/// derivation runs.
const CROSS_CHECK_BUDGET: usize = 1_000_000;

/// Whether every cyclic subsemigroup is a trivial group at its idempotent.
pub fn aperiodic(s: &GeneratedSemigroup) -> bool {
    (0..s.size()).all(|x| s.omega(x).period == 1)
}

/// Whether every R-class contains an idempotent.
pub fn regular(s: &GeneratedSemigroup, g: &GreensStructure) -> bool {
    let mut has: Vec<bool> = vec![false; g.n_r];
    for &e in &g.idempotents {
        has[g.r_of[e as usize] as usize] = true;
    }
    (0..s.size()).all(|x| has[g.r_of[x] as usize])
}

/// `None` when the idempotent pair scan exceeds the cross-check budget.
pub fn idempotents_commute(s: &GeneratedSemigroup, g: &GreensStructure) -> Option<bool> {
    let ne = g.idempotents.len();
    if ne.saturating_mul(ne) > CROSS_CHECK_BUDGET {
        return None;
    }
    for &e in &g.idempotents {
        for &f in &g.idempotents {
            if s.product(e as usize, f as usize) != s.product(f as usize, e as usize) {
                return Some(false);
            }
        }
    }
    Some(true)
}

/// At most one idempotent per R-class and per L-class — equivalent to
/// every element having at most one inverse. Cross-checked on small
/// inputs against unique-inverse counting and the idempotent-pair
/// omega identity.
pub fn block_group(s: &GeneratedSemigroup, g: &GreensStructure) -> Result<bool> {
    let mut r_seen = vec![false; g.n_r];
    let mut l_seen = vec![false; g.n_l];
    let mut structural = true;
    for &e in &g.idempotents {
        let (r, l) = (g.r_of[e as usize] as usize, g.l_of[e as usize] as usize);
        if r_seen[r] || l_seen[l] {
            structural = false;
        }
        r_seen[r] = true;
        l_seen[l] = true;
    }
    let ne = g.idempotents.len();
    if ne * ne <= CROSS_CHECK_BUDGET {
        let mut identity_holds = true;
        'outer: for &e in &g.idempotents {
            for &f in &g.idempotents {
                let ef = s.product(e as usize, f as usize);
                let fe = s.product(f as usize, e as usize);
                if s.omega(ef).omega != s.omega(fe).omega {
                    identity_holds = false;
                    break 'outer;
                }
            }
        }
        if identity_holds != structural {
            return Err(Error::InternalInconsistency(format!(
                "block-group derivations disagree: idempotent placement says {structural}, omega identity says {identity_holds}"
            )));
        }
    }
    if s.size() * s.size() <= CROSS_CHECK_BUDGET {
        let mut unique = true;
        'scan: for x in 0..s.size() {
            let mut count = 0;
            for y in 0..s.size() {
                if s.product(s.product(x, y), x) == x && s.product(s.product(y, x), y) == y {
                    count += 1;
                    if count > 1 {
                        unique = false;
                        break 'scan;
                    }
                }
            }
        }
        if unique != structural {
            return Err(Error::InternalInconsistency(format!(
                "block-group derivations disagree: idempotent placement says {structural}, inverse counting says {unique}"
            )));
        }
    }
    Ok(structural)
}

/// Nilpotency through the iterated-commutator pseudoidentity: for all x, y
/// the sequence z -> z^{-1} y^{-1} z y must reach the identity.
pub fn engel_nilpotent(gt: &GroupTable) -> bool {
    let n = gt.order();
    let e = gt.identity as usize;
    for x in 0..n {
        for y in 0..n {
            let mut z = x;
            let mut seen = HashSet::new();
            loop {
                if z == e {
                    break;
                }
                if !seen.insert(z) {
                    return false;
                }
                z = gt.mul(gt.mul(gt.inv(z), gt.inv(y)), gt.mul(z, y));
            }
        }
    }
    true
}

/// One representative idempotent per regular J-class.
fn representative_idempotents(g: &GreensStructure) -> Vec<usize> {
    let mut least: Vec<Option<usize>> = vec![None; g.n_j];
    for &e in &g.idempotents {
        let j = g.j_of[e as usize] as usize;
        if least[j].is_none_or(|cur| (e as usize) < cur) {
            least[j] = Some(e as usize);
        }
    }
    least.into_iter().flatten().collect()
}

/// Block group with every maximal subgroup nilpotent; subgroup verdicts
/// are derived both by lower central series and by the commutator
/// pseudoidentity and must agree.
fn block_group_nilpotent(
    s: &GeneratedSemigroup,
    st: &Structure,
    bg: bool,
) -> Result<(bool, Option<String>)> {
    if !bg {
        return Ok((false, Some("not a block group".into())));
    }
    for e in representative_idempotents(&st.greens) {
        let gt = green::maximal_subgroup(s, &st.greens, e)?;
        let by_series = green::group_nilpotency_class(&gt).is_some();
        let by_identity = engel_nilpotent(&gt);
        if by_series != by_identity {
            return Err(Error::InternalInconsistency(format!(
                "subgroup at idempotent {e}: series says nilpotent={by_series}, pseudoidentity says {by_identity}"
            )));
        }
        if !by_series {
            return Ok((false, Some(format!("non-nilpotent subgroup at idempotent {e}"))));
        }
    }
    // The engine's structural gate must agree with the composition above.
    let failure = engine::bg_nil_failure(s, st);
    if failure.is_some() {
        return Err(Error::InternalInconsistency(format!(
            "structural gate and composed derivation disagree: {}",
            failure.unwrap()
        )));
    }
    Ok((true, None))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassEvidence {
    pub side: String,
    pub class_id: u32,
    pub n_vertices: usize,
    pub inverse_graph: bool,
    pub outcome: String,
}

#[derive(Debug, Serialize)]
pub struct JmGnilReport {
    pub verdict: PVerdict,
    pub evidence: Vec<ClassEvidence>,
}

fn graph_automaton(g: &SchutzGraph) -> Result<InverseAutomaton> {
    InverseAutomaton::new(g.edges.len(), g.vertices.len(), 0, g.edges.clone())
}

/// Membership in the wreath-style product of J with nilpotent groups:
/// every regular right and left Schützenberger graph must be an inverse
/// graph whose vertices stay separated under the nil closure.
pub fn check_jm_gnil(s: &GeneratedSemigroup, g: &GreensStructure) -> Result<JmGnilReport> {
    let strategy = PrimeStrategy::default();
    let mut evidence = Vec::new();
    let mut any_unknown = false;
    let mut failed = false;
    for graph in schutz::schutz_graphs(s, g) {
        let side = match graph.side {
            Side::Right => "right",
            Side::Left => "left",
        };
        let mut record = ClassEvidence {
            side: side.into(),
            class_id: graph.class_id,
            n_vertices: graph.vertices.len(),
            inverse_graph: graph.is_inverse,
            outcome: String::new(),
        };
        if !graph.is_inverse {
            record.outcome = "not an inverse graph".into();
            evidence.push(record);
            failed = true;
            continue;
        }
        let aut = graph_automaton(&graph)?;
        match stallings::is_gnil_extendible(&aut, &strategy)? {
            ExtendVerdict::Yes => {
                record.outcome = "extendible".into();
            }
            ExtendVerdict::No(r, u) => {
                record.outcome = format!("not extendible: vertices {r} and {u} collapse");
                failed = true;
            }
            ExtendVerdict::UnknownAtBound => {
                record.outcome = "inexact prime bound".into();
                any_unknown = true;
            }
        }
        evidence.push(record);
    }
    let verdict = if failed {
        PVerdict::NotMember
    } else if any_unknown {
        PVerdict::Unknown("some class hit the prime bound".into())
    } else {
        PVerdict::Member
    };
    Ok(JmGnilReport { verdict, evidence })
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    pub skip_mn_star: bool,
    pub skip_smn_circ: bool,
    pub skip_jm_gnil: bool,
}

#[derive(Debug, Serialize)]
pub struct ClassificationReport {
    pub digest: String,
    pub size: usize,
    pub aperiodic: PVerdict,
    pub inverse: PVerdict,
    pub idempotents_commute: PVerdict,
    pub block_group: PVerdict,
    pub block_group_nilpotent: PVerdict,
    pub block_group_trivial: PVerdict,
    pub malcev_nilpotent: Verdict,
    pub strongly_malcev_nilpotent: Verdict,
    pub mn_star: PVerdict,
    pub smn_circ_2: PVerdict,
    pub jm_gnil: JmGnilReport,
    pub consistency: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
}

/// Content digest over the generator action tables, stable across runs.
pub fn digest(s: &GeneratedSemigroup) -> String {
    let mut h = Sha256::new();
    h.update((s.size() as u64).to_le_bytes());
    h.update((s.generator_count() as u64).to_le_bytes());
    for gi in 0..s.generator_count() {
        for x in 0..s.size() {
            h.update((s.right_by_gen(x, gi) as u32).to_le_bytes());
        }
    }
    format!("{:x}", h.finalize())
}

fn verdict_to_p(v: &Verdict) -> PVerdict {
    match v {
        Verdict::Member => PVerdict::Member,
        Verdict::NotMember(_) => PVerdict::NotMember,
        Verdict::Unknown(r) => PVerdict::Unknown(r.clone()),
    }
}

pub fn classify(s: &GeneratedSemigroup, options: &ClassifyOptions) -> Result<ClassificationReport> {
    let start = Instant::now();
    let st = engine::analyze(s);
    let mut notes = Vec::new();
    let mut consistency = Vec::new();

    let ap = aperiodic(s);
    let reg = regular(s, &st.greens);
    let idem = idempotents_commute(s, &st.greens);
    let inv = match (reg, idem) {
        (false, _) => PVerdict::NotMember,
        (true, Some(b)) => PVerdict::known(b),
        (true, None) => PVerdict::Unknown("idempotent pair scan exceeds budget".into()),
    };
    let bg = block_group(s, &st.greens)?;
    consistency.push("block-group derivations agree".into());
    let (bg_nil, bg_nil_reason) = block_group_nilpotent(s, &st, bg)?;
    consistency.push("subgroup nilpotency derivations agree".into());
    if let Some(r) = bg_nil_reason {
        notes.push(r);
    }
    let bi = bg && ap;

    let mn = engine::check_mn(s, &st);
    if let Some(w) = mn.rotation_witness() {
        w.validate(s, &st)?;
        consistency.push("rotation witness replays".into());
    }
    let smn = engine::check_smn(s, &st);
    if let Some(w) = smn.rotation_witness() {
        w.validate(s, &st)?;
    }
    if let Verdict::NotMember(engine::NotMemberReason::TupleCycle(w)) = &smn {
        w.validate(s)?;
        consistency.push("tuple-cycle witness replays".into());
    }

    let mn_star = if options.skip_mn_star {
        PVerdict::Unknown("skipped".into())
    } else {
        match engine::check_mn_star(s) {
            Ok(b) => PVerdict::known(b),
            Err(e) => PVerdict::Unknown(e.to_string()),
        }
    };
    let smn_circ_2 = if options.skip_smn_circ {
        PVerdict::Unknown("skipped".into())
    } else {
        match engine::check_smn_circ_t(s, 2) {
            Ok(b) => PVerdict::known(b),
            Err(e) => PVerdict::Unknown(e.to_string()),
        }
    };
    let jm_gnil = if options.skip_jm_gnil {
        JmGnilReport { verdict: PVerdict::Unknown("skipped".into()), evidence: Vec::new() }
    } else {
        check_jm_gnil(s, &st.greens)?
    };

    // Verdict-chain invariants.
    let chain: [(&str, bool, bool); 5] = [
        ("SMN implies MN", smn.is_member(), mn.is_member() || matches!(mn, Verdict::Unknown(_))),
        ("MN implies BG_nil", mn.is_member(), bg_nil),
        ("BG_nil implies BG", bg_nil, bg),
        ("BI implies BG", bi, bg),
        ("BI implies aperiodic", bi, ap),
    ];
    for (name, premise, conclusion) in chain {
        if premise && !conclusion {
            return Err(Error::InternalInconsistency(format!("chain violated: {name}")));
        }
        consistency.push(format!("{name}: ok"));
    }
    if let (PVerdict::Member | PVerdict::NotMember, false) =
        (&mn_star, matches!(mn, Verdict::Unknown(_)))
    {
        let star_and_gate = mn_star.is_member() && bg_nil;
        if star_and_gate != mn.is_member() {
            return Err(Error::InternalInconsistency(
                "omega-substitution verdict with the structural gate disagrees with the layer search".into(),
            ));
        }
        consistency.push("omega-substitution check matches the layer search".into());
    }
    if let (PVerdict::Member | PVerdict::NotMember, false) =
        (&smn_circ_2, matches!(mn, Verdict::Unknown(_)))
    {
        if smn_circ_2.is_member() != mn.is_member() {
            return Err(Error::InternalInconsistency(
                "pair-substitution verdict disagrees with the layer search".into(),
            ));
        }
        consistency.push("pair-substitution check matches the layer search".into());
    }

    Ok(ClassificationReport {
        digest: digest(s),
        size: s.size(),
        aperiodic: PVerdict::known(ap),
        inverse: inv,
        idempotents_commute: match idem {
            Some(b) => PVerdict::known(b),
            None => PVerdict::Unknown("idempotent pair scan exceeds budget".into()),
        },
        block_group: PVerdict::known(bg),
        block_group_nilpotent: PVerdict::known(bg_nil),
        block_group_trivial: PVerdict::known(bi),
        malcev_nilpotent: mn,
        strongly_malcev_nilpotent: smn,
        mn_star,
        smn_circ_2,
        jm_gnil,
        consistency,
        notes,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

pub fn emit_report(r: &ClassificationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(r)
            .map_err(|e| Error::Semantic(format!("report serialization: {e}"))),
        ReportFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "input digest : {}", r.digest);
            let _ = writeln!(out, "size         : {}", r.size);
            let rows: [(&str, String); 10] = [
                ("aperiodic", r.aperiodic.label()),
                ("inverse", r.inverse.label()),
                ("idempotents commute", r.idempotents_commute.label()),
                ("block group", r.block_group.label()),
                ("block group, nilpotent subgroups", r.block_group_nilpotent.label()),
                ("block group, trivial subgroups", r.block_group_trivial.label()),
                ("Mal'cev nilpotent", verdict_to_p(&r.malcev_nilpotent).label()),
                (
                    "strongly Mal'cev nilpotent",
                    verdict_to_p(&r.strongly_malcev_nilpotent).label(),
                ),
                ("omega-substitution variant", r.mn_star.label()),
                ("pair-substitution variant", r.smn_circ_2.label()),
            ];
            for (name, value) in rows {
                let _ = writeln!(out, "{name:<34}: {value}");
            }
            let _ = writeln!(out, "{:<34}: {}", "J wr G_nil membership", r.jm_gnil.verdict.label());
            for ev in &r.jm_gnil.evidence {
                if ev.outcome != "extendible" {
                    let _ = writeln!(
                        out,
                        "  {} class {} ({} vertices): {}",
                        ev.side, ev.class_id, ev.n_vertices, ev.outcome
                    );
                }
            }
            if let Some(w) = r.malcev_nilpotent.rotation_witness() {
                let _ = writeln!(
                    out,
                    "rotation witness: layer {}, t = {}, alpha {:?}, beta {:?}, words {:?}",
                    w.layer, w.t, w.alpha, w.beta, w.witness_words
                );
            }
            for n in &r.notes {
                let _ = writeln!(out, "note: {n}");
            }
            let _ = writeln!(out, "elapsed: {} ms", r.elapsed_ms);
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{self, GalleryId};
    use crate::groups;

    #[test]
    fn trivial_semigroup_is_member_everywhere() {
        let s = GeneratedSemigroup::from_table(&[vec![0]], None).unwrap();
        let r = classify(&s, &ClassifyOptions::default()).unwrap();
        assert!(r.aperiodic.is_member());
        assert!(r.inverse.is_member());
        assert!(r.block_group.is_member());
        assert!(r.block_group_nilpotent.is_member());
        assert!(r.block_group_trivial.is_member());
        assert!(r.malcev_nilpotent.is_member());
        assert!(r.strongly_malcev_nilpotent.is_member());
        assert!(r.mn_star.is_member());
        assert!(r.smn_circ_2.is_member());
        assert!(r.jm_gnil.verdict.is_member());
    }

    #[test]
    fn nilpotent_group_cayley_graph_is_member() {
        let s = groups::to_semigroup(&groups::cyclic(6));
        let g = green::greens_structure(&s);
        let rep = check_jm_gnil(&s, &g).unwrap();
        assert!(rep.verdict.is_member());
        let s3 = groups::to_semigroup(&groups::symmetric3());
        let r = classify(&s3, &ClassifyOptions::default()).unwrap();
        assert!(r.block_group_nilpotent.is_not_member());
        assert!(r.malcev_nilpotent.is_not_member());
    }

    #[test]
    fn four_point_member_fails_nilpotency_but_extends() {
        let s = gallery::build(&GalleryId::M3).unwrap();
        let r = classify(&s, &ClassifyOptions::default()).unwrap();
        assert!(r.malcev_nilpotent.is_not_member());
        assert!(r.jm_gnil.verdict.is_member());
        let w = r.malcev_nilpotent.rotation_witness().unwrap();
        assert_eq!(w.t, 2);
        let text = emit_report(&r, ReportFormat::Text).unwrap();
        assert!(text.contains("rotation witness"));
        let json = emit_report(&r, ReportFormat::Json).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["size"], r.size as u64);
    }

    #[test]
    fn engel_check_matches_series() {
        for gt in [
            groups::cyclic(6),
            groups::symmetric3(),
            groups::dihedral4(),
            groups::quaternion8(),
        ] {
            assert_eq!(
                engel_nilpotent(&gt),
                green::group_nilpotency_class(&gt).is_some()
            );
        }
    }
}
