//! The characterisation checkers.
//!
//! Every verdict here is semantic: "pass" means no counterexample among the
//! finite models up to the requested size.  Geometric logic has no
//! completeness theorem, so a pass is evidence about provability claims,
//! not a proof; the reports say exactly what was searched.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::logic::{fresh_var, Formula, PsiEntry, Sequent, Term, Theory, WitnessScheme};
use crate::model::{
    automorphisms, eval, holds_sequent, psi_elements, tuples_of, Assignment, FiniteStructure,
    Limits, SequentVerdict, TaggedTuple, TaggedTupleSet,
};

use super::report::{CheckError, CheckReport, Finding, Verdict};
use super::session::Session;

/// Checks the inhabitedness clause: in every model up to `max_size`, some
/// psi of the scheme has a witness.
pub fn check_inhabited(
    theory: &Theory,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<CheckReport, CheckError> {
    let session = Session::new(theory, Limits::default())?;
    check_inhabited_in(&session, scheme, max_size)
}

pub fn check_inhabited_in(
    session: &Session,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<CheckReport, CheckError> {
    session.validate_scheme(scheme)?;
    let mut report = CheckReport::new("inhabited");
    report.stats.max_size = max_size;
    for models in session.models_up_to(max_size)? {
        for m in models.iter() {
            report.stats.models_checked += 1;
            let tagged = psi_elements(m, scheme)?;
            if tagged.is_empty() {
                report.push(
                    Finding::new(
                        Verdict::Fail,
                        "inhabited",
                        "model has no witness for any psi of the scheme",
                    )
                    .with_model(m),
                );
            }
        }
    }
    Ok(report)
}

/// Checks the three uniform co-ordinatisation sequents for every psi and
/// theta, in every model up to `max_size`:
///
/// - restriction: `theta(xs, y) |- psi(xs)`
/// - functionality: `theta(xs, y) /\ theta(xs, y') |- y = y'`
/// - covering: `psi(xs) /\ (y = y) |- \/_theta theta(xs, y)`
///
/// Size-indexed theta families are audited member by member: an inactive
/// member that is satisfiable at the model's size is an undischarged bound
/// obligation and makes the verdict inconclusive.
pub fn check_ucoord(
    theory: &Theory,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<CheckReport, CheckError> {
    let session = Session::new(theory, Limits::default())?;
    check_ucoord_in(&session, scheme, max_size)
}

pub fn check_ucoord_in(
    session: &Session,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<CheckReport, CheckError> {
    session.validate_scheme(scheme)?;
    let mut report = CheckReport::new("ucoord");
    report.stats.max_size = max_size;
    for models in session.models_up_to(max_size)? {
        for m in models.iter() {
            report.stats.models_checked += 1;
            for entry in &scheme.entries {
                check_ucoord_entry(m, entry, &mut report)?;
            }
        }
    }
    Ok(report)
}

fn check_ucoord_entry(
    m: &FiniteStructure,
    entry: &PsiEntry,
    report: &mut CheckReport,
) -> Result<(), CheckError> {
    let psi = &entry.tag;
    let y = entry.companion_var.clone();
    let mut theta_ctx = entry.context.clone();
    theta_ctx.push(y.clone());

    // Audit the size-bound obligation: inactive members must be
    // unsatisfiable at this cardinality, otherwise active-only checking is
    // not exact.
    if entry.thetas.is_size_indexed() {
        for member in entry.thetas.inactive_members(m.size) {
            if satisfiable(m, &member.formula, &theta_ctx)?.is_some() {
                report.push(
                    Finding::new(
                        Verdict::Inconclusive,
                        format!("family-bound:{psi}:{}", member.label),
                        "inactive theta member is satisfiable at this size; the family's \
                         size bound does not discharge its soundness obligation",
                    )
                    .with_model(m),
                );
            }
        }
    }

    let active = entry.thetas.active_members(m.size);
    for member in active {
        // theta |- psi
        let restrict = Sequent::new(
            theta_ctx.clone(),
            member.formula.clone(),
            entry.formula.clone(),
        );
        if let SequentVerdict::Fails { assignment } = holds_sequent(m, &restrict)? {
            report.push(
                Finding::new(
                    Verdict::Fail,
                    format!("ucoord:{psi}:{}:restrict", member.label),
                    "theta holds of a companion outside psi",
                )
                .with_model(m)
                .with_assignment(assignment),
            );
        }
        // theta(xs,y) /\ theta(xs,y') |- y = y'
        let mut avoid: BTreeSet<String> = theta_ctx.iter().cloned().collect();
        avoid.extend(member.formula.free_vars());
        let y2 = fresh_var(&y, &avoid);
        let renamed = member
            .formula
            .substitute(&BTreeMap::from([(y.clone(), Term::var(y2.clone()))]));
        let mut fun_ctx = theta_ctx.clone();
        fun_ctx.push(y2.clone());
        let functional = Sequent::new(
            fun_ctx,
            Formula::and(vec![member.formula.clone(), renamed]),
            Formula::eq(Term::var(y.clone()), Term::var(y2)),
        );
        if let SequentVerdict::Fails { assignment } = holds_sequent(m, &functional)? {
            report.push(
                Finding::new(
                    Verdict::Fail,
                    format!("ucoord:{psi}:{}:functional", member.label),
                    "theta relates one witness tuple to two distinct companions",
                )
                .with_model(m)
                .with_assignment(assignment),
            );
        }
    }
    // psi(xs) /\ (y=y) |- \/ theta
    let cover = Sequent::new(
        theta_ctx,
        Formula::and(vec![
            entry.formula.clone(),
            Formula::eq(Term::var(y.clone()), Term::var(y.clone())),
        ]),
        Formula::or(active.iter().map(|t| t.formula.clone()).collect()),
    );
    if let SequentVerdict::Fails { assignment } = holds_sequent(m, &cover)? {
        report.push(
            Finding::new(
                Verdict::Fail,
                format!("ucoord:{psi}:cover"),
                "an element is no theta-companion of this witness tuple",
            )
            .with_model(m)
            .with_assignment(assignment),
        );
    }
    Ok(())
}

/// Checks uniform rigidity: for every model up to `max_size` and every
/// tagged witness tuple, the only automorphism fixing the tuple pointwise
/// is the identity.
pub fn check_urigid(
    theory: &Theory,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<CheckReport, CheckError> {
    let session = Session::new(theory, Limits::default())?;
    check_urigid_in(&session, scheme, max_size)
}

pub fn check_urigid_in(
    session: &Session,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<CheckReport, CheckError> {
    session.validate_scheme(scheme)?;
    let mut report = CheckReport::new("urigid");
    report.stats.max_size = max_size;
    for models in session.models_up_to(max_size)? {
        for m in models.iter() {
            report.stats.models_checked += 1;
            let tagged = psi_elements(m, scheme)?;
            for witness in &tagged.tuples {
                let pins: BTreeMap<usize, usize> =
                    witness.tuple.iter().map(|&e| (e, e)).collect();
                let stabilizer = automorphisms(m, &pins);
                if let Some(alpha) = stabilizer.iter().find(|a| !a.is_identity()) {
                    let entry = scheme.entry(&witness.tag).expect("validated scheme");
                    let assignment: Assignment = entry
                        .context
                        .iter()
                        .cloned()
                        .zip(witness.tuple.iter().copied())
                        .collect();
                    report.push(
                        Finding::new(
                            Verdict::Fail,
                            format!("urigid:{}", witness.tag),
                            format!(
                                "non-identity automorphism {:?} fixes the witness tuple pointwise",
                                alpha.map
                            ),
                        )
                        .with_model(m)
                        .with_assignment(assignment),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// How one element was certified to lie in the definable closure of the
/// witness tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DclEvidence {
    /// Every automorphism fixing the listed witness tuples pointwise fixes
    /// the element (the Galois proxy for definable closure).
    StabilizerFixed,
    /// The element is the unique companion of a witness tuple under one
    /// theta formula; the formula itself pins it down.
    ExplicitFormula { psi: String, theta: String, witness: TaggedTuple },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DclEntry {
    pub element: usize,
    /// The witness tuples the evidence is relative to.
    pub witnesses: Vec<TaggedTuple>,
    pub evidence: DclEvidence,
}

/// A per-model certificate that every element is in the definable closure
/// of the scheme's witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DclCertificate {
    pub model: FiniteStructure,
    pub entries: Vec<DclEntry>,
}

/// Checks co-ordinatisation via definable closure: every element of every
/// model is pinned down by the witness tuples, either as the unique
/// companion of some theta, or through the automorphism stabilizer proxy
/// (exact for Morleyized finite structures; documented as a proxy
/// otherwise).
pub fn check_coord(
    theory: &Theory,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<(CheckReport, Vec<DclCertificate>), CheckError> {
    let session = Session::new(theory, Limits::default())?;
    check_coord_in(&session, scheme, max_size)
}

pub fn check_coord_in(
    session: &Session,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<(CheckReport, Vec<DclCertificate>), CheckError> {
    session.validate_scheme(scheme)?;
    let mut report = CheckReport::new("coord");
    report.stats.max_size = max_size;
    let mut certificates = Vec::new();
    for models in session.models_up_to(max_size)? {
        for m in models.iter() {
            report.stats.models_checked += 1;
            let tagged = psi_elements(m, scheme)?;
            let fixed = tagged.all_elements();
            let pins: BTreeMap<usize, usize> = fixed.iter().map(|&e| (e, e)).collect();
            let stabilizer = automorphisms(m, &pins);
            let mut entries = Vec::new();
            for element in 0..m.size {
                if let Some(evidence) = explicit_evidence(m, scheme, &tagged, element)? {
                    entries.push(DclEntry {
                        element,
                        witnesses: tagged.tuples.clone(),
                        evidence,
                    });
                    continue;
                }
                if stabilizer.iter().all(|a| a.map[element] == element) {
                    entries.push(DclEntry {
                        element,
                        witnesses: tagged.tuples.clone(),
                        evidence: DclEvidence::StabilizerFixed,
                    });
                } else {
                    let alpha = stabilizer.iter().find(|a| a.map[element] != element).unwrap();
                    report.push(
                        Finding::new(
                            Verdict::Fail,
                            format!("coord:element-{element}"),
                            format!(
                                "automorphism {:?} fixes every witness tuple but moves element {element}",
                                alpha.map
                            ),
                        )
                        .with_model(m),
                    );
                }
            }
            certificates.push(DclCertificate { model: m.clone(), entries });
        }
    }
    Ok((report, certificates))
}

/// Looks for a theta formula making `element` the unique companion of some
/// witness tuple.
fn explicit_evidence(
    m: &FiniteStructure,
    scheme: &WitnessScheme,
    tagged: &TaggedTupleSet,
    element: usize,
) -> Result<Option<DclEvidence>, CheckError> {
    for witness in &tagged.tuples {
        let entry = scheme.entry(&witness.tag).expect("validated scheme");
        for member in entry.thetas.active_members(m.size) {
            let mut assignment: Assignment = entry
                .context
                .iter()
                .cloned()
                .zip(witness.tuple.iter().copied())
                .collect();
            assignment.insert(entry.companion_var.clone(), element);
            if !eval(m, &member.formula, &assignment)? {
                continue;
            }
            let mut unique = true;
            for other in 0..m.size {
                if other == element {
                    continue;
                }
                assignment.insert(entry.companion_var.clone(), other);
                if eval(m, &member.formula, &assignment)? {
                    unique = false;
                    break;
                }
            }
            if unique {
                return Ok(Some(DclEvidence::ExplicitFormula {
                    psi: witness.tag.clone(),
                    theta: member.label.clone(),
                    witness: witness.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// Checks the cardinality bound: every model has at most
/// `K = max over psi of |Theta_psi|` elements.  Empty theta families are
/// pruned with a warning (such a psi is inconsistent with the theory);
/// size-indexed families make the bound inconclusive since no finite K
/// exists a priori.
pub fn check_cardinality_bound(
    theory: &Theory,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<CheckReport, CheckError> {
    let session = Session::new(theory, Limits::default())?;
    check_cardinality_bound_in(&session, scheme, max_size)
}

pub fn check_cardinality_bound_in(
    session: &Session,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<CheckReport, CheckError> {
    session.validate_scheme(scheme)?;
    let mut report = CheckReport::new("bound");
    report.stats.max_size = max_size;
    let mut k: Option<usize> = None;
    for entry in &scheme.entries {
        if entry.thetas.is_size_indexed() {
            report.push(Finding::new(
                Verdict::Inconclusive,
                format!("bound:{}", entry.tag),
                "theta family is size-indexed, so no finite cardinality bound exists a priori",
            ));
            continue;
        }
        if entry.thetas.members.is_empty() {
            report.push(Finding::new(
                Verdict::Pass,
                format!("bound:{}", entry.tag),
                "theta family is empty: this psi is inconsistent with the theory and is \
                 pruned from the bound",
            ));
            continue;
        }
        let size = entry.thetas.members.len();
        k = Some(k.map_or(size, |prev| prev.max(size)));
    }
    let Some(k) = k else {
        if report.verdict == Verdict::Pass {
            report.push(Finding::new(
                Verdict::Inconclusive,
                "bound",
                "no psi with a non-empty finite theta family; no bound to check",
            ));
        }
        return Ok(report);
    };
    for models in session.models_up_to(max_size)? {
        for m in models.iter() {
            report.stats.models_checked += 1;
            if m.size > k {
                report.push(
                    Finding::new(
                        Verdict::Fail,
                        "bound",
                        format!("model of size {} exceeds the bound K = {k}", m.size),
                    )
                    .with_model(m),
                );
            }
        }
    }
    Ok(report)
}

/// First satisfying assignment of `f` over the given context, if any.
fn satisfiable(
    m: &FiniteStructure,
    f: &Formula,
    ctx: &[String],
) -> Result<Option<Assignment>, CheckError> {
    for tuple in tuples_of(m.size, ctx.len()) {
        let assignment: Assignment = ctx.iter().cloned().zip(tuple.iter().copied()).collect();
        if eval(m, f, &assignment)? {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}
