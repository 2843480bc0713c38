use crate::logic::{Theory, WitnessScheme};
use crate::model::Limits;

use super::checkers::{check_ucoord_in, check_urigid_in};
use super::report::{CheckError, CheckReport, Finding, Verdict};
use super::session::Session;

/// Audits the implication "uniformly co-ordinatised implies uniformly
/// rigid" on one theory and scheme: runs the co-ordinatisation check, then
/// the rigidity check, and fails only in the impossible configuration where
/// the first passes while the second fails — which would contradict the
/// implication and indicates a bug in one of the checkers (or an unsound
/// family bound).  A failing or inconclusive premise makes the audit pass
/// vacuously or stay inconclusive, respectively.
pub fn implication_audit(
    theory: &Theory,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<CheckReport, CheckError> {
    let session = Session::new(theory, Limits::default())?;
    implication_audit_in(&session, scheme, max_size)
}

pub fn implication_audit_in(
    session: &Session,
    scheme: &WitnessScheme,
    max_size: usize,
) -> Result<CheckReport, CheckError> {
    let ucoord = check_ucoord_in(session, scheme, max_size)?;
    let urigid = check_urigid_in(session, scheme, max_size)?;
    let mut report = CheckReport::new("audit");
    report.stats = ucoord.stats.clone();
    let verdict = match (ucoord.verdict, urigid.verdict) {
        (Verdict::Pass, Verdict::Fail) => Verdict::Fail,
        (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
        _ => Verdict::Pass,
    };
    report.push(Finding::new(
        verdict,
        "audit:coord-implies-rigid",
        format!("ucoord: {}, urigid: {}", ucoord.verdict, urigid.verdict),
    ));
    if verdict == Verdict::Fail {
        for finding in urigid.findings {
            report.push(finding);
        }
    }
    Ok(report)
}
