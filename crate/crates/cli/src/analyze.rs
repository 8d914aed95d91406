//! Single-state analysis: the full uncertainty report as an aligned text
//! table, with both strengthening variants side by side.

use quncert::infotheory::{uncertainty_report, DeltaVariant, UncertaintyReport};
use quncert::states::{bell_diagonal_state, mub_qubit, StateParams};

use crate::CliError;

pub struct Analysis {
    pub consistent: UncertaintyReport,
    pub as_printed: UncertaintyReport,
}

pub fn analyze(p: f64, theta_deg: f64) -> Result<Analysis, CliError> {
    let params = StateParams::new(p, theta_deg)
        .map_err(|e| CliError::Usage(format!("invalid parameters: {e}")))?;
    let rho = bell_diagonal_state(params)
        .map_err(|e| CliError::Usage(format!("state construction failed: {e}")))?;
    let mubs = mub_qubit();
    let consistent = uncertainty_report(&rho, &mubs, DeltaVariant::Consistent)
        .map_err(|e| CliError::Usage(format!("report failed: {e}")))?;
    let as_printed = uncertainty_report(&rho, &mubs, DeltaVariant::AsPrinted)
        .map_err(|e| CliError::Usage(format!("report failed: {e}")))?;
    Ok(Analysis {
        consistent,
        as_printed,
    })
}

pub fn format_analysis(p: f64, theta_deg: f64, analysis: &Analysis) -> String {
    let c = &analysis.consistent;
    let a = &analysis.as_printed;
    let mut out = String::new();
    out.push_str(&format!(
        "state rho(p = {p:.4}, theta = {theta_deg:.2} deg)  [measurements: x, y, z MUBs]\n\n"
    ));
    out.push_str(&format!(
        "  S(AB) = {:>9.6}   S(A) = {:>9.6}   S(B) = {:>9.6}\n",
        c.s_ab, c.s_a, c.s_b
    ));
    out.push_str(&format!(
        "  S(A|B) = {:>8.6}   I(A:B) = {:>8.6}   log2(1/b) = {:>8.6}\n\n",
        c.s_a_given_b, c.i_ab, c.log_overlap
    ));
    out.push_str("  per measurement        S(M|B)    coherence   Holevo\n");
    for (i, label) in ["x", "y", "z"].iter().enumerate() {
        out.push_str(&format!(
            "    M_{label}              {:>9.6}   {:>9.6}   {:>9.6}\n",
            c.per_measurement_conditional_entropy[i],
            c.per_measurement_coherence[i],
            c.holevo[i]
        ));
    }
    out.push('\n');
    out.push_str("                        consistent     as_printed\n");
    out.push_str(&format!(
        "  delta               {:>12.6}   {:>12.6}\n",
        c.delta, a.delta
    ));
    out.push_str(&format!(
        "  EUR   ELHS  = {:>9.6}   ERHS1 = {:>9.6}\n",
        c.elhs, c.erhs1
    ));
    out.push_str(&format!(
        "        ERHS2       {:>12.6}   {:>12.6}\n",
        c.erhs2, a.erhs2
    ));
    out.push_str(&format!(
        "  CUR   CLHS  = {:>9.6}   CRHS1 = {:>9.6}\n",
        c.clhs, c.crhs1
    ));
    out.push_str(&format!(
        "        CRHS2       {:>12.6}   {:>12.6}\n",
        c.crhs2, a.crhs2
    ));
    if a.is_violated(1e-9) {
        out.push_str(&format!(
            "\n  note: as_printed bound exceeds the measured value by {:.6} \
             (variant inconsistency)\n",
            a.violation_margin()
        ));
    }
    out
}

/// One-row CSV in the analytic sweep schema, for scripting.
pub fn analysis_csv(p: f64, theta_deg: f64, analysis: &Analysis) -> String {
    let c = &analysis.consistent;
    let mut out = format!("# schema: {}\n", crate::sweep::SWEEP_SCHEMA);
    out.push_str(
        "theta_deg,p,elhs,erhs1,erhs2,clhs,crhs1,crhs2,s_ab,s_b,s_a_given_b,i_ab,delta\n",
    );
    out.push_str(&format!(
        "{theta_deg:.16e},{p:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
        c.elhs, c.erhs1, c.erhs2, c.clhs, c.crhs1, c.crhs2, c.s_ab, c.s_b, c.s_a_given_b,
        c.i_ab, c.delta
    ));
    out
}
