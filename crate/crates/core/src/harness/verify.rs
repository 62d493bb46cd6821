use std::fmt;

use serde::Serialize;

use super::run::resolve_lambda_c;
use super::scenario::{Partition, Scenario};
use crate::model::{bogoliubov_transform, thermal_contractions};
use crate::symplectic::{
    entanglement_entropy, log_negativity, partial_transpose_spectrum,
    pure_bipartition_log_negativity, pure_state_reduced_spectrum, symplectic_eigenvalues,
    ContractionMatrix, LogBase, Tolerances,
};
use crate::Result;

pub const BOGOLIUBOV_TOL: f64 = 1e-9;
pub const PURITY_TOL: f64 = 1e-9;
pub const ENTROPY_SYMMETRY_TOL: f64 = 1e-8;
pub const NEGATIVITY_IDENTITY_TOL: f64 = 1e-9;
pub const PT_FLOOR_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// NaN when the check could not be evaluated
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn value(name: String, residual: f64, tol: f64) -> Self {
        Check {
            name,
            residual,
            tol,
            passed: residual <= tol,
            detail: None,
        }
    }

    fn failed(name: String, e: &crate::Error) -> Self {
        Check {
            name,
            residual: f64::NAN,
            tol: 0.0,
            passed: false,
            detail: Some(e.to_string()),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} residual={:e} tol={:e}",
            self.name, self.residual, self.tol
        )?;
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Invariant residuals of the ground state at every sweep point. Errors
/// become failed checks.
pub fn verify(scenario: &Scenario) -> VerifyReport {
    let mut report = VerifyReport::default();
    let prep = match scenario.prepare() {
        Ok(p) => p,
        Err(e) => {
            report.checks.push(Check::failed("construction".into(), &e));
            return report;
        }
    };
    let lc = match resolve_lambda_c(scenario, &prep.template) {
        Ok(l) => l.value,
        Err(e) => {
            report
                .checks
                .push(Check::failed("critical point".into(), &e));
            return report;
        }
    };
    for &ratio in &scenario.sweep {
        let tag = format!("lambda/lc={ratio}");
        let lambda = ratio * lc;
        let t = match prep
            .template
            .hamiltonian(lambda)
            .and_then(|h| bogoliubov_transform(&h))
        {
            Ok(t) => t,
            Err(e) => {
                report
                    .checks
                    .push(Check::failed(format!("{tag} ground state"), &e));
                continue;
            }
        };
        let (r1, r2) = t.symplectic_residuals();
        report.checks.push(Check::value(
            format!("{tag} bogoliubov normalization"),
            r1,
            BOGOLIUBOV_TOL,
        ));
        report.checks.push(Check::value(
            format!("{tag} bogoliubov symmetry"),
            r2,
            BOGOLIUBOV_TOL,
        ));
        let d = thermal_contractions(&t, f64::INFINITY);
        report.checks.push(Check::value(
            format!("{tag} purity"),
            d.purity_residual(),
            PURITY_TOL,
        ));
        for p in &prep.partitions {
            let name = format!("{tag} {}", p.id());
            if let Err(e) = partition_checks(&d, p, &name, &mut report.checks) {
                report.checks.push(Check::failed(name, &e));
            }
        }
    }
    report
}

fn partition_checks(
    d: &ContractionMatrix,
    p: &Partition,
    name: &str,
    out: &mut Vec<Check>,
) -> Result<()> {
    let tol = Tolerances::default();
    let base = LogBase::Two;
    match p {
        Partition::Region { region, .. } => {
            let comp = region.complement();
            let sa = symplectic_eigenvalues(&d.restrict(region.sites())?)?;
            let sb = symplectic_eigenvalues(&d.restrict(comp.sites())?)?;
            let ea = entanglement_entropy(&sa, base)?.value;
            let eb = entanglement_entropy(&sb, base)?.value;
            out.push(Check::value(
                format!("{name} entropy symmetry"),
                (ea - eb).abs(),
                ENTROPY_SYMMETRY_TOL,
            ));
            let pt = partial_transpose_spectrum(d, region.sites(), comp.sites(), &tol)?;
            let n_pt = log_negativity(&pt, base)?.value;
            let pure = pure_state_reduced_spectrum(d, region.sites(), &tol)?;
            let n_pure = pure_bipartition_log_negativity(&pure, base)?.value;
            out.push(Check::value(
                format!("{name} negativity identity"),
                (n_pt - n_pure).abs(),
                NEGATIVITY_IDENTITY_TOL,
            ));
        }
        Partition::Pair { b, c, .. } => {
            let pt = partial_transpose_spectrum(d, b.sites(), c.sites(), &tol)?;
            // values below the floor by more than the tolerance are rejected above
            let min = pt.min().unwrap_or(0.0);
            out.push(Check::value(
                format!("{name} pt floor"),
                (-0.5 - min).max(0.0),
                PT_FLOOR_TOL,
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(model: &str, lambda_c: &str, sweep: &str) -> Scenario {
        Scenario::from_json(&format!(
            r#"{{"id": "v", "model": {model}, "lambda_c": {lambda_c}, "sweep": {sweep}, "methods": ["exact"],
                "partitions": [
                    {{"id": "a", "region": {{"kind": "range", "start": 0, "len": 2}}}},
                    {{"id": "p", "pair": {{"kind": "regions", "b": {{"kind": "range", "start": 0, "len": 1}},
                                                          "c": {{"kind": "range", "start": 1, "len": 1}}}}}}
                ]}}"#
        ))
        .unwrap()
    }

    #[test]
    fn vacuum_has_zero_residuals() {
        let s = scenario(
            r#"{"kind": "explicit", "delta_plus": [[0,0,0],[0,0,0],[0,0,0]], "delta_minus": [[0,0,0],[0,0,0],[0,0,0]]}"#,
            r#"{"fixed": 1.0}"#,
            "[2.0]",
        );
        let r = verify(&s);
        assert!(r.passed());
        assert!(r.checks.iter().all(|c| c.residual == 0.0), "{:?}", r.checks);
    }

    #[test]
    fn lattice_residuals_small() {
        let s = scenario(
            r#"{"kind": "lattice", "nx": 8, "ny": 8, "couplings": {"delta_plus": 1.0, "ratio": 0.6666666666666666}}"#,
            r#""estimate""#,
            "[2.0]",
        );
        let r = verify(&s);
        assert!(r.passed(), "{:?}", r.checks);
        assert!(r.checks.len() >= 6);
    }

    #[test]
    fn asymmetric_input_fails_construction() {
        let s = scenario(
            r#"{"kind": "explicit", "delta_plus": [[0,0],[0,0]], "delta_minus": [[0,0.1],[0.2,0]]}"#,
            r#"{"fixed": 1.0}"#,
            "[2.0]",
        );
        let r = verify(&s);
        assert!(!r.passed());
        let d = r.checks.iter().find_map(|c| c.detail.clone()).unwrap();
        assert!(d.contains("symmetr"), "{d}");
    }
}
