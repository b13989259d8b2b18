use std::fmt::{self, Write as _};

use super::LReductionReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub field: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(field: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// `PASS <field>` / `FAIL <field> <detail>` lines followed by a
/// `key=value` block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub values: Vec<(String, String)>,
}

impl VerifyReport {
    /// Repeated fields are merged: the first failure wins.
    pub fn push(&mut self, check: Check) {
        match self.checks.iter_mut().find(|c| c.field == check.field) {
            Some(existing) if existing.passed && !check.passed => *existing = check,
            Some(_) => {}
            None => self.checks.push(check),
        }
    }

    pub fn set(&mut self, key: &str, value: impl fmt::Display) {
        let value = value.to_string();
        match self.values.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.values.push((key.to_string(), value)),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn absorb_identity(&mut self, identity: &LReductionReport) {
        self.push(Check::new(
            "identity",
            identity.identity_ok,
            format!(
                "w*={} 12n+z*={}",
                identity.w_star,
                12 * identity.n + identity.z_star
            ),
        ));
        self.push(Check::new(
            "alpha",
            identity.alpha_ok,
            format!("w*={} 97z*={}", identity.w_star, 97 * identity.z_star),
        ));
        self.push(Check::new(
            "lower_bound",
            identity.lower_ok,
            format!("z*={} m={}", identity.z_star, identity.m),
        ));
        self.push(Check::new(
            "size",
            identity.size_ok,
            format!("n={} m={}", identity.n, identity.m),
        ));
        self.push(Check::new(
            "engines",
            identity.engines_agree,
            format!("bb={} enum={:?}", identity.w_star, identity.w_enum),
        ));
        for record in &identity.beta {
            let detail = format!(
                "origin={} w={} z={}",
                record.origin.as_str(),
                record.w,
                record.z
            );
            self.push(Check::new(
                "constructive",
                record.constructive_ok,
                detail.clone(),
            ));
            self.push(Check::new("beta", record.beta_ok, detail));
        }
        self.set("z*", identity.z_star);
        self.set("w*", identity.w_star);
        self.set("cliques_checked", identity.beta.len());
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            if check.passed {
                let _ = writeln!(out, "PASS {}", check.field);
            } else {
                let _ = writeln!(out, "FAIL {} {}", check.field, check.detail);
            }
        }
        out.push_str(&self.key_values());
        out
    }

    pub fn key_values(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            let _ = writeln!(out, "{k}={v}");
        }
        let _ = writeln!(
            out,
            "status={}",
            if self.passed() { "pass" } else { "fail" }
        );
        out
    }
}
