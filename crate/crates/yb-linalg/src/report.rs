use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Serialize, Serializer};
use serde_json::Value;

/// Outcome of a typo-variant search: residual per variant and the winner.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VariantChoice {
    pub selected: String,
    #[serde(serialize_with = "finite_map")]
    pub residuals: BTreeMap<String, f64>,
}

impl VariantChoice {
    /// Pick the variant with the smallest residual. Ties keep the first.
    pub fn select(residuals: Vec<(String, f64)>) -> Self {
        let selected = residuals
            .iter()
            .fold(None::<&(String, f64)>, |best, cur| match best {
                Some(b) if !(cur.1 < b.1) => Some(b),
                _ => Some(cur),
            })
            .map(|(n, _)| n.clone())
            .unwrap_or_default();
        Self { selected, residuals: residuals.into_iter().collect() }
    }

    pub fn selected_residual(&self) -> f64 {
        self.residuals.get(&self.selected).copied().unwrap_or(f64::INFINITY)
    }

    /// Smallest residual among the variants that were not selected.
    pub fn min_rejected(&self) -> f64 {
        self.residuals
            .iter()
            .filter(|(k, _)| **k != self.selected)
            .map(|(_, &v)| v)
            .fold(f64::INFINITY, f64::min)
    }
}

/// The unit every suite produces. `passed` is derived from the residuals,
/// never set directly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub parameters: BTreeMap<String, Value>,
    #[serde(serialize_with = "finite_map")]
    pub residuals: BTreeMap<String, f64>,
    #[serde(serialize_with = "finite")]
    pub tolerance: f64,
    #[serde(serialize_with = "finite_map")]
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub passed: bool,
    pub runtime_ms: u64,
    pub variant_choices: BTreeMap<String, VariantChoice>,
    /// Informational values that do not gate `passed`.
    #[serde(serialize_with = "finite_map")]
    pub diagnostics: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>, tolerance: f64) -> Self {
        Self {
            suite: suite.into(),
            parameters: BTreeMap::new(),
            residuals: BTreeMap::new(),
            tolerance,
            tolerance_overrides: BTreeMap::new(),
            passed: true,
            runtime_ms: 0,
            variant_choices: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    /// Record a residual; repeated names keep the maximum.
    pub fn residual(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        let v = if value.is_nan() { f64::INFINITY } else { value };
        let e = self.residuals.entry(name.into()).or_insert(0.0);
        *e = e.max(v);
        self.refresh();
        self
    }

    /// Record a residual checked against its own tolerance.
    pub fn residual_with_tol(&mut self, name: impl Into<String>, value: f64, tol: f64) -> &mut Self {
        let name = name.into();
        self.tolerance_overrides.entry(name.clone()).or_insert(tol);
        self.residual(name, value)
    }

    /// Record a boolean condition as a 0/1 residual against tolerance 0.5.
    pub fn condition(&mut self, name: impl Into<String>, holds: bool) -> &mut Self {
        self.residual_with_tol(name, if holds { 0.0 } else { 1.0 }, 0.5)
    }

    pub fn param(&mut self, name: impl Into<String>, v: impl Into<Value>) -> &mut Self {
        self.parameters.insert(name.into(), v.into());
        self
    }

    pub fn diagnostic(&mut self, name: impl Into<String>, v: f64) -> &mut Self {
        self.diagnostics.insert(name.into(), v);
        self
    }

    pub fn variant(&mut self, flag: impl Into<String>, choice: VariantChoice) -> &mut Self {
        self.variant_choices.insert(flag.into(), choice);
        self
    }

    pub fn tolerance_for(&self, name: &str) -> f64 {
        self.tolerance_overrides.get(name).copied().unwrap_or(self.tolerance)
    }

    /// Replace every tolerance, including per-name overrides.
    pub fn force_tolerance(&mut self, tol: f64) {
        self.tolerance = tol;
        for v in self.tolerance_overrides.values_mut() {
            *v = tol;
        }
        self.refresh();
    }

    pub fn set_override(&mut self, name: impl Into<String>, tol: f64) {
        self.tolerance_overrides.insert(name.into(), tol);
        self.refresh();
    }

    /// Names of residuals at or above their tolerance.
    pub fn failures(&self) -> Vec<&str> {
        self.residuals
            .iter()
            .filter(|(k, &v)| !(v < self.tolerance_for(k)))
            .map(|(k, _)| k.as_str())
            .collect()
    }

    fn refresh(&mut self) {
        self.passed = self.failures().is_empty();
    }

    /// Fold another report in, prefixing its names with `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        let key = |k: &str| format!("{prefix}/{k}");
        for (k, v) in &other.residuals {
            let tol = other.tolerance_for(k);
            self.tolerance_overrides.insert(key(k), tol);
            self.residuals.insert(key(k), *v);
        }
        for (k, v) in other.parameters {
            self.parameters.insert(key(&k), v);
        }
        for (k, v) in other.variant_choices {
            self.variant_choices.insert(key(&k), v);
        }
        for (k, v) in other.diagnostics {
            self.diagnostics.insert(key(&k), v);
        }
        self.runtime_ms += other.runtime_ms;
        self.refresh();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialisation")
    }
}

/// `[re, im]` as a JSON array.
pub fn c64_json(z: C64) -> Value {
    serde_json::json!([finite_value(z.re), finite_value(z.im)])
}

fn finite_value(x: f64) -> Value {
    if x.is_finite() {
        serde_json::json!(if x == 0.0 { 0.0 } else { x })
    } else {
        Value::String(x.to_string())
    }
}

fn finite<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    finite_value(*x).serialize(s)
}

fn finite_map<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
    let v: BTreeMap<&String, Value> = m.iter().map(|(k, &x)| (k, finite_value(x))).collect();
    v.serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_tracks_residuals() {
        let mut r = CheckReport::new("t", 1e-8);
        r.residual("a", 1e-12);
        assert!(r.passed);
        r.residual("b", 1e-3);
        assert!(!r.passed);
        r.set_override("b", 1e-2);
        assert!(r.passed);
        r.force_tolerance(0.0);
        assert!(!r.passed);
        assert_eq!(r.failures(), vec!["a", "b"]);
    }

    #[test]
    fn repeated_residual_keeps_max() {
        let mut r = CheckReport::new("t", 1.0);
        r.residual("a", 0.3).residual("a", 0.1);
        assert_eq!(r.residuals["a"], 0.3);
    }

    #[test]
    fn non_finite_serialises_as_string() {
        let mut r = CheckReport::new("t", 1.0);
        r.residual("a", f64::NAN);
        let j = r.to_json();
        assert!(j.contains("\"inf\""), "{j}");
        assert!(!r.passed);
    }

    #[test]
    fn variant_selection() {
        let v = VariantChoice::select(vec![("x".into(), 0.5), ("y".into(), 1e-15), ("z".into(), 2.0)]);
        assert_eq!(v.selected, "y");
        assert_eq!(v.min_rejected(), 0.5);
    }

    #[test]
    fn absorb_prefixes() {
        let mut a = CheckReport::new("all", 1.0);
        let mut b = CheckReport::new("qybe", 1e-9);
        b.residual("elliptic", 1e-12);
        a.absorb("qybe", b);
        assert_eq!(a.tolerance_for("qybe/elliptic"), 1e-9);
        assert!(a.passed);
    }
}
