//! Verification reports and the aggregate text / JSON-lines formats.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real or complex number as it appears in a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Value {
    #[serde(with = "lenient_f64")]
    pub re: f64,
    #[serde(with = "lenient_f64", default, skip_serializing_if = "is_zero")]
    pub im: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

impl Value {
    pub fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl From<f64> for Value {
    fn from(re: f64) -> Self {
        Self::real(re)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Everything needed to rerun a check.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub params: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "lenient_opt")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "lenient_opt")]
    pub std_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "lenient_opt")]
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub target: Value,
    pub estimate: Value,
    #[serde(with = "lenient_f64")]
    pub abs_err: f64,
    #[serde(with = "lenient_f64")]
    pub rel_err: f64,
    #[serde(with = "lenient_f64")]
    pub tolerance: f64,
    pub passed: bool,
    pub meta: ReportMeta,
}

impl VerificationReport {
    /// Report whose verdict is decided by the caller's own comparison rule.
    pub fn with_verdict(
        check_name: impl Into<String>,
        target: impl Into<Value>,
        estimate: impl Into<Value>,
        tolerance: f64,
        passed: bool,
    ) -> Self {
        let target = target.into();
        let estimate = estimate.into();
        let abs_err = Value {
            re: estimate.re - target.re,
            im: estimate.im - target.im,
        }
        .abs();
        let scale = target.abs();
        let rel_err = if scale > 0.0 {
            abs_err / scale
        } else {
            abs_err
        };
        Self {
            check_name: check_name.into(),
            target,
            estimate,
            abs_err,
            rel_err,
            tolerance,
            passed,
            meta: ReportMeta::default(),
        }
    }

    /// Passes iff the relative error is at most `tolerance`.
    pub fn relative(
        check_name: impl Into<String>,
        target: impl Into<Value>,
        estimate: impl Into<Value>,
        tolerance: f64,
    ) -> Self {
        let mut report = Self::with_verdict(check_name, target, estimate, tolerance, false);
        report.passed = report.rel_err <= tolerance;
        report
    }

    /// Passes iff the absolute error is at most `tolerance`.
    pub fn absolute(
        check_name: impl Into<String>,
        target: impl Into<Value>,
        estimate: impl Into<Value>,
        tolerance: f64,
    ) -> Self {
        let mut report = Self::with_verdict(check_name, target, estimate, tolerance, false);
        report.passed = report.abs_err <= tolerance;
        report
    }

    pub fn params(mut self, params: impl Into<String>) -> Self {
        self.meta.params = params.into();
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.meta.seed = Some(seed);
        self
    }

    pub fn samples(mut self, samples: u64) -> Self {
        self.meta.samples = Some(samples);
        self
    }

    pub fn step(mut self, step: f64) -> Self {
        self.meta.step = Some(step);
        self
    }

    pub fn std_error(mut self, se: f64) -> Self {
        self.meta.std_error = Some(se);
        self
    }

    pub fn runtime_ms(mut self, ms: f64) -> Self {
        self.meta.runtime_ms = Some(ms);
        self
    }

    /// Copy with timing removed; two runs with the same meta compare equal.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.meta.runtime_ms = None;
        r
    }

    /// One `key = value` block.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[check]");
        let _ = writeln!(out, "name = {}", self.check_name);
        if !self.meta.params.is_empty() {
            let _ = writeln!(out, "params = {}", self.meta.params);
        }
        let _ = writeln!(out, "target = {}", self.target);
        let _ = writeln!(out, "estimate = {}", self.estimate);
        let _ = writeln!(out, "abs_err = {:e}", self.abs_err);
        let _ = writeln!(out, "rel_err = {:e}", self.rel_err);
        let _ = writeln!(out, "tolerance = {:e}", self.tolerance);
        if let Some(se) = self.meta.std_error {
            let _ = writeln!(out, "std_error = {se:e}");
        }
        if let Some(seed) = self.meta.seed {
            let _ = writeln!(out, "seed = {seed}");
        }
        if let Some(n) = self.meta.samples {
            let _ = writeln!(out, "samples = {n}");
        }
        if let Some(h) = self.meta.step {
            let _ = writeln!(out, "step = {h}");
        }
        if let Some(ms) = self.meta.runtime_ms {
            let _ = writeln!(out, "runtime_ms = {ms:.3}");
        }
        let _ = writeln!(out, "passed = {}", self.passed);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report fields are serializable")
    }
}

/// Outcome of a batch of checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AggregateReport {
    pub reports: Vec<VerificationReport>,
}

impl AggregateReport {
    pub fn new(reports: Vec<VerificationReport>) -> Self {
        Self { reports }
    }

    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.reports.iter().filter(|r| !r.passed)
    }

    pub fn without_timing(&self) -> Self {
        Self::new(self.reports.iter().map(|r| r.without_timing()).collect())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.to_text());
            out.push('\n');
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "# summary: {} checks, {} passed, {} failed",
            self.reports.len(),
            self.reports.len() - failed,
            failed
        );
        out
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.to_json());
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let reports = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, line)| {
                serde_json::from_str(line)
                    .map_err(|e| Error::Parse(format!("report line {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { reports })
    }
}

/// Non-finite floats as strings so that JSON round-trips them.
mod lenient_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

mod lenient_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::lenient_f64::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    struct Wrap(#[serde(with = "super::lenient_f64")] f64);

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn relative_rule() {
        let r = VerificationReport::relative("x", 2.0, 2.01, 1e-2);
        assert!(r.passed);
        assert!((r.rel_err - 0.005).abs() < 1e-12);
        let r = VerificationReport::relative("x", 2.0, 2.1, 1e-2);
        assert!(!r.passed);
    }

    #[test]
    fn text_format_has_one_block_per_check() {
        let agg = AggregateReport::new(vec![
            VerificationReport::absolute("a", 0.0, 1e-9, 1e-8).params("n=0"),
            VerificationReport::absolute("b", 1.0, 3.0, 1e-8).seed(7),
        ]);
        let text = agg.to_text();
        assert_eq!(text.matches("[check]").count(), 2);
        assert!(text.contains("params = n=0"));
        assert!(text.contains("seed = 7"));
        assert!(text.contains("1 passed, 1 failed"));
    }

    #[test]
    fn non_finite_values_round_trip() {
        let r = VerificationReport::relative("inf", f64::INFINITY, f64::NAN, 1.0)
            .std_error(f64::NEG_INFINITY);
        let back =
            AggregateReport::from_jsonl(&AggregateReport::new(vec![r.clone()]).to_jsonl()).unwrap();
        let b = &back.reports[0];
        assert!(b.target.re.is_infinite() && b.estimate.re.is_nan());
        assert_eq!(b.meta.std_error, Some(f64::NEG_INFINITY));
    }

    #[test]
    fn malformed_jsonl_is_a_parse_error() {
        assert!(matches!(
            AggregateReport::from_jsonl("{not json"),
            Err(Error::Parse(_))
        ));
    }

    proptest! {
        #[test]
        fn machine_format_round_trips_exactly(
            t in any::<f64>().prop_filter("finite", |v| v.is_finite()),
            ti in -1e3f64..1e3,
            e in -1e300f64..1e300,
            tol in 0.0f64..1.0,
            seed in any::<u64>(),
            samples in any::<u64>(),
            step in proptest::option::of(1e-9f64..1.0),
            name in "[a-z_]{1,12}",
            params in "[ -~]{0,40}",
        ) {
            let r = VerificationReport::relative(name, Value { re: t, im: ti }, e, tol)
                .params(params)
                .seed(seed)
                .samples(samples);
            let r = match step { Some(h) => r.step(h), None => r };
            let agg = AggregateReport::new(vec![r.clone(), r.clone()]);
            let back = AggregateReport::from_jsonl(&agg.to_jsonl()).unwrap();
            prop_assert_eq!(back, agg);
        }
    }
}
