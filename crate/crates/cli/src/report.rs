use serde_json::{json, Value};

use contframe::json::num;

use crate::config::Experiment;

pub const SCHEMA: u32 = 1;

/// How `computed` is compared with `expected`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `|computed − expected| ≤ tolerance`.
    Close,
    /// `computed ≤ expected + tolerance`.
    AtMost,
    /// `computed ≥ expected − tolerance`.
    AtLeast,
}

impl Relation {
    fn name(self) -> &'static str {
        match self {
            Relation::Close => "close",
            Relation::AtMost => "at-most",
            Relation::AtLeast => "at-least",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, computed: f64, expected: f64, tolerance: f64, relation: Relation) -> Self {
        let pass = match relation {
            Relation::Close => (computed - expected).abs() <= tolerance,
            Relation::AtMost => computed <= expected + tolerance,
            Relation::AtLeast => computed >= expected - tolerance,
        };
        Self {
            name: name.into(),
            computed,
            expected,
            tolerance,
            relation,
            pass,
        }
    }

    pub fn close(name: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        Self::new(name, computed, expected, tolerance, Relation::Close)
    }

    /// `computed ≤ limit`, recorded as an error expected to be 0 within `limit`.
    pub fn at_most(name: impl Into<String>, computed: f64, limit: f64) -> Self {
        Self::new(name, computed, 0.0, limit, Relation::AtMost)
    }

    /// `computed ≥ limit`.
    pub fn at_least(name: impl Into<String>, computed: f64, limit: f64) -> Self {
        Self::new(name, computed, limit, 0.0, Relation::AtLeast)
    }

    /// A yes/no outcome recorded as `1`/`0` against an expected `1`.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::close(name, if ok { 1.0 } else { 0.0 }, 1.0, 0.0)
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}/{}", self.name);
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "computed": num(self.computed),
            "expected": num(self.expected),
            "tolerance": num(self.tolerance),
            "relation": self.relation.name(),
            "pass": self.pass,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub experiment: Experiment,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub details: Value,
    /// Seconds.
    pub wall_time: f64,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "experiment": self.experiment.name(),
            "version": self.version,
            "seed": self.seed,
            "parameters": self.parameters,
            "pass": self.pass(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "details": self.details,
            "wall_time": num(self.wall_time),
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per check: `name,computed,expected,tolerance,relation,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,computed,expected,tolerance,relation,pass\n");
        for c in &self.checks {
            out.push_str(&format!(
                "\"{}\",{:.16e},{:.16e},{:.16e},{},{}\n",
                c.name.replace('"', "\"\""),
                c.computed,
                c.expected,
                c.tolerance,
                c.relation.name(),
                c.pass
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Check::close("a", 1.0, 1.0 + 1e-12, 1e-10).pass);
        assert!(!Check::close("a", 1.0, 2.0, 0.5).pass);
        assert!(Check::at_most("b", 0.04, 0.05).pass);
        assert!(!Check::at_most("b", f64::NAN, 0.05).pass);
        assert!(Check::at_least("c", 2.0, 2.0).pass);
        assert!(!Check::flag("d", false).pass);
    }

    #[test]
    fn overall_pass_requires_every_check() {
        let mut r = Report {
            experiment: Experiment::Gabor,
            seed: Some(1),
            version: "0",
            parameters: Value::Null,
            checks: vec![Check::flag("ok", true)],
            details: Value::Null,
            wall_time: 0.5,
        };
        assert!(r.pass());
        r.checks.push(Check::flag("bad", false));
        assert!(!r.pass());
        let v = r.to_json();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["checks"][1]["pass"], false);
        assert!(r.to_csv().lines().count() == 3);
    }

    #[test]
    fn numbers_carry_seventeen_digits() {
        let c = Check::close("x", 0.1, 1.0 / 3.0, 1.0);
        let text = c.to_json().to_string();
        assert!(text.contains("3.3333333333333331e-1"), "{text}");
    }
}
