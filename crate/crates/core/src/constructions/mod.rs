//! Executable checks of the exact constructions: the shrinking translations
//! behind the infinitude criterion, the `Q(ζ₅)` segment dynamics at
//! `r = √(3 + φ)`, closed-form critical radii and a few kinematic demos.

mod radii;
mod rotations;
mod shrink;
mod theorem2;

use std::fmt;

use serde::Serialize;

pub use radii::{closed_form_radius, spiral_radius, ClosedForm, CLOSED_FORMS};
pub use rotations::{lcm_rotation_word, three_disk_demo, LcmRotation, ThreeDiskDemo};
pub use shrink::{shrinking_translations, ShrinkStage, ShrinkWitness};
pub use theorem2::{
    interval_exchange_iterate, theorem2_check, theorem2_check_with_radius, Theorem2Data,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check_name: String,
    pub pass: bool,
    pub detail: String,
}

/// A list of named pass/fail checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            check_name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check_name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.check_name, c.detail)?;
        }
        Ok(())
    }
}
