//! JSON input formats: flow-category tables and spectrum tables.

use std::collections::{BTreeMap, BTreeSet};

use orbiweyl_core::capped_orbits::{FormalCappedOrbit, SpectrumTable, SphereClass};
use orbiweyl_core::flow_complex::{Generator, SignedPermutation, SyntheticFlowCategory};
use orbiweyl_core::novikov::parse_rational;
use orbiweyl_core::Rational;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub fn rational(text: &str) -> Result<Rational, CliError> {
    parse_rational(text.trim()).map_err(|e| CliError::Input(format!("bad rational `{text}`: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub id: String,
    pub action: i64,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub gamma_orbit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountEntry {
    pub k: usize,
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub shift: i64,
    pub value: String,
}

/// A flow-category file. `gamma` lists signed permutations as
/// `[[target_id, ±1], …]` in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub generators: Vec<GeneratorEntry>,
    pub step: i64,
    pub counts: Vec<CountEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gamma: Vec<Vec<(String, i8)>>,
}

impl CategoryFile {
    pub fn to_category(&self) -> Result<SyntheticFlowCategory, CliError> {
        let index: BTreeMap<&str, usize> = self.generators.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
        if index.len() != self.generators.len() {
            return Err(CliError::Input("duplicate generator id".into()));
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| CliError::Input(format!("unknown generator `{id}`")));
        let mut counts = BTreeMap::new();
        for c in &self.counts {
            let key = (c.k, lookup(&c.from)?, lookup(&c.to)?, c.shift);
            if counts.insert(key, rational(&c.value)?).is_some() {
                return Err(CliError::Input(format!("count ({}, {}, {}, {}) listed twice", c.k, c.from, c.to, c.shift)));
            }
        }
        let mut gamma = Vec::with_capacity(self.gamma.len());
        for perm in &self.gamma {
            if perm.len() != self.generators.len() {
                return Err(CliError::Input("gamma permutation length differs from the generator count".into()));
            }
            let images = perm
                .iter()
                .map(|(id, sign)| match sign {
                    1 | -1 => Ok((lookup(id)?, *sign)),
                    _ => Err(CliError::Input(format!("gamma sign must be 1 or -1, got {sign}"))),
                })
                .collect::<Result<_, _>>()?;
            gamma.push(SignedPermutation::new(images));
        }
        let generators = self
            .generators
            .iter()
            .map(|g| Generator { id: g.id.clone(), action: g.action, label: g.label.clone(), gamma_orbit: g.gamma_orbit })
            .collect();
        Ok(SyntheticFlowCategory::new(generators, self.step, counts, gamma))
    }

    pub fn from_category(cat: &SyntheticFlowCategory) -> Self {
        let id = |i: usize| cat.generators[i].id.clone();
        CategoryFile {
            generators: cat
                .generators
                .iter()
                .map(|g| GeneratorEntry { id: g.id.clone(), action: g.action, label: g.label.clone(), gamma_orbit: g.gamma_orbit })
                .collect(),
            step: cat.step,
            counts: cat
                .counts
                .iter()
                .map(|(&(k, from, to, shift), v)| CountEntry { k, from: id(from), to: id(to), shift, value: v.to_string() })
                .collect(),
            gamma: cat.gamma.iter().map(|g| g.images().iter().map(|&(j, s)| (id(j), s)).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereEntry {
    pub mult: i64,
    pub area: String,
    #[serde(default = "zero_text")]
    pub c1: String,
    #[serde(default)]
    pub orb_points: u32,
}

/// A capped-orbit ledger, with rationals as `"p/q"` text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerEntry {
    pub orbit: String,
    pub hamiltonian_integral: String,
    #[serde(default = "zero_text")]
    pub cap_area: String,
    #[serde(default)]
    pub cap_orb_points: u32,
    #[serde(default)]
    pub spheres: Vec<SphereEntry>,
    #[serde(default = "one_text")]
    pub marking: String,
    #[serde(default = "zero_text")]
    pub cap_cz: String,
    #[serde(default)]
    pub orbifold_glues: i64,
    #[serde(default = "zero_text")]
    pub age_shift: String,
}

fn zero_text() -> String {
    "0".into()
}

fn one_text() -> String {
    "1".into()
}

impl LedgerEntry {
    pub fn to_orbit(&self) -> Result<FormalCappedOrbit, CliError> {
        let mut c = FormalCappedOrbit::new(
            &self.orbit,
            rational(&self.hamiltonian_integral)?,
            rational(&self.cap_area)?,
            self.cap_orb_points,
            rational(&self.cap_cz)?,
        );
        for s in &self.spheres {
            c.spheres.push((s.mult, SphereClass::new(rational(&s.area)?, rational(&s.c1)?, s.orb_points)));
        }
        c.marking = self.marking.clone();
        c.orbifold_glues = self.orbifold_glues;
        c.age_shift = rational(&self.age_shift)?;
        Ok(c)
    }
}

/// An action value given directly or through its capped-orbit ledger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpectrumEntry {
    Value(String),
    Ledger(LedgerEntry),
}

/// `spectra["j"]` lists `Spec(H^j)`; ledger entries are evaluated with `val_v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumFile {
    #[serde(default = "zero_text")]
    pub val_v: String,
    pub spectra: BTreeMap<String, Vec<SpectrumEntry>>,
}

impl SpectrumFile {
    pub fn to_table(&self) -> Result<SpectrumTable, CliError> {
        let v = rational(&self.val_v)?;
        let mut table = SpectrumTable::new();
        for (key, entries) in &self.spectra {
            let j: usize = key.parse().map_err(|_| CliError::Input(format!("spectrum key `{key}` is not a positive integer")))?;
            if j == 0 {
                return Err(CliError::Input("spectrum keys start at 1".into()));
            }
            let mut set = BTreeSet::new();
            for e in entries {
                set.insert(match e {
                    SpectrumEntry::Value(text) => rational(text)?,
                    SpectrumEntry::Ledger(l) => l.to_orbit()?.action(&v),
                });
            }
            table.insert(j, set);
        }
        Ok(table)
    }
}
