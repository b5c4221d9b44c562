//! McKay–Thompson class records: JSON ingestion and consistency checks.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use serde::Deserialize;

use super::{expand_eta_combination, EtaCombination, EtaTerm};
use crate::exact::parse_rational;
use crate::lattice::{NHType, Sign};
use crate::Error;

/// The records shipped at the repository root.
pub struct ShippedData;

impl ShippedData {
    pub const JSON: &'static str = include_str!("../../../../moonshine.json");

    pub fn load() -> Moonshine {
        Moonshine::from_json(Self::JSON).expect("shipped data parses")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coef: String,
    factors: BTreeMap<String, i64>,
    #[serde(default)]
    e4: BTreeMap<String, i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    class: String,
    order: u64,
    h: u64,
    sign: String,
    fricke: bool,
    level: u64,
    eta_terms: Vec<RawTerm>,
    add_const: String,
    #[serde(default)]
    powers: BTreeMap<String, String>,
    checksum: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassRecord {
    pub name: String,
    pub order: u64,
    pub h: u64,
    pub sign: Sign,
    pub fricke: bool,
    pub level: u64,
    pub series: EtaCombination,
    /// `k ↦` class of `g^k`.
    pub powers: BTreeMap<u64, String>,
    /// Coefficients of `q^{−1}, q⁰, q¹, …`.
    pub checksum: Vec<BigInt>,
}

impl ClassRecord {
    pub fn nh_type(&self) -> Result<NHType, Error> {
        NHType::new(self.order, self.h, self.sign)
    }

    pub fn type_string(&self) -> String {
        format!("{}|{}{}", self.order, self.h, self.sign.symbol())
    }
}

fn parse_map(m: &BTreeMap<String, i64>, class: &str) -> Result<BTreeMap<u64, i64>, Error> {
    m.iter()
        .map(|(k, v)| {
            k.trim()
                .parse::<u64>()
                .map(|d| (d, *v))
                .map_err(|_| Error::Data(format!("record {class}: bad eta argument {k:?}")))
        })
        .collect()
}

fn rat(s: &str, class: &str, what: &str) -> Result<BigRational, Error> {
    parse_rational(s).map_err(|e| Error::Data(format!("record {class}: {what}: {e}")))
}

impl TryFrom<RawRecord> for ClassRecord {
    type Error = Error;
    fn try_from(r: RawRecord) -> Result<Self, Error> {
        let c = r.class.clone();
        let sign = match r.sign.as_str() {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            s => return Err(Error::Data(format!("record {c}: sign must be \"+\" or \"-\", got {s:?}"))),
        };
        let mut terms = Vec::new();
        for t in &r.eta_terms {
            terms.push(EtaTerm { coef: rat(&t.coef, &c, "coef")?, factors: parse_map(&t.factors, &c)?, e4: parse_map(&t.e4, &c)? });
        }
        let mut powers = BTreeMap::new();
        for (k, v) in &r.powers {
            let k: u64 = k.trim().parse().map_err(|_| Error::Data(format!("record {c}: bad power {k:?}")))?;
            powers.insert(k, v.clone());
        }
        let checksum = r
            .checksum
            .iter()
            .enumerate()
            .map(|(i, s)| s.trim().parse::<BigInt>().map_err(|_| Error::Data(format!("record {c}: checksum index {i}: {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ClassRecord {
            name: r.class,
            order: r.order,
            h: r.h,
            sign,
            fricke: r.fricke,
            level: r.level,
            series: EtaCombination { terms, add_const: rat(&r.add_const, &c, "add_const")? },
            powers,
            checksum,
        })
    }
}

/// A set of class records.
#[derive(Clone, Debug, PartialEq)]
pub struct Moonshine {
    pub records: Vec<ClassRecord>,
}

impl Moonshine {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let raw: Vec<RawRecord> = serde_json::from_str(text).map_err(|e| Error::Data(format!("data file: {e}")))?;
        let records = raw.into_iter().map(ClassRecord::try_from).collect::<Result<Vec<_>, _>>()?;
        Ok(Moonshine { records })
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Data(m) => Error::Data(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn get(&self, name: &str) -> Result<&ClassRecord, Error> {
        self.records
            .iter()
            .find(|r| r.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Data(format!("no class record named {name:?}")))
    }

    /// The class of `g^k`: `1A` for `k ≡ 0`, `g` for `k ≡ 1`, otherwise the power map.
    pub fn power_class(&self, rec: &ClassRecord, k: i64) -> Result<&ClassRecord, Error> {
        let k = k.rem_euclid(rec.order as i64) as u64;
        match k {
            0 => self.get("1A"),
            1 => self.get(&rec.name),
            _ => {
                let name = rec
                    .powers
                    .get(&k)
                    .ok_or_else(|| Error::Data(format!("record {}: power map has no entry for {k}", rec.name)))?;
                self.get(name)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordReport {
    pub class: String,
    pub checks: Vec<(&'static str, CheckOutcome)>,
}

impl RecordReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, o)| *o == CheckOutcome::Pass)
    }
}

impl fmt::Display for RecordReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, o) in &self.checks {
            match o {
                CheckOutcome::Pass => writeln!(f, "{}\t{}\tpass", self.class, name)?,
                CheckOutcome::Fail(m) => writeln!(f, "{}\t{}\tFAIL\t{}", self.class, name, m)?,
            }
        }
        Ok(())
    }
}

fn checksum_outcome(rec: &ClassRecord) -> CheckOutcome {
    let n = rec.checksum.len() as i64;
    let s = match expand_eta_combination(&rec.series, n - 1) {
        Ok(s) => s,
        Err(e) => return CheckOutcome::Fail(e.to_string()),
    };
    for (idx, want) in rec.checksum.iter().enumerate() {
        let got = s.coeff_or_zero(Rational64::from_integer(idx as i64 - 1));
        if got != BigRational::from_integer(want.clone()) {
            return CheckOutcome::Fail(format!("checksum mismatch at index {idx}: expected {want}, got {got}"));
        }
    }
    CheckOutcome::Pass
}

/// Per-record checks: weight zero, level `= n·h`, power-map closure, `+` exactly when Fricke,
/// and the embedded checksum against the expansion.
pub fn validate_data(db: &Moonshine) -> Vec<RecordReport> {
    db.records
        .iter()
        .map(|rec| {
            let mut checks = Vec::new();
            checks.push((
                "weight",
                match rec.series.validate() {
                    Ok(()) => CheckOutcome::Pass,
                    Err(e) => CheckOutcome::Fail(e.to_string()),
                },
            ));
            checks.push((
                "level",
                if rec.level == rec.order * rec.h {
                    CheckOutcome::Pass
                } else {
                    CheckOutcome::Fail(format!("level mismatch: level {} but n*h = {}", rec.level, rec.order * rec.h))
                },
            ));
            checks.push((
                "type",
                match rec.nh_type() {
                    Ok(_) => CheckOutcome::Pass,
                    Err(e) => CheckOutcome::Fail(e.to_string()),
                },
            ));
            let missing: Vec<&String> = rec.powers.values().filter(|p| db.get(p).is_err()).collect();
            checks.push((
                "powers",
                if missing.is_empty() {
                    CheckOutcome::Pass
                } else {
                    CheckOutcome::Fail(format!("power map refers to missing classes {missing:?}"))
                },
            ));
            checks.push((
                "fricke",
                if rec.fricke == (rec.sign == Sign::Plus) {
                    CheckOutcome::Pass
                } else {
                    CheckOutcome::Fail(format!("sign {} inconsistent with fricke = {}", rec.sign.symbol(), rec.fricke))
                },
            ));
            checks.push(("checksum", checksum_outcome(rec)));
            RecordReport { class: rec.name.clone(), checks }
        })
        .collect()
}
