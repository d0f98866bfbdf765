//! The five canonical example distributions with their published values.
//!
//! Each expectation carries where it comes from. `Published` values are printed
//! to two or three decimals and are checked at matching tolerances.
//! `Derived` values were computed once by brute-force evaluation of the
//! defining sums outside this crate and are frozen here at full precision.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{intersection, MeasureConfig, MeasureKind};
use crate::pid::{PairInformation, Region};
use crate::prob::{conditional_mutual_information, JointTable, VarSet, Variable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseName {
    Unq,
    RdnXor,
    And,
    ImperfectRdn,
    Subtle,
}

impl CaseName {
    pub const ALL: [CaseName; 5] = [
        CaseName::Unq,
        CaseName::RdnXor,
        CaseName::And,
        CaseName::ImperfectRdn,
        CaseName::Subtle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseName::Unq => "unq",
            CaseName::RdnXor => "rdnxor",
            CaseName::And => "and",
            CaseName::ImperfectRdn => "imperfectrdn",
            CaseName::Subtle => "subtle",
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        CaseName::ALL
            .into_iter()
            .find(|c| c.as_str() == lower)
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    Published,
    Derived,
}

/// What an expectation measures. Variable positions are 0 = X1, 1 = X2,
/// 2 = Y in every corpus table.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Quantity {
    MutualInformation {
        a: Vec<usize>,
        b: Vec<usize>,
        given: Vec<usize>,
    },
    Measure {
        kind: MeasureKind,
    },
    Region {
        kind: MeasureKind,
        region: Region,
    },
}

impl Quantity {
    fn mi(a: &[usize], b: &[usize]) -> Self {
        Quantity::MutualInformation {
            a: a.to_vec(),
            b: b.to_vec(),
            given: Vec::new(),
        }
    }

    fn cmi(a: &[usize], b: &[usize], given: &[usize]) -> Self {
        Quantity::MutualInformation {
            a: a.to_vec(),
            b: b.to_vec(),
            given: given.to_vec(),
        }
    }

    pub fn label(&self) -> String {
        fn names(v: &[usize]) -> String {
            v.iter()
                .map(|&i| ["X1", "X2", "Y"].get(i).copied().unwrap_or("?"))
                .collect::<Vec<_>>()
                .join("∨")
        }
        match self {
            Quantity::MutualInformation { a, b, given } if given.is_empty() => {
                format!("I({}:{})", names(a), names(b))
            }
            Quantity::MutualInformation { a, b, given } => {
                format!("I({}:{}|{})", names(a), names(b), names(given))
            }
            Quantity::Measure { kind } => format!("{kind}(X1,X2:Y)"),
            Quantity::Region { kind, region } => format!("{kind} {}", region.label()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub quantity: Quantity,
    pub bits: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub citation: &'static str,
}

#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: CaseName,
    pub table: JointTable,
    pub expected: Vec<Expectation>,
    /// Values reported for measures that are not implemented here.
    pub annotations: Vec<&'static str>,
}

const MI_TOL: f64 = 1e-3;
const EXACT_TOL: f64 = 1e-9;
const SOLVER_TOL: f64 = 1e-2;
const SOLVER_ZERO_TOL: f64 = 1e-3;

fn published(quantity: Quantity, bits: f64, tolerance: f64, citation: &'static str) -> Expectation {
    Expectation {
        quantity,
        bits,
        tolerance,
        provenance: Provenance::Published,
        citation,
    }
}

fn derived(quantity: Quantity, bits: f64, tolerance: f64, citation: &'static str) -> Expectation {
    Expectation {
        quantity,
        bits,
        tolerance,
        provenance: Provenance::Derived,
        citation,
    }
}

fn measure(kind: MeasureKind) -> Quantity {
    Quantity::Measure { kind }
}

fn regions(
    kind: MeasureKind,
    values: [f64; 4],
    tolerance: f64,
    provenance: Provenance,
    citation: &'static str,
) -> Vec<Expectation> {
    Region::ALL
        .iter()
        .zip(values)
        .map(|(&region, bits)| Expectation {
            quantity: Quantity::Region { kind, region },
            bits,
            tolerance,
            provenance,
            citation,
        })
        .collect()
}

fn table<const N: usize>(
    x1: &[&str],
    x2: &[&str],
    y: &[&str],
    rows: [([&str; 3], f64); N],
) -> JointTable {
    let vars = vec![
        Variable::new("X1", x1.iter().copied()),
        Variable::new("X2", x2.iter().copied()),
        Variable::new("Y", y.iter().copied()),
    ];
    JointTable::from_entries(vars, 2, rows).expect("corpus tables are valid")
}

fn mutual_informations(joint: f64, first: f64, second: f64, cite: &'static str) -> Vec<Expectation> {
    vec![
        published(Quantity::mi(&[0, 1], &[2]), joint, MI_TOL, cite),
        published(Quantity::mi(&[0], &[2]), first, MI_TOL, cite),
        published(Quantity::mi(&[1], &[2]), second, MI_TOL, cite),
    ]
}

pub fn build(name: CaseName) -> CorpusCase {
    use MeasureKind::*;
    match name {
        CaseName::Unq => {
            let table = table(
                &["a", "A"],
                &["b", "B"],
                &["ab", "aB", "Ab", "AB"],
                [
                    (["a", "b", "ab"], 0.25),
                    (["a", "B", "aB"], 0.25),
                    (["A", "b", "Ab"], 0.25),
                    (["A", "B", "AB"], 0.25),
                ],
            );
            let mut expected = mutual_informations(2.0, 1.0, 1.0, "Informations for Unq");
            expected.extend([
                published(measure(Imin), 1.0, MI_TOL, "I_min finds one redundant bit in Unq"),
                published(measure(Iwedge), 0.0, EXACT_TOL, "Unq decomposition"),
                published(measure(Ialpha), 0.0, SOLVER_ZERO_TOL, "Unq decomposition"),
            ]);
            expected.extend(regions(
                Iwedge,
                [0.0, 1.0, 1.0, 0.0],
                EXACT_TOL,
                Provenance::Published,
                "each predictor carries one unique bit",
            ));
            expected.extend(regions(
                Imin,
                [1.0, 0.0, 0.0, 1.0],
                EXACT_TOL,
                Provenance::Derived,
                "I_min = 1 substituted into the decomposition",
            ));
            CorpusCase {
                name,
                table,
                expected,
                annotations: vec!["Syn and ΔI report zero redundancy"],
            }
        }
        CaseName::RdnXor => {
            let s = ["r0", "r1", "R0", "R1"];
            let table = table(
                &s,
                &s,
                &s,
                [
                    (["r0", "r0", "r0"], 0.125),
                    (["r0", "r1", "r1"], 0.125),
                    (["r1", "r0", "r1"], 0.125),
                    (["r1", "r1", "r0"], 0.125),
                    (["R0", "R0", "R0"], 0.125),
                    (["R0", "R1", "R1"], 0.125),
                    (["R1", "R0", "R1"], 0.125),
                    (["R1", "R1", "R0"], 0.125),
                ],
            );
            let mut expected = mutual_informations(2.0, 1.0, 1.0, "RdnXor values");
            expected.extend([
                published(measure(Imin), 1.0, MI_TOL, "RdnXor values"),
                published(measure(Iwedge), 1.0, EXACT_TOL, "RdnXor values"),
                published(measure(Ialpha), 1.0, SOLVER_TOL, "RdnXor values"),
            ]);
            CorpusCase {
                name,
                table,
                expected,
                annotations: vec!["Syn reports zero synergy and zero redundancy"],
            }
        }
        CaseName::And => {
            let table = table(
                &["0", "1"],
                &["0", "1"],
                &["0", "1"],
                [
                    (["0", "0", "0"], 0.25),
                    (["0", "1", "0"], 0.25),
                    (["1", "0", "0"], 0.25),
                    (["1", "1", "1"], 0.25),
                ],
            );
            let mut expected = mutual_informations(0.811, 0.311, 0.311, "And values");
            expected.extend([
                published(measure(Imin), 0.311, MI_TOL, "And values"),
                published(measure(Iwedge), 0.0, EXACT_TOL, "And values"),
                published(measure(Ialpha), 0.0, SOLVER_ZERO_TOL, "And values"),
                derived(
                    Quantity::cmi(&[0], &[1], &[2]),
                    0.188721875540867,
                    EXACT_TOL,
                    "brute-force sum over the And table",
                ),
            ]);
            CorpusCase {
                name,
                table,
                expected,
                annotations: vec!["ΔI gives a redundancy of about −0.085 bits"],
            }
        }
        CaseName::ImperfectRdn => {
            let table = table(
                &["0", "1"],
                &["0", "1"],
                &["0", "1"],
                [
                    (["0", "0", "0"], 0.499),
                    (["0", "1", "0"], 0.001),
                    (["1", "1", "1"], 0.500),
                ],
            );
            let mut expected = mutual_informations(1.0, 1.0, 0.99, "ImperfectRdn informations");
            expected.extend([
                published(
                    Quantity::cmi(&[1], &[2], &[0]),
                    0.0,
                    MI_TOL,
                    "X2 adds nothing once X1 is known",
                ),
                published(measure(Iwedge), 0.0, EXACT_TOL, "I_∧ finds no redundancy in ImperfectRdn"),
                published(measure(Ialpha), 0.99, SOLVER_TOL, "ImperfectRdn redundancy"),
                derived(
                    measure(Imin),
                    0.989590078940244,
                    EXACT_TOL,
                    "brute-force I_min over the ImperfectRdn table",
                ),
            ]);
            expected.extend(regions(
                Imin,
                [0.99, 0.01, 0.0, 0.0],
                MI_TOL,
                Provenance::Published,
                "ImperfectRdn decomposition",
            ));
            expected.extend(regions(
                Ialpha,
                [0.99, 0.01, 0.0, 0.0],
                SOLVER_TOL,
                Provenance::Published,
                "ImperfectRdn decomposition",
            ));
            CorpusCase {
                name,
                table,
                expected,
                annotations: vec!["Syn and ΔI also give 0.99 bits of redundancy"],
            }
        }
        CaseName::Subtle => {
            let third = 1.0 / 3.0;
            let table = table(
                &["0", "1"],
                &["0", "1"],
                &["00", "01", "11"],
                [
                    (["0", "0", "00"], third),
                    (["0", "1", "01"], third),
                    (["1", "1", "11"], third),
                ],
            );
            let mut expected = mutual_informations(1.585, 0.918, 0.918, "Subtle informations");
            expected.extend([
                published(Quantity::mi(&[0], &[1]), 0.252, MI_TOL, "Subtle informations"),
                published(measure(Iwedge), 0.0, EXACT_TOL, "Subtle redundancy"),
                published(measure(Ialpha), 0.0, SOLVER_ZERO_TOL, "I_α(Subtle) = 0"),
                derived(
                    measure(Imin),
                    0.584962500721156,
                    EXACT_TOL,
                    "brute-force I_min over the Subtle table",
                ),
            ]);
            expected.extend(regions(
                Ialpha,
                [0.0, 0.918, 0.918, -0.252],
                MI_TOL,
                Provenance::Derived,
                "I_α = 0 and the Subtle informations substituted into the decomposition",
            ));
            CorpusCase {
                name,
                table,
                expected,
                annotations: vec![],
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryResult {
    pub case: CaseName,
    pub quantity: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub citation: &'static str,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryResult>,
}

impl CorpusReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn published_failures(&self) -> Vec<&EntryResult> {
        self.entries
            .iter()
            .filter(|e| !e.pass && e.provenance == Provenance::Published)
            .collect()
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "{} {:<13} {:<22} measured {:>10.6} expected {:>10.6} tol {:.0e} [{:?}: {}]",
                if e.pass { "PASS" } else { "FAIL" },
                e.case,
                e.quantity,
                e.measured,
                e.expected,
                e.tolerance,
                e.provenance,
                e.citation
            )?;
        }
        Ok(())
    }
}

/// Evaluates every expectation of the selected cases (all when `only` is
/// `None`). Each measure is computed once per case.
pub fn verify_all(config: &MeasureConfig, only: Option<CaseName>) -> Result<CorpusReport> {
    let mut report = CorpusReport::default();
    for name in CaseName::ALL.into_iter().filter(|n| only.is_none_or(|o| o == *n)) {
        let case = build(name);
        let t = &case.table;
        let preds = t.default_predictors();
        let pair = PairInformation::of(t, &preds)?;
        let mut values: HashMap<MeasureKind, f64> = HashMap::new();
        let mut value_of = |kind: MeasureKind| -> Result<f64> {
            if let Some(&v) = values.get(&kind) {
                return Ok(v);
            }
            let v = intersection(t, &preds, kind, config)?;
            values.insert(kind, v);
            Ok(v)
        };
        for exp in &case.expected {
            let measured = match &exp.quantity {
                Quantity::MutualInformation { a, b, given } => conditional_mutual_information(
                    t,
                    &VarSet::new(a.iter().copied()),
                    &VarSet::new(b.iter().copied()),
                    &VarSet::new(given.iter().copied()),
                )?,
                Quantity::Measure { kind } => value_of(*kind)?,
                Quantity::Region { kind, region } => {
                    pair.decompose(value_of(*kind)?, *kind).region(*region)
                }
            };
            report.entries.push(EntryResult {
                case: name,
                quantity: exp.quantity.label(),
                measured,
                expected: exp.bits,
                tolerance: exp.tolerance,
                provenance: exp.provenance,
                citation: exp.citation,
                pass: (measured - exp.bits).abs() <= exp.tolerance,
            });
        }
    }
    Ok(report)
}
