//! Test families of curves over a one-parameter base, used to prove that
//! the boundary divisors are independent in the compactified Picard
//! groups.
//!
//! Each family is recorded through its special fiber: a dual graph, a
//! balanced multidegree, and the row of intersection degrees against the
//! boundary divisors. The paper proving the independence only states some
//! of those degrees; unstated entries are kept as [`RowEntry::Unknown`]
//! and the rank argument below is arranged so they never matter.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{invariants, normalize_degree, GD};
use crate::balanced::{is_properly_balanced, Multidegree, Rat};
use crate::dualgraph::DualGraph;
use crate::error::{Error, Result};
use crate::picard::{boundary_table, BoundaryLabel};

/// Identifier of a test family. `F` and the two `Fp` variants cover the
/// index-0 and index-1 boundary columns; `Fh1(h)`/`Fh2(h)` cover the
/// column at index h+1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyId {
    F,
    Fp1,
    Fp2,
    Fh1(i64),
    Fh2(i64),
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::F => write!(f, "F"),
            FamilyId::Fp1 => write!(f, "F'1"),
            FamilyId::Fp2 => write!(f, "F'2"),
            FamilyId::Fh1(h) => write!(f, "F{h}_1"),
            FamilyId::Fh2(h) => write!(f, "F{h}_2"),
        }
    }
}

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Intersection degree of a family with one boundary divisor, as far as
/// stated: -1, 0, or not stated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowEntry {
    MinusOne,
    Zero,
    Unknown,
}

impl Serialize for RowEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RowEntry::MinusOne => serializer.serialize_i64(-1),
            RowEntry::Zero => serializer.serialize_i64(0),
            RowEntry::Unknown => serializer.serialize_str("?"),
        }
    }
}

impl fmt::Display for RowEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowEntry::MinusOne => "-1",
            RowEntry::Zero => "0",
            RowEntry::Unknown => "?",
        })
    }
}

/// Special fiber and stated boundary degrees of one family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: FamilyId,
    pub condition: String,
    /// In case A the two F_h variants coincide and a single report stands
    /// for both.
    pub shared: bool,
    pub graph: DualGraph,
    pub multidegree: Multidegree,
    pub row: BTreeMap<BoundaryLabel, RowEntry>,
}

impl FamilyReport {
    /// Content comparison ignoring the identifier, used for the case-A
    /// coincidence check.
    pub fn same_fiber(&self, other: &Self) -> bool {
        self.graph == other.graph
            && self.multidegree == other.multidegree
            && self.row == other.row
    }
}

fn check_normalized(gd: GD) -> Result<()> {
    let (g, d) = (gd.g(), gd.d());
    if d < 0 || d >= 2 * g - 2 {
        return Err(Error::Domain(format!(
            "families need 0 <= d < 2g-2 = {}, got d = {d}; normalize the degree first",
            2 * g - 2
        )));
    }
    Ok(())
}

fn assert_fiber(report: &FamilyReport, g: i64, d: i64) {
    assert_eq!(report.graph.total_genus(), g, "{} fiber genus", report.family);
    assert_eq!(report.multidegree.total(), d, "{} fiber degree", report.family);
    let check = is_properly_balanced(&report.graph, &report.multidegree)
        .expect("fiber graphs are quasistable");
    assert!(check.balanced, "{} fiber multidegree unbalanced", report.family);
}

/// The family covering the d0 column: generic fiber smooth, special fiber
/// a genus g-3 component joined to two rational bridges.
pub fn family_f(gd: GD) -> Result<FamilyReport> {
    check_normalized(gd)?;
    let (g, d) = (gd.g(), gd.d());
    let graph = DualGraph::new(
        &[("C", (g - 3) as u32), ("R1", 0), ("R2", 0)],
        &[("R1", "R2"), ("C", "R1"), ("C", "R1"), ("C", "R2"), ("C", "R2")],
    )?;
    let mut row = BTreeMap::new();
    for label in boundary_table(gd).labels() {
        let entry = if label == BoundaryLabel::D0 {
            RowEntry::MinusOne
        } else {
            RowEntry::Zero
        };
        row.insert(label, entry);
    }
    let report = FamilyReport {
        family: FamilyId::F,
        condition: format!("0 <= d < {}", 2 * g - 2),
        shared: false,
        graph,
        multidegree: Multidegree(vec![d, 0, 0]),
        row,
    };
    assert_fiber(&report, g, d);
    Ok(report)
}

/// The two families covering the index-1 column(s). Variant 1 exists for
/// 0 <= d <= g-1, variant 2 for g-1 <= d < 2g-2; at d = g-1, where the
/// column splits, both exist and hit one half each.
pub fn family_fprime(gd: GD, variant: u8) -> Result<FamilyReport> {
    check_normalized(gd)?;
    let (g, d) = (gd.g(), gd.d());
    let (id, condition) = match variant {
        1 => (FamilyId::Fp1, format!("0 <= d <= {}", g - 1)),
        2 => (FamilyId::Fp2, format!("{} <= d < {}", g - 1, 2 * g - 2)),
        _ => return Err(Error::Domain(format!("variant must be 1 or 2, got {variant}"))),
    };
    let applicable = match variant {
        1 => d <= g - 1,
        _ => d >= g - 1,
    };
    if !applicable {
        return Err(Error::NotApplicable(format!(
            "family {id} needs {condition}, got d = {d}"
        )));
    }
    // edge multiplicities reconstructed from the balance bookkeeping:
    // R1 is cut 3 times, R2 together with E twice, E once
    let graph = DualGraph::new(
        &[("C", (g - 3) as u32), ("E", 1), ("R1", 0), ("R2", 0)],
        &[("C", "R1"), ("C", "R1"), ("C", "R2"), ("R1", "R2"), ("R2", "E")],
    )?;
    let multidegree = match variant {
        1 => Multidegree(vec![d, 0, 0, 0]),
        _ => Multidegree(vec![d - 3, 1, 1, 1]),
    };
    let mut row = BTreeMap::new();
    for label in boundary_table(gd).labels() {
        let entry = match label {
            BoundaryLabel::D0 => RowEntry::Unknown,
            BoundaryLabel::Di(1) => RowEntry::MinusOne,
            BoundaryLabel::Di1(1) => {
                if variant == 1 {
                    RowEntry::MinusOne
                } else {
                    RowEntry::Zero
                }
            }
            BoundaryLabel::Di2(1) => {
                if variant == 2 {
                    RowEntry::MinusOne
                } else {
                    RowEntry::Zero
                }
            }
            _ => RowEntry::Zero,
        };
        row.insert(label, entry);
    }
    let report = FamilyReport {
        family: id,
        condition,
        shared: false,
        graph,
        multidegree,
        row,
    };
    assert_fiber(&report, g, d);
    Ok(report)
}

/// Rounding case of the F_h construction at height h.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FhCase {
    A,
    B,
}

/// The two rounding candidates for each of the component degrees alpha
/// (on the genus g-h-1 leaf) and beta (on the genus h leaf). A target
/// value sitting exactly between two integers yields a genuine pair;
/// otherwise both candidates equal the nearest integer. The two targets
/// tie independently; the case tag records the alpha tie only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FhIntegers {
    pub alpha1: i64,
    pub alpha2: i64,
    pub beta1: i64,
    pub beta2: i64,
    pub case: FhCase,
}

fn round_pair(x: Rat) -> (i64, i64, bool) {
    let tie = (x * 2).is_integer() && !x.is_integer();
    if tie {
        let lo = (x - Rat::new(1, 2)).to_integer();
        (lo, lo + 1, true)
    } else {
        let nearest = (x + Rat::new(1, 2)).floor().to_integer();
        (nearest, nearest, false)
    }
}

pub fn fh_integers(gd: GD, h: i64) -> Result<FhIntegers> {
    let (g, d) = (gd.g(), gd.d());
    if h < 1 || 2 * h > g - 2 {
        return Err(Error::Range(format!(
            "h = {h} outside 1..={} for genus {g}",
            (g - 2) / 2
        )));
    }
    let (alpha1, alpha2, alpha_tie) = round_pair(Rat::new(d * (2 * g - 2 * h - 3), 2 * g - 2));
    let (beta1, beta2, _) = round_pair(Rat::new(d * (2 * h - 1), 2 * g - 2));
    let k = invariants(gd).k;
    assert_eq!(
        alpha_tie,
        (2 * h + 1) % k == 0,
        "alpha ties exactly when k divides 2h+1"
    );
    Ok(FhIntegers {
        alpha1,
        alpha2,
        beta1,
        beta2,
        case: if alpha_tie { FhCase::B } else { FhCase::A },
    })
}

/// Gluing-bundle tag determined by the degrees on E and on the elliptic
/// tail.
fn bundle_tag(deg_e: i64, deg_t: i64) -> &'static str {
    match (deg_e, deg_t) {
        (0, 0) => "M1",
        (1, 0) => "M2",
        (0, 1) => "M3",
        _ => "M4",
    }
}

/// The family covering the column at index h+1: special fiber a star with
/// rational center E and leaves of genus h, g-h-1 and 1.
///
/// In case A (no alpha tie) the two variants coincide; in case B variant
/// 1 carries (beta2, alpha1) and degree 1 on E, variant 2 carries
/// (beta1, alpha2) and degree 0 on E, with the elliptic-tail degree
/// switching at d = g-1 per variant.
pub fn family_fh(gd: GD, h: i64, variant: u8) -> Result<FamilyReport> {
    check_normalized(gd)?;
    if !(variant == 1 || variant == 2) {
        return Err(Error::Domain(format!("variant must be 1 or 2, got {variant}")));
    }
    let (g, d) = (gd.g(), gd.d());
    let ints = fh_integers(gd, h)?;
    let (beta, alpha, deg_t, deg_e) = match ints.case {
        FhCase::A => {
            let s = d - ints.alpha1 - ints.beta1;
            let (deg_t, deg_e) = match s {
                0 => (0, 0),
                1 if d <= g - 1 => (0, 1),
                1 => (1, 0),
                2 => (1, 1),
                _ => panic!("leftover degree {s} outside 0..=2 in case A"),
            };
            if d <= g - 1 {
                assert!(s == 0 || s == 1, "leftover degree {s} for d <= g-1");
            } else {
                assert!(s == 1 || s == 2, "leftover degree {s} for d > g-1");
            }
            (ints.beta1, ints.alpha1, deg_t, deg_e)
        }
        FhCase::B if variant == 1 => {
            let deg_t = if d <= g - 1 { 0 } else { 1 };
            let deg_e = d - ints.alpha1 - ints.beta2 - deg_t;
            assert_eq!(deg_e, 1, "variant 1 always puts degree 1 on E");
            (ints.beta2, ints.alpha1, deg_t, deg_e)
        }
        FhCase::B => {
            let deg_t = if d < g - 1 { 0 } else { 1 };
            let deg_e = d - ints.alpha2 - ints.beta1 - deg_t;
            assert_eq!(deg_e, 0, "variant 2 always puts degree 0 on E");
            (ints.beta1, ints.alpha2, deg_t, deg_e)
        }
    };
    let graph = DualGraph::new(
        &[
            ("C1", h as u32),
            ("C2", (g - h - 1) as u32),
            ("T", 1),
            ("E", 0),
        ],
        &[("C1", "E"), ("C2", "E"), ("T", "E")],
    )?;
    let shared = ints.case == FhCase::A;
    let family = match (variant, shared) {
        (1, _) => FamilyId::Fh1(h),
        (2, _) => FamilyId::Fh2(h),
        _ => unreachable!(),
    };
    let mut row = BTreeMap::new();
    for entry in boundary_table(gd).entries {
        let value = if entry.i <= h {
            RowEntry::Unknown
        } else if entry.i == h + 1 {
            match (entry.label, ints.case) {
                (BoundaryLabel::Di(_), FhCase::A) => RowEntry::MinusOne,
                (BoundaryLabel::Di1(_), FhCase::B) => {
                    if variant == 1 {
                        RowEntry::MinusOne
                    } else {
                        RowEntry::Zero
                    }
                }
                (BoundaryLabel::Di2(_), FhCase::B) => {
                    if variant == 2 {
                        RowEntry::MinusOne
                    } else {
                        RowEntry::Zero
                    }
                }
                // the stated -1 at the doubled divisor is for variant 1
                // only; nothing is stated for variant 2 there
                (BoundaryLabel::Dg2, FhCase::B) => {
                    if variant == 1 {
                        RowEntry::MinusOne
                    } else {
                        RowEntry::Unknown
                    }
                }
                (label, case) => panic!(
                    "boundary label {label} at index h+1 = {} contradicts case {case:?}",
                    h + 1
                ),
            }
        } else {
            RowEntry::Zero
        };
        row.insert(entry.label, value);
    }
    let report = FamilyReport {
        family,
        condition: format!(
            "case {:?}, h = {h}, bundle {}",
            ints.case,
            bundle_tag(deg_e, deg_t)
        ),
        shared,
        graph,
        multidegree: Multidegree(vec![beta, alpha, deg_t, deg_e]),
        row,
    };
    assert_fiber(&report, g, d);
    Ok(report)
}

/// Applicability wrapper used by listings: either a constructed report or
/// the reason the family does not exist at this (g, d).
#[derive(Clone, Debug, Serialize)]
pub struct FamilyStatus {
    pub family: FamilyId,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<FamilyReport>,
}

/// Every family relevant to (g, d), in matrix row order. Case-A heights
/// emit a single shared report.
pub fn all_families(gd: GD) -> Result<Vec<FamilyStatus>> {
    check_normalized(gd)?;
    let g = gd.g();
    let mut out = vec![FamilyStatus {
        family: FamilyId::F,
        applicable: true,
        reason: None,
        report: Some(family_f(gd)?),
    }];
    for variant in [1u8, 2] {
        let family = if variant == 1 { FamilyId::Fp1 } else { FamilyId::Fp2 };
        match family_fprime(gd, variant) {
            Ok(report) => out.push(FamilyStatus {
                family,
                applicable: true,
                reason: None,
                report: Some(report),
            }),
            Err(Error::NotApplicable(reason)) => out.push(FamilyStatus {
                family,
                applicable: false,
                reason: Some(reason),
                report: None,
            }),
            Err(e) => return Err(e),
        }
    }
    for h in 1..=(g - 2) / 2 {
        let first = family_fh(gd, h, 1)?;
        let shared = first.shared;
        out.push(FamilyStatus {
            family: FamilyId::Fh1(h),
            applicable: true,
            reason: None,
            report: Some(first),
        });
        if !shared {
            out.push(FamilyStatus {
                family: FamilyId::Fh2(h),
                applicable: true,
                reason: None,
                report: Some(family_fh(gd, h, 2)?),
            });
        }
    }
    Ok(out)
}

/// One row of the independence matrix.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixRow {
    pub family: FamilyId,
    pub entries: BTreeMap<BoundaryLabel, RowEntry>,
}

/// The assembled family-by-boundary intersection matrix with its
/// designated-row certificate.
#[derive(Clone, Debug, Serialize)]
pub struct IndependenceMatrix {
    pub g: i64,
    pub d: i64,
    pub cols: Vec<BoundaryLabel>,
    pub rows: Vec<MatrixRow>,
    /// For each column, the certifying row index.
    pub designated: Vec<usize>,
    pub verdict: String,
}

/// Assembles the family rows for (g, d) (degree normalized internally)
/// and certifies that the boundary columns are linearly independent.
///
/// The certificate is triangular: for each column there must be a row
/// with -1 in that column and exact 0 in every later column. Entries in
/// earlier columns may be unknown; eliminating columns from the right
/// never consults them, which is exactly why the argument tolerates the
/// unstated intersection degrees.
pub fn independence_matrix(gd: GD) -> Result<IndependenceMatrix> {
    let g = gd.g();
    let (d_norm, _) = normalize_degree(gd);
    let gdn = GD::new(g, d_norm)?;
    let cols = boundary_table(gdn).labels();
    let statuses = all_families(gdn).map_err(|e| match e {
        Error::NotApplicable(msg) | Error::Domain(msg) => Error::Verification(format!(
            "required family missing for g = {g}, d = {d_norm}: {msg}"
        )),
        other => other,
    })?;
    // a row certifies the column where it has its -1; when h+1 = g/2
    // falls under case B nothing is stated for variant 2, so its all
    // unknown row carries no information and is left out
    let rows: Vec<MatrixRow> = statuses
        .into_iter()
        .filter_map(|s| s.report.map(|r| MatrixRow { family: r.family, entries: r.row }))
        .filter(|row| row.entries.values().any(|e| *e == RowEntry::MinusOne))
        .collect();
    for row in &rows {
        for col in &cols {
            if !row.entries.contains_key(col) {
                return Err(Error::Verification(format!(
                    "row {} has no entry for column {col}",
                    row.family
                )));
            }
        }
    }
    let mut designated = Vec::with_capacity(cols.len());
    for (ci, col) in cols.iter().enumerate() {
        let found = rows.iter().position(|row| {
            row.entries[col] == RowEntry::MinusOne
                && cols[ci + 1..]
                    .iter()
                    .all(|later| row.entries[later] == RowEntry::Zero)
        });
        match found {
            Some(ri) => designated.push(ri),
            None => {
                return Err(Error::Verification(format!(
                    "no designated row for boundary column {col} at g = {g}, d = {d_norm}"
                )))
            }
        }
    }
    Ok(IndependenceMatrix {
        g,
        d: d_norm,
        cols,
        rows,
        designated,
        verdict: "independent".to_string(),
    })
}
