//! Boundary-divisor tables and presentations of the four Picard groups,
//! with the tautological-class reduction, the residual weight map, the
//! twisting class Xi, chi, the topological basis change, and the theta
//! exponent check.
//!
//! Group elements are written additively as integer coefficient vectors
//! over a labelled basis; the CLI renders them multiplicatively as
//! exponents. Four basis conventions ("spaces") exist:
//!
//! * `jac`:    L10, L01, L11
//! * `j`:      L10, Xi
//! * `barjac`: L10, L01, L11 and the boundary labels
//! * `barj`:   L10, Xi and the boundary labels

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{invariants, GD};
use crate::balanced::{format_ratio, Rat};
use crate::dualgraph::DualGraph;
use crate::error::{Error, Result};

/// Names of the irreducible boundary divisors of the compactification.
///
/// `Di(i)` needs `i >= 1`; the index-0 divisor is always the standalone
/// `D0`. The split pair `Di1/Di2` and the doubled divisor `Dg2` replace
/// `Di(i)` depending on a divisibility condition on (g, d), see
/// [`boundary_table`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryLabel {
    D0,
    Di(i64),
    Di1(i64),
    Di2(i64),
    Dg2,
}

impl BoundaryLabel {
    fn sort_key(self) -> (i64, u8) {
        match self {
            BoundaryLabel::D0 => (i64::MIN, 0),
            BoundaryLabel::Di(i) => (i, 0),
            BoundaryLabel::Di1(i) => (i, 1),
            BoundaryLabel::Di2(i) => (i, 2),
            BoundaryLabel::Dg2 => (i64::MAX, 0),
        }
    }
}

impl Ord for BoundaryLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for BoundaryLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BoundaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryLabel::D0 => write!(f, "d0"),
            BoundaryLabel::Di(i) => write!(f, "d{i}"),
            BoundaryLabel::Di1(i) => write!(f, "d{i}_1"),
            BoundaryLabel::Di2(i) => write!(f, "d{i}_2"),
            BoundaryLabel::Dg2 => write!(f, "dg2"),
        }
    }
}

impl FromStr for BoundaryLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("unrecognized boundary label `{s}`"));
        let rest = s.strip_prefix('d').ok_or_else(bad)?;
        match rest {
            "0" => return Ok(BoundaryLabel::D0),
            "g2" => return Ok(BoundaryLabel::Dg2),
            _ => {}
        }
        let (num, part) = match rest.split_once('_') {
            None => (rest, 0u8),
            Some((n, "1")) => (n, 1),
            Some((n, "2")) => (n, 2),
            Some(_) => return Err(bad()),
        };
        let i: i64 = num.parse().map_err(|_| bad())?;
        if i < 1 {
            return Err(bad());
        }
        Ok(match part {
            0 => BoundaryLabel::Di(i),
            1 => BoundaryLabel::Di1(i),
            _ => BoundaryLabel::Di2(i),
        })
    }
}

impl Serialize for BoundaryLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BoundaryLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// A basis label of one of the four groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    L10,
    L01,
    L11,
    Xi,
    Boundary(BoundaryLabel),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::L10 => write!(f, "L10"),
            Label::L01 => write!(f, "L01"),
            Label::L11 => write!(f, "L11"),
            Label::Xi => write!(f, "Xi"),
            Label::Boundary(b) => b.fmt(f),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "L10" => Label::L10,
            "L01" => Label::L01,
            "L11" => Label::L11,
            "Xi" => Label::Xi,
            _ => Label::Boundary(s.parse()?),
        })
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Which of the four groups an element is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Jac,
    J,
    BarJac,
    BarJ,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Jac => "jac",
            Space::J => "j",
            Space::BarJac => "barjac",
            Space::BarJ => "barj",
        })
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "jac" => Space::Jac,
            "j" => Space::J,
            "barjac" => Space::BarJac,
            "barj" => Space::BarJ,
            _ => {
                return Err(Error::Domain(format!(
                    "unknown space `{s}` (expected jac, j, barjac or barj)"
                )))
            }
        })
    }
}

fn space_allows(space: Space, label: Label) -> bool {
    match label {
        Label::L10 => true,
        Label::L01 | Label::L11 => matches!(space, Space::Jac | Space::BarJac),
        Label::Xi => matches!(space, Space::J | Space::BarJ),
        Label::Boundary(_) => matches!(space, Space::BarJac | Space::BarJ),
    }
}

/// Integer combination of basis labels, tagged with its space. Zero
/// coefficients are never stored, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicElement {
    space: Space,
    coeffs: BTreeMap<Label, i64>,
}

impl PicElement {
    pub fn zero(space: Space) -> Self {
        PicElement {
            space,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn single(space: Space, label: Label, coeff: i64) -> Result<Self> {
        Self::from_coeffs(space, [(label, coeff)])
    }

    /// Builds an element, rejecting labels outside the space's basis.
    /// Repeated labels are summed; zero coefficients dropped.
    pub fn from_coeffs<I>(space: Space, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, i64)>,
    {
        let mut map: BTreeMap<Label, i64> = BTreeMap::new();
        for (label, c) in coeffs {
            if !space_allows(space, label) {
                return Err(Error::Domain(format!(
                    "label {label} does not belong to the {space} basis"
                )));
            }
            let entry = map.entry(label).or_insert(0);
            *entry = entry
                .checked_add(c)
                .ok_or_else(|| Error::Range(format!("coefficient of {label} overflows")))?;
        }
        map.retain(|_, c| *c != 0);
        Ok(PicElement { space, coeffs: map })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn coeff(&self, label: Label) -> i64 {
        self.coeffs.get(&label).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<Label, i64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::Domain(format!(
                "cannot add elements of {} and {}",
                self.space, other.space
            )));
        }
        let merged = self
            .coeffs
            .iter()
            .chain(other.coeffs.iter())
            .map(|(&l, &c)| (l, c));
        Self::from_coeffs(self.space, merged)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1)?)
    }

    pub fn scaled(&self, factor: i64) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (&l, &c) in &self.coeffs {
            let scaled = c
                .checked_mul(factor)
                .ok_or_else(|| Error::Range(format!("coefficient of {l} overflows")))?;
            if scaled != 0 {
                coeffs.insert(l, scaled);
            }
        }
        Ok(PicElement {
            space: self.space,
            coeffs,
        })
    }

    /// Drops the boundary labels: barjac -> jac, barj -> j. Open-space
    /// elements pass through unchanged.
    pub fn restrict_to_open(&self) -> Self {
        let space = match self.space {
            Space::BarJac => Space::Jac,
            Space::BarJ => Space::J,
            open => open,
        };
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(l, _)| !matches!(l, Label::Boundary(_)))
            .map(|(&l, &c)| (l, c))
            .collect();
        PicElement { space, coeffs }
    }

    /// Rewrites Xi in the L01/L11 basis: j -> jac, barj -> barjac.
    /// Elements already over the larger basis pass through unchanged.
    pub fn expand_xi(&self, gd: GD) -> Result<Self> {
        let space = match self.space {
            Space::J => Space::Jac,
            Space::BarJ => Space::BarJac,
            open => return Ok(PicElement { space: open, coeffs: self.coeffs.clone() }),
        };
        let (p, q, _) = xi_exponents(gd);
        let mut out = Vec::new();
        for (&l, &c) in &self.coeffs {
            if l == Label::Xi {
                let err = || Error::Range("Xi expansion overflows".into());
                out.push((Label::L01, c.checked_mul(p).ok_or_else(err)?));
                out.push((Label::L11, c.checked_mul(-q).ok_or_else(err)?));
            } else {
                out.push((l, c));
            }
        }
        Self::from_coeffs(space, out)
    }

    /// Checks that every boundary label used actually exists for (g, d).
    pub fn validate_labels_for(&self, gd: GD) -> Result<()> {
        let valid: BTreeSet<BoundaryLabel> =
            boundary_table(gd).labels().into_iter().collect();
        for l in self.coeffs.keys() {
            if let Label::Boundary(b) = l {
                if !valid.contains(b) {
                    return Err(Error::Domain(format!(
                        "boundary label {b} does not exist for g = {}, d = {}",
                        gd.g(),
                        gd.d()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    space: Space,
    #[serde(default)]
    coeffs: BTreeMap<Label, i64>,
}

impl Serialize for PicElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Ref<'a> {
            space: Space,
            coeffs: &'a BTreeMap<Label, i64>,
        }
        Ref {
            space: self.space,
            coeffs: &self.coeffs,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PicElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawElement::deserialize(deserializer)?;
        PicElement::from_coeffs(raw.space, raw.coeffs).map_err(D::Error::custom)
    }
}

/// One boundary divisor: its label, the index i of the underlying divisor
/// of the moduli of curves, the vine type (i, g-i), and the generic
/// multidegree(s) on the associated one-node curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryEntry {
    pub label: BoundaryLabel,
    pub i: i64,
    pub split: bool,
    pub vine: (i64, i64),
    pub multidegree: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryTable {
    pub g: i64,
    pub d: i64,
    pub entries: Vec<BoundaryEntry>,
}

impl BoundaryTable {
    pub fn labels(&self) -> Vec<BoundaryLabel> {
        self.entries.iter().map(|e| e.label).collect()
    }

    pub fn count(&self) -> usize {
        self.entries.len()
    }
}

/// Dual graph of the generic curve over the index-i boundary divisor:
/// irreducible one-nodal for i = 0, otherwise the (i, g-i) vine with one
/// node.
pub fn entry_graph(g: i64, i: i64) -> Result<DualGraph> {
    if g < 3 {
        return Err(Error::Domain(format!("genus must be at least 3, got {g}")));
    }
    if i < 0 || 2 * i > g {
        return Err(Error::Range(format!(
            "boundary index {i} outside 0..={}",
            g / 2
        )));
    }
    if i == 0 {
        DualGraph::new(&[("C", (g - 1) as u32)], &[("C", "C")])
    } else {
        DualGraph::new(&[("C1", i as u32), ("C2", (g - i) as u32)], &[("C1", "C2")])
    }
}

/// The boundary divisors of the compactification for (g, d), with their
/// generic multidegrees.
///
/// For i >= 1 put x = d(2i-1)/(2g-2). When k does not divide 2i-1, x is
/// never a half-integer and the divisor is the single `di` with the
/// nearest-integer multidegree. When k | (2i-1), x is exactly a
/// half-integer: for i < g/2 the divisor splits into `di_1`/`di_2`
/// carrying the two adjacent integer multidegrees, and for i = g/2 the
/// two choices are swapped by the vine's symmetry, giving the single
/// divisor `dg2`. The index-0 divisor `d0` is always present and never
/// splits.
pub fn boundary_table(gd: GD) -> BoundaryTable {
    let (g, d) = (gd.g(), gd.d());
    let k = invariants(gd).k;
    let mut entries = vec![BoundaryEntry {
        label: BoundaryLabel::D0,
        i: 0,
        split: false,
        vine: (0, g),
        multidegree: vec![d],
    }];
    for i in 1..=g / 2 {
        let x = Rat::new(d * (2 * i - 1), 2 * g - 2);
        let y = Rat::new(d * (2 * (g - i) - 1), 2 * g - 2);
        debug_assert_eq!(x + y, Rat::from_integer(d));
        let tie = (x * 2).is_integer() && !x.is_integer();
        if (2 * i - 1) % k == 0 {
            assert!(tie, "k | (2i-1) must force a half-integer bound");
            let lo = (x - Rat::new(1, 2)).to_integer();
            if 2 * i == g {
                assert!(d.rem_euclid(2) == 1, "the doubled divisor needs d odd");
                entries.push(BoundaryEntry {
                    label: BoundaryLabel::Dg2,
                    i,
                    split: false,
                    vine: (i, g - i),
                    multidegree: vec![(d - 1) / 2, (d + 1) / 2],
                });
            } else {
                entries.push(BoundaryEntry {
                    label: BoundaryLabel::Di1(i),
                    i,
                    split: true,
                    vine: (i, g - i),
                    multidegree: vec![lo, d - lo],
                });
                entries.push(BoundaryEntry {
                    label: BoundaryLabel::Di2(i),
                    i,
                    split: true,
                    vine: (i, g - i),
                    multidegree: vec![lo + 1, d - lo - 1],
                });
            }
        } else {
            assert!(!tie, "k does not divide 2i-1, so no half-integer bound");
            let a = (x + Rat::new(1, 2)).floor().to_integer();
            let b = (y + Rat::new(1, 2)).floor().to_integer();
            assert_eq!(a + b, d);
            entries.push(BoundaryEntry {
                label: BoundaryLabel::Di(i),
                i,
                split: false,
                vine: (i, g - i),
                multidegree: vec![a, b],
            });
        }
    }
    BoundaryTable { g, d, entries }
}

/// Pullback of the index-i boundary divisor of the moduli of curves: the
/// matching label, the sum of the split pair, or twice `dg2`.
pub fn pullback_boundary(gd: GD, i: i64) -> Result<PicElement> {
    let g = gd.g();
    if i < 0 || 2 * i > g {
        return Err(Error::Range(format!(
            "boundary index {i} outside 0..={}",
            g / 2
        )));
    }
    let k = invariants(gd).k;
    let coeffs: Vec<(Label, i64)> = if i == 0 {
        vec![(Label::Boundary(BoundaryLabel::D0), 1)]
    } else if (2 * i - 1) % k != 0 {
        vec![(Label::Boundary(BoundaryLabel::Di(i)), 1)]
    } else if 2 * i == g {
        vec![(Label::Boundary(BoundaryLabel::Dg2), 2)]
    } else {
        vec![
            (Label::Boundary(BoundaryLabel::Di1(i)), 1),
            (Label::Boundary(BoundaryLabel::Di2(i)), 1),
        ]
    };
    PicElement::from_coeffs(Space::BarJac, coeffs)
}

/// Pullback of the total boundary of the moduli of curves. Note the
/// coefficient 2 on `dg2` when present.
pub fn total_boundary(gd: GD) -> PicElement {
    let mut acc = PicElement::zero(Space::BarJac);
    for i in 0..=gd.g() / 2 {
        let part = pullback_boundary(gd, i).expect("index in range");
        acc = acc.add(&part).expect("small coefficients");
    }
    acc
}

/// Basis tag for exact-rational class vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QBasis {
    Kappa,
    Pairing,
}

impl QBasis {
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            QBasis::Kappa => &["kappa10", "kappa01", "kappa_12", "delta"],
            QBasis::Pairing => &["etaeta", "etaL", "LL"],
        }
    }
}

/// Exact rational coefficients over a [`QBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QClass {
    pub basis: QBasis,
    pub coeffs: Vec<Rat>,
}

impl QClass {
    pub fn new(basis: QBasis, coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.len() != basis.labels().len() {
            return Err(Error::Domain(format!(
                "basis has {} labels, got {} coefficients",
                basis.labels().len(),
                coeffs.len()
            )));
        }
        Ok(QClass { basis, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::Domain("mismatched rational-class bases".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        QClass::new(self.basis, coeffs)
    }

    pub fn scale(&self, factor: Rat) -> Self {
        QClass {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }
}

impl Serialize for QClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            basis: QBasis,
            labels: &'a [&'static str],
            coeffs: Vec<String>,
        }
        Raw {
            basis: self.basis,
            labels: self.basis.labels(),
            coeffs: self.coeffs.iter().map(|c| format_ratio(*c)).collect(),
        }
        .serialize(serializer)
    }
}

/// Caps shared by the degree-one Riemann-Roch formulas below; keeps every
/// intermediate product inside i64.
const MAX_TWIST: i64 = 1_000_000;

fn check_twist(n: i64, m: i64) -> Result<()> {
    if n.abs() > MAX_TWIST || m.abs() > MAX_TWIST {
        return Err(Error::Range(format!(
            "twist exponents ({n}, {m}) exceed the supported range |n|, |m| <= {MAX_TWIST}"
        )));
    }
    Ok(())
}

/// Degree-one part of the Riemann-Roch expansion of the (n, m) twist, in
/// the kappa basis: ((6n^2-6n+1)/12, (2nm-m)/2, m^2/2, 1/12).
pub fn grr_degree_one(n: i64, m: i64) -> Result<QClass> {
    check_twist(n, m)?;
    QClass::new(
        QBasis::Kappa,
        vec![
            Rat::new(6 * n * n - 6 * n + 1, 12),
            Rat::new(2 * n * m - m, 2),
            Rat::new(m * m, 2),
            Rat::new(1, 12),
        ],
    )
}

/// a(a-1)/2, defined for every integer (so binom2(-1) = 1).
fn binom2(a: i64) -> i64 {
    a * (a - 1) / 2
}

/// Expresses the (n, m) determinant bundle over the compactification in
/// the free basis: coefficients 6n^2-6n-m^2+1 on L10, -mn + binom2(m+1)
/// on L01, mn + binom2(m) on L11, and -binom2(n) times the total
/// boundary.
pub fn reduce_lambda(gd: GD, n: i64, m: i64) -> Result<PicElement> {
    check_twist(n, m)?;
    let free = PicElement::from_coeffs(
        Space::BarJac,
        [
            (Label::L10, 6 * n * n - 6 * n + 1 - m * m),
            (Label::L01, -m * n + binom2(m + 1)),
            (Label::L11, m * n + binom2(m)),
        ],
    )?;
    free.add(&total_boundary(gd).scaled(-binom2(n))?)
}

/// The three canonical-class pairings reducible to the free basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KClass {
    K10,
    K01,
    Km12,
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KClass::K10 => "K10",
            KClass::K01 => "K01",
            KClass::Km12 => "K-12",
        })
    }
}

impl FromStr for KClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "K10" | "k10" => KClass::K10,
            "K01" | "k01" => KClass::K01,
            "K-12" | "k-12" | "K_12" | "k_12" => KClass::Km12,
            _ => {
                return Err(Error::Domain(format!(
                    "unknown pairing class `{s}` (expected k10, k01 or k-12)"
                )))
            }
        })
    }
}

/// K10 = 12 L10 - total boundary; K01 = L11 - L01; K-12 = L01 + L11 - 2 L10.
pub fn reduce_k(gd: GD, which: KClass) -> PicElement {
    let e = |coeffs: &[(Label, i64)]| {
        PicElement::from_coeffs(Space::BarJac, coeffs.iter().copied())
            .expect("fixed small coefficients")
    };
    match which {
        KClass::K10 => e(&[(Label::L10, 12)])
            .sub(&total_boundary(gd))
            .expect("small coefficients"),
        KClass::K01 => e(&[(Label::L01, -1), (Label::L11, 1)]),
        KClass::Km12 => e(&[(Label::L10, -2), (Label::L01, 1), (Label::L11, 1)]),
    }
}

/// Weight of the scalar automorphism action: 0 on L10 and on boundary
/// pullbacks, d-g+1 on L01, d+g-1 on L11. Identically 0 on the j/barj
/// bases (they consist of weight-0 classes by construction).
pub fn res_weight(gd: GD, elem: &PicElement) -> Result<i64> {
    if matches!(elem.space(), Space::J | Space::BarJ) {
        return Ok(0);
    }
    let (g, d) = (gd.g(), gd.d());
    let mut acc: i128 = 0;
    for (&label, &c) in elem.coeffs() {
        let w: i64 = match label {
            Label::L01 => d - g + 1,
            Label::L11 => d + g - 1,
            _ => 0,
        };
        acc += c as i128 * w as i128;
    }
    i64::try_from(acc).map_err(|_| Error::Range("residual weight overflows".into()))
}

/// Exponents (p, q, G) with G = gcd(d+g-1, d-g+1), p = (d+g-1)/G,
/// q = (d-g+1)/G; Xi = L01^p * L11^(-q).
pub fn xi_exponents(gd: GD) -> (i64, i64, i64) {
    let (g, d) = (gd.g(), gd.d());
    let big = crate::arith::gcd(d + g - 1, d - g + 1);
    debug_assert_eq!(big, invariants(gd).gerbe_order);
    debug_assert!(big > 0);
    ((d + g - 1) / big, (d - g + 1) / big, big)
}

/// Xi written over the jac basis.
pub fn xi_element(gd: GD) -> PicElement {
    let (p, q, _) = xi_exponents(gd);
    let elem = PicElement::from_coeffs(Space::Jac, [(Label::L01, p), (Label::L11, -q)])
        .expect("L labels belong to jac");
    debug_assert_eq!(res_weight(gd, &elem).expect("small weights"), 0);
    elem
}

/// Decides whether a jac-basis element lies in the subgroup generated by
/// L10 and Xi; if so returns the unique (a, t) with elem = a L10 + t Xi.
/// Present exactly when the residual weight vanishes.
pub fn membership_j(gd: GD, elem: &PicElement) -> Result<Option<(i64, i64)>> {
    if elem.space() != Space::Jac {
        return Err(Error::Domain(format!(
            "membership test needs a jac-basis element, got {}",
            elem.space()
        )));
    }
    if res_weight(gd, elem)? != 0 {
        return Ok(None);
    }
    let (p, q, _) = xi_exponents(gd);
    let a = elem.coeff(Label::L10);
    let (c01, c11) = (elem.coeff(Label::L01), elem.coeff(Label::L11));
    // res = 0 forces c01*q = -c11*p; with gcd(p, q) = 1 the division below
    // is exact
    let t = if p != 0 {
        debug_assert_eq!(c01 % p, 0);
        c01 / p
    } else {
        debug_assert_eq!(q, -1);
        debug_assert_eq!(c01, 0);
        -c11 / q
    };
    debug_assert_eq!(c01 as i128, t as i128 * p as i128);
    debug_assert_eq!(c11 as i128, -(t as i128) * q as i128);
    Ok(Some((a, t)))
}

/// Multiple of the principal polarisation cut out on a fiber Jacobian:
/// 0 on L10 and k on Xi, for j-basis elements.
pub fn chi_d(gd: GD, elem: &PicElement) -> Result<i64> {
    if elem.space() != Space::J {
        return Err(Error::Domain(format!(
            "chi needs a j-basis element, got {}",
            elem.space()
        )));
    }
    let k = invariants(gd).k;
    let raw = elem.coeff(Label::Xi) as i128 * k as i128;
    i64::try_from(raw).map_err(|_| Error::Range("chi value overflows".into()))
}

/// Rank and basis bookkeeping for one of the four groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub space: Space,
    pub rank: i64,
    pub basis: Vec<String>,
    pub boundary_count: i64,
    pub rank_increase_over_open: i64,
    pub res_image_generator: i64,
}

/// Free presentation of the requested group: jac has rank 3, j rank 2,
/// and each compactification adds one generator per boundary label. The
/// residual weight map has image generated by the gerbe order on the
/// stack bases and vanishes on the rigidified ones.
pub fn presentation(gd: GD, space: Space) -> Presentation {
    let gerbe = invariants(gd).gerbe_order;
    let (open_basis, res_gen): (&[&str], i64) = match space {
        Space::Jac | Space::BarJac => (&["L10", "L01", "L11"], gerbe),
        Space::J | Space::BarJ => (&["L10", "Xi"], 0),
    };
    let mut basis: Vec<String> = open_basis.iter().map(|s| s.to_string()).collect();
    let boundary = match space {
        Space::BarJac | Space::BarJ => {
            let labels = boundary_table(gd).labels();
            basis.extend(labels.iter().map(|l| l.to_string()));
            labels.len() as i64
        }
        _ => 0,
    };
    Presentation {
        space,
        rank: open_basis.len() as i64 + boundary,
        basis,
        boundary_count: boundary,
        rank_increase_over_open: boundary,
        res_image_generator: res_gen,
    }
}

/// Coefficients over the topological basis (lambda, zeta, kappa_12) of
/// the second cohomology, with the eta-decomposition when the class comes
/// from the rigidification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopoClass {
    pub lambda: Rat,
    pub zeta: Rat,
    pub kappa_12: Rat,
    pub integral: bool,
    pub eta: Option<EtaDecomposition>,
}

/// Coefficients over (lambda, eta) for residual-weight-0 classes, via
/// c1(Xi) = eta + p*lambda.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EtaDecomposition {
    pub lambda: i64,
    pub eta: i64,
}

impl Serialize for TopoClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            lambda: String,
            zeta: String,
            kappa_12: String,
            integral: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            eta: &'a Option<EtaDecomposition>,
        }
        Raw {
            lambda: format_ratio(self.lambda),
            zeta: format_ratio(self.zeta),
            kappa_12: format_ratio(self.kappa_12),
            integral: self.integral,
            eta: &self.eta,
        }
        .serialize(serializer)
    }
}

/// First Chern class in the topological basis: L10 -> lambda,
/// L11 -> -zeta, L01 -> lambda + zeta + kappa_12.
pub fn topo_class(gd: GD, elem: &PicElement) -> Result<TopoClass> {
    if elem.space() != Space::Jac {
        return Err(Error::Domain(format!(
            "topological classes need a jac-basis element, got {}",
            elem.space()
        )));
    }
    let (a, b, c) = (
        elem.coeff(Label::L10) as i128,
        elem.coeff(Label::L01) as i128,
        elem.coeff(Label::L11) as i128,
    );
    let narrow = |v: i128, what: &str| {
        i64::try_from(v).map_err(|_| Error::Range(format!("{what} coefficient overflows")))
    };
    let lambda = narrow(a + b, "lambda")?;
    let zeta = narrow(b - c, "zeta")?;
    let kappa = narrow(b, "kappa_12")?;
    let eta = match membership_j(gd, elem)? {
        None => None,
        Some((l10, t)) => {
            let (p, _, _) = xi_exponents(gd);
            Some(EtaDecomposition {
                lambda: narrow(l10 as i128 + t as i128 * p as i128, "lambda")?,
                eta: t,
            })
        }
    };
    Ok(TopoClass {
        lambda: Rat::from_integer(lambda),
        zeta: Rat::from_integer(zeta),
        kappa_12: Rat::from_integer(kappa),
        integral: true,
        eta,
    })
}

/// Result of the spin-curve determinant computation: the theta exponent
/// -k(k+e)e/2 and the symbolic check that the three determinant classes
/// combine to exactly that multiple of the eta-eta pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaRelation {
    pub k: i64,
    pub e: i64,
    pub exponent: i64,
    pub lhs: QClass,
    pub expected: QClass,
    pub verified: bool,
}

type BigRat = num_rational::Ratio<i128>;

/// Determinant class of the (n, m) twist on the spin-curve side, in the
/// pairing basis; the quadratic form has k baked in.
fn pairing_class(k: i128, n: i128, m: i128) -> [BigRat; 3] {
    [
        BigRat::new(6 * n * n - 6 * k * n + k * k, 12),
        BigRat::new(2 * m * n - k * m, 2),
        BigRat::new(m * m, 2),
    ]
}

/// Computes (k+e) D(0,1) - e D(k,1) - k D(-e,1) in the pairing basis and
/// compares it with the predicted (-k(k+e)e/2) <eta,eta>.
pub fn theta_relation(gd: GD) -> ThetaRelation {
    let inv = invariants(gd);
    let (k, e) = (inv.k, inv.e);
    let (ki, ei) = (k as i128, e as i128);
    let d01 = pairing_class(ki, 0, 1);
    let dk1 = pairing_class(ki, ki, 1);
    let de1 = pairing_class(ki, -ei, 1);
    let mut lhs = [BigRat::zero(); 3];
    for j in 0..3 {
        lhs[j] = BigRat::from_integer(ki + ei) * d01[j]
            - BigRat::from_integer(ei) * dk1[j]
            - BigRat::from_integer(ki) * de1[j];
    }
    let numer = -ki * (ki + ei) * ei;
    assert_eq!(numer % 2, 0, "k(k+e)e is even: k odd forces e or k+e even");
    let exponent128 = numer / 2;
    let expected = [
        BigRat::from_integer(exponent128),
        BigRat::zero(),
        BigRat::zero(),
    ];
    let verified = lhs == expected;
    let narrow = |r: &BigRat| -> Rat {
        Rat::new(
            i64::try_from(*r.numer()).expect("reduced theta coefficient fits i64"),
            i64::try_from(*r.denom()).expect("reduced theta denominator fits i64"),
        )
    };
    ThetaRelation {
        k,
        e,
        exponent: i64::try_from(exponent128).expect("exponent fits i64 under the genus cap"),
        lhs: QClass::new(QBasis::Pairing, lhs.iter().map(narrow).collect())
            .expect("three coefficients"),
        expected: QClass::new(QBasis::Pairing, expected.iter().map(narrow).collect())
            .expect("three coefficients"),
        verified,
    }
}
