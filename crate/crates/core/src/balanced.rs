//! The basic inequality, balanced-multidegree predicates and enumeration,
//! and the degree-speciality test.
//!
//! All bound computations use exact `i64` rationals; the half-integer edge
//! cases decide whether a boundary divisor splits, so floating point is
//! banned from this module.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::arith::{invariants, GD};
use crate::dualgraph::{CurveClass, DualGraph, Subcurve, SubcurveMode};
use crate::error::{Error, Result};

pub type Rat = Rational64;

/// Renders a rational as `p` or `p/q`, never as a decimal.
pub fn format_ratio(r: Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest total degree accepted by the balance routines.
pub const MAX_BALANCE_DEGREE: i64 = 1_000_000_000;

/// One integer per vertex of an associated graph, in vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// Lower and upper bound of the basic inequality for one subcurve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BalanceBounds {
    pub lo: Rat,
    pub hi: Rat,
}

fn check_degree(d: i64) -> Result<()> {
    if d.abs() > MAX_BALANCE_DEGREE {
        return Err(Error::Domain(format!(
            "|d| = {} exceeds the supported maximum {MAX_BALANCE_DEGREE}",
            d.abs()
        )));
    }
    Ok(())
}

/// Bounds `d*w_Z/(2g-2) -+ k_Z/2` for the subcurve `z`. Requires total
/// genus at least 2.
pub fn basic_bounds(graph: &DualGraph, z: Subcurve, d: i64) -> Result<BalanceBounds> {
    check_degree(d)?;
    let g = graph.total_genus();
    if g < 2 {
        return Err(Error::Domain(format!(
            "basic inequality needs total genus >= 2, graph has genus {g}"
        )));
    }
    let stats = graph.subcurve_stats(z);
    let center = Rat::new(d * stats.w, 2 * g - 2);
    let half_k = Rat::new(stats.k, 2);
    Ok(BalanceBounds {
        lo: center - half_k,
        hi: center + half_k,
    })
}

/// Why a multidegree failed the properly-balanced test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BalanceWitness {
    /// First subcurve (in enumeration order) violating the basic inequality.
    Bounds {
        subcurve: Vec<String>,
        degree: i64,
        lo: Rat,
        hi: Rat,
    },
    /// An exceptional vertex whose degree is not 1.
    ExceptionalDegree { vertex: String, degree: i64 },
}

impl Serialize for BalanceWitness {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "snake_case")]
        enum Raw<'a> {
            Bounds {
                subcurve: &'a [String],
                degree: i64,
                lo: String,
                hi: String,
            },
            ExceptionalDegree {
                vertex: &'a str,
                degree: i64,
            },
        }
        match self {
            BalanceWitness::Bounds {
                subcurve,
                degree,
                lo,
                hi,
            } => Raw::Bounds {
                subcurve,
                degree: *degree,
                lo: format_ratio(*lo),
                hi: format_ratio(*hi),
            },
            BalanceWitness::ExceptionalDegree { vertex, degree } => Raw::ExceptionalDegree {
                vertex,
                degree: *degree,
            },
        }
        .serialize(serializer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceCheck {
    pub balanced: bool,
    pub witness: Option<BalanceWitness>,
}

fn require_quasistable(graph: &DualGraph) -> Result<()> {
    let class = graph.classify()?;
    if !class.is_quasistable() {
        return Err(Error::Domain(format!(
            "multidegree predicates need a quasistable graph, got a {class} one"
        )));
    }
    Ok(())
}

fn require_md_shape(graph: &DualGraph, md: &Multidegree) -> Result<()> {
    if md.0.len() != graph.n_vertices() {
        return Err(Error::Domain(format!(
            "multidegree has {} entries for a graph with {} vertices",
            md.0.len(),
            graph.n_vertices()
        )));
    }
    check_degree(md.total())
}

fn subcurve_degree(md: &Multidegree, z: Subcurve) -> i64 {
    md.0
        .iter()
        .enumerate()
        .filter(|&(v, _)| z.contains(v))
        .map(|(_, &deg)| deg)
        .sum()
}

/// Checks the basic inequality on every subcurve of the given mode plus the
/// degree-1 condition on exceptional vertices.
///
/// Restricting to subcurves connected on both sides loses nothing: for a
/// disconnected subcurve both the degree and the lower bound are sums over
/// its components, and for a connected subcurve with disconnected complement
/// each complement component already has the whole rest of the graph as its
/// connected complement, so the failed inequality reappears on a subcurve
/// the restricted sweep does visit. The equality of the two modes is also
/// exercised wholesale by the differential test against the all-subsets
/// oracle.
pub fn is_properly_balanced_mode(
    graph: &DualGraph,
    md: &Multidegree,
    mode: SubcurveMode,
) -> Result<BalanceCheck> {
    require_quasistable(graph)?;
    require_md_shape(graph, md)?;
    for v in 0..graph.n_vertices() {
        if graph.is_exceptional(v) && md.0[v] != 1 {
            return Ok(BalanceCheck {
                balanced: false,
                witness: Some(BalanceWitness::ExceptionalDegree {
                    vertex: graph.id(v).to_owned(),
                    degree: md.0[v],
                }),
            });
        }
    }
    let d = md.total();
    for z in graph.subcurves(mode) {
        let bounds = basic_bounds(graph, z, d)?;
        let deg = Rat::from_integer(subcurve_degree(md, z));
        if deg < bounds.lo || deg > bounds.hi {
            return Ok(BalanceCheck {
                balanced: false,
                witness: Some(BalanceWitness::Bounds {
                    subcurve: z.ids(graph),
                    degree: subcurve_degree(md, z),
                    lo: bounds.lo,
                    hi: bounds.hi,
                }),
            });
        }
    }
    Ok(BalanceCheck {
        balanced: true,
        witness: None,
    })
}

pub fn is_properly_balanced(graph: &DualGraph, md: &Multidegree) -> Result<BalanceCheck> {
    is_properly_balanced_mode(graph, md, SubcurveMode::ConnectedBothSides)
}

/// A properly balanced multidegree is strictly balanced when every subcurve
/// attaining its lower bound meets the complement only in exceptional
/// vertices. Errors if the input is not properly balanced.
///
/// The same both-sides-connected reduction applies: if a subcurve attains
/// its lower bound, so does every piece of the decomposition used above, and
/// its cut edges are exactly the union of the pieces' cut edges.
pub fn is_strictly_balanced_mode(
    graph: &DualGraph,
    md: &Multidegree,
    mode: SubcurveMode,
) -> Result<bool> {
    let proper = is_properly_balanced_mode(graph, md, mode)?;
    if !proper.balanced {
        return Err(Error::Domain(
            "strict balance is only defined for properly balanced multidegrees".into(),
        ));
    }
    let exc: Vec<bool> = (0..graph.n_vertices())
        .map(|v| graph.is_exceptional(v))
        .collect();
    for z in graph.subcurves(mode) {
        let bounds = basic_bounds(graph, z, md.total())?;
        if Rat::from_integer(subcurve_degree(md, z)) != bounds.lo {
            continue;
        }
        for &(a, b) in graph.edges() {
            if z.contains(a) != z.contains(b) && !exc[a] && !exc[b] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_strictly_balanced(graph: &DualGraph, md: &Multidegree) -> Result<bool> {
    is_strictly_balanced_mode(graph, md, SubcurveMode::ConnectedBothSides)
}

/// Integer interval allowed for one vertex: its singleton basic inequality,
/// sharpened to exactly 1 on exceptional vertices.
fn vertex_box(graph: &DualGraph, d: i64) -> Result<Vec<(i64, i64)>> {
    let n = graph.n_vertices();
    if n == 1 {
        return Ok(vec![(d, d)]);
    }
    let mut boxes = Vec::with_capacity(n);
    for v in 0..n {
        if graph.is_exceptional(v) {
            boxes.push((1, 1));
            continue;
        }
        let z = Subcurve::from_mask(1 << v, graph).expect("singleton is proper for n >= 2");
        let b = basic_bounds(graph, z, d)?;
        boxes.push((b.lo.ceil().to_integer(), b.hi.floor().to_integer()));
    }
    Ok(boxes)
}

fn enumerate_from(
    graph: &DualGraph,
    boxes: &[(i64, i64)],
    prefix: &mut Vec<i64>,
    remaining: i64,
    suffix_min: &[i64],
    suffix_max: &[i64],
    strict: bool,
    mode: SubcurveMode,
    out: &mut Vec<Multidegree>,
) -> Result<()> {
    let i = prefix.len();
    if i == boxes.len() {
        debug_assert_eq!(remaining, 0);
        let md = Multidegree(prefix.clone());
        let keep = if strict {
            is_properly_balanced_mode(graph, &md, mode)?.balanced
                && is_strictly_balanced_mode(graph, &md, mode)?
        } else {
            is_properly_balanced_mode(graph, &md, mode)?.balanced
        };
        if keep {
            out.push(md);
        }
        return Ok(());
    }
    let (lo, hi) = boxes[i];
    // keep only values the remaining coordinates can still absorb
    let lo = lo.max(remaining - suffix_max[i + 1]);
    let hi = hi.min(remaining - suffix_min[i + 1]);
    for v in lo..=hi {
        prefix.push(v);
        enumerate_from(
            graph,
            boxes,
            prefix,
            remaining - v,
            suffix_min,
            suffix_max,
            strict,
            mode,
            out,
        )?;
        prefix.pop();
    }
    Ok(())
}

fn enumeration_setup(graph: &DualGraph, d: i64) -> Result<(Vec<(i64, i64)>, Vec<i64>, Vec<i64>)> {
    require_quasistable(graph)?;
    check_degree(d)?;
    if graph.total_genus() < 2 {
        return Err(Error::Domain(format!(
            "enumeration needs total genus >= 2, graph has genus {}",
            graph.total_genus()
        )));
    }
    let boxes = vertex_box(graph, d)?;
    let n = boxes.len();
    let mut suffix_min = vec![0i64; n + 1];
    let mut suffix_max = vec![0i64; n + 1];
    for i in (0..n).rev() {
        suffix_min[i] = suffix_min[i + 1] + boxes[i].0;
        suffix_max[i] = suffix_max[i + 1] + boxes[i].1;
    }
    Ok((boxes, suffix_min, suffix_max))
}

/// All multidegrees of total degree `d` passing the selected predicate, in
/// lexicographic order. Single-threaded.
pub fn enumerate_balanced_sequential(
    graph: &DualGraph,
    d: i64,
    strict: bool,
) -> Result<Vec<Multidegree>> {
    enumerate_balanced_mode_sequential(graph, d, strict, SubcurveMode::ConnectedBothSides)
}

pub fn enumerate_balanced_mode_sequential(
    graph: &DualGraph,
    d: i64,
    strict: bool,
    mode: SubcurveMode,
) -> Result<Vec<Multidegree>> {
    let (boxes, suffix_min, suffix_max) = enumeration_setup(graph, d)?;
    let mut out = Vec::new();
    enumerate_from(
        graph,
        &boxes,
        &mut Vec::new(),
        d,
        &suffix_min,
        &suffix_max,
        strict,
        mode,
        &mut out,
    )?;
    Ok(out)
}

/// Like [`enumerate_balanced_mode_sequential`], but splits the search on the
/// first coordinate across the thread pool when the `parallel` feature is
/// on. Results are identical either way.
#[allow(clippy::let_and_return)]
pub fn enumerate_balanced_mode(
    graph: &DualGraph,
    d: i64,
    strict: bool,
    mode: SubcurveMode,
) -> Result<Vec<Multidegree>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let (boxes, suffix_min, suffix_max) = enumeration_setup(graph, d)?;
        if boxes.len() <= 1 {
            return enumerate_balanced_mode_sequential(graph, d, strict, mode);
        }
        let (lo, hi) = boxes[0];
        let lo = lo.max(d - suffix_max[1]);
        let hi = hi.min(d - suffix_min[1]);
        if lo > hi {
            return Ok(Vec::new());
        }
        let branches: Vec<Result<Vec<Multidegree>>> = (lo..=hi)
            .into_par_iter()
            .map(|first| {
                let mut prefix = vec![first];
                let mut out = Vec::new();
                enumerate_from(
                    graph,
                    &boxes,
                    &mut prefix,
                    d - first,
                    &suffix_min,
                    &suffix_max,
                    strict,
                    mode,
                    &mut out,
                )?;
                Ok(out)
            })
            .collect();
        let mut out = Vec::new();
        for b in branches {
            out.extend(b?);
        }
        Ok(out)
    }
    #[cfg(not(feature = "parallel"))]
    enumerate_balanced_mode_sequential(graph, d, strict, mode)
}

pub fn enumerate_balanced(graph: &DualGraph, d: i64, strict: bool) -> Result<Vec<Multidegree>> {
    enumerate_balanced_mode(graph, d, strict, SubcurveMode::ConnectedBothSides)
}

/// Two smooth components of genera `g1`, `g2` joined by `k` nodes.
pub fn vine_graph(g1: u32, g2: u32, k: usize) -> Result<DualGraph> {
    if k == 0 {
        return Err(Error::Domain("a vine curve needs at least one node".into()));
    }
    let edges = vec![("C1", "C2"); k];
    DualGraph::new(&[("C1", g1), ("C2", g2)], &edges)
}

/// Divisibility test deciding speciality of the stable vine of type
/// `(i, g - i - k + 1)` with `k` nodes: the type is d-special exactly when
/// `k_{d,g}` divides `2i - 2 + k`. Symmetric in the two components because
/// `k_{d,g}` divides `2g - 2`.
pub fn is_d_special_vine(gd: GD, i: i64, k_edges: i64) -> Result<bool> {
    let g = gd.g();
    if i < 0 || k_edges < 1 {
        return Err(Error::Domain(format!(
            "invalid vine type: i = {i}, k = {k_edges}"
        )));
    }
    let g2 = g - i - k_edges + 1;
    if g2 < 0 {
        return Err(Error::Domain(format!(
            "vine type (i = {i}, k = {k_edges}) has negative complementary genus for g = {g}"
        )));
    }
    if (i == 0 || g2 == 0) && k_edges < 3 {
        return Err(Error::Domain(format!(
            "vine type (i = {i}, k = {k_edges}) is not stable for g = {g}"
        )));
    }
    Ok((2 * i - 2 + k_edges) % invariants(gd).k == 0)
}

/// Whether some properly balanced multidegree of total degree `d` on this
/// stable graph fails strict balance.
pub fn is_d_special_graph(graph: &DualGraph, d: i64) -> Result<bool> {
    if graph.classify()? != CurveClass::Stable {
        return Err(Error::Domain(
            "the speciality test expects a stable graph".into(),
        ));
    }
    for md in enumerate_balanced(graph, d, false)? {
        if !is_strictly_balanced(graph, &md)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vine112() -> DualGraph {
        vine_graph(1, 1, 2).unwrap()
    }

    #[test]
    fn bounds_examples() {
        let v = vine112();
        let z = Subcurve::from_ids(&["C1"], &v).unwrap();
        let b = basic_bounds(&v, z, 2).unwrap();
        assert_eq!(b.lo, Rat::from_integer(0));
        assert_eq!(b.hi, Rat::from_integer(2));

        let w = vine_graph(1, 2, 1).unwrap();
        let z = Subcurve::from_ids(&["C1"], &w).unwrap();
        let b = basic_bounds(&w, z, 3).unwrap();
        assert_eq!(b.lo, Rat::new(1, 4));
        assert_eq!(b.hi, Rat::new(5, 4));
        assert_eq!(b.hi - b.lo, Rat::from_integer(1));
    }

    #[test]
    fn bounds_complement_symmetry() {
        let v = vine_graph(2, 1, 3).unwrap();
        for d in -4..=7 {
            let z = Subcurve::from_ids(&["C1"], &v).unwrap();
            let b = basic_bounds(&v, z, d).unwrap();
            let bc = basic_bounds(&v, z.complement(&v), d).unwrap();
            assert_eq!(bc.lo, Rat::from_integer(d) - b.hi);
            assert_eq!(bc.hi, Rat::from_integer(d) - b.lo);
        }
    }

    #[test]
    fn proper_balance_examples() {
        let v = vine112();
        assert!(is_properly_balanced(&v, &Multidegree(vec![0, 2])).unwrap().balanced);
        let bad = is_properly_balanced(&v, &Multidegree(vec![3, -1])).unwrap();
        assert!(!bad.balanced);
        match bad.witness.unwrap() {
            BalanceWitness::Bounds { subcurve, degree, .. } => {
                assert_eq!(subcurve, ["C1"]);
                assert_eq!(degree, 3);
            }
            w => panic!("unexpected witness {w:?}"),
        }

        let smooth = DualGraph::new(&[("C", 3)], &[]).unwrap();
        assert!(is_properly_balanced(&smooth, &Multidegree(vec![7])).unwrap().balanced);

        // degree on an exceptional vertex must be exactly 1
        let chain = DualGraph::new(
            &[("C1", 1), ("E", 0), ("C2", 1)],
            &[("C1", "E"), ("E", "C2")],
        )
        .unwrap();
        let res = is_properly_balanced(&chain, &Multidegree(vec![1, 0, 1])).unwrap();
        assert!(!res.balanced);
        assert!(matches!(
            res.witness,
            Some(BalanceWitness::ExceptionalDegree { .. })
        ));
    }

    #[test]
    fn strict_balance_examples() {
        let v = vine112();
        assert!(is_strictly_balanced(&v, &Multidegree(vec![1, 1])).unwrap());
        // C1 attains its lower bound 0 and the joining nodes are not
        // exceptional
        assert!(!is_strictly_balanced(&v, &Multidegree(vec![0, 2])).unwrap());

        let w = vine_graph(1, 2, 1).unwrap();
        assert!(is_strictly_balanced(&w, &Multidegree(vec![1, 2])).unwrap());

        assert!(is_strictly_balanced(&v, &Multidegree(vec![5, -3])).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let v = vine112();
        let proper = enumerate_balanced(&v, 2, false).unwrap();
        assert_eq!(
            proper,
            vec![
                Multidegree(vec![0, 2]),
                Multidegree(vec![1, 1]),
                Multidegree(vec![2, 0]),
            ]
        );
        let strict = enumerate_balanced(&v, 2, true).unwrap();
        assert_eq!(strict, vec![Multidegree(vec![1, 1])]);

        let w = vine_graph(1, 2, 1).unwrap();
        assert_eq!(
            enumerate_balanced(&w, 3, false).unwrap(),
            vec![Multidegree(vec![1, 2])]
        );

        // parallel and sequential paths agree
        for d in -3..=6 {
            assert_eq!(
                enumerate_balanced(&v, d, false).unwrap(),
                enumerate_balanced_sequential(&v, d, false).unwrap()
            );
        }
    }

    #[test]
    fn speciality_examples() {
        let gd = GD::new(3, 2).unwrap();
        assert!(is_d_special_vine(gd, 1, 2).unwrap());
        let gd = GD::new(3, 1).unwrap();
        assert!(!is_d_special_vine(gd, 1, 1).unwrap());

        let smooth = DualGraph::new(&[("C", 3)], &[]).unwrap();
        assert!(!is_d_special_graph(&smooth, 2).unwrap());

        // the fast path rejects unstable types
        assert!(is_d_special_vine(gd, 0, 1).is_err());
        assert!(is_d_special_vine(GD::new(5, 0).unwrap(), 0, 3).is_ok());
    }

    #[test]
    fn ratio_formatting() {
        assert_eq!(format_ratio(Rat::new(3, 1)), "3");
        assert_eq!(format_ratio(Rat::new(1, 4)), "1/4");
        assert_eq!(format_ratio(Rat::new(-5, 2)), "-5/2");
        assert_eq!(format_ratio(Rat::new(2, 4)), "1/2");
    }
}
