//! Release gate: ten timed checks covering the whole library, from
//! boundary combinatorics to the scheme comparison. Each check returns
//! pass/fail with a short diagnostic; the heavyweight ones carry wall
//! clock budgets that are folded into the verdict.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::Ratio;
use serde::Serialize;

use crate::arith::{gcd, invariants, GD};
use crate::balanced::{
    enumerate_balanced_mode, enumerate_balanced_sequential, is_d_special_graph,
    is_d_special_vine, is_properly_balanced, vine_graph, Multidegree, Rat,
};
use crate::compare::{compare_report, pic_j0};
use crate::corpus::random_quasistable_graphs;
use crate::dualgraph::{DualGraph, SubcurveMode};
use crate::error::{Error, Result};
use crate::families::{all_families, family_fh, fh_integers, independence_matrix, FhCase};
use crate::picard::{
    boundary_table, entry_graph, grr_degree_one, membership_j, presentation, reduce_k,
    reduce_lambda, res_weight, theta_relation, topo_class, total_boundary, xi_element,
    xi_exponents, BoundaryLabel, KClass, Label, PicElement, Space,
};

/// Genus/degree window swept by the checks. The degree cap is clamped
/// per genus to the fundamental window [0, 2g-3].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub g_lo: i64,
    pub g_hi: i64,
    /// None means the full window for each genus.
    pub d_max: Option<i64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            g_lo: 3,
            g_hi: 10,
            d_max: None,
        }
    }
}

impl GridSpec {
    pub fn new(g_lo: i64, g_hi: i64, d_max: Option<i64>) -> Result<Self> {
        if g_lo < 3 {
            return Err(Error::Domain(format!(
                "the sweep needs genus at least 3, got {g_lo}"
            )));
        }
        if g_hi < g_lo {
            return Err(Error::Domain(format!(
                "empty genus range {g_lo}..{g_hi}"
            )));
        }
        if g_hi > 1000 {
            return Err(Error::Range(
                "sweeps above genus 1000 are not supported".into(),
            ));
        }
        if let Some(m) = d_max {
            if m < 0 {
                return Err(Error::Domain(format!("negative degree cap {m}")));
            }
        }
        Ok(GridSpec { g_lo, g_hi, d_max })
    }

    /// Parses clauses like `g=3..8 d=0..max` (whitespace separated).
    pub fn parse(spec: &str) -> Result<Self> {
        let defaults = GridSpec::default();
        let (mut g_lo, mut g_hi, mut d_max) = (defaults.g_lo, defaults.g_hi, defaults.d_max);
        for clause in spec.split_whitespace() {
            let Some((key, range)) = clause.split_once('=') else {
                return Err(Error::Domain(format!(
                    "grid clause `{clause}` is not of the form key=lo..hi"
                )));
            };
            let Some((lo, hi)) = range.split_once("..") else {
                return Err(Error::Domain(format!(
                    "grid range `{range}` is not of the form lo..hi"
                )));
            };
            let parse_num = |s: &str| -> Result<i64> {
                s.parse()
                    .map_err(|_| Error::Domain(format!("bad grid bound `{s}`")))
            };
            match key {
                "g" => {
                    g_lo = parse_num(lo)?;
                    g_hi = parse_num(hi)?;
                }
                "d" => {
                    if parse_num(lo)? != 0 {
                        return Err(Error::Domain(
                            "degree ranges start at 0; use d=0..N or d=0..max".into(),
                        ));
                    }
                    d_max = if hi == "max" {
                        None
                    } else {
                        Some(parse_num(hi)?)
                    };
                }
                other => {
                    return Err(Error::Domain(format!(
                        "unknown grid key `{other}` (expected g or d)"
                    )))
                }
            }
        }
        GridSpec::new(g_lo, g_hi, d_max)
    }

    fn d_hi(&self, g: i64) -> i64 {
        let full = 2 * g - 3;
        self.d_max.map_or(full, |m| m.min(full))
    }

    pub fn points(&self) -> Vec<GD> {
        let mut out = Vec::new();
        for g in self.g_lo..=self.g_hi {
            for d in 0..=self.d_hi(g) {
                out.push(GD::new(g, d).expect("validated grid bounds"));
            }
        }
        out
    }
}

/// One row of the verification report.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub index: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u64,
}

type Check = std::result::Result<String, String>;

/// Runs every failing-fast check over the items, in parallel when the
/// feature is on; collected failure messages keep item order.
fn sweep<T, F>(items: &[T], f: F) -> Vec<String>
where
    T: Sync,
    F: Fn(&T) -> Option<String> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().filter_map(|item| f(item)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    items.iter().filter_map(f).collect()
}

fn summarize(scope: String, failures: Vec<String>) -> Check {
    if failures.is_empty() {
        Ok(scope)
    } else {
        Err(format!(
            "{} failure(s), first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

fn point_tag(p: GD) -> String {
    format!("(g={}, d={})", p.g(), p.d())
}

fn crit_boundary(grid: &GridSpec) -> Check {
    for ((g, d), want) in [((3, 2), 3usize), ((3, 1), 2), ((4, 3), 4), ((4, 0), 3)] {
        let table = boundary_table(GD::new(g, d).map_err(|e| e.to_string())?);
        if table.count() != want {
            return Err(format!(
                "(g={g}, d={d}) should carry {want} boundary labels, got {}",
                table.count()
            ));
        }
    }
    let points = grid.points();
    let failures = sweep(&points, |&p| {
        let table = boundary_table(p);
        for entry in &table.entries {
            if entry.multidegree.iter().sum::<i64>() != p.d() {
                return Some(format!(
                    "{} {}: multidegree sums to {} instead of {}",
                    point_tag(p),
                    entry.label,
                    entry.multidegree.iter().sum::<i64>(),
                    p.d()
                ));
            }
            let graph = match entry_graph(p.g(), entry.i) {
                Ok(g) => g,
                Err(e) => return Some(format!("{} {}: {e}", point_tag(p), entry.label)),
            };
            match is_properly_balanced(&graph, &Multidegree(entry.multidegree.clone())) {
                Ok(check) if check.balanced => {}
                Ok(_) => {
                    return Some(format!(
                        "{} {}: representative multidegree is not balanced",
                        point_tag(p),
                        entry.label
                    ))
                }
                Err(e) => return Some(format!("{} {}: {e}", point_tag(p), entry.label)),
            }
        }
        None
    });
    summarize(
        format!(
            "{} grid points: label counts frozen, representatives balanced",
            points.len()
        ),
        failures,
    )
}

fn is_sorted_subset(sub: &[Multidegree], sup: &[Multidegree]) -> bool {
    let mut it = sup.iter();
    'outer: for s in sub {
        for t in it.by_ref() {
            if t == s {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn crit_enumeration(_grid: &GridSpec) -> Check {
    const COUNT: usize = 200;
    let graphs = random_quasistable_graphs(COUNT, 6, 0x5EED_0001);
    let cases: Vec<(i64, DualGraph)> = graphs
        .into_iter()
        .enumerate()
        .map(|(i, g)| ((i as i64 % 21) - 10, g))
        .collect();
    let failures = sweep(&cases, |(d, graph)| {
        let run = |strict: bool, mode: SubcurveMode| {
            enumerate_balanced_mode(graph, *d, strict, mode).map_err(|e| e.to_string())
        };
        let check = || -> std::result::Result<(), String> {
            let proper = run(false, SubcurveMode::ConnectedBothSides)?;
            let proper_all = run(false, SubcurveMode::All)?;
            if proper != proper_all {
                return Err("connected-both-sides pruning changed the proper set".into());
            }
            let strict = run(true, SubcurveMode::ConnectedBothSides)?;
            let strict_all = run(true, SubcurveMode::All)?;
            if strict != strict_all {
                return Err("connected-both-sides pruning changed the strict set".into());
            }
            if !is_sorted_subset(&strict, &proper) {
                return Err("strict enumeration is not a subset of the proper one".into());
            }
            let sequential =
                enumerate_balanced_sequential(graph, *d, false).map_err(|e| e.to_string())?;
            if sequential != proper {
                return Err("sequential and parallel enumerations disagree".into());
            }
            Ok(())
        };
        check()
            .err()
            .map(|msg| format!("graph {} at d={d}: {msg}", graph.to_json()))
    });
    summarize(
        format!("{COUNT} seeded graphs (max 6 vertices, |d| <= 10) cross-checked"),
        failures,
    )
}

fn crit_dspecial(grid: &GridSpec) -> Check {
    let g_hi = grid.g_hi.min(8);
    let mut cases: Vec<(i64, i64, i64)> = Vec::new();
    for g in grid.g_lo..=g_hi {
        for i in 0..=g {
            for k in 1..=(g + 1 - i) {
                let g2 = g - i - k + 1;
                if g2 < 0 || ((i == 0 || g2 == 0) && k < 3) {
                    continue;
                }
                cases.push((g, i, k));
            }
        }
    }
    let total = cases.len();
    let failures = sweep(&cases, |&(g, i, k)| {
        let tag = format!("vine (g={g}, i={i}, k={k})");
        let graph = match vine_graph(i as u32, (g - i - k + 1) as u32, k as usize) {
            Ok(graph) => graph,
            Err(e) => return Some(format!("{tag}: {e}")),
        };
        for d in 0..=grid.d_hi(g) {
            let gd = GD::new(g, d).expect("grid genus is valid");
            let fast = match is_d_special_vine(gd, i, k) {
                Ok(v) => v,
                Err(e) => return Some(format!("{tag}: {e}")),
            };
            let brute = match is_d_special_graph(&graph, d) {
                Ok(v) => v,
                Err(e) => return Some(format!("{tag}: {e}")),
            };
            if fast != brute {
                return Some(format!(
                    "{tag} at d={d}: divisibility test says {fast}, enumeration says {brute}"
                ));
            }
        }
        None
    });
    summarize(
        format!("{total} stable vine types compared against enumeration"),
        failures,
    )
}

fn rat_coeff(elem: &PicElement, label: Label) -> Rat {
    Rat::from_integer(elem.coeff(label))
}

fn crit_reduce(grid: &GridSpec) -> Check {
    let points = grid.points();
    let failures = sweep(&points, |&p| {
        let tag = point_tag(p);
        let tb = total_boundary(p);
        let all_labels: Vec<Label> = [Label::L10, Label::L01, Label::L11]
            .into_iter()
            .chain(
                boundary_table(p)
                    .labels()
                    .into_iter()
                    .map(Label::Boundary),
            )
            .collect();
        for n in -3..=5 {
            let r = match reduce_lambda(p, n, 0) {
                Ok(r) => r,
                Err(e) => return Some(format!("{tag}: {e}")),
            };
            let want_l10 = 6 * n * n - 6 * n + 1;
            let want_boundary = -(n * (n - 1) / 2);
            let ok = r.coeff(Label::L10) == want_l10
                && r.coeff(Label::L01) == 0
                && r.coeff(Label::L11) == 0
                && all_labels.iter().all(|&l| match l {
                    Label::Boundary(_) => r.coeff(l) == want_boundary * tb.coeff(l),
                    _ => true,
                });
            if !ok {
                return Some(format!("{tag}: power {n} of the Hodge class misreduces"));
            }
        }
        let lam = |n, m| reduce_lambda(p, n, m).expect("small twists");
        let k10 = reduce_k(p, KClass::K10);
        let k01 = reduce_k(p, KClass::K01);
        let km12 = reduce_k(p, KClass::Km12);
        let identities = [
            (
                "K10",
                &k10,
                lam(1, 0).scaled(12).and_then(|v| v.sub(&tb)),
            ),
            ("K01", &k01, lam(1, 1).sub(&lam(0, 1))),
            (
                "K-12",
                &km12,
                lam(1, 0)
                    .scaled(-2)
                    .and_then(|v| v.add(&lam(0, 1)))
                    .and_then(|v| v.add(&lam(1, 1))),
            ),
        ];
        for (name, have, want) in identities {
            match want {
                Ok(w) if *have == w => {}
                Ok(_) => return Some(format!("{tag}: {name} identity fails")),
                Err(e) => return Some(format!("{tag}: {e}")),
            }
        }
        for n in -5..=5 {
            for m in -5..=5 {
                let q = match grr_degree_one(n, m) {
                    Ok(q) => q,
                    Err(e) => return Some(format!("{tag}: {e}")),
                };
                let r = lam(n, m);
                for &label in &all_labels {
                    let substituted = q.coeffs[0] * rat_coeff(&k10, label)
                        + q.coeffs[1] * rat_coeff(&k01, label)
                        + q.coeffs[2] * rat_coeff(&km12, label)
                        + q.coeffs[3] * rat_coeff(&tb, label);
                    if substituted != rat_coeff(&r, label) {
                        return Some(format!(
                            "{tag}: Riemann-Roch substitution at (n={n}, m={m}) disagrees on {label}"
                        ));
                    }
                }
            }
        }
        None
    });
    summarize(
        format!(
            "{} grid points: Hodge powers, K identities, Riemann-Roch substitution",
            points.len()
        ),
        failures,
    )
}

fn crit_res(grid: &GridSpec) -> Check {
    let points = grid.points();
    let failures = sweep(&points, |&p| {
        let tag = point_tag(p);
        let (g, d) = (p.g(), p.d());
        for n in -5..=5 {
            for m in -5..=5 {
                let r = reduce_lambda(p, n, m).expect("small twists");
                let have = match res_weight(p, &r) {
                    Ok(v) => v,
                    Err(e) => return Some(format!("{tag}: {e}")),
                };
                let want = m * (n * (2 * g - 2) + m * d + 1 - g);
                if have != want {
                    return Some(format!(
                        "{tag}: weight of twist (n={n}, m={m}) is {have}, expected {want}"
                    ));
                }
            }
        }
        let single = |label| PicElement::single(Space::Jac, label, 1).expect("jac label");
        let w01 = res_weight(p, &single(Label::L01)).expect("small");
        let w11 = res_weight(p, &single(Label::L11)).expect("small");
        if gcd(w01, w11) != invariants(p).gerbe_order {
            return Some(format!(
                "{tag}: gcd of the two generator weights is {} instead of the gerbe order {}",
                gcd(w01, w11),
                invariants(p).gerbe_order
            ));
        }
        None
    });
    summarize(
        format!(
            "{} grid points: closed-form weights and gerbe-order gcd",
            points.len()
        ),
        failures,
    )
}

fn crit_xi_chi(grid: &GridSpec) -> Check {
    let points = grid.points();
    let failures = sweep(&points, |&p| {
        let tag = point_tag(p);
        let xi = xi_element(p);
        match res_weight(p, &xi) {
            Ok(0) => {}
            Ok(w) => return Some(format!("{tag}: xi has weight {w}")),
            Err(e) => return Some(format!("{tag}: {e}")),
        }
        match membership_j(p, &xi) {
            Ok(Some((0, 1))) => {}
            Ok(other) => return Some(format!("{tag}: xi membership is {other:?}")),
            Err(e) => return Some(format!("{tag}: {e}")),
        }
        let chi = |label| {
            PicElement::single(Space::J, label, 1)
                .and_then(|e| crate::picard::chi_d(p, &e))
                .map_err(|e| e.to_string())
        };
        match chi(Label::Xi) {
            Ok(v) if v == invariants(p).k => {}
            Ok(v) => {
                return Some(format!(
                    "{tag}: chi of xi is {v}, expected k = {}",
                    invariants(p).k
                ))
            }
            Err(e) => return Some(format!("{tag}: {e}")),
        }
        match chi(Label::L10) {
            Ok(0) => {}
            Ok(v) => return Some(format!("{tag}: chi of L10 is {v}")),
            Err(e) => return Some(format!("{tag}: {e}")),
        }
        if p.d() == p.g() - 1 {
            let l01 = PicElement::single(Space::Jac, Label::L01, 1).expect("jac label");
            if xi != l01 {
                return Some(format!("{tag}: degenerate xi should equal L01"));
            }
        }
        None
    });
    summarize(
        format!(
            "{} grid points: weight 0, membership (0, 1), chi values",
            points.len()
        ),
        failures,
    )
}

fn crit_theta(grid: &GridSpec) -> Check {
    for ((g, d), want) in [((3, 0), 1i64), ((4, 1), 3)] {
        let t = theta_relation(GD::new(g, d).map_err(|e| e.to_string())?);
        if !t.verified || t.exponent != want {
            return Err(format!(
                "(g={g}, d={d}): exponent {} (verified: {}), expected {want}",
                t.exponent, t.verified
            ));
        }
    }
    let points = grid.points();
    let failures = sweep(&points, |&p| {
        let tag = point_tag(p);
        let t = theta_relation(p);
        if !t.verified {
            return Some(format!("{tag}: pairing identity fails"));
        }
        let inv = invariants(p);
        let numer = -(inv.k as i128) * ((inv.k + inv.e) as i128) * (inv.e as i128);
        let want = Ratio::<i128>::new(numer, 2);
        if !want.is_integer() || Ratio::from_integer(t.exponent as i128) != want {
            return Some(format!("{tag}: exponent {} is off", t.exponent));
        }
        None
    });
    summarize(
        format!(
            "{} grid points: theta exponent integral and pairing identity exact",
            points.len()
        ),
        failures,
    )
}

fn crit_families(grid: &GridSpec) -> Check {
    let points = grid.points();
    let failures = sweep(&points, |&p| {
        let tag = point_tag(p);
        let statuses = match all_families(p) {
            Ok(s) => s,
            Err(e) => return Some(format!("{tag}: {e}")),
        };
        for status in &statuses {
            let Some(report) = &status.report else {
                continue;
            };
            match is_properly_balanced(&report.graph, &report.multidegree) {
                Ok(check) if check.balanced => {}
                Ok(_) => {
                    return Some(format!(
                        "{tag}: family {} carries an unbalanced fiber",
                        report.family
                    ))
                }
                Err(e) => return Some(format!("{tag}: family {}: {e}", report.family)),
            }
        }
        for h in 1..=(p.g() - 2) / 2 {
            let ints = match fh_integers(p, h) {
                Ok(i) => i,
                Err(e) => return Some(format!("{tag}: {e}")),
            };
            let r1 = match family_fh(p, h, 1) {
                Ok(r) => r,
                Err(e) => return Some(format!("{tag}: {e}")),
            };
            let r2 = match family_fh(p, h, 2) {
                Ok(r) => r,
                Err(e) => return Some(format!("{tag}: {e}")),
            };
            let coincide = r1.same_fiber(&r2);
            let expect_coincide = ints.case == FhCase::A;
            if coincide != expect_coincide || r1.shared != expect_coincide {
                return Some(format!(
                    "{tag}: height {h} variants {} but the tie analysis says case {:?}",
                    if coincide { "coincide" } else { "differ" },
                    ints.case
                ));
            }
        }
        match independence_matrix(p) {
            Ok(m) if m.verdict == "independent" => None,
            Ok(m) => Some(format!("{tag}: unexpected verdict `{}`", m.verdict)),
            Err(e) => Some(format!("{tag}: {e}")),
        }
    });
    summarize(
        format!(
            "{} grid points: fibers balanced, variant coincidence matches the tie rule, certificates found",
            points.len()
        ),
        failures,
    )
}

fn crit_presentations(grid: &GridSpec) -> Check {
    let points = grid.points();
    let failures = sweep(&points, |&p| {
        let tag = point_tag(p);
        let g = p.g();
        let table = boundary_table(p);
        let b = table.count() as i64;
        let gerbe = invariants(p).gerbe_order;
        let expectations = [
            (Space::Jac, 3, gerbe),
            (Space::J, 2, 0),
            (Space::BarJac, 3 + b, gerbe),
            (Space::BarJ, 2 + b, 0),
        ];
        for (space, rank, res_gen) in expectations {
            let pres = presentation(p, space);
            if pres.rank != rank || pres.res_image_generator != res_gen {
                return Some(format!(
                    "{tag}: {space} presentation has rank {} and weight image {}, expected {rank} and {res_gen}",
                    pres.rank, pres.res_image_generator
                ));
            }
            let want_increase = match space {
                Space::BarJac | Space::BarJ => b,
                _ => 0,
            };
            if pres.rank_increase_over_open != want_increase {
                return Some(format!("{tag}: {space} boundary rank increment is off"));
            }
        }
        let report = compare_report(p);
        let ncols = g / 2 + 1;
        // each split column contributes two entries; count it once
        let splits = table
            .entries
            .iter()
            .filter(|e| matches!(e.label, BoundaryLabel::Di1(_)))
            .count() as i64;
        let has_doubled = table
            .entries
            .iter()
            .any(|e| e.label == BoundaryLabel::Dg2);
        let mut want_divisors = vec![1i64; (ncols - 1) as usize];
        want_divisors.push(if has_doubled { 2 } else { 1 });
        let ok = report.rank_cl_bar == g / 2 + 3
            && report.rank_pic_bar == 2 + b
            && report.alpha_consistent
            && report.elementary_divisors == want_divisors
            && report.coker_free_rank == splits
            && report.coker_torsion == if has_doubled { vec![2] } else { vec![] }
            && b == ncols + splits;
        if !ok {
            return Some(format!("{tag}: divisor-lattice comparison is inconsistent"));
        }
        let pic = pic_j0(p);
        let pic_ok = if g == 3 {
            pic.free_rank == 1 && pic.relations == [(Label::L10, 9)] && pic.torsion == [9]
        } else {
            pic.free_rank == 2 && pic.relations.is_empty() && pic.torsion.is_empty()
        };
        if !pic_ok {
            return Some(format!("{tag}: degree-0 Picard shape is wrong"));
        }
        None
    });
    summarize(
        format!(
            "{} grid points: ranks, elementary divisors, cokernel, degree-0 group",
            points.len()
        ),
        failures,
    )
}

fn crit_topo(grid: &GridSpec) -> Check {
    let points = grid.points();
    let failures = sweep(&points, |&p| {
        let tag = point_tag(p);
        let basis_images = [
            (Label::L10, (1, 0, 0)),
            (Label::L11, (0, -1, 0)),
            (Label::L01, (1, 1, 1)),
        ];
        for (label, (l, z, k)) in basis_images {
            let elem = PicElement::single(Space::Jac, label, 1).expect("jac label");
            let t = match topo_class(p, &elem) {
                Ok(t) => t,
                Err(e) => return Some(format!("{tag}: {e}")),
            };
            let ok = t.lambda == Rat::from_integer(l)
                && t.zeta == Rat::from_integer(z)
                && t.kappa_12 == Rat::from_integer(k)
                && t.integral;
            if !ok {
                return Some(format!("{tag}: image of {label} is off"));
            }
        }
        let (p_exp, _, _) = xi_exponents(p);
        let t = match topo_class(p, &xi_element(p)) {
            Ok(t) => t,
            Err(e) => return Some(format!("{tag}: {e}")),
        };
        match t.eta {
            Some(decomp) if decomp.eta == 1 && decomp.lambda == p_exp => {}
            other => {
                return Some(format!(
                    "{tag}: eta decomposition of xi is {other:?}, expected lambda = {p_exp}, eta = 1"
                ))
            }
        }
        if t.lambda != Rat::from_integer(p_exp) {
            return Some(format!("{tag}: lambda part of xi is not the first exponent"));
        }
        None
    });
    summarize(
        format!(
            "{} grid points: basis images and eta decomposition of xi",
            points.len()
        ),
        failures,
    )
}

const BUDGETS_MS: [Option<u64>; 10] = [
    Some(1_000),
    Some(30_000),
    Some(30_000),
    None,
    None,
    None,
    None,
    Some(60_000),
    None,
    None,
];

fn panic_text(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "opaque panic payload".to_string()
    }
}

/// Runs the ten checks over the grid (default: g in 3..=10 with the full
/// degree window; the vine check additionally caps g at 8). Panics in a
/// check are caught and reported as failures.
pub fn run_all(grid: Option<GridSpec>) -> Vec<CriterionResult> {
    run_selected(grid, None)
}

/// Like [`run_all`] but restricted to the 1-based criterion indices in
/// `only` (ignoring out-of-range entries). `None` runs everything.
pub fn run_selected(grid: Option<GridSpec>, only: Option<&[usize]>) -> Vec<CriterionResult> {
    let grid = grid.unwrap_or_default();
    let checks: [(&str, fn(&GridSpec) -> Check); 10] = [
        ("boundary tables", crit_boundary),
        ("balanced enumeration cross-check", crit_enumeration),
        ("vine speciality fast path", crit_dspecial),
        ("determinant-class reduction", crit_reduce),
        ("residual weights", crit_res),
        ("xi membership and chi", crit_xi_chi),
        ("theta multiple", crit_theta),
        ("test families and independence", crit_families),
        ("presentations and scheme comparison", crit_presentations),
        ("topological basis", crit_topo),
    ];
    checks
        .iter()
        .enumerate()
        .filter(|(idx, _)| only.is_none_or(|list| list.contains(&(idx + 1))))
        .map(|(idx, (name, run))| {
            let start = Instant::now();
            let outcome = catch_unwind(AssertUnwindSafe(|| run(&grid)));
            let millis = start.elapsed().as_millis() as u64;
            let (mut passed, mut detail) = match outcome {
                Ok(Ok(detail)) => (true, detail),
                Ok(Err(msg)) => (false, msg),
                Err(payload) => (false, format!("panicked: {}", panic_text(&*payload))),
            };
            if let Some(budget) = BUDGETS_MS[idx] {
                if millis >= budget {
                    passed = false;
                    detail = format!("{detail}; blew the {budget} ms budget ({millis} ms)");
                }
            }
            CriterionResult {
                index: idx + 1,
                name: name.to_string(),
                passed,
                detail,
                millis,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let grid = GridSpec::parse("g=3..8 d=0..max").unwrap();
        assert_eq!(grid, GridSpec::new(3, 8, None).unwrap());
        let grid = GridSpec::parse("g=4..5 d=0..2").unwrap();
        assert_eq!(grid.d_max, Some(2));
        assert_eq!(grid.points().len(), 6);
        assert!(GridSpec::parse("g=2..5").is_err());
        assert!(GridSpec::parse("d=1..4").is_err());
        assert!(GridSpec::parse("q=3..4").is_err());
        assert!(GridSpec::parse("g=3").is_err());
    }

    #[test]
    fn default_grid_points() {
        let points = GridSpec::default().points();
        assert_eq!(points.len(), (3..=10).map(|g| 2 * g - 2).sum::<i64>() as usize);
        assert_eq!(points[0], GD::new(3, 0).unwrap());
    }

    #[test]
    fn small_sweep_passes() {
        let grid = GridSpec::new(3, 4, Some(3)).unwrap();
        let results = run_all(Some(grid));
        assert_eq!(results.len(), 10);
        for r in &results {
            assert!(r.passed, "criterion {} ({}): {}", r.index, r.name, r.detail);
        }
    }
}
