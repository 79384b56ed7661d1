//! Comparison of the compactified stack with the associated moduli
//! scheme: the boundary map between the two divisor lattices, its
//! cokernel via Smith normal form, and the degree-0 Picard group with
//! the genus-3 torsion caveat.

use serde::Serialize;

use crate::arith::GD;
use crate::error::{Error, Result};
use crate::picard::{
    boundary_table, pullback_boundary, BoundaryLabel, Label, PicElement, Space,
};

/// Image of the index-i divisor class of the moduli scheme in the
/// rigidified Picard group: same coefficients as the stack pullback.
pub fn alpha_d(gd: GD, i: i64) -> Result<PicElement> {
    let pb = pullback_boundary(gd, i)?;
    PicElement::from_coeffs(Space::BarJ, pb.coeffs().iter().map(|(&l, &c)| (l, c)))
}

/// Elementary divisors of an integer matrix, in divisibility order.
/// Row/column operations run over i128; panics if a divisor leaves i64
/// (impossible for the small boundary matrices this crate builds).
pub fn smith_normal_form(rows: &[Vec<i64>]) -> Vec<i64> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    assert!(
        rows.iter().all(|r| r.len() == ncols),
        "ragged matrix passed to smith_normal_form"
    );
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut divisors = Vec::new();
    let mut t = 0;
    'outer: while t < nrows && t < ncols {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for r in t..nrows {
                for c in t..ncols {
                    if m[r][c] != 0
                        && pivot.is_none_or(|(pr, pc)| m[r][c].abs() < m[pr][pc].abs())
                    {
                        pivot = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = pivot else { break 'outer };
            m.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }
            let p = m[t][t];
            let mut dirty = false;
            for r in t + 1..nrows {
                let q = m[r][t].div_euclid(p);
                if q != 0 {
                    for c in t..ncols {
                        m[r][c] -= q * m[t][c];
                    }
                }
                dirty |= m[r][t] != 0;
            }
            for c in t + 1..ncols {
                let q = m[t][c].div_euclid(p);
                if q != 0 {
                    for r in t..nrows {
                        m[r][c] -= q * m[r][t];
                    }
                }
                dirty |= m[t][c] != 0;
            }
            if dirty {
                continue;
            }
            // enforce divisibility of the remaining block: fold an
            // offending row into row t and redo this corner
            let mut offender = None;
            'scan: for r in t + 1..nrows {
                for c in t + 1..ncols {
                    if m[r][c] % p != 0 {
                        offender = Some(r);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(r) => {
                    for c in t..ncols {
                        let add = m[r][c];
                        m[t][c] += add;
                    }
                }
                None => {
                    divisors.push(i64::try_from(p.abs()).expect("divisor fits i64"));
                    t += 1;
                    break;
                }
            }
        }
    }
    divisors
}

/// Cokernel contribution of one boundary index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnReport {
    pub i: i64,
    pub kind: String,
    pub coker: String,
}

/// Rank bookkeeping of the divisor-lattice comparison and the cokernel
/// of the boundary map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub g: i64,
    pub d: i64,
    pub rank_cl_bar: i64,
    pub rank_pic_bar: i64,
    pub boundary_count: i64,
    pub alpha_consistent: bool,
    pub elementary_divisors: Vec<i64>,
    pub coker_free_rank: i64,
    pub coker_torsion: Vec<i64>,
    pub columns: Vec<ColumnReport>,
}

/// Sets up the boundary map as an integer matrix (rows indexed by the
/// stack's boundary labels, columns by the scheme's divisor indices),
/// reduces it, and reports the cokernel: one free summand per split
/// column and a 2-torsion summand exactly when the doubled divisor is
/// present.
pub fn compare_report(gd: GD) -> CompareReport {
    let (g, d) = (gd.g(), gd.d());
    let table = boundary_table(gd);
    let labels = table.labels();
    let b = labels.len() as i64;
    let ncols = (g / 2 + 1) as usize;
    let mut matrix = vec![vec![0i64; ncols]; labels.len()];
    let mut alpha_consistent = true;
    let mut columns = Vec::with_capacity(ncols);
    for i in 0..=g / 2 {
        let image = alpha_d(gd, i).expect("index in range");
        let pb = pullback_boundary(gd, i).expect("index in range");
        alpha_consistent &= image.coeffs() == pb.coeffs();
        for (&label, &coeff) in image.coeffs() {
            let Label::Boundary(bl) = label else {
                unreachable!("boundary images only touch boundary labels")
            };
            let row = labels
                .iter()
                .position(|l| *l == bl)
                .expect("image labels come from the table");
            matrix[row][i as usize] = coeff;
        }
        let (kind, coker) = match table.entries.iter().find(|e| e.i == i) {
            Some(e) if e.label == BoundaryLabel::Dg2 => ("doubled", "Z/2"),
            Some(e) if e.split => ("split", "Z"),
            _ => ("unsplit", "0"),
        };
        columns.push(ColumnReport {
            i,
            kind: kind.to_string(),
            coker: coker.to_string(),
        });
    }
    let elementary_divisors = smith_normal_form(&matrix);
    let coker_free_rank = b - elementary_divisors.len() as i64;
    let coker_torsion: Vec<i64> = elementary_divisors
        .iter()
        .copied()
        .filter(|&v| v > 1)
        .collect();
    CompareReport {
        g,
        d,
        rank_cl_bar: g / 2 + 3,
        rank_pic_bar: 2 + b,
        boundary_count: b,
        alpha_consistent,
        elementary_divisors,
        coker_free_rank,
        coker_torsion,
        columns,
    }
}

/// Presentation of the degree-0 Picard group of the rigidified stack.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PicJ0 {
    pub generators: Vec<Label>,
    pub relations: Vec<(Label, i64)>,
    pub free_rank: i64,
    pub torsion: Vec<i64>,
}

/// Free of rank 2 for g >= 4; at g = 3 the first generator acquires the
/// order-9 relation, leaving Z/9 + Z.
pub fn pic_j0(gd: GD) -> PicJ0 {
    let generators = vec![Label::L10, Label::Xi];
    if gd.g() == 3 {
        PicJ0 {
            generators,
            relations: vec![(Label::L10, 9)],
            free_rank: 1,
            torsion: vec![9],
        }
    } else {
        PicJ0 {
            generators,
            relations: Vec::new(),
            free_rank: 2,
            torsion: Vec::new(),
        }
    }
}

/// Convenience check used by the sweep driver.
pub fn expect_in_range(gd: GD, i: i64) -> Result<()> {
    if i < 0 || 2 * i > gd.g() {
        return Err(Error::Range(format!("index {i} out of range")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gd(g: i64, d: i64) -> GD {
        GD::new(g, d).unwrap()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(smith_normal_form(&[vec![2, 4], vec![6, 8]]), [2, 4]);
        assert_eq!(
            smith_normal_form(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            [1, 1, 1]
        );
        assert_eq!(smith_normal_form(&[vec![2, 0], vec![0, 3]]), [1, 6]);
        assert_eq!(smith_normal_form(&[vec![1, 1]]), [1]);
        assert_eq!(smith_normal_form(&[vec![0, 0], vec![0, 0]]), [0i64; 0]);
        assert_eq!(smith_normal_form(&[vec![-4]]), [4]);
    }

    #[test]
    fn alpha_matches_pullback() {
        for (g, d) in [(3, 1), (3, 2), (4, 3), (5, 0), (6, 5)] {
            let p = gd(g, d);
            for i in 0..=g / 2 {
                let a = alpha_d(p, i).unwrap();
                let pb = pullback_boundary(p, i).unwrap();
                assert_eq!(a.coeffs(), pb.coeffs());
                assert_eq!(a.space(), Space::BarJ);
            }
        }
        assert!(alpha_d(gd(3, 1), 2).is_err());
    }

    #[test]
    fn compare_examples() {
        let r = compare_report(gd(3, 2));
        assert_eq!(r.rank_cl_bar, 4);
        assert_eq!(r.rank_pic_bar, 5);
        assert_eq!(r.elementary_divisors, [1, 1]);
        assert_eq!(r.coker_free_rank, 1);
        assert!(r.coker_torsion.is_empty());
        assert!(r.alpha_consistent);
        assert_eq!(r.columns[1].kind, "split");

        let r = compare_report(gd(3, 1));
        assert_eq!(r.coker_free_rank, 0);
        assert!(r.coker_torsion.is_empty());

        let r = compare_report(gd(4, 3));
        assert_eq!(r.elementary_divisors, [1, 1, 2]);
        assert_eq!(r.coker_free_rank, 1);
        assert_eq!(r.coker_torsion, [2]);
        assert_eq!(r.columns[2].coker, "Z/2");
    }

    #[test]
    fn pic_j0_examples() {
        let p = pic_j0(gd(5, 2));
        assert_eq!(p.free_rank, 2);
        assert!(p.relations.is_empty());

        let p = pic_j0(gd(3, 2));
        assert_eq!(p.free_rank, 1);
        assert_eq!(p.relations, [(Label::L10, 9)]);
        assert_eq!(p.torsion, [9]);
        assert_eq!(p, pic_j0(gd(3, 1)));
    }
}
