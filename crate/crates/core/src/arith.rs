//! Elementary numeric invariants of a genus/degree pair.
//!
//! Everything downstream keys off two structural integers,
//! `k = (2g-2)/gcd(2g-2, d+g-1)` and `e = (d-g+1)/gcd(d-g+1, 2g-2)`,
//! together with the gerbe order `gcd(d+1-g, 2g-2)`. All gcds use the
//! convention `gcd(0, n) = |n|`; `gcd(0, 0)` is unreachable because
//! `2g-2 >= 4`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest genus and absolute degree accepted. Keeps every downstream
/// product (degree times dualizing weight, theta exponents, reduction
/// coefficients) comfortably inside `i64`.
pub const MAX_GENUS: i64 = 1_000_000;
pub const MAX_DEGREE: i64 = 1_000_000;

pub fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// A genus/degree pair with `g >= 3`.
///
/// Genus 2 is rejected: the free presentations computed here require
/// `g >= 3`, and the torsion phenomena special to genus 2 are out of scope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GD {
    g: i64,
    d: i64,
}

impl GD {
    pub fn new(g: i64, d: i64) -> Result<Self> {
        if g < 3 {
            return Err(Error::Domain(format!(
                "genus must be at least 3, got {g}"
            )));
        }
        if g > MAX_GENUS || d.abs() > MAX_DEGREE {
            return Err(Error::Domain(format!(
                "(g, d) = ({g}, {d}) outside the supported range (g <= {MAX_GENUS}, |d| <= {MAX_DEGREE})"
            )));
        }
        Ok(GD { g, d })
    }

    pub fn g(self) -> i64 {
        self.g
    }

    pub fn d(self) -> i64 {
        self.d
    }

    pub fn twog2(self) -> i64 {
        2 * self.g - 2
    }

    /// The same genus with a different degree.
    pub fn with_d(self, d: i64) -> Result<Self> {
        GD::new(self.g, d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub twog2: i64,
    #[serde(rename = "G1")]
    pub g1: i64,
    pub k: i64,
    pub e: i64,
    pub gerbe_order: i64,
}

/// Computes the structural integers of `(g, d)`.
///
/// `g1 = gcd(2g-2, d+g-1)` and the gerbe order `gcd(d+1-g, 2g-2)` coincide
/// (their arguments differ by the even number `2g-2` and by sign), but the
/// two are computed independently and cross-checked.
pub fn invariants(gd: GD) -> Invariants {
    let (g, d) = (gd.g(), gd.d());
    let twog2 = 2 * g - 2;
    let g1 = gcd(twog2, d + g - 1);
    let k = twog2 / g1;
    let e = (d - g + 1) / gcd(d - g + 1, twog2);
    let gerbe_order = gcd(d + 1 - g, twog2);
    debug_assert_eq!(gerbe_order, g1);
    debug_assert_eq!(k * g1, twog2);
    Invariants {
        twog2,
        g1,
        k,
        e,
        gerbe_order,
    }
}

/// Whether an m-fold Poincare bundle exists, i.e. whether the gerbe order
/// divides `m`.
pub fn poincare_exists(gd: GD, m: i64) -> Result<bool> {
    if m < 1 {
        return Err(Error::Domain(format!("multiplier must be positive, got {m}")));
    }
    Ok(m % invariants(gd).gerbe_order == 0)
}

/// Writes `d = d0 + n(2g-2)` with `d0` in `[0, 2g-3]`.
///
/// Twisting by the n-th power of the relative dualizing sheaf identifies the
/// degree-d and degree-d0 pictures, so `k` is invariant under this shift.
pub fn normalize_degree(gd: GD) -> (i64, i64) {
    let t = gd.twog2();
    let d0 = gd.d().rem_euclid(t);
    let n = (gd.d() - d0) / t;
    (d0, n)
}
